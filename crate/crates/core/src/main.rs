use std::io;

fn main() {
    let code = chebsl::cli::run_args(
        std::env::args_os(),
        &mut io::stdout().lock(),
        &mut io::stderr(),
    );
    std::process::exit(code);
}
