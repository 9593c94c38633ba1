use super::{BinOp, Expr, Func};

fn as_num(e: &Expr) -> Option<f64> {
    match e {
        Expr::Num(v) => Some(*v),
        _ => None,
    }
}

fn add(l: Expr, r: Expr) -> Expr {
    match (as_num(&l), as_num(&r)) {
        (Some(a), Some(b)) => Expr::Num(a + b),
        (Some(0.0), _) => r,
        (_, Some(0.0)) => l,
        _ => Expr::binary(BinOp::Add, l, r),
    }
}

fn sub(l: Expr, r: Expr) -> Expr {
    match (as_num(&l), as_num(&r)) {
        (Some(a), Some(b)) => Expr::Num(a - b),
        (Some(0.0), _) => neg(r),
        (_, Some(0.0)) => l,
        _ => Expr::binary(BinOp::Sub, l, r),
    }
}

fn mul(l: Expr, r: Expr) -> Expr {
    match (as_num(&l), as_num(&r)) {
        (Some(a), Some(b)) => Expr::Num(a * b),
        (Some(0.0), _) | (_, Some(0.0)) => Expr::Num(0.0),
        (Some(1.0), _) => r,
        (_, Some(1.0)) => l,
        _ => Expr::binary(BinOp::Mul, l, r),
    }
}

fn div(l: Expr, r: Expr) -> Expr {
    match (as_num(&l), as_num(&r)) {
        (Some(a), Some(b)) if b != 0.0 => Expr::Num(a / b),
        (Some(0.0), _) => Expr::Num(0.0),
        (_, Some(1.0)) => l,
        _ => Expr::binary(BinOp::Div, l, r),
    }
}

fn pow(base: Expr, exponent: Expr) -> Expr {
    match as_num(&exponent) {
        Some(0.0) => Expr::Num(1.0),
        Some(1.0) => base,
        _ => Expr::binary(BinOp::Pow, base, exponent),
    }
}

fn neg(e: Expr) -> Expr {
    match e {
        Expr::Num(v) => Expr::Num(-v),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

/// `c - 1` for a constant exponent, folded when `c` is a literal.
fn minus_one(c: &Expr) -> Expr {
    sub(c.clone(), Expr::Num(1.0))
}

pub(super) fn differentiate(e: &Expr) -> Expr {
    match e {
        Expr::Num(_) | Expr::Const(_) => Expr::Num(0.0),
        Expr::X => Expr::Num(1.0),
        Expr::Neg(u) => neg(differentiate(u)),
        Expr::Binary(op, u, v) => {
            let (u, v) = (u.as_ref(), v.as_ref());
            match op {
                BinOp::Add => add(differentiate(u), differentiate(v)),
                BinOp::Sub => sub(differentiate(u), differentiate(v)),
                BinOp::Mul => add(
                    mul(differentiate(u), v.clone()),
                    mul(u.clone(), differentiate(v)),
                ),
                BinOp::Div => div(
                    sub(
                        mul(differentiate(u), v.clone()),
                        mul(u.clone(), differentiate(v)),
                    ),
                    pow(v.clone(), Expr::Num(2.0)),
                ),
                BinOp::Pow if v.is_constant() => mul(
                    mul(v.clone(), pow(u.clone(), minus_one(v))),
                    differentiate(u),
                ),
                // u^v = exp(v ln u), so (u^v)' = u^v (v ln u)'.
                BinOp::Pow => {
                    let log_form = mul(v.clone(), Expr::call(Func::Ln, u.clone()));
                    mul(e.clone(), differentiate(&log_form))
                }
            }
        }
        Expr::Call(f, u) => {
            let inner = differentiate(u);
            let u = u.as_ref().clone();
            let outer = match f {
                Func::Sin => Expr::call(Func::Cos, u),
                Func::Cos => neg(Expr::call(Func::Sin, u)),
                Func::Tan => div(
                    Expr::Num(1.0),
                    pow(Expr::call(Func::Cos, u), Expr::Num(2.0)),
                ),
                Func::Exp => Expr::call(Func::Exp, u),
                Func::Ln => div(Expr::Num(1.0), u),
                Func::Sqrt => div(Expr::Num(0.5), Expr::call(Func::Sqrt, u)),
                // sign(u), undefined (division by zero) at u = 0.
                Func::Abs => div(u.clone(), Expr::call(Func::Abs, u)),
            };
            mul(outer, inner)
        }
    }
}
