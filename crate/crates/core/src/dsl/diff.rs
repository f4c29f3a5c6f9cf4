//! Exact Wirtinger differentiation with light constant folding.

use num_complex::Complex64;

use super::ast::{Expr, Func, Var};

/// A first-order Wirtinger operator: `d/dz^k` or `d/dzb^k` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Wirtinger {
    Holo(usize),
    Anti(usize),
}

impl Wirtinger {
    fn hits(self, v: Var) -> bool {
        match self {
            Wirtinger::Holo(k) => !v.conj && v.index == k,
            Wirtinger::Anti(k) => v.conj && v.index == k,
        }
    }
}

fn fold(c: Complex64) -> Option<Expr> {
    (c.re.is_finite() && c.im.is_finite()).then_some(Expr::Const(c))
}

pub(crate) fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

pub(crate) fn add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (a, b) if a.is_zero() => b,
        (a, b) if b.is_zero() => a,
        (Expr::Const(x), Expr::Const(y)) if fold(x + y).is_some() => Expr::Const(x + y),
        (a, b) => Expr::Add(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn sub(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (a, b) if b.is_zero() => a,
        (a, b) if a.is_zero() => neg(b),
        (Expr::Const(x), Expr::Const(y)) if fold(x - y).is_some() => Expr::Const(x - y),
        (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (a, _) if a.is_zero() => Expr::zero(),
        (_, b) if b.is_zero() => Expr::zero(),
        (a, b) if a.is_one() => b,
        (a, b) if b.is_one() => a,
        (Expr::Const(x), Expr::Const(y)) if fold(x * y).is_some() => Expr::Const(x * y),
        (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn div(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (a, _) if a.is_zero() => Expr::zero(),
        (a, b) if b.is_one() => a,
        (Expr::Const(x), Expr::Const(y)) if y.norm_sqr() > 0.0 && fold(x / y).is_some() => {
            Expr::Const(x / y)
        }
        (a, b) => Expr::Div(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn pow(a: Expr, k: i32) -> Expr {
    debug_assert!(k != 0);
    match a {
        a if k == 1 => a,
        Expr::Const(c) if c.norm_sqr() > 0.0 && fold(c.powi(k)).is_some() => Expr::Const(c.powi(k)),
        a => Expr::Pow(Box::new(a), k),
    }
}

impl Expr {
    /// Exact derivative. `z^k` and `zb^k` are independent variables.
    pub fn derivative(&self, w: Wirtinger) -> Expr {
        match self {
            Expr::Const(_) => Expr::zero(),
            Expr::Var(v) => {
                if w.hits(*v) {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Expr::Neg(a) => neg(a.derivative(w)),
            Expr::Add(a, b) => add(a.derivative(w), b.derivative(w)),
            Expr::Sub(a, b) => sub(a.derivative(w), b.derivative(w)),
            Expr::Mul(a, b) => add(
                mul(a.derivative(w), (**b).clone()),
                mul((**a).clone(), b.derivative(w)),
            ),
            Expr::Div(a, b) => {
                let (da, db) = (a.derivative(w), b.derivative(w));
                if db.is_zero() {
                    return div(da, (**b).clone());
                }
                div(
                    sub(mul(da, (**b).clone()), mul((**a).clone(), db)),
                    pow((**b).clone(), 2),
                )
            }
            Expr::Pow(a, k) => {
                let da = a.derivative(w);
                if da.is_zero() {
                    return Expr::zero();
                }
                let outer = if *k == 1 {
                    Expr::one()
                } else {
                    mul(Expr::real(*k as f64), pow((**a).clone(), k - 1))
                };
                mul(outer, da)
            }
            Expr::Call(f, a) => {
                let da = a.derivative(w);
                if da.is_zero() {
                    return Expr::zero();
                }
                match f {
                    Func::Exp => mul(self.clone(), da),
                    Func::Log => div(da, (**a).clone()),
                    Func::Sqrt => div(da, mul(Expr::real(2.0), self.clone())),
                }
            }
        }
    }
}
