//! Shared helpers for the integration tests.
#![allow(dead_code)]

use hermicurv::dsl::{Expr, Func, Var, Wirtinger};
use hermicurv::tangent::{RealTangentVector, C64};
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_vector<R: Rng>(rng: &mut R, m: usize) -> RealTangentVector {
    RealTangentVector::new((0..m).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Vec<C64> {
    (0..n)
        .map(|_| {
            c(
                rng.gen_range(-radius..radius),
                rng.gen_range(-radius..radius),
            )
        })
        .collect()
}

fn var<R: Rng>(rng: &mut R, n: usize) -> Expr {
    let k = rng.gen_range(0..n);
    Expr::Var(if rng.gen_bool(0.5) {
        Var::z(k)
    } else {
        Var::zb(k)
    })
}

/// `a + |z^k|^2` with `a` in `[1, 3)`: positive on the whole chart, so it is
/// safe under division, `log` and `sqrt`.
fn positive<R: Rng>(rng: &mut R, n: usize) -> Expr {
    let k = rng.gen_range(0..n);
    let a = (rng.gen_range(1.0..3.0) * 8.0f64).round() / 8.0;
    Expr::Add(
        Box::new(Expr::real(a)),
        Box::new(Expr::Mul(
            Box::new(Expr::Var(Var::z(k))),
            Box::new(Expr::Var(Var::zb(k))),
        )),
    )
}

/// A random expression in `n` complex variables that is smooth on the
/// chart: quotients, logarithms and roots only see positive arguments.
pub fn random_expr<R: Rng>(rng: &mut R, n: usize, depth: usize) -> Expr {
    if depth == 0 {
        return match rng.gen_range(0..3) {
            0 => Expr::Const(c((rng.gen_range(-2.0..2.0) * 4.0f64).round() / 4.0, 0.0)),
            _ => var(rng, n),
        };
    }
    let sub = |rng: &mut R| Box::new(random_expr(rng, n, depth - 1));
    match rng.gen_range(0..9) {
        0 | 1 => Expr::Add(sub(rng), sub(rng)),
        2 => Expr::Sub(sub(rng), sub(rng)),
        3 | 4 => Expr::Mul(sub(rng), sub(rng)),
        5 => Expr::Div(sub(rng), Box::new(positive(rng, n))),
        6 => Expr::Pow(sub(rng), rng.gen_range(2..4)),
        7 => {
            let scaled = Expr::Mul(Box::new(Expr::real(0.25)), sub(rng));
            Expr::Call(Func::Exp, Box::new(scaled))
        }
        _ => {
            let f = if rng.gen_bool(0.5) {
                Func::Log
            } else {
                Func::Sqrt
            };
            Expr::Call(f, Box::new(positive(rng, n)))
        }
    }
}

/// Wirtinger derivative by central differences in the real coordinates.
pub fn fd_wirtinger(e: &Expr, z: &[C64], w: Wirtinger, h: f64) -> C64 {
    let (k, sign) = match w {
        Wirtinger::Holo(k) => (k, -1.0),
        Wirtinger::Anti(k) => (k, 1.0),
    };
    let at = |d: C64| {
        let mut p = z.to_vec();
        p[k] += d;
        e.eval(&p).unwrap()
    };
    let dx = (at(c(h, 0.0)) - at(c(-h, 0.0))) / (2.0 * h);
    let dy = (at(c(0.0, h)) - at(c(0.0, -h))) / (2.0 * h);
    (dx + c(0.0, sign) * dy) * 0.5
}
