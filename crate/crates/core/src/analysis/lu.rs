use rand::Rng;

use crate::curvature::contract_hbhb;
use crate::tangent::C64;
use crate::tensor::Tensor4;

use super::{random_complex, Check, Sign};

/// Largest deviation of `A` from `A_{ab-bar mn-bar} = A_{mb-bar an-bar} = A_{an-bar mb-bar}`
/// and `A_{ab-bar mn-bar} = conj A_{ba-bar nm-bar}`.
pub fn lu_symmetry_check(a: &Tensor4<C64>, tol: f64) -> Check {
    let residual = a
        .indexed()
        .map(|((i, j, k, l), x)| {
            (x - a[(k, j, i, l)])
                .norm()
                .max((x - a[(i, l, k, j)]).norm())
                .max((x - a[(j, i, l, k)].conj()).norm())
        })
        .fold(0.0, f64::max);
    Check::new(residual, tol)
}

/// The quadratic form `A_{ab-bar mn-bar} T^{ab} conj(T^{nm})` with
/// `T^{ab} = xi^a conj(eta^b) - eta^a conj(xi^b)`.
pub fn lu_quadratic_form(a: &Tensor4<C64>, xi: &[C64], eta: &[C64]) -> C64 {
    let t = |i: usize, j: usize| xi[i] * eta[j].conj() - eta[i] * xi[j].conj();
    a.indexed()
        .map(|((i, j, k, l), x)| x * t(i, j) * t(l, k).conj())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LuStatus {
    Holds,
    Violated,
    /// A hypothesis failed, so the conclusion is not tested.
    Inapplicable,
}

impl LuStatus {
    pub fn name(self) -> &'static str {
        match self {
            LuStatus::Holds => "holds",
            LuStatus::Violated => "violated",
            LuStatus::Inapplicable => "inapplicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LuReport {
    pub sign: Sign,
    pub samples: usize,
    pub symmetry: Check,
    /// Most adverse value of the quadratic form, with sign flipped for the
    /// nonpositive case so that negative always means a failed hypothesis.
    pub hypothesis_worst: f64,
    pub hypothesis_holds: bool,
    /// Smallest `A(xi,xi,xi,xi) A(eta,eta,eta,eta) - |A(xi,xi,eta,eta)|^2` over unit pairs.
    pub worst_margin: f64,
    pub violations: usize,
    pub status: LuStatus,
}

/// Relative slack for the sign and inequality tests.
const ROUNDOFF: f64 = 1e-12;

fn unit(mut v: Vec<C64>) -> Vec<C64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// Samples `samples` unit pairs `(xi, eta)`, checks the sign hypothesis on
/// each, and then the Cauchy-Schwarz-type conclusion.
pub fn lu_inequality_check<R: Rng + ?Sized>(
    a: &Tensor4<C64>,
    samples: usize,
    sign: Sign,
    sym_tol: f64,
    rng: &mut R,
) -> LuReport {
    let n = a.dim();
    let symmetry = lu_symmetry_check(a, sym_tol);
    let scale = a.max_abs().max(1.0);
    let s = match sign {
        Sign::Nonneg => 1.0,
        Sign::Nonpos => -1.0,
    };
    let mut hypothesis_worst = f64::INFINITY;
    let mut worst_margin = f64::INFINITY;
    let mut violations = 0;
    let pairs: Vec<(Vec<C64>, Vec<C64>)> = (0..samples)
        .map(|_| (unit(random_complex(rng, n)), unit(random_complex(rng, n))))
        .collect();
    for (xi, eta) in &pairs {
        hypothesis_worst = hypothesis_worst.min(s * lu_quadratic_form(a, xi, eta).re);
    }
    let hypothesis_holds = hypothesis_worst >= -ROUNDOFF * scale;
    for (xi, eta) in &pairs {
        let axx = contract_hbhb(a, xi, xi, xi, xi).re;
        let aee = contract_hbhb(a, eta, eta, eta, eta).re;
        let axe = contract_hbhb(a, xi, xi, eta, eta).norm_sqr();
        let margin = axx * aee - axe;
        worst_margin = worst_margin.min(margin);
        if margin < -ROUNDOFF * (axx * aee).abs().max(axe).max(1.0) {
            violations += 1;
        }
    }
    let status = if !symmetry.holds || !hypothesis_holds {
        LuStatus::Inapplicable
    } else if violations > 0 {
        LuStatus::Violated
    } else {
        LuStatus::Holds
    };
    LuReport {
        sign,
        samples,
        symmetry,
        hypothesis_worst: if samples == 0 { 0.0 } else { hypothesis_worst },
        hypothesis_holds,
        worst_margin: if samples == 0 { 0.0 } else { worst_margin },
        violations,
        status,
    }
}
