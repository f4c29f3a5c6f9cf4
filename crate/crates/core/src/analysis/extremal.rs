use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use crate::curvature::PointCurvature;
use crate::sectional::Plane;
use crate::tangent::{apply_j, to_holomorphic, HoloTangentVector, RealTangentVector, C64};

use super::classify::PointClassification;
use super::lu::lu_quadratic_form;
use super::search::{refine, Refined};
use super::{random_complex, random_reals, real_vector, stream_rng, Mode, SignSample};

pub const DEFAULT_RESTARTS: usize = 64;

/// Number of random inputs used to test a sign hypothesis.
pub const SIGN_SAMPLES: usize = 1000;

const SIGN_STREAM: u64 = 0;
const PAIR_STREAM: u64 = 1 << 32;
const HOLO_STREAM: u64 = 2 << 32;

/// Slack on sign tests, relative to the largest sampled magnitude.
const SIGN_ROUNDOFF: f64 = 1e-10;

/// Outcome of the search for the extreme sectional curvature at a point.
#[derive(Debug, Clone)]
pub struct ExtremalResult {
    pub mode: Mode,
    pub best_value: f64,
    /// A `g`-orthonormal pair spanning the best plane found.
    pub best_plane: Plane,
    /// Extremum of `K(y, Jy)` over unit `y`.
    pub holo_best_value: f64,
    pub holo_best_direction: RealTangentVector,
    pub restarts: usize,
    pub converged: bool,
    /// `best_value - holo_best_value` when maximizing and the reverse when
    /// minimizing, so a positive gap means a general plane beat every
    /// holomorphic one.
    pub gap: f64,
    pub curvature_sign: SignSample,
    pub g_kahler_like_residual: f64,
    /// Whether the sampled data satisfy the conditions under which the
    /// holomorphic extremum is expected to win.
    pub hypotheses_hold: bool,
    pub seed: u64,
}

/// Outcome of the search for the extreme holomorphic bisectional curvature.
#[derive(Debug, Clone)]
pub struct BisectionalExtremum {
    pub mode: Mode,
    pub best_value: f64,
    pub best_xi: HoloTangentVector,
    pub best_eta: HoloTangentVector,
    /// `|h(xi, eta)|` for the unit-normalized best pair; 1 means parallel.
    pub alignment: f64,
    /// Extremum of `H(zeta)` over unit `zeta`.
    pub holo_best_value: f64,
    pub holo_best_direction: HoloTangentVector,
    pub restarts: usize,
    pub converged: bool,
    pub gap: f64,
    /// Range of the Chern wedge contraction over sampled pairs.
    pub chern_sign: SignSample,
    pub kahler_like_residual: f64,
    pub hypotheses_hold: bool,
    pub seed: u64,
}

fn quad(g: &DMatrix<f64>, u: &[f64], v: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..u.len() {
        let mut t = 0.0;
        for j in 0..v.len() {
            t += g[(i, j)] * v[j];
        }
        s += u[i] * t;
    }
    s
}

fn normalize(g: &DMatrix<f64>, x: &mut [f64]) -> bool {
    let n2 = quad(g, x, x);
    if !(n2 > 0.0) || !n2.is_finite() {
        return false;
    }
    let s = n2.sqrt();
    x.iter_mut().for_each(|v| *v /= s);
    true
}

/// `g`-Gram-Schmidt on the halves of `x = [u, v]`.
pub(crate) fn orthonormalize(g: &DMatrix<f64>, x: &mut [f64]) -> bool {
    let m = x.len() / 2;
    let (u, v) = x.split_at_mut(m);
    if !normalize(g, u) {
        return false;
    }
    let c = quad(g, u, v);
    v.iter_mut()
        .zip(u.iter())
        .for_each(|(vi, ui)| *vi -= c * ui);
    normalize(g, v) && {
        // second pass keeps the constraint drift at roundoff level
        let c = quad(g, u, v);
        v.iter_mut()
            .zip(u.iter())
            .for_each(|(vi, ui)| *vi -= c * ui);
        normalize(g, v)
    }
}

/// Keeps the first candidate among values tied within the tie tolerance.
fn pick_best(mode: Mode, runs: Vec<Refined>) -> Refined {
    let mut iter = runs.into_iter();
    let mut best = iter.next().expect("at least one restart");
    for r in iter {
        if r.value.is_finite() && (!best.value.is_finite() || mode.improves(r.value, best.value)) {
            best = r;
        }
    }
    best
}

fn multistart(
    mode: Mode,
    restarts: usize,
    seed: u64,
    stream: u64,
    dim: usize,
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    retract: &(dyn Fn(&mut [f64]) -> bool + Sync),
) -> Refined {
    let runs: Vec<Refined> = (0..restarts.max(1) as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, stream + r);
            let mut x0 = random_reals(&mut rng, dim);
            while !retract(&mut x0) {
                x0 = random_reals(&mut rng, dim);
            }
            refine(x0, mode.sense(), f, retract)
        })
        .collect();
    pick_best(mode, runs)
}

fn sign_tolerance(s: &SignSample) -> f64 {
    SIGN_ROUNDOFF * s.min.abs().max(s.max.abs()).max(1.0)
}

/// Searches the `g`-orthonormal pairs at the point for the extreme
/// sectional curvature, and separately the holomorphic planes `(y, Jy)`.
pub fn extremal_sectional(
    pc: &PointCurvature,
    mode: Mode,
    restarts: usize,
    seed: u64,
    tol: f64,
) -> ExtremalResult {
    let m = 2 * pc.dim();
    let g = &pc.rjet.g;
    let rc = &pc.real;
    let sectional = |u: &[f64], v: &[f64]| -> f64 {
        let (guu, gvv, guv) = (quad(g, u, u), quad(g, v, v), quad(g, u, v));
        let area = guu * gvv - guv * guv;
        if !(area > 1e-12 * guu * gvv) {
            return f64::NAN;
        }
        rc.contract(u, v, v, u) / area
    };
    let plane_objective = |x: &[f64]| sectional(&x[..m], &x[m..]);
    let holo_objective = |y: &[f64]| sectional(y, apply_j(&real_vector(y)).comps());

    let best = multistart(
        mode,
        restarts,
        seed,
        PAIR_STREAM,
        2 * m,
        &plane_objective,
        &|x| orthonormalize(g, x),
    );
    let holo = multistart(
        mode,
        restarts,
        seed,
        HOLO_STREAM,
        m,
        &holo_objective,
        &|x| normalize(g, x),
    );

    let mut rng = stream_rng(seed, SIGN_STREAM);
    let curvature_sign = SignSample::from_values((0..SIGN_SAMPLES).filter_map(|_| {
        let v = plane_objective(&random_reals(&mut rng, 2 * m));
        v.is_finite().then_some(v)
    }));
    let g_kahler_like_residual = PointClassification::of(pc).g_kahler_like;
    let hypotheses_hold = g_kahler_like_residual < tol
        && curvature_sign.satisfies(mode.required_sign(), sign_tolerance(&curvature_sign));
    ExtremalResult {
        mode,
        best_value: best.value,
        best_plane: Plane {
            u: real_vector(&best.x[..m]),
            v: real_vector(&best.x[m..]),
        },
        holo_best_value: holo.value,
        holo_best_direction: real_vector(&holo.x),
        restarts,
        converged: best.converged && holo.converged,
        gap: mode.sense() * (best.value - holo.value),
        curvature_sign,
        g_kahler_like_residual,
        hypotheses_hold,
        seed,
    }
}

/// Searches unit pairs `(xi, eta)` for the extreme bisectional curvature and
/// unit `zeta` for the extreme holomorphic sectional curvature.
pub fn extremal_bisectional(
    pc: &PointCurvature,
    mode: Mode,
    restarts: usize,
    seed: u64,
    tol: f64,
) -> BisectionalExtremum {
    let n = pc.dim();
    let m = 2 * n;
    let g = &pc.rjet.g;
    let kr = &pc.chern;
    let holo = |x: &[f64]| to_holomorphic(&real_vector(x));
    // h(xi, xi) = g(x, x) for xi the holomorphic image of x
    let bisectional = |x: &[f64], y: &[f64]| -> f64 {
        let (nx, ny) = (quad(g, x, x), quad(g, y, y));
        if !(nx > 0.0 && ny > 0.0) {
            return f64::NAN;
        }
        let (xi, eta) = (holo(x), holo(y));
        kr.contract(xi.comps(), xi.comps(), eta.comps(), eta.comps())
            .re
            / (nx * ny)
    };
    let pair_objective = |x: &[f64]| bisectional(&x[..m], &x[m..]);
    let holo_objective = |x: &[f64]| bisectional(x, x);
    let normalize_both = |x: &mut [f64]| {
        let (a, b) = x.split_at_mut(m);
        normalize(g, a) && normalize(g, b)
    };

    let best = multistart(
        mode,
        restarts,
        seed,
        PAIR_STREAM,
        2 * m,
        &pair_objective,
        &normalize_both,
    );
    let hbest = multistart(
        mode,
        restarts,
        seed,
        HOLO_STREAM,
        m,
        &holo_objective,
        &|x| normalize(g, x),
    );

    let best_xi = holo(&best.x[..m]);
    let best_eta = holo(&best.x[m..]);
    let overlap: C64 =
        crate::tangent::pairing(pc.jet.h.matrix(), best_xi.comps(), best_eta.comps());

    let mut rng = stream_rng(seed, SIGN_STREAM);
    let chern_sign = SignSample::from_values((0..SIGN_SAMPLES).map(|_| {
        let xi = random_complex(&mut rng, n);
        let eta = random_complex(&mut rng, n);
        lu_quadratic_form(&kr.kr, &xi, &eta).re
    }));
    let kahler_like_residual = PointClassification::of(pc).kahler_like;
    let hypotheses_hold = kahler_like_residual < tol
        && chern_sign.satisfies(mode.required_sign(), sign_tolerance(&chern_sign));
    BisectionalExtremum {
        mode,
        best_value: best.value,
        alignment: overlap.norm(),
        best_xi,
        best_eta,
        holo_best_value: hbest.value,
        holo_best_direction: holo(&hbest.x),
        restarts,
        converged: best.converged && hbest.converged,
        gap: mode.sense() * (best.value - hbest.value),
        chern_sign,
        kahler_like_residual,
        hypotheses_hold,
        seed,
    }
}

/// A random `g`-orthonormal pair, for callers sampling planes.
pub(crate) fn random_orthonormal_pair<R: Rng + ?Sized>(g: &DMatrix<f64>, rng: &mut R) -> Plane {
    let m = g.nrows();
    loop {
        let mut x = random_reals(rng, 2 * m);
        if orthonormalize(g, &mut x) {
            return Plane {
                u: real_vector(&x[..m]),
                v: real_vector(&x[m..]),
            };
        }
    }
}
