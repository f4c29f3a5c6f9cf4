use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dsl::{Expr, MetricDefinition};
use crate::error::{Error, Result};
use crate::tangent::{hermitian_residual, max_norm, ChartPoint, HermitianMatrixValue, C64, I};

/// Condition number above which `h(p)` is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Tolerance for the Hermitian-consistency checks on derivative blocks.
pub const JET_CONSISTENCY_TOL: f64 = 1e-10;

/// The metric and its full second-order Wirtinger jet at one point.
///
/// Derivative blocks are `n x n` matrices indexed `[g]` or `[g][d]`:
/// `d1_holo[g] = dH/dz^g`, `d1_anti[d] = dH/dzb^d`,
/// `d2_mixed[g][d] = d^2H/dz^g dzb^d`, `d2_holo[g][m] = d^2H/dz^g dz^m`,
/// `d2_anti[d][m] = d^2H/dzb^d dzb^m`.
///
/// `h_inv` is the ordinary matrix inverse, so that
/// `h^{l-bar a} = h_inv[(l, a)]` satisfies `h^{l-bar a} h_{m l-bar} = delta^a_m`.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub point: ChartPoint,
    pub h: HermitianMatrixValue,
    pub h_inv: DMatrix<C64>,
    pub d1_holo: Vec<DMatrix<C64>>,
    pub d1_anti: Vec<DMatrix<C64>>,
    pub d2_mixed: Vec<Vec<DMatrix<C64>>>,
    pub d2_holo: Vec<Vec<DMatrix<C64>>>,
    pub d2_anti: Vec<Vec<DMatrix<C64>>>,
}

impl MetricJet {
    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub(crate) fn assemble(
        point: ChartPoint,
        h: DMatrix<C64>,
        d1_holo: Vec<DMatrix<C64>>,
        d1_anti: Vec<DMatrix<C64>>,
        d2_mixed: Vec<Vec<DMatrix<C64>>>,
        d2_holo: Vec<Vec<DMatrix<C64>>>,
        d2_anti: Vec<Vec<DMatrix<C64>>>,
    ) -> Result<Self> {
        let h = HermitianMatrixValue::new(h)?;
        let h_inv = checked_inverse(h.matrix())?;
        Ok(Self {
            point,
            h,
            h_inv,
            d1_holo,
            d1_anti,
            d2_mixed,
            d2_holo,
            d2_anti,
        })
    }

    /// Largest violation of the Hermitian relations between derivative
    /// blocks: `dH/dzb^d = (dH/dz^d)^*` and
    /// `d2_mixed[g][d] = d2_mixed[d][g]^*`.
    pub fn consistency_residual(&self) -> f64 {
        let n = self.dim();
        let mut r: f64 = 0.0;
        for g in 0..n {
            r = r.max(max_norm(&(&self.d1_anti[g] - self.d1_holo[g].adjoint())));
            for d in 0..n {
                r = r.max(max_norm(
                    &(&self.d2_mixed[g][d] - self.d2_mixed[d][g].adjoint()),
                ));
                r = r.max(max_norm(
                    &(&self.d2_anti[g][d] - self.d2_holo[g][d].adjoint()),
                ));
            }
        }
        r
    }

    /// `d H / d x^k` for real coordinate `k`.
    pub fn real_first(&self, k: usize) -> DMatrix<C64> {
        let n = self.dim();
        let (a, (c, d)) = (k % n, real_direction(n, k));
        &self.d1_holo[a] * c + &self.d1_anti[a] * d
    }

    /// `d^2 H / dx^k dx^l`.
    pub fn real_second(&self, k: usize, l: usize) -> DMatrix<C64> {
        let n = self.dim();
        let (a, (ck, dk)) = (k % n, real_direction(n, k));
        let (b, (cl, dl)) = (l % n, real_direction(n, l));
        &self.d2_holo[a][b] * (ck * cl)
            + &self.d2_mixed[a][b] * (ck * dl)
            + &self.d2_mixed[b][a] * (dk * cl)
            + &self.d2_anti[a][b] * (dk * dl)
    }
}

/// Coefficients `(c, d)` with `d/dx^k = c d/dz^a + d d/dzb^a`.
pub(crate) fn real_direction(n: usize, k: usize) -> (C64, C64) {
    if k < n {
        (C64::new(1.0, 0.0), C64::new(1.0, 0.0))
    } else {
        (I, -I)
    }
}

/// Inverse by pivoted LU with a 1-norm condition estimate.
pub fn checked_inverse(m: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let inv = m.clone().lu().try_inverse().ok_or(Error::Singular {
        cond: f64::INFINITY,
    })?;
    let norm1 = |x: &DMatrix<C64>| {
        x.column_iter()
            .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let cond = norm1(m) * norm1(&inv);
    if !cond.is_finite() || cond > MAX_CONDITION {
        return Err(Error::Singular { cond });
    }
    Ok(inv)
}

pub(crate) fn eval_grid(exprs: &[Expr], n: usize, z: &[C64]) -> Result<DMatrix<C64>> {
    let vals = exprs
        .iter()
        .map(|e| e.eval(z))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(DMatrix::from_row_slice(n, n, &vals))
}

fn check_dim(metric: &MetricDefinition, p: &ChartPoint) -> Result<()> {
    if metric.dim() != p.dim() {
        return Err(Error::Dimension {
            expected: metric.dim(),
            got: p.dim(),
        });
    }
    Ok(())
}

/// The jet at `p` from exact symbolic derivatives.
pub fn jet_at(metric: &MetricDefinition, p: &ChartPoint) -> Result<MetricJet> {
    check_dim(metric, p)?;
    let n = metric.dim();
    let z = p.coords();
    let h = eval_grid(metric.entries(), n, z)?;
    let table = metric.jet_exprs();
    let block = |v: &[Expr], k: usize| eval_grid(&v[k * n * n..(k + 1) * n * n], n, z);
    let first = |v: &[Expr]| (0..n).map(|g| block(v, g)).collect::<Result<Vec<_>>>();
    let second = |v: &[Expr]| {
        (0..n)
            .map(|g| {
                (0..n)
                    .map(|d| block(v, g * n + d))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    };
    let jet = MetricJet::assemble(
        p.clone(),
        h,
        first(&table.d1_holo)?,
        first(&table.d1_anti)?,
        second(&table.d2_mixed)?,
        second(&table.d2_holo)?,
        second(&table.d2_anti)?,
    )?;
    let residual = jet.consistency_residual();
    let scale = jet
        .d1_holo
        .iter()
        .chain(jet.d2_mixed.iter().flatten())
        .map(max_norm)
        .fold(1.0, f64::max);
    if residual > JET_CONSISTENCY_TOL * scale {
        return Err(Error::NotHermitian { residual });
    }
    Ok(jet)
}

/// The background Riemannian metric `g = Re h` and its real derivatives.
#[derive(Debug, Clone)]
pub struct RealMetricJet {
    pub g: DMatrix<f64>,
    /// `dg[k] = dg/dx^k`
    pub dg: Vec<DMatrix<f64>>,
    /// `d2g[k][l] = d^2 g / dx^k dx^l`
    pub d2g: Vec<Vec<DMatrix<f64>>>,
}

impl RealMetricJet {
    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    /// Assembles `g` and its derivatives from the Wirtinger jet using
    /// `d/dx^a = d/dz^a + d/dzb^a` and `d/dx^{n+a} = i(d/dz^a - d/dzb^a)`.
    pub fn from_jet(jet: &MetricJet) -> Result<Self> {
        let n = jet.dim();
        let g = realify(jet.h.matrix())?;
        let dg = (0..2 * n)
            .map(|k| realify(&jet.real_first(k)))
            .collect::<Result<Vec<_>>>()?;
        let d2g = (0..2 * n)
            .map(|k| {
                (0..2 * n)
                    .map(|l| realify(&jet.real_second(k, l)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { g, dg, d2g })
    }
}

/// Maps a Hermitian matrix `M` to the real symmetric `g_ij = Re M(e_i, e_j)`
/// through the complex-linear form `(s_i conj(s_j) M_ab + s_j conj(s_i) M_ba)/2`,
/// rejecting results with a non-negligible imaginary part.
fn realify(m: &DMatrix<C64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let s = |i: usize| if i < n { C64::new(1.0, 0.0) } else { I };
    let scale = max_norm(m).max(1.0);
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..2 * n {
        for j in 0..2 * n {
            let (a, b) = (i % n, j % n);
            let v: Complex64 =
                (s(i) * s(j).conj() * m[(a, b)] + s(j) * s(i).conj() * m[(b, a)]) * 0.5;
            if v.im.abs() > JET_CONSISTENCY_TOL * scale {
                return Err(Error::NotHermitian {
                    residual: hermitian_residual(m),
                });
            }
            g[(i, j)] = v.re;
        }
    }
    Ok(g)
}

pub fn real_jet_at(metric: &MetricDefinition, p: &ChartPoint) -> Result<RealMetricJet> {
    RealMetricJet::from_jet(&jet_at(metric, p)?)
}
