//! Connection coefficients at a point: the Chern connection, complexified
//! and real Levi-Civita Christoffel symbols, and the real metric connection
//! induced on `TM` by the Chern connection.

use nalgebra::DMatrix;

use crate::dsl::MetricDefinition;
use crate::error::{Error, Result};
use crate::metric::{jet_at, MetricJet, RealMetricJet};
use crate::tangent::{ChartPoint, C64, I};
use crate::tensor::Tensor3;

/// `gamma[(a, b, g)] = Gamma^a_{b;g} = h^{l-bar a} dh_{b l-bar}/dz^g`, so that
/// `D d/dz^b = Gamma^a_{b;g} dz^g (x) d/dz^a`.
#[derive(Debug, Clone)]
pub struct ChernConnectionCoeffs {
    pub gamma: Tensor3<C64>,
}

/// `Gamma^a_{b;g} = sum_l Hinv[l][a] * dH[g][b][l]` for a stack of matrices
/// `dH[g]`.
fn contract_inverse(h_inv: &DMatrix<C64>, dh: &[DMatrix<C64>]) -> Tensor3<C64> {
    let n = h_inv.nrows();
    Tensor3::from_fn(n, |a, b, g| {
        (0..n).map(|l| h_inv[(l, a)] * dh[g][(b, l)]).sum()
    })
}

pub fn chern_coeffs(jet: &MetricJet) -> ChernConnectionCoeffs {
    ChernConnectionCoeffs {
        gamma: contract_inverse(&jet.h_inv, &jet.d1_holo),
    }
}

/// The Levi-Civita connection extended complex-linearly, in the
/// `(d/dz, d/dzb)` frame. Only the two independent blocks are stored:
/// `gamma_hh[(a, b, g)] = Gamma^a_{b g}` and `gamma_hb[(a, b, g)] = Gamma^a_{b-bar g}`;
/// the rest follow by conjugation, and `Gamma^{a-bar}_{b g}` vanishes.
#[derive(Debug, Clone)]
pub struct ComplexifiedChristoffel {
    pub gamma_hh: Tensor3<C64>,
    pub gamma_hb: Tensor3<C64>,
}

impl ComplexifiedChristoffel {
    pub fn dim(&self) -> usize {
        self.gamma_hh.dim()
    }

    /// `Gamma^C_{AB}` over the combined index set: `0..n` holomorphic,
    /// `n..2n` antiholomorphic.
    pub fn full(&self, c: usize, a: usize, b: usize) -> C64 {
        let n = self.dim();
        let zero = C64::new(0.0, 0.0);
        match (c < n, a < n, b < n) {
            (true, true, true) => self.gamma_hh[(c, a, b)],
            (true, false, true) => self.gamma_hb[(c, a - n, b)],
            (true, true, false) => self.gamma_hb[(c, b - n, a)],
            (false, false, false) => self.gamma_hh[(c - n, a - n, b - n)].conj(),
            (false, true, false) => self.gamma_hb[(c - n, a, b - n)].conj(),
            (false, false, true) => self.gamma_hb[(c - n, b, a - n)].conj(),
            (true, false, false) | (false, true, true) => zero,
        }
    }
}

pub fn complexified_christoffel(jet: &MetricJet) -> ComplexifiedChristoffel {
    let n = jet.dim();
    let inv = &jet.h_inv;
    let half = C64::new(0.5, 0.0);
    let gamma_hh = Tensor3::from_fn(n, |a, b, g| {
        (0..n)
            .map(|l| inv[(l, a)] * (jet.d1_holo[g][(b, l)] + jet.d1_holo[b][(g, l)]))
            .sum::<C64>()
            * half
    });
    let gamma_hb = Tensor3::from_fn(n, |a, b, g| {
        (0..n)
            .map(|l| inv[(l, a)] * (jet.d1_anti[b][(g, l)] - jet.d1_anti[l][(g, b)]))
            .sum::<C64>()
            * half
    });
    ComplexifiedChristoffel { gamma_hh, gamma_hb }
}

/// Christoffel symbols of the background metric `g` in real coordinates:
/// `brackets[(j, k, s)] = [jk, s]` and `gamma[(i, j, k)] = Gamma^k_{ij}`.
#[derive(Debug, Clone)]
pub struct RealChristoffel {
    pub brackets: Tensor3<f64>,
    pub gamma: Tensor3<f64>,
    pub g_inv: DMatrix<f64>,
}

pub fn real_christoffel(rjet: &RealMetricJet) -> Result<RealChristoffel> {
    let m = rjet.dim();
    let g_inv = rjet.g.clone().try_inverse().ok_or(Error::Singular {
        cond: f64::INFINITY,
    })?;
    let dg = &rjet.dg;
    let brackets = Tensor3::from_fn(m, |j, k, s| {
        0.5 * (dg[k][(j, s)] + dg[j][(k, s)] - dg[s][(j, k)])
    });
    let gamma = Tensor3::from_fn(m, |i, j, k| {
        (0..m).map(|s| g_inv[(k, s)] * brackets[(i, j, s)]).sum()
    });
    Ok(RealChristoffel {
        brackets,
        gamma,
        g_inv,
    })
}

/// The metric connection on `TM` induced by the Chern connection:
/// `D_{d/dx^k} d/dx^i = theta_tilde[(i, j, k)] d/dx^j`.
#[derive(Debug, Clone)]
pub struct InducedRealConnection {
    pub theta_tilde: Tensor3<f64>,
}

impl InducedRealConnection {
    pub fn dim(&self) -> usize {
        self.theta_tilde.dim()
    }

    /// `D_X Y` for constant-coefficient fields `X`, `Y`.
    pub fn covariant(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let m = self.dim();
        (0..m)
            .map(|j| {
                let mut s = 0.0;
                for k in 0..m {
                    for i in 0..m {
                        s += x[k] * y[i] * self.theta_tilde[(i, j, k)];
                    }
                }
                s
            })
            .collect()
    }
}

/// Realifies Chern-type coefficients `gamma[(a, b, g)]`: with
/// `w = gamma^b_{a;g} dz^g(d/dx^k)` one has
/// `D_k d/dx^a = Re w d/dx^b + Im w d/dx^{n+b}` and
/// `D_k d/dx^{n+a} = -Im w d/dx^b + Re w d/dx^{n+b}`.
fn realify_connection(gamma: &Tensor3<C64>) -> Tensor3<f64> {
    let n = gamma.dim();
    let m = 2 * n;
    let mut out = Tensor3::zeros(m);
    for k in 0..m {
        let (g, dz) = if k < n {
            (k, C64::new(1.0, 0.0))
        } else {
            (k - n, I)
        };
        for a in 0..n {
            for b in 0..n {
                let w = gamma[(b, a, g)] * dz;
                out[(a, b, k)] = w.re;
                out[(a, n + b, k)] = w.im;
                out[(n + a, b, k)] = -w.im;
                out[(n + a, n + b, k)] = w.re;
            }
        }
    }
    out
}

pub fn induced_real_connection(jet: &MetricJet) -> InducedRealConnection {
    InducedRealConnection {
        theta_tilde: realify_connection(&chern_coeffs(jet).gamma),
    }
}

/// `torsion[(i, j, k)]`: the `d/dx^k` component of `T(d/dx^i, d/dx^j)`.
pub fn chern_torsion(conn: &InducedRealConnection) -> Tensor3<f64> {
    let t = &conn.theta_tilde;
    Tensor3::from_fn(conn.dim(), |i, j, k| t[(j, k, i)] - t[(i, k, j)])
}

/// The induced connection together with its first real derivatives
/// `d_theta[l] = d theta_tilde / dx^l`.
#[derive(Debug, Clone)]
pub struct InducedConnectionJet {
    pub conn: InducedRealConnection,
    pub d_theta: Vec<Tensor3<f64>>,
}

impl InducedConnectionJet {
    /// Exact derivatives from the second-order metric jet, using
    /// `d(H^-1) = -H^-1 (dH) H^-1`.
    pub fn from_jet(jet: &MetricJet) -> Self {
        let n = jet.dim();
        let inv = &jet.h_inv;
        let d_gamma = |dh: &DMatrix<C64>, d2: &dyn Fn(usize) -> DMatrix<C64>| -> Tensor3<C64> {
            let d_inv = -(inv * dh * inv);
            let second: Vec<DMatrix<C64>> = (0..n).map(d2).collect();
            let a = contract_inverse(&d_inv, &jet.d1_holo);
            let b = contract_inverse(inv, &second);
            Tensor3::from_fn(n, |x, y, z| a[(x, y, z)] + b[(x, y, z)])
        };
        let d_theta = (0..2 * n)
            .map(|l| {
                let e = l % n;
                let holo = d_gamma(&jet.d1_holo[e], &|g| jet.d2_holo[g][e].clone());
                let anti = d_gamma(&jet.d1_anti[e], &|g| jet.d2_mixed[g][e].clone());
                let (c, d) = crate::metric::real_direction(n, l);
                let combined =
                    Tensor3::from_fn(n, |x, y, z| c * holo[(x, y, z)] + d * anti[(x, y, z)]);
                realify_connection(&combined)
            })
            .collect();
        Self {
            conn: induced_real_connection(jet),
            d_theta,
        }
    }

    /// Derivatives by central differences of the induced connection at
    /// neighbouring points.
    pub fn finite_difference(metric: &MetricDefinition, p: &ChartPoint, step: f64) -> Result<Self> {
        let conn = induced_real_connection(&jet_at(metric, p)?);
        let m = conn.dim();
        let d_theta = (0..m)
            .map(|l| {
                let plus = induced_real_connection(&jet_at(metric, &p.shifted_real(l, step))?);
                let minus = induced_real_connection(&jet_at(metric, &p.shifted_real(l, -step))?);
                Ok(Tensor3::from_fn(m, |i, j, k| {
                    (plus.theta_tilde[(i, j, k)] - minus.theta_tilde[(i, j, k)]) / (2.0 * step)
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { conn, d_theta })
    }

    /// `R^D(d/dx^k, d/dx^l) d/dx^i = curvature[k][l][(i, j)] d/dx^j`, with
    /// `R^D(X, Y) = D_X D_Y - D_Y D_X` on coordinate fields.
    pub fn curvature(&self) -> Vec<Vec<DMatrix<f64>>> {
        let t = &self.conn.theta_tilde;
        let m = self.conn.dim();
        (0..m)
            .map(|k| {
                (0..m)
                    .map(|l| {
                        DMatrix::from_fn(m, m, |i, j| {
                            let mut s = self.d_theta[k][(i, j, l)] - self.d_theta[l][(i, j, k)];
                            for q in 0..m {
                                s += t[(i, q, l)] * t[(q, j, k)] - t[(i, q, k)] * t[(q, j, l)];
                            }
                            s
                        })
                    })
                    .collect()
            })
            .collect()
    }
}
