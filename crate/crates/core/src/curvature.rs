//! Curvature tensors at a point: the Chern curvature, the Riemannian
//! curvature of `g = Re h` in real coordinates, and its complex-linear
//! extension to the `(d/dz, d/dzb)` frame.

use nalgebra::DMatrix;

use crate::connection::{real_christoffel, InducedConnectionJet, RealChristoffel};
use crate::dsl::MetricDefinition;
use crate::error::Result;
use crate::metric::{jet_at, MetricJet, RealMetricJet};
use crate::tangent::{ChartPoint, C64, I};
use crate::tensor::Tensor4;

/// `kr[(a, b, g, d)] = KR_{a b-bar g d-bar}`.
#[derive(Debug, Clone)]
pub struct ChernCurvature {
    pub kr: Tensor4<C64>,
}

impl ChernCurvature {
    pub fn dim(&self) -> usize {
        self.kr.dim()
    }

    /// `KR(a, conj b, c, conj d)` for holomorphic vectors given by their
    /// components.
    pub fn contract(&self, a: &[C64], b: &[C64], c: &[C64], d: &[C64]) -> C64 {
        contract_hbhb(&self.kr, a, b, c, d)
    }

    /// Largest violation of `kr(a,b,g,d) = conj(kr(b,a,d,g))`.
    pub fn pair_symmetry_residual(&self) -> f64 {
        let k = &self.kr;
        k.indexed()
            .map(|((a, b, g, d), x)| (x - k[(b, a, d, g)].conj()).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn contract_hbhb(t: &Tensor4<C64>, a: &[C64], b: &[C64], c: &[C64], d: &[C64]) -> C64 {
    t.indexed()
        .map(|((i, j, k, l), x)| x * a[i] * b[j].conj() * c[k] * d[l].conj())
        .sum()
}

pub fn chern_curvature(jet: &MetricJet) -> ChernCurvature {
    let n = jet.dim();
    let inv = &jet.h_inv;
    // products[g][d] = dH/dz^g * H^-1 * dH/dzb^d
    let products: Vec<Vec<DMatrix<C64>>> = (0..n)
        .map(|g| {
            (0..n)
                .map(|d| &jet.d1_holo[g] * inv * &jet.d1_anti[d])
                .collect()
        })
        .collect();
    ChernCurvature {
        kr: Tensor4::from_fn(n, |a, b, g, d| {
            products[g][d][(a, b)] - jet.d2_mixed[g][d][(a, b)]
        }),
    }
}

/// `r[(i, j, k, l)] = R_{ijkl}`, normalized so that `K(u, v) = R(u, v, v, u) / |u ^ v|^2`.
#[derive(Debug, Clone)]
pub struct RealCurvature {
    pub r: Tensor4<f64>,
}

impl RealCurvature {
    pub fn dim(&self) -> usize {
        self.r.dim()
    }

    pub fn contract(&self, a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> f64 {
        self.r
            .indexed()
            .map(|((i, j, k, l), x)| x * a[i] * b[j] * c[k] * d[l])
            .sum()
    }

    /// Largest violation of the antisymmetries and pair symmetry.
    pub fn symmetry_residual(&self) -> f64 {
        let r = &self.r;
        r.indexed()
            .map(|((i, j, k, l), &x)| {
                (x + r[(j, i, k, l)])
                    .abs()
                    .max((x + r[(i, j, l, k)]).abs())
                    .max((x - r[(k, l, i, j)]).abs())
            })
            .fold(0.0, f64::max)
    }

    /// Largest value of `R_{ijkl} + R_{jkil} + R_{kijl}`.
    pub fn bianchi_residual(&self) -> f64 {
        let r = &self.r;
        r.indexed()
            .map(|((i, j, k, l), &x)| (x + r[(j, k, i, l)] + r[(k, i, j, l)]).abs())
            .fold(0.0, f64::max)
    }
}

pub fn real_curvature(rjet: &RealMetricJet, rchris: &RealChristoffel) -> RealCurvature {
    let m = rjet.dim();
    let d2 = &rjet.d2g;
    let br = &rchris.brackets;
    let gi = &rchris.g_inv;
    RealCurvature {
        r: Tensor4::from_fn(m, |i, j, k, l| {
            let second =
                0.5 * (d2[j][l][(i, k)] + d2[i][k][(j, l)] - d2[j][k][(i, l)] - d2[i][l][(j, k)]);
            let mut quad = 0.0;
            for s in 0..m {
                for t in 0..m {
                    quad += gi[(s, t)]
                        * (br[(j, l, s)] * br[(i, k, t)] - br[(j, k, s)] * br[(i, l, t)]);
                }
            }
            second + quad
        }),
    }
}

/// The complexified Riemannian curvature over `2n` indices, `0..n` for
/// `d/dz^a` and `n..2n` for `d/dzb^a`:
/// `r[(A, B, C, D)] = 2 R(e_A, e_B, e_C, e_D)` with `R` extended complex-linearly.
#[derive(Debug, Clone)]
pub struct ComplexifiedCurvature {
    pub r: Tensor4<C64>,
}

impl ComplexifiedCurvature {
    /// Complex dimension `n`.
    pub fn dim(&self) -> usize {
        self.r.dim() / 2
    }

    /// Complex-linear contraction with vectors given in the `(d/dz, d/dzb)` frame.
    pub fn contract(&self, a: &[C64], b: &[C64], c: &[C64], d: &[C64]) -> C64 {
        self.r
            .indexed()
            .map(|((i, j, k, l), x)| x * a[i] * b[j] * c[k] * d[l])
            .sum()
    }

    /// `R_{a b-bar m n-bar}` as an `n^4` tensor.
    pub fn block_11(&self) -> Tensor4<C64> {
        let n = self.dim();
        Tensor4::from_fn(n, |a, b, m, v| self.r[(a, n + b, m, n + v)])
    }

    /// Largest entry among the fully holomorphic and fully antiholomorphic
    /// blocks.
    pub fn gray_residual(&self) -> f64 {
        let n = self.dim();
        self.r
            .indexed()
            .filter(|((a, b, c, d), _)| {
                let k = [a, b, c, d].iter().filter(|&&&x| x < n).count();
                k == 0 || k == 4
            })
            .map(|(_, x)| x.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry among `R_{a b g d-bar}` and `R_{a b g-bar d-bar}`.
    pub fn g_kahler_like_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for g in 0..n {
                    for d in 0..n {
                        worst = worst
                            .max(self.r[(a, b, g, n + d)].norm())
                            .max(self.r[(a, b, n + g, n + d)].norm());
                    }
                }
            }
        }
        worst
    }

    /// Largest violation of `R_{ABCD} = -R_{BACD} = -R_{ABDC} = R_{CDAB}`,
    /// the first Bianchi identity and `R_{A'B'C'D'} = conj R_{ABCD}` where
    /// `'` swaps holomorphic and antiholomorphic indices.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.dim();
        let bar = |x: usize| if x < n { x + n } else { x - n };
        let r = &self.r;
        r.indexed()
            .map(|((a, b, c, d), &x)| {
                [
                    x + r[(b, a, c, d)],
                    x + r[(a, b, d, c)],
                    x - r[(c, d, a, b)],
                    x + r[(b, c, a, d)] + r[(c, a, b, d)],
                    x - r[(bar(a), bar(b), bar(c), bar(d))].conj(),
                ]
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// Components of `d/dz^a = (d/dx^a - i d/dx^{n+a})/2` and
/// `d/dzb^a = (d/dx^a + i d/dx^{n+a})/2` in the real frame.
fn complex_frame(n: usize) -> DMatrix<C64> {
    let mut p = DMatrix::zeros(2 * n, 2 * n);
    for a in 0..n {
        p[(a, a)] = C64::new(0.5, 0.0);
        p[(a, n + a)] = -0.5 * I;
        p[(n + a, a)] = C64::new(0.5, 0.0);
        p[(n + a, n + a)] = 0.5 * I;
    }
    p
}

pub fn complexify_curvature(rc: &RealCurvature) -> ComplexifiedCurvature {
    let m = rc.dim();
    let p = complex_frame(m / 2);
    let mut t = Tensor4::from_fn(m, |i, j, k, l| C64::new(2.0 * rc.r[(i, j, k, l)], 0.0));
    // transform one slot at a time
    for slot in 0..4 {
        t = Tensor4::from_fn(m, |a, b, c, d| {
            let idx = [a, b, c, d];
            (0..m)
                .map(|i| {
                    let mut src = idx;
                    src[slot] = i;
                    p[(idx[slot], i)] * t[(src[0], src[1], src[2], src[3])]
                })
                .sum()
        });
    }
    ComplexifiedCurvature { r: t }
}

/// `R_{a b-bar m n-bar}` evaluated directly from the metric jet.
pub fn complexified_11_direct(jet: &MetricJet) -> Tensor4<C64> {
    let n = jet.dim();
    let inv = &jet.h_inv;
    let d = &jet.d1_holo;
    let db = &jet.d1_anti;
    let dd = &jet.d2_mixed;
    let quarter = C64::new(0.25, 0.0);
    Tensor4::from_fn(n, |a, b, m, v| {
        let mut s = -0.5 * (dd[m][b][(a, v)] + dd[a][v][(m, b)]);
        for l in 0..n {
            for k in 0..n {
                let hi = inv[(l, k)];
                s += quarter * (d[m][(a, l)] + d[a][(m, l)]) * hi * (db[b][(k, v)] + db[v][(k, b)]);
                s -= quarter * (db[b][(m, l)] - db[l][(m, b)]) * hi * (d[a][(k, v)] - d[k][(a, v)]);
                s -= quarter * (db[v][(a, l)] - db[l][(a, v)]) * hi * (d[m][(k, b)] - d[k][(m, b)]);
            }
        }
        s
    })
}

/// Embeds a holomorphic vector `xi` in the `(d/dz, d/dzb)` frame.
pub fn holo_slot(xi: &[C64]) -> Vec<C64> {
    let mut out = xi.to_vec();
    out.extend(std::iter::repeat_n(C64::new(0.0, 0.0), xi.len()));
    out
}

/// Embeds `conj xi` in the `(d/dz, d/dzb)` frame.
pub fn anti_slot(xi: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); xi.len()];
    out.extend(xi.iter().map(|z| z.conj()));
    out
}

/// Everything computed at one point, evaluated once and shared by the
/// scalar curvatures and checks.
#[derive(Debug, Clone)]
pub struct PointCurvature {
    pub jet: MetricJet,
    pub rjet: RealMetricJet,
    pub chern: ChernCurvature,
    pub real: RealCurvature,
    pub complexified: ComplexifiedCurvature,
    pub connection: InducedConnectionJet,
}

impl PointCurvature {
    pub fn at(metric: &MetricDefinition, p: &ChartPoint) -> Result<Self> {
        Self::from_jet(jet_at(metric, p)?)
    }

    pub fn from_jet(jet: MetricJet) -> Result<Self> {
        let rjet = RealMetricJet::from_jet(&jet)?;
        let real = real_curvature(&rjet, &real_christoffel(&rjet)?);
        Ok(Self {
            chern: chern_curvature(&jet),
            complexified: complexify_curvature(&real),
            connection: InducedConnectionJet::from_jet(&jet),
            real,
            rjet,
            jet,
        })
    }

    pub fn dim(&self) -> usize {
        self.jet.dim()
    }
}
