//! Scalar curvatures of planes and holomorphic directions, plus residuals
//! of the identities relating the real and Chern pictures.

use nalgebra::DMatrix;

use crate::connection::InducedConnectionJet;
use crate::curvature::{
    anti_slot, holo_slot, ChernCurvature, ComplexifiedCurvature, PointCurvature, RealCurvature,
};
use crate::error::{Error, Result};
use crate::tangent::{
    apply_j, pairing, to_holomorphic, HermitianMatrixValue, HoloTangentVector, RealTangentVector,
    C64,
};

/// Relative threshold below which `|u ^ v|^2` counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Relative threshold on the imaginary part of quantities that are real by symmetry.
pub const REALNESS_TOL: f64 = 1e-10;

/// A real 2-plane given by a spanning pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    pub u: RealTangentVector,
    pub v: RealTangentVector,
}

impl Plane {
    pub fn new(u: RealTangentVector, v: RealTangentVector) -> Result<Self> {
        if u.comps().len() != v.comps().len() {
            return Err(Error::Dimension {
                expected: u.comps().len(),
                got: v.comps().len(),
            });
        }
        Ok(Self { u, v })
    }

    /// The holomorphic plane spanned by `u` and `Ju`.
    pub fn holomorphic(u: RealTangentVector) -> Self {
        let v = apply_j(&u);
        Self { u, v }
    }

    /// `g(u,u) g(v,v) - g(u,v)^2`, rejecting degenerate planes.
    pub fn area_squared(&self, g: &DMatrix<f64>) -> Result<f64> {
        if g.nrows() != self.u.comps().len() {
            return Err(Error::Dimension {
                expected: g.nrows(),
                got: self.u.comps().len(),
            });
        }
        let guu = quad(g, self.u.comps(), self.u.comps());
        let gvv = quad(g, self.v.comps(), self.v.comps());
        let guv = quad(g, self.u.comps(), self.v.comps());
        let area = guu * gvv - guv * guv;
        if !(area > DEGENERACY_TOL * guu * gvv) {
            return Err(Error::DegeneratePlane);
        }
        Ok(area)
    }
}

fn quad(g: &DMatrix<f64>, u: &[f64], v: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..u.len() {
        for j in 0..v.len() {
            s += g[(i, j)] * u[i] * v[j];
        }
    }
    s
}

fn real_part(z: C64, scale: f64) -> Result<f64> {
    if z.im.abs() > REALNESS_TOL * scale.max(1.0) {
        return Err(Error::NonReal { imag: z.im });
    }
    Ok(z.re)
}

/// `K(u, v) = R(u, v, v, u) / |u ^ v|^2`.
pub fn riemann_sectional(rc: &RealCurvature, g: &DMatrix<f64>, pl: &Plane) -> Result<f64> {
    let area = pl.area_squared(g)?;
    let (u, v) = (pl.u.comps(), pl.v.comps());
    Ok(rc.contract(u, v, v, u) / area)
}

/// `T^{ab} = xi^a conj(eta^b) - eta^a conj(xi^b)`.
fn wedge(xi: &[C64], eta: &[C64]) -> DMatrix<C64> {
    let n = xi.len();
    DMatrix::from_fn(n, n, |a, b| xi[a] * eta[b].conj() - eta[a] * xi[b].conj())
}

/// `1/2 KR_{a b-bar g d-bar} (xi^a eta-bar^b - eta^a xi-bar^b)(eta^g xi-bar^d - xi^g eta-bar^d)`,
/// returned together with the magnitude of the summed terms.
fn chern_wedge_contraction(kr: &ChernCurvature, xi: &[C64], eta: &[C64]) -> (C64, f64) {
    let t = wedge(xi, eta);
    let mut sum = C64::new(0.0, 0.0);
    let mut mag = 0.0;
    for ((a, b, g, d), x) in kr.kr.indexed() {
        let term = -0.5 * x * t[(a, b)] * t[(g, d)];
        sum += term;
        mag += term.norm();
    }
    (sum, mag)
}

/// The Chern contraction `1/2 KR(...)` for the holomorphic images of `u`, `v`.
pub fn chern_wedge_numerator(
    kr: &ChernCurvature,
    u: &RealTangentVector,
    v: &RealTangentVector,
) -> Result<f64> {
    let xi = to_holomorphic(u);
    let eta = to_holomorphic(v);
    if xi.dim() != kr.dim() || eta.dim() != kr.dim() {
        return Err(Error::Dimension {
            expected: kr.dim(),
            got: xi.dim().min(eta.dim()),
        });
    }
    let (z, mag) = chern_wedge_contraction(kr, xi.comps(), eta.comps());
    real_part(z, mag)
}

/// The sectional curvature of the metric connection induced by the Chern
/// connection.
pub fn chern_sectional(kr: &ChernCurvature, h: &HermitianMatrixValue, pl: &Plane) -> Result<f64> {
    let xi = to_holomorphic(&pl.u);
    let eta = to_holomorphic(&pl.v);
    let m = h.matrix();
    let hxx = pairing(m, xi.comps(), xi.comps()).re;
    let hee = pairing(m, eta.comps(), eta.comps()).re;
    let cross = pairing(m, xi.comps(), eta.comps()) + pairing(m, eta.comps(), xi.comps());
    let area = hxx * hee - 0.25 * cross.re * cross.re;
    if !(area > DEGENERACY_TOL * hxx * hee) {
        return Err(Error::DegeneratePlane);
    }
    Ok(chern_wedge_numerator(kr, &pl.u, &pl.v)? / area)
}

fn checked_nonzero(h: &HermitianMatrixValue, xi: &HoloTangentVector) -> Result<f64> {
    if xi.dim() != h.dim() {
        return Err(Error::Dimension {
            expected: h.dim(),
            got: xi.dim(),
        });
    }
    let norm = pairing(h.matrix(), xi.comps(), xi.comps()).re;
    if xi.is_zero() || !(norm > 0.0) {
        return Err(Error::ZeroVector);
    }
    Ok(norm)
}

/// `H(xi) = KR(xi, xi-bar, xi, xi-bar) / h(xi, xi)^2`.
pub fn holo_sectional(
    kr: &ChernCurvature,
    h: &HermitianMatrixValue,
    xi: &HoloTangentVector,
) -> Result<f64> {
    holo_bisectional(kr, h, xi, xi)
}

/// `B(xi, eta) = KR(xi, xi-bar, eta, eta-bar) / (h(xi, xi) h(eta, eta))`.
pub fn holo_bisectional(
    kr: &ChernCurvature,
    h: &HermitianMatrixValue,
    xi: &HoloTangentVector,
    eta: &HoloTangentVector,
) -> Result<f64> {
    let nx = checked_nonzero(h, xi)?;
    let ne = checked_nonzero(h, eta)?;
    let (x, e) = (xi.comps(), eta.comps());
    let z = kr.contract(x, x, e, e);
    let mag: f64 = kr
        .kr
        .indexed()
        .map(|((a, b, g, d), k)| (k * x[a] * x[b].conj() * e[g] * e[d].conj()).norm())
        .sum();
    Ok(real_part(z, mag)? / (nx * ne))
}

/// `g(R^D(v, u) u, v)` from the curvature of the induced real connection.
pub fn thm11_lhs(
    conn: &InducedConnectionJet,
    g: &DMatrix<f64>,
    u: &RealTangentVector,
    v: &RealTangentVector,
) -> Result<f64> {
    let m = conn.conn.dim();
    for w in [u, v] {
        if w.comps().len() != m || g.nrows() != m {
            return Err(Error::Dimension {
                expected: m,
                got: w.comps().len(),
            });
        }
    }
    let curv = conn.curvature();
    let (u, v) = (u.comps(), v.comps());
    let gv: Vec<f64> = (0..m)
        .map(|j| (0..m).map(|q| g[(j, q)] * v[q]).sum())
        .collect();
    let mut s = 0.0;
    for k in 0..m {
        for l in 0..m {
            let w = v[k] * u[l];
            if w == 0.0 {
                continue;
            }
            for i in 0..m {
                for j in 0..m {
                    s += w * u[i] * curv[k][l][(i, j)] * gv[j];
                }
            }
        }
    }
    Ok(s)
}

/// Residuals of the identities between real and complex curvature for one
/// pair `(u, v)`. The first three hold for Kähler metrics only; the last
/// two hold for every Hermitian metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals {
    /// `R(Ju, u, v, Jv) - 2 KR(xi, xi-bar, eta, eta-bar)`.
    pub kahler_bisectional: f64,
    /// `R(u, v, v, u)` minus the four-term Chern expression.
    pub kahler_sectional: f64,
    /// `R(Ju, u, u, Ju) - 2 KR(xi, xi-bar, xi, xi-bar)`.
    pub kahler_holomorphic: f64,
    /// `R(u, v, v, u)` minus its expansion in complexified blocks.
    pub decomposition: f64,
    /// `R(u, Ju, Ju, u) - 2 R(xi, xi-bar, xi, xi-bar)`.
    pub holomorphic_plane: f64,
}

impl IdentityResiduals {
    pub fn universal_max(&self) -> f64 {
        self.decomposition.abs().max(self.holomorphic_plane.abs())
    }

    pub fn kahler_max(&self) -> f64 {
        self.kahler_bisectional
            .abs()
            .max(self.kahler_sectional.abs())
            .max(self.kahler_holomorphic.abs())
    }
}

/// `R(u, v, v, u)` expanded in blocks of the complexified tensor.
pub fn complexified_expansion(cc: &ComplexifiedCurvature, xi: &[C64], eta: &[C64]) -> f64 {
    let (x, xb, e, eb) = (holo_slot(xi), anti_slot(xi), holo_slot(eta), anti_slot(eta));
    let r = |a: &[C64], b: &[C64], c: &[C64], d: &[C64]| cc.contract(a, b, c, d);
    let z = 2.0 * (r(&x, &e, &e, &xb) + r(&x, &e, &eb, &x)).re + r(&x, &eb, &e, &xb)
        - r(&x, &e, &xb, &eb)
        - 0.5 * (r(&x, &eb, &x, &eb) + r(&e, &xb, &e, &xb));
    z.re
}

pub fn identity_suite(
    pc: &PointCurvature,
    u: &RealTangentVector,
    v: &RealTangentVector,
) -> Result<IdentityResiduals> {
    let n = pc.dim();
    for w in [u, v] {
        if w.comps().len() != 2 * n {
            return Err(Error::Dimension {
                expected: 2 * n,
                got: w.comps().len(),
            });
        }
    }
    let ju = apply_j(u);
    let jv = apply_j(v);
    let (us, vs, jus, jvs) = (u.comps(), v.comps(), ju.comps(), jv.comps());
    let xi = to_holomorphic(u);
    let eta = to_holomorphic(v);
    let (x, e) = (xi.comps(), eta.comps());
    let rr = &pc.real;
    let kr = &pc.chern;

    let kahler_bisectional = rr.contract(jus, us, vs, jvs) - 2.0 * kr.contract(x, x, e, e).re;
    let four_term = 0.5
        * (kr.contract(x, e, e, x) + kr.contract(e, x, x, e)
            - kr.contract(x, e, x, e)
            - kr.contract(e, x, e, x));
    let ruvvu = rr.contract(us, vs, vs, us);
    let kahler_sectional = ruvvu - four_term.re;
    let kahler_holomorphic = rr.contract(jus, us, us, jus) - 2.0 * kr.contract(x, x, x, x).re;
    let decomposition = ruvvu - complexified_expansion(&pc.complexified, x, e);
    let (hx, ax) = (holo_slot(x), anti_slot(x));
    let holomorphic_plane =
        rr.contract(us, jus, jus, us) - 2.0 * pc.complexified.contract(&hx, &ax, &hx, &ax).re;
    Ok(IdentityResiduals {
        kahler_bisectional,
        kahler_sectional,
        kahler_holomorphic,
        decomposition,
        holomorphic_plane,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::InducedConnectionJet;
    use crate::metric::{catalog_metric, CatalogMetric};
    use crate::tangent::ChartPoint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_vector(rng: &mut ChaCha8Rng, m: usize) -> RealTangentVector {
        RealTangentVector::new((0..m).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    fn at(name: &str, n: usize, z: Vec<C64>) -> PointCurvature {
        PointCurvature::at(
            &catalog_metric(name, n).unwrap(),
            &ChartPoint::new(z).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn fubini_study_values_at_origin() {
        let pc = at("fubini_study", 1, vec![c(0.0, 0.0)]);
        let plane = Plane::holomorphic(RealTangentVector::basis(1, 0));
        assert!((riemann_sectional(&pc.real, &pc.rjet.g, &plane).unwrap() - 4.0).abs() < 1e-12);
        assert!((chern_sectional(&pc.chern, &pc.jet.h, &plane).unwrap() - 4.0).abs() < 1e-12);
        let xi = HoloTangentVector::new(vec![c(1.0, 0.0)]).unwrap();
        assert!((holo_sectional(&pc.chern, &pc.jet.h, &xi).unwrap() - 2.0).abs() < 1e-12);

        let pc = at("fubini_study", 2, vec![c(0.0, 0.0); 2]);
        let e1 = HoloTangentVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let e2 = HoloTangentVector::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((holo_sectional(&pc.chern, &pc.jet.h, &e1).unwrap() - 2.0).abs() < 1e-12);
        assert!((holo_bisectional(&pc.chern, &pc.jet.h, &e1, &e2).unwrap() - 1.0).abs() < 1e-12);
        let u = RealTangentVector::basis(2, 0);
        let lhs = thm11_lhs(&pc.connection, &pc.rjet.g, &u, &apply_j(&u)).unwrap();
        assert!((lhs - 4.0).abs() < 1e-10);
    }

    #[test]
    fn poincare_holomorphic_plane_is_negative() {
        let pc = at("poincare_ball", 1, vec![c(0.0, 0.0)]);
        let plane = Plane::holomorphic(RealTangentVector::basis(1, 0));
        assert!((riemann_sectional(&pc.real, &pc.rjet.g, &plane).unwrap() + 4.0).abs() < 1e-12);
        let xi = HoloTangentVector::new(vec![c(1.0, 0.0)]).unwrap();
        assert!((holo_sectional(&pc.chern, &pc.jet.h, &xi).unwrap() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn euclidean_values_vanish() {
        let pc = at("euclidean", 2, vec![c(0.5, 0.5), c(-1.0, 2.0)]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pl = Plane::new(random_vector(&mut rng, 4), random_vector(&mut rng, 4)).unwrap();
        assert_eq!(riemann_sectional(&pc.real, &pc.rjet.g, &pl).unwrap(), 0.0);
        assert_eq!(chern_sectional(&pc.chern, &pc.jet.h, &pl).unwrap(), 0.0);
        assert_eq!(
            thm11_lhs(&pc.connection, &pc.rjet.g, &pl.u, &pl.v).unwrap(),
            0.0
        );
        let r = identity_suite(&pc, &pl.u, &pl.v).unwrap();
        assert_eq!(r.kahler_max() + r.universal_max(), 0.0);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        let pc = at("fubini_study", 2, vec![c(0.1, 0.0), c(0.2, 0.0)]);
        let u = RealTangentVector::basis(2, 1);
        let pl = Plane::new(u.clone(), u.scaled(-3.0)).unwrap();
        assert!(matches!(
            riemann_sectional(&pc.real, &pc.rjet.g, &pl),
            Err(Error::DegeneratePlane)
        ));
        assert!(matches!(
            chern_sectional(&pc.chern, &pc.jet.h, &pl),
            Err(Error::DegeneratePlane)
        ));
        let zero = HoloTangentVector::new(vec![c(0.0, 0.0); 2]).unwrap();
        assert!(matches!(
            holo_sectional(&pc.chern, &pc.jet.h, &zero),
            Err(Error::ZeroVector)
        ));
        let short = Plane::new(
            RealTangentVector::basis(1, 0),
            RealTangentVector::basis(1, 1),
        )
        .unwrap();
        assert!(riemann_sectional(&pc.real, &pc.rjet.g, &short).is_err());
    }

    #[test]
    fn sectional_curvatures_are_plane_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for cat in CatalogMetric::ALL {
            let m = cat.definition(2).unwrap();
            let pc = PointCurvature::at(&m, &cat.sample_point(2, &mut rng)).unwrap();
            for _ in 0..10 {
                let (u, v) = (random_vector(&mut rng, 4), random_vector(&mut rng, 4));
                let pl = Plane::new(u.clone(), v.clone()).unwrap();
                let k = riemann_sectional(&pc.real, &pc.rjet.g, &pl).unwrap();
                let kd = chern_sectional(&pc.chern, &pc.jet.h, &pl).unwrap();
                let swapped = Plane::new(v.clone(), u.clone()).unwrap();
                assert!(
                    (chern_sectional(&pc.chern, &pc.jet.h, &swapped).unwrap() - kd).abs()
                        < 1e-10 * kd.abs().max(1.0)
                );
                let (a, b, cc, d): (f64, f64, f64, f64) = (
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                );
                if (a * d - b * cc).abs() < 0.1 {
                    continue;
                }
                let re = Plane::new(
                    RealTangentVector::lin_comb(a, &u, b, &v),
                    RealTangentVector::lin_comb(cc, &u, d, &v),
                )
                .unwrap();
                let k2 = riemann_sectional(&pc.real, &pc.rjet.g, &re).unwrap();
                let kd2 = chern_sectional(&pc.chern, &pc.jet.h, &re).unwrap();
                assert!(
                    (k - k2).abs() < 1e-8 * k.abs().max(1.0),
                    "{cat}: {k} vs {k2}"
                );
                assert!(
                    (kd - kd2).abs() < 1e-8 * kd.abs().max(1.0),
                    "{cat}: {kd} vs {kd2}"
                );
            }
        }
    }

    #[test]
    fn holomorphic_curvatures_are_scale_invariant() {
        let pc = at("hopf", 2, vec![c(0.7, -0.2), c(0.3, 0.5)]);
        let xi = HoloTangentVector::new(vec![c(0.3, 1.0), c(-0.4, 0.2)]).unwrap();
        let eta = HoloTangentVector::new(vec![c(1.0, 0.0), c(0.5, -0.5)]).unwrap();
        let h = holo_sectional(&pc.chern, &pc.jet.h, &xi).unwrap();
        let hs = holo_sectional(&pc.chern, &pc.jet.h, &xi.scaled(c(-0.3, 2.0))).unwrap();
        assert!((h - hs).abs() < 1e-10 * h.abs().max(1.0));
        assert_eq!(holo_bisectional(&pc.chern, &pc.jet.h, &xi, &xi).unwrap(), h);
        let b = holo_bisectional(&pc.chern, &pc.jet.h, &xi, &eta).unwrap();
        assert!(b.is_finite());
    }

    #[test]
    fn induced_curvature_matches_chern_contraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for cat in CatalogMetric::ALL {
            let m = cat.definition(2).unwrap();
            let p = cat.sample_point(2, &mut rng);
            let pc = PointCurvature::at(&m, &p).unwrap();
            let fd = InducedConnectionJet::finite_difference(&m, &p, 1e-5).unwrap();
            for _ in 0..10 {
                let (u, v) = (random_vector(&mut rng, 4), random_vector(&mut rng, 4));
                let rhs = chern_wedge_numerator(&pc.chern, &u, &v).unwrap();
                let lhs = thm11_lhs(&pc.connection, &pc.rjet.g, &u, &v).unwrap();
                assert!(
                    (lhs - rhs).abs() < 1e-9 * rhs.abs().max(1.0),
                    "{cat}: {lhs} vs {rhs}"
                );
                let lhs_fd = thm11_lhs(&fd, &pc.rjet.g, &u, &v).unwrap();
                assert!(
                    (lhs_fd - rhs).abs() < 1e-5 * rhs.abs().max(1.0),
                    "{cat}: {lhs_fd} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn identities_split_by_kahler_condition() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for cat in CatalogMetric::ALL {
            let m = cat.definition(2).unwrap();
            let pc = PointCurvature::at(&m, &cat.sample_point(2, &mut rng)).unwrap();
            for _ in 0..10 {
                let (u, v) = (random_vector(&mut rng, 4), random_vector(&mut rng, 4));
                let r = identity_suite(&pc, &u, &v).unwrap();
                assert!(r.universal_max() < 1e-6, "{cat}: {r:?}");
                if cat.is_kahler(2) {
                    assert!(r.kahler_max() < 1e-7, "{cat}: {r:?}");
                }
            }
        }
        let pc = at("nk_diag", 2, vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let (u, v) = (
            RealTangentVector::basis(2, 0),
            RealTangentVector::basis(2, 1),
        );
        assert!(identity_suite(&pc, &u, &v).unwrap().kahler_sectional.abs() > 1e-3);
    }

    #[test]
    fn kahler_chern_and_riemann_sectional_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for cat in [CatalogMetric::FubiniStudy, CatalogMetric::PoincareBall] {
            let m = cat.definition(3).unwrap();
            let pc = PointCurvature::at(&m, &cat.sample_point(3, &mut rng)).unwrap();
            for _ in 0..20 {
                let pl =
                    Plane::new(random_vector(&mut rng, 6), random_vector(&mut rng, 6)).unwrap();
                let k = riemann_sectional(&pc.real, &pc.rjet.g, &pl).unwrap();
                let kd = chern_sectional(&pc.chern, &pc.jet.h, &pl).unwrap();
                assert!((k - kd).abs() < 1e-7, "{cat}: {k} vs {kd}");
            }
        }
    }

    #[test]
    fn holomorphic_specialization_of_wedge_contraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let pc = at("hopf", 2, vec![c(0.9, 0.1), c(-0.2, 0.4)]);
        for _ in 0..10 {
            let u = random_vector(&mut rng, 4);
            let xi = to_holomorphic(&u);
            let lhs = chern_wedge_numerator(&pc.chern, &u, &apply_j(&u)).unwrap();
            let rhs = 2.0
                * pc.chern
                    .contract(xi.comps(), xi.comps(), xi.comps(), xi.comps())
                    .re;
            assert!((lhs - rhs).abs() < 1e-10 * rhs.abs().max(1.0));
        }
    }
}
