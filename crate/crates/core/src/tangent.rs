//! Complex linear algebra on a single tangent space.
//!
//! Real coordinates are ordered `(x^1..x^n, x^{n+1}..x^{2n})` with
//! `z^a = x^a + i x^{n+a}`. The complex structure acts by
//! `J d/dx^a = d/dx^{n+a}` and `J d/dx^{n+a} = -d/dx^a`, and the bundle map
//! `u -> u_o = (u - iJu)/2` sends `d/dx^a` to `d/dz^a`, so in components
//! `xi^a = u^a + i u^{n+a}`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const I: C64 = C64::new(0.0, 1.0);

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}

/// Local complex coordinates `z = (z^1, .., z^n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint(Vec<C64>);

impl ChartPoint {
    pub fn new(coords: Vec<C64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InadmissiblePoint("point has no coordinates".into()));
        }
        if coords
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InadmissiblePoint("non-finite coordinate".into()));
        }
        Ok(Self(coords))
    }

    pub fn origin(n: usize) -> Self {
        Self(vec![C64::new(0.0, 0.0); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[C64] {
        &self.0
    }

    /// Real coordinates `(Re z, Im z)`.
    pub fn real_coords(&self) -> Vec<f64> {
        self.0
            .iter()
            .map(|z| z.re)
            .chain(self.0.iter().map(|z| z.im))
            .collect()
    }

    pub fn from_real_coords(x: &[f64]) -> Result<Self> {
        if !x.len().is_multiple_of(2) {
            return Err(Error::Dimension {
                expected: x.len() + 1,
                got: x.len(),
            });
        }
        let n = x.len() / 2;
        Self::new((0..n).map(|a| C64::new(x[a], x[n + a])).collect())
    }

    /// Moves the point by `step` along the real coordinate `x^k`.
    pub fn shifted_real(&self, k: usize, step: f64) -> Self {
        let n = self.dim();
        let mut coords = self.0.clone();
        if k < n {
            coords[k].re += step;
        } else {
            coords[k - n].im += step;
        }
        Self(coords)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// A real tangent vector `u = u^i d/dx^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealTangentVector(Vec<f64>);

impl RealTangentVector {
    pub fn new(comps: Vec<f64>) -> Result<Self> {
        if comps.is_empty() || !comps.len().is_multiple_of(2) {
            return Err(Error::Dimension {
                expected: 2 * comps.len().div_ceil(2).max(1),
                got: comps.len(),
            });
        }
        Ok(Self(comps))
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; 2 * n];
        v[i] = 1.0;
        Self(v)
    }

    pub fn comps(&self) -> &[f64] {
        &self.0
    }

    /// Complex dimension `n`.
    pub fn complex_dim(&self) -> usize {
        self.0.len() / 2
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.iter().map(|x| x * s).collect())
    }

    pub fn lin_comb(a: f64, u: &Self, b: f64, v: &Self) -> Self {
        Self(u.0.iter().zip(&v.0).map(|(x, y)| a * x + b * y).collect())
    }
}

/// A holomorphic tangent vector `xi = xi^a d/dz^a`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloTangentVector(Vec<C64>);

impl HoloTangentVector {
    pub fn new(comps: Vec<C64>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::Dimension {
                expected: 1,
                got: 0,
            });
        }
        Ok(Self(comps))
    }

    pub fn comps(&self) -> &[C64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self(self.0.iter().map(|z| z * c).collect())
    }

    pub fn conj(&self) -> Vec<C64> {
        self.0.iter().map(|z| z.conj()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| *z == C64::new(0.0, 0.0))
    }

    /// Inverse of [`to_holomorphic`]: `u^a = Re xi^a`, `u^{n+a} = Im xi^a`.
    pub fn to_real(&self) -> RealTangentVector {
        RealTangentVector(
            self.0
                .iter()
                .map(|z| z.re)
                .chain(self.0.iter().map(|z| z.im))
                .collect(),
        )
    }
}

/// The value `h_{a b-bar}` of a Hermitian metric at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrixValue(DMatrix<C64>);

pub const HERMITIAN_TOL: f64 = 1e-12;

impl HermitianMatrixValue {
    /// Checks Hermitian symmetry (relative to the largest entry) and positive
    /// definiteness.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::Dimension {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        let residual = hermitian_residual(&m);
        let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if residual > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { residual });
        }
        let value = Self(m);
        // real Cholesky on the 2n x 2n form; complex Cholesky in nalgebra does
        // not reject indefinite input
        if value.real_form().cholesky().is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(value)
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn entry(&self, a: usize, b: usize) -> C64 {
        self.0[(a, b)]
    }

    /// The real form `g = [[Re H, Im H], [-Im H, Re H]]`.
    pub fn real_form(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let z = self.0[(i % n, j % n)];
            match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => z.im,
                (false, true) => -z.im,
            }
        })
    }
}

/// Largest entry modulus of a complex matrix.
pub fn max_norm(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermitian_residual(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut r: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            r = r.max((m[(a, b)] - m[(b, a)].conj()).norm());
        }
    }
    r
}

/// `Ju` in split coordinates.
pub fn apply_j(u: &RealTangentVector) -> RealTangentVector {
    let n = u.complex_dim();
    let c = &u.0;
    RealTangentVector(
        (0..2 * n)
            .map(|i| if i < n { -c[n + i] } else { c[i - n] })
            .collect(),
    )
}

/// The bundle map `u -> u_o = (u - iJu)/2`, i.e. `xi^a = u^a + i u^{n+a}`.
pub fn to_holomorphic(u: &RealTangentVector) -> HoloTangentVector {
    let n = u.complex_dim();
    HoloTangentVector((0..n).map(|a| C64::new(u.0[a], u.0[n + a])).collect())
}

/// `h(xi, eta) = h_{a b-bar} xi^a conj(eta^b)`.
pub fn hermitian_pairing(
    h: &HermitianMatrixValue,
    xi: &HoloTangentVector,
    eta: &HoloTangentVector,
) -> Result<C64> {
    check_len(h.dim(), xi.dim())?;
    check_len(h.dim(), eta.dim())?;
    Ok(pairing(h.matrix(), xi.comps(), eta.comps()))
}

/// Unchecked `xi^T M conj(eta)`.
pub(crate) fn pairing(m: &DMatrix<C64>, xi: &[C64], eta: &[C64]) -> C64 {
    let n = xi.len();
    let mut s = C64::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            s += m[(a, b)] * xi[a] * eta[b].conj();
        }
    }
    s
}

/// Real inner product `u^T g v`.
pub fn real_pairing(g: &DMatrix<f64>, u: &RealTangentVector, v: &RealTangentVector) -> f64 {
    let (u, v) = (&u.0, &v.0);
    let mut s = 0.0;
    for i in 0..u.len() {
        for j in 0..v.len() {
            s += g[(i, j)] * u[i] * v[j];
        }
    }
    s
}

pub fn checked_real_pairing(
    g: &DMatrix<f64>,
    u: &RealTangentVector,
    v: &RealTangentVector,
) -> Result<f64> {
    check_len(g.nrows(), u.0.len())?;
    check_len(g.nrows(), v.0.len())?;
    Ok(real_pairing(g, u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_hermitian_pd(n: usize, seed: &[f64]) -> HermitianMatrixValue {
        let a = DMatrix::from_fn(n, n, |i, j| {
            let k = (i * n + j) % seed.len();
            c(seed[k], seed[(k + 1) % seed.len()])
        });
        let m = &a * a.adjoint() + DMatrix::identity(n, n) * c(0.5, 0.0);
        let m = (&m + m.adjoint()) * c(0.5, 0.0);
        HermitianMatrixValue::new(m).unwrap()
    }

    #[test]
    fn basis_vectors_map_to_coordinate_fields() {
        let xi = to_holomorphic(&RealTangentVector::basis(2, 0));
        assert_eq!(xi.comps(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        let xi = to_holomorphic(&RealTangentVector::basis(2, 2));
        assert_eq!(xi.comps(), &[c(0.0, 1.0), c(0.0, 0.0)]);
        let xi = to_holomorphic(&RealTangentVector::new(vec![0.0; 4]).unwrap());
        assert!(xi.is_zero());
    }

    #[test]
    fn j_acts_on_basis() {
        let ju = apply_j(&RealTangentVector::basis(2, 0));
        assert_eq!(ju, RealTangentVector::basis(2, 2));
        let ju = apply_j(&RealTangentVector::basis(2, 2));
        assert_eq!(ju.comps(), &[-1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn pairing_examples() {
        let h = HermitianMatrixValue::identity(2);
        let e1 = HoloTangentVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let e2 = HoloTangentVector::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(hermitian_pairing(&h, &e1, &e1).unwrap(), c(1.0, 0.0));
        assert_eq!(hermitian_pairing(&h, &e1, &e2).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn dimension_errors() {
        let h = HermitianMatrixValue::identity(2);
        let e = HoloTangentVector::new(vec![c(1.0, 0.0)]).unwrap();
        assert!(matches!(
            hermitian_pairing(&h, &e, &e),
            Err(Error::Dimension {
                expected: 2,
                got: 1
            })
        ));
        assert!(RealTangentVector::new(vec![1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn rejects_non_hermitian_and_indefinite() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            HermitianMatrixValue::new(m),
            Err(Error::NotHermitian { .. })
        ));
        let m =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            HermitianMatrixValue::new(m),
            Err(Error::NotPositiveDefinite)
        ));
    }

    proptest! {
        #[test]
        fn j_squared_is_minus_identity(v in prop::collection::vec(-10.0f64..10.0, 6)) {
            let u = RealTangentVector::new(v).unwrap();
            let jju = apply_j(&apply_j(&u));
            for (a, b) in jju.comps().iter().zip(u.comps()) {
                prop_assert_eq!(*a, -*b);
            }
        }

        #[test]
        fn j_commutes_with_bundle_map(v in prop::collection::vec(-10.0f64..10.0, 4)) {
            let u = RealTangentVector::new(v).unwrap();
            let lhs = to_holomorphic(&apply_j(&u));
            let rhs = to_holomorphic(&u).scaled(I);
            for (a, b) in lhs.comps().iter().zip(rhs.comps()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }

        #[test]
        fn real_metric_is_real_part_of_hermitian_pairing(
            seed in prop::collection::vec(-1.0f64..1.0, 5),
            u in prop::collection::vec(-3.0f64..3.0, 6),
            v in prop::collection::vec(-3.0f64..3.0, 6),
        ) {
            let h = random_hermitian_pd(3, &seed);
            let g = h.real_form();
            let (u, v) = (RealTangentVector::new(u).unwrap(), RealTangentVector::new(v).unwrap());
            let lhs = real_pairing(&g, &u, &v);
            let rhs = hermitian_pairing(&h, &to_holomorphic(&u), &to_holomorphic(&v)).unwrap().re;
            prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()));
            // conjugate symmetry and positivity
            let (xi, eta) = (to_holomorphic(&u), to_holomorphic(&v));
            let a = hermitian_pairing(&h, &xi, &eta).unwrap();
            let b = hermitian_pairing(&h, &eta, &xi).unwrap();
            prop_assert!((a - b.conj()).norm() < 1e-10 * (1.0 + a.norm()));
            let nn = hermitian_pairing(&h, &xi, &xi).unwrap();
            prop_assert!(nn.im.abs() < 1e-10 * (1.0 + nn.re));
            if !xi.is_zero() { prop_assert!(nn.re > 0.0); }
        }

        #[test]
        fn bundle_map_is_injective_and_real_linear(
            u in prop::collection::vec(-3.0f64..3.0, 4),
            v in prop::collection::vec(-3.0f64..3.0, 4),
            a in -2.0f64..2.0, b in -2.0f64..2.0,
        ) {
            let (u, v) = (RealTangentVector::new(u).unwrap(), RealTangentVector::new(v).unwrap());
            let lhs = to_holomorphic(&RealTangentVector::lin_comb(a, &u, b, &v));
            let (xu, xv) = (to_holomorphic(&u), to_holomorphic(&v));
            for k in 0..2 {
                let rhs = xu.comps()[k] * a + xv.comps()[k] * b;
                prop_assert!((lhs.comps()[k] - rhs).norm() < 1e-12);
            }
            prop_assert_eq!(xu.to_real(), u);
        }
    }
}
