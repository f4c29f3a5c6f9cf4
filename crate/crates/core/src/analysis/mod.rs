//! Metric classification, Lu's inequality, and searches for curvature
//! extrema over planes and holomorphic directions.

mod classify;
mod extremal;
mod lu;
mod probe;
mod search;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tangent::{RealTangentVector, C64};

pub use classify::{classify, ClassificationReport, PointClassification, DEFAULT_TOL};
pub use extremal::{
    extremal_bisectional, extremal_sectional, BisectionalExtremum, ExtremalResult,
    DEFAULT_RESTARTS, SIGN_SAMPLES,
};
pub use lu::{lu_inequality_check, lu_symmetry_check, LuReport, LuStatus};
pub use probe::{corollary12_probe, ProbeReport, ProbeWitness};
pub use search::MAX_ITERATIONS;

/// Default seed for every randomized search.
pub const DEFAULT_SEED: u64 = 20240917;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Max,
    Min,
}

impl Mode {
    /// `+1` when maximizing, `-1` when minimizing.
    pub fn sense(self) -> f64 {
        match self {
            Mode::Max => 1.0,
            Mode::Min => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Max => "max",
            Mode::Min => "min",
        }
    }

    /// The curvature sign under which the extremum is expected on
    /// holomorphic data.
    pub fn required_sign(self) -> Sign {
        match self {
            Mode::Max => Sign::Nonneg,
            Mode::Min => Sign::Nonpos,
        }
    }

    /// Whether `a` beats `b` by more than the tie tolerance.
    pub(crate) fn improves(self, a: f64, b: f64) -> bool {
        self.sense() * (a - b) > TIE_TOL
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Mode::Max),
            "min" => Ok(Mode::Min),
            other => Err(Error::InvalidArgument(format!("unknown mode '{other}'"))),
        }
    }
}

/// Values closer than this are ties; the earlier candidate is kept.
pub const TIE_TOL: f64 = 1e-10;

/// A residual compared against a tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub holds: bool,
    pub residual: f64,
}

impl Check {
    pub fn new(residual: f64, tol: f64) -> Self {
        Self {
            holds: residual < tol,
            residual,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Nonneg,
    Nonpos,
}

impl Sign {
    pub fn name(self) -> &'static str {
        match self {
            Sign::Nonneg => "nonneg",
            Sign::Nonpos => "nonpos",
        }
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonneg" => Ok(Sign::Nonneg),
            "nonpos" => Ok(Sign::Nonpos),
            other => Err(Error::InvalidArgument(format!("unknown sign '{other}'"))),
        }
    }
}

/// Range of a sampled curvature quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignSample {
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

impl SignSample {
    pub(crate) fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut min, mut max, mut samples) = (f64::INFINITY, f64::NEG_INFINITY, 0);
        for v in values {
            min = min.min(v);
            max = max.max(v);
            samples += 1;
        }
        Self { min, max, samples }
    }

    /// Whether every sample has sign `s`, up to `tol`.
    pub fn satisfies(&self, s: Sign, tol: f64) -> bool {
        match s {
            Sign::Nonneg => self.min >= -tol,
            Sign::Nonpos => self.max <= tol,
        }
    }
}

/// The generator for stream `stream` under `seed`; independent of how
/// streams are scheduled.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) fn random_reals<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub(crate) fn random_complex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub(crate) fn real_vector(comps: &[f64]) -> RealTangentVector {
    RealTangentVector::new(comps.to_vec()).expect("even length")
}
