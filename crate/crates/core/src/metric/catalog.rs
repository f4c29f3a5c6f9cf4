//! Built-in test metrics, generated as DSL source for any dimension.
//!
//! Domains: `euclidean`, `fubini_study` and `nk_diag` are defined on all of
//! `C^n`; `poincare_ball` on `|z| < 1`; `hopf` on `z != 0`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::dsl::{parse_metric, MetricDefinition};
use crate::error::{Error, Result};
use crate::tangent::ChartPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogMetric {
    Euclidean,
    FubiniStudy,
    PoincareBall,
    Hopf,
    NkDiag,
}

impl CatalogMetric {
    pub const ALL: [CatalogMetric; 5] = [
        CatalogMetric::Euclidean,
        CatalogMetric::FubiniStudy,
        CatalogMetric::PoincareBall,
        CatalogMetric::Hopf,
        CatalogMetric::NkDiag,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatalogMetric::Euclidean => "euclidean",
            CatalogMetric::FubiniStudy => "fubini_study",
            CatalogMetric::PoincareBall => "poincare_ball",
            CatalogMetric::Hopf => "hopf",
            CatalogMetric::NkDiag => "nk_diag",
        }
    }

    pub fn min_dim(self) -> usize {
        match self {
            CatalogMetric::Hopf => 2,
            _ => 1,
        }
    }

    /// Whether the metric is Kähler in dimension `n`.
    pub fn is_kahler(self, n: usize) -> bool {
        match self {
            CatalogMetric::Euclidean | CatalogMetric::FubiniStudy | CatalogMetric::PoincareBall => {
                true
            }
            CatalogMetric::Hopf => false,
            CatalogMetric::NkDiag => n < 2,
        }
    }

    pub fn source(self, n: usize) -> Result<String> {
        if n < self.min_dim() {
            return Err(Error::InvalidDimension {
                name: self.name().into(),
                n,
                reason: if n == 0 {
                    "dimension must be at least 1"
                } else {
                    "requires n >= 2"
                },
            });
        }
        let modulus = (1..=n)
            .map(|k| format!("z{k}*zb{k}"))
            .collect::<Vec<_>>()
            .join("+");
        let mut src = format!("dim {n};\n");
        let mut push =
            |a: usize, b: usize, e: String| src.push_str(&format!("h[{a},{b}] = {e};\n"));
        match self {
            CatalogMetric::Euclidean => push(1, 1, "1".into()),
            CatalogMetric::FubiniStudy | CatalogMetric::PoincareBall => {
                let (s, sign) = if self == CatalogMetric::FubiniStudy {
                    (format!("(1+{modulus})"), "-")
                } else {
                    (format!("(1-({modulus}))"), "+")
                };
                for a in 1..=n {
                    for b in a..=n {
                        let cross = format!("zb{a}*z{b}/{s}^2");
                        if a == b {
                            push(a, b, format!("1/{s}{sign}{cross}"));
                        } else if sign == "-" {
                            push(a, b, format!("-{cross}"));
                        } else {
                            push(a, b, cross);
                        }
                    }
                }
            }
            CatalogMetric::Hopf => {
                for a in 1..=n {
                    push(a, a, format!("1/({modulus})"));
                }
            }
            CatalogMetric::NkDiag => {
                if n >= 2 {
                    push(2, 2, "exp(z1*zb1)".into());
                } else {
                    push(1, 1, "1".into());
                }
            }
        }
        Ok(src)
    }

    pub fn definition(self, n: usize) -> Result<MetricDefinition> {
        let src = self.source(n)?;
        let def = parse_metric(&src).expect("catalog source is well-formed");
        Ok(def.with_name(self.name()))
    }

    /// Draws a point well inside the metric's domain.
    pub fn sample_point<R: Rng + ?Sized>(self, n: usize, rng: &mut R) -> ChartPoint {
        let mut disk = |r: f64| -> Complex64 {
            let rho = r * rng.gen::<f64>().sqrt();
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(rho, t)
        };
        let coords: Vec<Complex64> = match self {
            CatalogMetric::Euclidean | CatalogMetric::FubiniStudy | CatalogMetric::NkDiag => {
                (0..n).map(|_| disk(1.0)).collect()
            }
            CatalogMetric::PoincareBall => {
                let r = 0.65 / (n as f64).sqrt();
                (0..n).map(|_| disk(r)).collect()
            }
            CatalogMetric::Hopf => {
                let v: Vec<Complex64> = (0..n).map(|_| disk(1.0)).collect();
                let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-3);
                let radius = rng.gen_range(0.5..1.5);
                v.into_iter().map(|z| z * (radius / norm)).collect()
            }
        };
        ChartPoint::new(coords).expect("sampled coordinates are finite")
    }
}

impl fmt::Display for CatalogMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CatalogMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogMetric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMetric(s.to_string()))
    }
}

/// Looks up a catalog metric by name.
pub fn catalog_metric(name: &str, n: usize) -> Result<MetricDefinition> {
    name.parse::<CatalogMetric>()?.definition(n)
}
