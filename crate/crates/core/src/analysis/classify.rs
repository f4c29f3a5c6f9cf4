use crate::curvature::PointCurvature;
use crate::dsl::MetricDefinition;
use crate::error::{Error, Result};
use crate::tangent::{max_norm, ChartPoint};

use super::Check;

/// Default tolerance for the classification flags.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Residuals at a single point. Each is the largest violation divided by
/// `max(1, largest entry)` of the tensor being tested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointClassification {
    pub kahler: f64,
    pub kahler_like: f64,
    pub g_kahler_like: f64,
}

impl PointClassification {
    pub fn of(pc: &PointCurvature) -> Self {
        let n = pc.dim();
        let d = &pc.jet.d1_holo;
        let dscale = d.iter().map(max_norm).fold(1.0, f64::max);
        let mut kahler: f64 = 0.0;
        for g in 0..n {
            for a in 0..n {
                for b in 0..n {
                    kahler = kahler.max((d[g][(a, b)] - d[a][(g, b)]).norm());
                }
            }
        }
        let kr = &pc.chern.kr;
        let kscale = kr.max_abs().max(1.0);
        let kahler_like = kr
            .indexed()
            .map(|((a, b, g, e), x)| (x - kr[(g, b, a, e)]).norm())
            .fold(0.0, f64::max);
        let rscale = pc.complexified.r.max_abs().max(1.0);
        Self {
            kahler: kahler / dscale,
            kahler_like: kahler_like / kscale,
            g_kahler_like: pc.complexified.g_kahler_like_residual() / rscale,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub kahler: Check,
    pub kahler_like: Check,
    pub g_kahler_like: Check,
    pub points: Vec<ChartPoint>,
    pub per_point: Vec<PointClassification>,
    pub tol: f64,
}

/// Classifies `metric` from the worst residuals over `points`.
pub fn classify(
    metric: &MetricDefinition,
    points: &[ChartPoint],
    tol: f64,
) -> Result<ClassificationReport> {
    if points.is_empty() {
        return Err(Error::InvalidArgument(
            "classification needs at least one point".into(),
        ));
    }
    let per_point = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            PointCurvature::at(metric, p)
                .map(|pc| PointClassification::of(&pc))
                .map_err(|e| Error::InadmissiblePoint(format!("point {i}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = |f: fn(&PointClassification) -> f64| per_point.iter().map(f).fold(0.0, f64::max);
    Ok(ClassificationReport {
        kahler: Check::new(worst(|c| c.kahler), tol),
        kahler_like: Check::new(worst(|c| c.kahler_like), tol),
        g_kahler_like: Check::new(worst(|c| c.g_kahler_like), tol),
        points: points.to_vec(),
        per_point,
        tol,
    })
}
