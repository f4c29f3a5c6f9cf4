use rayon::prelude::*;

use crate::curvature::PointCurvature;
use crate::dsl::MetricDefinition;
use crate::error::{Error, Result};
use crate::sectional::{chern_sectional, riemann_sectional, Plane};
use crate::tangent::ChartPoint;

use super::extremal::{orthonormalize, random_orthonormal_pair};
use super::search::refine;
use super::{real_vector, stream_rng, Mode};

/// The plane where `K` and `K_D` differ the most.
#[derive(Debug, Clone)]
pub struct ProbeWitness {
    pub point_index: usize,
    pub point: ChartPoint,
    pub plane: Plane,
    pub k: f64,
    pub k_d: f64,
}

#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub max_abs_diff: f64,
    pub witness: ProbeWitness,
    pub planes_sampled: usize,
    pub seed: u64,
}

fn gap(pc: &PointCurvature, pl: &Plane) -> Option<(f64, f64)> {
    let k = riemann_sectional(&pc.real, &pc.rjet.g, pl).ok()?;
    let kd = chern_sectional(&pc.chern, &pc.jet.h, pl).ok()?;
    Some((k, kd))
}

/// Samples `samples_per_point` orthonormal planes at each point, keeps the
/// largest `|K - K_D|`, and refines it by local ascent.
pub fn corollary12_probe(
    metric: &MetricDefinition,
    points: &[ChartPoint],
    samples_per_point: usize,
    seed: u64,
) -> Result<ProbeReport> {
    if points.is_empty() {
        return Err(Error::InvalidArgument(
            "probe needs at least one point".into(),
        ));
    }
    let curvatures = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            PointCurvature::at(metric, p)
                .map_err(|e| Error::InadmissiblePoint(format!("point {i}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;

    let per_point: Vec<(f64, Plane)> = curvatures
        .par_iter()
        .enumerate()
        .map(|(i, pc)| {
            let mut rng = stream_rng(seed, i as u64);
            let mut best: Option<(f64, Plane)> = None;
            for _ in 0..samples_per_point.max(1) {
                let pl = random_orthonormal_pair(&pc.rjet.g, &mut rng);
                if let Some((k, kd)) = gap(pc, &pl) {
                    let d = (k - kd).abs();
                    if best.as_ref().is_none_or(|(b, _)| Mode::Max.improves(d, *b)) {
                        best = Some((d, pl));
                    }
                }
            }
            best.expect("orthonormal planes are never degenerate")
        })
        .collect();

    let mut index = 0;
    for (i, (d, _)) in per_point.iter().enumerate() {
        if Mode::Max.improves(*d, per_point[index].0) {
            index = i;
        }
    }
    let pc = &curvatures[index];
    let m = 2 * pc.dim();
    let start = &per_point[index].1;
    let x0: Vec<f64> = start
        .u
        .comps()
        .iter()
        .chain(start.v.comps())
        .copied()
        .collect();
    let objective = |x: &[f64]| {
        let pl = Plane {
            u: real_vector(&x[..m]),
            v: real_vector(&x[m..]),
        };
        gap(pc, &pl).map_or(f64::NAN, |(k, kd)| (k - kd).abs())
    };
    let refined = refine(x0, 1.0, &objective, &|x| orthonormalize(&pc.rjet.g, x));
    let plane = Plane {
        u: real_vector(&refined.x[..m]),
        v: real_vector(&refined.x[m..]),
    };
    let (k, k_d) = gap(pc, &plane).expect("refined plane is orthonormal");
    Ok(ProbeReport {
        max_abs_diff: (k - k_d).abs(),
        witness: ProbeWitness {
            point_index: index,
            point: points[index].clone(),
            plane,
            k,
            k_d,
        },
        planes_sampled: samples_per_point.max(1) * points.len(),
        seed,
    })
}
