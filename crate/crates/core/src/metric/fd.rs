//! Finite-difference jets, independent of the symbolic derivative path.

use nalgebra::DMatrix;

use super::jet::{eval_grid, MetricJet};
use crate::dsl::MetricDefinition;
use crate::error::{Error, Result};
use crate::tangent::{ChartPoint, C64, I};

/// Relative base step; the actual step is `FD_STEP * max(1, |z|)`.
pub const FD_STEP: f64 = 1e-5;

/// Jet from central differences with the default step.
pub fn fd_oracle_jet(metric: &MetricDefinition, p: &ChartPoint) -> Result<MetricJet> {
    fd_oracle_jet_with_step(metric, p, FD_STEP * p.norm().max(1.0))
}

/// Jet from second-order central differences in the real coordinates,
/// recombined into Wirtinger derivatives.
pub fn fd_oracle_jet_with_step(
    metric: &MetricDefinition,
    p: &ChartPoint,
    step: f64,
) -> Result<MetricJet> {
    let n = metric.dim();
    if p.dim() != n {
        return Err(Error::Dimension {
            expected: n,
            got: p.dim(),
        });
    }
    let eval = |q: &ChartPoint| eval_grid(metric.entries(), n, q.coords());
    let h0 = eval(p)?;
    let m = 2 * n;

    let mut first = Vec::with_capacity(m);
    let mut second = vec![vec![DMatrix::<C64>::zeros(n, n); m]; m];
    for k in 0..m {
        let plus = eval(&p.shifted_real(k, step))?;
        let minus = eval(&p.shifted_real(k, -step))?;
        first.push((&plus - &minus) / C64::new(2.0 * step, 0.0));
        second[k][k] = (&plus - &h0 * C64::new(2.0, 0.0) + &minus) / C64::new(step * step, 0.0);
    }
    for k in 0..m {
        for l in k + 1..m {
            let at =
                |sk: f64, sl: f64| eval(&p.shifted_real(k, sk * step).shifted_real(l, sl * step));
            let mixed = (at(1.0, 1.0)? - at(1.0, -1.0)? - at(-1.0, 1.0)? + at(-1.0, -1.0)?)
                / C64::new(4.0 * step * step, 0.0);
            second[l][k] = mixed.clone();
            second[k][l] = mixed;
        }
    }

    // d/dz = (d/dx - i d/dy)/2, d/dzb = (d/dx + i d/dy)/2
    let half = C64::new(0.5, 0.0);
    let quarter = C64::new(0.25, 0.0);
    let d1_holo = (0..n)
        .map(|a| (&first[a] - &first[n + a] * I) * half)
        .collect();
    let d1_anti = (0..n)
        .map(|a| (&first[a] + &first[n + a] * I) * half)
        .collect();
    let combine = |sg: C64, sd: C64| {
        (0..n)
            .map(|g| {
                (0..n)
                    .map(|d| {
                        (&second[g][d]
                            + &second[g][n + d] * sd
                            + &second[n + g][d] * sg
                            + &second[n + g][n + d] * (sg * sd))
                            * quarter
                    })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    };
    let d2_mixed = combine(-I, I);
    let d2_holo = combine(-I, -I);
    let d2_anti = combine(I, I);
    MetricJet::assemble(p.clone(), h0, d1_holo, d1_anti, d2_mixed, d2_holo, d2_anti)
}

/// Largest entrywise discrepancies between two jets, measured as
/// `|a - b| / max(1, |b|)`, for first- and second-order blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetDiscrepancy {
    pub first: f64,
    pub second: f64,
}

pub fn compare_jets(candidate: &MetricJet, reference: &MetricJet) -> JetDiscrepancy {
    let rel = |a: &DMatrix<C64>, b: &DMatrix<C64>| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm() / y.norm().max(1.0))
            .fold(0.0, f64::max)
    };
    let first = candidate
        .d1_holo
        .iter()
        .zip(&reference.d1_holo)
        .chain(candidate.d1_anti.iter().zip(&reference.d1_anti))
        .map(|(a, b)| rel(a, b))
        .fold(0.0, f64::max);
    let second = [
        (&candidate.d2_mixed, &reference.d2_mixed),
        (&candidate.d2_holo, &reference.d2_holo),
        (&candidate.d2_anti, &reference.d2_anti),
    ]
    .into_iter()
    .flat_map(|(a, b)| a.iter().flatten().zip(b.iter().flatten()))
    .map(|(a, b)| rel(a, b))
    .fold(0.0, f64::max);
    JetDiscrepancy { first, second }
}
