//! Metric fields: catalog metrics, symbolic and finite-difference jets, and
//! the background Riemannian metric `g = Re h`.

mod catalog;
mod fd;
mod jet;

pub use catalog::{catalog_metric, CatalogMetric};
pub use fd::{compare_jets, fd_oracle_jet, fd_oracle_jet_with_step, JetDiscrepancy, FD_STEP};
#[allow(unused_imports)]
pub(crate) use jet::real_direction;
pub use jet::{
    checked_inverse, jet_at, real_jet_at, MetricJet, RealMetricJet, JET_CONSISTENCY_TOL,
    MAX_CONDITION,
};
