//! Metrics, torsion symbols, and Levi-Civita and Chern pi-connections at a point.

mod christoffel;
mod metric;
mod solve;

pub use christoffel::{
    christoffel_chern_mod_pi, christoffel_from_connection, christoffel_lc_mod_pi, frobenius_metric_residue, lower,
    metric_derivations, raise, verify_prop_burta, BurtaReport, ChristoffelModPi,
};
pub use metric::{
    canonical_secondary_metric, canonical_torsion, secondary_metric_from_words, Metric, TorsionKind, TorsionSymbol,
};
pub use solve::{
    chern_residual, metric_residual, point_data, solve_chern_at_point, solve_levi_civita_at_point,
    solve_levi_civita_digitwise, symmetry_residual, verify_connection, ConnectionAtPoint, Flavor, PointData,
};
