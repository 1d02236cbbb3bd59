//! The gauge group of monomial matrices with root-of-unity entries, the
//! adjoint action, Galois cocycles and their compatibilities, and the
//! Legendre-symbol identities for diagonal metrics.

mod ad;
mod compat;
mod element;
mod legendre;

pub use ad::{ad_invariance_check, ad_map, AdAction};
pub use compat::{
    conjugated_domain, connection_compatibility_check, gauge_covariance_check, is_metric_compatible, is_phi_invariant,
    CompatibilityReport, ConnectionSolver, PointFailure,
};
pub use element::{Cocycle, GaugeElement};
pub use legendre::{legendre_verify, LegendreReport, RatioCheck};
