//! Curvature of Frobenius-lift connections: the reduced tensor mod pi, its
//! closed forms and symmetries, full-precision and multiplicative curvature
//! at points, Chern curvature, Kulkarni-Nomizu witnesses, and invariants.

mod chern;
mod full;
pub mod invariants;
mod matrices;
mod reduced;
mod setup;

pub use chern::{chern_curvature, chern_f_tensor, is_conformal};
pub use full::{
    curvature_full_at_point, curvature_full_residues, multiplicative_closed_form, multiplicative_curvature,
    MultiplicativeCurvatureValue, PointEvaluation,
};
pub use invariants::{InvariantData, InvariantExpression};
pub use matrices::{connection_matrix, curvature_matrix, reduced_matrices, ReducedMatrices, TwistedMatrix};
pub use reduced::{
    composite_derivation, curvature_from_christoffel, curvature_reduced, kn_from, kn_value, kulkarni_nomizu_witnesses,
    lower_curvature, symmetry_report, tery_rhs, CurvatureIdentity, CurvatureTensor, KnWitness, SymmetryReport, Tensor4,
    Violation,
};
pub use setup::{leading_index, permute_labeling, CurvatureSetup};

use crate::error::Result;
use crate::local_field::ResidueElement;

/// sigma_equivariance_check: R_ijkl(eps q, omega o eps) = R_{eps(i) eps(j) eps(k) eps(l)}(q, omega).
pub fn sigma_equivariance_check(setup: &CurvatureSetup, eps: &[usize]) -> Result<bool> {
    let base = curvature_reduced(setup)?.lowered;
    let moved = curvature_reduced(&setup.permuted(eps)?)?.lowered;
    let n = eps.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    if moved[i][j][k][l] != base[eps[i]][eps[j]][eps[k]][eps[l]] {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// The data an invariant sees for a setup: qbar, R_ijkl and the Chern tensor.
pub fn invariant_data(setup: &CurvatureSetup) -> Result<InvariantData> {
    let fq = setup.field().residue_field();
    let x = curvature_reduced(setup)?.lowered;
    let y = if setup.q.has_unit_diagonal() { Some(chern_f_tensor(&setup.q, &setup.lifts(1)?)?) } else { None };
    Ok(InvariantData::new(fq, setup.q.residue(), Some(x), y))
}

/// invariant_evaluate at the setup.
pub fn invariant_evaluate(expr: &InvariantExpression, setup: &CurvatureSetup) -> Result<ResidueElement> {
    expr.evaluate(setup.field().residue_field(), &invariant_data(setup)?)
}
