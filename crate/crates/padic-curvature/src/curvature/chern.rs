//! Chern curvature for conformal secondary metrics.

use super::reduced::{composite_derivation, Tensor4};
use crate::connections::Metric;
use crate::error::{Error, Result};
use crate::local_field::{HigherFrobenius, PadicElement, ResidueElement};

/// Check q2 = lambda q mod pi^2.
pub fn is_conformal(q: &Metric, q2: &Metric, lambda: &PadicElement) -> bool {
    let n = q.n();
    q2.n() == n
        && (0..n).all(|i| {
            (0..n).all(|j| {
                let lhs = q2.get(i, j).truncate(2);
                let rhs = (lambda * q.get(i, j)).truncate(2);
                lhs == rhs
            })
        })
}

/// chern_curvature: R^k_{ijl} = 1/2 lambda^{-p^{2c}} (d_ij lambda - d_ji lambda) delta_kl mod pi,
/// with d_ab the derivation of the composite lift phi_a phi_b. Laid out as upper[k][i][j][l].
pub fn chern_curvature(q: &Metric, q2: &Metric, lambda: &PadicElement, lifts: &[HigherFrobenius]) -> Result<Tensor4> {
    if !is_conformal(q, q2, lambda) {
        return Err(Error::NotConformal);
    }
    let field = q.field();
    let fq = field.residue_field();
    let big = q.n();
    let n = lifts.len();
    let c = lifts.first().ok_or_else(|| Error::Dimension("need at least one lift".into()))?.s;
    let half = fq.inv(&fq.from_int(2)).expect("p is odd");
    let linv = fq.inv(&fq.frobenius_pow(&lambda.residue(), 2 * c as i64)).ok_or(Error::NotAUnit)?;
    let mut scalar = vec![vec![fq.zero(); n]; n];
    for (i, row) in scalar.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let d = fq.sub(&composite_derivation(lifts, i, j, lambda)?, &composite_derivation(lifts, j, i, lambda)?);
            *v = fq.mul(&fq.mul(&half, &linv), &d);
        }
    }
    Ok((0..big)
        .map(|k| {
            (0..n)
                .map(|i| (0..n).map(|j| (0..big).map(|l| if k == l { scalar[i][j].clone() } else { fq.zero() }).collect()).collect())
                .collect()
        })
        .collect())
}

/// The Chern curvature tensor F[h][i][j] = 1/2 q_hh^{-p^{2c}} (d_ij q_hh - d_ji q_hh) mod pi,
/// the scalar factor for the canonical secondary metric attached to h.
pub fn chern_f_tensor(q: &Metric, lifts: &[HigherFrobenius]) -> Result<Vec<Vec<Vec<ResidueElement>>>> {
    if !q.has_unit_diagonal() {
        return Err(Error::NonUnitDiagonal);
    }
    (0..q.n())
        .map(|h| {
            let lambda = q.get(h, h);
            let q2 = q.scaled(lambda);
            let t = chern_curvature(q, &q2, lambda, lifts)?;
            Ok(t[0].iter().map(|row| row.iter().map(|v| v[0].clone()).collect()).collect())
        })
        .collect()
}
