//! Seeded random metrics with optional structural constraints.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::connections::Metric;
use crate::error::{Error, Result};
use crate::gauge::{is_metric_compatible, AdAction, Cocycle};
use crate::local_field::{matrix, LocalField, Matrix, PadicElement, ResidueElement};
use crate::random::SplitMix64;

/// Draws allowed before giving up on a constrained metric.
pub const RETRY_BUDGET: u32 = 100;

#[derive(Clone, Debug)]
pub enum Constraint {
    UnitDiagonal,
    /// off-diagonal entries vanish
    Diagonal,
    AdInvariant(AdAction),
    CocycleCompatible(Cocycle),
}

/// The metric together with the digits that produced it.
#[derive(Clone, Debug)]
pub struct GeneratedMetric {
    pub metric: Metric,
    pub attempts: u32,
    /// residue-field indices of every digit drawn on the accepted attempt,
    /// entry by entry over the upper triangle, digit 0 first
    pub draws: Vec<u64>,
}

#[derive(Serialize)]
pub struct DrawRecord<'a> {
    pub attempts: u32,
    pub draws: &'a [u64],
}

/// Pair orbits of {0..n}^2 under a permutation group, as a representative map.
fn orbit_representatives(n: usize, perms: &[Vec<usize>]) -> Vec<Vec<(usize, usize)>> {
    let mut rep = vec![vec![(n, n); n]; n];
    for i in 0..n {
        for j in 0..n {
            if rep[i][j].0 != n {
                continue;
            }
            let mut orbit = BTreeSet::from([(i, j)]);
            let mut frontier = vec![(i, j)];
            while let Some((a, b)) = frontier.pop() {
                for eps in perms {
                    for next in [(eps[a], eps[b]), (eps[b], eps[a])] {
                        if orbit.insert(next) {
                            frontier.push(next);
                        }
                    }
                }
            }
            let least = *orbit.iter().next().expect("orbit contains (i, j)");
            for &(a, b) in &orbit {
                rep[a][b] = least;
            }
        }
    }
    rep
}

/// Averages q over the cocycle's domain with the action
/// q -> tau^{-1}(u_tau^t q u_tau); the result is compatible with u.
fn cocycle_average(u: &Cocycle, q: &Matrix) -> Result<Matrix> {
    let field = q[0][0].field().clone();
    let mut acc = matrix::zeros(&field, q.len(), q.len(), matrix::min_precision(q));
    for (tau, w) in u.taus.iter().zip(&u.values) {
        let aut = crate::local_field::FieldAut { frob: 0, j: tau.j };
        acc = matrix::add(&acc, &matrix::apply_aut(&w.act_on(q), aut.inverse(&field)));
    }
    let count = PadicElement::from_int(&field, u.taus.len() as i64, matrix::min_precision(q));
    Ok(matrix::scale(&acc, &count.inv()?))
}

/// generate_random_metric: a symmetric unit-determinant matrix whose digits
/// come from the splitmix64 stream seeded with `seed`.
pub fn generate_random_metric(
    field: &Arc<LocalField>,
    n: usize,
    seed: u64,
    constraints: &[Constraint],
) -> Result<GeneratedMetric> {
    let mut rng = SplitMix64::new(seed);
    let nu = field.nu();
    let fq = field.residue_field();
    let perms: Vec<Vec<usize>> = constraints
        .iter()
        .filter_map(|c| if let Constraint::AdInvariant(a) = c { Some(a.table.clone()) } else { None })
        .flatten()
        .collect();
    if perms.iter().any(|p| p.len() != n) {
        return Err(Error::Dimension("Ad-invariance needs N = n".into()));
    }
    let rep = orbit_representatives(n, &perms);
    let unit_diagonal = constraints.iter().any(|c| matches!(c, Constraint::UnitDiagonal));
    let diagonal = constraints.iter().any(|c| matches!(c, Constraint::Diagonal));
    for attempt in 1..=RETRY_BUDGET {
        let mut draws = Vec::new();
        let mut m = matrix::zeros(field, n, n, nu);
        for i in 0..n {
            for j in i..n {
                if rep[i][j] != (i, j) || (diagonal && i != j) {
                    continue;
                }
                let mut ds: Vec<ResidueElement> = Vec::with_capacity(nu as usize);
                for k in 0..nu {
                    let d = if k == 0 && i == j && unit_diagonal { rng.nonzero_residue(field) } else { rng.residue(field) };
                    draws.push(fq.index(&d));
                    ds.push(d);
                }
                m[i][j] = PadicElement::from_digits(field, &ds);
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (a, b) = rep[i.min(j)][i.max(j)];
                m[i][j] = m[a.min(b)][a.max(b)].clone();
            }
        }
        for c in constraints {
            if let Constraint::CocycleCompatible(u) = c {
                if u.n() != n {
                    return Err(Error::Dimension("cocycle size differs from the metric size".into()));
                }
                m = cocycle_average(u, &m)?;
            }
        }
        let Ok(q) = Metric::new(m, 1) else { continue };
        let ok = constraints.iter().all(|c| match c {
            Constraint::UnitDiagonal => q.has_unit_diagonal(),
            Constraint::Diagonal => q.is_diagonal(),
            Constraint::AdInvariant(a) => a.table.iter().all(|eps| q.permuted(eps) == q),
            Constraint::CocycleCompatible(u) => is_metric_compatible(u, &q),
        });
        if ok {
            return Ok(GeneratedMetric { metric: q, attempts: attempt, draws });
        }
    }
    Err(Error::ConstraintUnsatisfiable(RETRY_BUDGET))
}
