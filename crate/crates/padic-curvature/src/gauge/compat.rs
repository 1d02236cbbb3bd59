//! Frobenius invariance of cocycles and their compatibility with metrics and
//! connections, checked pointwise.

use serde::Serialize;

use super::element::{Cocycle, GaugeElement};
use crate::connections::{solve_chern_at_point, solve_levi_civita_at_point, ConnectionAtPoint, Flavor, Metric, TorsionSymbol};
use crate::error::{Error, Result};
use crate::local_field::{matrix, GaloisElement, HigherFrobenius, LocalField, Matrix, PadicElement};

/// tau_{j,i} = phi_i tau_j phi_i^{-1} for every lift and every tau_j.
pub fn conjugated_domain(u: &Cocycle, lifts: &[HigherFrobenius], field: &LocalField) -> Result<Vec<Vec<GaloisElement>>> {
    lifts
        .iter()
        .map(|phi| {
            let a = phi.aut(field);
            u.taus
                .iter()
                .map(|&tau| {
                    let c = a.compose(Cocycle::aut(tau), field).compose(a.inverse(field), field);
                    let g = GaloisElement { j: c.j };
                    if c.frob != 0 || u.value(g).is_none() {
                        return Err(Error::NotNormalized);
                    }
                    Ok(g)
                })
                .collect()
        })
        .collect()
}

/// is_phi_invariant: u_{tau_{j,i}} = u_{tau_j} for all i, j.
pub fn is_phi_invariant(u: &Cocycle, lifts: &[HigherFrobenius], field: &LocalField) -> Result<bool> {
    let conj = conjugated_domain(u, lifts, field)?;
    Ok(conj.iter().all(|row| row.iter().zip(&u.values).all(|(g, v)| u.value(*g) == Some(v))))
}

/// is_metric_compatible: tau_j(q) = u_{tau_j}^t q u_{tau_j} entrywise, at full precision.
pub fn is_metric_compatible(u: &Cocycle, q: &Metric) -> bool {
    u.taus.iter().zip(&u.values).all(|(tau, w)| {
        w.n() == q.n() && matrix::apply_aut(&q.entries, Cocycle::aut(*tau)) == w.act_on(&q.entries)
    })
}

/// A pointwise connection: metric, flavor, torsion and lifts.
#[derive(Clone, Debug)]
pub struct ConnectionSolver {
    pub q: Metric,
    pub flavor: Flavor,
    pub torsion: TorsionSymbol,
    pub lifts: Vec<HigherFrobenius>,
}

impl ConnectionSolver {
    pub fn new(q: Metric, flavor: Flavor, torsion: TorsionSymbol, lifts: Vec<HigherFrobenius>) -> Self {
        ConnectionSolver { q, flavor, torsion, lifts }
    }

    /// The Levi-Civita connection for the torsion (p / pi) L, as required by
    /// the torsor compatibility statement. Returns the solver and whether a
    /// rescaling happened (only when e > 1).
    pub fn levi_civita_for_torsor(q: Metric, torsion: &TorsionSymbol, lifts: Vec<HigherFrobenius>) -> (Self, bool) {
        let field = q.field().clone();
        let e = field.e() as u32;
        let scaled = e > 1 && *torsion != TorsionSymbol::Zero;
        let torsion = if e > 1 { torsion.rescaled(&PadicElement::pi_pow(&field, e - 1, field.nu())) } else { torsion.clone() };
        (ConnectionSolver { q, flavor: Flavor::LeviCivita, torsion, lifts }, scaled)
    }

    pub fn solve(&self, a: &Matrix) -> Result<ConnectionAtPoint> {
        match self.flavor {
            Flavor::LeviCivita => solve_levi_civita_at_point(&self.q, &self.torsion, &self.lifts, a),
            Flavor::Chern => solve_chern_at_point(&self.q, &self.lifts, a),
        }
    }

    /// The same connection data for the gauge-transformed metric w^t q w.
    pub fn transformed(&self, w: &GaugeElement) -> Result<Self> {
        Ok(ConnectionSolver { q: Metric::new(w.act_on(&self.q.entries), self.q.s)?, ..self.clone() })
    }
}

fn agree(a: &Matrix, b: &Matrix) -> bool {
    let prec = matrix::min_precision(a).min(matrix::min_precision(b));
    matrix::truncate(a, prec) == matrix::truncate(b, prec)
}

/// One failed instance of a pointwise identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointFailure {
    pub sample: usize,
    pub tau: usize,
    pub lift: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    pub samples: usize,
    pub failures: Vec<PointFailure>,
}

impl CompatibilityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// connection_compatibility_check: tau_j(Lambda_i(tau_j^{-1}(u_{tau_j}^{-1} a))) = Lambda_i(a)
/// at every sample point a.
pub fn connection_compatibility_check(u: &Cocycle, solver: &ConnectionSolver, points: &[Matrix]) -> Result<CompatibilityReport> {
    let field = solver.q.field().clone();
    let fq = field.residue_field();
    let mut failures = Vec::new();
    for (k, a) in points.iter().enumerate() {
        let at_a = solver.solve(a)?;
        for (tau, w) in u.taus.iter().zip(&u.values) {
            let t = Cocycle::aut(*tau);
            let winv = w.inverse(fq).matrix(&field, matrix::min_precision(a));
            let b = matrix::apply_aut(&matrix::mul(&winv, a), t.inverse(&field));
            let at_b = solver.solve(&b)?;
            for i in 0..solver.lifts.len() {
                if !agree(&matrix::apply_aut(&at_b.lambdas[i], t), &at_a.lambdas[i]) {
                    failures.push(PointFailure { sample: k, tau: tau.j, lift: i });
                }
            }
        }
    }
    Ok(CompatibilityReport { samples: points.len(), failures })
}

/// Gauge covariance at one point: the connection of w^t q w at a equals the
/// connection of q at w a.
pub fn gauge_covariance_check(solver: &ConnectionSolver, w: &GaugeElement, a: &Matrix) -> Result<bool> {
    let field = solver.q.field().clone();
    let moved = solver.transformed(w)?.solve(a)?;
    let wa = matrix::mul(&w.matrix(&field, matrix::min_precision(a)), a);
    let direct = solver.solve(&wa)?;
    Ok(moved.lambdas.iter().zip(&direct.lambdas).all(|(x, y)| agree(x, y)))
}
