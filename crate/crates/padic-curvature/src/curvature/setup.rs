//! The data a curvature computation needs at degrees c and 2c.

use std::sync::Arc;

use crate::connections::{
    canonical_secondary_metric, canonical_torsion, christoffel_chern_mod_pi, christoffel_lc_mod_pi, solve_chern_at_point,
    solve_levi_civita_at_point, ChristoffelModPi, ConnectionAtPoint, Flavor, Metric, TorsionKind, TorsionSymbol,
};
use crate::error::{Error, Result};
use crate::local_field::{pi_derivation, HigherFrobenius, LocalField, Matrix, PadicElement, ResidueElement};
use crate::weil_monoid::{star, symbol_tables, Gamma, Labeling, WeilMonoid};

/// A Galois-backed Weil monoid with a labeling, the metrics q^{(c)}, q^{(2c)}
/// and the torsion symbols at both degrees.
#[derive(Clone, Debug)]
pub struct CurvatureSetup {
    pub monoid: WeilMonoid,
    pub labeling: Labeling,
    pub flavor: Flavor,
    pub q: Metric,
    pub q2: Metric,
    pub torsion: TorsionSymbol,
    pub torsion2: TorsionSymbol,
}

/// The index h with phi_i^{(2c)} = theta(phi_h) phi_i for a coherent labeling.
pub fn leading_index(labeling: &Labeling) -> usize {
    match &labeling.gamma {
        Some(Gamma::Constant(h)) => *h,
        Some(Gamma::Sequence(v)) => v.first().copied().unwrap_or(0),
        None => 0,
    }
}

/// Relabel by eps: omega'(i) = omega(eps(i)), h' = eps^{-1}(h).
pub fn permute_labeling(labeling: &Labeling, eps: &[usize]) -> Labeling {
    let n = eps.len();
    let mut inv = vec![0; n];
    for (i, &e) in eps.iter().enumerate() {
        inv[e] = i;
    }
    let relabel = |v: &Vec<usize>| (0..n).map(|i| v[eps[i]]).collect::<Vec<_>>();
    Labeling {
        omega: relabel(&labeling.omega),
        gamma: labeling.gamma.as_ref().map(|g| match g {
            Gamma::Constant(h) => Gamma::Constant(inv[*h]),
            Gamma::Sequence(v) => Gamma::Sequence(v.iter().map(|h| inv[*h]).collect()),
        }),
        explicit: labeling.explicit.iter().map(relabel).collect(),
    }
}

impl CurvatureSetup {
    /// Canonical choices at degree 2c: the secondary metric q_hh q and the
    /// canonical torsion of the given kind.
    pub fn canonical(
        monoid: WeilMonoid,
        labeling: Labeling,
        flavor: Flavor,
        q: Metric,
        kind: TorsionKind,
        scale: &PadicElement,
    ) -> Result<Self> {
        if monoid.galois().is_none() {
            return Err(Error::InvalidSpec("curvature needs a Galois-backed monoid to realize the lifts".into()));
        }
        let c = monoid.c();
        let h = leading_index(&labeling);
        let q2 = if h < q.n() { canonical_secondary_metric(&q, h, 2 * c, c)? } else { Metric::new(q.entries.clone(), 2 * c)? };
        let field = q.field().clone();
        let torsion_at = |s: u32| -> Result<TorsionSymbol> {
            Ok(match kind {
                TorsionKind::Zero => TorsionSymbol::Zero,
                _ => canonical_torsion(&field, &symbol_tables(&monoid, &labeling, s, s)?, kind, scale),
            })
        };
        let torsion = torsion_at(c)?;
        let torsion2 = torsion_at(2 * c)?;
        let q = Metric::new(q.entries, c)?;
        Ok(CurvatureSetup { monoid, labeling, flavor, q, q2, torsion, torsion2 })
    }

    pub fn field(&self) -> &Arc<LocalField> {
        self.q.field()
    }
    pub fn n(&self) -> usize {
        self.monoid.n()
    }
    pub fn c(&self) -> u32 {
        self.monoid.c()
    }

    /// phi_i^{(tc)} for i = 0..n.
    pub fn lifts(&self, t: u32) -> Result<Vec<HigherFrobenius>> {
        (0..self.n())
            .map(|i| {
                self.monoid
                    .realize(self.labeling.element(&self.monoid, t, i))
                    .ok_or_else(|| Error::InvalidSpec("monoid has no Galois realization".into()))
            })
            .collect()
    }

    /// (i * j) at degrees (c, c).
    pub fn star(&self, i: usize, j: usize) -> usize {
        star(&self.monoid, &self.labeling, i, j, self.c(), self.c())
    }

    pub fn metric(&self, t: u32) -> &Metric {
        if t == 1 {
            &self.q
        } else {
            &self.q2
        }
    }
    pub fn torsion_at(&self, t: u32) -> &TorsionSymbol {
        if t == 1 {
            &self.torsion
        } else {
            &self.torsion2
        }
    }

    /// Closed-form Christoffel symbols mod pi at the identity, degree tc.
    pub fn christoffel(&self, t: u32) -> Result<ChristoffelModPi> {
        let lifts = self.lifts(t)?;
        match self.flavor {
            Flavor::LeviCivita => christoffel_lc_mod_pi(self.metric(t), self.torsion_at(t), &lifts),
            Flavor::Chern => christoffel_chern_mod_pi(self.metric(t), &lifts),
        }
    }

    /// The connection of degree tc at a point.
    pub fn solve(&self, t: u32, point: &Matrix) -> Result<ConnectionAtPoint> {
        let lifts = self.lifts(t)?;
        match self.flavor {
            Flavor::LeviCivita => solve_levi_civita_at_point(self.metric(t), self.torsion_at(t), &lifts, point),
            Flavor::Chern => solve_chern_at_point(self.metric(t), &lifts, point),
        }
    }

    /// delta_i pi mod pi for the degree-tc lifts.
    pub fn delta_pi(&self, t: u32) -> Result<Vec<ResidueElement>> {
        let pi = PadicElement::pi(self.field(), self.field().nu().max(2));
        self.lifts(t)?.iter().map(|l| pi_derivation(l, &pi).map(|d| d.residue())).collect()
    }

    /// The same configuration with indices relabelled by eps: (eps q)_{ij} = q_{eps(i) eps(j)}.
    pub fn permuted(&self, eps: &[usize]) -> Result<Self> {
        Ok(CurvatureSetup {
            monoid: self.monoid.clone(),
            labeling: permute_labeling(&self.labeling, eps),
            flavor: self.flavor,
            q: self.q.permuted(eps),
            q2: self.q2.permuted(eps),
            torsion: self.torsion.permuted(eps),
            torsion2: self.torsion2.permuted(eps),
        })
    }
}
