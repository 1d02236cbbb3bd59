//! Weil monoids as semidirect products cN x S, labelings and symbol tables.

use std::sync::Arc;

use serde::Serialize;

use super::group::FiniteGroup;
use crate::error::{Error, Result};
use crate::local_field::{FieldAut, GaloisElement, HigherFrobenius, LocalField, PadicElement};

/// Element (t c, g) of the monoid; `t` counts multiples of the minimal degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonoidElement {
    pub t: u32,
    pub g: usize,
}

/// Concrete Frobenius automorphisms realizing the monoid inside Aut(E).
#[derive(Clone, Debug)]
pub struct GaloisBacking {
    pub field: Arc<LocalField>,
    /// Degree-c lift phi with phi^t sigma_g realizing (t, g).
    pub phi: HigherFrobenius,
    /// Group element index -> Galois element.
    pub subgroup: Vec<GaloisElement>,
}

#[derive(Clone, Debug)]
pub struct WeilMonoid {
    group: FiniteGroup,
    theta: Vec<usize>,
    c: u32,
    galois: Option<GaloisBacking>,
}

impl WeilMonoid {
    /// from_pair(S, theta, c).
    pub fn from_pair(group: FiniteGroup, theta: Vec<usize>, c: u32) -> Result<Self> {
        if !group.is_automorphism(&theta) {
            return Err(Error::NotAnAutomorphism);
        }
        if c == 0 {
            return Err(Error::Schema("minimal degree c must be positive".into()));
        }
        Ok(WeilMonoid { group, theta, c, galois: None })
    }

    /// The monoid {phi^t sigma : sigma in S} with theta(sigma) = phi^{-1} sigma phi.
    pub fn galois_realization(field: &Arc<LocalField>, phi: HigherFrobenius, subgroup: &[GaloisElement]) -> Result<Self> {
        let e = field.e();
        if subgroup.iter().any(|s| s.j % e != 0) {
            field.spec().require_galois()?;
        }
        let auts: Vec<FieldAut> = subgroup.iter().map(|s| FieldAut { frob: 0, j: s.j % e }).collect();
        let index = |a: FieldAut| auts.iter().position(|x| *x == a);
        let mut table = Vec::new();
        for a in &auts {
            let mut row = Vec::new();
            for b in &auts {
                row.push(index(a.compose(*b, field)).ok_or_else(|| Error::Schema("subgroup is not closed".into()))?);
            }
            table.push(row);
        }
        let group = FiniteGroup::from_table(table)?;
        let pa = phi.aut(field);
        let pinv = pa.inverse(field);
        let theta = auts
            .iter()
            .map(|s| index(pinv.compose(*s, field).compose(pa, field)).ok_or(Error::NotNormalized))
            .collect::<Result<Vec<_>>>()?;
        let mut m = Self::from_pair(group, theta, phi.s)?;
        m.galois = Some(GaloisBacking { field: field.clone(), phi, subgroup: subgroup.to_vec() });
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.group.order()
    }
    pub fn c(&self) -> u32 {
        self.c
    }
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }
    pub fn theta(&self) -> &[usize] {
        &self.theta
    }
    pub fn galois(&self) -> Option<&GaloisBacking> {
        self.galois.as_ref()
    }

    pub fn theta_pow(&self, t: u32, mut g: usize) -> usize {
        for _ in 0..t {
            g = self.theta[g];
        }
        g
    }

    pub fn theta_order(&self) -> u32 {
        (1..=self.n() as u32 * 24).find(|&k| (0..self.n()).all(|g| self.theta_pow(k, g) == g)).unwrap_or(1)
    }

    /// (t1, s1)(t2, s2) = (t1 + t2, theta^{t2}(s1) s2).
    pub fn compose(&self, a: MonoidElement, b: MonoidElement) -> MonoidElement {
        MonoidElement { t: a.t + b.t, g: self.group.mul(self.theta_pow(b.t, a.g), b.g) }
    }

    pub fn is_abelian(&self) -> bool {
        self.group.is_abelian() && (0..self.n()).all(|g| self.theta[g] == g)
    }

    /// Whether x commutes with every element of D^{(c)} (hence with all of D).
    pub fn is_central(&self, x: MonoidElement) -> bool {
        (0..self.n()).all(|h| {
            let y = MonoidElement { t: 1, g: h };
            self.compose(x, y) == self.compose(y, x)
        })
    }

    /// Least t with (phi_i^{(c)})^t central, searching t <= n * ord(theta).
    pub fn centralizing_power(&self, labeling: &Labeling, i: usize) -> Option<u32> {
        let x = MonoidElement { t: 1, g: labeling.omega[i] };
        let bound = self.n() as u32 * self.theta_order();
        let mut acc = x;
        for t in 1..=bound {
            if self.is_central(acc) {
                return Some(t);
            }
            acc = self.compose(acc, x);
        }
        None
    }

    /// Exhaustive associativity of the semidirect law up to degree `t_max`.
    pub fn check_associative(&self, t_max: u32) -> bool {
        let n = self.n();
        let els: Vec<MonoidElement> = (1..=t_max).flat_map(|t| (0..n).map(move |g| MonoidElement { t, g })).collect();
        els.iter().all(|&a| {
            els.iter().all(|&b| els.iter().all(|&c| self.compose(self.compose(a, b), c) == self.compose(a, self.compose(b, c))))
        })
    }

    /// The Frobenius lift realizing a monoid element, when Galois-backed.
    pub fn realize(&self, x: MonoidElement) -> Option<HigherFrobenius> {
        let gb = self.galois.as_ref()?;
        let field = &gb.field;
        let mut acc = HigherFrobenius::new(0, 0);
        for _ in 0..x.t {
            acc = acc.compose(&gb.phi, field);
        }
        Some(acc.compose(&HigherFrobenius { s: 0, sigma: gb.subgroup[x.g] }, field))
    }

    /// Check that composing realized lifts agrees with the abstract law on
    /// the given sample elements.
    pub fn check_galois_consistency(&self, t_max: u32, samples: &[PadicElement]) -> bool {
        if self.galois.is_none() {
            return true;
        }
        let n = self.n();
        for ta in 1..=t_max {
            for tb in 1..=t_max {
                for a in 0..n {
                    for b in 0..n {
                        let x = MonoidElement { t: ta, g: a };
                        let y = MonoidElement { t: tb, g: b };
                        let lhs = (self.realize(x).unwrap(), self.realize(y).unwrap());
                        let rhs = self.realize(self.compose(x, y)).unwrap();
                        for s in samples {
                            if lhs.0.apply(&lhs.1.apply(s)) != rhs.apply(s) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// How degree s+c labels arise from degree s labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gamma {
    /// gamma(s) = h for all s (the canonical labeling attached to omega and h).
    Constant(usize),
    /// gamma(t c) = values[t - 1], the last value repeating.
    Sequence(Vec<usize>),
}

/// A labeling symbol: omega^{(c)} plus either a coherence scheme or explicit
/// per-degree bijections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    /// omega[i] = group element of phi_i^{(c)}.
    pub omega: Vec<usize>,
    pub gamma: Option<Gamma>,
    /// explicit[t - 1][i] = group element of phi_i^{(tc)} (t >= 1), overriding gamma.
    pub explicit: Vec<Vec<usize>>,
}

impl Labeling {
    /// build_coherent_labeling(omega, gamma).
    pub fn coherent(omega: Vec<usize>, gamma: Gamma) -> Self {
        Labeling { omega, gamma: Some(gamma), explicit: Vec::new() }
    }

    /// The canonical labeling attached to omega and h.
    pub fn canonical(omega: Vec<usize>, h: usize) -> Self {
        Self::coherent(omega, Gamma::Constant(h))
    }

    /// omega = identity ordering of the group elements, h = the index
    /// labelling the identity element (so phi_i^{(s)} = phi^{s/c} sigma_i).
    pub fn standard(m: &WeilMonoid) -> Self {
        let omega: Vec<usize> = (0..m.n()).collect();
        let h = m.group().identity();
        Self::canonical(omega, h)
    }

    pub fn explicit(levels: Vec<Vec<usize>>) -> Self {
        Labeling { omega: levels[0].clone(), gamma: None, explicit: levels }
    }

    fn gamma_at(&self, t: u32) -> usize {
        match &self.gamma {
            Some(Gamma::Constant(h)) => *h,
            Some(Gamma::Sequence(v)) => v[((t - 1) as usize).min(v.len() - 1)],
            None => 0,
        }
    }

    /// Group elements mu_i^{(tc)} for i = 0..n.
    pub fn labels(&self, m: &WeilMonoid, t: u32) -> Vec<usize> {
        assert!(t >= 1);
        if let Some(level) = self.explicit.get((t - 1) as usize) {
            return level.clone();
        }
        if self.gamma.is_none() {
            panic!("explicit labeling not defined at degree {t}");
        }
        let mut cur = self.omega.clone();
        for s in 1..t {
            // mu^{(s+1)}_i = theta^s(omega(gamma(s))) mu^{(s)}_i
            let lead = m.theta_pow(s, self.omega[self.gamma_at(s)]);
            cur = cur.iter().map(|&g| m.group().mul(lead, g)).collect();
        }
        cur
    }

    pub fn element(&self, m: &WeilMonoid, t: u32, i: usize) -> MonoidElement {
        MonoidElement { t, g: self.labels(m, t)[i] }
    }

    /// Coherence: phi_i^{(s+c)} (phi_i^{(s)})^{-1} independent of i for s < t_max.
    pub fn is_coherent(&self, m: &WeilMonoid, t_max: u32) -> bool {
        let g = m.group();
        (1..t_max).all(|t| {
            let a = self.labels(m, t);
            let b = self.labels(m, t + 1);
            let ratios: Vec<usize> = (0..m.n()).map(|i| g.mul(b[i], g.inv(a[i]))).collect();
            ratios.iter().all(|&r| r == ratios[0])
        })
    }

    pub fn is_bijective(&self, m: &WeilMonoid, t: u32) -> bool {
        let mut l = self.labels(m, t);
        l.sort();
        l == (0..m.n()).collect::<Vec<_>>()
    }
}

/// star, alpha and ell at a pair of degrees (s, r), both multiples of c.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolTables {
    pub n: usize,
    pub s: u32,
    pub r: u32,
    /// star[i][j] = (i * j)_{s,r}
    pub star: Vec<Vec<usize>>,
    /// star_rev[i][j] = (i * j)_{r,s}
    pub star_rev: Vec<Vec<usize>>,
    /// alpha[k][j][i] = 1 iff k = (i * j)_{s,r}
    pub alpha: Vec<Vec<Vec<i8>>>,
    /// ell[k][i][j] = alpha^{k(s,r)}_{ji} - alpha^{k(r,s)}_{ij}
    pub ell: Vec<Vec<Vec<i8>>>,
}

/// (i * j)_{s,r}: the index k with phi_i^{(s)} phi_j^{(r)} = phi_k^{(s+r)}.
pub fn star(m: &WeilMonoid, lab: &Labeling, i: usize, j: usize, s: u32, r: u32) -> usize {
    let (ts, tr) = (s / m.c(), r / m.c());
    let prod = m.compose(lab.element(m, ts, i), lab.element(m, tr, j));
    lab.labels(m, ts + tr).iter().position(|&g| g == prod.g).expect("labeling is a bijection")
}

/// symbol_tables(m, omega, (s, r)).
pub fn symbol_tables(m: &WeilMonoid, lab: &Labeling, s: u32, r: u32) -> Result<SymbolTables> {
    let c = m.c();
    if !s.is_multiple_of(c) || !r.is_multiple_of(c) || s == 0 || r == 0 {
        return Err(Error::Schema(format!("degrees ({s}, {r}) must be positive multiples of c = {c}")));
    }
    let n = m.n();
    let star_sr: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| star(m, lab, i, j, s, r)).collect()).collect();
    let star_rs: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| star(m, lab, i, j, r, s)).collect()).collect();
    let mut alpha = vec![vec![vec![0i8; n]; n]; n];
    let mut alpha_rs = vec![vec![vec![0i8; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            alpha[star_sr[i][j]][j][i] = 1;
            alpha_rs[star_rs[i][j]][j][i] = 1;
        }
    }
    let ell = (0..n)
        .map(|k| (0..n).map(|i| (0..n).map(|j| alpha[k][j][i] - alpha_rs[k][i][j]).collect()).collect())
        .collect();
    Ok(SymbolTables { n, s, r, star: star_sr, star_rev: star_rs, alpha, ell })
}

impl SymbolTables {
    /// alpha^k laid out with row i, column j equal to 1 iff i * j = k; this
    /// is the transpose of the stored (definitional) matrix.
    pub fn display_alpha(&self, k: usize) -> Vec<Vec<i8>> {
        let n = self.n;
        (0..n).map(|i| (0..n).map(|j| self.alpha[k][j][i]).collect()).collect()
    }

    pub fn alpha_is_permutation(&self) -> bool {
        self.alpha.iter().all(|a| {
            a.iter().all(|row| row.iter().filter(|&&x| x == 1).count() == 1)
                && (0..self.n).all(|j| a.iter().filter(|row| row[j] == 1).count() == 1)
        })
    }
}
