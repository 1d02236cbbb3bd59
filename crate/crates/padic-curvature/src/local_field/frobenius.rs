//! Galois action, higher Frobenius lifts and pi-derivations.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::element::{LocalField, PadicElement};
use super::residue::{pow_mod, ResidueElement};
use crate::error::{Error, Result};

/// sigma_j : pi -> zeta_e^j pi, identity on F.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaloisElement {
    pub j: usize,
}

impl GaloisElement {
    pub fn compose(self, other: GaloisElement, e: usize) -> GaloisElement {
        GaloisElement { j: (self.j + other.j) % e }
    }
    pub fn order(self, e: usize) -> usize {
        (1..=e).find(|k| (k * self.j).is_multiple_of(e)).unwrap_or(1)
    }
}

/// phi^frob o sigma_j, an automorphism of E over Q_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldAut {
    pub frob: usize,
    pub j: usize,
}

impl FieldAut {
    pub fn identity() -> Self {
        FieldAut { frob: 0, j: 0 }
    }

    /// self o other (apply `other` first).
    pub fn compose(self, other: FieldAut, field: &LocalField) -> FieldAut {
        let (f, e) = (field.f(), field.e());
        // sigma_j phi^s = phi^s sigma_{j p^{-s}}
        let pinv = pow_mod(field.p() % e as u64, ((f - other.frob % f) % f) as u64, e as u64) as usize;
        FieldAut { frob: (self.frob + other.frob) % f, j: (self.j * pinv + other.j) % e }
    }

    pub fn inverse(self, field: &LocalField) -> FieldAut {
        let (f, e) = (field.f(), field.e());
        // (phi^s sigma_j)^{-1} = sigma_{-j} phi^{-s} = phi^{-s} sigma_{-j p^{s}}
        let ps = pow_mod(field.p() % e as u64, self.frob as u64, e as u64) as usize;
        FieldAut { frob: (f - self.frob % f) % f, j: (e - (self.j * ps) % e) % e }
    }

    pub fn apply(self, x: &PadicElement) -> PadicElement {
        let field = x.field().clone();
        let e = field.e();
        if !self.j.is_multiple_of(e) {
            assert!(field.has_galois(), "Galois action needs zeta_e in F");
        }
        // phi^s(sigma_j(c pi^k)) = phi^s(c) zeta^{j k p^s} pi^k
        let ps = pow_mod(field.p() % e as u64, self.frob as u64, e as u64) as usize;
        x.map_slots(self.frob, |k| {
            let idx = (self.j * k % e) * ps % e;
            field.zeta_pow(idx).map(|z| z.to_vec()).unwrap_or_else(|| {
                let mut one = vec![0; field.f()];
                one[0] = 1;
                one
            })
        })
    }
}

/// A higher Frobenius lift phi^s sigma of degree s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HigherFrobenius {
    pub s: u32,
    pub sigma: GaloisElement,
}

impl HigherFrobenius {
    pub fn new(s: u32, j: usize) -> Self {
        HigherFrobenius { s, sigma: GaloisElement { j } }
    }

    pub fn aut(&self, field: &LocalField) -> FieldAut {
        FieldAut { frob: self.s as usize % field.f(), j: self.sigma.j % field.e() }
    }

    /// The lift self o other, of degree s + r.
    pub fn compose(&self, other: &HigherFrobenius, field: &LocalField) -> HigherFrobenius {
        let a = self.aut(field).compose(other.aut(field), field);
        HigherFrobenius { s: self.s + other.s, sigma: GaloisElement { j: a.j } }
    }

    pub fn apply(&self, x: &PadicElement) -> PadicElement {
        self.aut(x.field()).apply(x)
    }

    pub fn apply_inverse(&self, x: &PadicElement) -> PadicElement {
        self.aut(x.field()).inverse(x.field()).apply(x)
    }

    /// The exponent p^s as an integer.
    pub fn p_power(&self, field: &LocalField) -> u128 {
        (field.p() as u128).pow(self.s)
    }
}

/// frobenius_apply: phi^s sigma applied to a.
pub fn frobenius_apply(phi: &HigherFrobenius, a: &PadicElement) -> PadicElement {
    phi.apply(a)
}

/// delta(a) = (phi(a) - a^{p^s}) / pi.
pub fn pi_derivation(phi: &HigherFrobenius, a: &PadicElement) -> Result<PadicElement> {
    if a.precision() < 2 {
        return Err(Error::InsufficientPrecision { needed: 2, have: a.precision() });
    }
    let field = a.field();
    let diff = &phi.apply(a) - &a.pow(phi.p_power(field));
    diff.div_pi()
}

/// x -> x^{p^k} on residues for any integer k.
pub fn residue_frobenius_pow(field: &LocalField, x: &ResidueElement, k: i64) -> ResidueElement {
    field.residue_field().frobenius_pow(x, k)
}

/// epsilon_{ij} = (delta_i pi * (delta_j pi)^{p^c} mod pi)^{p^{-2c}}.
pub fn epsilon_matrix(field: &Arc<LocalField>, lifts: &[HigherFrobenius]) -> Result<Vec<Vec<ResidueElement>>> {
    let c = lifts.first().map(|l| l.s).unwrap_or(1);
    if lifts.iter().any(|l| l.s != c) {
        return Err(Error::InvalidSpec("all lifts must share the minimal degree".into()));
    }
    let fq = field.residue_field();
    let pi = PadicElement::pi(field, 2.min(field.nu()));
    let d: Vec<ResidueElement> = lifts.iter().map(|l| pi_derivation(l, &pi).map(|x| x.residue())).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for di in &d {
        let mut row = Vec::new();
        for dj in &d {
            let v = fq.mul(di, &fq.frobenius_pow(dj, c as i64));
            row.push(fq.frobenius_pow(&v, -2 * c as i64));
        }
        out.push(row);
    }
    Ok(out)
}

/// N_{E/F}(a) = prod_j sigma_j(a).
pub fn norm_e_over_f(a: &PadicElement) -> Result<PadicElement> {
    let field = a.field();
    if !field.has_galois() {
        return Err(Error::InvalidSpec("E/F is not Galois over this residue field (e does not divide q - 1)".into()));
    }
    let mut acc = PadicElement::one(field, a.precision());
    for j in 0..field.e() {
        acc = &acc * &FieldAut { frob: 0, j }.apply(a);
    }
    Ok(acc)
}

/// The quadratic residue symbol of a unit of O_F.
pub fn legendre_symbol(a: &PadicElement) -> Result<i8> {
    if !a.is_unit() {
        return Err(Error::NotAUnit);
    }
    if !a.in_base_field() {
        return Err(Error::NotInBaseField);
    }
    let fq = a.field().residue_field();
    Ok(if fq.is_square(&a.residue()) { 1 } else { -1 })
}

/// Hensel square root of a unit with square residue.
pub fn sqrt_unit(a: &PadicElement) -> Result<PadicElement> {
    let field = a.field();
    let fq = field.residue_field();
    let r = fq.sqrt(&a.residue()).ok_or(Error::NoSquareRoot)?;
    if r.is_zero() {
        return Err(Error::NotAUnit);
    }
    let prec = a.precision();
    let mut x = PadicElement::teichmuller(field, &r, prec);
    let half = PadicElement::half(field, prec);
    for _ in 0..64 {
        let next = &half * &(&x + &(a * &x.inv()?));
        if next == x {
            break;
        }
        x = next;
    }
    Ok(x)
}
