//! Exact truncated arithmetic in O_E for E = F(pi), pi^e = p, F/Q_p unramified of degree f.

mod element;
mod frobenius;
pub mod matrix;
mod residue;

use serde::{Deserialize, Serialize};

pub use element::{LocalField, PadicElement};
pub use frobenius::{
    epsilon_matrix, frobenius_apply, legendre_symbol, norm_e_over_f, pi_derivation, residue_frobenius_pow, sqrt_unit,
    FieldAut, GaloisElement, HigherFrobenius,
};
pub use matrix::Matrix;
pub use residue::{default_modulus, is_irreducible, ResidueElement, ResidueField};

use crate::error::{Error, Result};

/// Parameters of the truncated ring O_E / pi^nu.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub f: usize,
    pub e: usize,
    pub nu: u32,
    /// Monic, lowest degree first, length f + 1.
    pub residue_modulus: Vec<u64>,
}

impl FieldSpec {
    /// Spec with the default residue modulus.
    pub fn new(p: u64, f: usize, e: usize, nu: u32) -> Result<Self> {
        if p < 3 || !residue::is_prime(p) {
            return Err(Error::InvalidSpec(format!("{p} is not an odd prime")));
        }
        if f == 0 {
            return Err(Error::InvalidSpec("f must be at least 1".into()));
        }
        let spec = FieldSpec { p, f, e, nu, residue_modulus: default_modulus(p, f) };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 3 || !residue::is_prime(self.p) {
            return Err(Error::InvalidSpec(format!("{} is not an odd prime", self.p)));
        }
        if self.f == 0 || self.e == 0 || self.nu == 0 {
            return Err(Error::InvalidSpec("f, e and nu must be at least 1".into()));
        }
        if self.residue_modulus.len() != self.f + 1 || !is_irreducible(&self.residue_modulus, self.p) {
            return Err(Error::InvalidSpec(format!(
                "residue modulus {:?} is not a monic irreducible of degree {} over F_{}",
                self.residue_modulus, self.f, self.p
            )));
        }
        Ok(())
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    /// A nontrivial Galois action over F needs zeta_e in F.
    pub fn require_galois(&self) -> Result<()> {
        if !(self.q() - 1).is_multiple_of(self.e as u64) {
            return Err(Error::InvalidSpec(format!(
                "e = {} does not divide p^f - 1 = {}; choose f so that zeta_e lies in F",
                self.e,
                self.q() - 1
            )));
        }
        Ok(())
    }
}

/// teichmuller(r, nu).
pub fn teichmuller(field: &std::sync::Arc<LocalField>, r: &ResidueElement, nu: u32) -> PadicElement {
    PadicElement::teichmuller(field, r, nu)
}
