//! JSON literals for ring elements and matrices.
//!
//! `{"digits": [[c_0, ..., c_{f-1}], ...]}` lists the Teichmuller pi-adic
//! digits, each as its coordinate vector over F_p; `{"int": n}` is the image
//! of a rational integer. An optional `"precision"` marks an element known
//! to fewer than nu digits. Writing always uses the digits form, so
//! parse(write(x)) == x bit for bit.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local_field::{LocalField, Matrix, PadicElement, ResidueElement};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementLiteral {
    Digits {
        digits: Vec<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        precision: Option<u32>,
    },
    Int {
        int: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        precision: Option<u32>,
    },
}

impl ElementLiteral {
    pub fn int(n: i64) -> Self {
        ElementLiteral::Int { int: n, precision: None }
    }

    pub fn to_element(&self, field: &Arc<LocalField>) -> Result<PadicElement> {
        let nu = field.nu();
        match self {
            ElementLiteral::Int { int, precision } => {
                let prec = precision.unwrap_or(nu);
                if prec > nu {
                    return Err(Error::Schema(format!("precision {prec} exceeds nu = {nu}")));
                }
                Ok(PadicElement::from_int(field, *int, prec))
            }
            ElementLiteral::Digits { digits, precision } => {
                let prec = precision.unwrap_or(nu);
                if prec > nu || digits.len() > prec as usize {
                    return Err(Error::Schema(format!("{} digits do not fit precision {prec} (nu = {nu})", digits.len())));
                }
                let fq = field.residue_field();
                let ds: Vec<ResidueElement> = digits
                    .iter()
                    .map(|d| {
                        if d.len() != field.f() {
                            return Err(Error::Schema(format!("digit {d:?} must have f = {} coordinates", field.f())));
                        }
                        if d.iter().any(|&c| c < 0 || c as u64 >= field.p()) {
                            return Err(Error::Schema(format!("digit coordinates {d:?} must lie in 0..{}", field.p())));
                        }
                        fq.from_coeffs(d)
                    })
                    .collect::<Result<_>>()?;
                let x = PadicElement::from_digits(field, &ds);
                Ok(if ds.len() as u32 >= prec { x.truncate(prec) } else { x.extend(prec) })
            }
        }
    }

    pub fn from_element(x: &PadicElement) -> Self {
        let digits = x.digits().iter().map(|d| d.coeffs.iter().map(|&c| c as i64).collect()).collect();
        let precision = if x.precision() < x.field().nu() { Some(x.precision()) } else { None };
        ElementLiteral::Digits { digits, precision }
    }
}

pub type MatrixLiteral = Vec<Vec<ElementLiteral>>;

pub fn matrix_from_literal(field: &Arc<LocalField>, m: &MatrixLiteral) -> Result<Matrix> {
    m.iter().map(|r| r.iter().map(|x| x.to_element(field)).collect()).collect()
}

pub fn matrix_to_literal(m: &Matrix) -> MatrixLiteral {
    m.iter().map(|r| r.iter().map(ElementLiteral::from_element).collect()).collect()
}

/// A residue element written as its coordinate vector.
pub fn residue_coords(x: &ResidueElement) -> Vec<u64> {
    x.coeffs.clone()
}
