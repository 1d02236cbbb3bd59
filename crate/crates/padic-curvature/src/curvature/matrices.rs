//! Frobenius-twisted residue matrices: the reduced connection matrices and
//! the curvature matrix they produce.

use serde::Serialize;

use super::reduced::Tensor4;
use super::setup::CurvatureSetup;
use crate::error::{Error, Result};
use crate::local_field::{ResidueElement, ResidueField};

/// a Fr^twist, a residue matrix followed by the p^twist-power Frobenius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedMatrix {
    pub mat: Vec<Vec<ResidueElement>>,
    pub twist: u32,
}

impl TwistedMatrix {
    /// (a Fr^s)(b Fr^r) = a b^{(p^s)} Fr^{s+r}.
    pub fn mul(&self, other: &TwistedMatrix, fq: &ResidueField) -> TwistedMatrix {
        let b: Vec<Vec<ResidueElement>> =
            other.mat.iter().map(|r| r.iter().map(|x| fq.frobenius_pow(x, self.twist as i64)).collect()).collect();
        TwistedMatrix { mat: fq.mat_mul(&self.mat, &b), twist: self.twist + other.twist }
    }

    fn combine(&self, other: &TwistedMatrix, f: impl Fn(&ResidueElement, &ResidueElement) -> ResidueElement) -> Result<TwistedMatrix> {
        if self.twist != other.twist {
            return Err(Error::Dimension(format!("twists {} and {} differ", self.twist, other.twist)));
        }
        let mat = self.mat.iter().zip(&other.mat).map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect()).collect();
        Ok(TwistedMatrix { mat, twist: self.twist })
    }

    pub fn add(&self, other: &TwistedMatrix, fq: &ResidueField) -> Result<TwistedMatrix> {
        self.combine(other, |x, y| fq.add(x, y))
    }
    pub fn sub(&self, other: &TwistedMatrix, fq: &ResidueField) -> Result<TwistedMatrix> {
        self.combine(other, |x, y| fq.sub(x, y))
    }
}

/// [[d_i pi, (Gamma^k_{il})_{(k,l)}], [0, 0]] Fr^s, of size N^2 + 1, with the
/// pair (k, l) in position 1 + k N + l.
pub fn connection_matrix(fq: &ResidueField, delta_pi: &ResidueElement, second: &[Vec<Vec<ResidueElement>>], i: usize, s: u32) -> TwistedMatrix {
    let big = second.len();
    let size = big * big + 1;
    let mut mat = vec![vec![fq.zero(); size]; size];
    mat[0][0] = delta_pi.clone();
    for k in 0..big {
        for l in 0..big {
            mat[0][1 + k * big + l] = second[k][i][l].clone();
        }
    }
    TwistedMatrix { mat, twist: s }
}

/// [[0, (R^k_{ijl})_{(k,l)}], [0, 0]] Fr^{2c}.
pub fn curvature_matrix(fq: &ResidueField, upper: &Tensor4, i: usize, j: usize, c: u32) -> TwistedMatrix {
    let big = upper.len();
    let size = big * big + 1;
    let mut mat = vec![vec![fq.zero(); size]; size];
    for k in 0..big {
        for l in 0..big {
            mat[0][1 + k * big + l] = upper[k][i][j][l].clone();
        }
    }
    TwistedMatrix { mat, twist: 2 * c }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedMatrices {
    /// connection[t - 1][i] for degrees c and 2c
    pub connection: Vec<Vec<TwistedMatrix>>,
    /// curvature[i][j], built from the curvature rows
    pub curvature: Vec<Vec<TwistedMatrix>>,
}

pub fn reduced_matrices(setup: &CurvatureSetup, upper: &Tensor4) -> Result<ReducedMatrices> {
    let fq = setup.field().residue_field();
    let c = setup.c();
    let n = setup.n();
    let mut connection = Vec::new();
    for t in 1..=2 {
        let g = setup.christoffel(t)?;
        let d = setup.delta_pi(t)?;
        connection.push((0..n).map(|i| connection_matrix(fq, &d[i], &g.second, i, t * c)).collect());
    }
    let curvature = (0..n).map(|i| (0..n).map(|j| curvature_matrix(fq, upper, i, j, c)).collect()).collect();
    Ok(ReducedMatrices { connection, curvature })
}

impl ReducedMatrices {
    /// nabla_i nabla_j - nabla_j nabla_i - nabla2_{i*j} + nabla2_{j*i}.
    pub fn bracket_defect(&self, fq: &ResidueField, i: usize, j: usize, ij: usize, ji: usize) -> Result<TwistedMatrix> {
        let c1 = &self.connection[0];
        let c2 = &self.connection[1];
        c1[i].mul(&c1[j], fq).sub(&c1[j].mul(&c1[i], fq), fq)?.sub(&c2[ij], fq)?.add(&c2[ji], fq)
    }

    /// The bracket defect reproduces every curvature matrix.
    pub fn is_consistent(&self, setup: &CurvatureSetup) -> Result<bool> {
        let fq = setup.field().residue_field();
        let n = setup.n();
        for i in 0..n {
            for j in 0..n {
                if self.bracket_defect(fq, i, j, setup.star(i, j), setup.star(j, i))? != self.curvature[i][j] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
