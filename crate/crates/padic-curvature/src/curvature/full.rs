//! Curvature at full precision at a point, and the multiplicative curvature
//! at the identity.

use serde::Serialize;

use super::reduced::Tensor4;
use super::setup::CurvatureSetup;
use crate::connections::ConnectionAtPoint;
use crate::error::{Error, Result};
use crate::local_field::{matrix, HigherFrobenius, Matrix, ResidueElement};

fn twist_inverse(m: &Matrix, lift: &HigherFrobenius) -> Matrix {
    matrix::map(m, |x| lift.apply_inverse(x))
}

fn twist(m: &Matrix, lift: &HigherFrobenius) -> Matrix {
    matrix::map(m, |x| lift.apply(x))
}

fn residue_of_div_pi(m: &Matrix) -> Result<Vec<Vec<ResidueElement>>> {
    m.iter().map(|r| r.iter().map(|x| x.div_pi().map(|y| y.residue())).collect()).collect()
}

/// Everything needed to evaluate composites of the connection's lifts at one point.
pub struct PointEvaluation<'a> {
    setup: &'a CurvatureSetup,
    point: Matrix,
    lifts: Vec<HigherFrobenius>,
    /// Lambda^{(c)}(a) and Lambda^{(2c)}(a)
    at_point: ConnectionAtPoint,
    at_point2: ConnectionAtPoint,
    /// per lift x: b_x = a^{(p^c)} Lambda_x(a) and the connection at phi_x^{-1}(b_x)
    images: Vec<(Matrix, ConnectionAtPoint)>,
}

impl<'a> PointEvaluation<'a> {
    pub fn new(setup: &'a CurvatureSetup, a: &Matrix) -> Result<Self> {
        let field = setup.field().clone();
        if a.first().map(|r| r[0].precision()).unwrap_or(0) < 2 || field.nu() < 2 {
            return Err(Error::InsufficientPrecision { needed: 2, have: field.nu() });
        }
        let lifts = setup.lifts(1)?;
        let at_point = setup.solve(1, a)?;
        let at_point2 = setup.solve(2, a)?;
        let pc = (field.p() as u128).pow(setup.c());
        let ap = matrix::entry_pow(&at_point.point, pc);
        let mut images = Vec::new();
        for (x, lift) in lifts.iter().enumerate() {
            let b = matrix::mul(&ap, &at_point.lambdas[x]);
            let conn = setup.solve(1, &twist_inverse(&b, lift))?;
            images.push((b, conn));
        }
        Ok(PointEvaluation { setup, point: at_point.point.clone(), lifts, at_point, at_point2, images })
    }

    fn pc(&self, t: u32) -> u128 {
        (self.setup.field().p() as u128).pow(t * self.setup.c())
    }

    /// phi_x^G phi_y^G (x)|_a = b^{(p^c)} phi_x(Lambda_y(phi_x^{-1}(b))).
    pub fn composite(&self, x: usize, y: usize) -> Matrix {
        let (b, conn) = &self.images[x];
        let inner = twist(&conn.lambdas[y], &self.lifts[x]);
        matrix::mul(&matrix::entry_pow(b, self.pc(1)), &inner)
    }

    /// (phi_k^{(2c)})^G (x)|_a = a^{(p^{2c})} Lambda_k^{(2c)}(a).
    pub fn single(&self, k: usize) -> Matrix {
        matrix::mul(&matrix::entry_pow(&self.point, self.pc(2)), &self.at_point2.lambdas[k])
    }

    pub fn lambda(&self, i: usize) -> &Matrix {
        &self.at_point.lambdas[i]
    }
    pub fn lambda2(&self, k: usize) -> &Matrix {
        &self.at_point2.lambdas[k]
    }

    /// The matrix with (k, l) entry R^k_{ijl}(a).
    pub fn curvature(&self, i: usize, j: usize) -> Result<Matrix> {
        let (ij, ji) = (self.setup.star(i, j), self.setup.star(j, i));
        let total = matrix::add(
            &matrix::sub(&matrix::sub(&self.composite(i, j), &self.composite(j, i)), &self.single(ij)),
            &self.single(ji),
        );
        total.iter().map(|r| r.iter().map(|x| x.div_pi()).collect()).collect()
    }
}

/// curvature_full_at_point for the pair (i, j) of degree-c lifts.
pub fn curvature_full_at_point(setup: &CurvatureSetup, i: usize, j: usize, a: &Matrix) -> Result<Matrix> {
    PointEvaluation::new(setup, a)?.curvature(i, j)
}

/// Residues of all R^k_{ijl}(a), laid out like CurvatureTensor::upper.
pub fn curvature_full_residues(setup: &CurvatureSetup, a: &Matrix) -> Result<Tensor4> {
    let ev = PointEvaluation::new(setup, a)?;
    let n = setup.n();
    let big = setup.q.n();
    let mut mats = Vec::new();
    for i in 0..n {
        let mut row = Vec::new();
        for j in 0..n {
            row.push(ev.curvature(i, j)?);
        }
        mats.push(row);
    }
    Ok((0..big)
        .map(|k| (0..n).map(|i| (0..n).map(|j| (0..big).map(|l| mats[i][j][k][l].residue()).collect()).collect()).collect())
        .collect())
}

/// The multiplicative curvature at the identity for one pair (i, j).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicativeCurvatureValue {
    pub i: usize,
    pub j: usize,
    /// R*(phi_i, phi_j)(1) reduced mod pi^2
    #[serde(skip)]
    pub matrix: Matrix,
    /// residue of (R* - 1) / pi: entry (k, l) = R^{k*}_{ijl}
    pub residue: Vec<Vec<ResidueElement>>,
    /// the naive variant R**(1) mod pi^2
    #[serde(skip)]
    pub naive_matrix: Matrix,
    pub naive_residue: Vec<Vec<ResidueElement>>,
}

/// R*(1) = S(i,j) F_{i*j}^{-1} F_{j*i} S(j,i)^{-1}, with S(x,y) the composite of
/// the relative endomorphisms at 1 and F_k = Lambda_k^{(2c)}(1); and the naive
/// R**(1) = F_j(F_i(1)) F_i(F_j(1))^{-1} with F_x(y) = y^{(p^c)} Lambda_x(y).
pub fn multiplicative_curvature(setup: &CurvatureSetup, i: usize, j: usize) -> Result<MultiplicativeCurvatureValue> {
    let field = setup.field().clone();
    let big = setup.q.n();
    let one = matrix::identity(&field, big, field.nu());
    let ev = PointEvaluation::new(setup, &one)?;
    let (ij, ji) = (setup.star(i, j), setup.star(j, i));
    let r = matrix::mul(
        &matrix::mul(&matrix::mul(&ev.composite(i, j), &matrix::inverse(ev.lambda2(ij))?), ev.lambda2(ji)),
        &matrix::inverse(&ev.composite(j, i))?,
    );
    let pc = (field.p() as u128).pow(setup.c());
    let relative = |x: usize, y: &Matrix| -> Result<Matrix> {
        let conn = setup.solve(1, y)?;
        Ok(matrix::mul(&matrix::entry_pow(y, pc), &conn.lambdas[x]))
    };
    let fj_fi = relative(j, ev.lambda(i))?;
    let fi_fj = relative(i, ev.lambda(j))?;
    let naive = matrix::mul(&fj_fi, &matrix::inverse(&fi_fj)?);
    let id2 = matrix::identity(&field, big, 2);
    let matrix = matrix::truncate(&r, 2);
    let naive_matrix = matrix::truncate(&naive, 2);
    let residue = residue_of_div_pi(&matrix::sub(&matrix, &id2))?;
    let naive_residue = residue_of_div_pi(&matrix::sub(&naive_matrix, &id2))?;
    Ok(MultiplicativeCurvatureValue { i, j, matrix, residue, naive_matrix, naive_residue })
}

/// The explicit mod pi^2 form of R*(1):
/// 1 + pi (d_i pi (G_j)^{(p^c)} - d_j pi (G_i)^{(p^c)} - G2_{i*j} + G2_{j*i}) with G = (Lambda(1) - 1)/pi.
pub fn multiplicative_closed_form(setup: &CurvatureSetup, i: usize, j: usize) -> Result<Matrix> {
    let field = setup.field().clone();
    let big = setup.q.n();
    let one = matrix::identity(&field, big, field.nu());
    let g = setup.solve(1, &one)?.gammas()?;
    let g2 = setup.solve(2, &one)?.gammas()?;
    let dpi = setup.delta_pi(1)?;
    let pc = (field.p() as u128).pow(setup.c());
    let t = |d: &ResidueElement, m: &Matrix| -> Matrix {
        let dd = crate::local_field::PadicElement::teichmuller(&field, d, 1);
        matrix::map(&matrix::truncate(&matrix::entry_pow(m, pc), 1), |x| x * &dd)
    };
    let (ij, ji) = (setup.star(i, j), setup.star(j, i));
    let bracket = matrix::add(
        &matrix::sub(&matrix::sub(&t(&dpi[i], &g[j]), &t(&dpi[j], &g[i])), &matrix::truncate(&g2[ij], 1)),
        &matrix::truncate(&g2[ji], 1),
    );
    let lifted = matrix::map(&bracket, |x| x.mul_pi());
    Ok(matrix::add(&matrix::identity(&field, big, 2), &lifted))
}
