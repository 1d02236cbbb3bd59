//! Curvature mod pi from Christoffel symbols, its closed form in the abelian
//! case, the classical symmetries and the Kulkarni-Nomizu witnesses.

use serde::Serialize;

use super::setup::CurvatureSetup;
use crate::connections::{frobenius_metric_residue, ChristoffelModPi, Metric};
use crate::error::{Error, Result};
use crate::local_field::{epsilon_matrix, pi_derivation, HigherFrobenius, ResidueElement, ResidueField};

pub type Tensor4 = Vec<Vec<Vec<Vec<ResidueElement>>>>;

/// R-bar^k_{ijl} as upper[k][i][j][l] and R-bar_{ijkl} as lowered[i][j][k][l].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurvatureTensor {
    pub upper: Tensor4,
    pub lowered: Tensor4,
}

/// lowered[i][j][k][l] = sum_m upper[m][i][j][k] qbar_{ml}^{p^{2c}}.
pub fn lower_curvature(fq: &ResidueField, upper: &Tensor4, q: &Metric, c: u32) -> Tensor4 {
    let big = upper.len();
    let n = upper.first().map(|x| x.len()).unwrap_or(0);
    let q2 = frobenius_metric_residue(q, 2 * c);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..big)
                        .map(|k| {
                            (0..big)
                                .map(|l| (0..big).fold(fq.zero(), |acc, m| fq.add(&acc, &fq.mul(&upper[m][i][j][k], &q2[m][l]))))
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// The reduced curvature from Christoffel data at degrees c and 2c:
/// R^k_{ijl} = d_i pi (G^k_{jl})^{p^c} - d_j pi (G^k_{il})^{p^c} - G2^k_{i*j,l} + G2^k_{j*i,l}.
pub fn curvature_from_christoffel(
    fq: &ResidueField,
    c: u32,
    delta_pi: &[ResidueElement],
    gamma: &ChristoffelModPi,
    gamma2: &ChristoffelModPi,
    star: impl Fn(usize, usize) -> usize,
) -> Tensor4 {
    let big = gamma.second.len();
    let n = delta_pi.len();
    let fr = |x: &ResidueElement| fq.frobenius_pow(x, c as i64);
    (0..big)
        .map(|k| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let (ij, ji) = (star(i, j), star(j, i));
                            (0..big)
                                .map(|l| {
                                    let a = fq.mul(&delta_pi[i], &fr(&gamma.second[k][j][l]));
                                    let b = fq.mul(&delta_pi[j], &fr(&gamma.second[k][i][l]));
                                    let d = fq.sub(&gamma2.second[k][ji][l], &gamma2.second[k][ij][l]);
                                    fq.add(&fq.sub(&a, &b), &d)
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// curvature_reduced: closed-form Christoffel symbols at the identity fed
/// through the curvature formula, then lowered.
pub fn curvature_reduced(setup: &CurvatureSetup) -> Result<CurvatureTensor> {
    let field = setup.field().clone();
    let fq = field.residue_field();
    let g1 = setup.christoffel(1)?;
    let g2 = setup.christoffel(2)?;
    let dpi = setup.delta_pi(1)?;
    let upper = curvature_from_christoffel(fq, setup.c(), &dpi, &g1, &g2, |i, j| setup.star(i, j));
    let lowered = lower_curvature(fq, &upper, &setup.q, setup.c());
    Ok(CurvatureTensor { upper, lowered })
}

/// delta^{(2c)}_{ab} x mod pi for the composite lift phi_a phi_b.
pub fn composite_derivation(lifts: &[HigherFrobenius], a: usize, b: usize, x: &crate::local_field::PadicElement) -> Result<ResidueElement> {
    let comp = lifts[a].compose(&lifts[b], x.field());
    Ok(pi_derivation(&comp, x)?.residue())
}

/// tery_rhs: -1/2 (d_jl q_ik - d_jk q_il - d_il q_jk + d_ik q_jl) mod pi, with
/// d_ab the derivation of phi_a phi_b.
pub fn tery_rhs(setup: &CurvatureSetup) -> Result<Tensor4> {
    if !setup.monoid.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let n = setup.n();
    if setup.q.n() != n {
        return Err(Error::Dimension("the closed form needs N = n".into()));
    }
    let fq = setup.field().residue_field();
    let lifts = setup.lifts(1)?;
    // d[a][b][x][y] = delta_{ab} q_xy
    let mut d = vec![vec![vec![vec![fq.zero(); n]; n]; n]; n];
    for (a, da) in d.iter_mut().enumerate() {
        for (b, dab) in da.iter_mut().enumerate() {
            for (x, row) in dab.iter_mut().enumerate() {
                for (y, v) in row.iter_mut().enumerate() {
                    *v = composite_derivation(&lifts, a, b, setup.q.get(x, y))?;
                }
            }
        }
    }
    let mhalf = fq.neg(&fq.inv(&fq.from_int(2)).expect("p is odd"));
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| {
                            (0..n)
                                .map(|l| {
                                    let s = fq.add(
                                        &fq.sub(&fq.sub(&d[j][l][i][k], &d[j][k][i][l]), &d[i][l][j][k]),
                                        &d[i][k][j][l],
                                    );
                                    fq.mul(&mhalf, &s)
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurvatureIdentity {
    /// R_ijkl + R_jikl = 0
    AntisymmetryIj,
    /// R_ijkl + R_ijlk = 0
    AntisymmetryKl,
    /// R_ijkl + R_iklj + R_iljk = 0
    Bianchi,
    /// R_ijkl = R_klij
    PairSymmetry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: CurvatureIdentity,
    pub indices: [usize; 4],
}

/// Every index tuple at which one of the four identities fails.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub violations: Vec<Violation>,
}

impl SymmetryReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
    pub fn holds(&self, id: CurvatureIdentity) -> bool {
        self.violations.iter().all(|v| v.identity != id)
    }
}

pub fn symmetry_report(fq: &ResidueField, t: &Tensor4) -> SymmetryReport {
    let n = t.len();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let idx = [i, j, k, l];
                    let mut push = |ok: bool, identity| {
                        if !ok {
                            violations.push(Violation { identity, indices: idx });
                        }
                    };
                    push(fq.add(&t[i][j][k][l], &t[j][i][k][l]).is_zero(), CurvatureIdentity::AntisymmetryIj);
                    push(fq.add(&t[i][j][k][l], &t[i][j][l][k]).is_zero(), CurvatureIdentity::AntisymmetryKl);
                    push(fq.add(&fq.add(&t[i][j][k][l], &t[i][k][l][j]), &t[i][l][j][k]).is_zero(), CurvatureIdentity::Bianchi);
                    push(t[i][j][k][l] == t[k][l][i][j], CurvatureIdentity::PairSymmetry);
                }
            }
        }
    }
    SymmetryReport { violations }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KnWitness {
    pub indices: [usize; 4],
    pub value: ResidueElement,
}

/// eps_jl c_ik - eps_jk c_il - eps_il c_jk + eps_ik c_jl.
pub fn kn_value(fq: &ResidueField, eps: &[Vec<ResidueElement>], c: &[Vec<ResidueElement>], idx: [usize; 4]) -> ResidueElement {
    let [i, j, k, l] = idx;
    let t = |a: &ResidueElement, b: &ResidueElement| fq.mul(a, b);
    let s = fq.sub(&t(&eps[j][l], &c[i][k]), &t(&eps[j][k], &c[i][l]));
    let s = fq.sub(&s, &t(&eps[i][l], &c[j][k]));
    fq.add(&s, &t(&eps[i][k], &c[j][l]))
}

/// All index tuples with a nonzero Kulkarni-Nomizu combination of eps and c.
pub fn kn_from(fq: &ResidueField, eps: &[Vec<ResidueElement>], c: &[Vec<ResidueElement>]) -> Vec<KnWitness> {
    let n = c.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let value = kn_value(fq, eps, c, [i, j, k, l]);
                    if !value.is_zero() {
                        out.push(KnWitness { indices: [i, j, k, l], value });
                    }
                }
            }
        }
    }
    out
}

/// kulkarni_nomizu_nontriviality with c the first pi-digit of q.
pub fn kulkarni_nomizu_witnesses(q: &Metric, lifts: &[HigherFrobenius]) -> Result<Vec<KnWitness>> {
    if lifts.len() != q.n() {
        return Err(Error::Dimension("Kulkarni-Nomizu test needs N = n".into()));
    }
    let field = q.field();
    let eps = epsilon_matrix(field, lifts)?;
    Ok(kn_from(field.residue_field(), &eps, &q.digit(1)))
}
