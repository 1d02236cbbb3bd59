//! Christoffel symbols mod pi in closed form, and the symmetry criteria for
//! matrix torsion symbols.

use serde::Serialize;

use super::metric::{Metric, TorsionSymbol};
use super::solve::ConnectionAtPoint;
use crate::error::{Error, Result};
use crate::local_field::{pi_derivation, HigherFrobenius, Matrix, PadicElement, ResidueElement, ResidueField};

/// Gamma-bar of both kinds: second[k][i][j] = Gamma^k_{ij}, first[i][j][k] = Gamma_{ijk}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChristoffelModPi {
    pub second: Vec<Vec<Vec<ResidueElement>>>,
    pub first: Vec<Vec<Vec<ResidueElement>>>,
}

/// q-bar^{(p^s)}, the reduction of A_i(1).
pub fn frobenius_metric_residue(q: &Metric, s: u32) -> Vec<Vec<ResidueElement>> {
    let fq = q.field().residue_field();
    q.residue().iter().map(|r| r.iter().map(|x| fq.frobenius_pow(x, s as i64)).collect()).collect()
}

/// delta_i q_{jk} mod pi as out[i][j][k].
pub fn metric_derivations(q: &Metric, lifts: &[HigherFrobenius]) -> Result<Vec<Vec<Vec<ResidueElement>>>> {
    lifts
        .iter()
        .map(|l| q.entries.iter().map(|r| r.iter().map(|x| pi_derivation(l, x).map(|d| d.residue())).collect()).collect())
        .collect()
}

/// Gamma_{ijk} = sum_m Gamma^m_{ij} qp_{mk}.
pub fn lower(fq: &ResidueField, second: &[Vec<Vec<ResidueElement>>], qp: &[Vec<ResidueElement>]) -> Vec<Vec<Vec<ResidueElement>>> {
    let dim = second.len();
    let n_lifts = second.first().map(|x| x.len()).unwrap_or(0);
    (0..n_lifts)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    (0..dim)
                        .map(|k| (0..dim).fold(fq.zero(), |acc, m| fq.add(&acc, &fq.mul(&second[m][i][j], &qp[m][k]))))
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Gamma^k_{ij} = sum_l Gamma_{ijl} (qp^{-1})_{lk}.
pub fn raise(fq: &ResidueField, first: &[Vec<Vec<ResidueElement>>], qp_inv: &[Vec<ResidueElement>]) -> Vec<Vec<Vec<ResidueElement>>> {
    let n_lifts = first.len();
    let dim = qp_inv.len();
    (0..dim)
        .map(|k| {
            (0..n_lifts)
                .map(|i| {
                    (0..dim)
                        .map(|j| (0..dim).fold(fq.zero(), |acc, l| fq.add(&acc, &fq.mul(&first[i][j][l], &qp_inv[l][k]))))
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Closed form at the identity:
/// Gamma_{ijk} = -1/2 (d_i q_jk + d_j q_ik - d_k q_ij) + 1/2 (L_ijk + L_kij - L_jki).
pub fn christoffel_lc_mod_pi(q: &Metric, torsion: &TorsionSymbol, lifts: &[HigherFrobenius]) -> Result<ChristoffelModPi> {
    let n = q.n();
    if lifts.len() != n {
        return Err(Error::Dimension("Levi-Civita needs N = n".into()));
    }
    let field = q.field().clone();
    let fq = field.residue_field();
    let s = lifts[0].s;
    let qp = frobenius_metric_residue(q, s);
    let qp_inv = fq.mat_inv(&qp).ok_or_else(|| Error::SingularLinearization("metric is not invertible mod pi".into()))?;
    let dq = metric_derivations(q, lifts)?;
    let l1 = torsion.residue_at_identity(&field, n);
    let l_low = lower(fq, &l1, &qp);
    let half = fq.inv(&fq.from_int(2)).expect("p is odd");
    let mut first = vec![vec![vec![fq.zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let met = fq.sub(&fq.add(&dq[i][j][k], &dq[j][i][k]), &dq[k][i][j]);
                let tor = fq.sub(&fq.add(&l_low[i][j][k], &l_low[k][i][j]), &l_low[j][k][i]);
                first[i][j][k] = fq.mul(&half, &fq.sub(&tor, &met));
            }
        }
    }
    let second = raise(fq, &first, &qp_inv);
    Ok(ChristoffelModPi { second, first })
}

/// Closed form at the identity: Gamma_i = -1/2 delta_i q (q-bar^{(p^s)})^{-1}.
pub fn christoffel_chern_mod_pi(q: &Metric, lifts: &[HigherFrobenius]) -> Result<ChristoffelModPi> {
    let dim = q.n();
    let field = q.field().clone();
    let fq = field.residue_field();
    let s = lifts.first().ok_or_else(|| Error::Dimension("need at least one lift".into()))?.s;
    let qp = frobenius_metric_residue(q, s);
    let qp_inv = fq.mat_inv(&qp).ok_or_else(|| Error::SingularLinearization("metric is not invertible mod pi".into()))?;
    let dq = metric_derivations(q, lifts)?;
    let mhalf = fq.neg(&fq.inv(&fq.from_int(2)).expect("p is odd"));
    let mut second = vec![vec![vec![fq.zero(); dim]; lifts.len()]; dim];
    for (i, dqi) in dq.iter().enumerate() {
        // Gamma_i = -1/2 dq_i qp^{-1}; Gamma^k_{ij} = (Gamma_i)_{jk}
        let gamma_i = fq.mat_mul(dqi, &qp_inv);
        for j in 0..dim {
            for k in 0..dim {
                second[k][i][j] = fq.mul(&mhalf, &gamma_i[j][k]);
            }
        }
    }
    let first = lower(fq, &second, &qp);
    Ok(ChristoffelModPi { second, first })
}

/// Christoffel symbols mod pi read off a solved connection, lowered with the
/// reduction of A_i(a).
pub fn christoffel_from_connection(conn: &ConnectionAtPoint, q: &Metric) -> Result<ChristoffelModPi> {
    let field = q.field().clone();
    let fq = field.residue_field();
    let second = conn.christoffel_second_residue()?;
    let pd = super::solve::point_data(q, &conn.lifts, &conn.point)?;
    let abar: Vec<Vec<ResidueElement>> = pd.b.iter().map(|r| r.iter().map(|x| x.residue()).collect()).collect();
    let first = lower(fq, &second, &abar);
    Ok(ChristoffelModPi { second, first })
}

/// The two formulations of symmetry for a matrix torsion symbol beta, evaluated
/// on a solved connection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BurtaReport {
    /// Gamma^k_{ij} - Gamma^k_{ji} = ell^k_{ij}
    pub additive_symmetric: bool,
    /// beta^k + Gamma^k is a symmetric matrix
    pub additive_matrix_symmetric: bool,
    /// Gamma^k_{ij} - Gamma^k_{ji} = ell^{k*}_{ij}(Lambda)
    pub multiplicative_symmetric: bool,
    /// beta^k + Gamma^k + pi beta^k Gamma^k is a symmetric matrix
    pub multiplicative_matrix_symmetric: bool,
}

impl BurtaReport {
    pub fn equivalences_hold(&self) -> bool {
        self.additive_symmetric == self.additive_matrix_symmetric
            && self.multiplicative_symmetric == self.multiplicative_matrix_symmetric
    }
}

/// verify_prop_burta at the solved point.
pub fn verify_prop_burta(conn: &ConnectionAtPoint, beta: &[Matrix]) -> Result<BurtaReport> {
    let n = conn.lambdas.len();
    if beta.len() != n || conn.point.len() != n {
        return Err(Error::Dimension("burta check needs N = n and n matrices beta^k".into()));
    }
    let g = conn.gammas()?;
    let prec = g.iter().map(crate::local_field::matrix::min_precision).min().unwrap_or(0);
    let beta: Vec<Matrix> = beta.iter().map(|b| crate::local_field::matrix::truncate(b, prec)).collect();
    let one = PadicElement::one(conn.field(), prec);
    // (Gamma^k)_{ij} = Gamma^k_{ij} = (G_i)_{kj}
    let gam = |k: usize, i: usize, j: usize| g[i][k][j].clone();
    let add_sym = TorsionSymbol::Additive { beta: beta.clone(), scale: one.clone() }.evaluate(&conn.lambdas);
    let mul_sym = TorsionSymbol::Multiplicative { beta: beta.clone(), scale: one }.evaluate(&conn.lambdas);
    let mut rep = BurtaReport {
        additive_symmetric: true,
        additive_matrix_symmetric: true,
        multiplicative_symmetric: true,
        multiplicative_matrix_symmetric: true,
    };
    for k in 0..n {
        let plus: Matrix = (0..n).map(|i| (0..n).map(|j| &beta[k][i][j] + &gam(k, i, j)).collect()).collect();
        let prod: Matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let bg = (0..n).fold(PadicElement::zero(conn.field(), prec), |acc, m| &acc + &(&beta[k][i][m] * &gam(k, m, j)));
                        &plus[i][j] + &bg.mul_pi()
                    })
                    .collect()
            })
            .collect();
        for i in 0..n {
            for j in 0..n {
                let diff = &gam(k, i, j) - &gam(k, j, i);
                if diff != add_sym[k][i][j].truncate(prec) {
                    rep.additive_symmetric = false;
                }
                if diff != mul_sym[k][i][j].truncate(prec) {
                    rep.multiplicative_symmetric = false;
                }
                if plus[i][j] != plus[j][i] {
                    rep.additive_matrix_symmetric = false;
                }
                if prod[i][j] != prod[j][i] {
                    rep.multiplicative_matrix_symmetric = false;
                }
            }
        }
    }
    Ok(rep)
}
