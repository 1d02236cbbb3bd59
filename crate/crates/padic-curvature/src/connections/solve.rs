//! Pointwise solution of the metric and symmetry (or Chern) equations.

use std::sync::Arc;

use serde::Serialize;

use super::metric::{Metric, TorsionSymbol};
use crate::error::{Error, Result};
use crate::local_field::{matrix, HigherFrobenius, LocalField, Matrix, PadicElement, ResidueElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    LeviCivita,
    Chern,
}

/// The matrices Lambda_i(a), one per lift, at a base point a.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionAtPoint {
    pub point: Matrix,
    pub lambdas: Vec<Matrix>,
    pub lifts: Vec<HigherFrobenius>,
    pub s: u32,
    pub flavor: Flavor,
}

impl ConnectionAtPoint {
    pub fn field(&self) -> &Arc<LocalField> {
        self.point[0][0].field()
    }
    pub fn precision(&self) -> u32 {
        self.lambdas.iter().map(matrix::min_precision).min().unwrap_or(0)
    }

    /// G_i = Gamma_i^t = (Lambda_i - 1) / pi.
    pub fn gammas(&self) -> Result<Vec<Matrix>> {
        let field = self.field().clone();
        self.lambdas
            .iter()
            .map(|l| {
                let id = matrix::identity(&field, l.len(), matrix::min_precision(l));
                matrix::sub(l, &id).iter().map(|r| r.iter().map(|x| x.div_pi()).collect()).collect()
            })
            .collect()
    }

    /// Gamma^k_{ij}(a) mod pi as out[k][i][j] = residue of (G_i)_{kj}.
    pub fn christoffel_second_residue(&self) -> Result<Vec<Vec<Vec<ResidueElement>>>> {
        let g = self.gammas()?;
        let n_lifts = g.len();
        let dim = self.point.len();
        Ok((0..dim).map(|k| (0..n_lifts).map(|i| (0..dim).map(|j| g[i][k][j].residue()).collect()).collect()).collect())
    }
}

/// A_i(a), B(a) and D_i(a) = (B - A_i) / pi at a point.
#[derive(Clone, Debug)]
pub struct PointData {
    pub a: Vec<Matrix>,
    pub b: Matrix,
    pub d: Vec<Matrix>,
    pub prec: u32,
}

fn common_degree(lifts: &[HigherFrobenius]) -> Result<u32> {
    let s = lifts.first().ok_or_else(|| Error::Dimension("need at least one lift".into()))?.s;
    if s == 0 || lifts.iter().any(|l| l.s != s) {
        return Err(Error::InvalidSpec("lifts must share one positive degree".into()));
    }
    Ok(s)
}

/// Evaluate A_i(a) = a^{(p^s)t} phi_i(q) a^{(p^s)} and B(a) = (a^t q a)^{(p^s)}.
pub fn point_data(q: &Metric, lifts: &[HigherFrobenius], a: &Matrix) -> Result<PointData> {
    let field = q.field().clone();
    let s = common_degree(lifts)?;
    let n = q.n();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(format!("point must be {n} x {n}")));
    }
    if !matrix::det(a).is_unit() {
        return Err(Error::SingularLinearization("base point is not invertible".into()));
    }
    let prec = q.precision().min(matrix::min_precision(a)).min(field.nu());
    if prec < 2 {
        return Err(Error::InsufficientPrecision { needed: 2, have: prec });
    }
    let q = matrix::truncate(&q.entries, prec);
    let a = matrix::truncate(a, prec);
    let ps = (field.p() as u128).pow(s);
    let ap = matrix::entry_pow(&a, ps);
    let b = matrix::entry_pow(&matrix::mul(&matrix::mul(&matrix::transpose(&a), &q), &a), ps);
    let mut a_mats = Vec::new();
    let mut d_mats = Vec::new();
    for lift in lifts {
        let phq = matrix::apply_aut(&q, lift.aut(&field));
        let ai = matrix::mul(&matrix::mul(&matrix::transpose(&ap), &phq), &ap);
        let di = matrix::sub(&b, &ai).iter().map(|r| r.iter().map(|x| x.div_pi()).collect()).collect::<Result<Matrix>>()?;
        a_mats.push(ai);
        d_mats.push(di);
    }
    Ok(PointData { a: a_mats, b, d: d_mats, prec })
}

fn lambdas_from(gs: &[Matrix], field: &Arc<LocalField>, prec: u32) -> Vec<Matrix> {
    gs.iter()
        .map(|g| {
            let id = matrix::identity(field, g.len(), prec);
            matrix::add(&id, &matrix::map(g, |x| x.mul_pi()))
        })
        .collect()
}

/// Residual of the Levi-Civita system in the unknowns G_i (precision nu - 1):
/// metric parts S_i and symmetry parts T[k][i][j].
fn lc_residual(pd: &PointData, torsion: &TorsionSymbol, gs: &[Matrix]) -> (Vec<Matrix>, Vec<Vec<Vec<PadicElement>>>) {
    let field = pd.b[0][0].field().clone();
    let n = gs.len();
    let s_parts = gs
        .iter()
        .zip(&pd.a)
        .zip(&pd.d)
        .map(|((g, a), d)| {
            let gt = matrix::transpose(g);
            let lin = matrix::add(&matrix::mul(&gt, a), &matrix::mul(a, g));
            let quad = matrix::map(&matrix::mul(&matrix::mul(&gt, a), g), |x| x.mul_pi());
            matrix::sub(&matrix::add(&lin, &quad), d)
        })
        .collect();
    let lam = lambdas_from(gs, &field, pd.prec);
    let l = torsion.evaluate(&lam);
    let t_parts = (0..n)
        .map(|k| (0..n).map(|i| (0..n).map(|j| &(&gs[i][k][j] - &gs[j][k][i]) - &l[k][i][j]).collect()).collect())
        .collect();
    (s_parts, t_parts)
}

/// Approximate inverse of the linearized system: the Christoffel decomposition
/// with the symmetric matrix B in place of each A_i (they agree mod pi).
fn lc_correction(b: &Matrix, binv: &Matrix, s_parts: &[Matrix], t_parts: &[Vec<Vec<PadicElement>>]) -> Vec<Matrix> {
    let n = s_parts.len();
    let field = b[0][0].field().clone();
    let prec = matrix::min_precision(&s_parts[0]);
    let half = PadicElement::half(&field, prec);
    let zero = PadicElement::zero(&field, prec);
    let mut t_low = vec![vec![vec![zero.clone(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                t_low[i][j][l] = (0..n).fold(zero.clone(), |acc, k| &acc + &(&t_parts[k][i][j] * &b[k][l]));
            }
        }
    }
    (0..n)
        .map(|i| {
            // (Gamma_i)_{jk}, then X_i = B^{-1} Gamma_i^t
            let gamma_i: Matrix = (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| {
                            let sym = &(&s_parts[i][j][k] + &s_parts[j][i][k]) - &s_parts[k][i][j];
                            let tor = &(&t_low[i][j][k] + &t_low[k][i][j]) - &t_low[j][k][i];
                            &half * &(&sym + &tor)
                        })
                        .collect()
                })
                .collect();
            matrix::mul(binv, &matrix::transpose(&gamma_i))
        })
        .collect()
}

fn all_zero_nested(s: &[Matrix], t: &[Vec<Vec<PadicElement>>]) -> bool {
    s.iter().flatten().flatten().all(|x| x.is_zero()) && t.iter().flatten().flatten().all(|x| x.is_zero())
}

fn residue_invertible(m: &Matrix) -> bool {
    matrix::det(m).is_unit()
}

/// solve_levi_civita_at_point: Hensel iteration G <- G - J^{-1} F(G).
pub fn solve_levi_civita_at_point(q: &Metric, torsion: &TorsionSymbol, lifts: &[HigherFrobenius], a: &Matrix) -> Result<ConnectionAtPoint> {
    let n = q.n();
    if lifts.len() != n {
        return Err(Error::Dimension(format!("Levi-Civita needs N = n, got N = {n}, n = {}", lifts.len())));
    }
    let pd = point_data(q, lifts, a)?;
    let field = q.field().clone();
    if !residue_invertible(&pd.b) {
        return Err(Error::SingularLinearization("metric is not invertible mod pi".into()));
    }
    let binv = matrix::inverse(&pd.b)?;
    let mut gs = vec![matrix::zeros(&field, n, n, pd.prec - 1); n];
    let mut converged = false;
    for _ in 0..pd.prec + 4 {
        let (s_parts, t_parts) = lc_residual(&pd, torsion, &gs);
        if all_zero_nested(&s_parts, &t_parts) {
            converged = true;
            break;
        }
        let x = lc_correction(&pd.b, &binv, &s_parts, &t_parts);
        gs = gs.iter().zip(&x).map(|(g, x)| matrix::sub(g, x)).collect();
    }
    if !converged {
        return Err(Error::SingularLinearization("Hensel iteration did not reach a fixed point".into()));
    }
    Ok(ConnectionAtPoint {
        point: matrix::truncate(a, pd.prec),
        lambdas: lambdas_from(&gs, &field, pd.prec),
        lifts: lifts.to_vec(),
        s: lifts[0].s,
        flavor: Flavor::LeviCivita,
    })
}

fn flatten_lc(pd: &PointData, torsion: &TorsionSymbol, gs: &[Matrix]) -> Vec<PadicElement> {
    let (s, t) = lc_residual(pd, torsion, gs);
    s.into_iter().flatten().flatten().chain(t.into_iter().flatten().flatten()).collect()
}

fn div_pi_times(x: &PadicElement, d: u32) -> Result<PadicElement> {
    let mut y = x.clone();
    for _ in 0..d {
        y = y.div_pi()?;
    }
    Ok(y)
}

/// An independent Levi-Civita solver: fix one pi-digit of every unknown at a
/// time by solving the residue-field linear system whose columns are finite
/// differences of the full residual.
pub fn solve_levi_civita_digitwise(q: &Metric, torsion: &TorsionSymbol, lifts: &[HigherFrobenius], a: &Matrix) -> Result<ConnectionAtPoint> {
    let n = q.n();
    if lifts.len() != n {
        return Err(Error::Dimension(format!("Levi-Civita needs N = n, got N = {n}, n = {}", lifts.len())));
    }
    let pd = point_data(q, lifts, a)?;
    let field = q.field().clone();
    let fq = field.residue_field().clone();
    let gp = pd.prec - 1;
    let mut gs = vec![matrix::zeros(&field, n, n, gp); n];
    let unknowns = n * n * n;
    // unknowns are visited column-major (c, r, i), unlike the Newton solver
    let locate = |u: usize| (u % n, (u / n) % n, u / (n * n));
    for d in 0..gp {
        let base = flatten_lc(&pd, torsion, &gs);
        let rhs: Vec<ResidueElement> =
            base.iter().map(|x| div_pi_times(x, d).map(|y| fq.neg(&y.residue()))).collect::<Result<_>>()?;
        let step = PadicElement::pi_pow(&field, d, gp);
        let mut cols = Vec::with_capacity(unknowns);
        for u in 0..unknowns {
            let (i, r, c) = locate(u);
            let mut g2 = gs.clone();
            g2[i][r][c] = &g2[i][r][c] + &step;
            let moved = flatten_lc(&pd, torsion, &g2);
            let col: Vec<ResidueElement> =
                moved.iter().zip(&base).map(|(x, y)| div_pi_times(&(x - y), d).map(|z| z.residue())).collect::<Result<_>>()?;
            cols.push(col);
        }
        let rows: Vec<Vec<ResidueElement>> = (0..rhs.len()).map(|e| cols.iter().map(|c| c[e].clone()).collect()).collect();
        let (x, rank) = fq
            .solve_linear(&rows, &rhs)
            .ok_or_else(|| Error::SingularLinearization(format!("digit {d} system is inconsistent")))?;
        if rank < unknowns {
            return Err(Error::SingularLinearization(format!("digit {d} system has rank {rank} < {unknowns}")));
        }
        for (u, xu) in x.iter().enumerate() {
            if !xu.is_zero() {
                let (i, r, c) = locate(u);
                gs[i][r][c] = &gs[i][r][c] + &(&PadicElement::teichmuller(&field, xu, gp) * &step);
            }
        }
    }
    let (s_parts, t_parts) = lc_residual(&pd, torsion, &gs);
    if !all_zero_nested(&s_parts, &t_parts) {
        return Err(Error::SingularLinearization("digitwise solve left a nonzero residual".into()));
    }
    Ok(ConnectionAtPoint {
        point: matrix::truncate(a, pd.prec),
        lambdas: lambdas_from(&gs, &field, pd.prec),
        lifts: lifts.to_vec(),
        s: lifts[0].s,
        flavor: Flavor::LeviCivita,
    })
}

/// solve_chern_at_point: with M = A_i G_i symmetric the metric equation reads
/// 2M + pi M A_i^{-1} M = D_i, solved by the contraction M <- (D_i - pi M A_i^{-1} M) / 2.
pub fn solve_chern_at_point(q: &Metric, lifts: &[HigherFrobenius], a: &Matrix) -> Result<ConnectionAtPoint> {
    let pd = point_data(q, lifts, a)?;
    let field = q.field().clone();
    let n = q.n();
    let half = PadicElement::half(&field, pd.prec);
    let mut gs = Vec::new();
    for (ai, di) in pd.a.iter().zip(&pd.d) {
        if !residue_invertible(ai) {
            return Err(Error::SingularLinearization("metric is not invertible mod pi".into()));
        }
        let ainv = matrix::inverse(ai)?;
        let mut m = matrix::zeros(&field, n, n, pd.prec - 1);
        let mut converged = false;
        for _ in 0..pd.prec + 4 {
            let quad = matrix::map(&matrix::mul(&matrix::mul(&m, &ainv), &m), |x| x.mul_pi());
            let next = matrix::scale(&matrix::sub(di, &quad), &half);
            if next == m {
                converged = true;
                break;
            }
            m = next;
        }
        if !converged {
            return Err(Error::SingularLinearization("Chern iteration did not reach a fixed point".into()));
        }
        gs.push(matrix::mul(&ainv, &m));
    }
    let conn = ConnectionAtPoint {
        point: matrix::truncate(a, pd.prec),
        lambdas: lambdas_from(&gs, &field, pd.prec),
        lifts: lifts.to_vec(),
        s: lifts[0].s,
        flavor: Flavor::Chern,
    };
    if !chern_residual(&pd, &conn).iter().flatten().flatten().all(|x| x.is_zero()) {
        return Err(Error::SingularLinearization("Chern solution fails its residual check".into()));
    }
    Ok(conn)
}

/// Lambda_i^t A_i Lambda_i - B for each lift.
pub fn metric_residual(pd: &PointData, conn: &ConnectionAtPoint) -> Vec<Matrix> {
    conn.lambdas
        .iter()
        .zip(&pd.a)
        .map(|(l, a)| matrix::sub(&matrix::mul(&matrix::mul(&matrix::transpose(l), a), l), &pd.b))
        .collect()
}

/// (Lambda_i - 1)_{kj} - (Lambda_j - 1)_{ki} - pi L^k_{ij}(Lambda), as out[k][i][j].
pub fn symmetry_residual(conn: &ConnectionAtPoint, torsion: &TorsionSymbol) -> Vec<Vec<Vec<PadicElement>>> {
    let n = conn.lambdas.len();
    let l = torsion.evaluate(&conn.lambdas);
    let one = PadicElement::one(conn.field(), conn.precision());
    let dev = |m: usize, a: usize, b: usize| -> PadicElement {
        let x = &conn.lambdas[m][a][b];
        if a == b {
            x - &one
        } else {
            x.clone()
        }
    };
    (0..n)
        .map(|k| (0..n).map(|i| (0..n).map(|j| &(&dev(i, k, j) - &dev(j, k, i)) - &l[k][i][j].mul_pi()).collect()).collect())
        .collect()
}

/// A_i Lambda_i - Lambda_i^t A_i for each lift.
pub fn chern_residual(pd: &PointData, conn: &ConnectionAtPoint) -> Vec<Matrix> {
    conn.lambdas
        .iter()
        .zip(&pd.a)
        .map(|(l, a)| matrix::sub(&matrix::mul(a, l), &matrix::mul(&matrix::transpose(l), a)))
        .collect()
}

/// Both defining equations of the connection hold exactly at its precision.
pub fn verify_connection(q: &Metric, torsion: &TorsionSymbol, conn: &ConnectionAtPoint) -> Result<bool> {
    let pd = point_data(q, &conn.lifts, &conn.point)?;
    let metric_ok = metric_residual(&pd, conn).iter().flatten().flatten().all(|x| x.is_zero());
    let second_ok = match conn.flavor {
        Flavor::LeviCivita => symmetry_residual(conn, torsion).iter().flatten().flatten().all(|x| x.is_zero()),
        Flavor::Chern => chern_residual(&pd, conn).iter().flatten().flatten().all(|x| x.is_zero()),
    };
    let unipotent = conn.lambdas.iter().all(|l| {
        l.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| if i == j { x.residue() == x.field().residue_field().one() } else { x.residue().is_zero() }))
    });
    Ok(metric_ok && second_ok && unipotent)
}
