//! Metrics, torsion symbols and their canonical constructions.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::local_field::{matrix, LocalField, Matrix, PadicElement, ResidueElement};
use crate::weil_monoid::{SymbolTables, Word};

/// A symmetric matrix with unit determinant, tagged with its degree s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    pub entries: Matrix,
    pub s: u32,
}

impl Metric {
    pub fn new(entries: Matrix, s: u32) -> Result<Self> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("metric must be a nonempty square matrix".into()));
        }
        if !matrix::is_symmetric(&entries) {
            return Err(Error::Dimension("metric must be symmetric".into()));
        }
        if !matrix::det(&entries).is_unit() {
            return Err(Error::SingularLinearization("metric determinant is not a unit".into()));
        }
        Ok(Metric { entries, s })
    }

    pub fn identity(field: &Arc<LocalField>, n: usize, s: u32) -> Self {
        Metric { entries: matrix::identity(field, n, field.nu()), s }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }
    pub fn field(&self) -> &Arc<LocalField> {
        self.entries[0][0].field()
    }
    pub fn precision(&self) -> u32 {
        matrix::min_precision(&self.entries)
    }
    pub fn get(&self, i: usize, j: usize) -> &PadicElement {
        &self.entries[i][j]
    }

    /// The reduction mod pi.
    pub fn residue(&self) -> Vec<Vec<ResidueElement>> {
        self.entries.iter().map(|r| r.iter().map(|x| x.residue()).collect()).collect()
    }

    /// Teichmuller digit `k` of every entry.
    pub fn digit(&self, k: usize) -> Vec<Vec<ResidueElement>> {
        let zero = self.field().residue_field().zero();
        self.entries.iter().map(|r| r.iter().map(|x| x.digits().get(k).cloned().unwrap_or_else(|| zero.clone())).collect()).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| i == j || self.entries[i][j].is_zero()))
    }

    pub fn has_unit_diagonal(&self) -> bool {
        (0..self.n()).all(|i| self.entries[i][i].is_unit())
    }

    /// Entrywise image under a permutation: (eps . q)_{ij} = q_{eps(i) eps(j)}.
    pub fn permuted(&self, eps: &[usize]) -> Metric {
        let n = self.n();
        let entries = (0..n).map(|i| (0..n).map(|j| self.entries[eps[i]][eps[j]].clone()).collect()).collect();
        Metric { entries, s: self.s }
    }

    /// lambda q, for a unit lambda.
    pub fn scaled(&self, lambda: &PadicElement) -> Metric {
        Metric { entries: matrix::scale(&self.entries, lambda), s: self.s }
    }
}

/// Additive torsion is constant in Lambda; multiplicative torsion is affine in Lambda.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TorsionKind {
    Zero,
    Additive,
    Multiplicative,
}

/// A torsion symbol given by a matrix symbol beta (beta[k] is n x n) and a scale gamma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorsionSymbol {
    Zero,
    Additive { beta: Vec<Matrix>, scale: PadicElement },
    Multiplicative { beta: Vec<Matrix>, scale: PadicElement },
}

impl TorsionSymbol {
    pub fn kind(&self) -> TorsionKind {
        match self {
            TorsionSymbol::Zero => TorsionKind::Zero,
            TorsionSymbol::Additive { .. } => TorsionKind::Additive,
            TorsionSymbol::Multiplicative { .. } => TorsionKind::Multiplicative,
        }
    }

    pub fn beta(&self) -> Option<&[Matrix]> {
        match self {
            TorsionSymbol::Zero => None,
            TorsionSymbol::Additive { beta, .. } | TorsionSymbol::Multiplicative { beta, .. } => Some(beta),
        }
    }

    /// The same symbol with its scale multiplied by `factor`.
    pub fn rescaled(&self, factor: &PadicElement) -> TorsionSymbol {
        match self {
            TorsionSymbol::Zero => TorsionSymbol::Zero,
            TorsionSymbol::Additive { beta, scale } => TorsionSymbol::Additive { beta: beta.clone(), scale: scale * factor },
            TorsionSymbol::Multiplicative { beta, scale } => {
                TorsionSymbol::Multiplicative { beta: beta.clone(), scale: scale * factor }
            }
        }
    }

    /// Relabelled symbol: beta'^k_{ij} = beta^{eps(k)}_{eps(i) eps(j)}.
    pub fn permuted(&self, eps: &[usize]) -> TorsionSymbol {
        let perm = |beta: &[Matrix]| -> Vec<Matrix> {
            let n = eps.len();
            (0..n).map(|k| (0..n).map(|i| (0..n).map(|j| beta[eps[k]][eps[i]][eps[j]].clone()).collect()).collect()).collect()
        };
        match self {
            TorsionSymbol::Zero => TorsionSymbol::Zero,
            TorsionSymbol::Additive { beta, scale } => TorsionSymbol::Additive { beta: perm(beta), scale: scale.clone() },
            TorsionSymbol::Multiplicative { beta, scale } => {
                TorsionSymbol::Multiplicative { beta: perm(beta), scale: scale.clone() }
            }
        }
    }

    /// L^k_{ij}(Lambda), returned as out[k][i][j].
    pub fn evaluate(&self, lambdas: &[Matrix]) -> Vec<Vec<Vec<PadicElement>>> {
        let n = lambdas.len();
        let field = lambdas[0][0][0].field().clone();
        let prec = lambdas.iter().map(matrix::min_precision).min().unwrap_or(field.nu());
        let zero = PadicElement::zero(&field, prec);
        match self {
            TorsionSymbol::Zero => vec![vec![vec![zero; n]; n]; n],
            TorsionSymbol::Additive { beta, scale } => (0..n)
                .map(|k| (0..n).map(|i| (0..n).map(|j| scale * &(&beta[k][j][i] - &beta[k][i][j])).collect()).collect())
                .collect(),
            TorsionSymbol::Multiplicative { beta, scale } => {
                let one = PadicElement::one(&field, prec);
                // (Lambda_m)_{ab} - delta_{ab}
                let dev = |m: usize, a: usize, b: usize| -> PadicElement {
                    if a == b {
                        &lambdas[m][a][b] - &one
                    } else {
                        lambdas[m][a][b].clone()
                    }
                };
                (0..n)
                    .map(|k| {
                        (0..n)
                            .map(|i| {
                                (0..n)
                                    .map(|j| {
                                        let mut acc = &beta[k][j][i] - &beta[k][i][j];
                                        for m in 0..n {
                                            acc = &acc + &(&beta[k][j][m] * &dev(m, k, i));
                                            acc = &acc - &(&beta[k][i][m] * &dev(m, k, j));
                                        }
                                        scale * &acc
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            }
        }
    }

    /// L(1) reduced mod pi, as out[k][i][j].
    pub fn residue_at_identity(&self, field: &Arc<LocalField>, n: usize) -> Vec<Vec<Vec<ResidueElement>>> {
        let id = vec![matrix::identity(field, n, field.nu()); n];
        self.evaluate(&id).iter().map(|a| a.iter().map(|r| r.iter().map(|x| x.residue()).collect()).collect()).collect()
    }
}

/// canonical_torsion: beta^k = alpha^{k(s,s)} (beta^k_{ji} = 1 iff phi_i phi_j = phi_k), scaled by gamma.
pub fn canonical_torsion(field: &Arc<LocalField>, tables: &SymbolTables, kind: TorsionKind, scale: &PadicElement) -> TorsionSymbol {
    let prec = field.nu();
    let beta: Vec<Matrix> = tables
        .alpha
        .iter()
        .map(|a| a.iter().map(|row| row.iter().map(|&x| PadicElement::from_int(field, x as i64, prec)).collect()).collect())
        .collect();
    match kind {
        TorsionKind::Zero => TorsionSymbol::Zero,
        TorsionKind::Additive => TorsionSymbol::Additive { beta, scale: scale.clone() },
        TorsionKind::Multiplicative => TorsionSymbol::Multiplicative { beta, scale: scale.clone() },
    }
}

/// (q_h^{(s)})_{ij} = q_{hh}^{s/c - 1} q_{ij}.
pub fn canonical_secondary_metric(q: &Metric, h: usize, s: u32, c: u32) -> Result<Metric> {
    if !q.has_unit_diagonal() {
        return Err(Error::NonUnitDiagonal);
    }
    if s == 0 || !s.is_multiple_of(c) {
        return Err(Error::Schema(format!("degree {s} is not a positive multiple of {c}")));
    }
    let lambda = q.entries[h][h].pow((s / c - 1) as u128);
    Ok(Metric { entries: matrix::scale(&q.entries, &lambda), s })
}

/// Word form: q^{(s)}_{ij} = prod_r q_{w_i[r] w_j[r]} for words w_i of equal length.
pub fn secondary_metric_from_words(q: &Metric, words: &[Word], s: u32) -> Result<Metric> {
    if !q.has_unit_diagonal() {
        return Err(Error::NonUnitDiagonal);
    }
    let n = words.len();
    let len = words.first().map(|w| w.len()).unwrap_or(0);
    if n != q.n() || words.iter().any(|w| w.len() != len) {
        return Err(Error::Dimension("need one word of common length per index".into()));
    }
    let field = q.field().clone();
    let entries: Matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..len).fold(PadicElement::one(&field, q.precision()), |acc, r| &acc * &q.entries[words[i][r]][words[j][r]])
                })
                .collect()
        })
        .collect();
    Metric::new(entries, s)
}
