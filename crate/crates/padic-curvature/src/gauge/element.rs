//! Monomial gauge matrices and Galois cocycles valued in them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::local_field::{matrix, FieldAut, GaloisElement, LocalField, Matrix, PadicElement, ResidueElement, ResidueField};

/// A permutation matrix times a diagonal of Teichmuller roots of unity.
///
/// The matrix has entry [perm[j]][j] equal to the Teichmuller lift of
/// diag[j] and zeros elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaugeElement {
    pub perm: Vec<usize>,
    pub diag: Vec<ResidueElement>,
}

impl GaugeElement {
    pub fn new(perm: Vec<usize>, diag: Vec<ResidueElement>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &x in &perm {
            if x >= n || seen[x] {
                return Err(Error::Dimension(format!("{perm:?} is not a permutation")));
            }
            seen[x] = true;
        }
        if diag.len() != n {
            return Err(Error::Dimension("diagonal and permutation sizes differ".into()));
        }
        if diag.iter().any(|d| d.is_zero()) {
            return Err(Error::NotAUnit);
        }
        Ok(GaugeElement { perm, diag })
    }

    pub fn identity(fq: &ResidueField, n: usize) -> Self {
        GaugeElement { perm: (0..n).collect(), diag: vec![fq.one(); n] }
    }

    pub fn permutation(fq: &ResidueField, perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        Self::new(perm, vec![fq.one(); n])
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self, fq: &ResidueField) -> bool {
        *self == Self::identity(fq, self.n())
    }

    /// True when the diagonal part is trivial, i.e. the element lies in W.
    pub fn is_permutation(&self, fq: &ResidueField) -> bool {
        self.diag.iter().all(|d| *d == fq.one())
    }

    pub fn matrix(&self, field: &Arc<LocalField>, prec: u32) -> Matrix {
        let mut m = matrix::zeros(field, self.n(), self.n(), prec);
        for (j, (&i, d)) in self.perm.iter().zip(&self.diag).enumerate() {
            m[i][j] = PadicElement::teichmuller(field, d, prec);
        }
        m
    }

    /// The product self * other as matrices.
    pub fn compose(&self, other: &GaugeElement, fq: &ResidueField) -> GaugeElement {
        let perm = other.perm.iter().map(|&k| self.perm[k]).collect();
        let diag = other.perm.iter().zip(&other.diag).map(|(&k, d)| fq.mul(&self.diag[k], d)).collect();
        GaugeElement { perm, diag }
    }

    pub fn inverse(&self, fq: &ResidueField) -> GaugeElement {
        let n = self.n();
        let mut perm = vec![0; n];
        for (j, &i) in self.perm.iter().enumerate() {
            perm[i] = j;
        }
        let diag = perm.iter().map(|&j| fq.inv(&self.diag[j]).expect("diagonal entries are units")).collect();
        GaugeElement { perm, diag }
    }

    /// The entrywise power a^{(p^s)}; for monomial matrices it is again monomial.
    pub fn frobenius(&self, fq: &ResidueField, s: u32) -> GaugeElement {
        GaugeElement { perm: self.perm.clone(), diag: self.diag.iter().map(|d| fq.frobenius_pow(d, s as i64)).collect() }
    }

    /// w^t q w.
    pub fn act_on(&self, q: &Matrix) -> Matrix {
        let field = q[0][0].field().clone();
        let w = self.matrix(&field, matrix::min_precision(q));
        matrix::mul(&matrix::mul(&matrix::transpose(&w), q), &w)
    }
}

/// A group homomorphism from a subgroup of Gal(E/F) to the gauge group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    pub taus: Vec<GaloisElement>,
    pub values: Vec<GaugeElement>,
}

impl Cocycle {
    /// Validates closure of the domain and the homomorphism property.
    pub fn new(field: &LocalField, taus: Vec<GaloisElement>, values: Vec<GaugeElement>) -> Result<Self> {
        let e = field.e();
        let fq = field.residue_field();
        if taus.len() != values.len() || taus.is_empty() {
            return Err(Error::Dimension("a cocycle needs one value per Galois element".into()));
        }
        let n = values[0].n();
        if values.iter().any(|v| v.n() != n) {
            return Err(Error::Dimension("cocycle values have different sizes".into()));
        }
        let taus: Vec<GaloisElement> = taus.into_iter().map(|t| GaloisElement { j: t.j % e }).collect();
        let u = Cocycle { taus, values };
        for (a, ua) in u.taus.iter().zip(&u.values) {
            for (b, ub) in u.taus.iter().zip(&u.values) {
                let ab = a.compose(*b, e);
                let uab = u.value(ab).ok_or_else(|| Error::Schema(format!("domain is not closed: sigma_{} missing", ab.j)))?;
                if *uab != ua.compose(ub, fq) {
                    return Err(Error::Schema(format!("not a homomorphism at (sigma_{}, sigma_{})", a.j, b.j)));
                }
            }
        }
        Ok(u)
    }

    pub fn trivial(field: &LocalField, taus: Vec<GaloisElement>, n: usize) -> Result<Self> {
        let values = vec![GaugeElement::identity(field.residue_field(), n); taus.len()];
        Self::new(field, taus, values)
    }

    /// The cocycle on the cyclic group generated by `tau` sending tau to `u`.
    pub fn cyclic(field: &LocalField, tau: GaloisElement, u: &GaugeElement) -> Result<Self> {
        let e = field.e();
        let fq = field.residue_field();
        let mut taus = vec![GaloisElement { j: 0 }];
        let mut values = vec![GaugeElement::identity(fq, u.n())];
        let mut cur = tau;
        let mut val = u.clone();
        while !cur.j.is_multiple_of(e) {
            taus.push(cur);
            values.push(val.clone());
            cur = cur.compose(tau, e);
            val = val.compose(u, fq);
        }
        Self::new(field, taus, values)
    }

    pub fn value(&self, tau: GaloisElement) -> Option<&GaugeElement> {
        self.taus.iter().position(|t| *t == tau).map(|k| &self.values[k])
    }

    pub fn n(&self) -> usize {
        self.values[0].n()
    }

    pub fn is_trivial(&self, fq: &ResidueField) -> bool {
        self.values.iter().all(|v| v.is_identity(fq))
    }

    /// The cohomologous cocycle a^{-1} u a.
    pub fn conjugate(&self, a: &GaugeElement, fq: &ResidueField) -> Cocycle {
        let ai = a.inverse(fq);
        Cocycle { taus: self.taus.clone(), values: self.values.iter().map(|v| ai.compose(&v.compose(a, fq), fq)).collect() }
    }

    pub(crate) fn aut(tau: GaloisElement) -> FieldAut {
        FieldAut { frob: 0, j: tau.j }
    }
}
