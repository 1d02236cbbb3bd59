//! Diagonal-sum invariants of metrics and curvature tensors.
//!
//! An expression is a signed sum of terms like `Qinv_ij*Qinv_lk*X_likj`. Each
//! letter index is summed over 0..n; a digit index is fixed (1-based) and is
//! only useful for negative controls, since it breaks permutation invariance.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local_field::{ResidueElement, ResidueField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sym {
    /// the metric q_ij
    Q,
    /// the inverse metric q^ij
    Qinv,
    /// the lowered curvature R_ijkl
    X,
    /// the Chern curvature tensor F_hij
    Y,
}

impl Sym {
    fn arity(self) -> usize {
        match self {
            Sym::Q | Sym::Qinv => 2,
            Sym::X => 4,
            Sym::Y => 3,
        }
    }
    fn name(self) -> &'static str {
        match self {
            Sym::Q => "Q",
            Sym::Qinv => "Qinv",
            Sym::X => "X",
            Sym::Y => "Y",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Idx {
    Var(char),
    Fixed(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub sym: Sym,
    pub idx: Vec<Idx>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantExpression {
    pub name: String,
    pub terms: Vec<Term>,
}

/// Expansion of an expression at a fixed n: monomials in the entries, with
/// Q and Qinv indices sorted because both matrices are symmetric.
pub type FormalPoly = BTreeMap<Vec<(Sym, Vec<usize>)>, i64>;

fn parse_factor(s: &str) -> Result<Factor> {
    let (name, idx) = s.split_once('_').ok_or_else(|| Error::Schema(format!("factor '{s}' lacks indices")))?;
    let sym = match name {
        "Q" => Sym::Q,
        "Qinv" => Sym::Qinv,
        "X" => Sym::X,
        "Y" => Sym::Y,
        _ => return Err(Error::Schema(format!("unknown symbol '{name}'"))),
    };
    let idx: Vec<Idx> = idx
        .chars()
        .map(|ch| match ch {
            'a'..='z' => Ok(Idx::Var(ch)),
            '1'..='9' => Ok(Idx::Fixed(ch as usize - '1' as usize)),
            _ => Err(Error::Schema(format!("bad index '{ch}' in '{s}'"))),
        })
        .collect::<Result<_>>()?;
    if idx.len() != sym.arity() {
        return Err(Error::Schema(format!("'{s}' needs {} indices", sym.arity())));
    }
    Ok(Factor { sym, idx })
}

fn parse_term(s: &str, sign: i64) -> Result<Term> {
    let mut coeff = sign;
    let mut factors = Vec::new();
    for part in s.split('*').map(str::trim).filter(|x| !x.is_empty()) {
        if let Ok(c) = part.parse::<i64>() {
            coeff *= c;
        } else {
            factors.push(parse_factor(part)?);
        }
    }
    if factors.is_empty() {
        return Err(Error::Schema(format!("term '{s}' has no factors")));
    }
    Ok(Term { coeff, factors })
}

impl InvariantExpression {
    /// Parse "X_ijij + 2*Q_ij*X_ikjk - Y_iij".
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut sign = 1;
        let mut cur = String::new();
        let flush = |cur: &mut String, sign: i64, terms: &mut Vec<Term>| -> Result<()> {
            if !cur.trim().is_empty() {
                terms.push(parse_term(cur.trim(), sign)?);
            }
            cur.clear();
            Ok(())
        };
        for ch in text.chars() {
            match ch {
                '+' | '-' => {
                    flush(&mut cur, sign, &mut terms)?;
                    sign = if ch == '-' { -1 } else { 1 };
                }
                _ => cur.push(ch),
            }
        }
        flush(&mut cur, sign, &mut terms)?;
        if terms.is_empty() {
            return Err(Error::Schema(format!("invariant '{name}' is empty")));
        }
        Ok(InvariantExpression { name: name.to_string(), terms })
    }

    pub fn uses(&self, sym: Sym) -> bool {
        self.terms.iter().any(|t| t.factors.iter().any(|f| f.sym == sym))
    }

    /// Sum of two expressions (variables stay local to each term).
    pub fn plus(&self, other: &InvariantExpression) -> InvariantExpression {
        InvariantExpression { name: format!("{}+{}", self.name, other.name), terms: [self.terms.clone(), other.terms.clone()].concat() }
    }

    /// Expand at rank n into a polynomial in the matrix and tensor entries.
    pub fn expand(&self, n: usize) -> FormalPoly {
        let mut out = FormalPoly::new();
        for term in &self.terms {
            for_each_assignment(term, n, |assign| {
                let mut mono: Vec<(Sym, Vec<usize>)> = term
                    .factors
                    .iter()
                    .map(|f| {
                        let mut idx: Vec<usize> = f.idx.iter().map(|i| resolve(i, assign)).collect();
                        if matches!(f.sym, Sym::Q | Sym::Qinv) {
                            idx.sort();
                        }
                        (f.sym, idx)
                    })
                    .collect();
                mono.sort();
                *out.entry(mono).or_default() += term.coeff;
            });
        }
        out.retain(|_, c| *c != 0);
        out
    }

    /// Formal invariance: the expansion is unchanged by relabelling all
    /// indices with every permutation of 0..n.
    pub fn is_formally_invariant(&self, n: usize) -> bool {
        let base = self.expand(n);
        permutations(n).iter().all(|eps| permute_poly(&base, eps) == base)
    }

    pub fn evaluate(&self, fq: &ResidueField, data: &InvariantData) -> Result<ResidueElement> {
        let n = data.q.len();
        if self.uses(Sym::X) && data.x.is_none() {
            return Err(Error::Schema(format!("invariant '{}' needs a curvature tensor", self.name)));
        }
        if self.uses(Sym::Y) && data.y.is_none() {
            return Err(Error::Schema(format!("invariant '{}' needs a Chern curvature tensor", self.name)));
        }
        if self.uses(Sym::Qinv) && data.qinv.is_none() {
            return Err(Error::SingularLinearization("metric is not invertible mod pi".into()));
        }
        let fixed_ok = self.terms.iter().flat_map(|t| &t.factors).flat_map(|f| &f.idx).all(|i| match i {
            Idx::Fixed(k) => *k < n,
            Idx::Var(_) => true,
        });
        if !fixed_ok {
            return Err(Error::Dimension(format!("fixed index out of range in '{}'", self.name)));
        }
        let mut acc = fq.zero();
        for term in &self.terms {
            let coeff = fq.from_int(term.coeff);
            for_each_assignment(term, n, |assign| {
                let mut v = coeff.clone();
                for f in &term.factors {
                    let ix: Vec<usize> = f.idx.iter().map(|i| resolve(i, assign)).collect();
                    let e = match f.sym {
                        Sym::Q => &data.q[ix[0]][ix[1]],
                        Sym::Qinv => &data.qinv.as_ref().expect("checked")[ix[0]][ix[1]],
                        Sym::X => &data.x.as_ref().expect("checked")[ix[0]][ix[1]][ix[2]][ix[3]],
                        Sym::Y => &data.y.as_ref().expect("checked")[ix[0]][ix[1]][ix[2]],
                    };
                    v = fq.mul(&v, e);
                }
                acc = fq.add(&acc, &v);
            });
        }
        Ok(acc)
    }
}

impl fmt::Display for InvariantExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            let sign = if t.coeff < 0 { " - " } else if k > 0 { " + " } else { "" };
            write!(f, "{}", if k == 0 && t.coeff < 0 { "-" } else { sign })?;
            if t.coeff.abs() != 1 {
                write!(f, "{}*", t.coeff.abs())?;
            }
            let parts: Vec<String> = t
                .factors
                .iter()
                .map(|fa| {
                    let idx: String = fa
                        .idx
                        .iter()
                        .map(|i| match i {
                            Idx::Var(c) => *c,
                            Idx::Fixed(k) => char::from_digit(*k as u32 + 1, 10).unwrap_or('?'),
                        })
                        .collect();
                    format!("{}_{}", fa.sym.name(), idx)
                })
                .collect();
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

fn resolve(i: &Idx, assign: &BTreeMap<char, usize>) -> usize {
    match i {
        Idx::Var(c) => assign[c],
        Idx::Fixed(k) => *k,
    }
}

fn for_each_assignment(term: &Term, n: usize, mut f: impl FnMut(&BTreeMap<char, usize>)) {
    let vars: Vec<char> = {
        let mut v: Vec<char> = term
            .factors
            .iter()
            .flat_map(|f| &f.idx)
            .filter_map(|i| match i {
                Idx::Var(c) => Some(*c),
                Idx::Fixed(_) => None,
            })
            .collect();
        v.sort();
        v.dedup();
        v
    };
    let total = n.pow(vars.len() as u32);
    let mut assign = BTreeMap::new();
    for code in 0..total {
        let mut c = code;
        for v in &vars {
            assign.insert(*v, c % n);
            c /= n;
        }
        f(&assign);
    }
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                rec(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn permute_poly(p: &FormalPoly, eps: &[usize]) -> FormalPoly {
    let mut out = FormalPoly::new();
    for (mono, c) in p {
        let mut m: Vec<(Sym, Vec<usize>)> = mono
            .iter()
            .map(|(s, idx)| {
                let mut v: Vec<usize> = idx.iter().map(|&i| eps[i]).collect();
                if matches!(s, Sym::Q | Sym::Qinv) {
                    v.sort();
                }
                (*s, v)
            })
            .collect();
        m.sort();
        *out.entry(m).or_default() += c;
    }
    out
}

/// The values an invariant is evaluated on.
#[derive(Clone, Debug)]
pub struct InvariantData {
    pub q: Vec<Vec<ResidueElement>>,
    pub qinv: Option<Vec<Vec<ResidueElement>>>,
    pub x: Option<Vec<Vec<Vec<Vec<ResidueElement>>>>>,
    pub y: Option<Vec<Vec<Vec<ResidueElement>>>>,
}

impl InvariantData {
    pub fn new(
        fq: &ResidueField,
        q: Vec<Vec<ResidueElement>>,
        x: Option<Vec<Vec<Vec<Vec<ResidueElement>>>>>,
        y: Option<Vec<Vec<Vec<ResidueElement>>>>,
    ) -> Self {
        let qinv = fq.mat_inv(&q);
        InvariantData { q, qinv, x, y }
    }
}

/// The built-in invariants.
pub fn catalog() -> Vec<InvariantExpression> {
    [
        ("trace_q", "Q_ii"),
        ("sum_q", "Q_ij"),
        ("x_ijij", "X_ijij"),
        ("x_ijik", "X_ijik"),
        ("scalar", "Qinv_ij*Qinv_lk*X_likj"),
        ("chern_y_iij", "Y_iij"),
    ]
    .iter()
    .map(|(n, t)| InvariantExpression::parse(n, t).expect("catalog entries parse"))
    .collect()
}

/// Generators of the ideal of relations satisfied by every abelian curvature
/// tensor: the two antisymmetries and the first Bianchi identity.
pub fn riemann_ideal_generators() -> Vec<InvariantExpression> {
    [("antisym_ij", "X_ijkl + X_jikl"), ("antisym_kl", "X_ijkl + X_ijlk"), ("bianchi", "X_ijkl + X_iklj + X_iljk")]
        .iter()
        .map(|(n, t)| InvariantExpression::parse(n, t).expect("generators parse"))
        .collect()
}

/// The relation satisfied by every Chern curvature tensor.
pub fn chern_ideal_generators() -> Vec<InvariantExpression> {
    vec![InvariantExpression::parse("antisym_ij", "Y_hij + Y_hji").expect("generator parses")]
}

/// generator * monomial, as a single expression: every term of the generator
/// is multiplied by the monomial's factors (shared letters are shared indices).
pub fn times_monomial(generator: &InvariantExpression, monomial: &str) -> Result<InvariantExpression> {
    let m = InvariantExpression::parse("monomial", monomial)?;
    if m.terms.len() != 1 {
        return Err(Error::Schema("multiplier must be a single monomial".into()));
    }
    let mt = &m.terms[0];
    let terms = generator
        .terms
        .iter()
        .map(|t| Term { coeff: t.coeff * mt.coeff, factors: [t.factors.clone(), mt.factors.clone()].concat() })
        .collect();
    Ok(InvariantExpression { name: format!("({})*{}", generator.name, monomial), terms })
}
