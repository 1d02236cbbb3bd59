//! The graded ideal n_D in Z<T_1..T_n> and integer lattice utilities.

use std::collections::BTreeMap;

use serde::Serialize;

use super::monoid::{Labeling, MonoidElement, WeilMonoid};
use crate::error::{Error, Result};

/// A noncommutative word T_{w_0} T_{w_1} ... (0-based letters).
pub type Word = Vec<usize>;

/// Integer combination of words.
pub type NcPoly = BTreeMap<Word, i64>;

/// Index of a word among all words of its length, first letter most significant.
pub fn word_index(w: &[usize], n: usize) -> usize {
    w.iter().fold(0, |acc, &x| acc * n + x)
}

pub fn word_from_index(mut idx: usize, n: usize, len: usize) -> Word {
    let mut w = vec![0; len];
    for k in (0..len).rev() {
        w[k] = idx % n;
        idx /= n;
    }
    w
}

/// phi_mu = phi_{mu_1}^{(c)} ... phi_{mu_d}^{(c)}.
pub fn word_image(m: &WeilMonoid, lab: &Labeling, w: &[usize]) -> MonoidElement {
    let mut acc = lab.element(m, 1, w[0]);
    for &x in &w[1..] {
        acc = m.compose(acc, lab.element(m, 1, x));
    }
    acc
}

/// Dense vector over the n^len words of length len.
pub fn dense(p: &NcPoly, n: usize, len: usize) -> Vec<i64> {
    let mut v = vec![0; n.pow(len as u32)];
    for (w, &c) in p {
        assert_eq!(w.len(), len);
        v[word_index(w, n)] += c;
    }
    v
}

/// Row-style Hermite normal form: echelon rows, positive pivots, entries
/// above each pivot reduced into [0, pivot). Zero rows are dropped.
pub fn hnf(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut prow = 0;
    for col in 0..ncols {
        if prow >= a.len() {
            break;
        }
        loop {
            // bring the smallest nonzero |entry| in this column to prow
            let best = (prow..a.len()).filter(|&r| a[r][col] != 0).min_by_key(|&r| a[r][col].abs());
            let Some(b) = best else { break };
            a.swap(prow, b);
            let mut done = true;
            for r in prow + 1..a.len() {
                if a[r][col] != 0 {
                    let q = a[r][col].div_euclid(a[prow][col]);
                    let pr = a[prow].clone();
                    for (x, y) in a[r].iter_mut().zip(&pr) {
                        *x -= q * y;
                    }
                    if a[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[prow][col] == 0 {
            continue;
        }
        if a[prow][col] < 0 {
            for x in a[prow].iter_mut() {
                *x = -*x;
            }
        }
        let piv = a[prow][col];
        for r in 0..prow {
            let q = a[r][col].div_euclid(piv);
            if q != 0 {
                let pr = a[prow].clone();
                for (x, y) in a[r].iter_mut().zip(&pr) {
                    *x -= q * y;
                }
            }
        }
        prow += 1;
    }
    a.truncate(prow);
    a.into_iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("HNF entry overflow")).collect())
        .collect()
}

/// Membership of v in the lattice spanned by HNF rows.
pub fn lattice_contains(h: &[Vec<i64>], v: &[i64]) -> bool {
    let mut v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    for row in h {
        let Some(col) = row.iter().position(|&x| x != 0) else { continue };
        let piv = row[col] as i128;
        if v[col] % piv != 0 {
            return false;
        }
        let q = v[col] / piv;
        for (x, &y) in v.iter_mut().zip(row) {
            *x -= q * y as i128;
        }
    }
    v.iter().all(|&x| x == 0)
}

/// Equality of the Z-spans of two families of vectors.
pub fn lattice_equal(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    let (ha, hb) = (hnf(a), hnf(b));
    a.iter().all(|v| lattice_contains(&hb, v)) && b.iter().all(|v| lattice_contains(&ha, v))
}

/// Degree-d component of n_D.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedIdealComponent {
    pub degree: u32,
    /// word length d / c
    pub length: usize,
    pub n: usize,
    /// HNF basis, columns indexed by words in lexicographic order
    pub basis: Vec<Vec<i64>>,
}

impl GradedIdealComponent {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
    pub fn as_polys(&self) -> Vec<NcPoly> {
        self.basis
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (word_from_index(i, self.n, self.length), c))
                    .collect()
            })
            .collect()
    }
}

/// The n(n-1) quadratic generators T_i T_j - T_1 T_{k_ij}, i >= 2.
pub fn ideal_generators(m: &WeilMonoid, lab: &Labeling) -> Vec<NcPoly> {
    let n = m.n();
    let mut out = Vec::new();
    for i in 1..n {
        for j in 0..n {
            let target = word_image(m, lab, &[i, j]);
            let k = (0..n).find(|&k| word_image(m, lab, &[0, k]) == target).expect("left multiplication by phi_1 is bijective");
            let mut p = NcPoly::new();
            *p.entry(vec![i, j]).or_default() += 1;
            *p.entry(vec![0, k]).or_default() -= 1;
            p.retain(|_, c| *c != 0);
            out.push(p);
        }
    }
    out
}

/// graded_component_basis(m, omega, d).
pub fn graded_component_basis(m: &WeilMonoid, lab: &Labeling, d: u32) -> Result<GradedIdealComponent> {
    if d == 0 || !d.is_multiple_of(m.c()) {
        return Err(Error::Schema(format!("degree {d} is not a positive multiple of c = {}", m.c())));
    }
    let n = m.n();
    let len = (d / m.c()) as usize;
    let total = n.checked_pow(len as u32).filter(|&t| t <= 1 << 16).ok_or_else(|| Error::Schema("component too large".into()))?;
    let mut fibers: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for idx in 0..total {
        let w = word_from_index(idx, n, len);
        fibers.entry(word_image(m, lab, &w).g).or_default().push(idx);
    }
    let mut rows = Vec::new();
    for words in fibers.values() {
        for &w in &words[1..] {
            let mut v = vec![0; total];
            v[w] = 1;
            v[words[0]] = -1;
            rows.push(v);
        }
    }
    Ok(GradedIdealComponent { degree: d, length: len, n, basis: hnf(&rows) })
}

/// Image of a vector of words in Z[D^{(d)}], keyed by group element.
pub fn monoid_image(m: &WeilMonoid, lab: &Labeling, p: &NcPoly) -> BTreeMap<MonoidElement, i64> {
    let mut out = BTreeMap::new();
    for (w, &c) in p {
        *out.entry(word_image(m, lab, w)).or_insert(0) += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil_monoid::group::FiniteGroup;

    #[test]
    fn hnf_basics() {
        let h = hnf(&[vec![2, 4], vec![3, 5]]);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
        assert!(lattice_contains(&h, &[5, 9]));
        assert!(!lattice_contains(&h, &[0, 1]));
        assert!(lattice_equal(&[vec![1, 0], vec![0, 1]], &[vec![1, 1], vec![1, 2]]));
        assert!(!lattice_equal(&[vec![2, 0], vec![0, 1]], &[vec![1, 0], vec![0, 1]]));
    }

    #[test]
    fn rank_law() {
        for g in FiniteGroup::all_small().into_iter().filter(|g| g.order() <= 4) {
            for th in g.automorphisms() {
                let m = WeilMonoid::from_pair(g.clone(), th, 1).unwrap();
                let lab = Labeling::standard(&m);
                let n = m.n();
                for d in 1..=4u32 {
                    let comp = graded_component_basis(&m, &lab, d).unwrap();
                    assert_eq!(comp.rank(), n.pow(d) - n, "{} d={d}", g.name());
                    for p in comp.as_polys() {
                        assert!(monoid_image(&m, &lab, &p).is_empty());
                    }
                }
            }
        }
    }
}
