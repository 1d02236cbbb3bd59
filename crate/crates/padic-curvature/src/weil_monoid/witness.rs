//! Executable nontriviality witnesses for the Hochschild and Lie classes.

use std::collections::BTreeMap;

use serde::Serialize;

use super::ideal::{word_from_index, word_image, NcPoly, Word};
use super::monoid::{Labeling, MonoidElement, WeilMonoid};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// degree of each factor, in multiples of c
    pub t: u32,
    pub first: (Word, Word),
    pub second: (Word, Word),
    /// first.0 first.1 - second.0 second.1 as a sparse polynomial
    #[serde(serialize_with = "serialize_poly")]
    pub vector: NcPoly,
}

fn serialize_poly<S: serde::Serializer>(p: &NcPoly, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(p.len()))?;
    for (w, c) in p {
        seq.serialize_element(&(w.iter().map(|x| x + 1).collect::<Vec<_>>(), c))?;
    }
    seq.end()
}

/// Section S: each element of D^{(tc)} mapped to its lexicographically least word.
pub fn least_words(m: &WeilMonoid, lab: &Labeling, t: u32) -> BTreeMap<MonoidElement, Word> {
    let n = m.n();
    let mut out = BTreeMap::new();
    for idx in 0..n.pow(t) {
        let w = word_from_index(idx, n, t as usize);
        out.entry(word_image(m, lab, &w)).or_insert(w);
    }
    out
}

fn difference(a: (&Word, &Word), b: (&Word, &Word)) -> NcPoly {
    let mut p = NcPoly::new();
    *p.entry([a.0.as_slice(), a.1.as_slice()].concat()).or_default() += 1;
    *p.entry([b.0.as_slice(), b.1.as_slice()].concat()).or_default() -= 1;
    p.retain(|_, c| *c != 0);
    p
}

/// Lexicographically least distinct pairs (X1, Y1), (X2, Y2) in D^{(c)} with
/// X1 Y1 = X2 Y2.
pub fn hochschild_witness(m: &WeilMonoid, lab: &Labeling) -> Option<Witness> {
    let n = m.n();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    for (a, &(i1, j1)) in pairs.iter().enumerate() {
        let x = word_image(m, lab, &[i1, j1]);
        for &(i2, j2) in &pairs[a + 1..] {
            if word_image(m, lab, &[i2, j2]) == x {
                let first = (vec![i1], vec![j1]);
                let second = (vec![i2], vec![j2]);
                let vector = difference((&first.0, &first.1), (&second.0, &second.1));
                return Some(Witness { t: 1, first, second, vector });
            }
        }
    }
    None
}

/// Distinct commuting X, Y in D^{(tc)} for the least t <= n, with the vector
/// S(X)S(Y) - S(Y)S(X).
pub fn lie_witness(m: &WeilMonoid, lab: &Labeling) -> Option<Witness> {
    let n = m.n();
    if n < 2 {
        return None;
    }
    for t in 1..=n as u32 {
        let sect: Vec<(MonoidElement, Word)> = {
            let mut v: Vec<_> = least_words(m, lab, t).into_iter().collect();
            v.sort_by(|a, b| a.1.cmp(&b.1));
            v
        };
        for (a, (x, sx)) in sect.iter().enumerate() {
            for (y, sy) in &sect[a + 1..] {
                if m.compose(*x, *y) == m.compose(*y, *x) {
                    let vector = difference((sx, sy), (sy, sx));
                    return Some(Witness { t, first: (sx.clone(), sy.clone()), second: (sy.clone(), sx.clone()), vector });
                }
            }
        }
    }
    None
}

/// Soundness: the vector maps to zero in Z[D] and is nonzero.
pub fn witness_is_sound(m: &WeilMonoid, lab: &Labeling, w: &Witness) -> bool {
    !w.vector.is_empty() && super::ideal::monoid_image(m, lab, &w.vector).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil_monoid::group::FiniteGroup;

    #[test]
    fn trivial_monoid_has_no_witnesses() {
        let m = WeilMonoid::from_pair(FiniteGroup::cyclic(1), vec![0], 1).unwrap();
        let lab = Labeling::standard(&m);
        assert!(hochschild_witness(&m, &lab).is_none());
        assert!(lie_witness(&m, &lab).is_none());
    }

    #[test]
    fn n2_lie_witness() {
        let m = WeilMonoid::from_pair(FiniteGroup::cyclic(2), vec![0, 1], 1).unwrap();
        let lab = Labeling::standard(&m);
        let w = lie_witness(&m, &lab).unwrap();
        assert_eq!(w.t, 1);
        let expect: NcPoly = [(vec![0, 1], 1), (vec![1, 0], -1)].into_iter().collect();
        assert_eq!(w.vector, expect);
        assert!(witness_is_sound(&m, &lab, &w));
    }

    #[test]
    fn nonabelian_c3_witnesses() {
        let m = WeilMonoid::from_pair(FiniteGroup::cyclic(3), vec![0, 2, 1], 1).unwrap();
        let lab = Labeling::standard(&m);
        let h = hochschild_witness(&m, &lab).unwrap();
        assert!(witness_is_sound(&m, &lab, &h));
        let l = lie_witness(&m, &lab).unwrap();
        assert_eq!(l.t, 2);
        assert!(witness_is_sound(&m, &lab, &l));
    }
}
