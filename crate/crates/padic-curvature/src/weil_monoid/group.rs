//! Finite groups given by Cayley tables.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A finite group on {0, ..., n-1} with explicit multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    name: String,
}

pub const MAX_ORDER: usize = 24;

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || n > MAX_ORDER {
            return Err(Error::Schema(format!("group order must be in 1..={MAX_ORDER}")));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Schema("Cayley table is not n x n over 0..n".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Schema("Cayley table has no identity".into()))?;
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::Schema(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Schema("Cayley table is not associative".into()));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, identity, inverse, name: format!("G{n}") })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let mut g = Self::from_table(table).expect("cyclic table");
        g.name = format!("C{n}");
        g
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let table = (0..na * nb)
            .map(|x| (0..na * nb).map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)).collect())
            .collect();
        let mut g = Self::from_table(table).expect("product table");
        g.name = format!("{}x{}", a.name, b.name);
        g
    }

    /// The group generated by permutations of {0..d-1}; elements are sorted
    /// lexicographically, so the identity comes first.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Self> {
        let d = gens.first().map(|g| g.len()).unwrap_or(0);
        let id: Vec<usize> = (0..d).collect();
        for g in gens {
            let s: BTreeSet<_> = g.iter().copied().collect();
            if g.len() != d || s.len() != d || s.iter().any(|&x| x >= d) {
                return Err(Error::Schema(format!("{g:?} is not a permutation of 0..{d}")));
            }
        }
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { (0..d).map(|i| a[b[i]]).collect() };
        let mut elems: BTreeSet<Vec<usize>> = BTreeSet::from([id]);
        loop {
            let mut next = elems.clone();
            for x in &elems {
                for g in gens {
                    next.insert(compose(x, g));
                }
            }
            if next.len() == elems.len() {
                break;
            }
            if next.len() > MAX_ORDER {
                return Err(Error::Schema(format!("generated group exceeds order {MAX_ORDER}")));
            }
            elems = next;
        }
        let elems: Vec<Vec<usize>> = elems.into_iter().collect();
        let index = |p: &Vec<usize>| elems.iter().position(|x| x == p).expect("closed");
        let table = elems.iter().map(|a| elems.iter().map(|b| index(&compose(a, b))).collect()).collect();
        Self::from_table(table)
    }

    pub fn symmetric3() -> Self {
        let mut g = Self::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).expect("S3");
        g.name = "S3".into();
        g
    }

    /// Every group of order at most 6, up to isomorphism.
    pub fn all_small() -> Vec<FiniteGroup> {
        vec![
            Self::cyclic(1),
            Self::cyclic(2),
            Self::cyclic(3),
            Self::cyclic(4),
            Self::direct_product(&Self::cyclic(2), &Self::cyclic(2)),
            Self::cyclic(5),
            Self::cyclic(6),
            Self::symmetric3(),
        ]
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn order(&self) -> usize {
        self.table.len()
    }
    pub fn identity(&self) -> usize {
        self.identity
    }
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_automorphism(&self, theta: &[usize]) -> bool {
        let n = self.order();
        if theta.len() != n || theta.iter().collect::<BTreeSet<_>>().len() != n || theta.iter().any(|&x| x >= n) {
            return false;
        }
        (0..n).all(|a| (0..n).all(|b| theta[self.mul(a, b)] == self.mul(theta[a], theta[b])))
    }

    /// All automorphisms, by brute force over bijections fixing the identity.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| {
            if self.is_automorphism(p) {
                out.push(p.to_vec());
            }
        });
        out.sort();
        out
    }
}

/// Heap-free recursive enumeration of all permutations of `v[k..]`.
pub fn permutations(v: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, visit);
        v.swap(k, i);
    }
}
