//! The finite field F_q = F_p[t]/(g) with q = p^f.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinates of an element of F_q in the basis 1, t, ..., t^{f-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueElement {
    pub coeffs: Vec<u64>,
}

impl ResidueElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Dense polynomial over F_p, lowest degree first, no trailing zeros.
type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn poly_rem(a: &[u64], g: &[u64], p: u64) -> Poly {
    let mut r = trim(a.to_vec());
    let g = trim(g.to_vec());
    let dg = g.len() - 1;
    let lead_inv = inv_mod_p(g[dg], p);
    while r.len() > dg && !r.is_empty() {
        let d = r.len() - 1;
        let x = mul_mod(r[d], lead_inv, p);
        for (i, &gi) in g.iter().enumerate() {
            let k = d - dg + i;
            r[k] = (r[k] + p - mul_mod(x, gi, p)) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], g: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    poly_rem(&out, g, p)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// t^(p^k) mod g.
fn t_pow_p_pow(k: usize, g: &[u64], p: u64) -> Poly {
    let mut x = poly_rem(&[0, 1], g, p);
    for _ in 0..k {
        // raise to the p-th power by square and multiply
        let mut r: Poly = vec![1];
        let mut b = x.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                r = poly_mulmod(&r, &b, g, p);
            }
            b = poly_mulmod(&b, &b, g, p);
            e >>= 1;
        }
        x = r;
    }
    x
}

/// Rabin's irreducibility test for a monic polynomial over F_p.
pub fn is_irreducible(g: &[u64], p: u64) -> bool {
    let g = trim(g.to_vec());
    if g.len() < 2 || g[g.len() - 1] != 1 {
        return false;
    }
    let f = g.len() - 1;
    if f == 1 {
        return true;
    }
    let sub_t = |mut x: Poly| -> Poly {
        x.resize(x.len().max(2), 0);
        x[1] = (x[1] + p - 1) % p;
        trim(x)
    };
    if !sub_t(t_pow_p_pow(f, &g, p)).is_empty() {
        return false;
    }
    for r in prime_factors(f as u64) {
        let h = sub_t(t_pow_p_pow(f / r as usize, &g, p));
        let d = poly_gcd(&g, &h, p);
        if d.len() != 1 {
            return false;
        }
    }
    true
}

/// The least monic irreducible of degree f, coefficient vectors compared
/// from t^{f-1} down to t^0.
pub fn default_modulus(p: u64, f: usize) -> Vec<u64> {
    let count = p.pow(f as u32);
    for idx in 0..count {
        let mut g = Vec::with_capacity(f + 1);
        let mut x = idx;
        for _ in 0..f {
            g.push(x % p);
            x /= p;
        }
        g.push(1);
        if is_irreducible(&g, p) {
            return g;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

/// Arithmetic in F_{p^f}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,
    f: usize,
    q: u64,
    modulus: Vec<u64>,
}

impl ResidueField {
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::InvalidSpec(format!("{p} is not an odd prime")));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidSpec("modulus coefficients must lie in [0, p)".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidSpec(format!("{modulus:?} is not monic irreducible over F_{p}")));
        }
        let f = modulus.len() - 1;
        let q = (p as u128).checked_pow(f as u32).filter(|&q| q < (1u128 << 62));
        let q = q.ok_or_else(|| Error::InvalidSpec("p^f too large".into()))? as u64;
        Ok(Self { p, f, q, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> usize {
        self.f
    }
    pub fn order(&self) -> u64 {
        self.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> ResidueElement {
        ResidueElement { coeffs: vec![0; self.f] }
    }
    pub fn one(&self) -> ResidueElement {
        self.from_int(1)
    }
    pub fn from_int(&self, n: i64) -> ResidueElement {
        let mut r = self.zero();
        r.coeffs[0] = n.rem_euclid(self.p as i64) as u64;
        r
    }

    /// Reduce arbitrary integer coordinates.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<ResidueElement> {
        if coeffs.len() != self.f {
            return Err(Error::Dimension(format!("residue literal needs {} coordinates", self.f)));
        }
        Ok(ResidueElement { coeffs: coeffs.iter().map(|&c| c.rem_euclid(self.p as i64) as u64).collect() })
    }

    /// Base-p encoding, coordinate f-1 most significant.
    pub fn index(&self, a: &ResidueElement) -> u64 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }
    pub fn from_index(&self, mut idx: u64) -> ResidueElement {
        let mut r = self.zero();
        for c in r.coeffs.iter_mut() {
            *c = idx % self.p;
            idx /= self.p;
        }
        r
    }
    pub fn elements(&self) -> impl Iterator<Item = ResidueElement> + '_ {
        (0..self.q).map(move |i| self.from_index(i))
    }

    pub fn add(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        ResidueElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + y) % self.p).collect() }
    }
    pub fn sub(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        ResidueElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + self.p - y) % self.p).collect() }
    }
    pub fn neg(&self, a: &ResidueElement) -> ResidueElement {
        self.sub(&self.zero(), a)
    }
    pub fn mul(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        let r = poly_mulmod(&trim(a.coeffs.clone()), &trim(b.coeffs.clone()), &self.modulus, self.p);
        let mut out = self.zero();
        out.coeffs[..r.len()].copy_from_slice(&r);
        out
    }
    pub fn pow(&self, a: &ResidueElement, mut e: u128) -> ResidueElement {
        let mut r = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }
    pub fn inv(&self, a: &ResidueElement) -> Option<ResidueElement> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, (self.q - 2) as u128))
        }
    }
    /// x -> x^p.
    pub fn frobenius(&self, a: &ResidueElement) -> ResidueElement {
        self.pow(a, self.p as u128)
    }
    /// x -> x^{p^k} for any integer k (negative powers via p^{f-1}).
    pub fn frobenius_pow(&self, a: &ResidueElement, k: i64) -> ResidueElement {
        let k = k.rem_euclid(self.f as i64);
        let mut r = a.clone();
        for _ in 0..k {
            r = self.frobenius(&r);
        }
        r
    }

    pub fn is_square(&self, a: &ResidueElement) -> bool {
        a.is_zero() || self.pow(a, ((self.q - 1) / 2) as u128) == self.one()
    }

    /// Tonelli-Shanks square root; the returned root has the smaller index.
    pub fn sqrt(&self, a: &ResidueElement) -> Option<ResidueElement> {
        if a.is_zero() {
            return Some(self.zero());
        }
        if !self.is_square(a) {
            return None;
        }
        let mut q1 = self.q - 1;
        let mut s = 0u32;
        while q1.is_multiple_of(2) {
            q1 /= 2;
            s += 1;
        }
        let z = self.elements().find(|x| !x.is_zero() && !self.is_square(x))?;
        let mut m = s;
        let mut c = self.pow(&z, q1 as u128);
        let mut t = self.pow(a, q1 as u128);
        let mut r = self.pow(a, q1.div_ceil(2) as u128);
        let one = self.one();
        while t != one {
            let mut i = 0;
            let mut tt = t.clone();
            while tt != one {
                tt = self.mul(&tt, &tt);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = self.mul(&b, &b);
            }
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        let other = self.neg(&r);
        Some(if self.index(&other) < self.index(&r) { other } else { r })
    }

    /// The least (by index) generator of the multiplicative group.
    pub fn generator(&self) -> ResidueElement {
        let n = self.q - 1;
        let primes = prime_factors(n);
        self.elements()
            .find(|x| !x.is_zero() && primes.iter().all(|&r| self.pow(x, (n / r) as u128) != self.one()))
            .expect("F_q^x is cyclic")
    }

    pub fn mat_mul(&self, a: &[Vec<ResidueElement>], b: &[Vec<ResidueElement>]) -> Vec<Vec<ResidueElement>> {
        let inner = b.len();
        let cols = b.first().map(|r| r.len()).unwrap_or(0);
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| (0..inner).fold(self.zero(), |acc, k| self.add(&acc, &self.mul(&row[k], &b[k][j]))))
                    .collect()
            })
            .collect()
    }

    /// Inverse of a square matrix, or None when it is singular.
    pub fn mat_inv(&self, a: &[Vec<ResidueElement>]) -> Option<Vec<Vec<ResidueElement>>> {
        let n = a.len();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let e: Vec<ResidueElement> = (0..n).map(|i| if i == j { self.one() } else { self.zero() }).collect();
            let (x, rank) = self.solve_linear(a, &e)?;
            if rank < n {
                return None;
            }
            cols.push(x);
        }
        Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
    }

    /// Solve the (possibly overdetermined) system a x = b by Gauss-Jordan
    /// elimination. Returns the solution with free variables set to zero and
    /// the rank of `a`, or None when the system is inconsistent.
    pub fn solve_linear(&self, a: &[Vec<ResidueElement>], b: &[ResidueElement]) -> Option<(Vec<ResidueElement>, usize)> {
        let rows = a.len();
        let cols = a.first().map(|r| r.len()).unwrap_or(0);
        let mut m: Vec<Vec<ResidueElement>> =
            a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain(std::iter::once(x.clone())).collect()).collect();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..cols {
            let Some(piv) = (prow..rows).find(|&r| !m[r][col].is_zero()) else { continue };
            m.swap(prow, piv);
            let inv = self.inv(&m[prow][col]).expect("nonzero pivot");
            m[prow] = m[prow].iter().map(|x| self.mul(x, &inv)).collect();
            for r in 0..rows {
                if r != prow && !m[r][col].is_zero() {
                    let c = m[r][col].clone();
                    let pr = m[prow].clone();
                    m[r] = m[r].iter().zip(&pr).map(|(x, y)| self.sub(x, &self.mul(&c, y))).collect();
                }
            }
            pivots.push(col);
            prow += 1;
        }
        if m[prow..].iter().any(|r| !r[cols].is_zero()) {
            return None;
        }
        let mut x = vec![self.zero(); cols];
        for (r, &col) in pivots.iter().enumerate() {
            x[col] = m[r][cols].clone();
        }
        Some((x, pivots.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli() {
        assert_eq!(default_modulus(5, 1), vec![0, 1]);
        // t^2 + 1 splits mod 5, t^2 + 2 does not
        assert_eq!(default_modulus(5, 2), vec![2, 0, 1]);
        assert_eq!(default_modulus(7, 2), vec![1, 0, 1]);
    }

    #[test]
    fn rabin_agrees_with_root_count() {
        // A quadratic over F_p is irreducible iff it has no root.
        let p = 7;
        for a in 0..p {
            for b in 0..p {
                let g = vec![b, a, 1];
                let has_root = (0..p).any(|x| (x * x + a * x + b) % p == 0);
                assert_eq!(is_irreducible(&g, p), !has_root, "{g:?}");
            }
        }
    }

    #[test]
    fn field_axioms_small() {
        let k = ResidueField::new(3, default_modulus(3, 2)).unwrap();
        for a in k.elements() {
            if let Some(ai) = k.inv(&a) {
                assert_eq!(k.mul(&a, &ai), k.one());
            }
            assert_eq!(k.pow(&a, 9), a);
        }
        let g = k.generator();
        let mut seen = std::collections::HashSet::new();
        let mut x = k.one();
        for _ in 0..8 {
            seen.insert(x.clone());
            x = k.mul(&x, &g);
        }
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn square_roots() {
        let k = ResidueField::new(5, default_modulus(5, 2)).unwrap();
        for a in k.elements() {
            let sq = k.mul(&a, &a);
            let r = k.sqrt(&sq).unwrap();
            assert_eq!(k.mul(&r, &r), sq);
        }
        let k = ResidueField::new(5, default_modulus(5, 1)).unwrap();
        assert!(k.sqrt(&k.from_int(2)).is_none());
    }

    #[test]
    fn linear_solve() {
        let k = ResidueField::new(7, default_modulus(7, 1)).unwrap();
        let e = |x: i64| k.from_int(x);
        // overdetermined but consistent: x + y = 3, x - y = 1, 2x = 4
        let a = vec![vec![e(1), e(1)], vec![e(1), e(-1)], vec![e(2), e(0)]];
        let (x, rank) = k.solve_linear(&a, &[e(3), e(1), e(4)]).unwrap();
        assert_eq!((x, rank), (vec![e(2), e(1)], 2));
        assert!(k.solve_linear(&a, &[e(3), e(1), e(5)]).is_none());
    }
}
