//! Truncated elements of O_E stored as polynomials in pi over Z[t]/(p^m, g).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::residue::{ResidueElement, ResidueField};
use super::FieldSpec;
use crate::error::{Error, Result};

/// Shared arithmetic context for O_E / pi^nu.
pub struct LocalField {
    spec: FieldSpec,
    fq: ResidueField,
    m: u32,
    pm: u64,
    p_pows: Vec<u64>,
    /// frob_pows[k][i] = phi^k(t^i) in O_F.
    frob_pows: Vec<Vec<Vec<u64>>>,
    /// zeta_pows[k] = zeta_e^k in O_F, when e | q - 1.
    zeta_pows: Option<Vec<Vec<u64>>>,
}

impl fmt::Debug for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalField(p={}, f={}, e={}, nu={})", self.spec.p, self.spec.f, self.spec.e, self.spec.nu)
    }
}

fn mulm(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl LocalField {
    pub fn new(spec: FieldSpec) -> Result<Arc<Self>> {
        spec.validate()?;
        let fq = ResidueField::new(spec.p, spec.residue_modulus.clone())?;
        let m = spec.nu.div_ceil(spec.e as u32);
        let pm = (spec.p as u128)
            .checked_pow(m)
            .filter(|&x| x < (1u128 << 62))
            .ok_or_else(|| Error::InvalidSpec("p^ceil(nu/e) must stay below 2^62".into()))? as u64;
        let p_pows = (0..=m).map(|k| spec.p.pow(k)).collect();
        let mut field = LocalField { spec, fq, m, pm, p_pows, frob_pows: Vec::new(), zeta_pows: None };
        field.frob_pows = field.build_frobenius();
        field.zeta_pows = field.build_zeta();
        Ok(Arc::new(field))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }
    pub fn residue_field(&self) -> &ResidueField {
        &self.fq
    }
    pub fn p(&self) -> u64 {
        self.spec.p
    }
    pub fn f(&self) -> usize {
        self.spec.f
    }
    pub fn e(&self) -> usize {
        self.spec.e
    }
    pub fn nu(&self) -> u32 {
        self.spec.nu
    }
    pub fn q(&self) -> u64 {
        self.fq.order()
    }
    pub fn has_galois(&self) -> bool {
        self.zeta_pows.is_some()
    }

    // ---- O_F = Z[t]/(p^m, g) helpers --------------------------------------

    fn of_zero(&self) -> Vec<u64> {
        vec![0; self.spec.f]
    }
    fn of_one(&self) -> Vec<u64> {
        let mut v = self.of_zero();
        v[0] = 1;
        v
    }
    fn of_add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.pm).collect()
    }
    fn of_sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.pm - y) % self.pm).collect()
    }
    fn of_scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        a.iter().map(|&x| mulm(x, k, self.pm)).collect()
    }
    pub(crate) fn of_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.spec.f;
        let pm = self.pm;
        if f == 1 {
            return vec![mulm(a[0], b[0], pm)];
        }
        let mut acc = vec![0u64; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] = (acc[i + j] + mulm(x, y, pm)) % pm;
            }
        }
        let g = &self.spec.residue_modulus;
        for d in (f..2 * f - 1).rev() {
            let x = acc[d];
            if x == 0 {
                continue;
            }
            acc[d] = 0;
            for i in 0..f {
                let k = d - f + i;
                acc[k] = (acc[k] + pm - mulm(x, g[i], pm)) % pm;
            }
        }
        acc.truncate(f);
        acc
    }
    fn of_pow(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut r = self.of_one();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.of_mul(&r, &b);
            }
            b = self.of_mul(&b, &b);
            e >>= 1;
        }
        r
    }
    fn of_residue(&self, a: &[u64]) -> ResidueElement {
        ResidueElement { coeffs: a.iter().map(|x| x % self.spec.p).collect() }
    }
    fn of_inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        let r = self.fq.inv(&self.of_residue(a))?;
        let mut x = r.coeffs.clone();
        let two = self.of_scale(&self.of_one(), 2);
        for _ in 0..64 {
            let next = self.of_mul(&x, &self.of_sub(&two, &self.of_mul(a, &x)));
            if next == x {
                break;
            }
            x = next;
        }
        Some(x)
    }
    /// phi^k on O_F.
    pub(crate) fn of_frob(&self, a: &[u64], k: usize) -> Vec<u64> {
        let table = &self.frob_pows[k % self.spec.f];
        let mut out = self.of_zero();
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            out = self.of_add(&out, &self.of_scale(&table[i], ai));
        }
        out
    }
    fn of_teichmuller(&self, r: &ResidueElement) -> Vec<u64> {
        let mut x: Vec<u64> = r.coeffs.clone();
        for _ in 0..self.m {
            x = self.of_pow(&x, self.q() as u128);
        }
        x
    }

    fn build_frobenius(&self) -> Vec<Vec<Vec<u64>>> {
        let f = self.spec.f;
        let unit = |i: usize| {
            let mut v = self.of_zero();
            v[i] = 1;
            v
        };
        let t_pows: Vec<Vec<u64>> = (0..f).map(unit).collect();
        if f == 1 {
            return vec![t_pows];
        }
        // tau: the root of g congruent to t^p, by Newton iteration
        let g = &self.spec.residue_modulus;
        let eval = |x: &[u64], poly: &[u64]| {
            let mut acc = self.of_zero();
            for &c in poly.iter().rev() {
                acc = self.of_mul(&acc, x);
                acc[0] = (acc[0] + c) % self.pm;
            }
            acc
        };
        let dg: Vec<u64> = (1..g.len()).map(|i| mulm(g[i], i as u64, self.pm)).collect();
        let mut tau = self.of_pow(&unit(1), self.spec.p as u128);
        for _ in 0..64 {
            let inv = self.of_inv(&eval(&tau, &dg)).expect("g is separable mod p");
            let next = self.of_sub(&tau, &self.of_mul(&eval(&tau, g), &inv));
            if next == tau {
                break;
            }
            tau = next;
        }
        let tau_pows: Vec<Vec<u64>> = (0..f).map(|i| self.of_pow(&tau, i as u128)).collect();
        let apply = |a: &[u64]| {
            let mut out = self.of_zero();
            for (i, &ai) in a.iter().enumerate() {
                out = self.of_add(&out, &self.of_scale(&tau_pows[i], ai));
            }
            out
        };
        let mut table = vec![t_pows];
        for k in 1..f {
            let prev = &table[k - 1];
            let next = prev.iter().map(|v| apply(v)).collect();
            table.push(next);
        }
        table
    }

    fn build_zeta(&self) -> Option<Vec<Vec<u64>>> {
        let e = self.spec.e as u64;
        let q = self.q();
        if !(q - 1).is_multiple_of(e) {
            return None;
        }
        let z = self.fq.pow(&self.fq.generator(), ((q - 1) / e) as u128);
        let zeta = self.of_teichmuller(&z);
        Some((0..self.spec.e).map(|k| self.of_pow(&zeta, k as u128)).collect())
    }

    pub(crate) fn zeta_pow(&self, k: usize) -> Option<&[u64]> {
        self.zeta_pows.as_ref().map(|z| z[k % self.spec.e].as_slice())
    }

    /// The residue-field image of zeta_e, if it exists.
    pub fn zeta_residue(&self) -> Option<ResidueElement> {
        self.zeta_pow(1).map(|z| self.of_residue(z))
    }
}

/// An element of O_E known modulo pi^prec.
#[derive(Clone)]
pub struct PadicElement {
    field: Arc<LocalField>,
    /// coefficient of pi^k in O_F, stored at c[k*f .. (k+1)*f]
    c: Vec<u64>,
    prec: u32,
}

impl PartialEq for PadicElement {
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec && self.c == other.c
    }
}
impl Eq for PadicElement {}

impl fmt::Debug for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fq = self.field.residue_field();
        let d: Vec<u64> = self.digits().iter().map(|x| fq.index(x)).collect();
        write!(f, "Padic{d:?}")
    }
}

impl PadicElement {
    fn raw(field: &Arc<LocalField>, c: Vec<u64>, prec: u32) -> Self {
        let mut x = PadicElement { field: field.clone(), c, prec: prec.min(field.nu()) };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        let (e, f) = (self.field.e(), self.field.f());
        for k in 0..e {
            let exp = if self.prec as usize > k { (self.prec as usize - k).div_ceil(e) } else { 0 };
            let md = self.field.p_pows[exp];
            for x in &mut self.c[k * f..(k + 1) * f] {
                *x %= md;
            }
        }
    }

    fn slot(&self, k: usize) -> &[u64] {
        let f = self.field.f();
        &self.c[k * f..(k + 1) * f]
    }

    pub fn field(&self) -> &Arc<LocalField> {
        &self.field
    }
    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn zero(field: &Arc<LocalField>, prec: u32) -> Self {
        Self::raw(field, vec![0; field.e() * field.f()], prec)
    }
    pub fn one(field: &Arc<LocalField>, prec: u32) -> Self {
        Self::from_int(field, 1, prec)
    }
    pub fn from_int(field: &Arc<LocalField>, n: i64, prec: u32) -> Self {
        let mut c = vec![0; field.e() * field.f()];
        c[0] = n.rem_euclid(field.pm as i64) as u64;
        Self::raw(field, c, prec)
    }
    /// pi^k.
    pub fn pi_pow(field: &Arc<LocalField>, k: u32, prec: u32) -> Self {
        let e = field.e();
        let (q, r) = (k as usize / e, k as usize % e);
        let mut c = vec![0; e * field.f()];
        if (q as u32) <= field.m {
            c[r * field.f()] = field.p_pows[q];
        }
        Self::raw(field, c, prec)
    }
    pub fn pi(field: &Arc<LocalField>, prec: u32) -> Self {
        Self::pi_pow(field, 1, prec)
    }
    /// Element of O_F with the given coordinates (integers, any sign).
    pub fn from_base_coeffs(field: &Arc<LocalField>, coeffs: &[i64], prec: u32) -> Self {
        let mut c = vec![0; field.e() * field.f()];
        for (i, &x) in coeffs.iter().enumerate().take(field.f()) {
            c[i] = x.rem_euclid(field.pm as i64) as u64;
        }
        Self::raw(field, c, prec)
    }
    /// Build from per-slot O_F coefficient vectors (slot k multiplies pi^k).
    pub fn from_slots(field: &Arc<LocalField>, slots: &[Vec<i64>], prec: u32) -> Self {
        let f = field.f();
        let mut c = vec![0; field.e() * f];
        for (k, s) in slots.iter().enumerate().take(field.e()) {
            for (i, &x) in s.iter().enumerate().take(f) {
                c[k * f + i] = x.rem_euclid(field.pm as i64) as u64;
            }
        }
        Self::raw(field, c, prec)
    }

    /// The Teichmuller lift [r].
    pub fn teichmuller(field: &Arc<LocalField>, r: &ResidueElement, prec: u32) -> Self {
        let mut c = vec![0; field.e() * field.f()];
        c[..field.f()].copy_from_slice(&field.of_teichmuller(r));
        Self::raw(field, c, prec)
    }

    /// Sum of [d_i] pi^i, at precision equal to the number of digits.
    pub fn from_digits(field: &Arc<LocalField>, digits: &[ResidueElement]) -> Self {
        let prec = digits.len() as u32;
        let mut acc = Self::zero(field, prec);
        for (i, d) in digits.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            acc = &acc + &(&Self::teichmuller(field, d, prec) * &Self::pi_pow(field, i as u32, prec));
        }
        acc
    }

    /// Teichmuller pi-adic digits; the vector has length `precision()`.
    pub fn digits(&self) -> Vec<ResidueElement> {
        let mut out = Vec::with_capacity(self.prec as usize);
        let mut x = self.clone();
        for _ in 0..self.prec {
            let d = x.residue();
            out.push(d.clone());
            if x.prec == 1 {
                break;
            }
            let t = Self::teichmuller(&self.field, &d, x.prec);
            x = (&x - &t).div_pi().expect("digit removal leaves a multiple of pi");
        }
        out
    }

    /// Image in O_E / pi = F_q.
    pub fn residue(&self) -> ResidueElement {
        if self.prec == 0 {
            return self.field.fq.zero();
        }
        self.field.of_residue(self.slot(0))
    }

    /// Same element at lower precision.
    pub fn truncate(&self, prec: u32) -> Self {
        Self::raw(&self.field, self.c.clone(), prec.min(self.prec))
    }
    /// Reinterpret at a higher precision (the unknown digits are taken to be 0).
    pub fn extend(&self, prec: u32) -> Self {
        Self::raw(&self.field, self.c.clone(), prec)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
    pub fn is_unit(&self) -> bool {
        self.prec > 0 && !self.residue().is_zero()
    }

    /// pi-adic valuation, or the precision if the element is zero.
    pub fn valuation(&self) -> u32 {
        let (e, p) = (self.field.e() as u32, self.field.p());
        let mut v = self.prec;
        for k in 0..self.field.e() {
            for &x in self.slot(k) {
                if x != 0 {
                    let mut vp = 0;
                    let mut y = x;
                    while y % p == 0 {
                        y /= p;
                        vp += 1;
                    }
                    v = v.min(vp * e + k as u32);
                }
            }
        }
        v
    }

    /// Whether the element lies in O_F (no pi-slots above 0).
    pub fn in_base_field(&self) -> bool {
        (1..self.field.e()).all(|k| self.slot(k).iter().all(|&x| x == 0))
    }

    pub fn pow(&self, mut e: u128) -> Self {
        let mut r = Self::one(&self.field, self.prec);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        r
    }

    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let r = self.field.fq.inv(&self.residue()).ok_or(Error::NotAUnit)?;
        let mut x = Self::from_base_coeffs(&self.field, &r.coeffs.iter().map(|&v| v as i64).collect::<Vec<_>>(), self.prec);
        let two = Self::from_int(&self.field, 2, self.prec);
        for _ in 0..64 {
            let next = &x * &(&two - &(self * &x));
            if next == x {
                break;
            }
            x = next;
        }
        Ok(x)
    }

    /// Exact division by pi; precision drops by one.
    pub fn div_pi(&self) -> Result<Self> {
        if self.prec == 0 {
            return Err(Error::InsufficientPrecision { needed: 1, have: 0 });
        }
        let (e, f, p) = (self.field.e(), self.field.f(), self.field.p());
        if self.slot(0).iter().any(|&x| x % p != 0) {
            return Err(Error::DivisionNotExact);
        }
        let mut c = vec![0; e * f];
        c[..(e - 1) * f].copy_from_slice(&self.c[f..]);
        for i in 0..f {
            c[(e - 1) * f + i] = self.c[i] / p;
        }
        Ok(Self::raw(&self.field, c, self.prec - 1))
    }

    /// Multiplication by pi; precision grows by one (capped at nu).
    pub fn mul_pi(&self) -> Self {
        let (e, f) = (self.field.e(), self.field.f());
        let mut c = vec![0; e * f];
        c[f..].copy_from_slice(&self.c[..(e - 1) * f]);
        let top = self.field.of_scale(self.slot(e - 1), self.field.p());
        c[..f].copy_from_slice(&top);
        Self::raw(&self.field, c, self.prec + 1)
    }

    pub fn half(field: &Arc<LocalField>, prec: u32) -> Self {
        Self::from_int(field, 2, prec).inv().expect("p is odd")
    }

    /// Apply phi^k to every O_F-coefficient and multiply slot j by the given
    /// O_F unit; the raw form of every field automorphism.
    pub(crate) fn map_slots(&self, frob: usize, twist: impl Fn(usize) -> Vec<u64>) -> Self {
        let f = self.field.f();
        let mut c = vec![0; self.c.len()];
        for k in 0..self.field.e() {
            let v = self.field.of_frob(self.slot(k), frob);
            let v = if k == 0 { v } else { self.field.of_mul(&v, &twist(k)) };
            c[k * f..(k + 1) * f].copy_from_slice(&v);
        }
        Self::raw(&self.field, c, self.prec)
    }
}

impl<'a> Add<&'a PadicElement> for &'a PadicElement {
    type Output = PadicElement;
    fn add(self, rhs: &PadicElement) -> PadicElement {
        let c = self.field.of_add(&self.c, &rhs.c);
        PadicElement::raw(&self.field, c, self.prec.min(rhs.prec))
    }
}
impl<'a> Sub<&'a PadicElement> for &'a PadicElement {
    type Output = PadicElement;
    fn sub(self, rhs: &PadicElement) -> PadicElement {
        let c = self.field.of_sub(&self.c, &rhs.c);
        PadicElement::raw(&self.field, c, self.prec.min(rhs.prec))
    }
}
impl Neg for &PadicElement {
    type Output = PadicElement;
    fn neg(self) -> PadicElement {
        let c = self.field.of_sub(&vec![0; self.c.len()], &self.c);
        PadicElement::raw(&self.field, c, self.prec)
    }
}
impl<'a> Mul<&'a PadicElement> for &'a PadicElement {
    type Output = PadicElement;
    fn mul(self, rhs: &PadicElement) -> PadicElement {
        let fld = &self.field;
        let (e, f, p) = (fld.e(), fld.f(), fld.p());
        let prec = self.prec.min(rhs.prec);
        let mut acc = vec![0u64; e * f];
        for k in 0..e {
            let a = self.slot(k);
            if a.iter().all(|&x| x == 0) {
                continue;
            }
            for l in 0..e {
                let b = rhs.slot(l);
                if b.iter().all(|&x| x == 0) {
                    continue;
                }
                let mut prod = fld.of_mul(a, b);
                let mut idx = k + l;
                if idx >= e {
                    idx -= e;
                    prod = fld.of_scale(&prod, p);
                }
                let dst = &mut acc[idx * f..(idx + 1) * f];
                for (d, x) in dst.iter_mut().zip(prod) {
                    *d = (*d + x) % fld.pm;
                }
            }
        }
        PadicElement::raw(fld, acc, prec)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<PadicElement> for PadicElement {
            type Output = PadicElement;
            fn $m(self, rhs: PadicElement) -> PadicElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a PadicElement> for PadicElement {
            type Output = PadicElement;
            fn $m(self, rhs: &PadicElement) -> PadicElement {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<PadicElement> for &'a PadicElement {
            type Output = PadicElement;
            fn $m(self, rhs: PadicElement) -> PadicElement {
                self.$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for PadicElement {
    type Output = PadicElement;
    fn neg(self) -> PadicElement {
        -&self
    }
}
