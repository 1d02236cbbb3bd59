//! Small dense matrices over O_E / pi^nu.

use std::sync::Arc;

use super::element::{LocalField, PadicElement};
use super::frobenius::FieldAut;
use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<PadicElement>>;

pub fn identity(field: &Arc<LocalField>, n: usize, prec: u32) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| PadicElement::from_int(field, (i == j) as i64, prec)).collect())
        .collect()
}

pub fn zeros(field: &Arc<LocalField>, r: usize, c: usize, prec: u32) -> Matrix {
    vec![vec![PadicElement::zero(field, prec); c]; r]
}

pub fn transpose(a: &Matrix) -> Matrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            let mut acc = &a[i][0] * &b[0][j];
            for t in 1..k {
                acc = &acc + &(&a[i][t] * &b[t][j]);
            }
            row.push(acc);
        }
        out.push(row);
    }
    out
}

pub fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

pub fn sub(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

pub fn scale(a: &Matrix, c: &PadicElement) -> Matrix {
    map(a, |x| c * x)
}

pub fn map(a: &Matrix, f: impl Fn(&PadicElement) -> PadicElement) -> Matrix {
    a.iter().map(|r| r.iter().map(&f).collect()).collect()
}

/// Entrywise power a^{(k)} with k an integer exponent.
pub fn entry_pow(a: &Matrix, k: u128) -> Matrix {
    map(a, |x| x.pow(k))
}

/// Entrywise field automorphism.
pub fn apply_aut(a: &Matrix, aut: FieldAut) -> Matrix {
    map(a, |x| aut.apply(x))
}

pub fn truncate(a: &Matrix, prec: u32) -> Matrix {
    map(a, |x| x.truncate(prec))
}

pub fn min_precision(a: &Matrix) -> u32 {
    a.iter().flatten().map(|x| x.precision()).min().unwrap_or(u32::MAX)
}

pub fn is_symmetric(a: &Matrix) -> bool {
    let n = a.len();
    (0..n).all(|i| (0..i).all(|j| a[i][j] == a[j][i]))
}

/// Solve by Gaussian elimination with unit pivots; fails unless the matrix
/// is invertible mod pi.
pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let field = a[0][0].field().clone();
    let prec = min_precision(a);
    let mut m: Matrix = a.iter().map(|r| r.to_vec()).collect();
    let mut inv = identity(&field, n, prec);
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col].is_unit()).ok_or(Error::NotAUnit)?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let d = m[col][col].inv()?;
        m[col] = m[col].iter().map(|x| x * &d).collect();
        inv[col] = inv[col].iter().map(|x| x * &d).collect();
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let c = m[r][col].clone();
                let (mr, ir) = (m[col].clone(), inv[col].clone());
                m[r] = m[r].iter().zip(&mr).map(|(x, y)| x - &(&c * y)).collect();
                inv[r] = inv[r].iter().zip(&ir).map(|(x, y)| x - &(&c * y)).collect();
            }
        }
    }
    Ok(inv)
}

/// Determinant by the Leibniz-free elimination route (unit pivots), falling
/// back to cofactor expansion if no unit pivot exists.
pub fn det(a: &Matrix) -> PadicElement {
    let n = a.len();
    let field = a[0][0].field().clone();
    let prec = min_precision(a);
    let mut m: Matrix = a.to_vec();
    let mut acc = PadicElement::one(&field, prec);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r][col].is_unit()) else {
            return det_cofactor(a);
        };
        if piv != col {
            m.swap(col, piv);
            acc = -&acc;
        }
        acc = &acc * &m[col][col];
        let d = m[col][col].inv().expect("unit pivot");
        for r in col + 1..n {
            let c = &m[r][col] * &d;
            let mr = m[col].clone();
            m[r] = m[r].iter().zip(&mr).map(|(x, y)| x - &(&c * y)).collect();
        }
    }
    acc
}

fn det_cofactor(a: &Matrix) -> PadicElement {
    let n = a.len();
    if n == 1 {
        return a[0][0].clone();
    }
    let mut acc = PadicElement::zero(a[0][0].field(), min_precision(a));
    for j in 0..n {
        let minor: Matrix = a[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = &a[0][j] * &det_cofactor(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}
