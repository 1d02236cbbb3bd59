//! Seeded splitmix64 stream and the element and matrix draws built on it.

use std::sync::Arc;

use crate::local_field::{matrix, LocalField, Matrix, PadicElement, ResidueElement};

/// The splitmix64 generator. Every random draw in the crate goes through it,
/// so a seed pins the whole digit stream.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in 0..bound (bound > 0), by rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    pub fn residue(&mut self, field: &LocalField) -> ResidueElement {
        let fq = field.residue_field();
        fq.from_index(self.below(fq.order()))
    }

    pub fn nonzero_residue(&mut self, field: &LocalField) -> ResidueElement {
        let fq = field.residue_field();
        fq.from_index(1 + self.below(fq.order() - 1))
    }

    /// Digits drawn uniformly; the first `digits` pi-adic digits are random
    /// and the rest are zero.
    pub fn element(&mut self, field: &Arc<LocalField>, digits: u32, prec: u32) -> PadicElement {
        let ds: Vec<ResidueElement> = (0..digits.min(prec)).map(|_| self.residue(field)).collect();
        PadicElement::from_digits(field, &ds).extend(prec)
    }

    /// A matrix in GL_N(O_E) with random entries at full precision.
    pub fn invertible_matrix(&mut self, field: &Arc<LocalField>, n: usize, prec: u32) -> Matrix {
        loop {
            let m: Matrix = (0..n).map(|_| (0..n).map(|_| self.element(field, prec, prec)).collect()).collect();
            if matrix::det(&m).is_unit() {
                return m;
            }
        }
    }

    /// A uniformly random permutation of 0..n.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.below(i as u64 + 1) as usize;
            v.swap(i, j);
        }
        v
    }
}
