//! Deterministic pairwise (tree) summation.
//!
//! Values are grouped into fixed blocks of `BLOCK` consecutive terms, each block is
//! summed left to right, and block sums are merged like a binary counter. The
//! result depends only on the sequence of inputs, never on how the caller chunks
//! them, so sums are bit-stable across runs and thread counts as long as the
//! caller merges disjoint ranges in order.

use num_complex::Complex64;
use std::ops::Add;

const BLOCK: usize = 32;

#[derive(Debug, Clone)]
pub struct PairwiseSum<T> {
    stack: Vec<(u32, T)>,
    block: T,
    block_len: usize,
    zero: T,
}

impl<T: Copy + Add<Output = T>> PairwiseSum<T> {
    pub fn with_zero(zero: T) -> Self {
        Self {
            stack: Vec::with_capacity(48),
            block: zero,
            block_len: 0,
            zero,
        }
    }

    #[inline]
    pub fn add(&mut self, value: T) {
        self.block = self.block + value;
        self.block_len += 1;
        if self.block_len == BLOCK {
            self.push_node(self.block);
            self.block = self.zero;
            self.block_len = 0;
        }
    }

    fn push_node(&mut self, value: T) {
        let mut level = 0u32;
        let mut value = value;
        while let Some(&(top_level, top)) = self.stack.last() {
            if top_level != level {
                break;
            }
            self.stack.pop();
            value = top + value;
            level += 1;
        }
        self.stack.push((level, value));
    }

    pub fn total(&self) -> T {
        let mut acc = self.block;
        let mut first = self.block_len == 0;
        for &(_, node) in self.stack.iter().rev() {
            if first {
                acc = node;
                first = false;
            } else {
                acc = node + acc;
            }
        }
        if first {
            self.zero
        } else {
            acc
        }
    }
}

impl PairwiseSum<f64> {
    pub fn new() -> Self {
        Self::with_zero(0.0)
    }
}

impl Default for PairwiseSum<f64> {
    fn default() -> Self {
        Self::new()
    }
}

impl PairwiseSum<Complex64> {
    pub fn complex() -> Self {
        Self::with_zero(Complex64::new(0.0, 0.0))
    }
}

pub fn pairwise_sum<T, I>(zero: T, values: I) -> T
where
    T: Copy + Add<Output = T>,
    I: IntoIterator<Item = T>,
{
    let mut acc = PairwiseSum::with_zero(zero);
    for v in values {
        acc.add(v);
    }
    acc.total()
}

pub fn sum_f64<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    pairwise_sum(0.0, values)
}

pub fn sum_complex<I: IntoIterator<Item = Complex64>>(values: I) -> Complex64 {
    pairwise_sum(Complex64::new(0.0, 0.0), values)
}
