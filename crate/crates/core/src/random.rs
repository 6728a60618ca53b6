//! Seeded randomness for generic choices.
//!
//! Every random object is drawn from a SplitMix64 stream. A coefficient takes
//! `v = next_u64() % 20` and maps it to `v - 10` when `v < 10` and to `v - 9`
//! otherwise, so it is uniform on `{-10, ..., 10} \ {0}` up to a negligible
//! modulo bias and reproducible bit for bit.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::exact::Rational;

pub type Stream = SplitMix64;

pub fn stream(seed: u64) -> Stream {
    SplitMix64::seed_from_u64(seed)
}

/// Independent stream for a labelled sub-task of a seeded computation.
pub fn substream(seed: u64, label: u64) -> Stream {
    let mut base = stream(seed ^ label.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    stream(base.next_u64())
}

pub fn coefficient(rng: &mut Stream) -> i64 {
    let v = (rng.next_u64() % 20) as i64;
    if v < 10 {
        v - 10
    } else {
        v - 9
    }
}

pub fn coefficients(rng: &mut Stream, n: usize) -> Vec<Rational> {
    (0..n).map(|_| Rational::from_int(coefficient(rng))).collect()
}

/// Point of the open simplex with rational coordinates of denominator at most `den * n`.
pub fn simplex_point(rng: &mut Stream, n: usize, den: u64) -> Vec<Rational> {
    let w: Vec<i64> = (0..n).map(|_| 1 + (rng.next_u64() % den) as i64).collect();
    let total: i64 = w.iter().sum();
    w.iter().map(|&x| Rational::new(x, total)).collect()
}
