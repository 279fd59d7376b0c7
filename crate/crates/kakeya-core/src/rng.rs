//! Deterministic random numbers.
//!
//! All randomness in the toolkit flows from a single 64-bit seed through
//! SplitMix64. Independent streams are derived with [`SplitMix64::split`], so
//! per-trial work can run in any order (or concurrently) and still reproduce
//! bit-identical results.

use crate::math;

/// SplitMix64 generator (Steele, Lea, Flood 2014). Small, fast, and fully
/// portable; plenty for experiment-grade sampling.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Derives an independent stream for sub-task `stream`. The derivation is
    /// a pure function of (seed, stream), not of how many values the parent
    /// has produced.
    pub fn split(seed: u64, stream: u64) -> Self {
        let mut base = SplitMix64::new(seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        // Burn one output to decorrelate neighbouring stream ids.
        let s = base.next_u64();
        SplitMix64::new(s)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`, 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: u64) -> u64 {
        // Modulo bias is irrelevant at experiment scales (n << 2^64).
        self.next_u64() % n
    }

    /// Standard normal via Box-Muller.
    pub fn gaussian(&mut self) -> f64 {
        let mut u = self.next_f64();
        if u == 0.0 {
            u = f64::MIN_POSITIVE;
        }
        let v = self.next_f64();
        math::sqrt(-2.0 * math::ln(u)) * math::cos(2.0 * core::f64::consts::PI * v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: std::vec::Vec<u64> = {
            let mut r = SplitMix64::split(7, 1);
            (0..8).map(|_| r.next_u64()).collect()
        };
        let b: std::vec::Vec<u64> = {
            let mut r = SplitMix64::split(7, 1);
            (0..8).map(|_| r.next_u64()).collect()
        };
        let c: std::vec::Vec<u64> = {
            let mut r = SplitMix64::split(7, 2);
            (0..8).map(|_| r.next_u64()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn next_f64_in_unit_interval() {
        let mut r = SplitMix64::new(42);
        for _ in 0..1000 {
            let x = r.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }
}
