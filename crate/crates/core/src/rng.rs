//! Reproducible random streams.
//!
//! Every random quantity is drawn from ChaCha8 (`rand_chacha` 0.3) seeded with
//! [`SeedableRng::seed_from_u64`]. Independent sub-streams share the seed and
//! differ only in the ChaCha stream id, so the draws for one replicate never
//! depend on how many values another replicate consumed.
//!
//! Stream ids:
//! - `0`: problem data (spectrum, minimizer)
//! - `1 + r`: starting point for replicate `r`

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PROBLEM_STREAM: u64 = 0;

pub fn stream(seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

pub fn replicate_stream(seed: u64, replicate: u64) -> ChaCha8Rng {
    stream(seed, replicate + 1)
}

/// Uniform draw on the open interval `(lo, hi)`; endpoints are rejected.
pub fn uniform_open<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    loop {
        let u: f64 = rng.gen();
        let v = lo + (hi - lo) * u;
        if v > lo && v < hi {
            return v;
        }
    }
}

/// Uniform draw on `[lo, hi]` (the upper endpoint has probability zero).
pub fn uniform_closed<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

/// Random point with components uniform in `[-10, 10]`.
pub fn box_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| uniform_closed(rng, -10.0, 10.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: Vec<f64> = (0..4).map(|_| stream(7, 1).gen()).collect();
        let mut s = stream(7, 1);
        let b: Vec<f64> = (0..4).map(|_| s.gen()).collect();
        assert_eq!(a[0], b[0]);
        let mut t = stream(7, 2);
        assert_ne!(b[0], t.gen::<f64>());
    }

    #[test]
    fn open_interval_excludes_endpoints() {
        let mut r = stream(1, 0);
        for _ in 0..10_000 {
            let v = uniform_open(&mut r, 0.8, 1.0);
            assert!(v > 0.8 && v < 1.0);
        }
    }
}
