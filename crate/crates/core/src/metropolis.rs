//! Metropolis acceptance: the exact real-valued test and the integer-only
//! approximation based on counting leading zeros of a 24-bit random draw.
//!
//! With the base-2 temperature `T̂ = T · ln 2`, the Boltzmann test
//! `exp(-ΔC/T) ≥ rand / (2^24 - 1)` becomes `ΔC < T̂ · clz24(rand)`, which
//! needs neither exponentiation nor division. Cost decreases and a zero draw
//! are accepted unconditionally.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubo::Cost;

/// Width of the per-neuron random draw.
pub const RAND_BITS: u32 = 24;
/// Number of distinct 24-bit draws.
pub const RAND_RANGE: u64 = 1 << RAND_BITS;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of stream `index` from a global seed:
/// `splitmix64(seed + splitmix64((index + 1) · γ))` with γ the 64-bit golden
/// ratio constant and wrapping arithmetic throughout.
pub fn stream_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed.wrapping_add(splitmix64(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))))
}

/// Seedable per-neuron generator emitting 24-bit integers.
///
/// The state advances by the golden-ratio increment and each output is the
/// SplitMix64 finalizer of the new state; `next24` keeps the top 24 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rng24 {
    state: u64,
}

impl Rng24 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Generator for neuron (or stream) `index` under `seed`.
    pub fn for_stream(seed: u64, index: u64) -> Self {
        Self::new(stream_seed(seed, index))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        splitmix64(self.state)
    }

    /// Uniform value in `[0, 2^24 - 1]`.
    #[inline]
    pub fn next24(&mut self) -> u32 {
        (self.next_u64() >> (64 - RAND_BITS)) as u32
    }

    /// Uniform value in `[0, bound)`, `bound > 0`, by widening multiply with
    /// rejection of the biased low zone.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let wide = (self.next_u64() as u128) * (bound as u128);
            if (wide as u64) >= threshold {
                return (wide >> 64) as u64;
            }
        }
    }
}

/// Integer temperature in base-2 units. Zero means greedy descent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct TempHat(pub u64);

impl TempHat {
    pub fn value(self) -> u64 {
        self.0
    }
}

/// `T̂ = round(T · ln 2)`, clamped at zero.
pub fn temp_to_that(temperature: f64) -> TempHat {
    let scaled = (temperature * std::f64::consts::LN_2).round();
    if scaled.is_nan() || scaled <= 0.0 {
        TempHat(0)
    } else {
        TempHat(scaled as u64)
    }
}

/// Exact Metropolis test: accept iff `exp(-ΔC/T) ≥ u`.
pub fn exact_accept(delta: f64, temperature: f64, u: f64) -> Result<bool> {
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::InvalidTemperature(temperature));
    }
    if delta <= 0.0 {
        return Ok(true);
    }
    Ok((-delta / temperature).exp() >= u)
}

/// Leading zeros of `rand` as a 24-bit word; `clz24(0) = 24`.
pub fn clz24(rand: u32) -> Result<u32> {
    if rand >= RAND_RANGE as u32 {
        return Err(Error::RandOutOfRange(rand));
    }
    Ok(clz24_unchecked(rand))
}

#[inline]
fn clz24_unchecked(rand: u32) -> u32 {
    rand.leading_zeros() - (32 - RAND_BITS)
}

/// Integer acceptance test. `rand` must be below `2^24`.
#[inline]
pub fn fixed_accept(delta: Cost, t_hat: TempHat, rand: u32) -> bool {
    debug_assert!((rand as u64) < RAND_RANGE);
    if delta < 0 || rand == 0 {
        return true;
    }
    // Reached only with rand != 0, so clz is at most 23.
    (delta as i128) < (t_hat.0 as i128) * (clz24_unchecked(rand) as i128)
}

/// Exact acceptance probability of [`fixed_accept`] under a uniform 24-bit
/// draw, as `numerator / 2^24`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AcceptProbability {
    pub numerator: u64,
}

impl AcceptProbability {
    pub const DENOMINATOR: u64 = RAND_RANGE;

    pub fn as_f64(self) -> f64 {
        self.numerator as f64 / Self::DENOMINATOR as f64
    }
}

/// Closed form: `2^(23-k)` draws have `clz = k` for `k ≤ 23`, plus the one
/// zero draw that always accepts.
pub fn fixed_accept_probability(delta: Cost, t_hat: TempHat) -> AcceptProbability {
    if delta < 0 {
        return AcceptProbability { numerator: RAND_RANGE };
    }
    let accepted: u64 = (0..RAND_BITS as u64)
        .filter(|&k| (t_hat.0 as i128) * (k as i128) > delta as i128)
        .map(|k| 1u64 << (RAND_BITS as u64 - 1 - k))
        .sum();
    AcceptProbability { numerator: 1 + accepted }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_accept_examples() {
        for t in [0.1, 1.0, 50.0] {
            assert!(exact_accept(-5.0, t, 0.999).unwrap());
        }
        assert!(exact_accept(std::f64::consts::LN_2, 1.0, 0.5).unwrap());
        assert!(!exact_accept(30.0, 3.0, 0.9).unwrap());
        assert_eq!(exact_accept(1.0, 0.0, 0.5), Err(Error::InvalidTemperature(0.0)));
        assert!(exact_accept(1.0, -1.0, 0.5).is_err());
    }

    #[test]
    fn clz_examples() {
        assert_eq!(clz24(0x80_0000).unwrap(), 0);
        assert_eq!(clz24(1).unwrap(), 23);
        assert_eq!(clz24(0).unwrap(), 24);
        assert_eq!(clz24(0xFF_FFFF).unwrap(), 0);
        assert_eq!(clz24(1 << 24), Err(Error::RandOutOfRange(1 << 24)));
    }

    #[test]
    fn fixed_accept_examples() {
        assert!(fixed_accept(-1, TempHat(0), 1 << 23));
        assert!(fixed_accept(100, TempHat(0), 0));
        assert!(fixed_accept(5, TempHat(2), 1));
        assert!(!fixed_accept(5, TempHat(2), 1 << 23));
        // strict inequality: zero delta in greedy mode rejects
        assert!(!fixed_accept(0, TempHat(0), 1));
    }

    #[test]
    fn fixed_accept_handles_extreme_values() {
        assert!(!fixed_accept(Cost::MAX, TempHat(u64::MAX), 1 << 23));
        assert!(fixed_accept(Cost::MAX - 1, TempHat(u64::MAX), 1));
    }

    #[test]
    fn probability_examples() {
        assert_eq!(fixed_accept_probability(0, TempHat(1)).numerator, 1 << 23);
        assert_eq!(fixed_accept_probability(1, TempHat(0)).numerator, 1);
        assert_eq!(fixed_accept_probability(-3, TempHat(0)).numerator, RAND_RANGE);
        // clz ∈ {2..23} plus zero: 1 + (2^22 - 1)
        assert_eq!(fixed_accept_probability(3, TempHat(2)).numerator, 1 << 22);
    }

    #[test]
    fn probability_matches_enumeration() {
        for &(delta, t) in &[(0i64, 1u64), (3, 2), (10, 3), (7, 0)] {
            let count = (0..RAND_RANGE as u32).filter(|&r| fixed_accept(delta, TempHat(t), r)).count();
            assert_eq!(count as u64, fixed_accept_probability(delta, TempHat(t)).numerator, "delta={delta} t={t}");
        }
    }

    #[test]
    fn temp_change_of_variable() {
        assert_eq!(temp_to_that(0.0), TempHat(0));
        assert_eq!(temp_to_that(1.0 / std::f64::consts::LN_2), TempHat(1));
        assert_eq!(temp_to_that(10.0), TempHat(7));
        assert_eq!(temp_to_that(-4.0), TempHat(0));
        assert_eq!(temp_to_that(f64::NAN), TempHat(0));
    }

    #[test]
    fn monotone_in_delta_and_temperature() {
        let mut rng = Rng24::new(11);
        for _ in 0..2000 {
            let rand = rng.next24();
            let t = TempHat(rng.next_below(40));
            let d = rng.next_below(400) as Cost - 50;
            if fixed_accept(d, t, rand) {
                for smaller in [d - 1, d - 17, d / 2 - 1] {
                    if smaller <= d {
                        assert!(fixed_accept(smaller, t, rand));
                    }
                }
            }
            if d >= 0 && fixed_accept(d, t, rand) {
                assert!(fixed_accept(d, TempHat(t.0 + 1), rand));
                assert!(fixed_accept(d, TempHat(t.0 * 3), rand));
            }
        }
    }

    #[test]
    fn approximation_within_factor_four() {
        let mut worst: f64 = 1.0;
        for t in 1..=20u64 {
            for delta in t as Cost..=(16 * t) as Cost {
                let p = fixed_accept_probability(delta, TempHat(t)).as_f64();
                let target = (-(delta as f64) / t as f64).exp2();
                let ratio = (p / target).max(target / p);
                worst = worst.max(ratio);
            }
        }
        assert!(worst <= 4.0, "worst ratio {worst}");
    }

    #[test]
    fn rng_is_deterministic_and_stream_dependent() {
        let mut a = Rng24::for_stream(42, 3);
        let mut b = Rng24::for_stream(42, 3);
        let mut c = Rng24::for_stream(42, 4);
        let xs: Vec<u32> = (0..16).map(|_| a.next24()).collect();
        let ys: Vec<u32> = (0..16).map(|_| b.next24()).collect();
        let zs: Vec<u32> = (0..16).map(|_| c.next24()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
        assert!(xs.iter().all(|&v| (v as u64) < RAND_RANGE));
    }

    #[test]
    fn rng24_bits_are_balanced() {
        let mut rng = Rng24::new(7);
        let draws = 200_000;
        let mut ones = [0u32; 24];
        for _ in 0..draws {
            let v = rng.next24();
            for (b, count) in ones.iter_mut().enumerate() {
                *count += (v >> b) & 1;
            }
        }
        // 5σ band for a fair bit over 2·10^5 draws
        let sigma = (draws as f64 * 0.25).sqrt();
        for &count in &ones {
            assert!((count as f64 - draws as f64 / 2.0).abs() < 5.0 * sigma);
        }
    }

    #[test]
    fn next_below_covers_range() {
        let mut rng = Rng24::new(1);
        let mut seen = [false; 5];
        for _ in 0..200 {
            seen[rng.next_below(5) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
