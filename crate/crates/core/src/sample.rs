//! Seeded sampling of regular parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{q, Rational};
use crate::rops::ParamPair;
use crate::sl21::Weight;
use crate::{Error, Result};

/// Resampling budget per requested sample.
pub const MAX_RESAMPLES: u32 = 1000;

/// A deterministic stream of small rationals `p/q` with `p ∈ [−20, 20]`
/// and `q ∈ [1, 8]`.
pub struct RationalSampler {
    rng: ChaCha8Rng,
}

impl RationalSampler {
    pub fn new(seed: u64) -> Self {
        RationalSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rational(&mut self) -> Rational {
        let num = self.rng.gen_range(-20..=20);
        let den = self.rng.gen_range(1..=8);
        q(num, den)
    }

    pub fn array<const N: usize>(&mut self) -> [Rational; N] {
        std::array::from_fn(|_| self.rational())
    }

    pub fn weight(&mut self) -> Weight {
        let [ell, b] = self.array();
        Weight::new(ell, b)
    }

    /// Draws until `accept` holds, at most [`MAX_RESAMPLES`] times.
    pub fn draw_until<T>(&mut self, mut draw: impl FnMut(&mut Self) -> T, accept: impl Fn(&T) -> bool) -> Result<T> {
        for _ in 0..MAX_RESAMPLES {
            let x = draw(self);
            if accept(&x) {
                return Ok(x);
            }
        }
        Err(Error::GuardExhausted(MAX_RESAMPLES))
    }

    /// `count` values from `draw`, each resampled until `accept` holds.
    pub fn many<T>(
        &mut self,
        count: usize,
        mut draw: impl FnMut(&mut Self) -> T,
        accept: impl Fn(&T) -> bool,
    ) -> Result<Vec<T>> {
        (0..count).map(|_| self.draw_until(&mut draw, &accept)).collect()
    }
}

/// Pairs passing the regularity guard of `Ř` at degree `max_degree`.
pub fn sample_params(seed: u64, samples: usize, max_degree: u32) -> Result<Vec<ParamPair>> {
    sample_params_with(seed, samples, |p| p.check_regular_rhat(max_degree).is_ok())
}

pub fn sample_params_with(seed: u64, samples: usize, accept: impl Fn(&ParamPair) -> bool) -> Result<Vec<ParamPair>> {
    RationalSampler::new(seed).many(samples, |s| ParamPair::from_values(&s.array()), accept)
}

/// Weights with `2ℓ` off the non-positive integers up to `k`.
pub fn sample_weights(seed: u64, samples: usize, k: u32) -> Result<Vec<Weight>> {
    RationalSampler::new(seed).many(samples, |s| s.weight(), |w| crate::sl21::is_generic_for(w, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn deterministic_and_guarded() {
        let a = sample_params(7, 3, 3).unwrap();
        assert_eq!(a, sample_params(7, 3, 3).unwrap());
        assert_ne!(a, sample_params(8, 3, 3).unwrap());
        for p in &a {
            assert_ne!(p.u.u2, p.u.u3);
            assert!(p.check_regular_rhat(3).is_ok());
        }
        assert!(sample_params(1, 0, 3).unwrap().is_empty());
    }

    #[test]
    fn ranges() {
        let mut s = RationalSampler::new(3);
        for _ in 0..200 {
            let r = s.rational();
            assert!(r.numer().magnitude() <= &20u32.into());
            assert!(r.denom() <= &8.into() && !r.denom().is_zero());
        }
    }

    #[test]
    fn exhaustion_is_reported() {
        let r = sample_params_with(1, 1, |_| false);
        assert_eq!(r, Err(Error::GuardExhausted(MAX_RESAMPLES)));
    }
}
