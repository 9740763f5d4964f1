//! Seeded random Sperner families of type `(k,k+1)`, for cross-checking the
//! maximality tests.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::TypedFamily;
use crate::error::Result;
use crate::family::Family;
use crate::setcore::{GroundSize, LayerIter, Subset, SubsetIndex};

/// Default seed used by the CLI and the acceptance suite.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// Reproducible generator of random type-`(k,k+1)` Sperner families.
pub struct SpernerSampler {
    rng: ChaCha8Rng,
}

impl SpernerSampler {
    pub fn new(seed: u64) -> Self {
        SpernerSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Random Sperner family over `n` elements with type parameter `k`.
    ///
    /// Candidates from both layers are offered in random order and kept when
    /// they stay incomparable with everything kept so far. About half of the
    /// samples run to saturation, which yields a maximal family; the rest stop
    /// after a random number of offers.
    pub fn sample(&mut self, n: usize, k: usize) -> Result<TypedFamily> {
        let ground = GroundSize::new(n)?;
        let mut candidates: Vec<Subset> = LayerIter::new(n, k)
            .chain(LayerIter::new(n, k + 1))
            .collect();
        candidates.shuffle(&mut self.rng);
        let offers = if self.rng.gen_bool(0.5) {
            candidates.len()
        } else {
            self.rng.gen_range(0..=candidates.len())
        };

        let mut index = SubsetIndex::new(ground, []);
        let mut kept = Vec::new();
        for &c in &candidates[..offers] {
            let clash = if c.len() == k {
                c.complement_elements(ground)
                    .any(|j| index.contains(c.with(j)))
            } else {
                c.elements().any(|j| index.contains(c.without(j)))
            };
            if !clash {
                index.insert(c);
                kept.push(c);
            }
        }
        TypedFamily::new(Family::new(ground, kept)?, k)
    }

    /// Samples `n` uniformly from `n_range` and `k` uniformly from `1..=n-2`.
    pub fn sample_in(&mut self, n_range: std::ops::RangeInclusive<usize>) -> Result<TypedFamily> {
        let n = self.rng.gen_range(n_range);
        let k = self.rng.gen_range(1..=n.saturating_sub(2).max(1));
        self.sample(n, k)
    }
}
