//! Reproducible pseudo-random pure finite sets for the property suites.
//!
//! Each set draws a target depth uniformly from `0..=max_depth`, then gets
//! one element of depth one less plus up to `max_width - 1` elements of
//! random lower depth. A quarter of the time a set generated earlier at the
//! requested depth is reused, so the corpus shares constituents the way real
//! constructions do.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::set::SetHandle;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusConfig {
    pub seed: u64,
    pub max_depth: u32,
    pub max_width: usize,
}

impl CorpusConfig {
    pub fn new(seed: u64, max_depth: u32) -> Self {
        CorpusConfig {
            seed,
            max_depth,
            max_width: 4,
        }
    }
}

pub struct Corpus {
    rng: ChaCha8Rng,
    config: CorpusConfig,
    pool: Vec<Vec<SetHandle>>,
}

impl Corpus {
    pub fn new(config: CorpusConfig) -> Self {
        Corpus {
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config,
            pool: vec![Vec::new(); config.max_depth as usize + 1],
        }
    }

    /// A set of exactly depth `d`.
    pub fn set_of_depth(&mut self, d: u32) -> SetHandle {
        if d == 0 {
            return SetHandle::empty();
        }
        let pool = &self.pool[d as usize];
        if !pool.is_empty() && self.rng.gen_ratio(1, 4) {
            return pool[self.rng.gen_range(0..pool.len())];
        }
        let width = self.rng.gen_range(1..=self.config.max_width.max(1));
        let mut elems = vec![self.set_of_depth(d - 1)];
        for _ in 1..width {
            let k = self.rng.gen_range(0..d);
            elems.push(self.set_of_depth(k));
        }
        let s = SetHandle::from_elements(elems);
        self.pool[d as usize].push(s);
        s
    }
}

impl Iterator for Corpus {
    type Item = SetHandle;

    fn next(&mut self) -> Option<SetHandle> {
        let d = self.rng.gen_range(0..=self.config.max_depth);
        Some(self.set_of_depth(d))
    }
}

/// `count` sets from the given seed.
pub fn corpus(seed: u64, count: usize, max_depth: u32) -> Vec<SetHandle> {
    Corpus::new(CorpusConfig::new(seed, max_depth))
        .take(count)
        .collect()
}
