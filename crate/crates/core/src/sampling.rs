//! Seeded sampling used by `sample:N:seed` and the randomized test suites.
//!
//! The generator is SplitMix64: a 64-bit state advanced by
//! `0x9E3779B97F4A7C15`, output mixed with the multipliers
//! `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB` and shifts 30, 27, 31.
//! Draws from a pool of size `m` use `next_u64() % m`; repeated picks are
//! skipped until `N` distinct items are collected.

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw in `0..bound` (plain modulo; bias is irrelevant at
    /// these sizes and keeps the contract trivial to reimplement).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        self.next_u64() % bound
    }
}

/// Picks `count` distinct positions of `0..pool_len`, returned sorted.
/// Returns `None` when `count > pool_len`.
pub fn sample_indices(pool_len: usize, count: usize, seed: u64) -> Option<Vec<usize>> {
    if count > pool_len {
        return None;
    }
    let mut rng = SplitMix64::new(seed);
    let mut taken = vec![false; pool_len];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = rng.below(pool_len as u64) as usize;
        if !taken[k] {
            taken[k] = true;
            out.push(k);
        }
    }
    out.sort_unstable();
    Some(out)
}
