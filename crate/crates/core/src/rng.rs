//! Reproducible randomness for every stochastic operation in the crate.
//!
//! Per-trial substreams are derived from (seed, trial index) as
//! `splitmix64(seed XOR (trial + 1) * GOLDEN)` and then advanced with the
//! splitmix64 update, so parallel and serial execution orders produce
//! identical draws. Integer ranges use rejection sampling, no modulo bias.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct Substream {
    state: u64,
}

impl Substream {
    pub fn from_seed(seed: u64) -> Self {
        Substream { state: splitmix64(seed) }
    }

    /// Stream for one trial of a seeded experiment.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        Substream { state: splitmix64(seed ^ (trial.wrapping_add(1)).wrapping_mul(GOLDEN)) }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, n) by rejection.
    pub fn gen_range(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - (u64::MAX - n + 1) % n;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % n;
            }
        }
    }

    pub fn gen_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}
