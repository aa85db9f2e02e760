//! Seeded, counter-based sampling of triads.
//!
//! Every probe gets its own generator keyed by `(master_seed, stream, probe)`,
//! so the probe set is independent of evaluation order and thread count, and
//! the first `n` probes of a larger run are exactly the probes of a run with
//! `n` samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::triad::Triad;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntryRange {
    pub lo: f64,
    pub hi: f64,
}

impl EntryRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let r = EntryRange { lo, hi };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo > 0.0 && self.lo < self.hi) {
            return Err(Error::InvalidParameter {
                name: "entry_range",
                reason: format!(
                    "bounds must be positive and finite with lo < hi, got [{}, {}]",
                    self.lo, self.hi
                ),
            });
        }
        Ok(())
    }
}

impl Default for EntryRange {
    /// Saaty's 1/9..9 scale.
    fn default() -> Self {
        EntryRange { lo: 1.0 / 9.0, hi: 9.0 }
    }
}

/// Generator for probe number `probe` of stream `stream`.
pub fn probe_rng(master_seed: u64, stream: u64, probe: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    key[16..24].copy_from_slice(&probe.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, range: EntryRange) -> f64 {
    let (lo, hi) = (range.lo.ln(), range.hi.ln());
    let u: f64 = rng.random();
    (lo + u * (hi - lo)).exp().clamp(range.lo, range.hi)
}

/// Three independent log-uniform entries.
pub fn sample_triad<R: Rng + ?Sized>(rng: &mut R, range: EntryRange) -> Triad {
    let t12 = log_uniform(rng, range);
    let t13 = log_uniform(rng, range);
    let t23 = log_uniform(rng, range);
    Triad::new(t12, t13, t23).expect("log-uniform samples are positive")
}

/// Consistent triad `(w1/w2, w1/w3, w2/w3)` from log-uniform weights.
pub fn sample_consistent_triad<R: Rng + ?Sized>(rng: &mut R, range: EntryRange) -> Triad {
    let w1 = log_uniform(rng, range);
    let w2 = log_uniform(rng, range);
    let w3 = log_uniform(rng, range);
    Triad::from_weights(w1, w2, w3).expect("log-uniform weights are positive")
}
