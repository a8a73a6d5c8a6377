//! Labelled random streams.
//!
//! Every stochastic input of a run draws from its own stream, identified by the run's master
//! seed and a label such as `"demand/G01"` or `"disruption/G01/S2/14/0"`. The stream seed is
//!
//! ```text
//! seed(master, label) = splitmix64(master ^ splitmix64(fnv1a64(label)))
//! ```
//!
//! where `splitmix64` is the SplitMix64 output finaliser (a full-avalanche 64-bit mixer) and
//! `fnv1a64` is the 64-bit FNV-1a hash of the label's UTF-8 bytes. Streams are ChaCha8 generators,
//! which are portable across platforms, so identical `(master, label)` pairs give identical
//! draws everywhere and changing one label never shifts another stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, b| (h ^ u64::from(*b)).wrapping_mul(FNV_PRIME))
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RngStream {
    master_seed: u64,
    label: String,
}

impl RngStream {
    pub fn new(master_seed: u64, label: impl Into<String>) -> Self {
        Self { master_seed, label: label.into() }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Stream with `suffix` appended to this stream's label.
    pub fn child(&self, suffix: &str) -> RngStream {
        RngStream::new(self.master_seed, format!("{}/{}", self.label, suffix))
    }

    pub fn derived_seed(&self) -> u64 {
        splitmix64(self.master_seed ^ splitmix64(fnv1a64(self.label.as_bytes())))
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.derived_seed())
    }
}
