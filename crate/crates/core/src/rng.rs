//! Named random substreams derived from one master seed.
//!
//! Every stochastic component (fold assignment, masking, fuzzification,
//! generator seeds, hints, weight init, ...) draws from its own stream so it
//! can be reproduced in isolation. Streams are ChaCha8 keyed by
//! `sha256(master || name || indices)`, which is stable across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub type Stream = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    pub fn stream(self, name: &str) -> Stream {
        self.substream(name, &[])
    }

    pub fn substream(self, name: &str, indices: &[u64]) -> Stream {
        ChaCha8Rng::from_seed(self.key(name, indices))
    }

    /// A child seed, for handing a whole component its own namespace.
    pub fn derive(self, name: &str, indices: &[u64]) -> Seed {
        let key = self.key(name, indices);
        let mut bytes = [0u8; 8];
        bytes.copy_from_slice(&key[..8]);
        Seed(u64::from_le_bytes(bytes))
    }

    fn key(self, name: &str, indices: &[u64]) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(self.0.to_le_bytes());
        h.update((name.len() as u64).to_le_bytes());
        h.update(name.as_bytes());
        for i in indices {
            h.update(i.to_le_bytes());
        }
        let digest = h.finalize();
        let mut out = [0u8; 32];
        out.copy_from_slice(&digest);
        out
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}
