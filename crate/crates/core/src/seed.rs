//! Deterministic seeds with labeled derivation paths.
//!
//! Every experiment is replayable from one `u64`. A [`Seed`] holds a 256-bit
//! value; children are derived with SHA-256 over the parent value, a label
//! and an index:
//!
//! ```text
//! master  = SHA-256("rox-lab/seed/v1"   || u64be(master))
//! child   = SHA-256("rox-lab/derive/v1" || parent || u32be(|label|) || label || u64be(index))
//! ```
//!
//! Two streams come out of a seed. [`Seed::rng`] is a ChaCha20 generator for
//! ordered sampling (keys, targets, adversary coins). [`Seed::expand`] is a
//! keyed extendable-output map used where values must depend only on the
//! input point, never on arrival order:
//!
//! ```text
//! block_j = SHA-256("rox-lab/expand/v1" || value || u32be(|domain|) || domain
//!                   || u32be(bitlen(input)) || packed(input) || u32be(j))
//! expand  = first out_bits bits of block_0 || block_1 || ...
//! ```
//!
//! `packed(input)` is the MSB-first byte packing with a zero-padded last byte.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::bits::BitString;

const MASTER_TAG: &[u8] = b"rox-lab/seed/v1";
const DERIVE_TAG: &[u8] = b"rox-lab/derive/v1";
const EXPAND_TAG: &[u8] = b"rox-lab/expand/v1";

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Seed {
    value: [u8; 32],
    path: Vec<(String, u64)>,
}

fn sha256(parts: &[&[u8]]) -> [u8; 32] {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    let digest = h.finalize();
    let mut out = [0u8; 32];
    out.copy_from_slice(&digest);
    out
}

impl Seed {
    pub fn from_u64(master: u64) -> Self {
        Self {
            value: sha256(&[MASTER_TAG, &master.to_be_bytes()]),
            path: Vec::new(),
        }
    }

    pub fn from_bytes(value: [u8; 32]) -> Self {
        Self {
            value,
            path: Vec::new(),
        }
    }

    pub fn value(&self) -> &[u8; 32] {
        &self.value
    }

    pub fn path(&self) -> &[(String, u64)] {
        &self.path
    }

    pub fn child(&self, label: &str, index: u64) -> Seed {
        let value = sha256(&[
            DERIVE_TAG,
            &self.value,
            &(label.len() as u32).to_be_bytes(),
            label.as_bytes(),
            &index.to_be_bytes(),
        ]);
        let mut path = self.path.clone();
        path.push((label.to_owned(), index));
        Seed { value, path }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        ChaCha20Rng::from_seed(self.value)
    }

    /// Pseudorandom `out_bits` bits keyed by `(self, domain, input)`.
    pub fn expand(&self, domain: &str, input: &BitString, out_bits: usize) -> BitString {
        let packed = input.to_bytes();
        let mut out = BitString::new();
        let mut counter = 0u32;
        while out.len() < out_bits {
            let block = sha256(&[
                EXPAND_TAG,
                &self.value,
                &(domain.len() as u32).to_be_bytes(),
                domain.as_bytes(),
                &(input.len() as u32).to_be_bytes(),
                &packed,
                &counter.to_be_bytes(),
            ]);
            let take = (out_bits - out.len()).min(256);
            out.extend(&BitString::from_bytes(&block, take).expect("256-bit block"));
            counter += 1;
        }
        out
    }
}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seed(")?;
        for b in &self.value[..4] {
            write!(f, "{b:02x}")?;
        }
        write!(f, "..")?;
        for (label, index) in &self.path {
            write!(f, "/{label}:{index}")?;
        }
        write!(f, ")")
    }
}

/// Uniform bit string of `len` bits from an ordered stream.
pub fn random_bits<R: rand::Rng + ?Sized>(rng: &mut R, len: usize) -> BitString {
    BitString::from_bits((0..len).map(|_| rng.gen::<bool>()).collect())
}
