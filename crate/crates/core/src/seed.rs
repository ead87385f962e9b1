// SPDX-License-Identifier: Apache-2.0

//! Seed derivation.
//!
//! Every random stream is a ChaCha8 generator keyed by the master seed, with
//! the 64-bit ChaCha stream id set to `(purpose << 56) | index`. Streams for
//! different purposes or indices never overlap, and no ambient entropy is
//! used anywhere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a derived stream is used for. The discriminant occupies the top byte
/// of the stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum StreamPurpose {
    /// One stream per RTW reference, indexed by reference number.
    Reference = 1,
    /// The single joint stream behind a disjoint spike-train family.
    SpikeFamily = 2,
    /// One stream per Monte Carlo trial, indexed by trial number.
    Trial = 3,
    /// Fault injection streams.
    Fault = 4,
}

const INDEX_MASK: u64 = (1 << 56) - 1;

pub fn stream(master_seed: u64, purpose: StreamPurpose, index: u64) -> ChaCha8Rng {
    assert!(index <= INDEX_MASK, "stream index {index} exceeds 56 bits");
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((purpose as u64) << 56) | index);
    rng
}
