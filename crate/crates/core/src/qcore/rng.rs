//! Seeded random streams.
//!
//! Every stochastic operation draws from a PCG-XSL-RR 128/64 generator
//! (`rand_pcg::Pcg64`). A stream is identified by `(seed, domain, stream_id)`:
//! the 64-bit seed and domain tag are mixed with SplitMix64 into the 128-bit
//! PCG state, and the stream id selects the PCG increment. Shots use their
//! shot id as stream id, so the result of shot `i` never depends on how many
//! other shots ran or in which order.

use rand::SeedableRng;
use rand_pcg::Pcg64;

pub type StreamRng = Pcg64;

/// Domain tags keep the verifier's, the device's and the noise injector's
/// randomness independent under a shared user seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Verifier = 0x7665_7269,
    Device = 0x6465_7669,
    RdmNoise = 0x6e6f_6973,
    Experiment = 0x6578_7065,
    Generator = 0x6765_6e65,
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derives a child seed from a parent seed and an arbitrary label.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ label.rotate_left(17))
}

/// Independent stream `stream_id` of `domain` under `seed`.
pub fn stream(seed: u64, domain: Domain, stream_id: u64) -> StreamRng {
    let hi = splitmix64(seed ^ domain as u64);
    let lo = splitmix64(hi ^ 0x5851_f42d_4c95_7f2d);
    let state = ((hi as u128) << 64) | lo as u128;
    Pcg64::new(state, (stream_id as u128) << 1 | 1)
}

/// Convenience for one-off, non-sharded randomness.
pub fn seeded(seed: u64) -> StreamRng {
    Pcg64::seed_from_u64(seed)
}
