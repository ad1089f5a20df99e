//! Keyed random streams.
//!
//! Every stream is a ChaCha8 generator whose key holds the master seed and a
//! draw index, and whose 64-bit stream id is the replication index. Streams
//! therefore depend only on `(master_seed, replication, draw)`, never on the
//! order in which replications are executed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Draw index reserved for the base station deployment of a replication.
pub const DEPLOYMENT_DRAW: u64 = 0;
/// Draw index reserved for the user point process used by load measurement.
pub const USER_DRAW: u64 = u64::MAX;

/// Stream for fading draw `d` (zero-based) of a replication.
pub fn fading_draw(d: u64) -> u64 {
    d + 1
}

pub fn substream(master_seed: u64, replication: u64, draw: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&draw.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(replication);
    rng
}
