//! Counter-based random substreams.
//!
//! Every Monte Carlo unit of work (a replicate, a quantile draw) gets its own
//! ChaCha stream selected by `(seed, index)`. Results therefore do not depend
//! on how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator type used for all simulations.
pub type SimRng = ChaCha8Rng;

/// Independent generator for work item `index` under `seed`.
pub fn substream(seed: u64, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
