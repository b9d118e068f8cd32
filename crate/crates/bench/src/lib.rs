//! Fixed inputs shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spancalc_core::random::{random_groupoid, random_span};
use spancalc_core::SpanOfGroupoids;

/// A composable pair `(T, S)` of random spans, reproducible from `seed`.
pub fn span_pair(seed: u64, max_blocks: usize) -> (SpanOfGroupoids, SpanOfGroupoids) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = random_groupoid(&mut rng, max_blocks);
    let y = random_groupoid(&mut rng, max_blocks);
    let z = random_groupoid(&mut rng, max_blocks);
    let s = random_span(&mut rng, &x, &y, max_blocks);
    let t = random_span(&mut rng, &y, &z, max_blocks);
    (t, s)
}
