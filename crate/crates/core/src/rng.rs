use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random stream for instance `index` of a run seeded with
/// `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
