use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A deterministic random stream.
pub type Stream = ChaCha8Rng;

/// Stream `stream_id` of the generator seeded by `seed`.
///
/// Streams are ChaCha8 with the stream counter set to `stream_id`, so each
/// `(seed, stream_id)` pair is reproducible and distinct ids never overlap.
pub fn seeded_stream(seed: u64, stream_id: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}
