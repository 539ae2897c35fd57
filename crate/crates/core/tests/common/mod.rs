//! Seeded instance families shared by the integration tests.
#![allow(dead_code)]

use layercloud::cli::generate::{gen_random_instance, random_sizes};
use layercloud::LayeredGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `count` instances with a layer count from `layers`, at most `max_total`
/// rectangles and widths in `widths`.
pub fn family(
    salt: u64,
    count: usize,
    layers: std::ops::RangeInclusive<usize>,
    max_total: usize,
    widths: (i64, i64),
) -> Vec<LayeredGraph> {
    (0..count as u64)
        .map(|i| {
            let seed = salt.wrapping_mul(1_000_003).wrapping_add(i);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let l = rng.gen_range(layers.clone());
            let sizes = random_sizes(l, max_total, &mut rng);
            gen_random_instance(l, &sizes, widths, seed).expect("generator accepts its own sizes")
        })
        .collect()
}

/// 1 to 4 layers, at most 10 rectangles, widths 1..=5.
pub fn area_family(count: usize) -> Vec<LayeredGraph> {
    family(1, count, 1..=4, 10, (1, 5))
}

/// Two layers, at most 10 rectangles, widths 1..=5.
pub fn two_layer_family(count: usize) -> Vec<LayeredGraph> {
    family(2, count, 2..=2, 10, (1, 5))
}

/// 2 to 4 layers, at most 9 rectangles, widths 1..=5.
pub fn exact_family(count: usize) -> Vec<LayeredGraph> {
    family(3, count, 2..=4, 9, (1, 5))
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}
