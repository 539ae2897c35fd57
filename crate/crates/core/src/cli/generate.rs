//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Interval, LayeredGraph};
use crate::Q;

/// Environment variable that overrides every generator seed.
pub const SEED_ENV: &str = "LAYERCLOUD_SEED";

/// The seed to use: `LAYERCLOUD_SEED` if set and numeric, else `seed`.
pub fn effective_seed(seed: u64) -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(seed)
}

/// Neighbor intervals for a random triangulated strip between rows of `lower` and
/// `upper` vertices.
///
/// The strip is a random interleaving of `lower - 1` "advance lower" and `upper - 1`
/// "advance upper" steps; every prefix adds one cross edge, so consecutive
/// intervals share exactly one endpoint.
pub fn random_strip(lower: usize, upper: usize, rng: &mut impl Rng) -> Vec<Interval> {
    let mut steps = vec![false; lower - 1];
    steps.extend(std::iter::repeat_n(true, upper - 1));
    steps.shuffle(rng);
    let mut out = Vec::with_capacity(lower);
    let mut first = 0;
    let mut b = 0;
    for up in steps {
        if up {
            b += 1;
        } else {
            out.push(Interval::new(first, b));
            first = b;
        }
    }
    out.push(Interval::new(first, upper - 1));
    out
}

/// A valid layered graph with the given layer sizes and integer widths drawn
/// uniformly from `widths`. The environment override is applied by the `gen`
/// command, not here.
pub fn gen_random_instance(
    layers: usize,
    sizes: &[usize],
    widths: (i64, i64),
    seed: u64,
) -> Result<LayeredGraph> {
    if layers == 0 || sizes.len() != layers {
        return Err(Error::Shape(format!("{layers} layers but {} sizes", sizes.len())));
    }
    if sizes.contains(&0) {
        return Err(Error::Shape("every layer needs at least one vertex".into()));
    }
    if widths.0 < 1 || widths.0 > widths.1 {
        return Err(Error::Shape(format!("bad width range {}..={}", widths.0, widths.1)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = sizes
        .iter()
        .map(|&n| (0..n).map(|_| Q::from_integer(rng.gen_range(widths.0..=widths.1))).collect())
        .collect();
    let mut up: Vec<Vec<Option<Interval>>> = sizes
        .windows(2)
        .map(|p| random_strip(p[0], p[1], &mut rng).into_iter().map(Some).collect())
        .collect();
    up.push(vec![None; sizes[layers - 1]]);
    LayeredGraph::new(w, up)
}

/// Random layer sizes summing to at most `max_total`, with `layers` entries.
pub fn random_sizes(layers: usize, max_total: usize, rng: &mut impl Rng) -> Vec<usize> {
    assert!(layers >= 1 && max_total >= layers);
    let total = rng.gen_range(layers..=max_total);
    let mut sizes = vec![1; layers];
    for _ in layers..total {
        let i = rng.gen_range(0..layers);
        sizes[i] += 1;
    }
    sizes
}
