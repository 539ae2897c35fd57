//! Every solver against both brute-force oracles on random small instances.
//!
//! cargo run --release --example oracle_check [count]

use layercloud::cli::generate::{gen_random_instance, random_sizes};
use layercloud::oracle::*;
use layercloud::{exact, flow, twolayer, Q};
use rand::SeedableRng;

fn main() -> layercloud::Result<()> {
    let count: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let cfg = GridSearchConfig::default();
    let one = Q::from_integer(1);
    let mut disagreements = 0;
    for seed in 0..count {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let layers = 1 + (seed % 4) as usize;
        let sizes = random_sizes(layers, 9, &mut rng);
        let g = gen_random_instance(layers, &sizes, (1, 5), seed)?;

        let gap = (flow::minimize_area(&g, one)?.gap_total, brute_force_min_gap(&g, &cfg)?.0, subset_min_gap(&g, &cfg)?.0);
        let bbox = (flow::minimize_bounding_box(&g, one)?.width, brute_force_min_bbox(&g, &cfg)?.0, subset_min_bbox(&g, &cfg)?.0);
        let mut contacts = vec![exact::maximize_contacts(&g, one)?.realized_count()];
        if layers == 2 {
            contacts.push(twolayer::sweep(&g, one)?.realized);
        }
        let (grid, subset) = (brute_force_max_contacts(&g, &cfg)?.0, subset_max_contacts(&g, &cfg)?.0);

        let ok = gap.0 == Q::from_integer(gap.1)
            && gap.1 == gap.2
            && bbox.0 == Q::from_integer(bbox.1)
            && bbox.1 == bbox.2
            && grid == subset
            && contacts.iter().all(|&c| c == grid);
        if !ok {
            disagreements += 1;
            println!("seed {seed} {sizes:?}: gap {gap:?} bbox {bbox:?} contacts {contacts:?} vs {grid}/{subset}");
        }
    }
    println!("{count} instances, {disagreements} disagreements");
    Ok(())
}
