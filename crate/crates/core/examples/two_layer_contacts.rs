//! Contact maximization on two layers: the exact sweep against block sliding.
//!
//! cargo run --example two_layer_contacts

use layercloud::model::contact_report;
use layercloud::oracle::{brute_force_max_contacts, GridSearchConfig};
use layercloud::twolayer::{blocks, greedy_sweep, placement_order, sweep};
use layercloud::{LayeredGraph, Q};

fn main() -> layercloud::Result<()> {
    let g = LayeredGraph::from_ints(
        &[&[1, 3, 1, 1], &[1, 3, 1]],
        &[&[Some((0, 1)), Some((1, 1)), Some((1, 2)), Some((2, 2))]],
    )?;
    let eps = Q::from_integer(1);
    let order = placement_order(&g)?;
    let names = |vs: &[layercloud::VertexId]| vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
    println!("visit order {}, fans {}", names(&order.order), names(&order.fans));

    let exact = sweep(&g, eps)?;
    let greedy = greedy_sweep(&g, eps)?;
    let (best, _) = brute_force_max_contacts(&g, &GridSearchConfig::default())?;
    println!("oracle {best}, sweep {}, block sliding {}", exact.realized, greedy.realized);
    println!("sweep did {} piece operations, at most {} pieces", exact.stats.ops, exact.stats.max_pieces);

    for layer in 0..2 {
        println!("layer {layer} blocks: {:?}", blocks(&g, &exact.representation, layer));
    }
    let report = contact_report(&g, &exact.representation)?;
    for e in &report.lost {
        println!("lost {e}");
    }
    Ok(())
}
