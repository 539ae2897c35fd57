//! The flow network behind area minimization and the crossing repair.
//!
//! cargo run --example flow_network

use layercloud::flow::{build_network, crossing_pairs, extract_representation, resolve_crossing_patterns, solve_min_cost_flow};
use layercloud::{LayeredGraph, Q};

fn main() -> layercloud::Result<()> {
    let g = LayeredGraph::from_ints(&[&[1, 1], &[1, 1]], &[&[Some((0, 1)), Some((1, 1))]])?;
    let n = build_network(&g)?;
    println!("{} nodes, {} arcs, supply {}", n.nodes().len(), n.arcs().len(), n.supply());
    print!("{}", n.dump_arcs());

    let f = solve_min_cost_flow(&n)?;
    let fixed = resolve_crossing_patterns(&n, &f)?;
    println!("cost {}, crossings {} -> {}", f.cost, crossing_pairs(&n, &f), crossing_pairs(&n, &fixed));
    let r = extract_representation(&g, &n, &fixed, Q::from_integer(1))?;
    println!("rows {:?}", r.rows());
    Ok(())
}
