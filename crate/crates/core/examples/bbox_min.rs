//! Narrowest strip by binary search over network supplies.
//!
//! The second instance has no admissible layout as narrow as `w_max * K`, so the
//! search continues past that bound.
//!
//! cargo run --example bbox_min

use layercloud::flow::minimize_bounding_box;
use layercloud::{LayeredGraph, Q};

fn main() -> layercloud::Result<()> {
    let cases = [
        ("fan", LayeredGraph::from_ints(&[&[3], &[1, 1, 1]], &[&[Some((0, 2))]])?),
        (
            "narrow",
            LayeredGraph::from_ints(
                &[&[4], &[3, 5, 5, 4], &[5, 5, 3, 3]],
                &[&[Some((0, 3))], &[Some((0, 0)), Some((0, 3)), Some((3, 3)), Some((3, 3))]],
            )?,
        ),
    ];
    for (name, g) in &cases {
        let b = minimize_bounding_box(g, Q::from_integer(1))?;
        let bound = g.max_width() * Q::from_integer(g.max_layer_len() as i64);
        println!(
            "{name}: width {} (W_max {}, w_max*K {bound}), gap {}, {} flow solves",
            b.width,
            g.max_layer_width(),
            b.gap_total,
            b.solves
        );
    }
    Ok(())
}
