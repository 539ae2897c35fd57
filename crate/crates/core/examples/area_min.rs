//! Gap-minimal layouts by min-cost flow.
//!
//! cargo run --example area_min

use layercloud::cli::gen_random_instance;
use layercloud::flow::minimize_area;
use layercloud::model::contact_report;
use layercloud::{LayeredGraph, Q};

fn show(name: &str, g: &LayeredGraph) -> layercloud::Result<()> {
    let out = minimize_area(g, Q::from_integer(1))?;
    let report = contact_report(g, &out.representation)?;
    println!("{name}: gap_total {} rows of width {}", out.gap_total, out.row_width);
    for (i, row) in out.representation.rows().iter().enumerate().rev() {
        let xs: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        println!("  layer {i}: x = [{}]", xs.join(", "));
    }
    println!("  realized {} of {} contacts", report.realized.len(), g.edges().len());
    Ok(())
}

fn main() -> layercloud::Result<()> {
    let fan = LayeredGraph::from_ints(&[&[3], &[1, 1, 1]], &[&[Some((0, 2))]])?;
    show("fan", &fan)?;

    // the wide middle rectangle has to sit between the outer ones below
    let pinch = LayeredGraph::from_ints(
        &[&[1, 1, 1], &[1, 3, 1]],
        &[&[Some((0, 0)), Some((0, 2)), Some((2, 2))]],
    )?;
    show("pinch", &pinch)?;

    show("random", &gen_random_instance(3, &[3, 4, 3], (1, 5), 42)?)
}
