//! SVG output for representations.

use std::fmt::Write;

use num_traits::{ToPrimitive, Zero};

use crate::error::Result;
use crate::model::{contact_report, LayeredGraph, Representation, VertexId};
use crate::Q;

/// Pixels per unit of width and per layer.
pub const UNIT: f64 = 40.0;

const MARGIN: f64 = 10.0;

fn px(q: Q) -> String {
    let v = q.to_f64().unwrap_or(0.0) * UNIT;
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Draws every rectangle, shades the gaps between neighbours on a row and marks
/// lost edges with dashed segments between rectangle centres.
///
/// Output depends only on the inputs, so it can be compared against golden files.
pub fn render_svg(g: &LayeredGraph, r: &Representation) -> Result<String> {
    let report = contact_report(g, r)?;
    let layers = g.num_layers();
    let left = r.rows().iter().flatten().copied().min().unwrap_or_else(Q::zero);
    let right = g
        .vertices()
        .map(|v| r.x(v) + g.width(v))
        .max()
        .unwrap_or_else(Q::zero);
    let width = (right - left).to_f64().unwrap_or(0.0) * UNIT + 2.0 * MARGIN;
    let height = layers as f64 * UNIT + 2.0 * MARGIN;
    let x_of = |q: Q| px(q - left);
    let y_of = |layer: usize| (layers - 1 - layer) as f64 * UNIT;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<g transform="translate({MARGIN},{MARGIN})">"#);
    for layer in 0..layers {
        for j in 1..g.layer_len(layer) {
            let a = VertexId::new(layer, j - 1);
            let end = r.x(a) + g.width(a);
            let next = r.x(VertexId::new(layer, j));
            if next > end {
                let _ = writeln!(
                    out,
                    r##"<rect class="gap" x="{}" y="{}" width="{}" height="{UNIT}" fill="#d0d0d0"/>"##,
                    x_of(end),
                    y_of(layer),
                    px(next - end)
                );
            }
        }
    }
    for v in g.vertices() {
        let _ = writeln!(
            out,
            r##"<rect class="vertex" id="v{}_{}" x="{}" y="{}" width="{}" height="{UNIT}" fill="#9ecae1" stroke="#08306b"/>"##,
            v.layer,
            v.pos,
            x_of(r.x(v)),
            y_of(v.layer),
            px(g.width(v))
        );
    }
    let half = Q::new(1, 2);
    for e in &report.lost {
        let centre = |v: VertexId| (x_of(r.x(v) + g.width(v) * half), y_of(v.layer) + UNIT / 2.0);
        let (x1, y1) = centre(e.lo);
        let (x2, y2) = centre(e.hi);
        let _ = writeln!(
            out,
            r##"<line class="lost" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#cb181d" stroke-width="2" stroke-dasharray="4 3"/>"##
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
