//! Draw a layout with gaps shaded and lost contacts dashed.
//!
//! cargo run --example render_svg [out.svg]

use layercloud::cli::{gen_random_instance, render_svg};
use layercloud::twolayer::sweep;
use layercloud::Q;

fn main() -> layercloud::Result<()> {
    let g = gen_random_instance(2, &[5, 6], (1, 4), 3)?;
    let out = sweep(&g, Q::from_integer(1))?;
    let svg = render_svg(&g, &out.representation)?;
    let path = std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().join("layercloud.svg").display().to_string());
    std::fs::write(&path, &svg)?;
    println!("{} contacts realized of {}, wrote {path}", out.realized, g.edges().len());
    Ok(())
}
