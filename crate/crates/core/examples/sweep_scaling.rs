//! Operation counts of the two-layer sweep per vertex and edge.
//!
//! cargo run --release --example sweep_scaling

use layercloud::cli::gen_random_instance;
use layercloud::twolayer::sweep;
use layercloud::Q;

fn main() -> layercloud::Result<()> {
    println!("{:>7} {:>8} {:>10} {:>9} {:>7}", "|V|", "|V|+|E|", "ops", "ops/size", "pieces");
    for n in [10usize, 30, 100, 300, 1000, 3000, 10_000, 30_000] {
        let g = gen_random_instance(2, &[n / 2, n - n / 2], (1, 8), n as u64)?;
        let out = sweep(&g, Q::from_integer(1))?;
        let size = g.num_vertices() + g.edges().len();
        println!(
            "{n:>7} {size:>8} {:>10} {:>9.2} {:>7}",
            out.stats.ops,
            out.stats.ops as f64 / size as f64,
            out.stats.max_pieces
        );
    }
    Ok(())
}
