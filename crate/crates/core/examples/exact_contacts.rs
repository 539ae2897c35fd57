//! Branch and bound for any number of layers, plus the LP model.
//!
//! cargo run --example exact_contacts [out.lp]

use layercloud::cli::gen_random_instance;
use layercloud::exact::{build_model, export_lp, solve_branch_and_bound, RowKind};
use layercloud::Q;

fn main() -> layercloud::Result<()> {
    let g = gen_random_instance(3, &[2, 4, 3], (1, 4), 9)?;
    let m = build_model(&g, Q::from_integer(1))?;
    println!(
        "{} indicators, {} rows ({} order rows), M = {}",
        m.indicators().len(),
        m.rows().len(),
        m.count(RowKind::Order),
        m.big_m()
    );
    let s = solve_branch_and_bound(&m)?;
    println!("lost {} of {} contacts after {} search nodes", s.lost_count, s.lost.len(), s.nodes);
    for (e, &lost) in m.indicators().iter().zip(&s.lost) {
        if lost {
            println!("  lost {e}");
        }
    }
    let lp = export_lp(&m);
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(path, lp)?,
        None => print!("{}", lp.lines().take(8).map(|l| format!("{l}\n")).collect::<String>()),
    }
    Ok(())
}
