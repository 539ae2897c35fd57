mod common;

use std::collections::HashMap;

use layercloud::exact::{build_model, export_lp, maximize_contacts, solve_branch_and_bound};
use layercloud::io::Instance;
use layercloud::model::{contact_report, validate_graph};
use layercloud::oracle::{brute_force_max_contacts, brute_force_min_bbox, brute_force_min_gap, GridSearchConfig};
use layercloud::twolayer::{greedy_sweep, maximize_contacts_2layer, sweep};
use layercloud::{flow, LayeredGraph, Q};

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

fn shrink(g: &LayeredGraph, k: i64) -> LayeredGraph {
    let widths = g.widths().iter().map(|r| r.iter().map(|w| w / q(k)).collect()).collect();
    LayeredGraph::new(widths, g.up_intervals().to_vec()).unwrap()
}

#[test]
fn sweep_matches_oracle_for_larger_epsilon() {
    for (eps, widths, salt) in [(2, (2, 6), 11), (3, (3, 9), 12)] {
        let cfg = GridSearchConfig::with_epsilon(eps);
        for (i, g) in common::family(salt, 120, 2..=2, 8, widths).iter().enumerate() {
            let (r, n) = maximize_contacts_2layer(g, q(eps)).unwrap();
            let best = brute_force_max_contacts(g, &cfg).unwrap().0;
            assert_eq!(n, best, "eps {eps} #{i}");
            assert!(contact_report(g, &r).unwrap().is_admissible());
        }
    }
}

#[test]
fn exact_matches_oracle_for_larger_epsilon() {
    let cfg = GridSearchConfig::with_epsilon(2);
    for (i, g) in common::family(13, 60, 2..=3, 8, (2, 6)).iter().enumerate() {
        let s = maximize_contacts(g, q(2)).unwrap();
        let best = brute_force_max_contacts(g, &cfg).unwrap().0;
        assert_eq!(s.realized_count(), best, "#{i}");
    }
}

#[test]
fn rational_scaling_is_exact() {
    let cfg = GridSearchConfig::default();
    for g in common::family(14, 60, 1..=3, 8, (1, 5)) {
        let small = shrink(&g, 3);
        let eps = Q::new(1, 3);
        let gap = brute_force_min_gap(&g, &cfg).unwrap().0;
        assert_eq!(flow::minimize_area(&small, eps).unwrap().gap_total, Q::new(gap, 3));
        let bbox = brute_force_min_bbox(&g, &cfg).unwrap().0;
        assert_eq!(flow::minimize_bounding_box(&small, eps).unwrap().width, Q::new(bbox, 3));
        let best = brute_force_max_contacts(&g, &cfg).unwrap().0;
        assert_eq!(maximize_contacts(&small, eps).unwrap().realized_count(), best);
        if g.num_layers() == 2 {
            assert_eq!(sweep(&small, eps).unwrap().realized, best);
        }
    }
}

#[test]
fn greedy_never_beats_the_sweep() {
    let mut behind = 0;
    for g in common::two_layer_family(300) {
        let greedy = greedy_sweep(&g, q(1)).unwrap();
        let exact = sweep(&g, q(1)).unwrap();
        assert!(contact_report(&g, &greedy.representation).unwrap().is_admissible());
        assert!(greedy.realized <= exact.realized);
        behind += usize::from(greedy.realized < exact.realized);
    }
    assert!(behind < 30, "{behind}");
}

#[test]
fn narrow_strip_fixture() {
    let inst = Instance::load(common::fixture("narrow_strip.json")).unwrap();
    let g = &inst.graph;
    let cfg = GridSearchConfig::default();
    let bound = g.max_width() * q(g.max_layer_len() as i64);
    let bbox = brute_force_min_bbox(g, &cfg).unwrap().0;
    assert!(q(bbox) > bound);
    assert!(!flow::is_feasible(g, bound).unwrap());
    let b = flow::minimize_bounding_box(g, q(1)).unwrap();
    assert_eq!(b.width, q(bbox));
    let a = flow::minimize_area(g, q(1)).unwrap();
    assert_eq!(a.gap_total, q(brute_force_min_gap(g, &cfg).unwrap().0));
    assert!(a.row_width > bound);
}

#[test]
fn generator_output_always_validates() {
    let mut n = 0;
    for layers in 1..=5 {
        for max_total in [layers, layers + 3, 12, 40] {
            if max_total < layers {
                continue;
            }
            for g in common::family(100 + layers as u64 * 7 + max_total as u64, 50, layers..=layers, max_total, (1, 9)) {
                assert!(validate_graph(&g).is_empty());
                n += 1;
            }
        }
    }
    assert!(n >= 1000);
}

/// One `a - b - M c <= k` row of an exported LP.
struct LpRow {
    a: String,
    b: String,
    c: Option<(i64, String)>,
    bound: i64,
}

fn parse_lp(text: &str) -> (Vec<String>, Vec<LpRow>) {
    let mut objective = Vec::new();
    let mut rows = Vec::new();
    let mut section = "";
    for line in text.lines() {
        let line = line.trim();
        match line {
            "Minimize" | "Subject To" | "Bounds" | "Binary" | "End" => {
                section = line;
                continue;
            }
            _ if line.starts_with('\\') => continue,
            _ => {}
        }
        let body = line.split_once(':').map_or(line, |(_, b)| b);
        let tok: Vec<&str> = body.split_whitespace().collect();
        match section {
            "Minimize" => objective.extend(tok.iter().filter(|t| t.starts_with("c_")).map(|t| t.to_string())),
            "Subject To" => {
                let (lhs, rhs) = (&tok[..tok.len() - 2], tok[tok.len() - 1]);
                assert_eq!(tok[tok.len() - 2], "<=");
                assert_eq!(lhs[1], "-");
                let c = match lhs.len() {
                    3 => None,
                    6 => Some((lhs[4].parse().unwrap(), lhs[5].to_string())),
                    5 => Some((1, lhs[4].to_string())),
                    _ => panic!("unexpected row {line}"),
                };
                rows.push(LpRow { a: lhs[0].into(), b: lhs[2].into(), c, bound: rhs.parse().unwrap() });
            }
            _ => {}
        }
    }
    (objective, rows)
}

/// Feasibility of the rows with indicators fixed, by Bellman-Ford over the parsed text.
fn lp_feasible(rows: &[LpRow], c: &HashMap<String, i64>) -> bool {
    let mut names: Vec<&str> = rows.iter().flat_map(|r| [r.a.as_str(), r.b.as_str()]).collect();
    names.sort();
    names.dedup();
    let id = |s: &str| names.binary_search(&s).unwrap();
    let mut dist = vec![0i64; names.len()];
    for _ in 0..=names.len() {
        let mut changed = false;
        for r in rows {
            let k = r.bound + r.c.as_ref().map_or(0, |(m, name)| m * c[name]);
            let (a, b) = (id(&r.a), id(&r.b));
            if dist[b] + k < dist[a] {
                dist[a] = dist[b] + k;
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
    false
}

#[test]
fn lp_export_has_the_oracle_optimum() {
    let cfg = GridSearchConfig::default();
    for (i, g) in common::family(15, 40, 2..=3, 6, (1, 4)).iter().enumerate() {
        let m = build_model(g, q(1)).unwrap();
        let (objective, rows) = parse_lp(&export_lp(&m));
        assert_eq!(objective.len(), g.edges().len());
        let mut best = usize::MAX;
        for mask in 0u32..(1 << objective.len()) {
            let ones = mask.count_ones() as usize;
            if ones >= best {
                continue;
            }
            let c = objective.iter().enumerate().map(|(k, n)| (n.clone(), i64::from(mask >> k & 1))).collect();
            if lp_feasible(&rows, &c) {
                best = ones;
            }
        }
        let oracle = brute_force_max_contacts(g, &cfg).unwrap().0;
        assert_eq!(best, g.edges().len() - oracle, "#{i}");
        assert_eq!(solve_branch_and_bound(&m).unwrap().lost_count, best);
    }
}
