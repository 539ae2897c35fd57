mod common;

use std::path::Path;
use std::process::{Command, Output};

use layercloud::io::{representation_from_json, Instance};
use layercloud::model::contact_report;
use layercloud::oracle::{brute_force_max_contacts, brute_force_min_gap, GridSearchConfig};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_layercloud"))
        .args(args)
        .env_remove("LAYERCLOUD_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let fan = common::fixture("fan.json");
    assert_eq!(run(&["validate", path(&fan)]).status.code(), Some(0));

    let o = run(&["validate", path(&common::fixture("not_triangulated.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not triangulated"), "{}", stderr(&o));

    let o = run(&["validate", path(&common::fixture("negative_width.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("non-positive width"));
}

#[test]
fn garbled_file_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"layers\": [[\"1\"],\n [\"x/0\"]]}").unwrap();
    let o = run(&["validate", path(&p)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("layers[1][0]"), "{}", stderr(&o));
    std::fs::write(&p, "{\"layers\": [[\"1\"],\n [\"2\",]]}").unwrap();
    let o = run(&["validate", path(&p)]);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn fan_reports() {
    let fan = common::fixture("fan.json");
    let inst = Instance::load(&fan).unwrap();
    let cfg = GridSearchConfig::default();
    let best = brute_force_max_contacts(&inst.graph, &cfg).unwrap().0;
    let gap = brute_force_min_gap(&inst.graph, &cfg).unwrap().0;

    let o = run(&["max-contacts", path(&fan)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains(&format!("two-layer-sweep: realized {best}/5")), "{}", stdout(&o));

    let o = run(&["area-min", path(&fan), "--oracle-check"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains(&format!("gap_total {gap} ")), "{}", stdout(&o));
    assert!(stdout(&o).contains("oracle (grid-oracle) agrees"));
}

#[test]
fn emitted_files_revalidate() {
    let dir = tempfile::tempdir().unwrap();
    let inst_path = dir.path().join("g.json");
    let o = run(&["gen", "--layers", "3", "--sizes", "2,3,2", "--seed", "1", "--out", path(&inst_path)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let inst = Instance::load(&inst_path).unwrap();
    assert!(inst.graph.validate().is_empty());

    for mode in ["area-min", "bbox-min", "max-contacts"] {
        let json = dir.path().join(format!("{mode}.json"));
        let svg = dir.path().join(format!("{mode}.svg"));
        let mut args = vec![mode, path(&inst_path), "--oracle-check", "--json", path(&json), "--svg", path(&svg)];
        if mode == "max-contacts" {
            args.push("--exact");
        }
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{mode}: {}", stderr(&o));
        let r = representation_from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
        let rep = contact_report(&inst.graph, &r).unwrap();
        assert!(rep.false_adjacencies.is_empty());
        let text = stdout(&o);
        let claimed = match mode {
            "max-contacts" => format!("realized {}/", rep.realized.len()),
            _ => format!("gap_total {} bbox_width {}", rep.gap_total, rep.bbox_width),
        };
        assert!(text.contains(&claimed), "{mode}: {text}");
        let drawn = std::fs::read_to_string(&svg).unwrap();
        assert_eq!(drawn.matches("class=\"vertex\"").count(), 7);
        let rendered = run(&["render", path(&inst_path), path(&json)]);
        assert_eq!(stdout(&rendered), drawn);
    }
}

#[test]
fn exact_flags_write_lp_and_network() {
    let dir = tempfile::tempdir().unwrap();
    let fan = common::fixture("fan.json");
    let lp = dir.path().join("m.lp");
    let o = run(&["max-contacts", path(&fan), "--exact", "--emit-lp", path(&lp), "--report-json"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"solver\": \"branch-and-bound\""));
    let text = std::fs::read_to_string(&lp).unwrap();
    assert!(text.starts_with("\\ layered contact model") && text.ends_with("End\n"));

    let arcs = dir.path().join("n.txt");
    assert!(run(&["area-min", path(&fan), "--dump-network", path(&arcs)]).status.success());
    assert!(!std::fs::read_to_string(&arcs).unwrap().is_empty());

    let o = run(&["area-min", path(&fan), "--exact"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn oracle_subcommand_cross_checks() {
    let fan = common::fixture("fan.json");
    for mode in ["area-min", "bbox-min", "max-contacts"] {
        let o = run(&["oracle", "--mode", mode, path(&fan), "--oracle-check"]);
        assert!(o.status.success(), "{mode}: {}", stderr(&o));
        assert!(stdout(&o).contains("grid-oracle"));
        assert!(stdout(&o).contains("oracle (subset-oracle) agrees"));
    }
}

#[test]
fn narrow_strip_is_widened() {
    let p = common::fixture("narrow_strip.json");
    let o = run(&["bbox-min", path(&p), "--oracle-check"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("bbox_width 22"), "{}", stdout(&o));
    let o = run(&["area-min", path(&p), "--oracle-check"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn seed_from_environment() {
    let plain = run(&["gen", "--seed", "3"]);
    let env = Command::new(env!("CARGO_BIN_EXE_layercloud"))
        .args(["gen", "--seed", "99"])
        .env("LAYERCLOUD_SEED", "3")
        .output()
        .unwrap();
    assert_eq!(stdout(&plain), stdout(&env));
    assert_ne!(stdout(&plain), stdout(&run(&["gen", "--seed", "4"])));
}

#[test]
fn oracle_cap_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("big.json");
    let o = run(&["gen", "--layers", "2", "--sizes", "6,6", "--seed", "2", "--out", path(&p)]);
    assert!(o.status.success());
    let o = run(&["max-contacts", path(&p), "--oracle-check"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("12 rectangles exceed"), "{}", stderr(&o));
    assert!(run(&["max-contacts", path(&p)]).status.success());
}

#[test]
fn rational_instance() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    std::fs::write(&p, r#"{"epsilon": "1/4", "layers": [["3/2"], ["1/2", "1/3"]], "up_neighbors": [[[0, 1]]]}"#).unwrap();
    let o = run(&["max-contacts", path(&p), "--oracle-check"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("realized 3/3"));
}
