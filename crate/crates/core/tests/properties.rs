use layercloud::cli::generate::gen_random_instance;
use layercloud::cli::render_svg;
use layercloud::io::{representation_from_json, representation_to_json, Instance};
use layercloud::model::contact_report;
use layercloud::twolayer::{greedy_sweep, sweep};
use layercloud::{exact, flow, LayeredGraph, Q};
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = LayeredGraph> {
    (1usize..=4, any::<u64>(), 1i64..=6)
        .prop_flat_map(|(l, seed, wmax)| (prop::collection::vec(1usize..=6, l), Just(seed), Just(wmax)))
        .prop_map(|(sizes, seed, wmax)| gen_random_instance(sizes.len(), &sizes, (1, wmax), seed).unwrap())
}

fn two_layer() -> impl Strategy<Value = LayeredGraph> {
    (1usize..=40, 1usize..=40, any::<u64>())
        .prop_map(|(a, b, seed)| gen_random_instance(2, &[a, b], (1, 7), seed).unwrap())
}

fn one() -> Q {
    Q::from_integer(1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn area_layouts_are_consistent(g in graph()) {
        let a = flow::minimize_area(&g, one()).unwrap();
        let rep = contact_report(&g, &a.representation).unwrap();
        prop_assert!(rep.is_admissible());
        prop_assert_eq!(rep.gap_total, a.gap_total);
        let b = flow::minimize_bounding_box(&g, one()).unwrap();
        let brep = contact_report(&g, &b.representation).unwrap();
        prop_assert!(brep.is_admissible());
        prop_assert_eq!(brep.bbox_width, b.width);
        prop_assert!(a.gap_total <= b.gap_total);
        prop_assert!(b.width >= g.max_layer_width());
    }

    #[test]
    fn report_is_pure(g in graph()) {
        let r = flow::minimize_area(&g, one()).unwrap().representation;
        prop_assert_eq!(contact_report(&g, &r).unwrap(), contact_report(&g, &r).unwrap());
        prop_assert_eq!(render_svg(&g, &r).unwrap(), render_svg(&g, &r).unwrap());
    }

    #[test]
    fn files_round_trip(g in graph()) {
        let inst = Instance::new(g.clone(), one());
        prop_assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
        let r = flow::minimize_area(&g, one()).unwrap().representation;
        prop_assert_eq!(representation_from_json(&representation_to_json(&r)).unwrap(), r);
    }

    #[test]
    fn sweep_reports_what_it_draws(g in two_layer()) {
        let out = sweep(&g, one()).unwrap();
        let rep = contact_report(&g, &out.representation).unwrap();
        prop_assert!(rep.is_admissible());
        prop_assert_eq!(rep.realized.len(), out.realized);
        prop_assert!(out.realized >= greedy_sweep(&g, one()).unwrap().realized);
    }

    #[test]
    fn exact_witness_scores_its_count(g in graph().prop_filter("small", |g| g.num_vertices() <= 8)) {
        let m = exact::build_model(&g, one()).unwrap();
        let s = exact::solve_branch_and_bound(&m).unwrap();
        prop_assert_eq!(exact::evaluate_assignment(&m, &s.lost), Some(s.lost_count));
        let rep = contact_report(&g, &s.representation).unwrap();
        prop_assert!(rep.is_admissible());
        prop_assert_eq!(rep.realized.len(), s.realized_count());
    }
}
