//! Random instances and the JSON file formats.
//!
//! cargo run --example instances

use layercloud::cli::gen_random_instance;
use layercloud::flow::minimize_area;
use layercloud::io::{representation_from_json, representation_to_json, Instance};
use layercloud::model::validate_graph;
use layercloud::Q;

fn main() -> layercloud::Result<()> {
    let g = gen_random_instance(3, &[2, 3, 2], (1, 5), 1)?;
    assert!(validate_graph(&g).is_empty());
    let inst = Instance::new(g, Q::new(1, 2));
    let text = inst.to_json();
    println!("instance: {text}");
    assert_eq!(Instance::from_json(&text)?, inst);

    let r = minimize_area(&inst.graph, inst.epsilon)?.representation;
    let text = representation_to_json(&r);
    println!("layout:   {text}");
    assert_eq!(representation_from_json(&text)?, r);

    let broken = Instance::from_json(r#"{"layers": [["1", "1"], ["1", "1"]], "up_neighbors": [[[0, 0], [1, 1]]]}"#)?;
    for v in validate_graph(&broken.graph) {
        println!("violation: {v}");
    }
    Ok(())
}
