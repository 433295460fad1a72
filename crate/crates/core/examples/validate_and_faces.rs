//! Load a dimer model from JSON, inspect its faces, and contract bivalent
//! nodes.
//!
//! ```sh
//! cargo run --example validate_and_faces
//! ```

use dimer_nccr::fixtures;
use dimer_nccr::graph::DimerModel;

fn main() {
    let model = fixtures::square2x2();
    println!(
        "square2x2: {} nodes, {} edges, {} faces",
        model.node_count(),
        model.edge_count(),
        model.face_count()
    );
    for f in model.faces() {
        let ids: Vec<&str> = f
            .darts
            .iter()
            .map(|d| model.edges()[d.edge.0].id.as_str())
            .collect();
        println!("  face {} of length {}: {:?}", f.id, f.len(), ids);
    }

    // A hexagon subdivided by a bivalent pair contracts back to one hexagon.
    let subdivided = r#"{
        "nodes": [
            {"id":"w","color":"white"},{"id":"b","color":"black"},
            {"id":"bm","color":"black"},{"id":"wm","color":"white"}
        ],
        "edges": [
            {"id":"x1","white":"w","black":"bm","offset":[0,0]},
            {"id":"x2","white":"wm","black":"bm","offset":[0,0]},
            {"id":"x3","white":"wm","black":"b","offset":[0,0]},
            {"id":"y","white":"w","black":"b","offset":[1,0]},
            {"id":"z","white":"w","black":"b","offset":[0,1]}
        ],
        "rotations": {
            "w": ["z","x1","y"],
            "b": ["x3","y","z"],
            "bm": ["x1","x2"],
            "wm": ["x2","x3"]
        }
    }"#;
    let m = DimerModel::from_json(subdivided).unwrap();
    println!(
        "\nsubdivided hexagon: {} nodes, {} bivalent",
        m.node_count(),
        m.bivalent_nodes().len()
    );
    let reduced = m.remove_bivalent().unwrap();
    println!(
        "after contraction: {} nodes, {} edges, {} faces, isomorphic to hex1: {}",
        reduced.node_count(),
        reduced.edge_count(),
        reduced.face_count(),
        reduced.is_isomorphic_to(&fixtures::hex1())
    );
}
