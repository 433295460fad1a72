//! The shipped example models, parsed from `fixtures/*.json`.
//!
//! `hex7_124` is generated by [`crate::builders::build_hexagonal`]; the file
//! records the quotient basis `(7,0),(4,1)` whose dual quiver is the McKay
//! quiver of the cyclic group of order 7 acting with weights (1,2,4).

use crate::graph::DimerModel;

pub const SQUARE2X2_JSON: &str = include_str!("../fixtures/square2x2.json");
pub const HEX1_JSON: &str = include_str!("../fixtures/hex1.json");
pub const HEX7_124_JSON: &str = include_str!("../fixtures/hex7_124.json");
pub const EX52_NONREGULAR_JSON: &str = include_str!("../fixtures/ex52_nonregular.json");

/// The four-face square dimer model on the torus.
pub fn square2x2() -> DimerModel {
    DimerModel::from_json(SQUARE2X2_JSON).expect("fixture is valid")
}

/// One hexagon: two nodes, three parallel edges.
pub fn hex1() -> DimerModel {
    DimerModel::from_json(HEX1_JSON).expect("fixture is valid")
}

/// Honeycomb quotient with seven hexagonal faces.
pub fn hex7_124() -> DimerModel {
    DimerModel::from_json(HEX7_124_JSON).expect("fixture is valid")
}

/// A consistent model with the same toric diagram as `square2x2` that is
/// not homotopy equivalent to a regular tiling (faces of sizes 4,4,8,8).
pub fn ex52_nonregular() -> DimerModel {
    DimerModel::from_json(EX52_NONREGULAR_JSON).expect("fixture is valid")
}

/// An inconsistent counterexample: `square2x2` with edge offsets retargeted
/// along face-closure-preserving directions, so every face still bounds but
/// one zigzag path becomes homologically trivial.
pub fn twisted_square2x2() -> DimerModel {
    let text = r#"{
        "nodes": [
            {"id":"b0","color":"black"},{"id":"b1","color":"black"},
            {"id":"w0","color":"white"},{"id":"w1","color":"white"}
        ],
        "edges": [
            {"id":"e0","white":"w0","black":"b0","offset":[0,0]},
            {"id":"e1","white":"w0","black":"b1","offset":[-1,-1]},
            {"id":"e2","white":"w1","black":"b1","offset":[-1,-1]},
            {"id":"e3","white":"w1","black":"b0","offset":[0,0]},
            {"id":"e4","white":"w0","black":"b0","offset":[1,0]},
            {"id":"e5","white":"w1","black":"b0","offset":[-1,0]},
            {"id":"e6","white":"w0","black":"b1","offset":[0,-1]},
            {"id":"e7","white":"w1","black":"b1","offset":[-2,-1]}
        ],
        "rotations": {
            "b0": ["e0", "e3", "e4", "e5"],
            "b1": ["e7", "e6", "e2", "e1"],
            "w0": ["e4", "e1", "e0", "e6"],
            "w1": ["e2", "e5", "e7", "e3"]
        }
    }"#;
    DimerModel::from_json(text).expect("fixture is valid")
}
