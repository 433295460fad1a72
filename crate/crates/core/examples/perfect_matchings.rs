//! Enumerate perfect matchings, build the matching polygon, and pick out
//! the extremal matchings at its vertices.
//!
//! ```sh
//! cargo run --example perfect_matchings
//! ```

use dimer_nccr::fixtures;
use dimer_nccr::matchings::{edge_coverage, enumerate_pms, pm_homology, pm_polygon};

fn main() {
    let model = fixtures::square2x2();
    let pms = enumerate_pms(&model);
    println!("square2x2 has {} perfect matchings:", pms.len());
    for p in &pms {
        println!(
            "  {:?} at class {}",
            p.edge_ids(&model),
            pm_homology(&model, p, &pms[0])
        );
    }

    let poly = pm_polygon(&model, None).unwrap();
    println!("\npolygon points:");
    for (pt, ms) in &poly.points {
        println!("  {pt}: multiplicity {}", ms.len());
    }
    println!(
        "hull: {:?}",
        poly.hull.vertices().iter().map(|v| (v.x, v.y)).collect::<Vec<_>>()
    );
    println!("extremal matchings (counterclockwise):");
    for (v, p) in poly.extremal().unwrap() {
        println!("  vertex {v}: {:?}", p.edge_ids(&model));
    }

    println!(
        "\nuncovered edges of square2x2: {:?}",
        edge_coverage(&model)
    );
}
