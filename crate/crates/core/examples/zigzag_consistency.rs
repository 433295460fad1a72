//! Zigzag paths, slopes, and the three consistency-tier predicates.
//!
//! ```sh
//! cargo run --example zigzag_consistency
//! ```

use dimer_nccr::fixtures;
use dimer_nccr::zigzag::{
    extract_zigzags, is_consistent, is_isoradial, is_properly_ordered, lift_report,
    slope_side_correspondence,
};

fn main() {
    for (name, model) in [
        ("square2x2", fixtures::square2x2()),
        ("hex1", fixtures::hex1()),
        ("ex52_nonregular", fixtures::ex52_nonregular()),
        ("twisted_square2x2", fixtures::twisted_square2x2()),
    ] {
        println!("== {name} ==");
        let zz = extract_zigzags(&model);
        for (i, z) in zz.iter().enumerate() {
            println!(
                "  zigzag {i}: slope {} edges {:?}",
                z.slope,
                z.edge_ids(&model)
            );
        }
        let report = lift_report(&model);
        println!(
            "  lift pairs: {}, self-intersections: {}, trivial paths: {}",
            report.pairs.len(),
            report.self_intersections.len(),
            report.trivial_paths.len()
        );
        let c = is_consistent(&model);
        println!("  consistent: {}", c.holds);
        if let Some(v) = &c.violation {
            println!("    ({v})");
        }
        println!("  properly ordered: {}", is_properly_ordered(&model).holds);
        let iso = is_isoradial(&model);
        println!("  isoradial: {}", iso.holds);
        if let Some(v) = &iso.violation {
            println!("    ({v})");
        }
        if c.holds {
            println!(
                "  slope multiset = polygon side segments: {}",
                slope_side_correspondence(&model).unwrap()
            );
        }
        println!();
    }
}
