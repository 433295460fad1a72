//! Full classification run over the shipped fixtures: tilting classes,
//! steadiness flags, partitions, and the opposite-quiver duality check.
//!
//! ```sh
//! cargo run --example classify_nccr
//! ```

use dimer_nccr::fixtures;
use dimer_nccr::nccr::{classify, opposite_check};

fn main() {
    for (name, model) in [
        ("square2x2", fixtures::square2x2()),
        ("hex1", fixtures::hex1()),
        ("hex7_124", fixtures::hex7_124()),
        ("ex52_nonregular", fixtures::ex52_nonregular()),
    ] {
        let c = classify(&model).unwrap();
        println!("== {name} ==");
        println!("  verdict: {}", c.verdict);
        println!("  class group: {}", c.base_list.td.class_group_name());
        println!(
            "  basic {}, steady {}, semi-steady {}",
            c.basic, c.steady, c.semi_steady
        );
        if c.semi_steady && !c.steady {
            println!("  partition I = {:?}, I* = {:?}", c.plain, c.dual);
        }
        for (j, cl) in c.base_list.classes.iter().enumerate() {
            println!(
                "    T[0,{j}]: label {:?}, torsion {:?}, free {:?}",
                cl.repr, cl.coords.torsion, cl.coords.free
            );
        }
        println!(
            "  opposite-quiver classes are the duals: {}",
            opposite_check(&model, 0).unwrap()
        );
        for chk in &c.cross_checks {
            println!("  cross-check: {chk}");
        }
        println!();
    }
}
