//! The quiver with potential dual to a dimer model, and perfect-matching
//! evaluation of quiver paths.
//!
//! ```sh
//! cargo run --example dual_quiver
//! ```

use dimer_nccr::fixtures;
use dimer_nccr::matchings::enumerate_pms;
use dimer_nccr::quiver::{dualize, evaluate_pm};

fn main() {
    let model = fixtures::square2x2();
    let (q, w) = dualize(&model);
    println!("quiver: {} vertices, {} arrows", q.vertex_count, q.arrow_count());
    for a in &q.arrows {
        println!(
            "  a{}: f{} -> f{} dual to {} (offset {})",
            a.id,
            a.tail,
            a.head,
            model.edges()[a.dual_edge.0].id,
            a.offset
        );
    }
    println!("plus cycles (dual to white nodes): {:?}", w.plus_cycles);
    println!("minus cycles (dual to black nodes): {:?}", w.minus_cycles);

    let pms = enumerate_pms(&model);
    let path = q.find_path(0, 2);
    println!(
        "\nshortest path f0 -> f2 uses arrows {:?}",
        path.steps.iter().map(|s| s.arrow).collect::<Vec<_>>()
    );
    for (k, pm) in pms.iter().enumerate() {
        println!(
            "  evaluation against matching {k} ({:?}): {}",
            pm.edge_ids(&model),
            evaluate_pm(&q, &path, pm)
        );
    }
    println!("\nevaluation against the reversed quiver (all offsets negate):");
    let op = q.opposite();
    println!(
        "  opposite arrows reverse: a0 now f{} -> f{}",
        op.arrows[0].tail, op.arrows[0].head
    );
}
