//! Builders: honeycomb and square-grid torus quotients, and the
//! search-based realization of a parallelogram toric diagram.
//!
//! ```sh
//! cargo run --example build_and_search
//! ```

use dimer_nccr::builders::{
    build_hexagonal, build_square, hanany_vegh_parallelogram, QuotientLattice,
};
use dimer_nccr::lattice::{affine_equivalent, LatticePolygon, Vec2};
use dimer_nccr::matchings::pm_polygon;
use dimer_nccr::nccr::classify;

fn main() {
    let hex = build_hexagonal(
        QuotientLattice::new(Vec2::new(7, 0), Vec2::new(4, 1)).unwrap(),
    )
    .unwrap();
    println!(
        "honeycomb quotient of index 7: {} nodes, {} edges, {} faces, verdict {}",
        hex.node_count(),
        hex.edge_count(),
        hex.face_count(),
        classify(&hex).unwrap().verdict
    );

    let square = build_square(
        QuotientLattice::new(Vec2::new(4, 0), Vec2::new(0, 2)).unwrap(),
    )
    .unwrap();
    println!(
        "square quotient of index 8: {} faces, verdict {}",
        square.face_count(),
        classify(&square).unwrap().verdict
    );

    let target = LatticePolygon::from_vertex_cycle(vec![
        Vec2::new(3, 0),
        Vec2::new(0, 2),
        Vec2::new(-2, 0),
        Vec2::new(1, -2),
    ])
    .unwrap();
    println!(
        "\nrealizing the parallelogram {:?} (double area {}):",
        target.vertices().iter().map(|v| (v.x, v.y)).collect::<Vec<_>>(),
        target.double_area()
    );
    let model = hanany_vegh_parallelogram(&target).unwrap();
    let poly = pm_polygon(&model, None).unwrap();
    let witness = affine_equivalent(&poly.hull, &target).unwrap();
    println!(
        "  found a square model with {} faces; polygon matches under U = [[{},{}],[{},{}]], t = {}",
        model.face_count(),
        witness.u[(0, 0)],
        witness.u[(0, 1)],
        witness.u[(1, 0)],
        witness.u[(1, 1)],
        witness.t
    );
}
