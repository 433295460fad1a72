//! Smith normal form, cokernels, and divisor class groups of the toric
//! singularities attached to lattice polygons.
//!
//! ```sh
//! cargo run --example class_groups
//! ```

use dimer_nccr::lattice::{cokernel, snf, IntMatrix, LatticePolygon, Vec2};
use dimer_nccr::toric::ToricData;

fn main() {
    let a = IntMatrix::from_rows(&[
        vec![1, 0, 1],
        vec![0, 1, 1],
        vec![-1, 0, 1],
        vec![0, -1, 1],
    ]);
    let s = snf(&a);
    println!("ray matrix of the unit-diamond square:");
    print!("{a}");
    println!("invariant factors: {:?}", s.invariant_factors());
    let g = cokernel(&a);
    println!("cokernel: free rank {}, torsion {:?}", g.free_rank, g.torsion);

    for (name, pts) in [
        (
            "unit diamond",
            vec![
                Vec2::new(1, 0),
                Vec2::new(0, 1),
                Vec2::new(-1, 0),
                Vec2::new(0, -1),
            ],
        ),
        (
            "rank-one quadrilateral",
            vec![
                Vec2::new(0, 1),
                Vec2::new(-1, 0),
                Vec2::new(0, -1),
                Vec2::new(1, -1),
            ],
        ),
        (
            "unit triangle",
            vec![Vec2::new(0, 0), Vec2::new(1, 0), Vec2::new(0, 1)],
        ),
    ] {
        let td = ToricData::from_polygon(LatticePolygon::hull_of(&pts).unwrap());
        println!(
            "\n{name}: Cl = {}, Gorenstein witness {:?}",
            td.class_group_name(),
            td.gorenstein_witness()
        );
        let u = vec![1i64; td.ray_count()];
        let c = td.class_of(&u).unwrap();
        println!(
            "  class of the all-ones label: torsion {:?}, free {:?}",
            c.coords.torsion, c.coords.free
        );
        println!(
            "  its dual doubles back to itself: {}",
            td.dual_class(&td.dual_class(&c)) == c
        );
    }
}
