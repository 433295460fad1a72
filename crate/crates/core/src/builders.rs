//! Regular dimer models as torus quotients, and the search-based
//! realization of parallelogram toric diagrams by square models.

use thiserror::Error;

use crate::graph::{DimerModel, RawModel, RawNode, RawEdge, Color};
use crate::lattice::{affine_equivalent, sublattices_of_index, LatticePolygon, Vec2};
use crate::matchings::pm_polygon;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("lattice basis is degenerate (zero determinant)")]
    InvalidLattice,
    #[error("sublattice is not color-preserving: {0} has odd coordinate sum")]
    ParityViolation(Vec2),
    #[error("polygon is not a parallelogram")]
    NotParallelogram,
    #[error("no sublattice of index {0} realizes the polygon; this should be impossible")]
    SearchExhausted(i64),
}

/// A finite-index sublattice of `Z^2`, the deck group of a torus quotient.
///
/// The basis is normalized to positive orientation: homology coordinates of
/// the quotient are expressed in it, and a negative-determinant chart would
/// flip every counterclockwise convention downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientLattice {
    pub b1: Vec2,
    pub b2: Vec2,
}

impl QuotientLattice {
    pub fn new(b1: Vec2, b2: Vec2) -> Result<QuotientLattice, BuildError> {
        match b1.cross(b2) {
            0 => Err(BuildError::InvalidLattice),
            d if d < 0 => Ok(QuotientLattice { b1: b2, b2: b1 }),
            _ => Ok(QuotientLattice { b1, b2 }),
        }
    }

    pub fn index(&self) -> i64 {
        self.b1.cross(self.b2).abs()
    }

    /// Coset representatives of `Z^2` modulo this lattice, and reduction of
    /// arbitrary points to (representative, lattice coordinates) pairs.
    fn cosets(&self) -> CosetTable {
        // Hermite form of the row lattice for canonical representatives.
        let (mut v1, mut v2) = (self.b1, self.b2);
        while v2.y != 0 {
            let q = v1.y.div_euclid(v2.y);
            v1 = v1 - v2 * q;
            std::mem::swap(&mut v1, &mut v2);
        }
        let p = v2.x.abs();
        let mut row = v1;
        if row.y < 0 {
            row = -row;
        }
        CosetTable {
            basis: (self.b1, self.b2),
            p,
            q: row.x,
            r: row.y,
        }
    }
}

struct CosetTable {
    basis: (Vec2, Vec2),
    p: i64,
    q: i64,
    r: i64,
}

impl CosetTable {
    fn reps(&self) -> Vec<Vec2> {
        let mut out = Vec::new();
        for y in 0..self.r {
            for x in 0..self.p {
                out.push(Vec2::new(x, y));
            }
        }
        out
    }

    /// Reduce `v` to its representative; the second component is `v - rep`
    /// expressed in the coordinates of the original basis.
    fn reduce(&self, v: Vec2) -> (Vec2, Vec2) {
        let k = v.y.div_euclid(self.r);
        let w = v - Vec2::new(self.q, self.r) * k;
        let l = w.x.div_euclid(self.p);
        let rep = Vec2::new(w.x - l * self.p, w.y);
        let diff = v - rep;
        // Coordinates of diff in the (b1, b2) basis, exactly.
        let (b1, b2) = self.basis;
        let det = b1.cross(b2);
        let alpha = diff.cross(b2) / det;
        let beta = b1.cross(diff) / det;
        debug_assert_eq!(b1 * alpha + b2 * beta, diff);
        (rep, Vec2::new(alpha, beta))
    }
}

/// Quotient of the honeycomb tiling: one white and one black node and three
/// edges per coset, every face hexagonal.
pub fn build_hexagonal(lattice: QuotientLattice) -> Result<DimerModel, BuildError> {
    let table = lattice.cosets();
    let reps = table.reps();
    let name = |prefix: &str, v: Vec2| format!("{prefix}{}_{}", v.x, v.y);

    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut rotations = std::collections::BTreeMap::new();
    for &rep in &reps {
        nodes.push(RawNode {
            id: name("w", rep),
            color: Color::White,
        });
        nodes.push(RawNode {
            id: name("b", rep),
            color: Color::Black,
        });
    }
    // Edge kinds per white node: x to the black node of the same cell,
    // y and z to the cells east and north.
    for &rep in &reps {
        for (kind, delta) in [("x", Vec2::ZERO), ("y", Vec2::new(1, 0)), ("z", Vec2::new(0, 1))] {
            let (target, offset) = table.reduce(rep + delta);
            edges.push(RawEdge {
                id: format!("{kind}{}_{}", rep.x, rep.y),
                white: name("w", rep),
                black: name("b", target),
                offset: [offset.x, offset.y],
            });
        }
    }
    for &rep in &reps {
        let e = |kind: &str, v: Vec2| format!("{kind}{}_{}", v.x, v.y);
        rotations.insert(
            name("w", rep),
            vec![e("z", rep), e("x", rep), e("y", rep)],
        );
        let (west, _) = table.reduce(rep - Vec2::new(1, 0));
        let (south, _) = table.reduce(rep - Vec2::new(0, 1));
        rotations.insert(
            name("b", rep),
            vec![e("x", rep), e("y", west), e("z", south)],
        );
    }
    let raw = RawModel {
        nodes,
        edges,
        rotations,
    };
    Ok(DimerModel::validate(&raw).expect("honeycomb quotient is valid"))
}

/// Quotient of the square grid with nodes colored by coordinate parity.
/// The sublattice must preserve the coloring: both basis vectors need even
/// coordinate sums.
pub fn build_square(lattice: QuotientLattice) -> Result<DimerModel, BuildError> {
    for v in [lattice.b1, lattice.b2] {
        if (v.x + v.y).rem_euclid(2) != 0 {
            return Err(BuildError::ParityViolation(v));
        }
    }
    let table = lattice.cosets();
    let reps = table.reps();
    let color_of = |v: Vec2| {
        if (v.x + v.y).rem_euclid(2) == 0 {
            Color::Black
        } else {
            Color::White
        }
    };
    let name = |v: Vec2| format!("n{}_{}", v.x, v.y);

    let nodes: Vec<RawNode> = reps
        .iter()
        .map(|&rep| RawNode {
            id: name(rep),
            color: color_of(rep),
        })
        .collect();

    // Each white node owns its four compass edges.
    let dirs = [
        ("E", Vec2::new(1, 0)),
        ("N", Vec2::new(0, 1)),
        ("W", Vec2::new(-1, 0)),
        ("S", Vec2::new(0, -1)),
    ];
    let mut edges = Vec::new();
    for &rep in &reps {
        if color_of(rep) != Color::White {
            continue;
        }
        for (kind, delta) in dirs {
            let (target, offset) = table.reduce(rep + delta);
            debug_assert_eq!(color_of(target), Color::Black);
            edges.push(RawEdge {
                id: format!("{kind}{}_{}", rep.x, rep.y),
                white: name(rep),
                black: name(target),
                offset: [offset.x, offset.y],
            });
        }
    }

    let edge_of = |kind: &str, v: Vec2| format!("{kind}{}_{}", v.x, v.y);
    let mut rotations = std::collections::BTreeMap::new();
    for &rep in &reps {
        if color_of(rep) == Color::White {
            rotations.insert(
                name(rep),
                dirs.iter().map(|(k, _)| edge_of(k, rep)).collect(),
            );
        } else {
            // Counterclockwise around a black node: the owning white nodes
            // sit east, north, west, south; their edge toward this node
            // points the opposite way.
            let mut seq = Vec::new();
            for (owner_kind, delta) in [
                ("W", Vec2::new(1, 0)),
                ("S", Vec2::new(0, 1)),
                ("E", Vec2::new(-1, 0)),
                ("N", Vec2::new(0, -1)),
            ] {
                let (owner, _) = table.reduce(rep + delta);
                seq.push(edge_of(owner_kind, owner));
            }
            rotations.insert(name(rep), seq);
        }
    }
    let raw = RawModel {
        nodes,
        edges,
        rotations,
    };
    Ok(DimerModel::validate(&raw).expect("square quotient is valid"))
}

/// Realizes a parallelogram toric diagram as a square dimer model by
/// searching color-preserving sublattices of index twice the area and
/// verifying the matching polygon.
pub fn hanany_vegh_parallelogram(polygon: &LatticePolygon) -> Result<DimerModel, BuildError> {
    if !polygon.is_parallelogram() {
        return Err(BuildError::NotParallelogram);
    }
    let index = polygon.double_area();
    for (b1, b2) in sublattices_of_index(index) {
        if (b1.x + b1.y) % 2 != 0 || (b2.x + b2.y) % 2 != 0 {
            continue;
        }
        let lattice = QuotientLattice::new(b1, b2).expect("enumerated basis");
        let model = build_square(lattice)?;
        let poly = pm_polygon(&model, None).expect("square quotients have matchings");
        if affine_equivalent(&poly.hull, polygon).is_some() {
            return Ok(model);
        }
    }
    Err(BuildError::SearchExhausted(index))
}
