//! Divisor class groups of the Gorenstein toric singularity attached to a
//! lattice polygon, and class arithmetic of divisorial ideals.
//!
//! The cone over the polygon at height one has one ray per polygon vertex;
//! a divisorial ideal is labeled by a vector `u` with one entry per ray,
//! two labels giving isomorphic ideals exactly when their difference lies
//! in the image of the ray-pairing map.

use thiserror::Error;

use crate::lattice::{cokernel, AbelianGroup, GroupElement, IntMatrix, LatticePolygon};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ToricError {
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Cone and class-group data for a lattice polygon.
#[derive(Debug, Clone)]
pub struct ToricData {
    pub polygon: LatticePolygon,
    /// Rays `(vertex, 1)` in the polygon's counterclockwise vertex order.
    pub rays: Vec<[i64; 3]>,
    /// Row `i` is the ray `v_i`; the pairing sends `y` to `(⟨y, v_i⟩)_i`.
    pub lambda: IntMatrix,
    pub class_group: AbelianGroup,
}

/// The class of a divisorial ideal. Equality, ordering and hashing go
/// through the canonical class-group coordinates only; the representative
/// label is carried along for reporting.
#[derive(Debug, Clone)]
pub struct DivClass {
    pub repr: Vec<i64>,
    pub coords: GroupElement,
}

impl PartialEq for DivClass {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for DivClass {}

impl PartialOrd for DivClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DivClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl std::hash::Hash for DivClass {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl ToricData {
    pub fn from_polygon(polygon: LatticePolygon) -> ToricData {
        let rays: Vec<[i64; 3]> = polygon
            .vertices()
            .iter()
            .map(|v| [v.x, v.y, 1])
            .collect();
        let lambda = IntMatrix::from_rows(
            &rays.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
        );
        let class_group = cokernel(&lambda);
        ToricData {
            polygon,
            rays,
            lambda,
            class_group,
        }
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn class_of(&self, u: &[i64]) -> Result<DivClass, ToricError> {
        if u.len() != self.ray_count() {
            return Err(ToricError::DimensionMismatch {
                expected: self.ray_count(),
                got: u.len(),
            });
        }
        Ok(DivClass {
            repr: u.to_vec(),
            coords: self.class_group.project(u),
        })
    }

    pub fn identity_class(&self) -> DivClass {
        self.class_of(&vec![0; self.ray_count()]).unwrap()
    }

    /// Two labels give isomorphic ideals iff their difference is a value of
    /// the ray pairing.
    pub fn is_isomorphic(&self, u: &[i64], v: &[i64]) -> Result<bool, ToricError> {
        let cu = self.class_of(u)?;
        let cv = self.class_of(v)?;
        Ok(cu == cv)
    }

    /// Class of the dual ideal: negation.
    pub fn dual_class(&self, c: &DivClass) -> DivClass {
        let neg: Vec<i64> = c.repr.iter().map(|x| -x).collect();
        self.class_of(&neg).unwrap()
    }

    /// Class of homomorphisms between two rank-one classes: the difference
    /// `to - from`.
    pub fn hom_class(&self, from: &DivClass, to: &DivClass) -> DivClass {
        let diff: Vec<i64> = to
            .repr
            .iter()
            .zip(&from.repr)
            .map(|(a, b)| a - b)
            .collect();
        self.class_of(&diff).unwrap()
    }

    /// Gorenstein witness: a lattice point pairing to one against every
    /// ray. For height-one cones the point `(0,0,1)` always works.
    pub fn gorenstein_witness(&self) -> Option<[i64; 3]> {
        let w = [0, 0, 1];
        if self
            .rays
            .iter()
            .all(|r| r[0] * w[0] + r[1] * w[1] + r[2] * w[2] == 1)
        {
            Some(w)
        } else {
            None
        }
    }

    pub fn is_gorenstein(&self) -> bool {
        self.gorenstein_witness().is_some()
    }

    /// Human-readable group shape, e.g. `Z x Z/2`.
    pub fn class_group_name(&self) -> String {
        let g = &self.class_group;
        let mut parts: Vec<String> = (0..g.free_rank).map(|_| "Z".to_string()).collect();
        parts.extend(g.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" x ")
        }
    }
}
