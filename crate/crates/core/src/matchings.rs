//! Perfect matchings, their homology classes, and the matching polygon.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Color, DimerModel, EdgeIdx, NodeIdx};
use crate::lattice::{LatticePolygon, PolygonError, Vec2};

/// A perfect matching, stored as a sorted edge-index set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PerfectMatching {
    edges: Vec<EdgeIdx>,
}

impl PerfectMatching {
    pub fn edges(&self) -> &[EdgeIdx] {
        &self.edges
    }

    pub fn contains(&self, e: EdgeIdx) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Sum of edge offsets, oriented white to black.
    pub fn total_offset(&self, model: &DimerModel) -> Vec2 {
        self.edges
            .iter()
            .map(|&e| model.edges()[e.0].offset)
            .fold(Vec2::ZERO, |a, b| a + b)
    }

    pub fn edge_ids<'a>(&self, model: &'a DimerModel) -> Vec<&'a str> {
        self.edges
            .iter()
            .map(|&e| model.edges()[e.0].id.as_str())
            .collect()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("model has no perfect matching")]
    NoPerfectMatching,
    #[error("matching polygon is degenerate (all classes on a point or line)")]
    DegeneratePolygon,
    #[error("polygon vertex {0} carries {1} perfect matchings; extremal matching not unique")]
    NonUniqueExtremal(Vec2, usize),
}

impl From<PolygonError> for MatchingError {
    fn from(_: PolygonError) -> Self {
        MatchingError::DegeneratePolygon
    }
}

/// Exhaustive enumeration of all perfect matchings, deterministically
/// ordered (lexicographically by sorted edge indices).
///
/// Backtracking covers one node at a time, always branching on an uncovered
/// node of minimum remaining choice; models at desk scale stay tiny.
pub fn enumerate_pms(model: &DimerModel) -> Vec<PerfectMatching> {
    let n = model.node_count();
    let whites = model
        .nodes()
        .iter()
        .filter(|x| x.color == Color::White)
        .count();
    if whites * 2 != n {
        return Vec::new();
    }
    let mut covered = vec![false; n];
    let mut chosen: Vec<EdgeIdx> = Vec::with_capacity(n / 2);
    let mut out: Vec<PerfectMatching> = Vec::new();
    backtrack(model, &mut covered, &mut chosen, &mut out);
    out.iter_mut().for_each(|m| m.edges.sort());
    out.sort();
    out
}

fn backtrack(
    model: &DimerModel,
    covered: &mut Vec<bool>,
    chosen: &mut Vec<EdgeIdx>,
    out: &mut Vec<PerfectMatching>,
) {
    // Pick the uncovered node with the fewest available edges.
    let mut best: Option<(usize, NodeIdx)> = None;
    for v in 0..model.node_count() {
        if covered[v] {
            continue;
        }
        let avail = model
            .rotation(NodeIdx(v))
            .iter()
            .filter(|&&e| {
                let edge = &model.edges()[e.0];
                !covered[edge.white.0] && !covered[edge.black.0]
            })
            .count();
        if best.is_none_or(|(c, _)| avail < c) {
            best = Some((avail, NodeIdx(v)));
        }
        if avail == 0 {
            break;
        }
    }
    let Some((avail, v)) = best else {
        out.push(PerfectMatching {
            edges: chosen.clone(),
        });
        return;
    };
    if avail == 0 {
        return;
    }
    let candidates: Vec<EdgeIdx> = model
        .rotation(v)
        .iter()
        .copied()
        .filter(|&e| {
            let edge = &model.edges()[e.0];
            !covered[edge.white.0] && !covered[edge.black.0]
        })
        .collect();
    for e in candidates {
        let edge = &model.edges()[e.0];
        covered[edge.white.0] = true;
        covered[edge.black.0] = true;
        chosen.push(e);
        backtrack(model, covered, chosen, out);
        chosen.pop();
        covered[edge.white.0] = false;
        covered[edge.black.0] = false;
    }
}

/// Homology class of the 1-cycle `P - P0` (P-edges oriented white to black,
/// P0-edges black to white).
pub fn pm_homology(model: &DimerModel, p: &PerfectMatching, p0: &PerfectMatching) -> Vec2 {
    p.total_offset(model) - p0.total_offset(model)
}

/// The matching polygon of a model: every matching's homology class
/// relative to a base matching, with multiplicities, plus the convex hull.
#[derive(Debug, Clone)]
pub struct PmPolygon {
    pub matchings: Vec<PerfectMatching>,
    /// Index into `matchings` of the base matching `P0`.
    pub base: usize,
    /// Lattice point -> indices of the matchings at that class.
    pub points: BTreeMap<Vec2, Vec<usize>>,
    pub hull: LatticePolygon,
}

impl PmPolygon {
    pub fn multiplicity(&self, p: Vec2) -> usize {
        self.points.get(&p).map_or(0, |v| v.len())
    }

    /// One `(vertex, matching)` pair per hull vertex, in counterclockwise
    /// order starting from the lexicographically least vertex.
    pub fn extremal(&self) -> Result<Vec<(Vec2, &PerfectMatching)>, MatchingError> {
        let mut out = Vec::new();
        for &v in self.hull.vertices() {
            let ids = &self.points[&v];
            if ids.len() != 1 {
                return Err(MatchingError::NonUniqueExtremal(v, ids.len()));
            }
            out.push((v, &self.matchings[ids[0]]));
        }
        Ok(out)
    }
}

/// Computes the matching polygon. With `pm0 = None` the base matching is
/// the lexicographically least one; any other choice translates all points
/// by a constant vector.
pub fn pm_polygon(
    model: &DimerModel,
    pm0: Option<&PerfectMatching>,
) -> Result<PmPolygon, MatchingError> {
    let matchings = enumerate_pms(model);
    if matchings.is_empty() {
        return Err(MatchingError::NoPerfectMatching);
    }
    let base = match pm0 {
        None => 0,
        Some(p) => matchings
            .iter()
            .position(|m| m == p)
            .ok_or(MatchingError::NoPerfectMatching)?,
    };
    let base_off = matchings[base].total_offset(model);
    let mut points: BTreeMap<Vec2, Vec<usize>> = BTreeMap::new();
    for (i, m) in matchings.iter().enumerate() {
        points
            .entry(m.total_offset(model) - base_off)
            .or_default()
            .push(i);
    }
    let pts: Vec<Vec2> = points.keys().copied().collect();
    let hull = LatticePolygon::hull_of(&pts)?;
    Ok(PmPolygon {
        matchings,
        base,
        points,
        hull,
    })
}

/// Extremal matchings in counterclockwise cyclic order around the polygon.
pub fn extremal_pms(
    model: &DimerModel,
) -> Result<Vec<(Vec2, PerfectMatching)>, MatchingError> {
    let poly = pm_polygon(model, None)?;
    let ext = poly.extremal()?;
    Ok(ext.into_iter().map(|(v, m)| (v, m.clone())).collect())
}

/// Edges that lie in no perfect matching; empty for consistent models.
pub fn edge_coverage(model: &DimerModel) -> Vec<EdgeIdx> {
    let matchings = enumerate_pms(model);
    (0..model.edge_count())
        .map(EdgeIdx)
        .filter(|&e| !matchings.iter().any(|m| m.contains(e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::DimerModel;

    #[test]
    fn square2x2_has_eight_matchings() {
        let m = fixtures::square2x2();
        let pms = enumerate_pms(&m);
        assert_eq!(pms.len(), 8);
        for p in &pms {
            assert_eq!(p.edges().len(), m.node_count() / 2);
        }
        // Duplicate-free.
        let mut sorted = pms.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), 8);
    }

    #[test]
    fn hex1_has_three_matchings() {
        let m = fixtures::hex1();
        let pms = enumerate_pms(&m);
        assert_eq!(pms.len(), 3);
        for p in &pms {
            assert_eq!(p.edges().len(), 1);
        }
    }

    #[test]
    fn pm_homology_antisymmetric_and_cocycle() {
        let m = fixtures::square2x2();
        let pms = enumerate_pms(&m);
        for p in &pms {
            assert_eq!(pm_homology(&m, p, p), Vec2::ZERO);
        }
        for a in &pms {
            for b in &pms {
                assert_eq!(pm_homology(&m, a, b), -pm_homology(&m, b, a));
                for c in &pms {
                    assert_eq!(
                        pm_homology(&m, a, c),
                        pm_homology(&m, a, b) + pm_homology(&m, b, c)
                    );
                }
            }
        }
    }

    #[test]
    fn square2x2_polygon() {
        let m = fixtures::square2x2();
        let poly = pm_polygon(&m, None).unwrap();
        let expected = LatticePolygon::hull_of(&[
            Vec2::new(1, 0),
            Vec2::new(0, 1),
            Vec2::new(-1, 0),
            Vec2::new(0, -1),
        ])
        .unwrap();
        assert_eq!(poly.hull, expected);
        assert_eq!(poly.multiplicity(Vec2::ZERO), 4);
        for &v in poly.hull.vertices() {
            assert_eq!(poly.multiplicity(v), 1);
        }
        let total: usize = poly.points.values().map(|v| v.len()).sum();
        assert_eq!(total, 8);
    }

    #[test]
    fn polygon_translation_equivariant() {
        let m = fixtures::square2x2();
        let pms = enumerate_pms(&m);
        let base = pm_polygon(&m, None).unwrap();
        for p in &pms {
            let shifted = pm_polygon(&m, Some(p)).unwrap();
            let delta = pm_homology(&m, &pms[0], p);
            let moved: Vec<Vec2> = base.points.keys().map(|&q| q + delta).collect();
            let mut expect: Vec<Vec2> = shifted.points.keys().copied().collect();
            let mut moved = moved;
            moved.sort();
            expect.sort();
            assert_eq!(moved, expect);
        }
    }

    #[test]
    fn hex1_polygon_unit_triangle() {
        let m = fixtures::hex1();
        let poly = pm_polygon(&m, None).unwrap();
        assert_eq!(poly.hull.vertices().len(), 3);
        assert_eq!(poly.hull.double_area(), 1);
        assert_eq!(poly.points.len(), 3);
    }

    #[test]
    fn square2x2_extremal_matchings() {
        let m = fixtures::square2x2();
        let ext = extremal_pms(&m).unwrap();
        assert_eq!(ext.len(), 4);
        // Counterclockwise from the lexicographically least vertex.
        let verts: Vec<Vec2> = ext.iter().map(|(v, _)| *v).collect();
        assert_eq!(
            verts,
            vec![
                Vec2::new(-1, 0),
                Vec2::new(0, -1),
                Vec2::new(1, 0),
                Vec2::new(0, 1)
            ]
        );
        let id_sets: Vec<Vec<&str>> = ext.iter().map(|(_, p)| p.edge_ids(&m)).collect();
        assert_eq!(id_sets[0], vec!["e0", "e7"]);
        assert_eq!(id_sets[1], vec!["e3", "e6"]);
        assert_eq!(id_sets[2], vec!["e2", "e4"]);
        assert_eq!(id_sets[3], vec!["e1", "e5"]);
    }

    #[test]
    fn coverage_complete_on_fixtures() {
        assert!(edge_coverage(&fixtures::square2x2()).is_empty());
        assert!(edge_coverage(&fixtures::hex1()).is_empty());
    }

    /// A model whose structure forces two edges out of every matching:
    /// b0's only neighbor is w0, so the spurs c and t can never be used.
    pub(crate) fn forced_pattern_model() -> DimerModel {
        let text = r#"{
            "nodes": [
                {"id":"w0","color":"white"},{"id":"w1","color":"white"},
                {"id":"w2","color":"white"},{"id":"b0","color":"black"},
                {"id":"b1","color":"black"},{"id":"b2","color":"black"}
            ],
            "edges": [
                {"id":"a1","white":"w0","black":"b0","offset":[0,0]},
                {"id":"a2","white":"w0","black":"b0","offset":[1,0]},
                {"id":"c","white":"w0","black":"b1","offset":[0,0]},
                {"id":"t","white":"w0","black":"b2","offset":[0,0]},
                {"id":"p","white":"w1","black":"b1","offset":[0,0]},
                {"id":"q","white":"w1","black":"b2","offset":[-1,0]},
                {"id":"r","white":"w2","black":"b1","offset":[0,0]},
                {"id":"s","white":"w2","black":"b2","offset":[0,0]}
            ],
            "rotations": {
                "w0": ["a1","c","a2","t"],
                "b0": ["a1","a2"],
                "b1": ["c","p","r"],
                "b2": ["t","q","s"],
                "w1": ["p","q"],
                "w2": ["r","s"]
            }
        }"#;
        DimerModel::from_json(text).expect("constructed fixture validates")
    }

    #[test]
    fn forced_pattern_leaves_edges_uncovered() {
        let m = forced_pattern_model();
        let uncovered = edge_coverage(&m);
        let ids: Vec<&str> = uncovered
            .iter()
            .map(|&e| m.edges()[e.0].id.as_str())
            .collect();
        assert_eq!(ids, vec!["c", "t"]);
        assert_eq!(enumerate_pms(&m).len(), 4);
    }

    #[test]
    fn degenerate_polygon_flagged() {
        // All matching classes of the forced-pattern model are collinear.
        let m = forced_pattern_model();
        assert_eq!(
            pm_polygon(&m, None).err(),
            Some(MatchingError::DegeneratePolygon)
        );
    }

    #[test]
    fn non_unique_extremal_flagged() {
        // Error-path contract: a hull vertex carrying two matchings.
        let m = fixtures::square2x2();
        let mut poly = pm_polygon(&m, None).unwrap();
        let v = *poly.hull.vertices().first().unwrap();
        poly.points.get_mut(&v).unwrap().push(0);
        assert_eq!(
            poly.extremal().err(),
            Some(MatchingError::NonUniqueExtremal(v, 2))
        );
    }

    #[test]
    fn bivalent_removal_preserves_polygon() {
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
        let reduced = m.remove_bivalent().unwrap();
        let before = pm_polygon(&m, None).unwrap();
        let after = pm_polygon(&reduced, None).unwrap();
        assert!(
            crate::lattice::affine_equivalent(&before.hull, &after.hull).is_some()
        );
    }

    #[test]
    fn unbalanced_colors_no_matchings() {
        // Valid torus model with one white and two black nodes cannot have
        // a perfect matching; enumeration must return an empty list.
        let text = r#"{
            "nodes": [
                {"id":"w","color":"white"},
                {"id":"b0","color":"black"},{"id":"b1","color":"black"}
            ],
            "edges": [
                {"id":"a","white":"w","black":"b0","offset":[0,0]},
                {"id":"b","white":"w","black":"b0","offset":[1,0]},
                {"id":"c","white":"w","black":"b1","offset":[0,0]},
                {"id":"d","white":"w","black":"b1","offset":[0,1]}
            ],
            "rotations": {
                "w": ["a","c","b","d"],
                "b0": ["a","b"],
                "b1": ["c","d"]
            }
        }"#;
        let m = DimerModel::from_json(text).expect("valid model");
        assert!(enumerate_pms(&m).is_empty());
        assert_eq!(edge_coverage(&m).len(), 4);
    }
}
