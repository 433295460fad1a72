//! The quiver with potential dual to a dimer model.
//!
//! Vertices are faces, arrows are edges oriented so the white node sits on
//! the right of the arrow, and the potential pairs each arrow into one
//! clockwise (white) and one anticlockwise (black) small cycle.

use std::collections::VecDeque;

use crate::graph::{Color, Dart, DimerModel, Dir, EdgeIdx};
use crate::lattice::Vec2;
use crate::matchings::PerfectMatching;

#[derive(Debug, Clone)]
pub struct Arrow {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    pub dual_edge: EdgeIdx,
    /// Cover translate from the tail face's copy to the head face's copy
    /// across the canonical lift of the dual edge.
    pub offset: Vec2,
}

/// Small cycles of the potential, one per dimer node; `plus` cycles are
/// dual to white nodes, `minus` cycles to black nodes.
#[derive(Debug, Clone)]
pub struct Potential {
    pub plus_cycles: Vec<Vec<usize>>,
    pub minus_cycles: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct Quiver {
    pub vertex_count: usize,
    pub arrows: Vec<Arrow>,
    out_arrows: Vec<Vec<usize>>,
}

impl Quiver {
    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn out_arrows(&self, v: usize) -> &[usize] {
        &self.out_arrows[v]
    }

    /// All arrows reversed, offsets negated.
    pub fn opposite(&self) -> Quiver {
        let arrows: Vec<Arrow> = self
            .arrows
            .iter()
            .map(|a| Arrow {
                id: a.id,
                tail: a.head,
                head: a.tail,
                dual_edge: a.dual_edge,
                offset: -a.offset,
            })
            .collect();
        let mut out_arrows = vec![Vec::new(); self.vertex_count];
        for a in &arrows {
            out_arrows[a.tail].push(a.id);
        }
        Quiver {
            vertex_count: self.vertex_count,
            arrows,
            out_arrows,
        }
    }

    /// Shortest path by breadth-first search with arrow-id tie-breaking;
    /// exists for every vertex pair by strong connectivity.
    pub fn find_path(&self, from: usize, to: usize) -> QuiverPath {
        assert!(from < self.vertex_count && to < self.vertex_count);
        let mut prev: Vec<Option<usize>> = vec![None; self.vertex_count];
        let mut seen = vec![false; self.vertex_count];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &a in &self.out_arrows[v] {
                let h = self.arrows[a].head;
                if !seen[h] {
                    seen[h] = true;
                    prev[h] = Some(a);
                    queue.push_back(h);
                }
            }
        }
        let mut steps = Vec::new();
        let mut v = to;
        while v != from {
            let a = prev[v].expect("quiver is strongly connected");
            steps.push(QuiverStep {
                arrow: a,
                forward: true,
            });
            v = self.arrows[a].tail;
        }
        steps.reverse();
        QuiverPath { tail: from, steps }
    }
}

/// One arrow use in a path of the double quiver; `forward: false` denotes
/// the formally reversed arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuiverStep {
    pub arrow: usize,
    pub forward: bool,
}

/// A composable arrow sequence (left to right: first step first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverPath {
    pub tail: usize,
    pub steps: Vec<QuiverStep>,
}

impl QuiverPath {
    pub fn trivial(vertex: usize) -> Self {
        QuiverPath {
            tail: vertex,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn head(&self, q: &Quiver) -> usize {
        self.steps.iter().fold(self.tail, |v, s| {
            let a = &q.arrows[s.arrow];
            if s.forward {
                debug_assert_eq!(a.tail, v);
                a.head
            } else {
                debug_assert_eq!(a.head, v);
                a.tail
            }
        })
    }

    /// The path followed by its formal reverse.
    pub fn with_formal_reverse(&self) -> QuiverPath {
        let mut steps = self.steps.clone();
        steps.extend(self.steps.iter().rev().map(|s| QuiverStep {
            arrow: s.arrow,
            forward: !s.forward,
        }));
        QuiverPath {
            tail: self.tail,
            steps,
        }
    }
}

/// Builds the dual quiver and its potential. The model must have no
/// bivalent nodes.
pub fn dualize(model: &DimerModel) -> (Quiver, Potential) {
    assert!(
        !model.has_bivalent_nodes(),
        "remove bivalent nodes before dualizing"
    );
    let mut arrows = Vec::with_capacity(model.edge_count());
    for e in 0..model.edge_count() {
        let e = EdgeIdx(e);
        let to_black = Dart::new(e, Dir::WhiteToBlack);
        let to_white = Dart::new(e, Dir::BlackToWhite);
        // The face right of the black-to-white dart is the tail; crossing
        // the edge with white on the right lands in the head face.
        let tail = model.face_of_dart(to_white);
        let head = model.face_of_dart(to_black);
        let offset = model.dart_face_translate(to_white) - model.dart_face_translate(to_black);
        arrows.push(Arrow {
            id: e.0,
            tail,
            head,
            dual_edge: e,
            offset,
        });
    }
    let mut out_arrows = vec![Vec::new(); model.face_count()];
    for a in &arrows {
        out_arrows[a.tail].push(a.id);
    }

    let cycle_at = |v: usize, clockwise: bool| -> Vec<usize> {
        let rot = model.rotation(crate::graph::NodeIdx(v));
        let seq: Vec<usize> = if clockwise {
            rot.iter().rev().map(|e| e.0).collect()
        } else {
            rot.iter().map(|e| e.0).collect()
        };
        // Start at the smallest arrow id for determinism.
        let k = seq
            .iter()
            .enumerate()
            .min_by_key(|(_, &a)| a)
            .map(|(i, _)| i)
            .unwrap();
        (0..seq.len()).map(|i| seq[(k + i) % seq.len()]).collect()
    };
    let mut plus_cycles = Vec::new();
    let mut minus_cycles = Vec::new();
    for (v, node) in model.nodes().iter().enumerate() {
        match node.color {
            Color::White => plus_cycles.push(cycle_at(v, true)),
            Color::Black => minus_cycles.push(cycle_at(v, false)),
        }
    }

    let quiver = Quiver {
        vertex_count: model.face_count(),
        arrows,
        out_arrows,
    };
    // Small cycles must compose and close; failure is an internal bug.
    for cyc in plus_cycles.iter().chain(&minus_cycles) {
        for i in 0..cyc.len() {
            let a = &quiver.arrows[cyc[i]];
            let b = &quiver.arrows[cyc[(i + 1) % cyc.len()]];
            assert_eq!(a.head, b.tail, "small cycle does not compose");
        }
        let h: Vec2 = cyc
            .iter()
            .map(|&a| quiver.arrows[a].offset)
            .fold(Vec2::ZERO, |s, o| s + o);
        assert!(h.is_zero(), "small cycle has nonzero homology");
    }
    (
        quiver,
        Potential {
            plus_cycles,
            minus_cycles,
        },
    )
}

/// Perfect-matching evaluation of a path in the double quiver: each forward
/// arrow contributes 1 when its dual edge is matched, each reversed arrow
/// the negative.
pub fn evaluate_pm(q: &Quiver, path: &QuiverPath, pm: &PerfectMatching) -> i64 {
    path.steps
        .iter()
        .map(|s| {
            let hit = pm.contains(q.arrows[s.arrow].dual_edge);
            match (hit, s.forward) {
                (false, _) => 0,
                (true, true) => 1,
                (true, false) => -1,
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matchings::enumerate_pms;

    #[test]
    fn square2x2_dual_counts() {
        let m = fixtures::square2x2();
        let (q, w) = dualize(&m);
        assert_eq!(q.vertex_count, 4);
        assert_eq!(q.arrow_count(), 8);
        assert_eq!(w.plus_cycles.len(), 2);
        assert_eq!(w.minus_cycles.len(), 2);
        // Two arrows between each pair of adjacent faces, and the degree
        // profile of the quiver in the associated figure: every vertex has
        // out-degree 2 and in-degree 2.
        for v in 0..4 {
            assert_eq!(q.out_arrows(v).len(), 2);
        }
    }

    #[test]
    fn hex1_dual_is_three_loops() {
        let m = fixtures::hex1();
        let (q, w) = dualize(&m);
        assert_eq!(q.vertex_count, 1);
        assert_eq!(q.arrow_count(), 3);
        for a in &q.arrows {
            assert_eq!(a.tail, a.head);
        }
        assert_eq!(w.plus_cycles.len(), 1);
        assert_eq!(w.minus_cycles.len(), 1);
        assert_eq!(w.plus_cycles[0].len(), 3);
    }

    #[test]
    fn every_arrow_in_one_plus_one_minus_cycle() {
        for m in [fixtures::square2x2(), fixtures::hex1(), fixtures::ex52_nonregular()] {
            let (q, w) = dualize(&m);
            for a in 0..q.arrow_count() {
                let plus = w.plus_cycles.iter().filter(|c| c.contains(&a)).count();
                let minus = w.minus_cycles.iter().filter(|c| c.contains(&a)).count();
                assert_eq!((plus, minus), (1, 1));
            }
        }
    }

    #[test]
    fn opposite_involution() {
        let m = fixtures::square2x2();
        let (q, _) = dualize(&m);
        let qq = q.opposite().opposite();
        for (a, b) in q.arrows.iter().zip(&qq.arrows) {
            assert_eq!((a.tail, a.head, a.offset), (b.tail, b.head, b.offset));
        }
    }

    #[test]
    fn color_swap_dualizes_to_opposite() {
        for m in [fixtures::square2x2(), fixtures::hex1()] {
            let (q, _) = dualize(&m);
            let (q_sw, _) = dualize(&m.color_swapped());
            let op = q.opposite();
            // Faces keep their boundary edge sets under a color swap; match
            // them to compare arrows face-by-face.
            let face_map = face_correspondence(&m, &m.color_swapped());
            for (a, b) in op.arrows.iter().zip(&q_sw.arrows) {
                assert_eq!(a.dual_edge, b.dual_edge);
                assert_eq!(face_map[a.tail], b.tail);
                assert_eq!(face_map[a.head], b.head);
            }
        }
    }

    fn face_correspondence(
        a: &crate::graph::DimerModel,
        b: &crate::graph::DimerModel,
    ) -> Vec<usize> {
        a.faces()
            .iter()
            .map(|f| {
                let ea = f.edge_set();
                b.faces()
                    .iter()
                    .position(|g| g.edge_set() == ea)
                    .expect("color swap preserves face boundaries")
            })
            .collect()
    }

    #[test]
    fn bfs_paths() {
        let m = fixtures::square2x2();
        let (q, _) = dualize(&m);
        for v in 0..q.vertex_count {
            assert_eq!(q.find_path(v, v), QuiverPath::trivial(v));
            for w in 0..q.vertex_count {
                let p = q.find_path(v, w);
                assert_eq!(p.tail, v);
                assert_eq!(p.head(&q), w);
            }
        }
        let (qh, _) = dualize(&fixtures::hex1());
        assert_eq!(qh.find_path(0, 0).len(), 0);
    }

    #[test]
    fn small_cycles_evaluate_to_one() {
        let m = fixtures::square2x2();
        let (q, w) = dualize(&m);
        let pms = enumerate_pms(&m);
        assert_eq!(pms.len(), 8);
        for cyc in w.plus_cycles.iter().chain(&w.minus_cycles) {
            for pm in &pms {
                let path = QuiverPath {
                    tail: q.arrows[cyc[0]].tail,
                    steps: cyc
                        .iter()
                        .map(|&a| QuiverStep {
                            arrow: a,
                            forward: true,
                        })
                        .collect(),
                };
                assert_eq!(evaluate_pm(&q, &path, pm), 1);
            }
        }
    }

    #[test]
    fn trivial_and_cancelling_paths() {
        let m = fixtures::square2x2();
        let (q, _) = dualize(&m);
        let pms = enumerate_pms(&m);
        let trivial = QuiverPath::trivial(0);
        assert_eq!(evaluate_pm(&q, &trivial, &pms[0]), 0);
        let p = q.find_path(0, 2);
        let back_and_forth = p.with_formal_reverse();
        for pm in &pms {
            assert_eq!(evaluate_pm(&q, &back_and_forth, pm), 0);
        }
    }
}
