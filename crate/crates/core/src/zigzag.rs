//! Zigzag paths and the consistency-tier predicates.
//!
//! A zigzag path turns maximally right at white nodes and maximally left at
//! black nodes. In rotation-system terms, arriving at a white node the path
//! continues with the next edge counterclockwise, at a black node with the
//! next edge clockwise; the directed edge uses then partition the darts of
//! the model.
//!
//! Universal-cover intersection tests never materialize the cover: a pair
//! of lifts can share an edge only at relative translates realized as
//! differences of per-use cumulative offsets on a common torus edge, and
//! translates are compared modulo the subgroup generated by the two slopes.

use std::collections::BTreeMap;

use crate::graph::{Color, Dart, DimerModel, Dir, EdgeIdx, NodeIdx};
use crate::lattice::{angle_cmp, Lattice2, Vec2};
use crate::matchings::{pm_polygon, MatchingError};

/// One directed edge use on a zigzag path, with the cover translate of the
/// edge's canonical lift at this use (first use of the period at zero).
#[derive(Debug, Clone, Copy)]
pub struct ZigzagUse {
    pub dart: Dart,
    pub lift: Vec2,
}

#[derive(Debug, Clone)]
pub struct ZigzagPath {
    pub uses: Vec<ZigzagUse>,
    /// Homology class of one period; the total offset of the cycle.
    pub slope: Vec2,
}

impl ZigzagPath {
    pub fn len(&self) -> usize {
        self.uses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.uses.is_empty()
    }

    pub fn edge_ids<'a>(&self, model: &'a DimerModel) -> Vec<&'a str> {
        self.uses
            .iter()
            .map(|u| model.edges()[u.dart.edge.0].id.as_str())
            .collect()
    }
}

/// Successor dart of a zigzag walk.
fn zigzag_next(model: &DimerModel, d: Dart) -> Dart {
    let v = model.dart_target(d);
    let step = match model.nodes()[v.0].color {
        Color::White => 1,  // maximal right turn
        Color::Black => -1, // maximal left turn
    };
    let e = model.rotate_at(v, d.edge, step);
    let dir = match model.nodes()[v.0].color {
        Color::White => Dir::WhiteToBlack,
        Color::Black => Dir::BlackToWhite,
    };
    Dart::new(e, dir)
}

/// Decomposes all darts into zigzag paths. Every edge occurs in exactly two
/// uses across the decomposition (its two darts).
pub fn extract_zigzags(model: &DimerModel) -> Vec<ZigzagPath> {
    let mut assigned: std::collections::HashSet<Dart> = std::collections::HashSet::new();
    let mut paths = Vec::new();
    for e in 0..model.edge_count() {
        for dir in [Dir::WhiteToBlack, Dir::BlackToWhite] {
            let start = Dart::new(EdgeIdx(e), dir);
            if assigned.contains(&start) {
                continue;
            }
            let mut uses = Vec::new();
            let mut src_translate = Vec2::ZERO;
            let mut d = start;
            loop {
                let off = model.edges()[d.edge.0].offset;
                let (lift, next_src) = match d.dir {
                    Dir::WhiteToBlack => (src_translate, src_translate + off),
                    Dir::BlackToWhite => (src_translate - off, src_translate - off),
                };
                uses.push(ZigzagUse { dart: d, lift });
                assigned.insert(d);
                src_translate = next_src;
                d = zigzag_next(model, d);
                if d == start {
                    break;
                }
            }
            paths.push(ZigzagPath {
                uses,
                slope: src_translate,
            });
        }
    }
    paths
}

/// One shared torus edge between two zigzag uses, i.e. one family of shared
/// lifted edges of a lift pair.
#[derive(Debug, Clone, Copy)]
pub struct Share {
    pub edge: EdgeIdx,
    pub z_use: usize,
    pub w_use: usize,
    /// +1 when the first path of the pair traverses the edge white to black.
    pub sign: i8,
    /// Traversal times along the two lifts (meaningful for independent
    /// slopes, where every share is a single cover edge).
    pub z_time: i64,
    pub w_time: i64,
}

/// All shared lifted edges of one pair of lifts, up to common translation.
#[derive(Debug, Clone)]
pub struct LiftPair {
    pub z: usize,
    pub w: usize,
    /// Canonical representative of the relative translate modulo
    /// `Z[z] + Z[w]` (and modulo sign for self pairs).
    pub translate: Vec2,
    /// Slopes linearly dependent (includes all self pairs).
    pub dependent: bool,
    /// For dependent pairs: both lifts traversed in the same sense.
    pub same_direction: bool,
    /// Shares in increasing order along `z`.
    pub shares: Vec<Share>,
    /// For independent pairs with >= 2 shares: order along `w` is exactly
    /// reversed.
    pub order_reversed: bool,
}

#[derive(Debug, Clone)]
pub struct LiftReport {
    pub zigzags: Vec<ZigzagPath>,
    /// Paths with slope zero.
    pub trivial_paths: Vec<usize>,
    /// `(path, use, use)` pairs lying on the same lifted edge.
    pub self_intersections: Vec<(usize, usize, usize)>,
    pub pairs: Vec<LiftPair>,
}

impl LiftReport {
    /// Shares between the two paths across all lift pairs.
    pub fn total_shares(&self, z: usize, w: usize) -> usize {
        self.pairs
            .iter()
            .filter(|p| (p.z, p.w) == (z.min(w), z.max(w)))
            .map(|p| p.shares.len())
            .sum()
    }
}

pub fn lift_report(model: &DimerModel) -> LiftReport {
    let zigzags = extract_zigzags(model);
    let trivial_paths: Vec<usize> = zigzags
        .iter()
        .enumerate()
        .filter(|(_, z)| z.slope.is_zero())
        .map(|(i, _)| i)
        .collect();

    // Uses indexed per edge for pair discovery.
    let mut by_edge: BTreeMap<EdgeIdx, Vec<(usize, usize)>> = BTreeMap::new();
    for (zi, z) in zigzags.iter().enumerate() {
        for (ui, u) in z.uses.iter().enumerate() {
            by_edge.entry(u.dart.edge).or_default().push((zi, ui));
        }
    }

    let mut self_intersections = Vec::new();
    let mut grouped: BTreeMap<(usize, usize, Vec2), Vec<Share>> = BTreeMap::new();

    for (&edge, users) in &by_edge {
        // Each edge carries exactly its two darts.
        for a in 0..users.len() {
            for b in (a + 1)..users.len() {
                let (za, ua) = users[a];
                let (zb, ub) = users[b];
                let (z, uz, w, uw) = if za <= zb {
                    (za, ua, zb, ub)
                } else {
                    (zb, ub, za, ua)
                };
                let lz = zigzags[z].uses[uz].lift;
                let lw = zigzags[w].uses[uw].lift;
                let lat = Lattice2::from_generators(zigzags[z].slope, zigzags[w].slope);
                let tau_raw = lz - lw;
                let tau = lat.reduce(tau_raw);
                if z == w && tau.is_zero() {
                    self_intersections.push((z, uz.min(uw), uz.max(uw)));
                    continue;
                }
                // Self pairs: (lift, lift+tau) and (lift, lift-tau) are the
                // same unordered pair.
                let tau = if z == w {
                    let alt = lat.reduce(-tau_raw);
                    tau.min(alt)
                } else {
                    tau
                };
                let sign = match zigzags[z].uses[uz].dart.dir {
                    Dir::WhiteToBlack => 1,
                    Dir::BlackToWhite => -1,
                };
                grouped.entry((z, w, tau)).or_default().push(Share {
                    edge,
                    z_use: uz,
                    w_use: uw,
                    sign,
                    z_time: 0,
                    w_time: 0,
                });
            }
        }
    }

    let mut pairs = Vec::new();
    for ((z, w, tau), mut shares) in grouped {
        let sz = zigzags[z].slope;
        let sw = zigzags[w].slope;
        let dependent = sz.cross(sw) == 0;
        let same_direction = if z == w {
            true
        } else if dependent && !sz.is_zero() && !sw.is_zero() {
            let d = sz.primitive();
            let coeff = |v: Vec2| if d.x != 0 { v.x / d.x } else { v.y / d.y };
            coeff(sz) > 0 && coeff(sw) > 0 || coeff(sz) < 0 && coeff(sw) < 0
        } else {
            // A zero slope is already a consistency violation on its own.
            true
        };
        let mut order_reversed = true;
        if !dependent {
            // Every share is one cover edge: solve a*[z] - b*[w] = tau - tau_raw
            // and read off traversal times.
            for s in &mut shares {
                let lz = zigzags[z].uses[s.z_use].lift;
                let lw = zigzags[w].uses[s.w_use].lift;
                let rhs = tau - (lz - lw);
                let det = -sz.cross(sw);
                let a_num = rhs.x * (-sw.y) - (-sw.x) * rhs.y;
                let b_num = sz.x * rhs.y - sz.y * rhs.x;
                debug_assert_eq!(a_num % det, 0);
                debug_assert_eq!(b_num % det, 0);
                let a = a_num / det;
                let b = b_num / det;
                s.z_time = s.z_use as i64 + a * zigzags[z].len() as i64;
                s.w_time = s.w_use as i64 + b * zigzags[w].len() as i64;
            }
            shares.sort_by_key(|s| s.z_time);
            order_reversed = shares.windows(2).all(|p| p[0].w_time > p[1].w_time);
        }
        pairs.push(LiftPair {
            z,
            w,
            translate: tau,
            dependent,
            same_direction,
            shares,
            order_reversed,
        });
    }

    LiftReport {
        zigzags,
        trivial_paths,
        self_intersections,
        pairs,
    }
}

/// Outcome of a predicate together with the first violation found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateReport {
    pub holds: bool,
    pub violation: Option<String>,
}

impl PredicateReport {
    fn ok() -> Self {
        PredicateReport {
            holds: true,
            violation: None,
        }
    }

    fn fail(msg: String) -> Self {
        PredicateReport {
            holds: false,
            violation: Some(msg),
        }
    }
}

/// Consistency: no trivial zigzag, no lift self-intersection, and no pair
/// of lifts intersecting in the same direction more than once.
pub fn is_consistent(model: &DimerModel) -> PredicateReport {
    let report = lift_report(model);
    consistency_from_report(model, &report)
}

pub fn consistency_from_report(model: &DimerModel, report: &LiftReport) -> PredicateReport {
    if let Some(&z) = report.trivial_paths.first() {
        return PredicateReport::fail(format!(
            "condition (1): zigzag path {} is homologically trivial (edges {:?})",
            z,
            report.zigzags[z].edge_ids(model)
        ));
    }
    if let Some(&(z, a, b)) = report.self_intersections.first() {
        let e = report.zigzags[z].uses[a].dart.edge;
        return PredicateReport::fail(format!(
            "condition (2): zigzag path {z} self-intersects on the universal cover at edge {} (uses {a}, {b})",
            model.edges()[e.0].id
        ));
    }
    for p in &report.pairs {
        if p.dependent {
            if p.same_direction && !p.shares.is_empty() {
                let e = p.shares[0].edge;
                return PredicateReport::fail(format!(
                    "condition (3): lifts of paths {} and {} run in the same direction and share edge {} (translate {})",
                    p.z, p.w, model.edges()[e.0].id, p.translate
                ));
            }
        } else if p.shares.len() >= 2 && !p.order_reversed {
            let ids: Vec<&str> = p
                .shares
                .iter()
                .map(|s| model.edges()[s.edge.0].id.as_str())
                .collect();
            return PredicateReport::fail(format!(
                "condition (3): lifts of paths {} and {} (translate {}) intersect in the same direction more than once (edges {:?})",
                p.z, p.w, p.translate, ids
            ));
        }
    }
    PredicateReport::ok()
}

/// Isoradiality report; the predicate is computed even when the model is
/// inconsistent, with the consistency verdict attached as an advisory.
#[derive(Debug, Clone)]
pub struct IsoradialReport {
    pub holds: bool,
    pub violation: Option<String>,
    pub consistent: bool,
}

/// Isoradial: no self-intersection; independent-slope lift pairs share
/// exactly one edge; dependent-slope lift pairs share none.
pub fn is_isoradial(model: &DimerModel) -> IsoradialReport {
    let report = lift_report(model);
    let consistent = consistency_from_report(model, &report).holds;
    let inner = isoradial_from_report(model, &report);
    IsoradialReport {
        holds: inner.holds,
        violation: inner.violation,
        consistent,
    }
}

pub fn isoradial_from_report(model: &DimerModel, report: &LiftReport) -> PredicateReport {
    if let Some(&(z, a, _)) = report.self_intersections.first() {
        let e = report.zigzags[z].uses[a].dart.edge;
        return PredicateReport::fail(format!(
            "zigzag path {z} self-intersects on the universal cover at edge {}",
            model.edges()[e.0].id
        ));
    }
    for p in &report.pairs {
        if p.dependent && !p.shares.is_empty() {
            let e = p.shares[0].edge;
            return PredicateReport::fail(format!(
                "lifts of paths {} and {} have dependent slopes but share edge {}",
                p.z,
                p.w,
                model.edges()[e.0].id
            ));
        }
        if !p.dependent && p.shares.len() != 1 {
            return PredicateReport::fail(format!(
                "lift pair of paths {} and {} (translate {}) shares {} edges, expected exactly 1",
                p.z,
                p.w,
                p.translate,
                p.shares.len()
            ));
        }
    }
    // Independent pairs must cover every relative translate class.
    let n = report.zigzags.len();
    for z in 0..n {
        for w in z..n {
            let sz = report.zigzags[z].slope;
            let sw = report.zigzags[w].slope;
            if sz.cross(sw) == 0 {
                continue;
            }
            let classes = report
                .pairs
                .iter()
                .filter(|p| (p.z, p.w) == (z, w))
                .count() as i64;
            let index = sz.cross(sw).abs();
            if classes != index {
                return PredicateReport::fail(format!(
                    "paths {z} and {w}: only {classes} of {index} lift pairs share an edge"
                ));
            }
        }
    }
    PredicateReport::ok()
}

/// Properly ordered: nonzero slopes, no lift self-intersection, same-slope
/// paths node-disjoint, and at every node the cyclic order of transiting
/// zigzag paths agrees with the counterclockwise order of their slopes.
pub fn is_properly_ordered(model: &DimerModel) -> PredicateReport {
    let report = lift_report(model);
    if let Some(&z) = report.trivial_paths.first() {
        return PredicateReport::fail(format!(
            "condition (1): zigzag path {z} is homologically trivial"
        ));
    }
    if let Some(&(z, a, b)) = report.self_intersections.first() {
        let e = report.zigzags[z].uses[a].dart.edge;
        return PredicateReport::fail(format!(
            "condition (2): zigzag path {z} self-intersects on the universal cover at edge {} (uses {a}, {b})",
            model.edges()[e.0].id
        ));
    }

    let zz = &report.zigzags;
    // Node sets per path for the same-slope condition.
    let node_set = |z: &ZigzagPath| -> std::collections::BTreeSet<NodeIdx> {
        z.uses
            .iter()
            .flat_map(|u| {
                [
                    model.dart_source(u.dart),
                    model.dart_target(u.dart),
                ]
            })
            .collect()
    };
    for z in 0..zz.len() {
        for w in (z + 1)..zz.len() {
            if zz[z].slope == zz[w].slope {
                let common: Vec<NodeIdx> = node_set(&zz[z])
                    .intersection(&node_set(&zz[w]))
                    .copied()
                    .collect();
                if let Some(v) = common.first() {
                    return PredicateReport::fail(format!(
                        "condition (3): paths {z} and {w} have the same slope {} and share node {}",
                        zz[z].slope,
                        model.nodes()[v.0].id
                    ));
                }
            }
        }
    }

    // Cyclic order at each node: transits keyed by incoming dart, read in
    // rotation order, must list slopes in strict counterclockwise order.
    let mut path_of_dart: std::collections::HashMap<Dart, usize> =
        std::collections::HashMap::new();
    for (zi, z) in zz.iter().enumerate() {
        for u in &z.uses {
            path_of_dart.insert(u.dart, zi);
        }
    }
    for v in 0..model.node_count() {
        let v = NodeIdx(v);
        let mut slopes = Vec::new();
        for &e in model.rotation(v) {
            let incoming_dir = if model.nodes()[v.0].color == Color::White {
                Dir::BlackToWhite
            } else {
                Dir::WhiteToBlack
            };
            let d = Dart::new(e, incoming_dir);
            debug_assert_eq!(model.dart_target(d), v);
            slopes.push(zz[path_of_dart[&d]].slope);
        }
        if slopes.len() == 1 {
            continue;
        }
        let mut descents = 0;
        let mut equal = false;
        for i in 0..slopes.len() {
            let a = slopes[i];
            let b = slopes[(i + 1) % slopes.len()];
            match angle_cmp(a, b) {
                std::cmp::Ordering::Less => {}
                std::cmp::Ordering::Equal => equal = true,
                std::cmp::Ordering::Greater => descents += 1,
            }
        }
        if equal || descents != 1 {
            return PredicateReport::fail(format!(
                "condition (4): node {}: transiting slopes {:?} are not in cyclic slope order",
                model.nodes()[v.0].id,
                slopes.iter().map(|s| (s.x, s.y)).collect::<Vec<_>>()
            ));
        }
    }
    PredicateReport::ok()
}

/// The multiset of zigzag slopes equals the multiset of primitive side
/// segments of the matching polygon boundary.
pub fn slope_side_correspondence(model: &DimerModel) -> Result<bool, MatchingError> {
    let zz = extract_zigzags(model);
    let mut slopes: Vec<Vec2> = zz.iter().map(|z| z.slope).collect();
    slopes.sort();
    let poly = pm_polygon(model, None)?;
    Ok(slopes == poly.hull.primitive_side_segments())
}
