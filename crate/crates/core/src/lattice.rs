//! Exact integer linear algebra and lattice-polygon utilities.
//!
//! Everything here is over `i64` with checked arithmetic: inputs are tiny
//! (polygon vertices, homology offsets), but a silent wrap must never turn
//! into a wrong class group.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolygonError {
    #[error("degenerate polygon: fewer than 3 distinct vertices or zero area")]
    DegeneratePolygon,
}

fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("integer overflow (add)")
}

fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("integer overflow (mul)")
}

/// A point or vector in `Z^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vec2 {
    pub x: i64,
    pub y: i64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0, y: 0 };

    pub fn new(x: i64, y: i64) -> Self {
        Vec2 { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// 2x2 determinant of the pair `(self, other)`.
    pub fn cross(&self, other: Vec2) -> i64 {
        checked_add(
            checked_mul(self.x, other.y),
            -checked_mul(self.y, other.x),
        )
    }

    pub fn dot(&self, other: Vec2) -> i64 {
        checked_add(checked_mul(self.x, other.x), checked_mul(self.y, other.y))
    }

    /// gcd of the coordinates; 0 for the zero vector.
    pub fn content(&self) -> i64 {
        gcd(self.x.abs(), self.y.abs())
    }

    /// The primitive vector in the same direction. Panics on zero.
    pub fn primitive(&self) -> Vec2 {
        let g = self.content();
        assert!(g > 0, "zero vector has no direction");
        Vec2::new(self.x / g, self.y / g)
    }

    /// True iff `self` and `other` span a rank-<=1 sublattice.
    pub fn is_parallel_to(&self, other: Vec2) -> bool {
        self.cross(other) == 0
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(checked_add(self.x, rhs.x), checked_add(self.y, rhs.y))
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(checked_add(self.x, -rhs.x), checked_add(self.y, -rhs.y))
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl std::ops::Mul<i64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: i64) -> Vec2 {
        Vec2::new(checked_mul(self.x, k), checked_mul(self.y, k))
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Compare two nonzero vectors by counterclockwise angle starting at the
/// positive x-axis, i.e. the order `(1,0) < (1,1) < (0,1) < ... < (1,-1)`.
pub fn angle_cmp(a: Vec2, b: Vec2) -> std::cmp::Ordering {
    assert!(!a.is_zero() && !b.is_zero());
    let half = |v: Vec2| -> u8 {
        // 0 for angles in [0, pi), 1 for [pi, 2pi)
        if v.y > 0 || (v.y == 0 && v.x > 0) {
            0
        } else {
            1
        }
    };
    half(a)
        .cmp(&half(b))
        .then_with(|| 0i64.cmp(&a.cross(b)))
}

// ---------------------------------------------------------------------------
// Dense integer matrices and Smith normal form
// ---------------------------------------------------------------------------

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = checked_add(out[(i, j)], checked_mul(a, other[(k, j)]));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0i64, |acc, (a, b)| checked_add(acc, checked_mul(*a, *b)))
            })
            .collect()
    }

    /// Determinant via fraction-free elimination; only needed for 2x2 here.
    pub fn det2(&self) -> i64 {
        assert!(self.rows == 2 && self.cols == 2);
        checked_add(
            checked_mul(self[(0, 0)], self[(1, 1)]),
            -checked_mul(self[(0, 1)], self[(1, 0)]),
        )
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Smith normal form `U * A * V = D` with unimodular `U`, `V` and `D`
/// diagonal with a divisibility chain `d_1 | d_2 | ...`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        let n = self.d.nrows().min(self.d.ncols());
        (0..n).take_while(|&i| self.d[(i, i)] != 0).count()
    }

    pub fn invariant_factors(&self) -> Vec<i64> {
        let n = self.d.nrows().min(self.d.ncols());
        (0..n)
            .map(|i| self.d[(i, i)])
            .filter(|&d| d != 0)
            .collect()
    }
}

/// Smith normal form by elementary row/column operations.
///
/// Pivots are re-selected by least nonzero absolute value on every round,
/// and the working matrices are `i128` so intermediate fill-in has ample
/// headroom; the final transforms convert back with a checked cast.
pub fn snf(a: &IntMatrix) -> Snf {
    let mut d = Mat128::from_i64(a);
    let mut u = Mat128::identity(a.nrows());
    let mut v = Mat128::identity(a.ncols());
    let n = a.nrows().min(a.ncols());

    let mut t = 0;
    while t < n {
        // Re-select the least-|value| nonzero entry of the remaining block
        // until row and column t are clear.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..d.rows {
            for j in t..d.cols {
                if d.get(i, j) != 0
                    && pivot.is_none_or(|(pi, pj)| d.get(i, j).abs() < d.get(pi, pj).abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let mut clean = true;
        for i in (t + 1)..d.rows {
            let q = d.get(i, t).div_euclid(d.get(t, t));
            if q != 0 {
                d.add_row_multiple(i, t, -q);
                u.add_row_multiple(i, t, -q);
            }
            if d.get(i, t) != 0 {
                clean = false;
            }
        }
        for j in (t + 1)..d.cols {
            let q = d.get(t, j).div_euclid(d.get(t, t));
            if q != 0 {
                d.add_col_multiple(j, t, -q);
                v.add_col_multiple(j, t, -q);
            }
            if d.get(t, j) != 0 {
                clean = false;
            }
        }
        if clean {
            if d.get(t, t) < 0 {
                d.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        // Otherwise repeat with a fresh (smaller) pivot at the same t.
    }

    // Enforce the divisibility chain d_i | d_{i+1}.
    let r = (0..n).take_while(|&i| d.get(i, i) != 0).count();
    loop {
        let mut fixed = true;
        for i in 0..r.saturating_sub(1) {
            let (x, y) = (d.get(i, i), d.get(i + 1, i + 1));
            if y % x != 0 {
                let (g, s, tq) = extended_gcd128(x, y);
                // Fold diag(x, y) into diag(g, lcm): merge the columns, then
                // apply the unimodular row pair [s, t; -y/g, x/g].
                d.add_col_multiple(i, i + 1, 1);
                v.add_col_multiple(i, i + 1, 1);
                let lmat = [s, tq, -(y / g), x / g];
                d.apply_left_2x2(i, i + 1, &lmat);
                u.apply_left_2x2(i, i + 1, &lmat);
                let q1 = d.get(i, i + 1).div_euclid(d.get(i, i));
                d.add_col_multiple(i + 1, i, -q1);
                v.add_col_multiple(i + 1, i, -q1);
                debug_assert_eq!(d.get(i, i), g);
                debug_assert_eq!(d.get(i, i + 1), 0);
                debug_assert_eq!(d.get(i + 1, i), 0);
                if d.get(i + 1, i + 1) < 0 {
                    d.negate_row(i + 1);
                    u.negate_row(i + 1);
                }
                fixed = false;
            }
        }
        if fixed {
            break;
        }
    }

    let out = Snf {
        u: u.into_i64(),
        d: d.into_i64(),
        v: v.into_i64(),
    };
    debug_assert_eq!(out.u.mul(a).mul(&out.v), out.d, "U*A*V != D");
    out
}

/// Working matrix for the normal-form computation.
struct Mat128 {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl Mat128 {
    fn from_i64(a: &IntMatrix) -> Mat128 {
        Mat128 {
            rows: a.nrows(),
            cols: a.ncols(),
            data: a.data.iter().map(|&x| x as i128).collect(),
        }
    }

    fn identity(n: usize) -> Mat128 {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Mat128 {
            rows: n,
            cols: n,
            data,
        }
    }

    fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, x: i128) {
        self.data[i * self.cols + j] = x;
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for k in 0..self.cols {
                self.data.swap(i * self.cols + k, j * self.cols + k);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols {
            self.set(i, k, -self.get(i, k));
        }
    }

    fn add_row_multiple(&mut self, j: usize, i: usize, c: i128) {
        for k in 0..self.cols {
            let x = self
                .get(j, k)
                .checked_add(c.checked_mul(self.get(i, k)).expect("overflow"))
                .expect("overflow");
            self.set(j, k, x);
        }
    }

    fn add_col_multiple(&mut self, j: usize, i: usize, c: i128) {
        for r in 0..self.rows {
            let x = self
                .get(r, j)
                .checked_add(c.checked_mul(self.get(r, i)).expect("overflow"))
                .expect("overflow");
            self.set(r, j, x);
        }
    }

    fn apply_left_2x2(&mut self, r0: usize, r1: usize, m: &[i128; 4]) {
        for k in 0..self.cols {
            let a = self.get(r0, k);
            let b = self.get(r1, k);
            self.set(r0, k, m[0] * a + m[1] * b);
            self.set(r1, k, m[2] * a + m[3] * b);
        }
    }

    fn into_i64(self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .into_iter()
                .map(|x| i64::try_from(x).expect("normal-form entry exceeds i64"))
                .collect(),
        }
    }
}

fn extended_gcd128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

// ---------------------------------------------------------------------------
// Finitely generated abelian groups as cokernels
// ---------------------------------------------------------------------------

/// Canonical coordinates of an element in a cokernel group: one residue per
/// invariant factor > 1, plus free coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub torsion: Vec<i64>,
    pub free: Vec<i64>,
}

impl GroupElement {
    pub fn is_identity(&self) -> bool {
        self.torsion.iter().all(|&t| t == 0) && self.free.iter().all(|&f| f == 0)
    }
}

/// `Z^n / im(A)` for an integer matrix `A: Z^d -> Z^n`, with enough data to
/// project arbitrary vectors of `Z^n` to canonical coordinates.
#[derive(Debug, Clone)]
pub struct AbelianGroup {
    pub free_rank: usize,
    /// Invariant factors > 1, forming a divisibility chain.
    pub torsion: Vec<i64>,
    n: usize,
    /// Row transform from the SNF of `A`; `pi(u) = reduce(U * u)`.
    u: IntMatrix,
    /// Per-coordinate invariant factor of `U*u` space: d_i, or 0 for free.
    diag: Vec<i64>,
}

impl AbelianGroup {
    pub fn order(&self) -> Option<i64> {
        if self.free_rank > 0 {
            None
        } else {
            Some(self.torsion.iter().product())
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn ambient_rank(&self) -> usize {
        self.n
    }

    /// Project `u` in `Z^n` to canonical coordinates.
    pub fn project(&self, u: &[i64]) -> GroupElement {
        assert_eq!(u.len(), self.n, "vector length != ambient rank");
        let w = self.u.mul_vec(u);
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for (i, &d) in self.diag.iter().enumerate() {
            match d {
                0 => free.push(w[i]),
                1 => {}
                d => torsion.push(w[i].rem_euclid(d)),
            }
        }
        GroupElement { torsion, free }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            torsion: self.torsion.iter().map(|_| 0).collect(),
            free: vec![0; self.free_rank],
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .zip(&self.torsion)
                .map(|((x, y), d)| (x + y).rem_euclid(*d))
                .collect(),
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            torsion: a
                .torsion
                .iter()
                .zip(&self.torsion)
                .map(|(x, d)| (-x).rem_euclid(*d))
                .collect(),
            free: a.free.iter().map(|x| -x).collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }
}

/// Cokernel of the column map `Z^d -> Z^n` given by `a` (n rows, d cols).
pub fn cokernel(a: &IntMatrix) -> AbelianGroup {
    let s = snf(a);
    let n = a.nrows();
    let rank = s.rank();
    let mut diag = vec![0i64; n];
    for (i, d) in s.invariant_factors().into_iter().enumerate() {
        diag[i] = d;
    }
    AbelianGroup {
        free_rank: n - rank,
        torsion: diag.iter().copied().filter(|&d| d > 1).collect(),
        n,
        u: s.u,
        diag,
    }
}

// ---------------------------------------------------------------------------
// Lattice polygons
// ---------------------------------------------------------------------------

/// A strictly convex lattice polygon with counterclockwise vertex cycle,
/// normalized to start at the lexicographically least vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolygon {
    vertices: Vec<Vec2>,
}

impl LatticePolygon {
    /// Builds from an explicit vertex cycle; rejects collinear triples,
    /// repeated vertices and non-positive area. Clockwise input is reversed.
    pub fn from_vertex_cycle(mut vs: Vec<Vec2>) -> Result<Self, PolygonError> {
        if vs.len() < 3 {
            return Err(PolygonError::DegeneratePolygon);
        }
        if signed_area2(&vs) < 0 {
            vs.reverse();
        }
        let n = vs.len();
        for i in 0..n {
            let a = vs[i];
            let b = vs[(i + 1) % n];
            let c = vs[(i + 2) % n];
            if (b - a).cross(c - b) <= 0 {
                return Err(PolygonError::DegeneratePolygon);
            }
        }
        let start = (0..n).min_by_key(|&i| vs[i]).unwrap();
        vs.rotate_left(start);
        Ok(LatticePolygon { vertices: vs })
    }

    /// Convex hull of a point set, vertices only (no collinear points kept).
    pub fn hull_of(points: &[Vec2]) -> Result<Self, PolygonError> {
        let mut pts: Vec<Vec2> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() < 3 {
            return Err(PolygonError::DegeneratePolygon);
        }
        // Andrew's monotone chain with strict turns.
        let build = |iter: &mut dyn Iterator<Item = Vec2>| -> Vec<Vec2> {
            let mut chain: Vec<Vec2> = Vec::new();
            for p in iter {
                while chain.len() >= 2 {
                    let a = chain[chain.len() - 2];
                    let b = chain[chain.len() - 1];
                    if (b - a).cross(p - a) <= 0 {
                        chain.pop();
                    } else {
                        break;
                    }
                }
                chain.push(p);
            }
            chain
        };
        let lower = build(&mut pts.iter().copied());
        let upper = build(&mut pts.iter().rev().copied());
        let first = lower[0];
        let mut vs = lower;
        vs.extend(upper.into_iter().skip(1).take_while(|&p| p != first));
        LatticePolygon::from_vertex_cycle(vs)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Edge vectors of the counterclockwise boundary.
    pub fn side_vectors(&self) -> Vec<Vec2> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| self.vertices[(i + 1) % n] - self.vertices[i])
            .collect()
    }

    /// Twice the (positive) area.
    pub fn double_area(&self) -> i64 {
        signed_area2(&self.vertices)
    }

    /// Each side of lattice length `k` contributes `k` copies of its
    /// primitive direction; the multiset sums to zero.
    pub fn primitive_side_segments(&self) -> Vec<Vec2> {
        let mut out = Vec::new();
        for s in self.side_vectors() {
            let g = s.content();
            let p = s.primitive();
            for _ in 0..g {
                out.push(p);
            }
        }
        out.sort();
        out
    }

    pub fn is_parallelogram(&self) -> bool {
        let s = self.side_vectors();
        s.len() == 4 && s[0] == -s[2] && s[1] == -s[3]
    }

    pub fn is_triangle(&self) -> bool {
        self.vertices.len() == 3
    }

    pub fn translate(&self, t: Vec2) -> LatticePolygon {
        LatticePolygon::from_vertex_cycle(self.vertices.iter().map(|&v| v + t).collect())
            .expect("translate preserves convexity")
    }
}

fn signed_area2(vs: &[Vec2]) -> i64 {
    let n = vs.len();
    (0..n)
        .map(|i| vs[i].cross(vs[(i + 1) % n]))
        .fold(0, checked_add)
}

/// A witness `(U, t)` with `U * p + t = q` over the vertex cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineWitness {
    pub u: IntMatrix,
    pub t: Vec2,
}

impl AffineWitness {
    pub fn apply(&self, p: Vec2) -> Vec2 {
        Vec2::new(
            checked_add(
                checked_add(checked_mul(self.u[(0, 0)], p.x), checked_mul(self.u[(0, 1)], p.y)),
                self.t.x,
            ),
            checked_add(
                checked_add(checked_mul(self.u[(1, 0)], p.x), checked_mul(self.u[(1, 1)], p.y)),
                self.t.y,
            ),
        )
    }
}

/// Searches for a unimodular affine map (`GL(2,Z)` plus translation, so
/// reflections allowed) taking `p1` onto `p2` as vertex cycles.
pub fn affine_equivalent(p1: &LatticePolygon, p2: &LatticePolygon) -> Option<AffineWitness> {
    if p1.vertex_count() != p2.vertex_count() {
        return None;
    }
    let n = p1.vertex_count();
    let v1 = p1.vertices();
    for reflect in [false, true] {
        // Reflection reverses the cycle orientation.
        let v2: Vec<Vec2> = if reflect {
            let mut v: Vec<Vec2> = p2.vertices().to_vec();
            v.reverse();
            v
        } else {
            p2.vertices().to_vec()
        };
        for rot in 0..n {
            let target = |i: usize| v2[(i + rot) % n];
            // Solve U from the first two edge vectors, then verify globally.
            let e1 = v1[1] - v1[0];
            let e2 = v1[2] - v1[1];
            let f1 = target(1) - target(0);
            let f2 = target(2) - target(1);
            let det = e1.cross(e2);
            debug_assert!(det != 0);
            // U * e1 = f1, U * e2 = f2  =>  U = [f1 f2] * [e1 e2]^{-1}.
            // [e1 e2]^{-1} = adj / det; require integrality.
            let num = |a: i64| -> Option<i64> {
                if a % det == 0 {
                    Some(a / det)
                } else {
                    None
                }
            };
            let u00 = num(checked_add(checked_mul(f1.x, e2.y), -checked_mul(f2.x, e1.y)));
            let u01 = num(checked_add(checked_mul(f2.x, e1.x), -checked_mul(f1.x, e2.x)));
            let u10 = num(checked_add(checked_mul(f1.y, e2.y), -checked_mul(f2.y, e1.y)));
            let u11 = num(checked_add(checked_mul(f2.y, e1.x), -checked_mul(f1.y, e2.x)));
            let (Some(u00), Some(u01), Some(u10), Some(u11)) = (u00, u01, u10, u11) else {
                continue;
            };
            let u = IntMatrix::from_rows(&[vec![u00, u01], vec![u10, u11]]);
            if u.det2().abs() != 1 {
                continue;
            }
            let image_of_base = Vec2::new(
                checked_add(checked_mul(u00, v1[0].x), checked_mul(u01, v1[0].y)),
                checked_add(checked_mul(u10, v1[0].x), checked_mul(u11, v1[0].y)),
            );
            let w = AffineWitness {
                t: target(0) - image_of_base,
                u,
            };
            if (0..n).all(|i| w.apply(v1[i]) == target(i)) {
                return Some(w);
            }
        }
    }
    None
}

/// A subgroup of `Z^2` given by up to two generators, in a normal form
/// supporting canonical coset representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lattice2 {
    Zero,
    /// Rank one: multiples of a lexicographically positive generator.
    Line(Vec2),
    /// Rank two, Hermite basis `(p,0), (q,r)` with `p > 0, r > 0, 0 <= q < p`.
    Full { p: i64, q: i64, r: i64 },
}

impl Lattice2 {
    pub fn from_generators(a: Vec2, b: Vec2) -> Lattice2 {
        let gens: Vec<Vec2> = [a, b].into_iter().filter(|v| !v.is_zero()).collect();
        match gens.len() {
            0 => Lattice2::Zero,
            1 => Lattice2::Line(lex_positive(gens[0])),
            _ => {
                if gens[0].cross(gens[1]) == 0 {
                    let d = gens[0].primitive();
                    let coeff = |v: Vec2| -> i64 {
                        if d.x != 0 {
                            v.x / d.x
                        } else {
                            v.y / d.y
                        }
                    };
                    let g = gcd(coeff(gens[0]), coeff(gens[1]));
                    Lattice2::Line(lex_positive(d * g))
                } else {
                    let (mut v1, mut v2) = (gens[0], gens[1]);
                    while v2.y != 0 {
                        let q = v1.y.div_euclid(v2.y);
                        v1 = v1 - v2 * q;
                        std::mem::swap(&mut v1, &mut v2);
                    }
                    // v2 = (x, 0), v1 = (q', r') with r' != 0.
                    let p = v2.x.abs();
                    let mut row = v1;
                    if row.y < 0 {
                        row = -row;
                    }
                    let q = row.x.rem_euclid(p);
                    Lattice2::Full { p, q, r: row.y }
                }
            }
        }
    }

    /// Canonical representative of `v` modulo this subgroup.
    pub fn reduce(&self, v: Vec2) -> Vec2 {
        match *self {
            Lattice2::Zero => v,
            Lattice2::Line(g) => {
                if g.x != 0 {
                    v - g * v.x.div_euclid(g.x)
                } else {
                    v - g * v.y.div_euclid(g.y)
                }
            }
            Lattice2::Full { p, q, r } => {
                let k = v.y.div_euclid(r);
                let v = v - Vec2::new(q, r) * k;
                Vec2::new(v.x.rem_euclid(p), v.y)
            }
        }
    }

    pub fn contains(&self, v: Vec2) -> bool {
        self.reduce(v).is_zero()
    }

    /// Index of the subgroup in `Z^2`, when finite.
    pub fn index(&self) -> Option<i64> {
        match *self {
            Lattice2::Full { p, r, .. } => Some(p * r),
            _ => None,
        }
    }
}

fn lex_positive(v: Vec2) -> Vec2 {
    if v.x > 0 || (v.x == 0 && v.y > 0) {
        v
    } else {
        -v
    }
}

// ---------------------------------------------------------------------------
// Sublattices of Z^2
// ---------------------------------------------------------------------------

/// Enumerates the finite-index sublattices of `Z^2` of the given index, one
/// Hermite-form basis `{(a,0),(c,d)}` per sublattice (`a*d = index`,
/// `0 <= c < a`).
pub fn sublattices_of_index(index: i64) -> Vec<(Vec2, Vec2)> {
    assert!(index > 0);
    let mut out = Vec::new();
    for a in 1..=index {
        if index % a != 0 {
            continue;
        }
        let d = index / a;
        for c in 0..a {
            out.push((Vec2::new(a, 0), Vec2::new(c, d)));
        }
    }
    out
}
