//! Dimer models on the two-torus and the non-commutative crepant
//! resolutions they induce.
//!
//! The pipeline, bottom to top:
//!
//! * [`graph`] — validated dimer models: bipartite graphs embedded on the
//!   torus via rotation systems and `Z^2` homology offsets, with face
//!   tracing and bivalent-node removal.
//! * [`matchings`] — perfect-matching enumeration, homology classes, the
//!   perfect-matching polygon and extremal matchings.
//! * [`zigzag`] — zigzag paths, slopes, universal-cover intersection
//!   bookkeeping, and the consistency / properly-ordered / isoradial
//!   predicates.
//! * [`quiver`] — the dual quiver with potential and perfect-matching
//!   evaluation of paths.
//! * [`lattice`], [`toric`] — Smith normal form, divisor class groups of
//!   the Gorenstein toric singularity attached to a lattice polygon, and
//!   divisorial-ideal class arithmetic.
//! * [`nccr`] — the class lists of the tilting modules `T^i` and their
//!   classification as steady, semi-steady or neither.
//! * [`builders`] — regular (hexagonal / square) torus quotients and the
//!   Hanany-Vegh realization of parallelogram toric diagrams.
//! * [`cli`], [`export`] — command-line front end and JSON/DOT/TikZ export.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod builders;
pub mod cli;
pub mod export;
pub mod fixtures;
pub mod graph;
pub mod lattice;
pub mod matchings;
pub mod nccr;
pub mod quiver;
pub mod toric;
pub mod zigzag;

pub use graph::DimerModel;
pub use lattice::{LatticePolygon, Vec2};
