//! Geodesics from points to vertices on the regular tetrahedron and the cube.
//!
//! Both solids tile the plane when rolled ("tumbled"), so a surface geodesic
//! unfolds to a straight segment from the start point to a lattice point, and
//! every question about geodesics becomes a question about visible lattice
//! points. This crate keeps all of that exact:
//!
//! * [`rational`] — arbitrary-precision rationals, the denominator function
//!   ⟨x⟩, and lattice-point visibility (with blocker naming).
//! * [`tetra`] — the (ℤ/2)² labeling of the triangular lattice and the
//!   enumeration of point-to-vertex / vertex-to-vertex geodesic directions on
//!   the unit regular tetrahedron.
//! * [`tumble`] — tumble sequences over {r,u}, segment crossing words, and
//!   rolled-out tumble paths with their corner labels.
//! * [`cube`] — cube orientations as one-line permutations of the four main
//!   diagonals, the word → orientation homomorphism, and the endpoint-vertex
//!   table derived by roll simulation.
//! * [`stern_brocot`] — the Stern–Brocot tree on visible first-quadrant
//!   lattice points, O(log) location, and the tumble/orientation recurrences.
//! * [`edge_markov`] — the 54-state edge-label transition system, its exact
//!   54×54 stochastic matrix, limiting vertex proportions, depth counts, and
//!   the parallel lattice-patch survey.
//! * [`face`] — the fan decomposition of the unit square into regions with a
//!   fixed tumble sequence to a chosen lattice target.
//!
//! Coordinates are exact rationals end to end; floating point appears only in
//! spectral estimates and rendering.

pub mod cube;
pub mod edge_markov;
pub mod face;
pub mod rational;
pub mod stern_brocot;
pub mod tetra;
pub mod tumble;

pub use cube::{endpoint_vertex, orientation_of, CubeOrientation, CubeState};
pub use rational::{Coord, Int, LatticePoint, Rational, RationalPoint};
pub use stern_brocot::{SBNode, Sign};
pub use tumble::{Letter, TumblePath, TumbleSequence};
