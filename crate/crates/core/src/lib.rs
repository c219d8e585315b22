//! Spectacular 2-complexes and the graphical small cancellation groups `H(S)`
//! built from them.
//!
//! The pipeline runs from finite geometry (`GF(q)`, `PGL(2,q)` acting on the
//! projective line) through the construction of a complex from a conjugacy
//! class, verification of the seven spectacular conditions with exact integral
//! homology, to graphical presentations, C'(1/6) checks and a Dehn-algorithm
//! word problem solver.
//!
//! ```
//! use spectacular::builder::{build_spectacular, BuildRecipe};
//!
//! let (k, report) = build_spectacular(&BuildRecipe::default()).unwrap();
//! assert_eq!(k.polygon_count(), 28);
//! assert!(report.spectacular);
//! ```

pub mod builder;
pub mod cli;
pub mod complexes;
pub mod finite_geometry;
pub mod graph;
pub mod homology;
pub mod presentations;
pub mod wordproblem;

pub use builder::{build_k1, build_k2, build_spectacular, check_triples, BuildRecipe};
pub use complexes::{verify_spectacular, ConditionReport, SimpleGraph, TwoComplex};
pub use graph::Length;
pub use homology::{homology, HomologyReport};
pub use presentations::{certify_c16_family, check_c16, materialize_hs, GraphicalPresentation, Word};
pub use wordproblem::{is_trivial, kernel_witness_check, r_invariant, DehnReducer};
