//! Exact analysis of fractal cubes defined by digit sets.
//!
//! A *fractal k-cube* of order `n` is the attractor of the maps
//! `x -> (x + d)/n` over a digit set `D ⊆ {0,...,n-1}^k`: the unique compact
//! `K` with `n*K = K + D`. This crate computes, without ever approximating
//! `K` by floating-point samples:
//!
//! * faces, projections, sections and refinements of a cube
//!   ([`digits`], [`face`]);
//! * the structure graph of the intersections `K1 ∩ (K2 + a)` of two cubes
//!   over all face translations `a`, and from it the Hausdorff dimension,
//!   measure finiteness, cardinality class and exact points of every
//!   intersection ([`graph`]);
//! * independent brute-force checks: cell-cover adjacency counts, emptiness
//!   certificates, box-counting estimates and exact rational membership
//!   ([`oracle`]);
//! * file formats, reports, DOT export and PPM rasters ([`reports`]).
//!
//! ```
//! use fractal_cubes::{DigitSet, FaceVector, IntersectionProblem, CardinalityClass};
//!
//! // The Sierpinski carpet: a 3x3 grid of digits minus the center.
//! let digits = (0..3)
//!     .flat_map(|x| (0..3).map(move |y| vec![x, y]))
//!     .filter(|d| d != &vec![1, 1])
//!     .collect();
//! let carpet = DigitSet::new(2, 3, digits)?;
//!
//! // How does the carpet meet its own translate one step to the right?
//! let problem = IntersectionProblem::self_intersection(&carpet)?;
//! let graph = problem.structure_graph();
//! let right: FaceVector = "(1,0)".parse()?;
//! assert_eq!(graph.dimension(&right)?.value, 1.0);
//! assert_eq!(graph.classify_cardinality(&right)?, CardinalityClass::Uncountable);
//! # Ok::<(), fractal_cubes::Error>(())
//! ```

pub mod digits;
mod error;
pub mod face;
pub mod graph;
pub mod oracle;
pub mod reports;

pub use digits::DigitSet;
pub use error::{Error, Result};
pub use face::FaceVector;
pub use graph::{
    CardinalityClass, DimensionValue, ExactPoint, IntersectionProblem, StructureGraph,
};

pub use num::BigRational;
