//! mdbook cannot run the book's code blocks as tests, so this crate smushes
//! every chapter into a rustdoc page instead: `cargo test --doc` then
//! executes each fenced Rust block. One module per chapter keeps test
//! failures traceable to their source file.

#[doc = include_str!("../../../book/src/ch01-overview.md")]
pub mod ch01_overview {}

#[doc = include_str!("../../../book/src/ch02-digit-sets.md")]
pub mod ch02_digit_sets {}

#[doc = include_str!("../../../book/src/ch03-face-lattice.md")]
pub mod ch03_face_lattice {}

#[doc = include_str!("../../../book/src/ch04-faces-projections-sections.md")]
pub mod ch04_faces_projections_sections {}

#[doc = include_str!("../../../book/src/ch05-intersections.md")]
pub mod ch05_intersections {}

#[doc = include_str!("../../../book/src/ch06-classification.md")]
pub mod ch06_classification {}

#[doc = include_str!("../../../book/src/ch07-oracle.md")]
pub mod ch07_oracle {}

#[doc = include_str!("../../../book/src/ch08-cli.md")]
pub mod ch08_cli {}
