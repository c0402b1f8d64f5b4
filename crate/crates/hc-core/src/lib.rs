//! Exact homotopy-algebra engine for multisymplectic observables, higher
//! Courant algebroids and the morphisms between them.

pub mod appendixb;
pub mod cartan;
pub mod combinatorics;
pub mod exec;
pub mod graded;
pub mod linalg;
pub mod morphisms;
pub mod nr;
pub mod rng;
pub mod scenario;
pub mod structures;
pub mod suites;

pub use combinatorics::{q, qr, Q};
