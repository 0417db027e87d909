//! Exact computations with quadratic Lie algebras.
//!
//! The crate covers exact scalar and polynomial arithmetic over Q and F_p,
//! dense linear algebra, symmetric bilinear forms, canonical matrix pairs of
//! skew-adjoint maps, Lie algebras given by structure constants, and
//! one-dimensional double extensions of abelian quadratic algebras
//! (generalized oscillator algebras).

pub mod cli;
pub mod error;
pub mod factor;
pub mod field;
pub mod json;
pub mod liecore;
pub mod linalg;
pub mod matrix;
pub mod oscillator;
pub mod poly;
pub mod quadspace;
pub mod random;
pub mod skewcanon;

pub use error::{Error, Result};
pub use field::{Elem, Field, SquareClass};
pub use linalg::Subspace;
pub use matrix::Matrix;
pub use poly::Poly;

/// Version string embedded in every serialized document.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
