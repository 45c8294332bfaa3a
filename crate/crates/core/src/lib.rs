//! Lower and upper bounds for norms in free Banach lattices over
//! finite-dimensional `l_p` spaces.
//!
//! An element of the free vector lattice over `n` generators is a
//! [`LatticeExpr`]. Its norm is a supremum over finite families of dual
//! vectors; [`engine`] evaluates that formula from below with exactly
//! computed constraints, and [`bounds`] provides the closed-form witnesses
//! and upper estimates for combinations of moduli of the generators.
//!
//! ```
//! use fblnorm::bounds::{certify_moduli_norm, GrothendieckConstant};
//! use fblnorm::space::{Exponent, SpaceSpec};
//!
//! let space = SpaceSpec::new(4, Exponent::new(4.0).unwrap()).unwrap();
//! let cert = certify_moduli_norm(&[1.0; 4], space, GrothendieckConstant::default(), 24).unwrap();
//! assert!((cert.lower - 4f64.powf(0.75)).abs() < 1e-12);
//! assert!(cert.certified);
//! ```

pub mod bounds;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod expr;
pub mod space;
pub mod tolerance;

pub use error::{Error, Result};
pub use expr::LatticeExpr;
