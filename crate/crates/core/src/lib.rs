//! Exact Riemann–Roch, inertia and Euler-characteristic computations for
//! finite quotient stacks `[X/H]` and orbifold curves.

pub mod chartheory;
pub mod cli;
pub mod cyclonum;
pub mod error;
pub mod eulerlab;
pub mod groupoidstack;
pub mod grouptheory;
pub mod linalg;
pub mod orbicurve;

pub use cyclonum::{CyclotomicNumber, Rational};
pub use error::{Error, Result};
