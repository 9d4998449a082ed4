//! Asymptotic KKT analysis and a safeguarded augmented Lagrangian solver for
//! problems `min f(x)` subject to `x ∈ C`, `G(x) ∈ K` over weighted
//! finite-dimensional spaces.

pub mod akkt;
pub mod alm;
pub mod convex;
pub mod error;
pub mod linalg;
pub mod problem;
pub mod report;
pub mod suites;

pub use error::{Error, Result};
