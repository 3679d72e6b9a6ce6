//! opilab: a numerical laboratory for operator inequalities on real symmetric
//! matrices.
//!
//! The crate is organised in four layers:
//!
//! - [`matcore`] — dense symmetric matrix algebra: spectral decomposition,
//!   functional calculus `f(A)`, Loewner order predicates and the spectral
//!   scalars (operator norm, spectrum extrema, strict gap).
//! - [`funcrep`] — scalar function specifications: a catalog of operator
//!   monotone/convex functions, the Möbius families on `(-1, 1)`, function
//!   constructors from discrete quadrature measures, and a Löwner-matrix
//!   monotonicity certifier.
//! - [`bounds`] — every explicit scalar lower-bound formula exposed by the
//!   library, plus the Furuta exponent-domain predicates.
//! - [`verify`] — seeded random instance generation, matrix-level checks of
//!   each inequality against its scalar bound, commuting-case scalar oracles,
//!   and a deterministic suite runner emitting JSONL/CSV reports.

pub mod bounds;
pub mod error;
pub mod funcrep;
pub mod matcore;
mod seedmix;
pub mod verify;

pub use error::{Error, Result};
