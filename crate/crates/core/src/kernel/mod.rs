//! Exact arithmetic substrate: rationals, dense matrices over ℚ and 𝔽ₚ,
//! and conic feasibility.

pub mod feasibility;
pub mod matrix;
pub mod rational;

pub use feasibility::{nonneg_combination, ConicCertificate};
pub use matrix::{FpMatrix, Matrix, RankNullspace, DEFAULT_PRIME};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
