//! Exact non-Archimedean probability at desk scale.
//!
//! The crate provides four interlocking pieces:
//!
//! * [`poly`] / [`hyper`] — polynomials and rational functions in a symbolic
//!   unbounded grid parameter `N`, ordered by eventual dominance.  This is the
//!   computable ordered field in which all hyperfinite probabilities below
//!   take their values.
//! * [`lc`] — truncated Levi-Civita series: finite maps from rational
//!   exponents to coefficients together with an explicit knowledge order up to
//!   which the series is exact.
//! * [`circle`] — an exact event algebra on the unit circle: finite unions of
//!   half-open arcs with rational endpoints, adjusted by finitely many added
//!   or removed rational points.
//! * [`models`] — the spinner probability measures: uniform measures on
//!   finite grids, the normalized length measure, the hyperfinite measure on
//!   the symbolic grid of `2N` points, the order-preserving `alpha` transform
//!   with its additivity defect, and the associated property checkers.
//!
//! Everything is computed with exact rational arithmetic; no value in this
//! crate is ever rounded.  The algebra layer is generic over the coefficient
//! scalar (any `num_traits::Signed` field-like type); the concrete aliases
//! below pin it to arbitrary-precision rationals, which is what the event
//! algebra and the measures require.

pub mod circle;
pub mod gen;
pub mod hyper;
pub mod lc;
pub mod models;
pub mod parse;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod suite;

pub use scalar::{checked_div, rat, rat_int, Int, Rat, Scalar};

/// Dense polynomial in the grid parameter `N` with exact rational coefficients.
pub type Poly = poly::Polynomial<Rat>;

/// Rational function of `N` with exact rational coefficients; the value type
/// of all hyperfinite probabilities.
pub type HyperRat = hyper::RatFun<Rat>;

/// Truncated Levi-Civita number with exact rational coefficients.
pub type Lc = lc::LcNumber<Rat>;
