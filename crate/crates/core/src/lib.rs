//! Green function of the even-order focal boundary value problem
//!
//! ```text
//! (-1)^(n-k) x^(n)(t) = f(t),  t in [0, 1],  n = 2k,
//! x^(i)(0) = 0 for i < k,   x^(j)(1) = 0 for k <= j < n,
//! ```
//!
//! together with the kernel `M(t,s) = sqrt(G(t,s) G(1,1)) - sqrt(G(t,1) G(s,1))`
//! and the chain of rational functions and coefficient sequences that show
//! `M` attains its maximum on the diagonal `t = s`.
//!
//! Every kernel quantity is generic over [`Scalar`], so the same code runs in
//! `f64`/`f32` for grid sweeps and in exact [`Rational`] arithmetic for the
//! identity checks. Quantities that need a square root are restricted to
//! [`RealScalar`].
//!
//! Module map:
//!
//! * [`greenfn`]: `G(t,s)`, its partial derivatives, a quadrature oracle and
//!   the beta-weighted integral used to build positive-coefficient forms.
//! * [`kernels`]: `M`, `M0`, `M1`, 2x2 oscillation minors, the gradient of
//!   `M`, and the diagonal-maximum search and grid verification.
//! * [`ratios`]: the `Q` family, the logarithmic derivative `F`, `X_m`, and
//!   the two inequality margins.
//! * [`coeffs`]: exact coefficients `A_{k,m}`, `B_{k,m}` of `X_m` and the
//!   monotonicity check of `A_{k,m} / B_{k,m}`.
//! * [`solver`]: the boundary value problem solved through the Green
//!   operator, plus endpoint residuals.

pub mod coeffs;
pub mod combinatorics;
mod error;
pub mod export;
pub mod greenfn;
pub mod kernels;
pub mod poly;
pub mod ratios;
pub mod scalar;
pub mod search;
pub mod solver;

pub use error::{Error, Result};
pub use greenfn::{GreenFunction, GreenSeries, Order, Partial, UnitSquarePoint};
pub use kernels::{Kernel, KernelReport};
pub use poly::Poly;
pub use scalar::{RealScalar, Scalar};

/// Arbitrary-precision exact rational.
pub type Rational = num_rational::BigRational;

/// Polynomial with exact rational coefficients.
pub type RationalPoly = Poly<Rational>;

/// Polynomial with `f64` coefficients.
pub type FloatPoly = Poly<f64>;

/// Point of the unit square in floating point.
pub type Point = UnitSquarePoint<f64>;

/// Point of the unit square with exact rational coordinates.
pub type ExactPoint = UnitSquarePoint<Rational>;

/// Green function evaluated in `f64`.
pub type GreenF64 = GreenFunction<f64>;

/// Green function evaluated exactly.
pub type ExactGreen = GreenFunction<Rational>;
