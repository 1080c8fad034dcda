//! The Green function `G(t,s)` of the focal problem and its derivatives.
//!
//! For `s <= t` the defining integral
//! `G(t,s) = (m!)^-2 ∫₀^s (t-τ)^m (s-τ)^m dτ` is a homogeneous polynomial of
//! degree `2m+1`:
//!
//! ```text
//! G(t,s) = Σ_{i=0}^{m} (-1)^i C(2m+1, m-i) / (2m+1)!  ·  s^(m+1+i) t^(m-i)
//! ```
//!
//! and `G(t,s) = G(s,t)` covers the other triangle. The first partials are
//! homogeneous polynomials of degree `2m` built the same way. Points on the
//! diagonal belong to the `s <= t` branch.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::combinatorics::{binomial, factorial};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Order parameter `m >= 0` of the problem; `k = m + 1` and `n = 2k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Order {
    m: u32,
}

impl Order {
    pub const fn new(m: u32) -> Self {
        Self { m }
    }

    /// Builds the order from the differential order `n`, which must be even
    /// and at least 2.
    pub fn from_n(n: u32) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "differential order must be even and >= 2, got {n}"
            )));
        }
        Ok(Self { m: n / 2 - 1 })
    }

    pub const fn m(self) -> u32 {
        self.m
    }

    pub const fn k(self) -> u32 {
        self.m + 1
    }

    pub const fn n(self) -> u32 {
        2 * (self.m + 1)
    }

    /// `1 / (m!)^2`
    pub fn inverse_factorial_squared(self) -> BigRational {
        let f = factorial(self.m as u64);
        BigRational::new(BigInt::one(), &f * &f)
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Order", 3)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("k", &self.k())?;
        st.serialize_field("n", &self.n())?;
        st.end()
    }
}

/// A point `(t, s)` of the closed unit square.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitSquarePoint<T> {
    t: T,
    s: T,
}

impl<T: Scalar> UnitSquarePoint<T> {
    pub fn new(t: T, s: T) -> Result<Self> {
        let unit = |v: &T| *v >= T::zero() && *v <= T::one();
        if !unit(&t) || !unit(&s) {
            return Err(Error::Domain(format!(
                "point ({}, {}) lies outside the unit square",
                t.as_f64(),
                s.as_f64()
            )));
        }
        Ok(Self { t, s })
    }

    pub(crate) fn new_unchecked(t: T, s: T) -> Self {
        Self { t, s }
    }

    pub fn t(&self) -> &T {
        &self.t
    }

    pub fn s(&self) -> &T {
        &self.s
    }

    pub fn swapped(&self) -> Self {
        Self { t: self.s.clone(), s: self.t.clone() }
    }

    /// Both coordinates strictly inside `(0, 1)`.
    pub fn is_interior(&self) -> bool {
        let open = |v: &T| *v > T::zero() && *v < T::one();
        open(&self.t) && open(&self.s)
    }

    pub fn to_f64(&self) -> UnitSquarePoint<f64> {
        UnitSquarePoint { t: self.t.as_f64(), s: self.s.as_f64() }
    }
}

/// Which partial derivative of `G` to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partial {
    /// `∂G/∂t`
    T,
    /// `∂G/∂s`
    S,
    /// `∂²G/∂s²`, only on the edge `t = 1`.
    SS,
}

/// A homogeneous two-variable series
/// `Σ_i c_i · small^(small_power + i) · large^(large_power - i)`,
/// where `small <= large` are the two arguments of `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenSeries<T> {
    order: Order,
    coefficients: Vec<T>,
    small_power: u32,
    large_power: u32,
}

impl GreenSeries<BigRational> {
    /// Series of `G` itself: `c_i = (-1)^i C(2m+1, m-i) / (2m+1)!`, length `m+1`.
    pub fn value(order: Order) -> Self {
        let m = order.m() as i64;
        let norm = BigRational::from_integer(factorial(2 * m as u64 + 1));
        Self {
            order,
            coefficients: alternating(m + 1, |i| binomial(2 * m + 1, m - i), &norm),
            small_power: order.m() + 1,
            large_power: order.m(),
        }
    }

    /// Series of the derivative in the larger argument:
    /// `c_i = (-1)^i C(2m, m-1-i) / (2m)!`, length `m` (empty when `m = 0`).
    pub fn larger_derivative(order: Order) -> Self {
        let m = order.m() as i64;
        let norm = BigRational::from_integer(factorial(2 * m as u64));
        Self {
            order,
            coefficients: alternating(m, |i| binomial(2 * m, m - 1 - i), &norm),
            small_power: order.m() + 1,
            large_power: order.m().saturating_sub(1),
        }
    }

    /// Series of the derivative in the smaller argument:
    /// `c_i = (-1)^i C(2m, m-i) / (2m)!`, length `m+1`.
    pub fn smaller_derivative(order: Order) -> Self {
        let m = order.m() as i64;
        let norm = BigRational::from_integer(factorial(2 * m as u64));
        Self {
            order,
            coefficients: alternating(m + 1, |i| binomial(2 * m, m - i), &norm),
            small_power: order.m(),
            large_power: order.m(),
        }
    }

    pub fn to_scalar<U: Scalar>(&self) -> GreenSeries<U> {
        GreenSeries {
            order: self.order,
            coefficients: self.coefficients.iter().map(U::from_rational).collect(),
            small_power: self.small_power,
            large_power: self.large_power,
        }
    }
}

fn alternating(
    len: i64,
    magnitude: impl Fn(i64) -> BigInt,
    norm: &BigRational,
) -> Vec<BigRational> {
    (0..len)
        .map(|i| {
            let c = BigRational::from_integer(magnitude(i)) / norm;
            if i % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

impl<T: Scalar> GreenSeries<T> {
    pub fn order(&self) -> Order {
        self.order
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn eval(&self, large: &T, small: &T) -> T {
        if self.coefficients.is_empty() {
            return T::zero();
        }
        let last = self.coefficients.len() as u32 - 1;
        // Σ c_i small^i large^(last-i), accumulated Horner-style in `small`.
        let mut acc = T::zero();
        let mut large_pow = T::one();
        for c in self.coefficients.iter().rev() {
            acc = acc * small.clone() + c.clone() * large_pow.clone();
            large_pow = large_pow * large.clone();
        }
        acc * small.powi(self.small_power) * large.powi(self.large_power - last)
    }

    /// The series restricted to `large = 1`, as a polynomial in `small`.
    pub fn boundary_poly(&self) -> Poly<T> {
        let mut coeffs = vec![T::zero(); self.small_power as usize + self.coefficients.len()];
        for (i, c) in self.coefficients.iter().enumerate() {
            coeffs[self.small_power as usize + i] = c.clone();
        }
        Poly::new(coeffs)
    }
}

/// `G` together with its first partials, evaluated in a fixed scalar type.
#[derive(Debug, Clone)]
pub struct GreenFunction<T> {
    order: Order,
    value: GreenSeries<T>,
    d_large: GreenSeries<T>,
    d_small: GreenSeries<T>,
    dd_small_edge: Poly<T>,
    at_one_one: T,
}

impl<T: Scalar> GreenFunction<T> {
    pub fn new(order: Order) -> Self {
        let value = GreenSeries::value(order);
        let d_small = GreenSeries::smaller_derivative(order);
        let dd_small_edge = d_small.boundary_poly().derivative().to_scalar();
        let value = value.to_scalar::<T>();
        let at_one_one = value.eval(&T::one(), &T::one());
        Self {
            order,
            value,
            d_large: GreenSeries::larger_derivative(order).to_scalar(),
            d_small: d_small.to_scalar(),
            dd_small_edge,
            at_one_one,
        }
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// `G(t, s)`.
    pub fn eval(&self, p: &UnitSquarePoint<T>) -> T {
        self.eval_raw(&p.t, &p.s)
    }

    pub(crate) fn eval_raw(&self, t: &T, s: &T) -> T {
        if t.is_zero() || s.is_zero() {
            return T::zero();
        }
        if s <= t {
            self.value.eval(t, s)
        } else {
            self.value.eval(s, t)
        }
    }

    /// `G(1, 1) = 1 / ((m!)^2 (2m+1))`.
    pub fn at_one_one(&self) -> &T {
        &self.at_one_one
    }

    /// Partial derivative of `G` at a point of `(0,1] x (0,1]`.
    ///
    /// `Partial::SS` is only available on the edge `t = 1`.
    pub fn partial(&self, p: &UnitSquarePoint<T>, which: Partial) -> Result<T> {
        if p.t.is_zero() || p.s.is_zero() {
            return Err(Error::Domain(format!(
                "partial derivatives need t, s in (0, 1], got ({:?}, {:?})",
                p.t, p.s
            )));
        }
        Ok(match which {
            Partial::T => self.partial_t_raw(&p.t, &p.s),
            Partial::S => self.partial_t_raw(&p.s, &p.t),
            Partial::SS => {
                if !p.t.is_one() {
                    return Err(Error::Unsupported(
                        "second derivative in s is only available at points (1, s)".into(),
                    ));
                }
                self.dd_small_edge.eval(&p.s)
            }
        })
    }

    /// Derivative in the first argument; by symmetry the derivative in the
    /// second argument is `partial_t_raw(s, t)`.
    pub(crate) fn partial_t_raw(&self, t: &T, s: &T) -> T {
        if s <= t {
            self.d_large.eval(t, s)
        } else {
            self.d_small.eval(s, t)
        }
    }

    /// `∂²G/∂s²(1, s)` as a polynomial in `s`.
    pub fn second_partial_edge(&self) -> &Poly<T> {
        &self.dd_small_edge
    }
}

/// `G(t, s)` by the closed-form series.
pub fn green_eval<T: Scalar>(order: Order, p: &UnitSquarePoint<T>) -> T {
    GreenFunction::new(order).eval(p)
}

/// Partial derivative of `G` by its binomial-sum representation.
pub fn green_partial<T: Scalar>(order: Order, p: &UnitSquarePoint<T>, which: Partial) -> Result<T> {
    GreenFunction::new(order).partial(p, which)
}

/// Gauss–Legendre quadrature of the defining integral
/// `(m!)^-2 ∫₀^min(t,s) (t-τ)^m (s-τ)^m dτ`.
pub fn green_quadrature(order: Order, p: &UnitSquarePoint<f64>, nodes: usize) -> Result<f64> {
    if nodes < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 quadrature nodes, got {nodes}")));
    }
    let rule = GaussLegendre::new(NonZeroUsize::new(nodes).expect("nodes >= 2"));
    Ok(quadrature_with(&rule, order, p.t, p.s))
}

pub(crate) fn quadrature_with(rule: &GaussLegendre, order: Order, t: f64, s: f64) -> f64 {
    let m = order.m() as i32;
    let upper = t.min(s);
    if upper <= 0.0 {
        return 0.0;
    }
    let scale = order.inverse_factorial_squared().as_f64();
    scale * rule.integrate(0.0, upper, |tau| ((t - tau) * (s - tau)).powi(m))
}

/// `Σ_{i=0}^{M} x^i C(M,i) (1-s)^M / (i+K+1)` with `x = s/(1-s)`, which equals
/// `∫₀¹ (1-θ)^K (1-θs)^M dθ`. Defined for `0 <= s < 1`.
pub fn beta_weighted_integral<T: Scalar>(big_m: u32, big_k: u32, s: &T) -> Result<T> {
    if *s < T::zero() || *s >= T::one() {
        return Err(Error::Domain(format!(
            "beta-weighted integral needs 0 <= s < 1, got {:?}",
            s
        )));
    }
    let one_minus = T::one() - s.clone();
    let x = s.clone() / one_minus.clone();
    let mut sum = T::zero();
    let mut x_pow = T::one();
    for i in 0..=big_m as i64 {
        let w = BigRational::new(binomial(big_m as i64, i), (i + big_k as i64 + 1).into());
        sum = sum + x_pow.clone() * T::from_rational(&w);
        x_pow = x_pow * x.clone();
    }
    Ok(sum * one_minus.powi(big_m))
}

/// The same integral written in the Bernstein basis,
/// `Σ_i C(M,i) s^i (1-s)^(M-i) / (i+K+1)`. Every term is non-negative, and
/// the form stays valid at `s = 1`.
pub fn beta_integral_bernstein<T: Scalar>(big_m: u32, big_k: u32, s: &T) -> Result<T> {
    if *s < T::zero() || *s > T::one() {
        return Err(Error::Domain(format!("need 0 <= s <= 1, got {:?}", s)));
    }
    let one_minus = T::one() - s.clone();
    let mut sum = T::zero();
    for i in 0..=big_m {
        let w = BigRational::new(binomial(big_m as i64, i as i64), (i as i64 + big_k as i64 + 1).into());
        sum = sum + T::from_rational(&w) * s.powi(i) * one_minus.powi(big_m - i);
    }
    Ok(sum)
}

/// `(G(1,s), G'_s(1,s), G''_ss(1,s))` through the beta-weighted integrals:
///
/// ```text
/// G(1,s)      = s^(m+1)         / (m!)^2 · I(M=m, K=m)
/// G'_s(1,s)   = m s^m           / (m!)^2 · I(M=m, K=m-1)
/// G''_ss(1,s) = m(m-1) s^(m-1)  / (m!)^2 · I(M=m, K=m-2)
/// ```
///
/// The second derivative form needs `m >= 2`; lower orders fall back to the
/// polynomial series.
pub fn edge_triplet_beta<T: Scalar>(order: Order, s: &T) -> Result<[T; 3]> {
    let m = order.m();
    if m == 0 {
        return Err(Error::Domain("edge beta forms need m >= 1".into()));
    }
    let scale = T::from_rational(&order.inverse_factorial_squared());
    let mm = T::from_i64(m as i64);
    let g = scale.clone() * s.powi(m + 1) * beta_integral_bernstein(m, m, s)?;
    let dg = scale.clone() * mm.clone() * s.powi(m) * beta_integral_bernstein(m, m - 1, s)?;
    let ddg = if m >= 2 {
        scale * mm * T::from_i64(m as i64 - 1) * s.powi(m - 1) * beta_integral_bernstein(m, m - 2, s)?
    } else {
        GreenFunction::<T>::new(order).dd_small_edge.eval(s)
    };
    Ok([g, dg, ddg])
}
