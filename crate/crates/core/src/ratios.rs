//! The `Q` family of rational functions and the inequalities built on it.
//!
//! With `Q(s) = G(1,s) / G'_s(1,s) = s·Q̂(s) / (2m+1)`:
//!
//! ```text
//! Q̂(s) = Σ_i s^i (-1)^i C(2m+1, m-i) / Σ_i s^i (-1)^i C(2m, m-i)
//! Q̃(s) = Σ_{i<m} s^i (-1)^i C(2m, m-1-i) / Σ_i s^i (-1)^i C(2m, m-i)
//! ```
//!
//! The alternating forms cancel badly in floating point near `s = 1`, so the
//! default evaluation goes through the beta-weighted integrals, which are
//! sums with non-negative terms:
//!
//! ```text
//! Q̂(s) = (2m+1)/m · I(m, m; s) / I(m, m-1; s)
//! Q̃(s) =            I(m-1, m; s) / I(m, m-1; s)
//! ```
//!
//! where `I(M, K; s) = ∫₀¹ (1-θ)^K (1-θs)^M dθ` is written in the Bernstein
//! basis. The alternating forms stay available as exact polynomials.

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, integer};
use crate::greenfn::{GreenFunction, Order, Partial, UnitSquarePoint};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::{Error, RationalPoly, Result};

/// Floating slack used by [`is_increasing`] sweeps.
pub const FLOAT_SLACK: f64 = 1e-14;

/// Cached non-negative weights for evaluating `Q̂`, `Q̃` and `Q` quickly.
#[derive(Debug, Clone)]
pub struct QFamily<T> {
    order: Order,
    /// `C(m,i) / (i+m+1)`, i = 0..=m
    hat_num: Vec<T>,
    /// `C(m,i) / (i+m)`, i = 0..=m
    den: Vec<T>,
    /// `C(m-1,i) / (i+m+1)`, i = 0..m
    tilde_num: Vec<T>,
    prefactor: T,
}

fn beta_weights<T: Scalar>(big_m: u32, offset: u32) -> Vec<T> {
    (0..=big_m as i64)
        .map(|i| {
            T::from_rational(&BigRational::new(
                binomial(big_m as i64, i),
                (i + offset as i64).into(),
            ))
        })
        .collect()
}

/// `Σ_i w_i s^i (1-s)^(n-i)` with `n = len - 1`.
fn bernstein<T: Scalar>(weights: &[T], s: &T) -> T {
    let n = weights.len() as u32 - 1;
    let one_minus = T::one() - s.clone();
    // Horner-like: Σ w_i s^i u^(n-i) = u^n Σ w_i (s/u)^i is unsafe at u = 0,
    // so accumulate both powers explicitly.
    let mut acc = T::zero();
    let mut s_pow = T::one();
    for (i, w) in weights.iter().enumerate() {
        acc = acc + w.clone() * s_pow.clone() * one_minus.powi(n - i as u32);
        s_pow = s_pow * s.clone();
    }
    acc
}

fn require_unit<T: Scalar>(s: &T, what: &str) -> Result<()> {
    if *s < T::zero() || *s > T::one() {
        return Err(Error::Domain(format!("{what} needs 0 <= s <= 1, got {:?}", s)));
    }
    Ok(())
}

impl<T: Scalar> QFamily<T> {
    pub fn new(order: Order) -> Result<Self> {
        let m = order.m();
        if m == 0 {
            return Err(Error::Domain("the Q family needs m >= 1".into()));
        }
        Ok(Self {
            order,
            hat_num: beta_weights(m, m + 1),
            den: beta_weights(m, m),
            tilde_num: beta_weights(m - 1, m + 1),
            prefactor: T::from_ratio(2 * m as i64 + 1, m as i64),
        })
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// `Q̂(s)` on `[0, 1]`; `s = 0` gives the limit `C(2m+1,m) / C(2m,m)`.
    pub fn q_hat(&self, s: &T) -> Result<T> {
        require_unit(s, "Q̂")?;
        Ok(self.prefactor.clone() * bernstein(&self.hat_num, s) / bernstein(&self.den, s))
    }

    /// `Q̃(s)` on `[0, 1]`.
    pub fn q_tilde(&self, s: &T) -> Result<T> {
        require_unit(s, "Q̃")?;
        Ok(bernstein(&self.tilde_num, s) / bernstein(&self.den, s))
    }

    /// `Q(s) = s Q̂(s) / (2m+1)`.
    pub fn q(&self, s: &T) -> Result<T> {
        let two_m_plus_one = T::from_i64(2 * self.order.m() as i64 + 1);
        Ok(s.clone() * self.q_hat(s)? / two_m_plus_one)
    }

    /// Margin `Q(s)/Q(t) - (s/t) Q̃(s/t)`, positive when the stationarity
    /// inequality holds. Needs `0 < s < t < 1`.
    pub fn l10_margin(&self, t: &T, s: &T) -> Result<T> {
        check_ordered(t, s, false)?;
        let k = s.clone() / t.clone();
        Ok(self.q(s)? / self.q(t)? - k.clone() * self.q_tilde(&k)?)
    }

    /// Margin `Q̂(s)/Q̂(t) - (Q̂(s/t) - 1)`. Needs `0 < s < t <= 1`.
    pub fn l11_margin(&self, t: &T, s: &T) -> Result<T> {
        check_ordered(t, s, true)?;
        let k = s.clone() / t.clone();
        Ok(self.q_hat(s)? / self.q_hat(t)? - (self.q_hat(&k)? - T::one()))
    }
}

fn check_ordered<T: Scalar>(t: &T, s: &T, allow_t_one: bool) -> Result<()> {
    if *s <= T::zero() {
        return Err(Error::Domain(format!("need s > 0, got {:?}", s)));
    }
    if *t > T::one() || (!allow_t_one && t.is_one()) {
        return Err(Error::Domain(format!("t = {:?} is outside the allowed range", t)));
    }
    if s >= t {
        return Err(Error::Ordering(format!("need s < t, got s = {:?}, t = {:?}", s, t)));
    }
    Ok(())
}

pub fn q_hat<T: Scalar>(order: Order, s: &T) -> Result<T> {
    QFamily::new(order)?.q_hat(s)
}

pub fn q_tilde<T: Scalar>(order: Order, s: &T) -> Result<T> {
    QFamily::new(order)?.q_tilde(s)
}

pub fn q_func<T: Scalar>(order: Order, s: &T) -> Result<T> {
    QFamily::new(order)?.q(s)
}

/// Numerator and denominator of `Q̂` as alternating-sign polynomials.
pub fn q_hat_polys(order: Order) -> (RationalPoly, RationalPoly) {
    let m = order.m() as i64;
    (alternating_poly(m + 1, |i| binomial(2 * m + 1, m - i)), q_denominator_poly(order))
}

/// Numerator and denominator of `Q̃` as alternating-sign polynomials.
pub fn q_tilde_polys(order: Order) -> (RationalPoly, RationalPoly) {
    let m = order.m() as i64;
    (alternating_poly(m, |i| binomial(2 * m, m - 1 - i)), q_denominator_poly(order))
}

fn q_denominator_poly(order: Order) -> RationalPoly {
    let m = order.m() as i64;
    alternating_poly(m + 1, |i| binomial(2 * m, m - i))
}

fn alternating_poly(len: i64, magnitude: impl Fn(i64) -> num_bigint::BigInt) -> RationalPoly {
    Poly::new(
        (0..len)
            .map(|i| {
                let c = BigRational::from_integer(magnitude(i));
                if i % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect(),
    )
}

/// `Q̂(s)` through the alternating sums.
pub fn q_hat_alternating<T: Scalar>(order: Order, s: &T) -> Result<T> {
    if order.m() == 0 {
        return Err(Error::Domain("the Q family needs m >= 1".into()));
    }
    require_unit(s, "Q̂")?;
    let (num, den) = q_hat_polys(order);
    Ok(num.to_scalar::<T>().eval(s) / den.to_scalar::<T>().eval(s))
}

/// `Q̃(s)` through the alternating sums.
pub fn q_tilde_alternating<T: Scalar>(order: Order, s: &T) -> Result<T> {
    if order.m() == 0 {
        return Err(Error::Domain("the Q family needs m >= 1".into()));
    }
    require_unit(s, "Q̃")?;
    let (num, den) = q_tilde_polys(order);
    Ok(num.to_scalar::<T>().eval(s) / den.to_scalar::<T>().eval(s))
}

/// `F̂(s) = s Q̂'(s) / Q̂(s)` from the alternating polynomials.
pub fn f_hat<T: Scalar>(order: Order, s: &T) -> Result<T> {
    if order.m() == 0 {
        return Err(Error::Domain("the Q family needs m >= 1".into()));
    }
    require_unit(s, "F̂")?;
    let (num, den) = q_hat_polys(order);
    let (num, den) = (num.to_scalar::<T>(), den.to_scalar::<T>());
    let (n, d) = (num.eval(s), den.eval(s));
    let (dn, dd) = (num.derivative().eval(s), den.derivative().eval(s));
    Ok(s.clone() * (dn * d.clone() - n.clone() * dd) / (n * d))
}

/// `s / (1 - s)`, a strictly increasing bijection `(0,1) → (0,∞)`.
pub fn x_substitution<T: Scalar>(s: &T) -> Result<T> {
    if *s <= T::zero() || *s >= T::one() {
        return Err(Error::Domain(format!("x = s/(1-s) needs 0 < s < 1, got {:?}", s)));
    }
    Ok(s.clone() / (T::one() - s.clone()))
}

/// Inverse of [`x_substitution`]: `s = x / (1 + x)`.
pub fn s_from_x<T: Scalar>(x: &T) -> Result<T> {
    if *x <= T::zero() {
        return Err(Error::Domain(format!("need x > 0, got {:?}", x)));
    }
    Ok(x.clone() / (T::one() + x.clone()))
}

/// `Σ_i C(m,i) x^i / (i + c)`.
fn weighted_binomial_sum<T: Scalar>(m: u32, c: i64, x: &T) -> T {
    let mut acc = T::zero();
    for i in (0..=m as i64).rev() {
        let w = BigRational::new(binomial(m as i64, i), (i + c).into());
        acc = acc * x.clone() + T::from_rational(&w);
    }
    acc
}

/// `X_m(x) = m S_m/S_{m+1} - (m-1) S_{m-1}/S_m` with
/// `S_c(x) = Σ_i C(m,i) x^i / (i+c)`, for `m >= 2` and `x > 0`.
pub fn x_m<T: Scalar>(order: Order, x: &T) -> Result<T> {
    let m = order.m();
    if m < 2 {
        return Err(Error::Domain(format!("X_m needs m >= 2, got m = {m}")));
    }
    if *x <= T::zero() {
        return Err(Error::Domain(format!("X_m needs x > 0, got {:?}", x)));
    }
    let mi = m as i64;
    let s_lo = weighted_binomial_sum(m, mi - 1, x);
    let s_mid = weighted_binomial_sum(m, mi, x);
    let s_hi = weighted_binomial_sum(m, mi + 1, x);
    let mm = T::from_i64(mi);
    Ok(mm.clone() * s_mid.clone() / s_hi - (mm - T::one()) * s_lo / s_mid)
}

/// The logarithmic derivative `F(s) = s Q'(s) / Q(s)` on `(0, 1)`.
///
/// For `m >= 2` this evaluates the three-sum form in `x = s/(1-s)`; `m = 1`
/// uses the closed form [`f_closed_m1`].
pub fn f_func<T: Scalar>(order: Order, s: &T) -> Result<T> {
    match order.m() {
        0 => Err(Error::Domain("F needs m >= 1".into())),
        1 => {
            x_substitution(s)?;
            Ok(f_closed_m1(s))
        }
        _ => x_m(order, &x_substitution(s)?),
    }
}

/// `F(y) = (y² - 4y + 6) / ((3 - y)(2 - y))` for `m = 1`.
pub fn f_closed_m1<T: Scalar>(y: &T) -> T {
    let y2 = y.clone() * y.clone();
    (y2 - T::from_i64(4) * y.clone() + T::from_i64(6))
        / ((T::from_i64(3) - y.clone()) * (T::from_i64(2) - y.clone()))
}

/// `F'(y) = (6 - y²) / ((3 - y)² (2 - y)²)` for `m = 1`.
pub fn f_closed_m1_derivative<T: Scalar>(y: &T) -> T {
    let a = T::from_i64(3) - y.clone();
    let b = T::from_i64(2) - y.clone();
    (T::from_i64(6) - y.clone() * y.clone()) / (a.clone() * a * b.clone() * b)
}

/// `F(s) = s (G'_s(1,s)/G(1,s) - G''_ss(1,s)/G'_s(1,s))` from the Green
/// function series directly.
pub fn f_log_derivative<T: Scalar>(order: Order, s: &T) -> Result<T> {
    if order.m() == 0 {
        return Err(Error::Domain("F needs m >= 1".into()));
    }
    x_substitution(s)?;
    let g = GreenFunction::<T>::new(order);
    let p = UnitSquarePoint::new(T::one(), s.clone())?;
    let v = g.eval(&p);
    let d = g.partial(&p, Partial::S)?;
    let dd = g.partial(&p, Partial::SS)?;
    Ok(s.clone() * (d.clone() / v - dd / d))
}

/// Signed margin of the stationarity inequality: `Q(s)/Q(t) - (s/t)Q̃(s/t)`.
pub fn check_l10<T: Scalar>(order: Order, t: &T, s: &T) -> Result<T> {
    QFamily::new(order)?.l10_margin(t, s)
}

/// Signed margin `Q̂(s)/Q̂(t) - (Q̂(s/t) - 1)`.
pub fn check_l11<T: Scalar>(order: Order, t: &T, s: &T) -> Result<T> {
    QFamily::new(order)?.l11_margin(t, s)
}

/// Both sides of the stationarity inequality built from `G` itself:
/// `[G(1,s)/G'_s(1,s)] / [G(t,1)/G'_t(t,1)]` and `G'_t(t,s) / G'_s(t,s)`.
pub fn l10_sides_green<T: Scalar>(order: Order, t: &T, s: &T) -> Result<(T, T)> {
    check_ordered(t, s, false)?;
    let g = GreenFunction::<T>::new(order);
    let one = T::one();
    let p_s = UnitSquarePoint::new(one.clone(), s.clone())?;
    let p_t = UnitSquarePoint::new(t.clone(), one)?;
    let p = UnitSquarePoint::new(t.clone(), s.clone())?;
    let lhs = (g.eval(&p_s) / g.partial(&p_s, Partial::S)?) / (g.eval(&p_t) / g.partial(&p_t, Partial::T)?);
    let rhs = g.partial(&p, Partial::T)? / g.partial(&p, Partial::S)?;
    Ok((lhs, rhs))
}

/// `Q̂(k t) / Q̂(t)`; for fixed `k ∈ (0,1)` this decreases in `t`.
pub fn scaled_q_hat_ratio<T: Scalar>(family: &QFamily<T>, k: &T, t: &T) -> Result<T> {
    Ok(family.q_hat(&(k.clone() * t.clone()))? / family.q_hat(t)?)
}

/// `true` iff `A_j/B_j` never decreases and is not constant.
///
/// When it holds, `Σ A_j x^j / Σ B_j x^j` is strictly increasing on `x > 0`.
pub fn monotone_ratio_check<T: Scalar>(a: &[T], b: &[T]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    if let Some(index) = a.iter().chain(b).position(|v| *v <= T::zero()) {
        return Err(Error::NonPositive { index: index % a.len().max(1) });
    }
    let mut strict = false;
    for j in 1..a.len() {
        // A_j/B_j vs A_{j-1}/B_{j-1}, cross-multiplied (all entries positive)
        let lhs = a[j].clone() * b[j - 1].clone();
        let rhs = a[j - 1].clone() * b[j].clone();
        if lhs < rhs {
            return Ok(false);
        }
        strict |= lhs > rhs;
    }
    Ok(strict)
}

/// `Σ A_j x^j / Σ B_j x^j`.
pub fn ratio_function<T: Scalar>(a: &[T], b: &[T], x: &T) -> T {
    Poly::new(a.to_vec()).eval(x) / Poly::new(b.to_vec()).eval(x)
}

/// Derivative of [`ratio_function`] through the pairwise form
/// `Σ_{i<j} B_i B_j (A_j/B_j - A_i/B_i)(j-i) x^(i+j) / (x (Σ B_j x^j)²)`.
pub fn ratio_function_derivative<T: Scalar>(a: &[T], b: &[T], x: &T) -> T {
    let mut num = T::zero();
    for j in 0..a.len() {
        for i in 0..j {
            let diff = a[j].clone() / b[j].clone() - a[i].clone() / b[i].clone();
            num = num
                + b[i].clone() * b[j].clone() * diff * T::from_i64((j - i) as i64) * x.powi((i + j) as u32);
        }
    }
    let den = Poly::new(b.to_vec()).eval(x);
    num / (x.clone() * den.clone() * den)
}

/// `true` when each value exceeds its predecessor by more than `-slack`.
/// Pass a zero slack for a strict check.
pub fn is_increasing<T: Scalar>(values: &[T], slack: &T) -> bool {
    values.windows(2).all(|w| {
        let step = w[1].clone() - w[0].clone();
        if slack.is_zero() {
            step > T::zero()
        } else {
            step > -slack.clone()
        }
    })
}

/// One ordered grid pair of an inequality sweep.
#[derive(Debug, Clone, Serialize)]
pub struct MarginRow {
    pub s: f64,
    pub t: f64,
    /// Absent on `t = 1`, where only the reduced inequality is defined.
    pub l10: Option<f64>,
    pub l11: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalitySweep {
    pub order: Order,
    pub grid_n: usize,
    pub pairs_checked: usize,
    pub min_l10_margin: f64,
    pub min_l11_margin: f64,
    pub failures: Vec<MarginRow>,
}

impl InequalitySweep {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Both margins at every pair `0 < s < t <= 1` of the uniform grid
/// `i / (grid_n - 1)`, ordered by `t` then `s`.
pub fn margin_rows(order: Order, grid_n: usize) -> Result<Vec<MarginRow>> {
    if grid_n < 3 {
        return Err(Error::InvalidArgument(format!("grid_n must be >= 3, got {grid_n}")));
    }
    let family = QFamily::<f64>::new(order)?;
    let h = (grid_n - 1) as f64;
    let rows: Result<Vec<Vec<MarginRow>>> = (2..grid_n)
        .into_par_iter()
        .map(|ti| {
            let t = ti as f64 / h;
            (1..ti)
                .map(|si| {
                    let s = si as f64 / h;
                    let l10 = if ti + 1 < grid_n { Some(family.l10_margin(&t, &s)?) } else { None };
                    Ok(MarginRow { s, t, l10, l11: family.l11_margin(&t, &s)? })
                })
                .collect()
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

/// Checks both inequalities on every ordered pair of the grid.
pub fn sweep_inequalities(order: Order, grid_n: usize) -> Result<InequalitySweep> {
    let rows = margin_rows(order, grid_n)?;
    let min_l10_margin = rows.iter().filter_map(|r| r.l10).fold(f64::INFINITY, f64::min);
    let min_l11_margin = rows.iter().map(|r| r.l11).fold(f64::INFINITY, f64::min);
    let pairs_checked = rows.len();
    let failures = rows
        .into_iter()
        .filter(|r| r.l11 <= 0.0 || r.l10.is_some_and(|v| v <= 0.0))
        .collect();
    Ok(InequalitySweep { order, grid_n, pairs_checked, min_l10_margin, min_l11_margin, failures })
}

/// `Q̃ + 1 - Q̂` over the common denominator, as a polynomial. It is the zero
/// polynomial exactly when the identity `Q̃ + 1 = Q̂` holds coefficientwise.
pub fn tilde_hat_residual(order: Order) -> RationalPoly {
    let (tilde_num, den) = q_tilde_polys(order);
    let (hat_num, _) = q_hat_polys(order);
    &(&tilde_num + &den) - &hat_num
}

/// `Q̂(1)` computed from the alternating sums with exact rationals.
pub fn q_hat_at_one_exact(order: Order) -> Result<BigRational> {
    q_hat_alternating(order, &integer(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::ratio;

    type Q = BigRational;

    #[test]
    fn q_hat_examples() {
        for m in 1..8 {
            assert_eq!(q_hat(Order::new(m), &integer(1)).unwrap(), integer(2));
        }
        let o = Order::new(1);
        for s in [ratio(1, 3), ratio(1, 2), ratio(9, 10)] {
            let expected = (integer(3) - s.clone()) / (integer(2) - s.clone());
            assert_eq!(q_hat(o, &s).unwrap(), expected);
        }
        assert_eq!(q_hat(o, &integer(0)).unwrap(), ratio(3, 2));
        assert!(matches!(q_hat(o, &ratio(3, 2)), Err(Error::Domain(_))));
        assert!(matches!(q_hat::<f64>(Order::new(0), &0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn q_hat_limit_at_zero_matches_binomial_ratio() {
        for m in 1..10i64 {
            let o = Order::new(m as u32);
            let limit = BigRational::new(binomial(2 * m + 1, m), binomial(2 * m, m));
            assert_eq!(q_hat(o, &integer(0)).unwrap(), limit);
            assert_eq!(q_hat_alternating(o, &integer(0)).unwrap(), limit);
        }
    }

    #[test]
    fn q_tilde_examples() {
        let o = Order::new(1);
        for s in [ratio(1, 4), ratio(2, 3)] {
            assert_eq!(q_tilde(o, &s).unwrap(), integer(1) / (integer(2) - s.clone()));
        }
        for m in 1..8 {
            assert_eq!(q_tilde(Order::new(m), &integer(1)).unwrap(), integer(1));
        }
    }

    #[test]
    fn positive_and_alternating_forms_agree_exactly() {
        for m in 1..10 {
            let o = Order::new(m);
            for s in [ratio(0, 1), ratio(1, 7), ratio(1, 2), ratio(5, 6), ratio(1, 1)] {
                assert_eq!(q_hat(o, &s).unwrap(), q_hat_alternating(o, &s).unwrap());
                assert_eq!(q_tilde(o, &s).unwrap(), q_tilde_alternating(o, &s).unwrap());
                assert_eq!(q_tilde(o, &s).unwrap() + integer(1), q_hat(o, &s).unwrap());
            }
        }
    }

    #[test]
    fn q_func_examples() {
        assert_eq!(q_func(Order::new(1), &integer(1)).unwrap(), ratio(2, 3));
        assert_eq!(q_func(Order::new(3), &integer(0)).unwrap(), integer(0));
        for m in 1..7 {
            let o = Order::new(m);
            let g = GreenFunction::<f64>::new(o);
            for s in [0.1, 0.45, 0.8, 0.99] {
                let p = UnitSquarePoint::new(1.0, s).unwrap();
                let direct = g.eval(&p) / g.partial(&p, Partial::S).unwrap();
                let q = q_func(o, &s).unwrap();
                assert!((direct - q).abs() <= 1e-12 * q.abs(), "m={m} s={s}");
            }
        }
    }

    #[test]
    fn f_closed_m1_values() {
        assert_eq!(f_closed_m1(&integer(0)), integer(1));
        assert_eq!(f_closed_m1(&integer(1)), ratio(3, 2));
        let y = ratio(1, 3);
        assert_eq!(f_func(Order::new(1), &y).unwrap(), f_closed_m1(&y));
        assert_eq!(f_log_derivative(Order::new(1), &y).unwrap(), f_closed_m1(&y));
    }

    #[test]
    fn f_func_m2_at_half() {
        // x = 1: S_c(1) = 1/c + 2/(c+1) + 1/(c+2)
        let s_c = |c: i64| ratio(1, c) + ratio(2, c + 1) + ratio(1, c + 2);
        let expected = integer(2) * s_c(2) / s_c(3) - s_c(1) / s_c(2);
        let o = Order::new(2);
        assert_eq!(f_func(o, &ratio(1, 2)).unwrap(), expected);
        assert_eq!(x_m(o, &integer(1)).unwrap(), expected);
        assert_eq!(f_log_derivative(o, &ratio(1, 2)).unwrap(), expected);
    }

    #[test]
    fn f_func_domain() {
        assert!(matches!(f_func(Order::new(2), &0.0), Err(Error::Domain(_))));
        assert!(matches!(f_func(Order::new(2), &1.0), Err(Error::Domain(_))));
        assert!(matches!(f_func(Order::new(0), &0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn log_derivatives_of_q_and_q_hat_differ_by_one() {
        for m in 1..8 {
            let o = Order::new(m);
            for s in [ratio(1, 9), ratio(1, 2), ratio(4, 5)] {
                let f = f_log_derivative(o, &s).unwrap();
                assert_eq!(f, f_hat(o, &s).unwrap() + integer(1));
            }
        }
    }

    #[test]
    fn substitution() {
        assert_eq!(x_substitution(&ratio(1, 2)).unwrap(), integer(1));
        assert_eq!(x_substitution(&ratio(1, 4)).unwrap(), ratio(1, 3));
        assert!(x_substitution(&integer(1)).is_err());
        let s = ratio(7, 11);
        assert_eq!(s_from_x(&x_substitution(&s).unwrap()).unwrap(), s);
    }

    #[test]
    fn inequality_examples() {
        let o = Order::new(1);
        assert!(check_l10(o, &ratio(1, 2), &ratio(1, 4)).unwrap() > integer(0));
        assert!(check_l11(o, &ratio(2, 3), &ratio(1, 3)).unwrap() > integer(0));
        assert!(matches!(check_l10(o, &ratio(1, 4), &ratio(1, 2)), Err(Error::Ordering(_))));
        assert!(matches!(check_l10(o, &integer(1), &ratio(1, 2)), Err(Error::Domain(_))));
        assert!(check_l11(o, &integer(1), &ratio(1, 2)).is_ok());
    }

    #[test]
    fn l11_at_t_one_reduces_to_q_hat_below_two() {
        for m in 1..6 {
            let o = Order::new(m);
            for s in [ratio(1, 5), ratio(3, 5)] {
                let margin = check_l11(o, &integer(1), &s).unwrap();
                assert_eq!(margin, integer(1) - q_hat(o, &s).unwrap() / integer(2));
            }
        }
    }

    #[test]
    fn l10_is_scaled_l11_and_matches_green_quotients() {
        for m in 1..6 {
            let o = Order::new(m);
            let (t, s) = (ratio(4, 5), ratio(1, 3));
            let l10 = check_l10(o, &t, &s).unwrap();
            let l11 = check_l11(o, &t, &s).unwrap();
            assert_eq!(l10, s.clone() / t.clone() * l11);
            let (lhs, rhs) = l10_sides_green(o, &t, &s).unwrap();
            assert_eq!(lhs - rhs, l10);
        }
    }

    #[test]
    fn monotone_ratio_examples() {
        let q = |v: &[i64]| v.iter().map(|&x| integer(x)).collect::<Vec<Q>>();
        assert!(monotone_ratio_check(&q(&[1, 2]), &q(&[1, 1])).unwrap());
        assert!(!monotone_ratio_check(&q(&[3, 4, 5]), &q(&[3, 4, 5])).unwrap());
        assert!(!monotone_ratio_check(&q(&[2, 1]), &q(&[1, 1])).unwrap());
        assert!(matches!(monotone_ratio_check(&q(&[1, 2]), &q(&[1])), Err(Error::LengthMismatch { .. })));
        assert!(matches!(monotone_ratio_check(&q(&[1, 0]), &q(&[1, 1])), Err(Error::NonPositive { index: 1 })));
    }

    #[test]
    fn q_hat_sequence_ratios_increase() {
        // Q̂ = (2m+1)/m · Σ A_i x^i / Σ B_i x^i with A_i/B_i = (i+m)/(i+m+1).
        for m in 1..12u32 {
            let a: Vec<Q> = beta_weights(m, m + 1);
            let b: Vec<Q> = beta_weights(m, m);
            assert!(monotone_ratio_check(&a, &b).unwrap());
            for (i, (ai, bi)) in a.iter().zip(&b).enumerate() {
                let i = i as i64;
                assert_eq!(ai.clone() / bi.clone(), ratio(i + m as i64, i + m as i64 + 1));
            }
            assert!(!monotone_ratio_check(&b, &a).unwrap());
        }
    }

    #[test]
    fn ratio_derivative_matches_quotient_rule() {
        let a: Vec<Q> = [1, 3, 2, 7].iter().map(|&v| integer(v)).collect();
        let b: Vec<Q> = [2, 1, 5, 1].iter().map(|&v| integer(v)).collect();
        let (pa, pb) = (Poly::new(a.clone()), Poly::new(b.clone()));
        for x in [ratio(1, 3), integer(2), ratio(7, 2)] {
            let (na, nb) = (pa.eval(&x), pb.eval(&x));
            let quotient = (pa.derivative().eval(&x) * nb.clone() - na * pb.derivative().eval(&x)) / (nb.clone() * nb);
            assert_eq!(ratio_function_derivative(&a, &b, &x), quotient);
        }
    }

    #[test]
    fn increasing_helper() {
        assert!(is_increasing(&[1.0, 2.0, 3.0], &0.0));
        assert!(!is_increasing(&[1.0, 1.0], &0.0));
        assert!(is_increasing(&[1.0, 1.0 - 1e-16], &FLOAT_SLACK));
        assert!(!is_increasing(&[integer(1), integer(1)], &integer(0)));
    }

    #[test]
    fn sweep_rejects_tiny_grid() {
        assert!(matches!(sweep_inequalities(Order::new(1), 2), Err(Error::InvalidArgument(_))));
        let sweep = sweep_inequalities(Order::new(1), 11).unwrap();
        // pairs 0 < s < t <= 1 on {0, .1, ..., 1}
        assert_eq!(sweep.pairs_checked, 45);
        assert!(sweep.passed());
    }
}
