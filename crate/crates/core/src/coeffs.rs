//! Exact coefficients of `X_m(x) = Σ A_{k,m} x^k / Σ B_{k,m} x^k`.
//!
//! ```text
//! A_{k,m} = Σ_j C(m,j) C(m,k-j) f_j / (2m+k),   f_j = 2(j+m + j/(j+m-1)) / ((j+m+1)(j+m))
//! B_{k,m} = Σ_j C(m,j) C(m,k-j) g_j / (2m+k+1), g_j = 2(j+m + 1/2)   / ((j+m+1)(j+m))
//! ```
//!
//! [`convolution_oracle`] rebuilds both sequences by multiplying the
//! underlying polynomials directly, independently of the formulas above.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::combinatorics::{binomial_q, factorial, integer, ratio};
use crate::greenfn::Order;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::{Error, RationalPoly, Result};

/// Falling factorial `i(i-1)…(i-j+1)`; `1` for `j = 0` and `0` for `j < 0`.
pub fn falling_factorial(i: i64, j: i64) -> BigInt {
    if j < 0 {
        return BigInt::zero();
    }
    (0..j).fold(BigInt::one(), |acc, r| acc * (i - r))
}

fn require_order(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::Domain(format!("coefficient tables need m >= 2, got m = {m}")));
    }
    Ok(())
}

fn require_k(m: u32, k: u32) -> Result<()> {
    require_order(m)?;
    if k > 2 * m {
        return Err(Error::Domain(format!("k must lie in 0..={}, got {k}", 2 * m)));
    }
    Ok(())
}

/// `R_{m,k,j} = m^(j) k^(j) m^(k-j) / (k! j!)` with falling factorials.
pub fn r_coeff(m: u32, k: u32, j: u32) -> Result<BigRational> {
    require_k(m, k)?;
    if j > m {
        return Err(Error::Domain(format!("j must lie in 0..={m}, got {j}")));
    }
    let (m, k, j) = (m as i64, k as i64, j as i64);
    let num = falling_factorial(m, j) * falling_factorial(k, j) * falling_factorial(m, k - j);
    let den = factorial(k as u64) * factorial(j as u64);
    Ok(BigRational::new(num, den))
}

/// `f_j` and `g_j` for one index.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightPair {
    pub j: u32,
    pub f: BigRational,
    pub g: BigRational,
}

pub fn weight_f(m: u32, j: u32) -> BigRational {
    let (m, j) = (m as i64, j as i64);
    let inner = integer(j + m) + ratio(j, j + m - 1);
    integer(2) * inner / integer((j + m + 1) * (j + m))
}

pub fn weight_g(m: u32, j: u32) -> BigRational {
    let (m, j) = (m as i64, j as i64);
    integer(2) * (integer(j + m) + ratio(1, 2)) / integer((j + m + 1) * (j + m))
}

pub fn weights(m: u32) -> Result<Vec<WeightPair>> {
    require_order(m)?;
    Ok((0..=m).map(|j| WeightPair { j, f: weight_f(m, j), g: weight_g(m, j) }).collect())
}

fn convolution_weight(m: u32, k: u32, j: u32) -> BigRational {
    let (m, k, j) = (m as i64, k as i64, j as i64);
    binomial_q(m, j) * binomial_q(m, k - j)
}

/// `A_{k,m}`, summing `j = 0..=m` with `C(m, k-j) = 0` outside `0..=m`.
pub fn coeff_a(m: u32, k: u32) -> Result<BigRational> {
    require_k(m, k)?;
    let sum = (0..=m).fold(BigRational::zero(), |acc, j| acc + convolution_weight(m, k, j) * weight_f(m, j));
    Ok(sum / integer(2 * m as i64 + k as i64))
}

/// `B_{k,m}`, summing `j = 0..=m` with `C(m, k-j) = 0` outside `0..=m`.
pub fn coeff_b(m: u32, k: u32) -> Result<BigRational> {
    require_k(m, k)?;
    let sum = (0..=m).fold(BigRational::zero(), |acc, j| acc + convolution_weight(m, k, j) * weight_g(m, j));
    Ok(sum / integer(2 * m as i64 + k as i64 + 1))
}

/// Numerator and denominator coefficients of `X_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    pub order: Order,
    pub a: Vec<BigRational>,
    pub b: Vec<BigRational>,
}

impl CoeffTable {
    /// Builds the table from the closed sums for `A_{k,m}` and `B_{k,m}`.
    pub fn new(m: u32) -> Result<Self> {
        require_order(m)?;
        let a = (0..=2 * m).map(|k| coeff_a(m, k)).collect::<Result<_>>()?;
        let b = (0..=2 * m).map(|k| coeff_b(m, k)).collect::<Result<_>>()?;
        Ok(Self { order: Order::new(m), a, b })
    }

    /// `X_m(x) = Σ A_k x^k / Σ B_k x^k`.
    pub fn eval<T: Scalar>(&self, x: &T) -> T {
        let a = Poly::new(self.a.clone()).to_scalar::<T>();
        let b = Poly::new(self.b.clone()).to_scalar::<T>();
        a.eval(x) / b.eval(x)
    }

    /// `A_k / B_k` for every `k`.
    pub fn ratios(&self) -> Vec<BigRational> {
        self.a.iter().zip(&self.b).map(|(a, b)| a / b).collect()
    }
}

impl Serialize for CoeffTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CoeffTable", 3)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("A", &ExactVec(&self.a))?;
        st.serialize_field("B", &ExactVec(&self.b))?;
        st.end()
    }
}

/// Serializes a rational as `{"num": "...", "den": "..."}`.
pub struct Exact<'a>(pub &'a BigRational);

impl Serialize for Exact<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Rational", 2)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.end()
    }
}

pub struct ExactVec<'a>(pub &'a [BigRational]);

impl Serialize for ExactVec<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(Exact))
    }
}

/// `Σ_i C(m,i) x^i / (i + c)`
fn weighted_binomial_poly(m: u32, c: i64) -> RationalPoly {
    Poly::new((0..=m as i64).map(|i| binomial_q(m as i64, i) / integer(i + c)).collect())
}

/// Builds `A` and `B` by multiplying the polynomials
/// `S_c(x) = Σ_i C(m,i) x^i / (i+c)` for `c ∈ {m-1, m, m+1}`:
/// numerator `m S_m² - (m-1) S_{m-1} S_{m+1}`, denominator `S_{m+1} S_m`.
pub fn convolution_oracle(m: u32) -> Result<CoeffTable> {
    require_order(m)?;
    let mi = m as i64;
    let lo = weighted_binomial_poly(m, mi - 1);
    let mid = weighted_binomial_poly(m, mi);
    let hi = weighted_binomial_poly(m, mi + 1);
    let num = &(&mid * &mid).scale(&integer(mi)) - &(&lo * &hi).scale(&integer(mi - 1));
    let den = &hi * &mid;
    let len = 2 * m as usize + 1;
    Ok(CoeffTable {
        order: Order::new(m),
        a: (0..len).map(|k| num.coeff(k)).collect(),
        b: (0..len).map(|k| den.coeff(k)).collect(),
    })
}

/// Outcome of the exact monotonicity check of `A_k / B_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma3Result {
    pub order: Order,
    pub holds: bool,
    /// `A_{k+1} B_k - A_k B_{k+1}` for `k = 0..2m-1`.
    pub margins: Vec<BigRational>,
}

impl Lemma3Result {
    pub fn min_margin(&self) -> Option<&BigRational> {
        self.margins.iter().min()
    }
}

impl Serialize for Lemma3Result {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Lemma3Result", 4)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("holds", &self.holds)?;
        st.serialize_field("min_margin", &self.min_margin().map(|v| v.to_string()))?;
        st.serialize_field("margins", &ExactVec(&self.margins))?;
        st.end()
    }
}

/// Checks `A_{k+1} B_k - A_k B_{k+1} > 0` exactly for every `k`.
pub fn verify_lemma3(m: u32) -> Result<Lemma3Result> {
    let table = CoeffTable::new(m)?;
    if let Some(index) = table.b.iter().position(|b| !b.is_positive()) {
        return Err(Error::NonPositive { index });
    }
    let margins: Vec<BigRational> = (0..2 * m as usize)
        .map(|k| &table.a[k + 1] * &table.b[k] - &table.a[k] * &table.b[k + 1])
        .collect();
    let holds = margins.iter().all(|d| d.is_positive());
    Ok(Lemma3Result { order: table.order, holds, margins })
}

/// Runs [`verify_lemma3`] for each order in parallel, keeping input order.
pub fn verify_lemma3_range(orders: &[u32]) -> Result<Vec<Lemma3Result>> {
    orders.par_iter().map(|&m| verify_lemma3(m)).collect()
}

/// `f_i g_j - f_j g_i` from the weight values, without an ordering guard.
pub fn weight_cross_difference(m: u32, i: u32, j: u32) -> BigRational {
    weight_f(m, i) * weight_g(m, j) - weight_f(m, j) * weight_g(m, i)
}

/// Closed form
/// `2(i-j)((m-1-j)i + (m-1)(3m+j)) / ((i+m)(i+m-1)(i+m+1)(j+m)(j+m+1)(j+m-1))`.
pub fn weight_cross_closed_form(m: u32, i: u32, j: u32) -> BigRational {
    let (m, i, j) = (m as i64, i as i64, j as i64);
    let num = 2 * (i - j) * ((m - 1 - j) * i + (m - 1) * (3 * m + j));
    let den = BigInt::from((i + m) * (i + m - 1) * (i + m + 1)) * BigInt::from((j + m) * (j + m + 1) * (j + m - 1));
    BigRational::new(BigInt::from(num), den)
}

/// `f_i g_j - f_j g_i` for `0 <= j < i <= m`, computed directly and by the
/// closed form; the two must agree and be positive.
pub fn cross_positivity(m: u32, i: u32, j: u32) -> Result<BigRational> {
    require_order(m)?;
    if !(j < i && i <= m) {
        return Err(Error::Ordering(format!("need 0 <= j < i <= {m}, got i = {i}, j = {j}")));
    }
    let direct = weight_cross_difference(m, i, j);
    let closed = weight_cross_closed_form(m, i, j);
    if direct != closed {
        return Err(Error::IdentityMismatch(format!(
            "f_i g_j - f_j g_i = {direct} but the closed form gives {closed} (m={m}, i={i}, j={j})"
        )));
    }
    if !direct.is_positive() {
        return Err(Error::IdentityMismatch(format!("f_i g_j - f_j g_i = {direct} is not positive")));
    }
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falling_factorial_convention() {
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(falling_factorial(3, -1), BigInt::zero());
        assert_eq!(falling_factorial(7, 0), BigInt::one());
        assert_eq!(falling_factorial(3, 5), BigInt::zero());
        assert_eq!(falling_factorial(-2, 2), BigInt::from(6));
    }

    #[test]
    fn r_coeff_examples() {
        assert_eq!(r_coeff(2, 0, 0).unwrap(), integer(1));
        assert_eq!(r_coeff(4, 1, 3).unwrap(), integer(0));
        assert!(r_coeff(2, 5, 0).is_err());
        assert!(r_coeff(1, 0, 0).is_err());
    }

    #[test]
    fn r_coeff_is_product_of_binomials() {
        for m in 2..8u32 {
            for k in 0..=2 * m {
                for j in 0..=m {
                    assert_eq!(r_coeff(m, k, j).unwrap(), convolution_weight(m, k, j), "m={m} k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn first_coefficients() {
        for m in 2..=10u32 {
            let q = ratio(1, (m * (m + 1)) as i64);
            assert_eq!(coeff_a(m, 0).unwrap(), q);
            assert_eq!(coeff_b(m, 0).unwrap(), q);
        }
        assert_eq!(coeff_a(2, 4).unwrap(), ratio(7, 120));
        assert_eq!(ratio(2, 16) - ratio(1, 15), ratio(7, 120));
    }

    #[test]
    fn weights_are_positive() {
        for m in 2..30 {
            for w in weights(m).unwrap() {
                assert!(w.f.is_positive() && w.g.is_positive());
            }
        }
        assert!(weights(1).is_err());
    }

    #[test]
    fn oracle_matches_small_table() {
        let t = CoeffTable::new(2).unwrap();
        assert_eq!(t, convolution_oracle(2).unwrap());
        assert_eq!(t.a.len(), 5);
    }

    #[test]
    fn ratio_check_m2() {
        let r = verify_lemma3(2).unwrap();
        assert!(r.holds);
        assert_eq!(r.margins.len(), 4);
        assert!(r.margins.iter().all(|v| v.is_positive()));
        let t = CoeffTable::new(2).unwrap();
        let ratios = t.ratios();
        assert_eq!(ratios[0], integer(1));
        assert!(ratios[4] > integer(1));
    }

    #[test]
    fn cross_positivity_examples() {
        assert!(cross_positivity(2, 1, 0).unwrap().is_positive());
        assert!(cross_positivity(2, 2, 1).unwrap().is_positive());
        assert!(matches!(cross_positivity(2, 1, 1), Err(Error::Ordering(_))));
        assert!(weight_cross_difference(3, 2, 2).is_zero());
    }

    #[test]
    fn coefficient_table_json_keeps_digits() {
        let t = CoeffTable::new(2).unwrap();
        let json = serde_json::to_value(&t).unwrap();
        assert_eq!(json["A"][4]["num"], "7");
        assert_eq!(json["A"][4]["den"], "120");
        assert_eq!(json["order"]["m"], 2);
    }
}
