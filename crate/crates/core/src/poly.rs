//! Dense univariate polynomials over a [`Scalar`] field.

use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use crate::scalar::Scalar;

/// Polynomial stored by ascending powers. Trailing zero coefficients are
/// trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: T, degree: usize) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// `a + b x`
    pub fn linear(a: T, b: T) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * T::from_i64(i as i64))
            .collect();
        Self::new(coeffs)
    }

    /// `∫₀¹ p(x) dx`
    pub fn integrate_unit(&self) -> T {
        self.coeffs
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (i, c)| acc + c.clone() / T::from_i64(i as i64 + 1))
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect())
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::constant(T::one()), |acc, _| &acc * self)
    }
}

impl Poly<BigRational> {
    /// Converts exact coefficients into another scalar type.
    pub fn to_scalar<U: Scalar>(&self) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(U::from_rational).collect())
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

macro_rules! forward_owned {
    ($($trait:ident :: $method:ident),*) => {$(
        impl<T: Scalar> $trait for Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);
