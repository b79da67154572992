//! Univariate polynomials with rational coefficients, evaluated over ℂ.

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::linalg::Rational;

/// Coefficients from the constant term upwards, without trailing zeros.
#[derive(Debug, Clone)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
    float: Vec<f64>,
}

impl PartialEq for RatPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for RatPoly {}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let float = coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        Self { coeffs, float }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.coeffs.last().expect("non-zero polynomial")
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return (RatPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - d.coeffs.len() + 1];
        let lead_inv = d.lead().recip();
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d.degree()] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
        }
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let inv = a.lead().recip();
        RatPoly::new(a.coeffs.iter().map(|c| c * &inv).collect())
    }

    /// `z^d p(1/z)`; requires `d >= degree`.
    pub fn reversed(&self, d: usize) -> RatPoly {
        let mut c = vec![Rational::zero(); d + 1];
        for (i, v) in self.coeffs.iter().enumerate() {
            c[d - i] = v.clone();
        }
        RatPoly::new(c)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.float.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}
