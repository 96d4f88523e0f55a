use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Polynomial;
use crate::error::{Error, Result};

/// `numerator / denominator` in lowest terms with a monic denominator.
///
/// Every constructor canonicalizes, so two rational functions are equal as
/// functions exactly when they are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl RationalFunction {
    /// # Panics
    /// If `denominator` is the zero polynomial.
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Self {
        assert!(!denominator.is_zero(), "rational function with zero denominator");
        if numerator.is_zero() {
            return RationalFunction::zero();
        }
        let g = numerator.gcd(&denominator);
        let (num, _) = numerator.div_rem(&g);
        let (den, _) = denominator.div_rem(&g);
        let lc_inv = den.leading().expect("nonzero denominator").recip();
        RationalFunction {
            numerator: num.scale(&lc_inv),
            denominator: den.scale(&lc_inv),
        }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction::new(p, Polynomial::one())
    }

    pub fn zero() -> Self {
        RationalFunction {
            numerator: Polynomial::zero(),
            denominator: Polynomial::one(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        RationalFunction::from_polynomial(Polynomial::constant(c))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Re-runs canonicalization; a no-op on any value built through the
    /// public API.
    pub fn canonicalize(&self) -> Self {
        RationalFunction::new(self.numerator.clone(), self.denominator.clone())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RationalFunction::new(self.numerator.scale(c), self.denominator.clone())
    }

    /// First derivative by the quotient rule.
    pub fn derivative(&self) -> Self {
        let (n, d) = (&self.numerator, &self.denominator);
        let top = &(&n.derivative() * d) - &(n * &d.derivative());
        RationalFunction::new(top, d * d)
    }

    /// `order`-th derivative.
    pub fn differentiate(&self, order: u32) -> Self {
        (0..order).fold(self.clone(), |f, _| f.derivative())
    }

    /// Composition `f(1 - p)`.
    pub fn mirror(&self) -> Self {
        RationalFunction::new(self.numerator.mirror(), self.denominator.mirror())
    }

    /// Exact value at a rational point of `(0, 1)`.
    pub fn evaluate_exact(&self, p: &BigRational) -> Result<BigRational> {
        if !(p.is_positive() && p < &BigRational::one()) {
            return Err(Error::ExactDomain(p.to_string()));
        }
        let den = self.denominator.eval(p);
        if den.is_zero() {
            return Err(Error::Pole(p.to_string()));
        }
        Ok(self.numerator.eval(p) / den)
    }

    pub fn evaluate_f64(&self, p: f64) -> f64 {
        self.numerator.eval_f64(p) / self.denominator.eval_f64(p)
    }

    /// Numerator and denominator rescaled by a common rational so that both
    /// have coprime integer coefficients and the denominator's lowest-order
    /// coefficient is positive.
    pub fn integer_normalized(&self) -> (Polynomial, Polynomial) {
        let lcm = num_integer::Integer::lcm(
            &self.numerator.denominator_lcm(),
            &self.denominator.denominator_lcm(),
        );
        let lcm = BigRational::from_integer(lcm);
        let (num, den) = (self.numerator.scale(&lcm), self.denominator.scale(&lcm));
        let content: BigInt =
            num_integer::Integer::gcd(&num.integer_content(), &den.integer_content());
        let mut factor = BigRational::new(BigInt::one(), content);
        if den.lowest_nonzero().is_some_and(Signed::is_negative) {
            factor = -factor;
        }
        (num.scale(&factor), den.scale(&factor))
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        RationalFunction::zero()
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction::from_polynomial(p)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.denominator == rhs.denominator {
            return RationalFunction::new(&self.numerator + &rhs.numerator, self.denominator.clone());
        }
        let num = &(&self.numerator * &rhs.denominator) + &(&rhs.numerator * &self.denominator);
        RationalFunction::new(num, &self.denominator * &rhs.denominator)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        RationalFunction {
            numerator: -&self.numerator,
            denominator: self.denominator.clone(),
        }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            &self.numerator * &rhs.numerator,
            &self.denominator * &rhs.denominator,
        )
    }
}

impl Mul<&Polynomial> for &RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: &Polynomial) -> RationalFunction {
        RationalFunction::new(&self.numerator * rhs, self.denominator.clone())
    }
}

/// `(num)/(den)` with integer-normalized coefficients, e.g.
/// `(1 - p + p^2)/(1 - p)`.
impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.integer_normalized();
        write!(f, "({num})/({den})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_integers(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(poly(n), poly(d))
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn canonical_form_is_reduced_and_monic() {
        // (p^2 - 1) / (2p - 2) = (p + 1) / 2
        let f = rf(&[-1, 0, 1], &[-2, 2]);
        assert_eq!(f.denominator(), &Polynomial::one());
        assert_eq!(f.numerator(), &Polynomial::new(vec![q(1, 2), q(1, 2)]));
        assert_eq!(rf(&[0], &[3, 7]), RationalFunction::zero());
    }

    #[test]
    fn derivative_of_odds() {
        // d/dp p/(1-p) = 1/(1-p)^2
        let odds = rf(&[0, 1], &[1, -1]);
        assert_eq!(odds.derivative(), rf(&[1], &[1, -2, 1]));
        assert_eq!(odds.differentiate(0), odds);
    }

    #[test]
    fn mirror_of_odds() {
        let odds = rf(&[0, 1], &[1, -1]);
        assert_eq!(odds.mirror(), rf(&[1, -1], &[0, 1]));
        let two = RationalFunction::constant(q(2, 1));
        assert_eq!(two.mirror(), two);
    }

    #[test]
    fn exact_evaluation() {
        let odds = rf(&[0, 1], &[1, -1]);
        assert_eq!(odds.evaluate_exact(&q(1, 2)).unwrap(), q(1, 1));
        assert!(matches!(odds.evaluate_exact(&q(3, 2)), Err(Error::ExactDomain(_))));
        assert!(matches!(odds.evaluate_exact(&q(0, 1)), Err(Error::ExactDomain(_))));
        let pole = rf(&[1], &[-1, 2]); // 1/(2p - 1)
        assert!(matches!(pole.evaluate_exact(&q(1, 2)), Err(Error::Pole(_))));
    }

    #[test]
    fn text_form() {
        let bh = rf(&[1, -1, 1], &[1, -1]);
        assert_eq!(bh.to_string(), "(1 - p + p^2)/(1 - p)");
        let halves = RationalFunction::new(Polynomial::new(vec![q(1, 2), q(-1, 3)]), poly(&[0, 1]));
        assert_eq!(halves.to_string(), "(3 - 2 p)/(6 p)");
    }
}
