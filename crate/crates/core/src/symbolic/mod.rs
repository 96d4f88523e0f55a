//! Exact rational-function forms of the expected number of boys.
//!
//! The two series making up `B(n,k,p)` are derivatives of geometric sums:
//!
//! ```text
//! B(n,k,p) = n/(n-1)! p^n (-1)^(n-1) d^(n-1)/dp^(n-1) [ (1-p)^(n+k-1) / p ]
//!          + p (1-p)^k / (k-1)!      d^k/dp^k         [ p^(n+k-1) / (1-p) ]
//! ```
//!
//! The first addend is absent when `n = 0`, the second when `k = 0`. With
//! exact coefficients the identity `(1-p) B(n,k,p) = p B(k,n,1-p)` becomes a
//! structural equality of canonical rational functions.

mod polynomial;
mod rational_function;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

pub use polynomial::Polynomial;
pub use rational_function::RationalFunction;

use crate::error::{Error, Result};

/// Largest `n` or `k` accepted by the exact constructions.
pub const DEFAULT_SYMBOLIC_CAP: u32 = 12;

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn check_rule(n: u32, k: u32, cap: u32) -> Result<()> {
    if n == 0 && k == 0 {
        return Err(Error::EmptyRule);
    }
    if n > cap || k > cap {
        return Err(Error::SymbolicCap { n, k, cap });
    }
    Ok(())
}

/// `B(n,k,p)` as an exact rational function of `p`.
pub fn expected_boys_exact(n: u32, k: u32) -> Result<RationalFunction> {
    expected_boys_exact_capped(n, k, DEFAULT_SYMBOLIC_CAP)
}

pub fn expected_boys_exact_capped(n: u32, k: u32, cap: u32) -> Result<RationalFunction> {
    check_rule(n, k, cap)?;
    let span = n + k - 1;
    let p = Polynomial::var();
    let q = Polynomial::one_minus_var();
    let mut total = RationalFunction::zero();

    if n >= 1 {
        let inner = RationalFunction::new(q.pow(span), p.clone());
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let factor = BigRational::new(BigInt::from(sign) * n, factorial(n - 1));
        let term = &inner.differentiate(n - 1) * &p.pow(n);
        total = &total + &term.scale(&factor);
    }
    if k >= 1 {
        let inner = RationalFunction::new(p.pow(span), q.clone());
        let factor = BigRational::new(BigInt::one(), factorial(k - 1));
        let term = &inner.differentiate(k) * &(&p * &q.pow(k));
        total = &total + &term.scale(&factor);
    }
    Ok(total)
}

/// `G(n,k,p) = B(k,n,1-p)` as an exact rational function.
pub fn expected_girls_exact(n: u32, k: u32) -> Result<RationalFunction> {
    Ok(expected_boys_exact(k, n)?.mirror())
}

/// Outcome of checking `(1-p) B(n,k,p) = p B(k,n,1-p)` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioCertificate {
    pub boys_required: u32,
    pub girls_required: u32,
    pub holds: bool,
    /// `B(n,k,p)`
    pub boys: RationalFunction,
    /// `B(k,n,1-p)`, i.e. `G(n,k,p)`
    pub girls: RationalFunction,
    /// `(1-p) B(n,k,p)`
    pub lhs: RationalFunction,
    /// `p B(k,n,1-p)`
    pub rhs: RationalFunction,
}

/// Text form of a certificate, each function written `(num)/(den)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateText {
    pub n: u32,
    pub k: u32,
    pub holds: bool,
    pub boys: String,
    pub girls: String,
    pub lhs: String,
    pub rhs: String,
}

impl RatioCertificate {
    pub fn to_text(&self) -> CertificateText {
        CertificateText {
            n: self.boys_required,
            k: self.girls_required,
            holds: self.holds,
            boys: self.boys.to_string(),
            girls: self.girls.to_string(),
            lhs: self.lhs.to_string(),
            rhs: self.rhs.to_string(),
        }
    }
}

pub fn verify_ratio_identity(n: u32, k: u32) -> Result<RatioCertificate> {
    verify_ratio_identity_capped(n, k, DEFAULT_SYMBOLIC_CAP)
}

pub fn verify_ratio_identity_capped(n: u32, k: u32, cap: u32) -> Result<RatioCertificate> {
    check_rule(n, k, cap)?;
    let boys = expected_boys_exact_capped(n, k, cap)?;
    let girls = expected_boys_exact_capped(k, n, cap)?.mirror();
    let lhs = &boys * &Polynomial::one_minus_var();
    let rhs = &girls * &Polynomial::var();
    let holds = (&lhs - &rhs).is_zero();
    Ok(RatioCertificate {
        boys_required: n,
        girls_required: k,
        holds,
        boys,
        girls,
        lhs,
        rhs,
    })
}

/// Certificates for every rule `0 <= n <= max_n`, `0 <= k <= max_k` except
/// `(0,0)`, ordered by `(n, k)`. Rules are checked in parallel.
pub fn verify_grid(max_n: u32, max_k: u32) -> Result<Vec<RatioCertificate>> {
    if max_n > DEFAULT_SYMBOLIC_CAP || max_k > DEFAULT_SYMBOLIC_CAP {
        return Err(Error::SymbolicCap {
            n: max_n,
            k: max_k,
            cap: DEFAULT_SYMBOLIC_CAP,
        });
    }
    let rules: Vec<(u32, u32)> = (0..=max_n)
        .flat_map(|n| (0..=max_k).map(move |k| (n, k)))
        .filter(|&(n, k)| n + k > 0)
        .collect();
    rules
        .into_par_iter()
        .map(|(n, k)| verify_ratio_identity(n, k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_integers(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Leading `count` Taylor coefficients at 0 of `num / den`, by power
    /// series division; needs `den(0) != 0`.
    fn taylor(f: &RationalFunction, count: usize) -> Vec<BigRational> {
        let num = f.numerator().coefficients();
        let den = f.denominator().coefficients();
        let d0 = den[0].clone();
        let zero = BigRational::from_integer(0.into());
        let mut out: Vec<BigRational> = Vec::with_capacity(count);
        for i in 0..count {
            let mut c = num.get(i).cloned().unwrap_or_else(|| zero.clone());
            for j in 1..=i.min(den.len() - 1) {
                c -= &den[j] * &out[i - j];
            }
            out.push(c / &d0);
        }
        out
    }

    #[test]
    fn anchors() {
        // (0,1): p / (1-p)
        assert_eq!(
            expected_boys_exact(0, 1).unwrap(),
            RationalFunction::new(poly(&[0, 1]), poly(&[1, -1]))
        );
        // (1,1): (p^2 - p + 1) / (1 - p)
        assert_eq!(
            expected_boys_exact(1, 1).unwrap(),
            RationalFunction::new(poly(&[1, -1, 1]), poly(&[1, -1]))
        );
        // (2,0): 2
        assert_eq!(expected_boys_exact(2, 0).unwrap(), RationalFunction::constant(q(2, 1)));
        // G_S = 2(1-p)/p
        assert_eq!(
            expected_girls_exact(2, 0).unwrap(),
            RationalFunction::new(poly(&[2, -2]), poly(&[0, 1]))
        );
    }

    #[test]
    fn second_derivative_matches_series_expansion() {
        // d^2/dp^2 p^3/(1-p) = sum_{l >= 3} l (l-1) p^(l-2)
        let f = RationalFunction::new(poly(&[0, 0, 0, 1]), poly(&[1, -1])).differentiate(2);
        let coeffs = taylor(&f, 31);
        for (deg, c) in coeffs.iter().enumerate() {
            let l = deg as i64 + 2;
            let want = if l >= 3 { l * (l - 1) } else { 0 };
            assert_eq!(c, &q(want, 1), "degree {deg}");
        }
    }

    #[test]
    fn identity_small_rules() {
        for (n, k) in [(1, 1), (2, 0), (0, 3), (3, 2)] {
            let cert = verify_ratio_identity(n, k).unwrap();
            assert!(cert.holds, "({n},{k})");
            assert_eq!(cert.lhs, cert.rhs);
        }
    }

    #[test]
    fn caps_and_empty_rule() {
        assert_eq!(expected_boys_exact(0, 0), Err(Error::EmptyRule));
        assert_eq!(verify_ratio_identity(0, 0).unwrap_err(), Error::EmptyRule);
        assert!(matches!(expected_boys_exact(13, 1), Err(Error::SymbolicCap { cap: 12, .. })));
        assert!(matches!(verify_grid(13, 2), Err(Error::SymbolicCap { .. })));
        assert_eq!(verify_grid(1, 1).unwrap().len(), 3);
    }

    #[test]
    fn hillel_certificate_text() {
        let text = verify_ratio_identity(1, 1).unwrap().to_text();
        assert_eq!(text.boys, "(1 - p + p^2)/(1 - p)");
        assert_eq!(text.girls, "(1 - p + p^2)/(p)");
        assert!(text.holds);
    }
}
