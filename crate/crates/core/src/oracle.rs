//! Brute-force enumeration of birth sequences.
//!
//! Walks every boy/girl sequence depth-first, stopping a branch as soon as the
//! rule is met. Nothing here touches binomial coefficients or the series
//! machinery, so it serves as an independent ground truth for truncated
//! expectations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::rule::{BirthProbability, Rule};

/// Default limit on enumeration depth (family size).
pub const DEFAULT_MAX_DEPTH: u32 = 24;

/// Probability-weighted sums over all outcomes with `T <= max_children`.
///
/// These are truncated expectations: `boys` is `E[B_T; T <= L]`, not a
/// conditional mean. As `L` grows they converge to the full expectations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct TruncatedMoments {
    pub max_children: u32,
    pub mass_covered: f64,
    pub boys: f64,
    pub girls: f64,
    pub total: f64,
    pub girl_share: f64,
    pub martingale: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct BruteForce {
    max_depth: u32,
}

impl Default for BruteForce {
    fn default() -> Self {
        BruteForce {
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

impl BruteForce {
    pub fn with_max_depth(max_depth: u32) -> Self {
        BruteForce { max_depth }
    }

    pub fn enumerate(
        &self,
        rule: Rule,
        p: BirthProbability,
        max_children: u32,
    ) -> Result<TruncatedMoments> {
        let rule = rule.ensure_nonempty()?;
        if max_children > self.max_depth {
            return Err(Error::EnumerationCap {
                requested: max_children,
                cap: self.max_depth,
            });
        }
        let mut walk = Walk {
            rule,
            boy: p.boy(),
            girl: p.girl(),
            limit: max_children,
            sums: Default::default(),
        };
        walk.visit(0, 0, 1.0);
        let [mass_covered, boys, girls, total, girl_share, martingale] =
            walk.sums.map(|s| s.value());
        Ok(TruncatedMoments {
            max_children,
            mass_covered,
            boys,
            girls,
            total,
            girl_share,
            martingale,
        })
    }
}

/// [`BruteForce::enumerate`] with the default depth cap.
pub fn enumerate_brute_force(
    rule: Rule,
    p: BirthProbability,
    max_children: u32,
) -> Result<TruncatedMoments> {
    BruteForce::default().enumerate(rule, p, max_children)
}

struct Walk {
    rule: Rule,
    boy: f64,
    girl: f64,
    limit: u32,
    // mass, boys, girls, total, girl share, X_T
    sums: [CompensatedSum; 6],
}

impl Walk {
    fn visit(&mut self, boys: u32, girls: u32, prob: f64) {
        let t = boys + girls;
        if self.rule.is_satisfied(boys, girls) {
            let (b, g, n) = (f64::from(boys), f64::from(girls), f64::from(t));
            let values = [1.0, b, g, n, g / n, b / self.boy - g / self.girl];
            for (sum, v) in self.sums.iter_mut().zip(values) {
                sum.add(prob * v);
            }
            return;
        }
        if t == self.limit {
            return;
        }
        self.visit(boys + 1, girls, prob * self.boy);
        self.visit(boys, girls + 1, prob * self.girl);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_rule() {
        let m = enumerate_brute_force(Rule::new(1, 0), BirthProbability::even(), 20).unwrap();
        assert!((m.mass_covered - (1.0 - 0.5f64.powi(20))).abs() < 1e-15);
        // Every completed family has exactly one boy.
        assert!((m.boys - m.mass_covered).abs() < 1e-15);
    }

    #[test]
    fn family_sizes_approach_closed_values() {
        let half = BirthProbability::even();
        let h = enumerate_brute_force(Rule::HILLEL, half, 24).unwrap();
        assert!((h.total - 3.0).abs() < 1e-4, "{}", h.total);
        let s = enumerate_brute_force(Rule::SHAMMAI, half, 24).unwrap();
        assert!((s.total - 4.0).abs() < 1e-4, "{}", s.total);
    }

    #[test]
    fn caps_and_empty_rule() {
        let half = BirthProbability::even();
        assert_eq!(
            enumerate_brute_force(Rule::HILLEL, half, 25),
            Err(Error::EnumerationCap { requested: 25, cap: 24 })
        );
        assert_eq!(enumerate_brute_force(Rule::new(0, 0), half, 5), Err(Error::EmptyRule));
        assert!(BruteForce::with_max_depth(30).enumerate(Rule::HILLEL, half, 30).is_ok());
    }

    #[test]
    fn hand_enumerated_small_case() {
        // (2,1) at p = 1/2 truncated at 4. Completions at t = 3: BBG, BGB,
        // GBB. At t = 4: BBBG, BGGB, GBGB, GGBB.
        let m = enumerate_brute_force(Rule::new(2, 1), BirthProbability::even(), 4).unwrap();
        assert!((m.mass_covered - (3.0 / 8.0 + 4.0 / 16.0)).abs() < 1e-15);
        let e_total = 3.0 * 3.0 / 8.0 + 4.0 * 4.0 / 16.0;
        assert!((m.total - e_total).abs() < 1e-15);
    }
}
