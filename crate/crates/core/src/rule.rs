//! Stopping rules and birth probabilities.
//!
//! A [`Rule`] asks a family to keep having children until at least
//! `boys_required` boys and `girls_required` girls have been born; every birth
//! is independently a boy with probability [`BirthProbability::boy`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rule {
    pub boys_required: u32,
    pub girls_required: u32,
}

impl Rule {
    /// The symmetric "one boy and one girl" rule.
    pub const HILLEL: Rule = Rule::new(1, 1);
    /// The "two boys" rule.
    pub const SHAMMAI: Rule = Rule::new(2, 0);

    pub const fn new(boys_required: u32, girls_required: u32) -> Self {
        Rule {
            boys_required,
            girls_required,
        }
    }

    /// Swaps the roles of boys and girls.
    pub const fn mirrored(self) -> Self {
        Rule::new(self.girls_required, self.boys_required)
    }

    pub const fn is_empty(self) -> bool {
        self.boys_required == 0 && self.girls_required == 0
    }

    /// Rejects the (0,0) rule.
    pub fn ensure_nonempty(self) -> Result<Self> {
        if self.is_empty() {
            Err(Error::EmptyRule)
        } else {
            Ok(self)
        }
    }

    pub const fn is_satisfied(self, boys: u32, girls: u32) -> bool {
        boys >= self.boys_required && girls >= self.girls_required
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.boys_required, self.girls_required)
    }
}

/// Parses `n,k` (surrounding parentheses and whitespace are tolerated).
impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (n, k) = trimmed
            .split_once(',')
            .ok_or_else(|| format!("rule `{s}` must be written as n,k"))?;
        let parse = |part: &str| {
            part.trim()
                .parse::<u32>()
                .map_err(|e| format!("rule `{s}`: `{}` is not a count: {e}", part.trim()))
        };
        Ok(Rule::new(parse(n)?, parse(k)?))
    }
}

/// Probability that a single birth is a boy; strictly inside (0,1).
///
/// Both `p` and `1 - p` are stored so that mirroring swaps them exactly
/// instead of re-rounding `1 - (1 - p)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BirthProbability {
    boy: f64,
    girl: f64,
}

impl BirthProbability {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p < 1.0 {
            Ok(BirthProbability {
                boy: p,
                girl: 1.0 - p,
            })
        } else {
            Err(Error::InvalidProbability(p))
        }
    }

    pub fn even() -> Self {
        BirthProbability {
            boy: 0.5,
            girl: 0.5,
        }
    }

    #[inline]
    pub fn boy(self) -> f64 {
        self.boy
    }

    #[inline]
    pub fn girl(self) -> f64 {
        self.girl
    }

    /// Swaps the roles of boys and girls: `p -> 1 - p`.
    pub fn mirrored(self) -> Self {
        BirthProbability {
            boy: self.girl,
            girl: self.boy,
        }
    }

    /// Birth odds `p / (1 - p)`.
    pub fn odds(self) -> f64 {
        self.boy / self.girl
    }
}

impl Serialize for BirthProbability {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.boy)
    }
}

impl TryFrom<f64> for BirthProbability {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        BirthProbability::new(p)
    }
}

impl fmt::Display for BirthProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.boy.fmt(f)
    }
}

/// One point of the stopping-time support: the family size at which the rule
/// was first met and which gender completed it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StoppingOutcome {
    pub total_children: u32,
    pub boys: u32,
    pub girls: u32,
    pub last_is_boy: bool,
}

impl StoppingOutcome {
    /// Builds the outcome of a family of `total_children` whose last child
    /// completed `rule`. Returns `None` when no such family exists.
    pub fn completing(rule: Rule, total_children: u32, last_is_boy: bool) -> Option<Self> {
        let (n, k) = (rule.boys_required, rule.girls_required);
        let (trigger, other_min) = if last_is_boy { (n, k) } else { (k, n) };
        if trigger == 0 || total_children < trigger + other_min {
            return None;
        }
        let other = total_children - trigger;
        let (boys, girls) = if last_is_boy { (trigger, other) } else { (other, trigger) };
        Some(StoppingOutcome {
            total_children,
            boys,
            girls,
            last_is_boy,
        })
    }

    pub fn is_consistent_with(&self, rule: Rule) -> bool {
        let (n, k) = (rule.boys_required, rule.girls_required);
        self.boys + self.girls == self.total_children
            && if self.last_is_boy {
                self.boys == n && self.girls >= k
            } else {
                self.girls == k && self.boys >= n
            }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probability_bounds_are_open() {
        assert!(BirthProbability::new(0.0).is_err());
        assert!(BirthProbability::new(1.0).is_err());
        assert!(BirthProbability::new(f64::NAN).is_err());
        assert!(BirthProbability::new(-0.2).is_err());
        let p = BirthProbability::new(0.25).unwrap();
        assert_eq!(p.girl(), 0.75);
        assert_eq!(p.odds(), 1.0 / 3.0);
    }

    #[test]
    fn parse_rule() {
        assert_eq!("2,0".parse::<Rule>().unwrap(), Rule::SHAMMAI);
        assert_eq!(" (1, 1) ".parse::<Rule>().unwrap(), Rule::HILLEL);
        assert!("2".parse::<Rule>().is_err());
        assert!("a,1".parse::<Rule>().is_err());
        assert!("-1,1".parse::<Rule>().is_err());
    }

    #[test]
    fn empty_rule_rejected() {
        assert_eq!(Rule::new(0, 0).ensure_nonempty(), Err(Error::EmptyRule));
        assert!(Rule::new(0, 1).ensure_nonempty().is_ok());
    }

    #[test]
    fn completing_outcomes() {
        let rule = Rule::new(2, 1);
        let o = StoppingOutcome::completing(rule, 5, true).unwrap();
        assert_eq!((o.boys, o.girls), (2, 3));
        assert!(o.is_consistent_with(rule));
        let o = StoppingOutcome::completing(rule, 5, false).unwrap();
        assert_eq!((o.boys, o.girls), (4, 1));
        assert!(o.is_consistent_with(rule));
        assert!(StoppingOutcome::completing(rule, 2, true).is_none());
        assert!(StoppingOutcome::completing(Rule::SHAMMAI, 4, false).is_none());
    }
}
