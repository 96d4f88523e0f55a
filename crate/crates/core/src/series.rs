//! Expectation series for stopping rules, with rigorous truncation bounds.
//!
//! Every expectation here is a sum over family sizes `t >= n + k` of a weight
//! times one of the two branch masses from [`crate::pmf`]. Consecutive branch
//! masses have ratio `t / (t + 1 - m) * (1 - a)` (m the trigger count, a its
//! probability), which is non-increasing in `t` and tends to `1 - a < 1`. Each
//! weight's own ratio is either non-increasing or at most one, so once the
//! combined ratio bound `rho` drops below one the remaining tail is at most
//! `term * rho / (1 - rho)`. Summation stops when the summed bounds of all
//! branches meet the requested tolerance.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::oracle::TruncatedMoments;
use crate::pmf::{binomial_exact, branch_mass, ln_biguint, pmf_support_min};
use crate::rule::{BirthProbability, Rule};

/// Maximum number of family sizes a series may visit before giving up.
pub const DEFAULT_TERM_CAP: usize = 100_000;

/// Series refuse `p` closer than this to 0 or 1; the term count grows like
/// `1 / min(p, 1 - p)`.
pub const MIN_SUPPORTED_PROBABILITY: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesResult {
    pub value: f64,
    /// Upper bound on `|true value - value|` from truncation.
    pub tail_bound: f64,
    pub terms_used: usize,
}

/// Per-family quantity multiplying a branch mass at family size `t`.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Weight {
    Const(f64),
    /// `t - c`
    Shifted(f64),
    /// `(t - c) / t`
    ShareAbove(f64),
    /// `c / t`
    Reciprocal(f64),
}

impl Weight {
    fn at(self, t: f64) -> f64 {
        match self {
            Weight::Const(c) => c,
            Weight::Shifted(c) => t - c,
            Weight::ShareAbove(c) => (t - c) / t,
            Weight::Reciprocal(c) => c / t,
        }
    }

    /// Bound on `w(s + 1) / w(s)` for every `s >= t`; only meaningful when
    /// `w(t) > 0`.
    fn ratio_sup(self, t: f64) -> f64 {
        match self {
            Weight::Const(_) | Weight::Reciprocal(_) => 1.0,
            // Both ratios decrease towards 1.
            Weight::Shifted(c) => (t + 1.0 - c) / (t - c),
            Weight::ShareAbove(c) => t * (t + 1.0 - c) / ((t + 1.0) * (t - c)),
        }
    }
}

/// One "last child completes the rule" branch of a series.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Branch {
    trigger: u32,
    other_min: u32,
    trigger_prob: f64,
    other_prob: f64,
    weight: Weight,
}

impl Branch {
    pub(crate) fn boy_last(rule: Rule, p: BirthProbability, weight: Weight) -> Self {
        Branch {
            trigger: rule.boys_required,
            other_min: rule.girls_required,
            trigger_prob: p.boy(),
            other_prob: p.girl(),
            weight,
        }
    }

    pub(crate) fn girl_last(rule: Rule, p: BirthProbability, weight: Weight) -> Self {
        Branch {
            trigger: rule.girls_required,
            other_min: rule.boys_required,
            trigger_prob: p.girl(),
            other_prob: p.boy(),
            weight,
        }
    }

    /// Branch mass at the first family size `t = trigger + other_min`.
    fn start_mass(&self) -> ScaledMass {
        let m = self.trigger;
        let t = m + self.other_min;
        let direct = branch_mass(m, self.other_min, self.trigger_prob, self.other_prob, t);
        if direct.is_finite() && direct >= f64::MIN_POSITIVE {
            return ScaledMass { mant: direct, exp2: 0 };
        }
        let c = binomial_exact(u64::from(t - 1), u64::from(m - 1));
        let ln = ln_biguint(&c)
            + f64::from(m) * self.trigger_prob.ln()
            + f64::from(t - m) * self.other_prob.ln();
        let exp2 = (ln / LN_2).floor();
        ScaledMass {
            mant: (ln - exp2 * LN_2).exp(),
            exp2: exp2 as i32,
        }
    }

    /// Mass ratio from family size `t` to `t + 1`.
    fn mass_ratio(&self, t: f64) -> f64 {
        t / (t + 1.0 - f64::from(self.trigger)) * self.other_prob
    }
}

/// `mant * 2^exp2`, kept renormalized so long recurrences neither underflow
/// nor overflow.
#[derive(Debug, Clone, Copy)]
struct ScaledMass {
    mant: f64,
    exp2: i32,
}

impl ScaledMass {
    const RESCALE: i32 = 600;

    fn value(self) -> f64 {
        if self.exp2 == 0 {
            self.mant
        } else {
            self.mant * 2f64.powi(self.exp2)
        }
    }

    fn scale(&mut self, factor: f64) {
        self.mant *= factor;
        let big = 2f64.powi(Self::RESCALE);
        if self.mant != 0.0 && self.mant < 1.0 / big {
            self.mant *= big;
            self.exp2 -= Self::RESCALE;
        } else if self.mant > big {
            self.mant /= big;
            self.exp2 += Self::RESCALE;
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Stop {
    Tolerance { tol: f64, cap: usize },
    Through(u32),
}

/// A weighted sum over both branches of a rule's stopping-time distribution.
#[derive(Debug, Clone)]
pub(crate) struct Series {
    start: u32,
    branches: Vec<Branch>,
}

impl Series {
    pub(crate) fn new(rule: Rule, branches: impl IntoIterator<Item = Branch>) -> Result<Self> {
        Ok(Series {
            start: pmf_support_min(rule)?,
            branches: branches.into_iter().filter(|b| b.trigger > 0).collect(),
        })
    }

    pub(crate) fn sum_to_tolerance(&self, tol: f64, cap: usize) -> Result<SeriesResult> {
        self.run(Stop::Tolerance { tol, cap })
    }

    /// Sum of the terms with family size `t <= max_children`.
    pub(crate) fn partial_sum(&self, max_children: u32) -> f64 {
        if max_children < self.start {
            return 0.0;
        }
        self.run(Stop::Through(max_children))
            .map(|r| r.value)
            .unwrap_or(f64::NAN)
    }

    fn run(&self, stop: Stop) -> Result<SeriesResult> {
        let mut masses: Vec<ScaledMass> = self.branches.iter().map(Branch::start_mass).collect();
        let mut sum = CompensatedSum::default();
        let mut t = self.start;
        let mut terms_used = 0;
        loop {
            let tf = f64::from(t);
            let mut tail_bound = 0.0;
            for (branch, mass) in self.branches.iter().zip(masses.iter_mut()) {
                let w = branch.weight.at(tf);
                let term = w * mass.value();
                sum.add(term);
                tail_bound += if w > 0.0 {
                    let rho = branch.mass_ratio(tf) * branch.weight.ratio_sup(tf);
                    if rho < 1.0 {
                        term * rho / (1.0 - rho)
                    } else {
                        f64::INFINITY
                    }
                } else {
                    f64::INFINITY
                };
                mass.scale(branch.mass_ratio(tf));
            }
            terms_used += 1;
            let done = match stop {
                Stop::Through(last) => t >= last,
                Stop::Tolerance { tol, cap } => {
                    if tail_bound <= tol {
                        true
                    } else if terms_used >= cap {
                        return Err(Error::TermCap {
                            tol,
                            cap,
                            tail_bound,
                        });
                    } else {
                        false
                    }
                }
            };
            if done {
                return Ok(SeriesResult {
                    value: sum.value(),
                    tail_bound,
                    terms_used,
                });
            }
            t += 1;
        }
    }
}

pub(crate) fn check_inputs(rule: Rule, p: BirthProbability, tol: f64) -> Result<Rule> {
    let rule = rule.ensure_nonempty()?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    let pb = p.boy();
    if !(MIN_SUPPORTED_PROBABILITY..=1.0 - MIN_SUPPORTED_PROBABILITY).contains(&pb) {
        return Err(Error::ExtremeProbability(pb));
    }
    Ok(rule)
}

fn boys_series(rule: Rule, p: BirthProbability) -> Result<Series> {
    let (n, k) = (f64::from(rule.boys_required), f64::from(rule.girls_required));
    Series::new(
        rule,
        [
            // Boy last: exactly n boys.
            Branch::boy_last(rule, p, Weight::Const(n)),
            // Girl last: t - k boys.
            Branch::girl_last(rule, p, Weight::Shifted(k)),
        ],
    )
}

fn family_size_series(rule: Rule, p: BirthProbability) -> Result<Series> {
    Series::new(
        rule,
        [
            Branch::boy_last(rule, p, Weight::Shifted(0.0)),
            Branch::girl_last(rule, p, Weight::Shifted(0.0)),
        ],
    )
}

fn mass_series(rule: Rule, p: BirthProbability) -> Result<Series> {
    Series::new(
        rule,
        [
            Branch::boy_last(rule, p, Weight::Const(1.0)),
            Branch::girl_last(rule, p, Weight::Const(1.0)),
        ],
    )
}

/// Per-family girl share `G_T / T`.
pub(crate) fn girl_share_series(rule: Rule, p: BirthProbability) -> Result<Series> {
    let (n, k) = (f64::from(rule.boys_required), f64::from(rule.girls_required));
    Series::new(
        rule,
        [
            Branch::boy_last(rule, p, Weight::ShareAbove(n)),
            Branch::girl_last(rule, p, Weight::Reciprocal(k)),
        ],
    )
}

/// Expected number of boys `B(n,k,p)`.
pub fn expected_boys(rule: Rule, p: BirthProbability, tol: f64) -> Result<SeriesResult> {
    let rule = check_inputs(rule, p, tol)?;
    boys_series(rule, p)?.sum_to_tolerance(tol, DEFAULT_TERM_CAP)
}

/// Expected number of girls, via `G(n,k,p) = B(k,n,1-p)`.
pub fn expected_girls(rule: Rule, p: BirthProbability, tol: f64) -> Result<SeriesResult> {
    expected_boys(rule.mirrored(), p.mirrored(), tol)
}

/// Expected family size `E[T]`.
pub fn expected_family_size(rule: Rule, p: BirthProbability, tol: f64) -> Result<SeriesResult> {
    let rule = check_inputs(rule, p, tol)?;
    family_size_series(rule, p)?.sum_to_tolerance(tol, DEFAULT_TERM_CAP)
}

/// `B / G`; equal to the birth odds `p / (1 - p)` for every rule.
pub fn gender_ratio(rule: Rule, p: BirthProbability, tol: f64) -> Result<f64> {
    let boys = expected_boys(rule, p, tol)?;
    let girls = expected_girls(rule, p, tol)?;
    Ok(boys.value / girls.value)
}

/// Every statistic the brute-force oracle reports, from the same series used
/// above but cut off after family size `max_children`.
pub fn truncated_moments(
    rule: Rule,
    p: BirthProbability,
    max_children: u32,
) -> Result<TruncatedMoments> {
    let rule = rule.ensure_nonempty()?;
    let boys = boys_series(rule, p)?.partial_sum(max_children);
    let girls = boys_series(rule.mirrored(), p.mirrored())?.partial_sum(max_children);
    Ok(TruncatedMoments {
        max_children,
        mass_covered: mass_series(rule, p)?.partial_sum(max_children),
        boys,
        girls,
        total: family_size_series(rule, p)?.partial_sum(max_children),
        girl_share: girl_share_series(rule, p)?.partial_sum(max_children),
        martingale: boys / p.boy() - girls / p.girl(),
    })
}

/// The explicit Hillel (1,1) and Shammai (2,0) expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    FamilyHillel,
    FamilyShammai,
    GirlsHillel,
    GirlsShammai,
    BoysHillel,
    BoysShammai,
}

impl ClosedForm {
    pub const ALL: [ClosedForm; 6] = [
        ClosedForm::FamilyHillel,
        ClosedForm::FamilyShammai,
        ClosedForm::GirlsHillel,
        ClosedForm::GirlsShammai,
        ClosedForm::BoysHillel,
        ClosedForm::BoysShammai,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ClosedForm::FamilyHillel => "F_H",
            ClosedForm::FamilyShammai => "F_S",
            ClosedForm::GirlsHillel => "G_H",
            ClosedForm::GirlsShammai => "G_S",
            ClosedForm::BoysHillel => "B_H",
            ClosedForm::BoysShammai => "B_S",
        }
    }

    pub fn rule(self) -> Rule {
        match self {
            ClosedForm::FamilyHillel | ClosedForm::GirlsHillel | ClosedForm::BoysHillel => {
                Rule::HILLEL
            }
            _ => Rule::SHAMMAI,
        }
    }

    pub fn evaluate(self, p: BirthProbability) -> f64 {
        let (p, q) = (p.boy(), p.girl());
        let hillel = p * p - p + 1.0;
        match self {
            ClosedForm::FamilyHillel => hillel / (p - p * p),
            ClosedForm::FamilyShammai => 2.0 / p,
            ClosedForm::GirlsHillel => hillel / p,
            ClosedForm::GirlsShammai => 2.0 * q / p,
            ClosedForm::BoysHillel => hillel / q,
            ClosedForm::BoysShammai => 2.0,
        }
    }
}

pub fn closed_form(quantity: ClosedForm, p: BirthProbability) -> f64 {
    quantity.evaluate(p)
}
