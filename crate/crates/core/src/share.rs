//! Girl shares: the societal share `G / F` against the per-family average
//! share `E[G_T / T]`.
//!
//! For the two-boys rule the average share has the closed form
//! `1 - 2 r (1 + r ln p)` with `r = p / (1 - p)`, which is strictly below the
//! societal share `1 - p`. For other rules only the series is available.

use serde::Serialize;

use crate::error::Result;
use crate::rule::{BirthProbability, Rule};
use crate::series::{
    check_inputs, expected_family_size, expected_girls, girl_share_series, SeriesResult,
    DEFAULT_TERM_CAP,
};

/// `G(n,k,p) / F(n,k,p)`.
pub fn societal_share(rule: Rule, p: BirthProbability, tol: f64) -> Result<f64> {
    let girls = expected_girls(rule, p, tol)?;
    let size = expected_family_size(rule, p, tol)?;
    Ok(girls.value / size.value)
}

/// `E[G_T / T]`: in the boy-last branch a family of `t` has `t - n` girls,
/// in the girl-last branch exactly `k`.
pub fn average_share(rule: Rule, p: BirthProbability, tol: f64) -> Result<SeriesResult> {
    let rule = check_inputs(rule, p, tol)?;
    girl_share_series(rule, p)?.sum_to_tolerance(tol, DEFAULT_TERM_CAP)
}

/// Closed form of the average girl share under the (2,0) rule.
pub fn shammai_average_share_closed_form(p: BirthProbability) -> f64 {
    let r = p.odds();
    1.0 - 2.0 * r * (1.0 + r * p.boy().ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShareReport {
    pub rule: Rule,
    pub p: f64,
    pub societal_share: f64,
    pub average_share: f64,
    pub average_share_tail_bound: f64,
    /// `societal_share - average_share`
    pub gap: f64,
    /// Closed-form average share, present only for the (2,0) rule.
    pub closed_form_average_share: Option<f64>,
}

impl ShareReport {
    /// Whether the average share came from the general-rule series only, with
    /// no closed form to back it.
    pub fn is_extension(&self) -> bool {
        self.closed_form_average_share.is_none()
    }
}

pub fn share_report(rule: Rule, p: BirthProbability, tol: f64) -> Result<ShareReport> {
    let societal = societal_share(rule, p, tol)?;
    let average = average_share(rule, p, tol)?;
    Ok(ShareReport {
        rule,
        p: p.boy(),
        societal_share: societal,
        average_share: average.value,
        average_share_tail_bound: average.tail_bound,
        gap: societal - average.value,
        closed_form_average_share: (rule == Rule::SHAMMAI)
            .then(|| shammai_average_share_closed_form(p)),
    })
}
