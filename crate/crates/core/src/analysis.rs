//! Comparing rules: where two rules give the same mean family size, and
//! parameter sweeps emitted as CSV plot data.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rule::{BirthProbability, Rule};
use crate::series::{expected_boys, expected_family_size, expected_girls, gender_ratio};
use crate::share::{average_share, societal_share};

/// Points of the coarse sign scan over `[SCAN_LO, SCAN_HI]`.
pub const SCAN_POINTS: usize = 97;
pub const SCAN_LO: f64 = 0.01;
pub const SCAN_HI: f64 = 0.99;

/// Result of [`crossing_probability`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossing {
    pub root: f64,
    /// Final bisection bracket.
    pub bracket: (f64, f64),
    /// Sign changes seen by the coarse scan. Only the leftmost is refined.
    pub sign_changes: usize,
}

impl Crossing {
    pub fn is_multiple(&self) -> bool {
        self.sign_changes > 1
    }
}

/// Point `i` of `points` evenly spaced values from `lo` to `hi`, hitting both
/// endpoints exactly.
fn grid_point(lo: f64, hi: f64, points: usize, i: usize) -> f64 {
    let last = points - 1;
    if i == last {
        return hi;
    }
    let (x, last) = (i as f64, last as f64);
    (lo * (last - x) + hi * x) / last
}

fn scan_grid() -> impl Iterator<Item = f64> {
    (0..SCAN_POINTS).map(|i| grid_point(SCAN_LO, SCAN_HI, SCAN_POINTS, i))
}

/// Birth probability at which `rule_a` and `rule_b` have equal expected family
/// size, refined by bisection to a bracket no wider than `tol`.
pub fn crossing_probability(rule_a: Rule, rule_b: Rule, tol: f64) -> Result<Crossing> {
    rule_a.ensure_nonempty()?;
    rule_b.ensure_nonempty()?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    // Tighter series tolerance so truncation cannot flip a bracketing sign.
    let series_tol = tol / 10.0;
    let diff = |p: f64| -> Result<f64> {
        let p = BirthProbability::new(p)?;
        Ok(expected_family_size(rule_a, p, series_tol)?.value
            - expected_family_size(rule_b, p, series_tol)?.value)
    };

    let samples: Vec<(f64, f64)> = scan_grid()
        .map(|p| diff(p).map(|d| (p, d)))
        .collect::<Result<_>>()?;

    // Exact zeros on the grid count as roots only when isolated, so identical
    // curves (zero everywhere) are reported as having no crossing.
    let mut brackets = Vec::new();
    for (i, w) in samples.windows(2).enumerate() {
        let ((p0, d0), (p1, d1)) = (w[0], w[1]);
        if d0 * d1 < 0.0 {
            brackets.push((p0, p1));
        } else if d0 == 0.0 {
            let left_nonzero = i == 0 || samples[i - 1].1 != 0.0;
            if left_nonzero && d1 != 0.0 {
                brackets.push((p0, p0));
            }
        }
    }
    let Some(&(mut lo, mut hi)) = brackets.first() else {
        return Err(Error::NoSignChange {
            a: rule_a.to_string(),
            b: rule_b.to_string(),
        });
    };

    let mut d_lo = diff(lo)?;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let d_mid = diff(mid)?;
        if d_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (d_mid < 0.0) == (d_lo < 0.0) {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
        }
    }
    Ok(Crossing {
        root: 0.5 * (lo + hi),
        bracket: (lo, hi),
        sign_changes: brackets.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Quantity {
    /// Expected family size.
    F,
    /// Expected girls.
    G,
    /// Expected boys.
    B,
    Ratio,
    SocietalShare,
    AverageShare,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::F => "F",
            Quantity::G => "G",
            Quantity::B => "B",
            Quantity::Ratio => "ratio",
            Quantity::SocietalShare => "societal_share",
            Quantity::AverageShare => "average_share",
        }
    }

    pub fn evaluate(self, rule: Rule, p: BirthProbability, tol: f64) -> Result<f64> {
        match self {
            Quantity::F => expected_family_size(rule, p, tol).map(|r| r.value),
            Quantity::G => expected_girls(rule, p, tol).map(|r| r.value),
            Quantity::B => expected_boys(rule, p, tol).map(|r| r.value),
            Quantity::Ratio => gender_ratio(rule, p, tol),
            Quantity::SocietalShare => societal_share(rule, p, tol),
            Quantity::AverageShare => average_share(rule, p, tol).map(|r| r.value),
        }
    }

    /// Column key, e.g. `F(1,1)`.
    pub fn column(self, rule: Rule) -> String {
        format!("{}{rule}", self.name())
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.trim() {
            "F" | "f" => Quantity::F,
            "G" | "g" => Quantity::G,
            "B" | "b" => Quantity::B,
            "ratio" | "r" => Quantity::Ratio,
            "societal_share" => Quantity::SocietalShare,
            "average_share" => Quantity::AverageShare,
            other => return Err(format!("unknown quantity `{other}`")),
        })
    }
}

/// One grid point of a sweep. A `None` value marks a cell whose evaluation
/// failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub quantities: IndexMap<String, Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
    /// One message per failed cell.
    pub failures: Vec<String>,
}

/// Evaluates every `quantity x rule` column on `steps` evenly spaced points
/// from `p_start` to `p_end` inclusive. Failing cells are recorded, not fatal.
pub fn sweep(
    rules: &[Rule],
    quantities: &[Quantity],
    p_start: f64,
    p_end: f64,
    steps: usize,
    tol: f64,
) -> Result<Sweep> {
    if !(0.0 < p_start && p_start < p_end && p_end < 1.0) {
        return Err(Error::InvalidSweep(format!(
            "need 0 < from < to < 1, got from={p_start} to={p_end}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidSweep(format!("need at least 2 steps, got {steps}")));
    }
    if rules.is_empty() || quantities.is_empty() {
        return Err(Error::InvalidSweep("no rules or no quantities requested".into()));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    for rule in rules {
        rule.ensure_nonempty()?;
    }

    let cells: Vec<(Quantity, Rule)> = quantities
        .iter()
        .flat_map(|&q| rules.iter().map(move |&r| (q, r)))
        .collect();
    let columns: Vec<String> = cells.iter().map(|&(q, r)| q.column(r)).collect();

    let evaluated: Vec<(SweepRow, Vec<String>)> = (0..steps)
        .into_par_iter()
        .map(|i| {
            let p = grid_point(p_start, p_end, steps, i);
            let prob = BirthProbability::new(p).expect("grid point inside (0,1)");
            let mut failures = Vec::new();
            let quantities = cells
                .iter()
                .zip(&columns)
                .map(|(&(q, rule), col)| {
                    let v = match q.evaluate(rule, prob, tol) {
                        Ok(v) => Some(v),
                        Err(e) => {
                            failures.push(format!("{col} at p={p}: {e}"));
                            None
                        }
                    };
                    (col.clone(), v)
                })
                .collect();
            (SweepRow { p, quantities }, failures)
        })
        .collect();

    let (rows, failures): (Vec<_>, Vec<_>) = evaluated.into_iter().unzip();
    Ok(Sweep {
        columns,
        rows,
        failures: failures.into_iter().flatten().collect(),
    })
}

/// Shortest-looking decimal with 17 significant digits, which round-trips
/// any `f64`. Plain notation for moderate exponents, scientific otherwise.
pub fn format_sig17(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

impl Sweep {
    /// CSV with header `p,<columns...>`, LF line endings, 17 significant
    /// digits and `NaN` in failed cells. Column names containing commas are
    /// quoted.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let mut header = vec!["p".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;
        for row in &self.rows {
            let mut record = vec![format_sig17(row.p)];
            record.extend(
                row.quantities
                    .values()
                    .map(|v| format_sig17(v.unwrap_or(f64::NAN))),
            );
            w.write_record(&record)?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}
