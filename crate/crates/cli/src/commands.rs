use std::io::Write;
use std::path::Path;

use famplan_core::analysis::{crossing_probability, sweep, Quantity};
use famplan_core::montecarlo::run_simulation;
use famplan_core::series::{expected_boys, expected_family_size, expected_girls, SeriesResult};
use famplan_core::share::share_report;
use famplan_core::symbolic::{verify_grid, DEFAULT_SYMBOLIC_CAP};
use famplan_core::{BirthProbability, Error, Rule};
use serde::Serialize;
use serde_json::json;

use crate::output::{Lines, Report};

pub type CmdResult = Result<Report, CliError>;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numeric() => 2,
            CliError::Core(_) => 1,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Io(e) => f.write_str(e),
        }
    }
}

fn series_text(r: &SeriesResult) -> String {
    format!("{}  (tail bound {:e}, {} terms)", r.value, r.tail_bound, r.terms_used)
}

#[derive(Serialize)]
struct RuleInputs {
    n: u32,
    k: u32,
    p: f64,
    tol: f64,
}

pub fn exact(rule: Rule, p: f64, tol: f64) -> CmdResult {
    let inputs = RuleInputs { n: rule.boys_required, k: rule.girls_required, p, tol };
    let prob = BirthProbability::new(p)?;
    let boys = expected_boys(rule, prob, tol)?;
    let girls = expected_girls(rule, prob, tol)?;
    let family = expected_family_size(rule, prob, tol)?;
    let ratio = boys.value / girls.value;
    let odds = prob.odds();

    let mut lines = Lines::default();
    lines
        .row("rule", rule)
        .row("p", p)
        .row("B", series_text(&boys))
        .row("G", series_text(&girls))
        .row("F", series_text(&family))
        .row("ratio", ratio)
        .row("birth_odds", odds)
        .row("ratio_minus_odds", ratio - odds);
    let results = json!({
        "boys": boys,
        "girls": girls,
        "family_size": family,
        "ratio": ratio,
        "birth_odds": odds,
        "ratio_minus_odds": ratio - odds,
    });
    Ok(Report::new(inputs, results, lines.render()))
}

#[derive(Serialize)]
struct SimulateInputs {
    n: u32,
    k: u32,
    p: f64,
    samples: u64,
    seed: u64,
}

pub fn simulate(rule: Rule, p: f64, samples: u64, seed: u64) -> CmdResult {
    let inputs = SimulateInputs { n: rule.boys_required, k: rule.girls_required, p, samples, seed };
    let prob = BirthProbability::new(p)?;
    let s = run_simulation(rule, prob, samples, seed)?;
    let mut lines = Lines::default();
    lines
        .row("rule", rule)
        .row("p", p)
        .row("samples", s.samples)
        .row("seed", s.seed)
        .row("mean_boys", format!("{}  (se {})", s.mean_boys, s.se_boys))
        .row("mean_girls", format!("{}  (se {})", s.mean_girls, s.se_girls))
        .row("mean_total", format!("{}  (se {})", s.mean_total, s.se_total))
        .row("mean_girl_share", format!("{}  (se {})", s.mean_girl_share, s.se_girl_share))
        .row("mean_martingale", format!("{}  (se {})", s.mean_martingale, s.se_martingale))
        .row("ratio_estimate", format!("{}  (se {})", s.ratio_estimate, s.se_ratio))
        .row("birth_odds", prob.odds());
    Ok(Report::new(inputs, s, lines.render()))
}

pub fn verify(max_n: u32, max_k: u32) -> CmdResult {
    let inputs = json!({ "max_n": max_n, "max_k": max_k, "cap": DEFAULT_SYMBOLIC_CAP });
    let certs: Vec<_> = verify_grid(max_n, max_k)?.iter().map(|c| c.to_text()).collect();
    let passed = certs.iter().filter(|c| c.holds).count();

    let mut human = String::from("n   k   result  B(n,k,p)\n");
    for c in &certs {
        let verdict = if c.holds { "PASS" } else { "FAIL" };
        human.push_str(&format!("{:<3} {:<3} {:<7} {}\n", c.n, c.k, verdict, c.boys));
    }
    human.push_str(&format!("{passed}/{} rules certify (1-p) B(n,k,p) = p B(k,n,1-p)\n", certs.len()));

    let results = json!({
        "rules_checked": certs.len(),
        "rules_passed": passed,
        "all_pass": passed == certs.len(),
        "certificates": certs,
    });
    let mut report = Report::new(inputs, results, human);
    if passed != certs.len() {
        report = report.warn(format!("{} rule(s) failed the identity", certs.len() - passed));
    }
    Ok(report)
}

pub fn share(rule: Rule, p: f64, tol: f64) -> CmdResult {
    let inputs = RuleInputs { n: rule.boys_required, k: rule.girls_required, p, tol };
    let prob = BirthProbability::new(p)?;
    let r = share_report(rule, prob, tol)?;
    let mut lines = Lines::default();
    lines
        .row("rule", rule)
        .row("p", p)
        .row("societal_share", r.societal_share)
        .row(
            "average_share",
            format!("{}  (tail bound {:e})", r.average_share, r.average_share_tail_bound),
        );
    if let Some(c) = r.closed_form_average_share {
        lines.row("average_share_closed_form", c);
    }
    lines.row("gap", r.gap);
    let mut report = Report::new(inputs, r, lines.render());
    if r.is_extension() {
        report = report.warn(format!(
            "average share for rule {rule} comes from the general-rule series; \
             only the (2,0) rule has a closed form to check it against"
        ));
    }
    Ok(report)
}

pub fn crossing(a: Rule, b: Rule, tol: f64) -> CmdResult {
    let inputs = json!({ "a": a.to_string(), "b": b.to_string(), "tol": tol });
    let c = crossing_probability(a, b, tol)?;
    let mut lines = Lines::default();
    lines
        .row("rules", format!("F{a} = F{b}"))
        .row("root", c.root)
        .row("bracket", format!("[{}, {}]", c.bracket.0, c.bracket.1))
        .row("sign_changes", c.sign_changes);
    let mut report = Report::new(inputs, &c, lines.render());
    if c.is_multiple() {
        report = report.warn(format!(
            "{} sign changes on the scan grid; reporting the leftmost root",
            c.sign_changes
        ));
    }
    Ok(report)
}

#[derive(Serialize)]
struct SweepInputs<'a> {
    rules: Vec<String>,
    quantities: Vec<&'static str>,
    from: f64,
    to: f64,
    steps: usize,
    tol: f64,
    out: Option<&'a str>,
}

pub fn sweep_cmd(
    rules: &[Rule],
    quantities: &[Quantity],
    from: f64,
    to: f64,
    steps: usize,
    tol: f64,
    out: Option<&Path>,
) -> CmdResult {
    let inputs = SweepInputs {
        rules: rules.iter().map(Rule::to_string).collect(),
        quantities: quantities.iter().map(|q| q.name()).collect(),
        from,
        to,
        steps,
        tol,
        out: out.and_then(Path::to_str),
    };
    let s = sweep(rules, quantities, from, to, steps, tol)?;
    let csv = s.to_csv_string();

    let (results, human) = match out {
        Some(path) => {
            write_atomically(path, csv.as_bytes())?;
            let results = json!({
                "path": path.display().to_string(),
                "columns": s.columns,
                "rows": s.rows.len(),
                "failed_cells": s.failures.len(),
            });
            let human = format!("wrote {} rows x {} columns to {}\n", s.rows.len(), s.columns.len() + 1, path.display());
            (results, human)
        }
        None => (json!({ "columns": s.columns, "rows": s.rows, "failed_cells": s.failures.len() }), csv),
    };
    let mut report = Report::new(inputs, results, human);
    for f in s.failures {
        report = report.warn(f);
    }
    Ok(report)
}

/// Writes through a temporary file in the target directory so a failure never
/// leaves a partial file behind.
fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io_err = |e: std::io::Error| CliError::Io(format!("writing {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
