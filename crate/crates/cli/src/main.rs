//! `famplan`: demographics of "children until n boys and k girls" rules.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use famplan_core::analysis::Quantity;
use famplan_core::Rule;

use crate::commands::CmdResult;

#[derive(Parser)]
#[command(name = "famplan", version, about)]
struct Cli {
    /// Print a single JSON envelope instead of the human-readable layout.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RuleArgs {
    /// Boys required.
    #[arg(short = 'n', long = "boys")]
    boys: u32,
    /// Girls required.
    #[arg(short = 'k', long = "girls")]
    girls: u32,
    /// Probability that a birth is a boy, in (0, 1).
    #[arg(short = 'p', long = "p", allow_negative_numbers = true)]
    p: f64,
}

impl RuleArgs {
    fn rule(&self) -> Rule {
        Rule::new(self.boys, self.girls)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Expected boys, girls and family size from the series, with tail bounds.
    Exact {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Monte Carlo estimates with standard errors.
    Simulate {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact check of (1-p) B(n,k,p) = p B(k,n,1-p) for every rule up to the bounds.
    Verify {
        #[arg(long)]
        max_n: u32,
        #[arg(long)]
        max_k: u32,
    },
    /// Societal versus per-family average girl share.
    Share {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Birth probability at which two rules give the same mean family size.
    Crossing {
        /// First rule, written n,k.
        #[arg(long)]
        a: Rule,
        /// Second rule, written n,k.
        #[arg(long)]
        b: Rule,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Evaluate quantities over a grid of p and emit CSV.
    Sweep {
        /// Rules separated by `;`, e.g. "1,1;2,0".
        #[arg(long, value_parser = parse_rules)]
        rules: RuleList,
        /// Any of F, G, B, ratio, societal_share, average_share, separated by `,` or `;`.
        #[arg(long, value_parser = parse_quantities)]
        quantities: QuantityList,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Output CSV path; CSV goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Exact { .. } => "exact",
            Command::Simulate { .. } => "simulate",
            Command::Verify { .. } => "verify",
            Command::Share { .. } => "share",
            Command::Crossing { .. } => "crossing",
            Command::Sweep { .. } => "sweep",
        }
    }
}

#[derive(Clone)]
struct RuleList(Vec<Rule>);

#[derive(Clone)]
struct QuantityList(Vec<Quantity>);

fn parse_rules(s: &str) -> Result<RuleList, String> {
    s.split(';')
        .filter(|part| !part.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<_>, _>>()
        .map(RuleList)
}

fn parse_quantities(s: &str) -> Result<QuantityList, String> {
    s.split([',', ';'])
        .filter(|part| !part.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<_>, _>>()
        .map(QuantityList)
}

fn run(command: &Command) -> CmdResult {
    match command {
        Command::Exact { rule, tol } => commands::exact(rule.rule(), rule.p, *tol),
        Command::Simulate { rule, samples, seed } => {
            commands::simulate(rule.rule(), rule.p, *samples, *seed)
        }
        Command::Verify { max_n, max_k } => commands::verify(*max_n, *max_k),
        Command::Share { rule, tol } => commands::share(rule.rule(), rule.p, *tol),
        Command::Crossing { a, b, tol } => commands::crossing(*a, *b, *tol),
        Command::Sweep { rules, quantities, from, to, steps, tol, out } => commands::sweep_cmd(
            &rules.0,
            &quantities.0,
            *from,
            *to,
            *steps,
            *tol,
            out.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = cli.command.name();
    match run(&cli.command) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.envelope(name));
            } else {
                print!("{}", report.human);
                for w in &report.warnings {
                    eprintln!("warning: {w}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = e.exit_code();
            if cli.json {
                println!("{}", output::error_envelope(name, &e.to_string(), code));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code as u8)
        }
    }
}
