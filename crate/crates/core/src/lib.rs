//! Demographics of "children until at least n boys and k girls" stopping
//! rules.
//!
//! The same expectations are computed four independent ways:
//!
//! * [`series`]: truncated sums over the stopping-time distribution with
//!   rigorous tail bounds;
//! * [`oracle`]: depth-first enumeration of every birth sequence;
//! * [`symbolic`]: exact rational functions of `p`;
//! * [`montecarlo`]: seeded simulation.
//!
//! All of them agree that the ratio of expected boys to expected girls equals
//! the birth odds `p / (1 - p)`, whatever the rule.

pub mod analysis;
pub mod error;
pub mod montecarlo;
mod numeric;
pub mod oracle;
pub mod pmf;
pub mod rule;
pub mod series;
pub mod share;
pub mod symbolic;

pub use analysis::{crossing_probability, sweep, Crossing, Quantity, Sweep, SweepRow};
pub use error::{Error, Result};
pub use montecarlo::{run_simulation, simulate_family, FamilyOutcome, SimulationSummary};
pub use oracle::{enumerate_brute_force, TruncatedMoments};
pub use pmf::{pmf_support_min, stopping_pmf};
pub use rule::{BirthProbability, Rule, StoppingOutcome};
pub use series::{
    closed_form, expected_boys, expected_family_size, expected_girls, gender_ratio,
    truncated_moments, ClosedForm, SeriesResult,
};
pub use share::{
    average_share, shammai_average_share_closed_form, share_report, societal_share, ShareReport,
};
pub use symbolic::{
    expected_boys_exact, verify_grid, verify_ratio_identity, Polynomial, RatioCertificate,
    RationalFunction,
};
