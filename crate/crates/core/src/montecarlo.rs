//! Seeded simulation of families under a stopping rule.
//!
//! Replicate `i` of a run with seed `s` draws from ChaCha8 keyed by
//! `seed_from_u64(s)` on stream `i`. Each replicate's birth sequence depends
//! only on `(s, i)`, so results do not depend on thread count or scheduling.
//! Replicates are aggregated in fixed blocks of [`BLOCK_SIZE`] and the block
//! statistics merged in index order, which keeps the floating-point summary
//! bit-identical across runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rule::{BirthProbability, Rule};

/// Births allowed in a single family before the simulation gives up.
pub const DEFAULT_BIRTH_CAP: u64 = 10_000_000;

/// Replicates aggregated per parallel work item.
pub const BLOCK_SIZE: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyOutcome {
    pub boys: u64,
    pub girls: u64,
    pub total: u64,
    /// `X_T = boys / p - girls / (1 - p)`
    pub martingale_terminal: f64,
    pub girl_share: f64,
}

/// Draws births (a boy when the uniform variate is below `p`) until `rule` is
/// first met.
pub fn simulate_family<R: Rng + ?Sized>(
    rule: Rule,
    p: BirthProbability,
    rng: &mut R,
) -> Result<FamilyOutcome> {
    simulate_family_capped(rule, p, rng, DEFAULT_BIRTH_CAP)
}

pub fn simulate_family_capped<R: Rng + ?Sized>(
    rule: Rule,
    p: BirthProbability,
    rng: &mut R,
    birth_cap: u64,
) -> Result<FamilyOutcome> {
    let rule = rule.ensure_nonempty()?;
    let (need_boys, need_girls) = (u64::from(rule.boys_required), u64::from(rule.girls_required));
    let threshold = p.boy();
    let (mut boys, mut girls) = (0u64, 0u64);
    while boys < need_boys || girls < need_girls {
        if boys + girls >= birth_cap {
            return Err(Error::SimulationCap(birth_cap));
        }
        if rng.random::<f64>() < threshold {
            boys += 1;
        } else {
            girls += 1;
        }
    }
    let total = boys + girls;
    Ok(FamilyOutcome {
        boys,
        girls,
        total,
        martingale_terminal: boys as f64 / p.boy() - girls as f64 / p.girl(),
        girl_share: girls as f64 / total as f64,
    })
}

/// Generator for replicate `index` of a run seeded with `seed`.
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationSummary {
    pub rule: Rule,
    pub p: f64,
    pub samples: u64,
    pub seed: u64,
    pub mean_boys: f64,
    pub mean_girls: f64,
    pub mean_total: f64,
    pub mean_girl_share: f64,
    pub mean_martingale: f64,
    pub se_boys: f64,
    pub se_girls: f64,
    pub se_total: f64,
    pub se_girl_share: f64,
    pub se_martingale: f64,
    /// `mean_boys / mean_girls`
    pub ratio_estimate: f64,
    /// Delta-method standard error of `ratio_estimate`.
    pub se_ratio: f64,
}

/// Streaming means and co-moments (Welford, merged with Chan's formula).
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: f64,
    // boys, girls, total, share, martingale
    mean: [f64; 5],
    m2: [f64; 5],
    // sum of (boys - mean_boys)(girls - mean_girls)
    c_bg: f64,
}

impl Moments {
    #[allow(clippy::needless_range_loop)]
    fn push(&mut self, o: &FamilyOutcome) {
        let x = [
            o.boys as f64,
            o.girls as f64,
            o.total as f64,
            o.girl_share,
            o.martingale_terminal,
        ];
        self.count += 1.0;
        let n = self.count;
        let delta_b_old = x[0] - self.mean[0];
        for i in 0..5 {
            let d = x[i] - self.mean[i];
            self.mean[i] += d / n;
            self.m2[i] += d * (x[i] - self.mean[i]);
        }
        self.c_bg += delta_b_old * (x[1] - self.mean[1]);
    }

    #[allow(clippy::needless_range_loop)]
    fn merge(&mut self, other: &Moments) {
        if other.count == 0.0 {
            return;
        }
        if self.count == 0.0 {
            *self = *other;
            return;
        }
        let n = self.count + other.count;
        let w = self.count * other.count / n;
        let d: [f64; 5] = std::array::from_fn(|i| other.mean[i] - self.mean[i]);
        for i in 0..5 {
            self.m2[i] += other.m2[i] + d[i] * d[i] * w;
            self.mean[i] += d[i] * other.count / n;
        }
        self.c_bg += other.c_bg + d[0] * d[1] * w;
        self.count = n;
    }

    /// Standard error of the mean from the unbiased sample variance.
    fn se(&self, i: usize) -> f64 {
        if self.count < 2.0 {
            return 0.0;
        }
        (self.m2[i] / (self.count - 1.0) / self.count).sqrt()
    }
}

/// Simulates `samples` independent families and summarizes them.
pub fn run_simulation(
    rule: Rule,
    p: BirthProbability,
    samples: u64,
    seed: u64,
) -> Result<SimulationSummary> {
    let rule = rule.ensure_nonempty()?;
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let blocks = samples.div_ceil(BLOCK_SIZE);
    let partials: Vec<Moments> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut m = Moments::default();
            let end = ((b + 1) * BLOCK_SIZE).min(samples);
            for i in b * BLOCK_SIZE..end {
                let mut rng = replicate_rng(seed, i);
                m.push(&simulate_family(rule, p, &mut rng)?);
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    let mut all = Moments::default();
    for m in &partials {
        all.merge(m);
    }

    let [mean_boys, mean_girls, mean_total, mean_girl_share, mean_martingale] = all.mean;
    let ratio_estimate = mean_boys / mean_girls;
    let se_ratio = if all.count < 2.0 {
        0.0
    } else {
        let nm1 = all.count - 1.0;
        let (var_b, var_g, cov) = (all.m2[0] / nm1, all.m2[1] / nm1, all.c_bg / nm1);
        let r = ratio_estimate;
        ((var_b - 2.0 * r * cov + r * r * var_g).max(0.0) / all.count).sqrt() / mean_girls
    };
    Ok(SimulationSummary {
        rule,
        p: p.boy(),
        samples,
        seed,
        mean_boys,
        mean_girls,
        mean_total,
        mean_girl_share,
        mean_martingale,
        se_boys: all.se(0),
        se_girls: all.se(1),
        se_total: all.se(2),
        se_girl_share: all.se(3),
        se_martingale: all.se(4),
        ratio_estimate,
        se_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    /// Replays a fixed boy/girl pattern: `true` yields a variate of 0 (boy),
    /// `false` a variate just below 1 (girl).
    struct Scripted {
        births: Vec<bool>,
        pos: usize,
    }

    impl RngCore for Scripted {
        fn next_u32(&mut self) -> u32 {
            self.next_u64() as u32
        }

        fn next_u64(&mut self) -> u64 {
            let boy = self.births[self.pos % self.births.len()];
            self.pos += 1;
            if boy {
                0
            } else {
                u64::MAX
            }
        }

        fn fill_bytes(&mut self, dst: &mut [u8]) {
            for chunk in dst.chunks_mut(8) {
                let v = self.next_u64().to_le_bytes();
                chunk.copy_from_slice(&v[..chunk.len()]);
            }
        }
    }

    #[test]
    fn forced_stream_two_boys() {
        let p = BirthProbability::new(0.4).unwrap();
        let mut rng = Scripted { births: vec![true], pos: 0 };
        let o = simulate_family(Rule::SHAMMAI, p, &mut rng).unwrap();
        assert_eq!((o.boys, o.girls, o.total), (2, 0, 2));
        assert_eq!(o.martingale_terminal, 2.0 / 0.4);
        assert_eq!(rng.pos, 2);
    }

    #[test]
    fn forced_stream_mixed() {
        let p = BirthProbability::even();
        let mut rng = Scripted { births: vec![false, false, true, false, true], pos: 0 };
        let o = simulate_family(Rule::new(2, 1), p, &mut rng).unwrap();
        assert_eq!((o.boys, o.girls, o.total), (2, 3, 5));
        assert_eq!(o.girl_share, 0.6);
        assert_eq!(o.martingale_terminal, 4.0 - 6.0);
    }

    #[test]
    fn structural_properties() {
        let p = BirthProbability::new(0.3).unwrap();
        for i in 0..2000 {
            let mut rng = replicate_rng(7, i);
            let o = simulate_family(Rule::new(1, 0), p, &mut rng).unwrap();
            assert_eq!(o.boys, 1);
            assert_eq!(o.girls, o.total - 1);
            let o = simulate_family(Rule::HILLEL, p, &mut rng).unwrap();
            assert!(o.total >= 2 && o.boys >= 1 && o.girls >= 1);
            assert!(o.boys == 1 || o.girls == 1);
        }
    }

    #[test]
    fn birth_cap_is_reported() {
        let mut rng = Scripted { births: vec![false], pos: 0 };
        let r = simulate_family_capped(Rule::new(1, 0), BirthProbability::even(), &mut rng, 50);
        assert_eq!(r, Err(Error::SimulationCap(50)));
    }

    #[test]
    fn rejects_bad_inputs() {
        let half = BirthProbability::even();
        assert_eq!(run_simulation(Rule::new(0, 0), half, 10, 0), Err(Error::EmptyRule));
        assert_eq!(run_simulation(Rule::HILLEL, half, 0, 0), Err(Error::ZeroSamples));
    }

    #[test]
    fn reproducible_and_seed_sensitive() {
        let p = BirthProbability::new(0.6).unwrap();
        let a = run_simulation(Rule::new(2, 1), p, 10_000, 99).unwrap();
        let b = run_simulation(Rule::new(2, 1), p, 10_000, 99).unwrap();
        assert_eq!(a, b);
        let c = run_simulation(Rule::new(2, 1), p, 10_000, 100).unwrap();
        assert_ne!(a.mean_total, c.mean_total);
    }

    #[test]
    fn block_merge_matches_single_pass() {
        let p = BirthProbability::new(0.45).unwrap();
        let samples = 3 * BLOCK_SIZE + 17;
        let summary = run_simulation(Rule::new(1, 2), p, samples, 5).unwrap();
        let mut sum = 0.0;
        let mut sq = 0.0;
        for i in 0..samples {
            let o = simulate_family(Rule::new(1, 2), p, &mut replicate_rng(5, i)).unwrap();
            sum += o.total as f64;
            sq += (o.total * o.total) as f64;
        }
        let n = samples as f64;
        let mean = sum / n;
        let se = ((sq - n * mean * mean) / (n - 1.0) / n).sqrt();
        assert!((summary.mean_total - mean).abs() < 1e-12);
        assert!((summary.se_total - se).abs() < 1e-9);
    }

    #[test]
    fn single_sample_has_zero_standard_errors() {
        let s = run_simulation(Rule::HILLEL, BirthProbability::even(), 1, 3).unwrap();
        assert_eq!(s.samples, 1);
        assert_eq!(s.se_total, 0.0);
    }
}
