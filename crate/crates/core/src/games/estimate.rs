use super::{run_game, Adversary, GameOutcome, Property};
use crate::error::{Error, Result};
use crate::family::FunctionFamily;
use crate::seed::Seed;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `wins` successes out of `trials`.
pub fn wilson_interval(wins: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = wins as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).clamp(0.0, p), (center + half).clamp(p, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AdvantageEstimate {
    pub trials: u64,
    pub wins: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl AdvantageEstimate {
    pub fn from_counts(wins: u64, trials: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(wins, trials, Z95);
        Self {
            trials,
            wins,
            p_hat: if trials == 0 { 0.0 } else { wins as f64 / trials as f64 },
            ci_low,
            ci_high,
        }
    }

    /// Pools two estimates over disjoint trials.
    pub fn merge(&self, other: &AdvantageEstimate) -> AdvantageEstimate {
        Self::from_counts(self.wins + other.wins, self.trials + other.trials)
    }

    pub fn covers(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

/// Plays `trials` independent games; trial `t` runs under
/// `seed.child("trial", t)`.
pub fn run_trials(
    prop: Property,
    family: &FunctionFamily,
    adv: &dyn Adversary,
    trials: u64,
    seed: &Seed,
) -> Result<Vec<GameOutcome>> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    Ok((0..trials)
        .map(|t| run_game(prop, family, adv, &seed.child("trial", t)))
        .collect())
}

pub fn estimate_advantage(
    prop: Property,
    family: &FunctionFamily,
    adv: &dyn Adversary,
    trials: u64,
    seed: &Seed,
) -> Result<AdvantageEstimate> {
    let outcomes = run_trials(prop, family, adv, trials, seed)?;
    let wins = outcomes.iter().filter(|o| o.win).count() as u64;
    Ok(AdvantageEstimate::from_counts(wins, trials))
}

/// One experiment, printable as a text line or JSON with the same fields.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ExperimentReport {
    pub prop: String,
    pub family: String,
    pub trials: u64,
    pub wins: u64,
    pub p_hat: f64,
    pub ci: [f64; 2],
    pub seed: u64,
}

impl ExperimentReport {
    pub fn new(prop: Property, family: &str, est: &AdvantageEstimate, seed: u64) -> Self {
        Self {
            prop: prop.name().to_owned(),
            family: family.to_owned(),
            trials: est.trials,
            wins: est.wins,
            p_hat: est.p_hat,
            ci: [est.ci_low, est.ci_high],
            seed,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "prop={} family={} trials={} wins={} p_hat={:.4} ci=[{:.4},{:.4}] seed={}",
            self.prop, self.family, self.trials, self.wins, self.p_hat, self.ci[0], self.ci[1], self.seed
        )
    }

    pub fn json(&self) -> String {
        serde_json::to_string(self).expect("plain struct")
    }
}
