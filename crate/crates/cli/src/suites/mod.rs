//! Seeded verification suites. Trial `i` of a suite draws from its own
//! generator, so any single trial reruns alone with `--offset i --trials 1`.

mod algebra;
mod chain;

pub use chain::{form_factor_cases, spectrum_cases, SectorCase};
pub(crate) use chain::states_with_vectors;

use std::time::Instant;

use clap::ValueEnum;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use su3_core::{Complex64, Scalar};

use crate::config::{Mode, RunConfig};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Kernels,
    Dwpf,
    Lemma1,
    Lemma2,
    Lemma3,
    Zcoeff,
    Oracle,
    Orthogonality,
    Omega,
    Spurious,
    NormLimit,
    Derivation,
    Chain,
    Rtt,
    FormFactor,
    GenSolT,
}

impl Suite {
    pub const ALL: [Suite; 16] = [
        Suite::Kernels,
        Suite::Dwpf,
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Lemma3,
        Suite::Zcoeff,
        Suite::Oracle,
        Suite::Orthogonality,
        Suite::Omega,
        Suite::Spurious,
        Suite::NormLimit,
        Suite::Derivation,
        Suite::Chain,
        Suite::Rtt,
        Suite::FormFactor,
        Suite::GenSolT,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kernels => "kernels",
            Suite::Dwpf => "dwpf",
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Lemma3 => "lemma3",
            Suite::Zcoeff => "zcoeff",
            Suite::Oracle => "oracle",
            Suite::Orthogonality => "orthogonality",
            Suite::Omega => "omega",
            Suite::Spurious => "spurious",
            Suite::NormLimit => "norm-limit",
            Suite::Derivation => "derivation",
            Suite::Chain => "chain",
            Suite::Rtt => "rtt",
            Suite::FormFactor => "form-factor",
            Suite::GenSolT => "gen-sol-t",
        }
    }

    /// Modes the suite can run in.
    pub fn modes(self) -> &'static [Mode] {
        match self {
            Suite::Dwpf | Suite::Orthogonality | Suite::Spurious => &[Mode::Exact],
            Suite::Chain | Suite::Rtt | Suite::FormFactor | Suite::GenSolT => &[Mode::Float],
            _ => &[Mode::Exact, Mode::Float],
        }
    }

    /// Mode used by `verify` when the suite is run without an explicit one.
    pub fn preferred_mode(self) -> Mode {
        self.modes()[0]
    }

    /// Number of distinct trial configurations, for suites that sweep a
    /// fixed list rather than drawing sizes at random.
    pub fn sweep_len(self, cfg: &RunConfig) -> Result<Option<usize>> {
        match self {
            Suite::Chain => Ok(Some(chain::spectrum_cases(cfg)?.len())),
            Suite::FormFactor => Ok(Some(chain::form_factor_cases(cfg)?.len())),
            _ => Ok(None),
        }
    }

    fn stream(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).expect("listed") as u64 + 1
    }
}

pub(crate) enum Outcome {
    Pass,
    Fail(Value),
}

impl Outcome {
    fn check(ok: bool, details: impl FnOnce() -> Value) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail(details())
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub reproduce: String,
    pub details: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub mode: Mode,
    pub seed: u64,
    pub offset: usize,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<Failure>,
    /// Largest measured defect over all trials, for floating-point checks.
    pub worst_defect: Option<f64>,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn summary(&self) -> String {
        let worst = self.worst_defect.map(|d| format!(", worst defect {d:.2e}")).unwrap_or_default();
        format!("{} [{}]: {}/{} pass{worst}", self.suite.name(), self.mode, self.passed, self.trials)
    }
}

/// Seed of trial `index`: word `index` of the suite's ChaCha stream.
pub fn trial_seed(seed: u64, suite: Suite, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite.stream());
    rng.set_word_pos(2 * index as u128);
    rng.next_u64()
}

pub(crate) struct Trial<'a> {
    pub cfg: &'a RunConfig,
    pub index: usize,
    pub seed: u64,
    pub defect: f64,
}

impl Trial<'_> {
    fn record(&mut self, d: f64) {
        self.defect = self.defect.max(d);
    }
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<SuiteReport> {
    if !suite.modes().contains(&cfg.mode) {
        return Err(CliError::Config(format!("suite {} does not run in {} mode", suite.name(), cfg.mode)));
    }
    let start = Instant::now();
    let run_one = |index: usize| -> (usize, std::result::Result<Outcome, CliError>, f64) {
        let mut t = Trial { cfg, index, seed: trial_seed(cfg.seed, suite, index), defect: 0.0 };
        let r = match suite {
            Suite::Kernels => algebra::kernels(&mut t),
            Suite::Dwpf => algebra::dwpf(&mut t),
            Suite::Lemma1 => algebra::lemma1(&mut t),
            Suite::Lemma2 => algebra::lemma2(&mut t),
            Suite::Lemma3 => algebra::lemma3(&mut t),
            Suite::Zcoeff => algebra::zcoeff(&mut t),
            Suite::Oracle => algebra::oracle(&mut t),
            Suite::Orthogonality => algebra::orthogonality(&mut t),
            Suite::Omega => algebra::omega(&mut t),
            Suite::Spurious => algebra::spurious(&mut t),
            Suite::NormLimit => algebra::norm_limit(&mut t),
            Suite::Derivation => algebra::derivation(&mut t),
            Suite::Chain => chain::spectrum(&mut t),
            Suite::Rtt => chain::rtt(&mut t),
            Suite::FormFactor => chain::form_factor(&mut t),
            Suite::GenSolT => chain::gen_sol_t(&mut t),
        };
        (index, r, t.defect)
    };
    let results: Vec<_> = (cfg.offset..cfg.offset + cfg.trials).into_par_iter().map(run_one).collect();
    let mut report = SuiteReport {
        suite,
        mode: cfg.mode,
        seed: cfg.seed,
        offset: cfg.offset,
        trials: cfg.trials,
        passed: 0,
        failed: 0,
        first_failure: None,
        worst_defect: (cfg.mode == Mode::Float).then_some(0.0),
        elapsed_ms: 0,
    };
    for (index, r, defect) in results {
        if let Some(w) = report.worst_defect.as_mut() {
            *w = w.max(defect);
        }
        let details = match r {
            Ok(Outcome::Pass) => {
                report.passed += 1;
                continue;
            }
            Ok(Outcome::Fail(v)) => v,
            Err(e) => json!({ "error": e.to_object() }),
        };
        report.failed += 1;
        if report.first_failure.is_none() {
            let one = RunConfig { suite: Some(suite), ..cfg.single_trial(index) };
            report.first_failure = Some(Failure { trial: index, reproduce: one.reproduce(), details });
        }
    }
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

pub(crate) fn fe<S: Scalar>(x: &S) -> Value {
    serde_json::to_value(x.to_field_element()).unwrap_or(Value::Null)
}

pub(crate) fn fes<S: Scalar>(xs: &[S]) -> Value {
    Value::Array(xs.iter().map(fe).collect())
}

pub(crate) fn cx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub(crate) fn cxs(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().copied().map(cx).collect())
}

/// Exact equality, or relative closeness within `tol` for floats. Returns the
/// relative defect alongside.
pub(crate) fn agree<S: Scalar>(x: &S, y: &S, tol: f64) -> (bool, f64) {
    if S::EXACT {
        let same = x == y;
        (same, if same { 0.0 } else { f64::INFINITY })
    } else {
        let (p, q) = (x.to_complex(), y.to_complex());
        let scale = p.norm().max(q.norm());
        let d = if scale > 0.0 { (p - q).norm() / scale } else { 0.0 };
        (d <= tol, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_seeds_are_distinct_and_stable() {
        let a: Vec<u64> = (0..50).map(|i| trial_seed(7, Suite::Oracle, i)).collect();
        let b: Vec<u64> = (0..50).map(|i| trial_seed(7, Suite::Oracle, i)).collect();
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), a.len());
        assert_ne!(trial_seed(7, Suite::Oracle, 0), trial_seed(7, Suite::Lemma3, 0));
        assert_ne!(trial_seed(7, Suite::Oracle, 0), trial_seed(8, Suite::Oracle, 0));
    }

    #[test]
    fn names_round_trip_through_clap() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_str(s.name(), false).unwrap(), s);
        }
    }
}
