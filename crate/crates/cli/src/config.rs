use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use num_complex::Complex64;
use serde::Serialize;
use su3_core::scalar::parse_rational;
use su3_core::Rational;

use crate::error::{CliError, Result};
use crate::suites::Suite;

pub const MAX_TRIALS: usize = 1_000_000;
/// Largest a or b any command accepts; the partition-sum oracle is the binding guard.
pub const MAX_SET: usize = su3_core::scalar_product::oracle::ORACLE_MAX;
pub const MAX_LEMMA_SIZE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Solve,
    Sp,
    Norm,
    Ff,
    Zcoeff,
    Spectrum,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Solve => "solve",
            Command::Sp => "sp",
            Command::Norm => "norm",
            Command::Ff => "ff",
            Command::Zcoeff => "zcoeff",
            Command::Spectrum => "spectrum",
        }
    }

    /// Mode used when none is given: chain work is floating point only.
    pub fn default_mode(self) -> Mode {
        match self {
            Command::Solve | Command::Ff | Command::Spectrum => Mode::Float,
            _ => Mode::Exact,
        }
    }
}

/// Everything a run depends on. Serialized verbatim as `inputs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub mode: Mode,
    /// Whether --mode was passed; otherwise verify picks each suite's own mode.
    #[serde(skip)]
    pub mode_given: bool,
    pub seed: u64,
    pub trials: usize,
    pub offset: usize,
    pub suite: Option<Suite>,
    pub a: Option<usize>,
    pub b: Option<usize>,
    #[serde(rename = "N")]
    pub sites: Option<usize>,
    pub max_m: Option<usize>,
    pub c: Option<String>,
    pub kappa: Option<String>,
    pub tolerance: Option<f64>,
    pub site: Option<usize>,
    pub sector: Option<String>,
    pub w: Option<String>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub timing: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            mode: command.default_mode(),
            mode_given: false,
            seed: 1,
            trials: 100,
            offset: 0,
            suite: None,
            a: None,
            b: None,
            sites: None,
            max_m: None,
            c: None,
            kappa: None,
            tolerance: None,
            site: None,
            sector: None,
            w: None,
            out: None,
            timing: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.trials == 0 || self.trials > MAX_TRIALS {
            return bad(format!("--trials must lie in 1..={MAX_TRIALS}, got {}", self.trials));
        }
        for (flag, v) in [("--a", self.a), ("--b", self.b)] {
            if let Some(v) = v {
                if v > MAX_SET {
                    return bad(format!("{flag} {v} exceeds the guard {MAX_SET}"));
                }
            }
        }
        if let Some(n) = self.sites {
            if n == 0 || n > su3_lattice::MAX_SITES {
                return bad(format!("--N must lie in 1..={}, got {n}", su3_lattice::MAX_SITES));
            }
        }
        if let Some(m) = self.max_m {
            if m > MAX_LEMMA_SIZE {
                return bad(format!("--max-m {m} exceeds the guard {MAX_LEMMA_SIZE}"));
            }
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("--tolerance must be positive, got {t}"));
            }
        }
        if let Some(m) = self.site {
            if m == 0 || self.sites.is_some_and(|n| m > n) {
                return bad(format!("--site {m} is not a site of the chain"));
            }
        }
        Ok(())
    }

    pub fn tolerance_or(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }

    pub fn rational_c(&self) -> Result<Rational> {
        let c = parse_rational(self.c.as_deref().unwrap_or("1"))?;
        if c == Rational::from_integer(0.into()) {
            return Err(CliError::Config("c must be nonzero".into()));
        }
        Ok(c)
    }

    pub fn rational_kappa(&self) -> Result<Option<Rational>> {
        let k = self.kappa.as_deref().map(parse_rational).transpose()?;
        if k.as_ref().is_some_and(|k| *k == Rational::from_integer(0.into())) {
            return Err(CliError::Config("κ must be nonzero".into()));
        }
        Ok(k)
    }

    /// c for chain work; the XXX point c = i unless given.
    pub fn complex_c(&self) -> Result<Complex64> {
        let c = parse_complex(self.c.as_deref().unwrap_or("i"))?;
        if c.norm() == 0.0 {
            return Err(CliError::Config("c must be nonzero".into()));
        }
        Ok(c)
    }

    pub fn complex_kappa(&self) -> Result<Complex64> {
        let k = parse_complex(self.kappa.as_deref().unwrap_or("1"))?;
        if k.norm() == 0.0 {
            return Err(CliError::Config("κ must be nonzero".into()));
        }
        Ok(k)
    }

    pub fn complex_w(&self, default: &str) -> Result<Complex64> {
        parse_complex(self.w.as_deref().unwrap_or(default))
    }

    /// Command line that reruns exactly this configuration.
    pub fn reproduce(&self) -> String {
        let mut parts = vec!["su3sp".to_string(), self.command.name().to_string()];
        let mut push = |flag: &str, v: String| {
            parts.push(flag.to_string());
            parts.push(v);
        };
        if let Some(s) = self.suite {
            push("--suite", s.name().to_string());
        }
        // a full verify without --mode lets each suite pick its own
        if self.mode_given || self.suite.is_some() || self.command != Command::Verify {
            push("--mode", self.mode.to_string());
        }
        push("--seed", self.seed.to_string());
        push("--trials", self.trials.to_string());
        if self.offset > 0 {
            push("--offset", self.offset.to_string());
        }
        let opt = [
            ("--a", self.a.map(|v| v.to_string())),
            ("--b", self.b.map(|v| v.to_string())),
            ("--N", self.sites.map(|v| v.to_string())),
            ("--max-m", self.max_m.map(|v| v.to_string())),
            ("--c", self.c.clone()),
            ("--kappa", self.kappa.clone()),
            ("--tolerance", self.tolerance.map(|v| format!("{v:e}"))),
            ("--site", self.site.map(|v| v.to_string())),
            ("--sector", self.sector.clone()),
            ("--w", self.w.clone()),
        ];
        for (flag, v) in opt {
            if let Some(v) = v {
                push(flag, v);
            }
        }
        parts.join(" ")
    }

    /// The same configuration restricted to one trial.
    pub fn single_trial(&self, index: usize) -> RunConfig {
        RunConfig { offset: index, trials: 1, ..self.clone() }
    }
}

/// "1", "-0.5", "i", "-2i", "0.3+1.2i", "1e-3-i".
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|ch| !ch.is_whitespace()).collect();
    let bad = || CliError::Config(format!("cannot parse complex number {s:?}"));
    // num-complex wants an explicit coefficient in front of a bare i
    let mut fixed = String::with_capacity(t.len() + 2);
    let mut prev: Option<char> = None;
    for ch in t.chars() {
        if ch == 'i' && matches!(prev, None | Some('+') | Some('-')) {
            fixed.push('1');
        }
        fixed.push(ch);
        prev = Some(ch);
    }
    let z = Complex64::from_str(&fixed).map_err(|_| bad())?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(bad());
    }
    Ok(z)
}

/// "n1,n2,n3" color occupations.
pub fn parse_sector(s: &str) -> Result<[usize; 3]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || CliError::Config(format!("--sector wants n1,n2,n3, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut out = [0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| bad())?;
    }
    Ok(out)
}
