use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Command, Mode, RunConfig};
use crate::suites::Suite;

#[derive(Debug, Parser)]
#[command(name = "su3sp", version, about = "SU(3) scalar products: verification suites and XXX-chain computations, JSON out")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Run seeded verification suites (all of them unless --suite is given)
    Verify(Flags),
    /// Bethe roots of a chain sector
    Solve(Flags),
    /// Scalar product of a random (twisted) on-shell pair, determinant and partition sum
    Sp(Flags),
    /// Norm formula: random data, or chain states with --N
    Norm(Flags),
    /// E22 form factors between chain eigenstates, with the dense matrix elements
    Ff(Flags),
    /// Highest coefficient in both representations
    Zcoeff(Flags),
    /// Dense transfer-matrix spectrum of one weight sector, with the Bethe eigenvalues in it
    Spectrum(Flags),
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Arithmetic: exact rationals or complex doubles
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Index of the first trial
    #[arg(long, default_value_t = 0)]
    pub offset: usize,
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    /// Number of chain sites
    #[arg(long = "N")]
    pub sites: Option<usize>,
    /// Largest set size for the lemma and DWPF suites
    #[arg(long)]
    pub max_m: Option<usize>,
    /// "p/q" in exact mode, complex such as "i" or "0.5-1i" in float mode
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<String>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Site m of the local operator (1-based)
    #[arg(long)]
    pub site: Option<usize>,
    /// Color occupations "n1,n2,n3"
    #[arg(long)]
    pub sector: Option<String>,
    /// Spectral parameter
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report runtime_ms as null, for byte-identical reruns
    #[arg(long)]
    pub no_timing: bool,
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        let (command, f) = match self.command {
            Sub::Verify(f) => (Command::Verify, f),
            Sub::Solve(f) => (Command::Solve, f),
            Sub::Sp(f) => (Command::Sp, f),
            Sub::Norm(f) => (Command::Norm, f),
            Sub::Ff(f) => (Command::Ff, f),
            Sub::Zcoeff(f) => (Command::Zcoeff, f),
            Sub::Spectrum(f) => (Command::Spectrum, f),
        };
        RunConfig {
            command,
            mode: f.mode.unwrap_or(command.default_mode()),
            mode_given: f.mode.is_some(),
            seed: f.seed,
            trials: f.trials,
            offset: f.offset,
            suite: f.suite,
            a: f.a,
            b: f.b,
            sites: f.sites,
            max_m: f.max_m,
            c: f.c,
            kappa: f.kappa,
            tolerance: f.tolerance,
            site: f.site,
            sector: f.sector,
            w: f.w,
            out: f.out,
            timing: !f.no_timing,
        }
    }
}
