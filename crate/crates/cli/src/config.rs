//! Command-line surface and the validated run configuration.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{CliError, CliResult};

/// Environment variable naming a directory for the nonnegativity checkpoint.
pub const CHECKPOINT_DIR_ENV: &str = "QCIRCLE_CHECKPOINT_DIR";
pub const CHECKPOINT_FILE: &str = "verify-nonneg.json";
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "qcircle",
    version,
    about = "Exact coefficients and circle-method bounds for G(q) = 1/(q, -q^3; q^4)_inf",
    after_help = "Exit codes: 0 success, 2 counterexample or failed identity, 3 precondition violation, 4 I/O or corrupted checkpoint."
)]
pub struct Cli {
    /// Absolute tolerance for numerical evaluations.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    /// Write output here instead of stdout (atomically).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Report format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write g(0..=N) as CSV (columns: n,g_n) or in the binary QSER1 layout.
    Coeffs {
        #[arg(long)]
        n: usize,
        /// Binary layout instead of CSV.
        #[arg(long)]
        binary: bool,
    },
    /// Check g(n) >= 0 for n <= N with a hash-chained checkpoint ledger.
    VerifyNonneg {
        #[arg(long)]
        n: u64,
        /// Ledger path; defaults to $QCIRCLE_CHECKPOINT_DIR/verify-nonneg.json.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Continue from an existing ledger after verifying its hash chain.
        #[arg(long)]
        resume: bool,
        /// Coefficients between persisted checkpoints.
        #[arg(long, default_value_t = 10_000)]
        checkpoint_every: u64,
    },
    /// Exact g(n) against g1 + g2 (CSV columns: n,g_exact,g_asym_log,rel_err,e_g1_log,e_g2_log,g3_log).
    Compare {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
    /// Positivity certificate and full error budget for one n (accepts 2.4e14).
    Certify {
        #[arg(long, value_parser = parse_count)]
        n: u128,
    },
    /// Main terms on the arc h/k at tau = 1/X + 2 pi i Y.
    Mainterm {
        #[arg(long)]
        a: Option<i64>,
        #[arg(long)]
        m: Option<i64>,
        #[arg(long)]
        h: i64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        y: f64,
    },
    /// Order-N Farey fractions and the exact covering verdict.
    Farey {
        #[arg(long)]
        order: u64,
    },
    /// Near-pole expansions against the series (CSV columns: x,y,pole,approx_re,approx_im,truth_re,truth_im,abs_err,bound,within_bound).
    Nearpole {
        #[arg(long, value_delimiter = ',', required = true)]
        x_grid: Vec<f64>,
        /// Y values as multiples of 1/(2 pi X).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0.5,-0.5,1,-1")]
        y_fractions: Vec<f64>,
    },
    /// Finite-sum Hurwitz zeta and digamma identities for k <= K.
    Identities {
        #[arg(long, default_value_t = 100)]
        k_max: i64,
    },
}

/// Parses `240000000000000`, `2.4e14` or `2.4E+14` as an exact integer.
pub fn parse_count(s: &str) -> Result<u128, String> {
    let s = s.trim().replace('_', "");
    let (mantissa, exponent) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m.to_owned(), e.parse::<i32>().map_err(|e| e.to_string())?),
        None => (s.clone(), 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((&mantissa, ""));
    let frac_part = frac_part.trim_end_matches('0');
    let shift = exponent - frac_part.len() as i32;
    if shift < 0 {
        return Err(format!("{s} is not an integer"));
    }
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("{s} is not a non-negative number"));
    }
    let base: u128 = digits.parse().map_err(|_| format!("{s} is too large"))?;
    10u128
        .checked_pow(shift as u32)
        .and_then(|p| base.checked_mul(p))
        .ok_or_else(|| format!("{s} is too large"))
}

/// Validated settings shared by every command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tol: f64,
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> CliResult<Self> {
        let tol = cli.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(CliError::Precondition(format!("--tol must be positive, got {tol}")));
        }
        if cli.jobs == 0 {
            return Err(CliError::Precondition("--jobs must be at least 1".into()));
        }
        Ok(Self {
            tol,
            jobs: cli.jobs,
            out: cli.out.clone(),
            format: cli.format,
        })
    }

    pub fn format_or(&self, default: OutputFormat) -> OutputFormat {
        self.format.unwrap_or(default)
    }
}

/// `--checkpoint`, else `$QCIRCLE_CHECKPOINT_DIR/verify-nonneg.json`.
pub fn resolve_checkpoint(flag: Option<PathBuf>, env_dir: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| env_dir.map(|d| d.join(CHECKPOINT_FILE)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_in_scientific_notation() {
        assert_eq!(parse_count("2.4e14"), Ok(240_000_000_000_000));
        assert_eq!(parse_count("1E+20"), Ok(100_000_000_000_000_000_000));
        assert_eq!(parse_count("12345"), Ok(12345));
        assert_eq!(parse_count("1_000"), Ok(1000));
        assert!(parse_count("2.45e1").is_err());
        assert!(parse_count("-3").is_err());
        assert!(parse_count("1e40").is_err());
    }

    #[test]
    fn checkpoint_flag_wins_over_environment() {
        let env = Some(PathBuf::from("/tmp/ck"));
        assert_eq!(
            resolve_checkpoint(None, env.clone()),
            Some(PathBuf::from("/tmp/ck/verify-nonneg.json"))
        );
        assert_eq!(
            resolve_checkpoint(Some("a.json".into()), env),
            Some(PathBuf::from("a.json"))
        );
        assert_eq!(resolve_checkpoint(None, None), None);
    }

    #[test]
    fn rejects_bad_tolerance_and_jobs() {
        let cli = Cli::try_parse_from(["qcircle", "--tol", "0", "farey", "--order", "3"]).unwrap();
        assert!(RunConfig::from_cli(&cli).is_err());
        let cli = Cli::try_parse_from(["qcircle", "--jobs", "0", "farey", "--order", "3"]).unwrap();
        assert!(RunConfig::from_cli(&cli).is_err());
    }
}
