//! `heun-unfold`: invariants of the reducible double confluent Heun equation
//! and its symmetric unfolding, with eps sweeps, oracle cross-checks and
//! machine-readable reports.

mod commands;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use heun_unfold_core::Error as CoreError;
use num_complex::Complex64;

pub const SCHEMA: &str = "heun-unfold/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_VERDICT: i32 = 4;

/// Parse a complex scalar written as `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim().replace(' ', "");
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    if let Ok(re) = t.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    let body = t.strip_suffix(['i', 'j']).ok_or_else(|| {
        format!("cannot parse '{s}' as a complex number (expected forms: 1.5, 2i, 0.7+0.2i)")
    })?;
    // Split at the last +/- that is not an exponent sign or leading sign.
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let b = bytes[i];
        if (b == b'+' || b == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    match split {
        Some(i) => {
            let re: f64 = body[..i]
                .parse()
                .map_err(|_| format!("bad real part in '{s}'"))?;
            let im_str = &body[i..];
            let im: f64 = if im_str == "+" {
                1.0
            } else if im_str == "-" {
                -1.0
            } else {
                im_str
                    .parse()
                    .map_err(|_| format!("bad imaginary part in '{s}'"))?
            };
            Ok(Complex64::new(re, im))
        }
        None => {
            let im: f64 = if body.is_empty() {
                1.0
            } else {
                body.parse()
                    .map_err(|_| format!("bad imaginary part in '{s}'"))?
            };
            Ok(Complex64::new(0.0, im))
        }
    }
}

#[derive(Clone, Debug)]
pub struct EpsRange(pub Vec<f64>);

#[derive(Clone, Debug)]
pub struct MList(pub Vec<u32>);

/// Geometric eps range `start:stop:ratio`, e.g. `1e-2:1e-6:10`.
pub fn parse_eps_range(s: &str) -> Result<EpsRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("eps range must be start:stop:ratio, e.g. 1e-2:1e-6:10".into());
    }
    let start: f64 = parts[0].parse().map_err(|_| "bad range start")?;
    let stop: f64 = parts[1].parse().map_err(|_| "bad range stop")?;
    let ratio: f64 = parts[2].parse().map_err(|_| "bad range ratio")?;
    if !(start > stop && stop > 0.0 && ratio > 1.0) {
        return Err("need start > stop > 0 and ratio > 1".into());
    }
    let mut out = Vec::new();
    let mut e = start;
    while e >= stop * (1.0 - 1e-12) {
        out.push(e);
        e /= ratio;
    }
    if out.len() < 2 {
        return Err("eps range produced fewer than 2 points".into());
    }
    Ok(EpsRange(out))
}

/// Comma-separated resonance indices, e.g. `25,50,100,200`.
pub fn parse_m_list(s: &str) -> Result<MList, String> {
    let mut out = Vec::new();
    for p in s.split(',') {
        out.push(
            p.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad resonance index '{p}'"))?,
        );
    }
    if out.is_empty() {
        return Err("empty m list".into());
    }
    Ok(MList(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

#[derive(Parser)]
#[command(
    name = "heun-unfold",
    about = "Analytic invariants of the reducible double confluent Heun equation and its symmetric unfolding",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub output: OutputFormat,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,

    /// Seed for randomized sampling in the oracle checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Tolerance for residue-oracle comparisons.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_residue: f64,

    /// Tolerance for monodromy-oracle comparisons.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol_monodromy: f64,

    /// Relative tolerance for limit verdicts.
    #[arg(long, global = true, default_value_t = 1e-4)]
    pub tol_limit: f64,
}

#[derive(Clone, Debug, clap::Args)]
pub struct ParamArgs {
    /// Characteristic exponent parameter alpha (complex, e.g. "0.7+0.2i").
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Complex64,

    /// Non-negative real parameter beta.
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,

    /// Parameter gamma (complex).
    #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
    pub gamma: Complex64,

    /// Unfolding scale sqrt(eps) in (0, 1).
    #[arg(long)]
    pub sqrt_eps: Option<f64>,

    /// Resonance index m (sets sqrt(eps) = beta/(2m - alpha)).
    #[arg(long)]
    pub m: Option<u32>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Classify the singularities and resonance regime.
    Classify(ParamArgs),
    /// All applicable closed-form invariants at one parameter point.
    Invariants(ParamArgs),
    /// Residues, nilpotent logs and matrices of the unfolded equation.
    Unfold(ParamArgs),
    /// eps -> 0 sweeps with extrapolated verdicts.
    Limits {
        #[command(subcommand)]
        check: LimitsCheck,
    },
    /// Closed forms vs contour/loop oracles.
    Oracle {
        #[command(subcommand)]
        which: OracleCheck,
    },
    /// Formal series and Borel-Laplace resummation.
    Resum {
        #[command(subcommand)]
        which: ResumCheck,
    },
    /// The alpha = 2, 4, 6 reproduction suite.
    Appendix {
        /// gamma for the reproduction runs.
        #[arg(long, value_parser = parse_complex, default_value = "1.5", allow_hyphen_values = true)]
        gamma: Complex64,
    },
}

#[derive(Subcommand)]
pub enum LimitsCheck {
    /// q_R + q_L against the closed-form log coefficient.
    SumLimit {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = parse_eps_range, default_value = "1e-2:1e-6:10")]
        eps_range: EpsRange,
    },
    /// Sign and growth order of the diverging residues.
    DivergenceSign {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = parse_eps_range, default_value = "1e-1:1e-4:10")]
        eps_range: EpsRange,
    },
    /// d_L along the resonant sequence against mu/(2 pi i).
    DlLimit {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = parse_m_list, default_value = "25,50,100,200")]
        m_range: MList,
    },
    /// Unfolded Stokes matrix against the confluent one.
    StokesLimit {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = parse_m_list, default_value = "25,50,100,200")]
        m_range: MList,
    },
    /// Unfolded monodromy against the confluent monodromy.
    MonodromyLimit {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = parse_eps_range, default_value = "1e-2:1e-6:10")]
        eps_range: EpsRange,
    },
    /// Small-eps expansion of the exponential prefactors.
    EpsSeries {
        #[arg(long, value_parser = parse_complex, default_value = "1")]
        gamma: Complex64,
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
    },
}

#[derive(Subcommand)]
pub enum OracleCheck {
    /// Contour residues vs the closed forms (plus a seeded Laurent sanity
    /// check).
    Residue {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Loop continuation vs the closed-form monodromy matrices.
    Monodromy {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Confluence probe of the solutions themselves.
    Convergence {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = parse_eps_range, default_value = "1e-2:1e-4:10")]
        eps_range: EpsRange,
    },
}

#[derive(Subcommand)]
pub enum ResumCheck {
    /// Formal-series coefficients and the polynomial part.
    Series {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 12)]
        n_terms: usize,
    },
    /// Ray Laplace (or functional-series) sum at a point.
    Sum {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        x: Complex64,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
    },
    /// The Stokes multiplier from the lateral jump, against the series.
    Jump {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = parse_complex, default_value = "-0.35", allow_hyphen_values = true)]
        x: Complex64,
        #[arg(long, default_value_t = 0.05)]
        delta_lateral: f64,
    },
}

pub enum CliError {
    Validation(String),
    Numeric(String),
    VerdictFail(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Precondition(_)
            | CoreError::Domain(_)
            | CoreError::TooFewPoints { .. }
            | CoreError::EmptySequence
            | CoreError::GammaPole(_) => CliError::Validation(e.to_string()),
            CoreError::ToleranceNotMet { .. }
            | CoreError::BranchPointDetected { .. }
            | CoreError::OverflowGuard { .. }
            | CoreError::SeriesCap { .. }
            | CoreError::SingularPointOnPath { .. }
            | CoreError::XDependent { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match commands::run(&cli) {
        Ok(()) => EXIT_OK,
        Err(CliError::Validation(msg)) => {
            eprintln!("error (validation): {msg}");
            EXIT_VALIDATION
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error (numeric): {msg}");
            EXIT_NUMERIC
        }
        Err(CliError::VerdictFail(msg)) => {
            eprintln!("verdict: FAIL - {msg}");
            EXIT_VERDICT
        }
    };
    std::process::exit(code);
}
