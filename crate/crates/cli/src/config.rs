use clap::{Args, Parser, Subcommand, ValueEnum};
use quatfact::clifford::TernaryForm;
use quatfact::dvr::parse_rational;
use quatfact::Mat2;

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 20_240_611;

#[derive(Debug, Parser)]
#[command(name = "quatfact", version, about = "Factorization invariants of quaternion orders over Z_(p)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List canonical atom representatives of an Eichler order.
    Atoms(AtomsArgs),
    /// Factor an element of an Eichler order.
    Factor(FactorArgs),
    /// Classify the even Clifford algebra of a ternary form.
    Clifford(CliffordArgs),
    /// Run the verification checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct AtomsArgs {
    #[arg(long, default_value_t = 3)]
    pub prime: u64,
    #[arg(long, default_value_t = 2)]
    pub level: u32,
    #[arg(long, default_value_t = 1)]
    pub max_norm_val: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    /// Entries `a,b,c,d` of [[a, b], [c, d]], or the JSON form [["a","b"],["c","d"]].
    #[arg(allow_hyphen_values = true)]
    pub element: String,
    #[arg(long, default_value_t = 3)]
    pub prime: u64,
    #[arg(long, default_value_t = 2)]
    pub level: u32,
    /// Emit the factorization graph in DOT instead of the profile.
    #[arg(long)]
    pub emit_dot: bool,
    #[arg(long, default_value_t = quatfact::factorize::DEFAULT_MAX_COUNT)]
    pub max_count: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CliffordArgs {
    #[arg(long, default_value_t = 3)]
    pub prime: u64,
    /// Coefficients `a,b,c,u,v,w` of ax^2 + by^2 + cz^2 + uyz + vxz + wxy.
    #[arg(long, allow_hyphen_values = true)]
    pub form: String,
    /// Search for a nilpotent radical element and the atoms pi^k + z.
    #[arg(long)]
    pub find_nilpotent: bool,
    /// Isotropy search height exponent.
    #[arg(long, default_value_t = quatfact::clifford::local::DEFAULT_ISOTROPY_BOUND)]
    pub bound: u32,
    /// Largest k for the atoms pi^k + z.
    #[arg(long, default_value_t = 5)]
    pub max_k: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Override the per-instance sample counts of the sampled checks.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Run only these check ids (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u32>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Everything that determines a verification run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: Option<usize>,
    pub checks: Vec<u32>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            samples: None,
            checks: (1..=12).collect(),
        }
    }
}

impl RunConfig {
    pub fn from_args(args: &VerifyArgs) -> Result<Self, CliError> {
        let checks = if args.only.is_empty() {
            (1..=12).collect()
        } else {
            args.only.clone()
        };
        if let Some(bad) = checks.iter().find(|&&c| !(1..=12).contains(&c)) {
            return Err(CliError::Parse(format!("unknown check id {bad}")));
        }
        Ok(RunConfig {
            seed: args.seed,
            samples: args.samples,
            checks,
        })
    }

    pub fn count(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }
}

fn parse_list(s: &str, len: usize, what: &str) -> Result<Vec<num_rational::BigRational>, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != len {
        return Err(CliError::Parse(format!("{what} needs {len} comma-separated entries, got {s:?}")));
    }
    parts
        .iter()
        .map(|t| parse_rational(t).map_err(CliError::from))
        .collect()
}

pub fn parse_matrix(s: &str) -> Result<Mat2, CliError> {
    let s = s.trim();
    if s.starts_with('[') {
        return Ok(serde_json::from_str(s)?);
    }
    let e = parse_list(s, 4, "a matrix")?;
    let [a, b, c, d]: [_; 4] = e.try_into().expect("four entries");
    Ok(Mat2::new(a, b, c, d))
}

pub fn parse_form(s: &str) -> Result<TernaryForm, CliError> {
    let s = s.trim();
    if s.starts_with('{') {
        return Ok(serde_json::from_str(s)?);
    }
    let e = parse_list(s, 6, "a ternary form")?;
    Ok(TernaryForm::new(e.try_into().expect("six entries")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use quatfact::dvr::rat;

    #[test]
    fn parses_matrices_and_forms() {
        assert_eq!(parse_matrix("3,9,3,18").unwrap(), Mat2::from_ints(3, 9, 3, 18));
        assert_eq!(parse_matrix(r#"[["3","9"],["3","18"]]"#).unwrap(), Mat2::from_ints(3, 9, 3, 18));
        assert!(matches!(parse_matrix("3,9,3"), Err(CliError::Parse(_))));
        assert!(matches!(parse_matrix("3,x,3,1"), Err(CliError::Parse(_))));
        let f = parse_form("1,1,-9,0,0,0").unwrap();
        assert_eq!(f.c, rat(-9));
        assert_eq!(parse_form(r#"{"a":"1","b":"1","c":"-9","u":"0","v":"0","w":"0"}"#).unwrap(), f);
    }
}
