use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ternary_kloosterman::field::DEFAULT_MAX_DEGREE;
use ternary_kloosterman::kloosterman::DEFAULT_SEED;

/// Environment variable holding the default worker-thread count.
pub const THREADS_ENV: &str = "KLOOST3_THREADS";

/// Ternary Kloosterman sums over GF(3^n): tables, congruence sweeps and
/// 3-adic Gauss-sum checks.
#[derive(Debug, Parser)]
#[command(name = "kloost3", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Extension degree n of GF(3^n).
    #[arg(long, global = true)]
    pub n: Option<usize>,

    /// Defining polynomial: the low coefficients c0,..,c_{n-1} of a monic
    /// degree-n polynomial, or their packed index sum c_i 3^i.
    #[arg(long, global = true, value_name = "COEFFS")]
    pub modulus: Option<String>,

    /// 3-adic precision (arithmetic mod 3^k). Defaults depend on the check.
    #[arg(long, global = true)]
    pub k: Option<u32>,

    /// Seed for sampled checks; decimal or 0x-prefixed hex.
    #[arg(long, global = true, value_parser = parse_seed, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Worker threads: 1 runs sequentially, 0 uses every core. Falls back
    /// to $KLOOST3_THREADS.
    #[arg(long, global = true, value_name = "THREADS")]
    pub parallel: Option<usize>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Largest accepted n.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DEGREE)]
    pub max_degree: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One row per field element with K(a), its residues and the predicted residues.
    Table(TableArgs),
    /// Exhaustive congruence sweeps; exit 1 on any mismatch.
    Verify(VerifyArgs),
    /// Gauss-sum checks in the 3-adic ring.
    Gauss(GaussArgs),
    /// Time the naive and transform evaluations and compare their output.
    Bench(BenchArgs),
    /// Field parameters and the exponent sets X, Y, Z.
    FieldInfo,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Moduli to add predicted/match columns for (2, 9, 18, 27, 54).
    #[arg(long = "mod", value_delimiter = ',', value_parser = parse_modulus_value)]
    pub moduli: Vec<u32>,

    /// Restrict to these elements (coefficients "c0,c1,.." or packed index).
    #[arg(long = "element", value_name = "ELEMENT")]
    pub elements: Vec<String>,

    /// Compute K(a) by direct summation instead of the transform.
    #[arg(long)]
    pub naive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModTarget {
    All,
    Modulus(u32),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Sweeps to run: 2, 9, 18, 27, 54 or all.
    #[arg(long = "mod", value_delimiter = ',', default_value = "all", value_parser = parse_mod_target)]
    pub targets: Vec<ModTarget>,

    /// Also evaluate every K(a) by direct summation and require agreement.
    #[arg(long)]
    pub cross_check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum GaussTarget {
    Valuation,
    Stickelberger,
    GrossKoblitz,
    Wt1lem,
    /// Fourier expansion of K(a); also reports the mod-27 hat form.
    Firstkl,
    Cong3,
    All,
}

#[derive(Debug, Args)]
pub struct GaussArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub check: Vec<GaussTarget>,

    /// Elements sampled for firstkl; the whole field when q is not larger.
    #[arg(long, default_value_t = 243)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Skip the naive evaluation above this n.
    #[arg(long, default_value_t = 8)]
    pub naive_max: usize,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.replace('_', "").parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn parse_modulus_value(s: &str) -> Result<u32, String> {
    match s.trim().parse::<u32>() {
        Ok(m @ (2 | 9 | 18 | 27 | 54)) => Ok(m),
        _ => Err(format!("expected one of 2, 9, 18, 27, 54; got {s:?}")),
    }
}

fn parse_mod_target(s: &str) -> Result<ModTarget, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(ModTarget::All);
    }
    parse_modulus_value(s).map(ModTarget::Modulus)
}
