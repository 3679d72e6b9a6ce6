use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "opilab",
    version,
    about = "Operator-inequality laboratory: verify matrix inequalities against their scalar bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Run verification suites and write JSONL reports plus a CSV summary
    Verify(VerifyArgs),
    /// Evaluate one scalar bound and echo it as JSON
    Bounds(BoundsArgs),
    /// Sweep a Furuta exponent grid and emit a CSV
    Sweep(SweepArgs),
    /// Certify operator monotonicity of a function spec via Löwner matrices
    Certify(CertifyArgs),
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Theorem ids (thmA, thmB, thmC, convexity, keyLemma, thm33, thm41,
    /// thm42, cor43) or "all"
    #[arg(long, value_delimiter = ',')]
    pub theorem: Vec<String>,

    /// Matrix dimensions to run
    #[arg(long, value_delimiter = ',')]
    pub dims: Vec<usize>,

    /// Trials per (theorem, dim) cell
    #[arg(long)]
    pub trials: Option<usize>,

    /// Master seed (default: OPILAB_SEED env var, else 0)
    #[arg(long)]
    pub seed: Option<u64>,

    /// Scale of the verdict tolerance
    #[arg(long = "tol-scale")]
    pub tol_scale: Option<f64>,

    /// Function spec JSON files replacing the per-theorem default sets
    /// (repeatable)
    #[arg(long = "spec")]
    pub specs: Vec<PathBuf>,

    /// Output directory for reports.jsonl and summary.csv
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// JSON config file mirroring these flags; explicit flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct BoundsArgs {
    /// Bound id: thmA, thmAlog, thmB, thmC, lemma31, key, thm33, k, thm41,
    /// thm42, cor43
    pub id: String,

    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long = "normA")]
    pub norm_a: Option<f64>,
    #[arg(long = "normB")]
    pub norm_b: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long = "mA")]
    pub m_a: Option<f64>,
    #[arg(long = "MB")]
    pub m_b_max: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,

    /// Function spec JSON file (thmB and thm33)
    #[arg(long = "spec")]
    pub spec: Option<PathBuf>,
}

#[derive(Args)]
pub struct SweepArgs {
    /// p grid as lo:hi:step
    #[arg(long)]
    pub p: String,
    /// q grid as lo:hi:step
    #[arg(long)]
    pub q: String,
    /// r grid as lo:hi:step
    #[arg(long)]
    pub r: String,

    /// Pair dimension for the evaluated cells
    #[arg(long, default_value_t = 2)]
    pub dim: usize,

    /// Seeded pairs per valid cell
    #[arg(long, default_value_t = 3)]
    pub trials: usize,

    /// Master seed (default: OPILAB_SEED env var, else 0)
    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long = "tol-scale")]
    pub tol_scale: Option<f64>,

    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CertifyArgs {
    /// Function spec JSON file
    #[arg(long)]
    pub spec: PathBuf,

    /// Certification interval lower endpoint
    #[arg(long)]
    pub lo: f64,

    /// Certification interval upper endpoint
    #[arg(long)]
    pub hi: f64,

    #[arg(long, default_value_t = 100)]
    pub trials: usize,

    /// Points per sampled Löwner matrix
    #[arg(long, default_value_t = 4)]
    pub points: usize,

    /// Master seed (default: OPILAB_SEED env var, else 0)
    #[arg(long)]
    pub seed: Option<u64>,
}
