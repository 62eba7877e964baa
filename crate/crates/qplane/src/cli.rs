use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "qplane", version, about = "Exact counting and verification on the finite plane F_q^2")]
pub struct Cli {
    /// Size caps as `key=value` pairs (max_q, dim4_q, g1_q, brute); overrides QPLANE_LIMITS.
    #[arg(long, global = true)]
    pub limits: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct FieldArgs {
    /// Odd prime characteristic.
    #[arg(long)]
    pub p: u32,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Monic modulus coefficients, constant term first (e.g. `1,0,1` for x^2 + 1).
    #[arg(long)]
    pub modulus: Option<String>,
}

#[derive(Debug, Args, Clone)]
pub struct SetArgs {
    /// Point-set recipe: all | random:N | grid | line:a,b,c | sphere:t | points:(x,y);...
    #[arg(long, default_value = "all")]
    pub set: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Clone)]
pub struct OutArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    DistSet,
    Product,
    Quotient,
    Directions,
    Scales,
    Histogram,
    Gamma,
    Eta,
    Nu,
    MuEnergy,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field order, modulus, square census, |O(2)| and sphere sizes.
    FieldInfo {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Orthogonal group and G1 sizes, optionally listing O(2).
    GroupInfo {
        #[command(flatten)]
        field: FieldArgs,
        /// List every element of O(2).
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Transform of the set indicator over F_q^2.
    Fourier {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// One counting quantity for one set.
    Compute {
        #[arg(value_enum)]
        quantity: Quantity,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        set: SetArgs,
        /// Second-moment form: L^2(D_E) for directions, T(E) for scales.
        #[arg(long)]
        l2: bool,
        #[arg(long)]
        lambda: Option<u32>,
        /// Nonzero square for `eta`.
        #[arg(long)]
        r: Option<u32>,
        /// Pair class for `nu`: all, A (nonzero squares) or B (non-squares).
        #[arg(long, default_value = "all")]
        class: String,
        /// Index into the O(2) listing of `group-info --list` for an `eta` table.
        #[arg(long)]
        theta: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run verification checks over one recipe and a range of seeds.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        set: SetArgs,
        /// `all` or a comma-separated list of spherical, product, quotient, direction, scale, n0, identities.
        #[arg(long, default_value = "all")]
        checks: String,
        /// Seeds `seed .. seed + trials` for random recipes.
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value = "thresholds.toml")]
        thresholds: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare fast counts against brute-force enumeration.
    OracleDiff {
        #[command(flatten)]
        field: FieldArgs,
        /// Largest set size; every subset up to this size is used when the plane has at most 9 points.
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random sets drawn when enumeration is not exhaustive.
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Seeded sweep from a TOML file: JSONL rows plus a long-format plot CSV.
    Experiment {
        config: PathBuf,
        /// Output directory for `rows.jsonl` and `plot.csv`.
        #[arg(long, default_value = "experiment-out")]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Run the calibration corpus and write a thresholds file.
    Calibrate {
        #[arg(long, default_value_t = qplane_core::verify::CALIBRATION_SEED)]
        seed: u64,
        /// Random sets per field order in the random part of the corpus.
        #[arg(long, default_value_t = 1000)]
        per_q: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}
