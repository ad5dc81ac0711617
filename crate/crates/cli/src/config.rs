//! Command-line definition and validation.
//!
//! Parsing happens in two steps. `clap` turns the arguments into [`Cli`], then
//! [`Cli::validate`] checks every value and produces an [`ExperimentConfig`]. No
//! computation starts before validation succeeds.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Signed;

use pftl_core::enumerate::DEFAULT_WORK_LIMIT;
use pftl_core::{parse_rational, DEFAULT_PREC_BITS};

use crate::Failure;

const MIN_PREC_BITS: u32 = 32;
const MAX_PREC_BITS: u32 = 8192;
const MAX_WORKERS: usize = 1024;

#[derive(Debug, Parser)]
#[command(name = "pftl", version, about = "Heights, discriminants and torsion exponents of pure number fields Q(a^(1/d))")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Flags accepted by every subcommand.
#[derive(Debug, Args)]
pub struct Common {
    /// Working precision of certified numerics, in bits.
    #[arg(long, global = true, env = "PFTL_PREC_BITS", default_value_t = DEFAULT_PREC_BITS)]
    pub prec_bits: u32,
    /// Worker threads for enumeration (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Maximum number of enumeration candidates.
    #[arg(long, global = true, default_value_t = DEFAULT_WORK_LIMIT)]
    pub limit: u64,
    /// Write JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Write CSV with a header row.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field descriptor: decomposition, discriminant, ramified primes.
    Field {
        /// Odd degree, at least 3.
        #[arg(long)]
        d: u32,
        /// Radicand: an integer >= 2 free of d-th powers.
        #[arg(long)]
        a: String,
    },
    /// Class group torsion exponents for one field.
    Bounds {
        /// Odd degree, at least 3.
        #[arg(long)]
        d: u32,
        /// Radicand: an integer >= 2 free of d-th powers.
        #[arg(long)]
        a: String,
        /// Torsion order ell >= 1.
        #[arg(long)]
        ell: u32,
    },
    /// The family a = A_1 A_{d-1}^(d-1) with A_{d-1} <= A_1 <= 2 A_{d-1}.
    FdlFamily {
        /// Odd degree, at least 3.
        #[arg(long)]
        d: u32,
        /// Torsion order ell >= 1.
        #[arg(long)]
        ell: u32,
        /// Largest A_{d-1}.
        #[arg(long)]
        a_max: u64,
    },
    /// Counts of primitive elements of height below each X.
    Growth {
        /// Odd degree, at least 3.
        #[arg(long)]
        d: u32,
        /// Radicands, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        a: Vec<String>,
        /// Height bounds, comma separated.
        #[arg(long = "X", value_delimiter = ',', num_args = 1..)]
        x: Vec<String>,
    },
    /// Good primes of norm below D^delta.
    Primes {
        /// Odd degree, at least 3.
        #[arg(long)]
        d: u32,
        /// Radicand: an integer >= 2 free of d-th powers.
        #[arg(long)]
        a: String,
        /// Norm exponent: primes of norm below D^delta are listed.
        #[arg(long)]
        delta: String,
        /// Slack in the reference count D^(delta - eps); 0 < eps < delta.
        #[arg(long)]
        eps: String,
    },
    /// Primitive elements of height below X.
    Enumerate {
        /// Odd degree, at least 3.
        #[arg(long)]
        d: u32,
        /// Radicand: an integer >= 2 free of d-th powers.
        #[arg(long)]
        a: String,
        /// Height bound, as an integer, decimal or fraction.
        #[arg(long = "X")]
        x: String,
    },
    /// Grid upper bound for M_{K,ell}.
    Mkl {
        /// Odd degree, at least 3.
        #[arg(long)]
        d: u32,
        /// Radicand: an integer >= 2 free of d-th powers.
        #[arg(long)]
        a: String,
        /// Torsion order ell >= 1.
        #[arg(long)]
        ell: u32,
        /// Grid of height bounds, comma separated.
        #[arg(long = "X", value_delimiter = ',', num_args = 1..)]
        x: Vec<String>,
    },
}

/// Output encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// The command's own default.
    Default,
    Json,
    Csv,
}

/// A fully validated run request.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub task: Task,
    pub prec_bits: u32,
    pub workers: usize,
    pub limit: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub enum Task {
    Field { d: u32, a: BigUint },
    Bounds { d: u32, a: BigUint, ell: u32 },
    FdlFamily { d: u32, ell: u32, a_max: u64 },
    Growth { d: u32, a: Vec<BigUint>, xs: Vec<BigRational> },
    Primes { d: u32, a: BigUint, delta: BigRational, eps: BigRational },
    Enumerate { d: u32, a: BigUint, x: BigRational },
    Mkl { d: u32, a: BigUint, ell: u32, xs: Vec<BigRational> },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Field { .. } => "field",
            Task::Bounds { .. } => "bounds",
            Task::FdlFamily { .. } => "fdl-family",
            Task::Growth { .. } => "growth",
            Task::Primes { .. } => "primes",
            Task::Enumerate { .. } => "enumerate",
            Task::Mkl { .. } => "mkl",
        }
    }
}

fn config(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn radicand(s: &str) -> Result<BigUint, Failure> {
    let a = BigUint::from_str(s.trim()).map_err(|_| config(format!("--a: expected a positive integer, got {s:?}")))?;
    if a < BigUint::from(2u32) {
        return Err(config(format!("--a: radicand must be at least 2, got {a}")));
    }
    Ok(a)
}

fn positive(flag: &str, s: &str) -> Result<BigRational, Failure> {
    let x = parse_rational(s).map_err(|e| config(format!("{flag}: {e}")))?;
    if !x.is_positive() {
        return Err(config(format!("{flag}: must be positive, got {s}")));
    }
    Ok(x)
}

fn grid(flag: &str, items: &[String]) -> Result<Vec<BigRational>, Failure> {
    if items.is_empty() {
        return Err(config(format!("{flag}: at least one value is required")));
    }
    items.iter().map(|s| positive(flag, s)).collect()
}

fn degree(d: u32) -> Result<u32, Failure> {
    if d < 3 || d % 2 == 0 {
        return Err(config(format!("--d: degree must be odd and at least 3, got {d}")));
    }
    Ok(d)
}

fn ell(ell: u32) -> Result<u32, Failure> {
    if ell == 0 {
        return Err(config("--ell: must be at least 1"));
    }
    Ok(ell)
}

impl Cli {
    pub fn validate(self) -> Result<ExperimentConfig, Failure> {
        let c = self.common;
        if !(MIN_PREC_BITS..=MAX_PREC_BITS).contains(&c.prec_bits) {
            return Err(config(format!("--prec-bits: must lie in [{MIN_PREC_BITS}, {MAX_PREC_BITS}], got {}", c.prec_bits)));
        }
        let workers = match c.workers {
            Some(0) => return Err(config("--workers: must be at least 1")),
            Some(w) if w > MAX_WORKERS => return Err(config(format!("--workers: at most {MAX_WORKERS}"))),
            Some(w) => w,
            None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        };
        if c.limit == 0 {
            return Err(config("--limit: must be at least 1"));
        }
        let task = match self.command {
            Command::Field { d, a } => Task::Field { d: degree(d)?, a: radicand(&a)? },
            Command::Bounds { d, a, ell: l } => Task::Bounds { d: degree(d)?, a: radicand(&a)?, ell: ell(l)? },
            Command::FdlFamily { d, ell: l, a_max } => {
                let (d, l) = (degree(d)?, ell(l)?);
                if 2 * l < d {
                    return Err(config(format!("--ell: the family needs ell >= d/2, got ell = {l}, d = {d}")));
                }
                if a_max == 0 || a_max > 1_000_000 {
                    return Err(config(format!("--a-max: must lie in [1, 1000000], got {a_max}")));
                }
                Task::FdlFamily { d, ell: l, a_max }
            }
            Command::Growth { d, a, x } => {
                if a.is_empty() {
                    return Err(config("--a: at least one radicand is required"));
                }
                Task::Growth { d: degree(d)?, a: a.iter().map(|s| radicand(s)).collect::<Result<_, _>>()?, xs: grid("--X", &x)? }
            }
            Command::Primes { d, a, delta, eps } => {
                let delta = positive("--delta", &delta)?;
                let eps = parse_rational(&eps).map_err(|e| config(format!("--eps: {e}")))?;
                if !eps.is_positive() || eps >= delta {
                    return Err(config("--eps: must satisfy 0 < eps < delta"));
                }
                Task::Primes { d: degree(d)?, a: radicand(&a)?, delta, eps }
            }
            Command::Enumerate { d, a, x } => Task::Enumerate { d: degree(d)?, a: radicand(&a)?, x: positive("--X", &x)? },
            Command::Mkl { d, a, ell: l, x } => Task::Mkl { d: degree(d)?, a: radicand(&a)?, ell: ell(l)?, xs: grid("--X", &x)? },
        };
        let format = match (c.json, c.csv) {
            (true, _) => Format::Json,
            (_, true) => Format::Csv,
            _ => Format::Default,
        };
        if matches!(task, Task::Field { .. }) && format == Format::Csv {
            return Err(config("field: no CSV form, use --json"));
        }
        if let Some(p) = &c.out {
            if p.as_os_str().is_empty() {
                return Err(config("--out: empty path"));
            }
        }
        Ok(ExperimentConfig { task, prec_bits: c.prec_bits, workers, limit: c.limit, format, out: c.out })
    }
}
