//! Command-line front end: argument parsing, dispatch and output rendering.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use gauss_staudt::arith::decimal_digits;
use gauss_staudt::density::{
    density_m_bracket_with, density_nk, density_union_preview, default_workers, MBracket,
};
use gauss_staudt::em::em_search;
use gauss_staudt::gaussian::sigma_bruteforce;
use gauss_staudt::sets::m_witness;
use gauss_staudt::staudt::{sigma_closed, sigma_via_binomial_expansion};
use gauss_staudt::{decimal_render, sieve_inert_primes, Direction, ExactRational, GaussianResidue};

pub const TABLE_MAX: u64 = 500;
pub const VERIFY_MAX: u64 = 300;
pub const BRUTE_MAX: u64 = 5000;
pub const LEGEND: &str = "ϵ := (1 + i)";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] gauss_staudt::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(_) => 2,
            CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Expansion,
    Brute,
}

#[derive(Debug, Parser)]
#[command(name = "gauss-staudt", version, about = "Power sums of Gaussian integers modulo n")]
pub struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Digits after the decimal point for rounded output.
    #[arg(long, global = true, default_value_t = 30)]
    pub digits: u32,
    /// Worker threads for parallel enumerations (default: available cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// σ_k(n) mod n for one pair.
    Sigma {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
    },
    /// Grid of σ_k(n) mod n for 1 ≤ k ≤ kmax, 1 ≤ n ≤ nmax.
    Table {
        #[arg(long)]
        kmax: u64,
        #[arg(long)]
        nmax: u64,
    },
    /// Compare closed form, binomial expansion and brute force on a grid.
    Verify {
        #[arg(long)]
        kmax: u64,
        #[arg(long)]
        nmax: u64,
        /// Corrupt the closed form at one cell (negative control).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Asymptotic densities.
    #[command(subcommand)]
    Density(DensityTarget),
    /// Smallest inert prime p with p³ − p | n and p² ∤ n.
    Witness {
        #[arg(long)]
        n: u64,
    },
    /// Solutions of σ_k(m − 1) = (m + mi)^k with k < kmax, m < mmax.
    EmSearch {
        #[arg(long)]
        kmax: u64,
        #[arg(long)]
        mmax: u64,
    },
    /// The first primes ≡ 3 (mod 4).
    Primes {
        #[arg(long, default_value_t = 30)]
        count: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum DensityTarget {
    /// δ(N_k) for one exponent.
    Nk {
        #[arg(long)]
        k: u64,
    },
    /// Bracket for the density of {n : n | σ_n(n)}.
    M(MArgs),
}

#[derive(Debug, Args)]
pub struct MArgs {
    /// Number of inert primes in the exact union.
    #[arg(long, default_value_t = 20)]
    pub primes: usize,
    /// Largest prime summed exactly in the tail.
    #[arg(long, default_value_t = 1_299_689)]
    pub tail_limit: u64,
    /// Exact rational arithmetic (default).
    #[arg(long, conflicts_with = "preview")]
    pub exact: bool,
    /// Floating-point estimate of the union, without error tracking.
    #[arg(long)]
    pub preview: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaRecord {
    pub k: u64,
    pub n: u64,
    pub re: u64,
    pub im: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub n: u64,
    pub witness: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmRecord {
    pub k: u64,
    pub m: u64,
    pub lhs_re: String,
    pub lhs_im: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NkRecord {
    pub k: u64,
    pub density: String,
    pub lower: String,
    pub upper: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketRecord {
    pub primes_used: Vec<u64>,
    pub ell: String,
    pub tail: String,
    pub lower: String,
    pub upper: String,
    pub lower_decimal: String,
    pub upper_decimal: String,
    pub num_digits: usize,
    pub den_digits: usize,
}

impl BracketRecord {
    pub fn from_bracket(b: &MBracket, digits: u32) -> Self {
        Self {
            primes_used: b.primes_used.primes().to_vec(),
            ell: b.ell.to_string(),
            tail: b.tail.total.to_string(),
            lower: b.interval.lower.to_string(),
            upper: b.interval.upper.to_string(),
            lower_decimal: decimal_render(&b.interval.lower, digits, Direction::Down),
            upper_decimal: decimal_render(&b.interval.upper, digits, Direction::Up),
            num_digits: decimal_digits(b.ell.numer()),
            den_digits: decimal_digits(b.ell.denom()),
        }
    }
}

/// Table cell in the `mϵ` notation: `(n/2)(1+i)` becomes `{n/2}ϵ`.
pub fn cell_text(r: &GaussianResidue) -> String {
    match (r.re(), r.im()) {
        (re, 0) => re.to_string(),
        (re, im) if re == im => {
            if re == 1 {
                "ϵ".to_string()
            } else {
                format!("{re}ϵ")
            }
        }
        (re, im) => format!("{re}+{im}i"),
    }
}

/// CSV cell: `re+imi`, or a bare `0`.
pub fn cell_csv(r: &GaussianResidue) -> String {
    if r.is_zero() {
        "0".to_string()
    } else {
        format!("{}+{}i", r.re(), r.im())
    }
}

/// Parses a CSV cell back into `(re, im)`.
pub fn parse_cell_csv(cell: &str) -> Option<(u64, u64)> {
    if cell == "0" {
        return Some((0, 0));
    }
    let (re, im) = cell.strip_suffix('i')?.split_once('+')?;
    Some((re.parse().ok()?, im.parse().ok()?))
}

fn check_range(name: &str, value: u64, max: u64) -> CliResult<()> {
    if value == 0 || value > max {
        return Err(CliError::Usage(format!("--{name} must be in 1..={max}, got {value}")));
    }
    Ok(())
}

pub fn sigma_grid(kmax: u64, nmax: u64) -> CliResult<Vec<Vec<GaussianResidue>>> {
    check_range("kmax", kmax, TABLE_MAX)?;
    check_range("nmax", nmax, TABLE_MAX)?;
    let mut grid = Vec::with_capacity(kmax as usize);
    for k in 1..=kmax {
        grid.push((1..=nmax).map(|n| sigma_closed(k, n)).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(grid)
}

pub fn render_table(kmax: u64, nmax: u64, format: Format) -> CliResult<String> {
    let grid = sigma_grid(kmax, nmax)?;
    let mut out = String::new();
    match format {
        Format::Text => {
            out.push_str(LEGEND);
            out.push('\n');
            out.push_str("k\\n");
            for n in 1..=nmax {
                out.push_str(&format!("\t{n}"));
            }
            out.push('\n');
            for (k, row) in grid.iter().enumerate() {
                out.push_str(&(k + 1).to_string());
                for cell in row {
                    out.push('\t');
                    out.push_str(&cell_text(cell));
                }
                out.push('\n');
            }
        }
        Format::Csv => {
            let header: Vec<String> = (1..=nmax).map(|n| n.to_string()).collect();
            out.push_str(&format!("k,{}\n", header.join(",")));
            for (k, row) in grid.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(cell_csv).collect();
                out.push_str(&format!("{},{}\n", k + 1, cells.join(",")));
            }
        }
        Format::Json => {
            for (k, row) in grid.iter().enumerate() {
                for (n, cell) in row.iter().enumerate() {
                    let rec = SigmaRecord {
                        k: k as u64 + 1,
                        n: n as u64 + 1,
                        re: cell.re(),
                        im: cell.im(),
                    };
                    out.push_str(&serde_json::to_string(&rec)?);
                    out.push('\n');
                }
            }
        }
    }
    Ok(out)
}

/// Outcome of a verification sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyOutcome {
    Agree { cells: u64 },
    Mismatch { k: u64, n: u64, closed: GaussianResidue, expansion: GaussianResidue, brute: GaussianResidue },
}

pub fn verify_grid(kmax: u64, nmax: u64, inject_fault: bool) -> CliResult<VerifyOutcome> {
    check_range("kmax", kmax, VERIFY_MAX)?;
    check_range("nmax", nmax, VERIFY_MAX)?;
    for k in 1..=kmax {
        for n in 1..=nmax {
            let mut closed = sigma_closed(k, n)?;
            if inject_fault && k == kmax && n == nmax {
                // modulus 1 has a single residue, so move to modulus 2 there
                closed = GaussianResidue::new(closed.re() as i128 + 1, closed.im() as i128, n.max(2));
            }
            let expansion = sigma_via_binomial_expansion(k, n)?;
            let brute = sigma_bruteforce(k, n)?;
            if closed != brute || expansion != brute {
                return Ok(VerifyOutcome::Mismatch { k, n, closed, expansion, brute });
            }
        }
    }
    Ok(VerifyOutcome::Agree { cells: kmax * nmax })
}

fn json_line<T: Serialize>(out: &mut dyn Write, rec: &T) -> CliResult<()> {
    writeln!(out, "{}", serde_json::to_string(rec)?)?;
    Ok(())
}

fn fraction_decimals(q: &ExactRational, digits: u32) -> (String, String) {
    (decimal_render(q, digits, Direction::Down), decimal_render(q, digits, Direction::Up))
}

/// Runs one parsed command, writing to `out`. Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<u8> {
    let workers = cli.workers.unwrap_or_else(default_workers).max(1);
    match &cli.command {
        Command::Sigma { k, n, method } => {
            if *k == 0 || *n == 0 {
                return Err(CliError::Usage("--k and --n must be at least 1".into()));
            }
            let r = match method {
                Method::Closed => sigma_closed(*k, *n)?,
                Method::Expansion => sigma_via_binomial_expansion(*k, *n)?,
                Method::Brute => {
                    if *n > BRUTE_MAX {
                        return Err(CliError::Usage(format!("brute force needs n ≤ {BRUTE_MAX}")));
                    }
                    sigma_bruteforce(*k, *n)?
                }
            };
            match cli.format.unwrap_or(Format::Text) {
                Format::Text => writeln!(out, "{r}")?,
                Format::Csv => writeln!(out, "k,n,value\n{k},{n},{}", cell_csv(&r))?,
                Format::Json => json_line(out, &SigmaRecord { k: *k, n: *n, re: r.re(), im: r.im() })?,
            }
        }
        Command::Table { kmax, nmax } => {
            write!(out, "{}", render_table(*kmax, *nmax, cli.format.unwrap_or(Format::Text))?)?;
        }
        Command::Verify { kmax, nmax, inject_fault } => match verify_grid(*kmax, *nmax, *inject_fault)? {
            VerifyOutcome::Agree { cells } => writeln!(out, "ok: {cells} cells agree")?,
            VerifyOutcome::Mismatch { k, n, closed, expansion, brute } => {
                writeln!(
                    out,
                    "mismatch at k={k} n={n}: closed {closed}, expansion {expansion}, brute force {brute}"
                )?;
                return Ok(1);
            }
        },
        Command::Density(DensityTarget::Nk { k }) => {
            let d = density_nk(*k)?;
            let (lower, upper) = fraction_decimals(&d, cli.digits);
            match cli.format.unwrap_or(Format::Text) {
                Format::Json => json_line(out, &NkRecord { k: *k, density: d.to_string(), lower, upper })?,
                Format::Csv => writeln!(out, "k,density,lower,upper\n{k},{d},{lower},{upper}")?,
                Format::Text => writeln!(out, "{d}\n{lower} ≤ δ ≤ {upper}")?,
            }
        }
        Command::Density(DensityTarget::M(args)) => {
            if args.preview {
                let family = sieve_inert_primes(args.primes);
                let ell = density_union_preview(&family, workers)?;
                writeln!(out, "preview (floating point, no error bound)")?;
                writeln!(out, "preview ell ≈ {ell:.17e}")?;
                writeln!(out, "preview 1 - ell ≈ {:.17}", 1.0 - ell)?;
                return Ok(0);
            }
            let b = density_m_bracket_with(args.primes, args.tail_limit, workers)?;
            let rec = BracketRecord::from_bracket(&b, cli.digits);
            match cli.format.unwrap_or(Format::Text) {
                Format::Json => json_line(out, &rec)?,
                Format::Csv => writeln!(
                    out,
                    "primes,num_digits,den_digits,lower,upper\n{},{},{},{},{}",
                    rec.primes_used.len(),
                    rec.num_digits,
                    rec.den_digits,
                    rec.lower_decimal,
                    rec.upper_decimal
                )?,
                Format::Text => {
                    let largest = rec.primes_used.last().copied().unwrap_or(0);
                    writeln!(out, "primes: {} (up to {largest})", rec.primes_used.len())?;
                    writeln!(out, "ell = {}", rec.ell)?;
                    writeln!(out, "ell digits: numerator {}, denominator {}", rec.num_digits, rec.den_digits)?;
                    writeln!(out, "ell ≈ {}", decimal_render(&b.ell, cli.digits, Direction::Down))?;
                    writeln!(
                        out,
                        "tail ≤ {} (primes {} to {})",
                        decimal_render(&b.tail.total, cli.digits, Direction::Up),
                        largest,
                        args.tail_limit
                    )?;
                    writeln!(out, "lower = {}", rec.lower_decimal)?;
                    writeln!(out, "upper = {}", rec.upper_decimal)?;
                    writeln!(out, "upper exact = {}", rec.upper)?;
                }
            }
        }
        Command::Witness { n } => {
            let r = m_witness(*n)?;
            let rec = WitnessRecord { n: r.n, witness: r.witness };
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => json_line(out, &rec)?,
                Format::Csv => writeln!(out, "n,witness\n{},{}", rec.n, rec.witness.map_or(String::new(), |p| p.to_string()))?,
                Format::Text => match rec.witness {
                    Some(p) => writeln!(out, "{}: witness {p}", rec.n)?,
                    None => writeln!(out, "{}: no witness", rec.n)?,
                },
            }
        }
        Command::EmSearch { kmax, mmax } => {
            let found = em_search(*kmax, *mmax)?;
            let format = cli.format.unwrap_or(Format::Json);
            if format == Format::Csv {
                writeln!(out, "k,m,lhs_re,lhs_im")?;
            }
            for s in found {
                let rec = EmRecord {
                    k: s.k,
                    m: s.m,
                    lhs_re: s.value.re.to_string(),
                    lhs_im: s.value.im.to_string(),
                };
                match format {
                    Format::Json => json_line(out, &rec)?,
                    Format::Csv => writeln!(out, "{},{},{},{}", rec.k, rec.m, rec.lhs_re, rec.lhs_im)?,
                    Format::Text => writeln!(out, "k={} m={} value={}", rec.k, rec.m, s.value)?,
                }
            }
        }
        Command::Primes { count } => {
            let family = sieve_inert_primes(*count);
            match cli.format.unwrap_or(Format::Text) {
                Format::Json => json_line(out, &family.primes())?,
                _ => {
                    let list: Vec<String> = family.primes().iter().map(u64::to_string).collect();
                    writeln!(out, "{}", list.join(if cli.format == Some(Format::Csv) { "," } else { " " }))?;
                }
            }
        }
    }
    Ok(0)
}
