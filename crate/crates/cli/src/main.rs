//! `mfq`: batch command line for mean-field quantum spin model computations.

mod commands;
mod mbconfig;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mfq_core::variational::{Couplings, TwoBlockParams};

#[derive(Parser, Debug)]
#[command(name = "mfq", version, about = "Free energies, critical temperatures and ground states of inhomogeneous mean-field quantum spin models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Thermodynamic-limit free energy of a two-block model
    FreeEnergy(StateArgs),
    /// Critical inverse temperature
    BetaCrit(CouplingArgs),
    /// All global maximizers of the variational functional
    Maximize(StateArgs),
    /// Ground-state region grid over (a, b), written as CSV
    PhaseDiagram(PhaseArgs),
    /// One-sided derivatives of the free energy in a field
    Magnetisation(FieldArgs),
    /// Limiting correlation ⟨exp((1/n) Σ W_i)⟩
    Correlation(FieldArgs),
    /// Compare the representation-theoretic partition function with dense diagonalization
    ExactCheck(FiniteArgs),
    /// Multi-block free energy from a config file
    MbFreeEnergy(MbArgs),
    /// Dense spectrum of a finite Hamiltonian
    Spectrum(FiniteArgs),
    /// Finite-size free energies against the thermodynamic limit, written as CSV
    ScalingStudy(ScalingArgs),
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct CouplingArgs {
    /// Local dimension (2S + 1)
    #[arg(long)]
    pub r: usize,
    /// Coupling inside block A
    #[arg(long)]
    pub a: f64,
    /// Coupling inside block B
    #[arg(long)]
    pub b: f64,
    /// Coupling between the blocks
    #[arg(long)]
    pub c: f64,
    /// Fraction of sites in block A
    #[arg(long)]
    pub rho: f64,
}

impl CouplingArgs {
    pub fn validate(&self) -> Result<Couplings> {
        check_r(self.r)?;
        check_finite(&[("a", self.a), ("b", self.b), ("c", self.c)])?;
        if !(self.rho > 0.0 && self.rho < 1.0) {
            bail!("--rho must lie strictly between 0 and 1, got {}", self.rho);
        }
        Ok(Couplings::new(self.a, self.b, self.c, self.rho, self.r)?)
    }
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct StateArgs {
    #[command(flatten)]
    pub couplings: CouplingArgs,
    /// Inverse temperature
    #[arg(long)]
    pub beta: f64,
}

impl StateArgs {
    pub fn validate(&self) -> Result<TwoBlockParams> {
        let cp = self.couplings.validate()?;
        check_beta(self.beta)?;
        Ok(cp.at(self.beta)?)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableKind {
    Ab,
    Wb,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct FieldArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Model whose observable is evaluated
    #[arg(long, value_enum, default_value = "ab")]
    pub kind: ObservableKind,
    /// Eigenvalues of the single-site matrix W, comma separated (r values)
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub w: Vec<f64>,
}

impl FieldArgs {
    pub fn validate(&self) -> Result<TwoBlockParams> {
        let p = self.state.validate()?;
        if self.w.len() != p.r {
            bail!("--w needs {} values (one per level), got {}", p.r, self.w.len());
        }
        check_finite(&self.w.iter().map(|&v| ("w", v)).collect::<Vec<_>>())?;
        Ok(p)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiniteKind {
    Ab,
    WbQ,
    WbP,
    /// Bilinear-biquadratic across the blocks (uses --j1, --j2)
    Bb,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct FiniteArgs {
    #[arg(long)]
    pub r: usize,
    /// Number of sites
    #[arg(long)]
    pub n: usize,
    /// Sites in block A
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum, default_value = "ab")]
    pub kind: FiniteKind,
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0)]
    pub b: f64,
    #[arg(long, default_value_t = 0.0)]
    pub c: f64,
    #[arg(long, default_value_t = 0.0)]
    pub j1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub j2: f64,
    /// Inverse temperature (exact-check only)
    #[arg(long)]
    pub beta: Option<f64>,
}

impl FiniteArgs {
    pub fn validate(&self, need_beta: bool) -> Result<()> {
        check_r(self.r)?;
        if self.n == 0 {
            bail!("--n must be at least 1");
        }
        if self.m > self.n {
            bail!("--m must not exceed --n ({} > {})", self.m, self.n);
        }
        check_finite(&[("a", self.a), ("b", self.b), ("c", self.c), ("j1", self.j1), ("j2", self.j2)])?;
        match (need_beta, self.beta) {
            (true, None) => bail!("--beta is required"),
            (_, Some(beta)) => check_beta(beta)?,
            _ => {}
        }
        let dim = (self.r as f64).powi(self.n as i32);
        if dim > mfq_core::oracle::MAX_DENSE_DIM as f64 {
            bail!("r^n = {dim} exceeds the dense limit {}; lower --n", mfq_core::oracle::MAX_DENSE_DIM);
        }
        Ok(())
    }
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct PhaseArgs {
    #[arg(long)]
    pub r: usize,
    /// Coupling between the blocks (sign selects the diagram)
    #[arg(long)]
    pub c: f64,
    #[arg(long)]
    pub rho: f64,
    #[arg(long, default_value_t = -4.0)]
    pub a_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub a_max: f64,
    #[arg(long, default_value_t = -4.0)]
    pub b_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub b_max: f64,
    /// Grid points per axis
    #[arg(long, default_value_t = 41)]
    pub resolution: usize,
    /// CSV destination (columns a,b,region,k,maxG); stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl PhaseArgs {
    pub fn validate(&self) -> Result<()> {
        check_r(self.r)?;
        check_finite(&[("c", self.c), ("a-min", self.a_min), ("a-max", self.a_max), ("b-min", self.b_min), ("b-max", self.b_max)])?;
        if self.c == 0.0 {
            bail!("--c must be nonzero; at c = 0 the blocks decouple into two homogeneous models");
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            bail!("--rho must lie strictly between 0 and 1, got {}", self.rho);
        }
        if self.a_min >= self.a_max || self.b_min >= self.b_max {
            bail!("ranges must satisfy min < max");
        }
        if !(2..=2000).contains(&self.resolution) {
            bail!("--resolution must be between 2 and 2000, got {}", self.resolution);
        }
        Ok(())
    }
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct MbArgs {
    /// key = value file describing the blocks and couplings
    #[arg(long)]
    pub config: PathBuf,
    /// Global couplings, e.g. "2:0.5,3:-0.1"; replaces `gamma` from the file
    #[arg(long)]
    pub gamma: Option<String>,
    /// Replaces `beta` from the file
    #[arg(long)]
    pub beta: Option<f64>,
    /// Also locate the transition of the commuting ansatz
    #[arg(long)]
    pub beta_crit: bool,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct ScalingArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// System sizes; block A gets round(rho * n) sites
    #[arg(long, value_delimiter = ',', default_value = "6,8,10,12")]
    pub n: Vec<usize>,
    /// CSV destination; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ScalingArgs {
    pub fn validate(&self) -> Result<TwoBlockParams> {
        let p = self.state.validate()?;
        if self.n.is_empty() || self.n.iter().any(|&n| n == 0) {
            bail!("--n needs positive sizes");
        }
        if let Some(&big) = self.n.iter().find(|&&n| n > mfq_core::repsum::MAX_REPSUM_N) {
            bail!("n = {big} exceeds the representation-sum limit {}", mfq_core::repsum::MAX_REPSUM_N);
        }
        Ok(p)
    }
}

fn check_r(r: usize) -> Result<()> {
    if r < 2 {
        bail!("--r must be at least 2, got {r}");
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        bail!("--beta must be positive and finite, got {beta}");
    }
    Ok(())
}

fn check_finite(values: &[(&str, f64)]) -> Result<()> {
    for (name, v) in values {
        if !v.is_finite() {
            bail!("--{name} must be finite");
        }
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    if let Ok(text) = std::env::var("MFQ_THREADS") {
        let threads: usize = match text.trim().parse() {
            Ok(k) if k > 0 => k,
            _ => bail!("MFQ_THREADS must be a positive integer, got `{text}`"),
        };
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::FreeEnergy(args) => commands::free_energy(&args),
        Command::BetaCrit(args) => commands::beta_crit(&args),
        Command::Maximize(args) => commands::maximize(&args),
        Command::PhaseDiagram(args) => commands::phase_diagram(&args),
        Command::Magnetisation(args) => commands::magnetisation(&args),
        Command::Correlation(args) => commands::correlation(&args),
        Command::ExactCheck(args) => commands::exact_check(&args),
        Command::MbFreeEnergy(args) => commands::mb_free_energy(&args),
        Command::Spectrum(args) => commands::spectrum(&args),
        Command::ScalingStudy(args) => commands::scaling_study(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
