use std::f64::consts::FRAC_1_SQRT_2;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zigzag_core::experiments::ctc::PairCoefficient;
use zigzag_core::experiments::GOLDEN_REFLECTIVITY;
use zigzag_core::sweep::{Range, SweepExperiment, Variable};
use zigzag_core::{InterfaceKind, Spinor2, UnitaryMatrix2, C64};

/// Temporal-interface scattering, cavity sweeps and zigzag-diagram experiments.
#[derive(Debug, Parser)]
#[command(name = "zigzag", version)]
pub struct Cli {
    /// Flat key=value file; entries act as flags placed before the command-line ones.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads for sweeps; all cores when omitted.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Directory for output files; defaults to $ZIGZAG_OUT_DIR.
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    /// Output file, relative to the output directory. Stdout when neither is set.
    #[arg(long, short = 'o', global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reflection and transmission at a single field step.
    Interface(InterfaceArgs),
    /// Coefficients of a rectangular field pulse.
    Cavity(CavityArgs),
    /// One-parameter sweep written as CSV.
    Sweep(SweepArgs),
    /// Peak reflectivity over momentum for a range of potentials, as CSV.
    Rmax(RmaxArgs),
    /// Two cavities in sequence.
    DoubleCavity(CavitySource),
    /// Retrocausal interferometer.
    Interferometer(InterferometerArgs),
    /// Retrocausal guessing game.
    Game(GameArgs),
    /// Guess-your-neighbour's-input gain.
    Gyni(GyniArgs),
    /// Quantum switch with fixed temporal order.
    Switch(SwitchArgs),
    /// Self-consistent loop through a cavity.
    Ctc(CtcArgs),
    /// Deutsch-type loop at unit reflectivity.
    Deutsch(DeutschArgs),
    /// Compare the smooth-profile ODE solution with the sharp model.
    Oracle(OracleArgs),
    /// Measured checks of the reference formulas.
    Ledger(LedgerArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Enter,
    EnterReversed,
    Exit,
    ExitReversed,
    All,
}

impl KindArg {
    pub fn kinds(self) -> Vec<InterfaceKind> {
        match self {
            KindArg::Enter => vec![InterfaceKind::ENTER],
            KindArg::EnterReversed => vec![InterfaceKind::ENTER_REVERSED],
            KindArg::Exit => vec![InterfaceKind::EXIT],
            KindArg::ExitReversed => vec![InterfaceKind::EXIT_REVERSED],
            KindArg::All => InterfaceKind::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Args)]
pub struct InterfaceArgs {
    /// Momentum |k|/m.
    #[arg(long)]
    pub k_over_m: f64,
    /// Potential step eA/m.
    #[arg(long)]
    pub ea_over_m: f64,
    #[arg(long, value_enum, default_value = "all")]
    pub kind: KindArg,
}

#[derive(Debug, Args)]
pub struct CavityArgs {
    #[arg(long)]
    pub k_over_m: f64,
    #[arg(long)]
    pub ea_over_m: f64,
    /// Pulse duration in units of 1/m.
    #[arg(long)]
    pub m_tau: f64,
    /// Smallest accepted |1 - r r e^{2i delta}|.
    #[arg(long, default_value_t = zigzag_core::cavity::RESONANCE_FLOOR)]
    pub floor: f64,
}

/// Either a bare reflectivity or the physical pulse that produces it.
#[derive(Debug, Args)]
pub struct CavitySource {
    /// Reflectivity R_tot, with coefficients in the canonical gauge.
    #[arg(long = "r")]
    pub r: Option<f64>,
    #[arg(long)]
    pub k_over_m: Option<f64>,
    #[arg(long)]
    pub ea_over_m: Option<f64>,
    #[arg(long)]
    pub m_tau: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_variable)]
    pub variable: Variable,
    /// start:stop:count
    #[arg(long, value_parser = parse_range)]
    pub range: Range,
    /// Fixed parameter as name=value; repeatable.
    #[arg(long = "fixed", value_parser = parse_fixed)]
    pub fixed: Vec<(Variable, f64)>,
    #[arg(long, value_parser = parse_experiment, default_value = "cavity")]
    pub experiment: SweepExperiment,
}

#[derive(Debug, Args)]
pub struct RmaxArgs {
    #[arg(long)]
    pub m_tau: f64,
    /// start:stop:count over eA/m.
    #[arg(long, value_parser = parse_range)]
    pub ea_over_m_range: Range,
    /// Half width of the momentum window around |k| = eA.
    #[arg(long, default_value_t = 2.0)]
    pub k_half_width: f64,
    #[arg(long, default_value_t = 1024)]
    pub k_count: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub min_k: f64,
}

#[derive(Debug, Args)]
pub struct InterferometerArgs {
    #[command(flatten)]
    pub cavity: CavitySource,
    /// Phase offset theta, including 2 arg r - arg t.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: f64,
}

#[derive(Debug, Args)]
pub struct GameArgs {
    #[arg(long = "r", default_value_t = GOLDEN_REFLECTIVITY)]
    pub r: f64,
    /// Monte Carlo trials; analytic only when omitted.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GyniArgs {
    #[arg(long = "r")]
    pub r: f64,
}

#[derive(Debug, Args)]
pub struct SwitchArgs {
    #[command(flatten)]
    pub cavity: CavitySource,
    /// Gate applied first: identity, x, y, z, h or rot:ax,ay,az,angle.
    #[arg(long, value_parser = parse_gate, default_value = "x")]
    pub ua: UnitaryMatrix2,
    #[arg(long, value_parser = parse_gate, default_value = "z")]
    pub ub: UnitaryMatrix2,
    /// Input spin: up, down, plus or minus.
    #[arg(long, value_parser = parse_spinor, default_value = "up")]
    pub psi0: Spinor2,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub xi: f64,
    #[arg(long, default_value_t = 1.0)]
    pub momentum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairArg {
    TSquared,
    RSquared,
}

impl From<PairArg> for PairCoefficient {
    fn from(p: PairArg) -> Self {
        match p {
            PairArg::TSquared => PairCoefficient::TransmissionSquared,
            PairArg::RSquared => PairCoefficient::ReflectionSquared,
        }
    }
}

#[derive(Debug, Args)]
pub struct CtcArgs {
    #[command(flatten)]
    pub cavity: CavitySource,
    #[arg(long, value_parser = parse_gate, default_value = "identity")]
    pub u: UnitaryMatrix2,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub xi: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, value_parser = parse_spinor, default_value = "up")]
    pub input: Spinor2,
    /// Coefficient used for the reported vacuum probability.
    #[arg(long, value_enum, default_value = "t-squared")]
    pub pair_coefficient: PairArg,
    #[arg(long, default_value_t = 1.0)]
    pub momentum: f64,
}

#[derive(Debug, Args)]
pub struct DeutschArgs {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long = "r", default_value_t = 1.0)]
    pub r: f64,
    /// Loop phase; the delay sets r^2 e^{i xi} = R e^{i phase}.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub phase: f64,
    /// Reject R != 1.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleTarget {
    Interface,
    Cavity,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    pub target: OracleTarget,
    #[arg(long)]
    pub k_over_m: f64,
    #[arg(long)]
    pub ea_over_m: f64,
    /// Pulse duration, cavity target only.
    #[arg(long)]
    pub m_tau: Option<f64>,
    /// Interface configuration, interface target only.
    #[arg(long, value_enum, default_value = "enter")]
    pub kind: KindArg,
    /// Largest smoothing width; 1e-2 for interfaces and 2e-3 for cavities by default.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
}

#[derive(Debug, Args)]
pub struct LedgerArgs {
    #[arg(long, default_value_t = 1.5)]
    pub m_tau: f64,
    #[arg(long, value_parser = parse_range, default_value = "1:60:600")]
    pub ea_over_m_range: Range,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

fn parse_variable(s: &str) -> Result<Variable, String> {
    s.parse().map_err(|e: zigzag_core::Error| e.to_string())
}

fn parse_experiment(s: &str) -> Result<SweepExperiment, String> {
    s.parse().map_err(|e: zigzag_core::Error| e.to_string())
}

fn parse_range(s: &str) -> Result<Range, String> {
    s.parse().map_err(|e: zigzag_core::Error| e.to_string())
}

fn parse_fixed(s: &str) -> Result<(Variable, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let value = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((parse_variable(k.trim())?, value))
}

pub fn parse_gate(s: &str) -> Result<UnitaryMatrix2, String> {
    match s {
        "identity" | "i" => Ok(UnitaryMatrix2::identity()),
        "x" => Ok(UnitaryMatrix2::pauli_x()),
        "y" => Ok(UnitaryMatrix2::pauli_y()),
        "z" => Ok(UnitaryMatrix2::pauli_z()),
        "h" => Ok(UnitaryMatrix2::hadamard()),
        _ => {
            let bad = || format!("unknown gate `{s}`; use identity, x, y, z, h or rot:ax,ay,az,angle");
            let body = s.strip_prefix("rot:").ok_or_else(bad)?;
            let v: Vec<f64> = body
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad())?;
            let [ax, ay, az, angle] = v.as_slice() else {
                return Err(bad());
            };
            UnitaryMatrix2::rotation([*ax, *ay, *az], *angle).map_err(|e| e.to_string())
        }
    }
}

pub fn parse_spinor(s: &str) -> Result<Spinor2, String> {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    match s {
        "up" => Ok(Spinor2::up()),
        "down" => Ok(Spinor2::down()),
        "plus" => Ok(Spinor2::new(h, h)),
        "minus" => Ok(Spinor2::new(h, -h)),
        _ => Err(format!("unknown spin state `{s}`; use up, down, plus or minus")),
    }
}
