//! Argument types shared by the subcommands.

use crate::CliError;
use clap::{Args, ValueEnum};
use qwalk::optics::{CavityDesign, CoinGating};
use qwalk::{C64, CoinOperator, CoinState, StepOrdering};
use std::path::PathBuf;
use std::str::FromStr;

/// Coin specification accepted on the command line:
/// `hadamard`, `konno:aRe,aIm,bRe,bIm,dRe,dIm`, or `delta:ANGLE`.
#[derive(Clone, Copy, Debug)]
pub enum CoinSpec {
    Hadamard,
    Konno { a: C64, b: C64, det: C64 },
    Delta(f64),
}

impl CoinSpec {
    pub fn operator(&self) -> Result<CoinOperator, CliError> {
        match *self {
            CoinSpec::Hadamard => Ok(CoinOperator::hadamard()),
            CoinSpec::Konno { a, b, det } => Ok(CoinOperator::konno(a, b, det)?),
            CoinSpec::Delta(delta) => {
                if !delta.is_finite() {
                    return Err(CliError::Config("coin angle must be finite".into()));
                }
                Ok(CoinOperator::galton(delta))
            }
        }
    }
}

impl FromStr for CoinSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("hadamard") {
            return Ok(CoinSpec::Hadamard);
        }
        if let Some(rest) = s.strip_prefix("delta:") {
            let delta: f64 = rest
                .trim()
                .parse()
                .map_err(|_| format!("invalid coin angle '{rest}' (expected a float)"))?;
            return Ok(CoinSpec::Delta(delta));
        }
        if let Some(rest) = s.strip_prefix("konno:") {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            if parts.len() != 6 {
                return Err(format!(
                    "expected 6 comma-separated floats after 'konno:' (aRe,aIm,bRe,bIm,dRe,dIm), got {}",
                    parts.len()
                ));
            }
            let mut v = [0.0f64; 6];
            for (slot, part) in v.iter_mut().zip(&parts) {
                *slot = part
                    .parse()
                    .map_err(|_| format!("invalid float '{part}' in coin specification"))?;
            }
            return Ok(CoinSpec::Konno {
                a: C64::new(v[0], v[1]),
                b: C64::new(v[2], v[3]),
                det: C64::new(v[4], v[5]),
            });
        }
        Err(format!(
            "unknown coin '{s}' (expected 'hadamard', 'konno:aRe,aIm,bRe,bIm,dRe,dIm', or 'delta:ANGLE')"
        ))
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OrderingArg {
    /// Shift, then mix the coin (the default convention).
    CoinAfterShift,
    /// Mix the coin, then shift.
    ShiftAfterCoin,
}

impl From<OrderingArg> for StepOrdering {
    fn from(value: OrderingArg) -> Self {
        match value {
            OrderingArg::CoinAfterShift => StepOrdering::CoinAfterShift,
            OrderingArg::ShiftAfterCoin => StepOrdering::ShiftAfterCoin,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DesignArg {
    RingPolarization,
    LinearPolarization,
    DualRingPath,
    BidirectionalHybrid,
}

impl From<DesignArg> for CavityDesign {
    fn from(value: DesignArg) -> Self {
        match value {
            DesignArg::RingPolarization => CavityDesign::RingPolarization,
            DesignArg::LinearPolarization => CavityDesign::LinearPolarization,
            DesignArg::DualRingPath => CavityDesign::DualRingPath,
            DesignArg::BidirectionalHybrid => CavityDesign::BidirectionalHybrid,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GatingArg {
    /// Apply the coin once per walk step (every f roundtrips).
    EveryFRoundtrips,
    /// Apply the coin every roundtrip (the biased-splitting schedule).
    EveryRoundtrip,
}

impl From<GatingArg> for CoinGating {
    fn from(value: GatingArg) -> Self {
        match value {
            GatingArg::EveryFRoundtrips => CoinGating::EveryFRoundtrips,
            GatingArg::EveryRoundtrip => CoinGating::EveryRoundtrip,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TopologyArg {
    Line,
    Circle,
}

/// Flags shared by every walk-producing subcommand.
#[derive(Args, Debug)]
pub struct WalkArgs {
    /// Number of walk steps.
    #[arg(long)]
    pub steps: u64,

    /// Initial coin state as four floats: alphaRe alphaIm betaRe betaIm.
    /// Defaults to the phase-symmetric state (1/sqrt2, i/sqrt2).
    #[arg(long, num_args = 4, value_names = ["aRe", "aIm", "bRe", "bIm"], allow_negative_numbers = true)]
    pub init: Option<Vec<f64>>,

    /// Walker start position.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub origin: i64,

    /// Order of the coin mix and the conditional shift within one step.
    #[arg(long, value_enum, default_value_t = OrderingArg::CoinAfterShift)]
    pub ordering: OrderingArg,

    /// Output CSV path (defaults to standard output).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn parse_init(init: &Option<Vec<f64>>) -> Result<CoinState, CliError> {
    match init {
        None => Ok(CoinState::symmetric()),
        Some(v) => {
            debug_assert_eq!(v.len(), 4, "clap enforces num_args = 4");
            Ok(CoinState::new(C64::new(v[0], v[1]), C64::new(v[2], v[3]))?)
        }
    }
}
