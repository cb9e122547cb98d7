//! Execution of the single-run subcommands.

use crate::args::{parse_init, CoinSpec, DesignArg, GatingArg, TopologyArg, WalkArgs};
use crate::output::{distribution_rows, padded_rows, render_csv, write_csv, Summary};
use crate::CliError;
use clap::Args;
use qwalk::analysis::{
    classical_rw_distribution, galton_predicted_moments, konno_predicted_moments,
    total_variation, MomentReport, ProbabilityDistribution,
};
use qwalk::optics::{run_cavity, CavityConfig, FieldState};
use qwalk::{CoinOperator, CoinState, WalkState, WalkTopology};
use std::path::PathBuf;

#[derive(Args, Debug)]
pub struct LineArgs {
    #[command(flatten)]
    pub walk: WalkArgs,

    /// Coin: hadamard | konno:aRe,aIm,bRe,bIm,dRe,dIm | delta:ANGLE.
    #[arg(long, default_value = "hadamard")]
    pub coin: CoinSpec,

    /// Also compute the classical-walk baseline and report the
    /// total-variation distance to it (origin must be 0).
    #[arg(long)]
    pub compare_classical: bool,
}

#[derive(Args, Debug)]
pub struct CircleArgs {
    #[command(flatten)]
    pub walk: WalkArgs,

    /// Coin: hadamard | konno:aRe,aIm,bRe,bIm,dRe,dIm | delta:ANGLE.
    #[arg(long, default_value = "hadamard")]
    pub coin: CoinSpec,

    /// Ring half-width: positions run over -M ..= M (2M+1 sites).
    #[arg(long = "M")]
    pub m_max: i64,
}

#[derive(Args, Debug)]
pub struct GaltonArgs {
    #[command(flatten)]
    pub walk: WalkArgs,

    /// Splitting angle of the balanced-drift coin.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,

    /// Also compute the classical-walk baseline and report the
    /// total-variation distance to it (origin must be 0).
    #[arg(long)]
    pub compare_classical: bool,
}

#[derive(Args, Debug)]
pub struct ClassicalArgs {
    /// Number of walk steps.
    #[arg(long)]
    pub steps: u64,

    /// Output CSV path (defaults to standard output).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CavityArgs {
    #[command(flatten)]
    pub walk: WalkArgs,

    /// Cavity construction to simulate.
    #[arg(long, value_enum)]
    pub design: DesignArg,

    /// Frequency-space topology of the cavity.
    #[arg(long, value_enum, default_value_t = TopologyArg::Line)]
    pub topology: TopologyArg,

    /// Ring half-width in walk units (required for the circle topology).
    #[arg(long = "M", required_if_eq("topology", "circle"))]
    pub m_max: Option<i64>,

    /// Fine shifts per walk step (the free-spectral-range subdivision).
    #[arg(long, default_value_t = 1)]
    pub f: u32,

    /// Coin gating schedule.
    #[arg(long, value_enum, default_value_t = GatingArg::EveryFRoundtrips)]
    pub gating: GatingArg,

    /// Replace the design's coin element with a splitting-angle element.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
}

/// Moments predicted by the closed-form asymptotics, when the coin admits
/// them; `None` silently when it does not (e.g. a degenerate mixing angle).
fn walk_prediction(coin: &CoinOperator, init: CoinState, steps: u64) -> Option<MomentReport> {
    konno_predicted_moments(coin, init, steps).ok()
}

fn classical_comparison(
    requested: bool,
    origin: i64,
    steps: u64,
    dist: &ProbabilityDistribution,
) -> Result<Option<f64>, CliError> {
    if !requested {
        return Ok(None);
    }
    if origin != 0 {
        return Err(CliError::Config(
            "--compare-classical requires --origin 0 (the classical baseline starts at 0)".into(),
        ));
    }
    Ok(Some(total_variation(dist, &classical_rw_distribution(steps))))
}

fn evolve_walk(
    topology: WalkTopology,
    args: &WalkArgs,
    coin: &CoinOperator,
) -> Result<(WalkState, CoinState), CliError> {
    let init = parse_init(&args.init)?;
    let state = WalkState::localized(topology, args.origin, init)?;
    Ok((state.evolve(coin, args.ordering.into(), args.steps), init))
}

pub fn line(args: &LineArgs) -> Result<(), CliError> {
    let coin = args.coin.operator()?;
    let (walk, init) = evolve_walk(WalkTopology::Line, &args.walk, &coin)?;
    let dist = walk.probabilities();
    let tv = classical_comparison(args.compare_classical, args.walk.origin, args.walk.steps, &dist)?;

    write_csv(args.walk.output.as_deref(), &render_csv(distribution_rows(&dist)))?;
    Summary {
        steps: args.walk.steps,
        sites: dist.len(),
        measured: dist.moments(),
        predicted: walk_prediction(&coin, init, args.walk.steps),
        tv_vs_classical: tv,
        extra: vec![],
    }
    .print();
    Ok(())
}

pub fn circle(args: &CircleArgs) -> Result<(), CliError> {
    let coin = args.coin.operator()?;
    let topology = WalkTopology::circle(args.m_max)?;
    let (walk, _) = evolve_walk(topology, &args.walk, &coin)?;
    let dist = walk.probabilities();

    write_csv(
        args.walk.output.as_deref(),
        &render_csv(padded_rows(&dist, -args.m_max, args.m_max)),
    )?;
    Summary {
        steps: args.walk.steps,
        sites: 2 * args.m_max as usize + 1,
        measured: dist.moments(),
        predicted: None,
        tv_vs_classical: None,
        extra: vec![],
    }
    .print();
    Ok(())
}

pub fn galton(args: &GaltonArgs) -> Result<(), CliError> {
    if !args.delta.is_finite() {
        return Err(CliError::Config("--delta must be finite".into()));
    }
    let coin = CoinOperator::galton(args.delta);
    let (walk, init) = evolve_walk(WalkTopology::Line, &args.walk, &coin)?;
    let dist = walk.probabilities();
    let tv = classical_comparison(args.compare_classical, args.walk.origin, args.walk.steps, &dist)?;

    write_csv(args.walk.output.as_deref(), &render_csv(distribution_rows(&dist)))?;
    Summary {
        steps: args.walk.steps,
        sites: dist.len(),
        measured: dist.moments(),
        predicted: galton_predicted_moments(args.delta, init, args.walk.steps).ok(),
        tv_vs_classical: tv,
        extra: vec![("delta".into(), format!("{:.12e}", args.delta))],
    }
    .print();
    Ok(())
}

pub fn classical(args: &ClassicalArgs) -> Result<(), CliError> {
    let dist = classical_rw_distribution(args.steps);
    write_csv(args.output.as_deref(), &render_csv(distribution_rows(&dist)))?;
    Summary {
        steps: args.steps,
        sites: dist.len(),
        measured: dist.moments(),
        predicted: None,
        tv_vs_classical: None,
        extra: vec![],
    }
    .print();
    Ok(())
}

pub fn cavity(args: &CavityArgs) -> Result<(), CliError> {
    let topology = match args.topology {
        TopologyArg::Line => WalkTopology::Line,
        TopologyArg::Circle => {
            WalkTopology::circle(args.m_max.expect("clap enforces --M for circle"))?
        }
    };
    let config = CavityConfig::new(
        args.design.into(),
        topology,
        args.f,
        args.gating.into(),
        args.delta,
    )?;
    let init = parse_init(&args.walk.init)?;
    let fine_origin = args.walk.origin * args.f as i64;
    let field = FieldState::single_frequency(config.design().required_cebit(), fine_origin, init);
    let final_field = run_cavity(&field, &config, args.walk.steps)?;
    let dist = final_field.spectrum();

    let csv = match args.topology {
        TopologyArg::Line => render_csv(distribution_rows(&dist)),
        TopologyArg::Circle => {
            let m = args.m_max.expect("clap enforces --M for circle");
            let f = args.f as i64;
            render_csv(padded_rows(&dist, -m * f, m * f + f - 1))
        }
    };
    write_csv(args.walk.output.as_deref(), &csv)?;
    Summary {
        steps: args.walk.steps,
        sites: dist.len(),
        measured: dist.moments(),
        predicted: None,
        tv_vs_classical: None,
        extra: vec![
            ("design".into(), config.design().name().into()),
            ("roundtrips".into(), final_field.roundtrip_count().to_string()),
            (
                "position_unit".into(),
                format!("fine grid, {} per walk step", args.f),
            ),
        ],
    }
    .print();
    Ok(())
}
