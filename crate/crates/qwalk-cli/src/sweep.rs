//! Parameter sweeps: independent runs executed concurrently, plus an
//! aggregate CSV of measured and predicted spread per parameter value.

use crate::args::{parse_init, CoinSpec, OrderingArg};
use crate::output::{distribution_rows, render_csv, write_csv};
use crate::CliError;
use clap::{Args, ValueEnum};
use qwalk::analysis::{galton_predicted_moments, konno_predicted_moments, MomentReport};
use qwalk::{CoinOperator, CoinState, StepOrdering, WalkState, WalkTopology};
use rayon::prelude::*;
use std::path::PathBuf;

pub const AGGREGATE_HEADER: &str = "parameter,mean,std_dev,predicted_std_dev";

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SweepParam {
    /// Sweep the splitting angle of the balanced-drift coin.
    Delta,
    /// Sweep the number of walk steps.
    Steps,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Which parameter the listed values bind to.
    #[arg(long, value_enum)]
    pub param: SweepParam,

    /// Comma-separated parameter values (floats for delta, integers for
    /// steps). An empty list yields a header-only aggregate.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub values: String,

    /// Number of walk steps (fixed across a delta sweep).
    #[arg(long)]
    pub steps: Option<u64>,

    /// Coin used for a steps sweep: hadamard | konno:... | delta:ANGLE.
    #[arg(long, default_value = "hadamard")]
    pub coin: CoinSpec,

    /// Initial coin state as four floats: alphaRe alphaIm betaRe betaIm.
    /// Defaults to the phase-symmetric state (1/sqrt2, i/sqrt2).
    #[arg(long, num_args = 4, value_names = ["aRe", "aIm", "bRe", "bIm"], allow_negative_numbers = true)]
    pub init: Option<Vec<f64>>,

    /// Order of the coin mix and the conditional shift within one step.
    #[arg(long, value_enum, default_value_t = OrderingArg::CoinAfterShift)]
    pub ordering: OrderingArg,

    /// Aggregate CSV path (defaults to standard output).
    #[arg(long)]
    pub aggregate: Option<PathBuf>,

    /// Directory for the per-run distribution CSVs (omitted = not written).
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

struct RunOutcome {
    token: String,
    result: Result<(MomentReport, MomentReport, String), String>,
}

fn single_run(
    coin: &CoinOperator,
    init: CoinState,
    steps: u64,
    ordering: StepOrdering,
    predicted: Result<MomentReport, qwalk::Error>,
) -> Result<(MomentReport, MomentReport, String), String> {
    let predicted = predicted.map_err(|e| format!("no closed-form prediction: {e}"))?;
    let walk = WalkState::localized(WalkTopology::Line, 0, init)
        .map_err(|e| e.to_string())?
        .evolve(coin, ordering, steps);
    let dist = walk.probabilities();
    let csv = render_csv(distribution_rows(&dist));
    Ok((dist.moments(), predicted, csv))
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let tokens: Vec<String> = args
        .values
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect();
    let init = parse_init(&args.init)?;
    let ordering: StepOrdering = args.ordering.into();

    // Validate the fixed parts of the template before spawning runs.
    match args.param {
        SweepParam::Delta => {
            if args.steps.is_none() {
                return Err(CliError::Config(
                    "a delta sweep needs --steps for the fixed step count".into(),
                ));
            }
        }
        SweepParam::Steps => {
            args.coin.operator()?;
        }
    }
    if let Some(dir) = &args.output_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("creating {}: {e}", dir.display())))?;
    }

    let outcomes: Vec<RunOutcome> = tokens
        .par_iter()
        .map(|token| {
            let result = match args.param {
                SweepParam::Delta => token
                    .parse::<f64>()
                    .map_err(|_| format!("invalid delta value '{token}'"))
                    .and_then(|delta| {
                        if !delta.is_finite() {
                            return Err(format!("delta value '{token}' is not finite"));
                        }
                        let steps = args.steps.expect("checked above");
                        single_run(
                            &CoinOperator::galton(delta),
                            init,
                            steps,
                            ordering,
                            galton_predicted_moments(delta, init, steps),
                        )
                    }),
                SweepParam::Steps => token
                    .parse::<u64>()
                    .map_err(|_| format!("invalid step count '{token}'"))
                    .and_then(|steps| {
                        let coin = args.coin.operator().expect("validated above");
                        single_run(
                            &coin,
                            init,
                            steps,
                            ordering,
                            konno_predicted_moments(&coin, init, steps),
                        )
                    }),
            };
            RunOutcome { token: token.clone(), result }
        })
        .collect();

    let mut aggregate = String::from(AGGREGATE_HEADER);
    aggregate.push('\n');
    let mut failures = 0usize;
    for outcome in &outcomes {
        match &outcome.result {
            Ok((measured, predicted, csv)) => {
                aggregate.push_str(&format!(
                    "{},{:.16e},{:.16e},{:.16e}\n",
                    outcome.token, measured.mean, measured.std_dev, predicted.std_dev
                ));
                if let Some(dir) = &args.output_dir {
                    let name = format!("{}-{}.csv", param_name(args.param), outcome.token);
                    write_csv(Some(&dir.join(name)), csv)?;
                }
            }
            Err(message) => {
                failures += 1;
                eprintln!("sweep run '{}' failed: {message}", outcome.token);
            }
        }
    }
    write_csv(args.aggregate.as_deref(), &aggregate)?;

    if failures > 0 {
        return Err(CliError::Config(format!(
            "{failures} of {} sweep run(s) failed; successful runs were written",
            outcomes.len()
        )));
    }
    Ok(())
}

fn param_name(param: SweepParam) -> &'static str {
    match param {
        SweepParam::Delta => "delta",
        SweepParam::Steps => "steps",
    }
}
