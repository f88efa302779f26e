use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use holo_core::holostate::{format_complex, format_f64};
use holo_core::systems::{
    pendulum_gate_table, perceptron_train_features, simulate_fhn, simulate_memristive, Activation, NeuronParams,
    PendulumParams, RdConfig,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::output::{emit, json, read, Format, Table};

#[derive(clap::Args, Debug)]
pub struct PendulumArgs {
    /// Natural frequency √(g/ℓ).
    #[arg(long)]
    omega0: f64,
    /// Spring coupling s/M.
    #[arg(long, default_value_t = 0.0)]
    coupling: f64,
    /// Also emit the gate table on the state αβ z1 z2.
    #[arg(long)]
    table: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn pendulum(a: PendulumArgs) -> Result<ExitCode> {
    let p = PendulumParams::new(a.omega0, a.coupling)?;
    let table = if a.table {
        let mut t = Table::new(vec!["gate", "image", "expectation"]);
        for row in pendulum_gate_table(&p)? {
            t.push(vec![row.gate.to_string(), row.image.to_string(), format_complex(row.expectation)]);
        }
        Some(t)
    } else {
        None
    };
    let text = match (a.format, table) {
        (Format::Csv, None) => {
            let mut t = Table::new(vec!["omega0", "omega"]);
            t.push(vec![format_f64(p.omega0()), format_f64(p.omega())]);
            t.to_csv()?
        }
        (Format::Csv, Some(t)) => t.to_csv()?,
        (Format::Json, t) => {
            #[derive(Serialize)]
            struct Out {
                omega0: f64,
                omega: f64,
                #[serde(skip_serializing_if = "Option::is_none")]
                table: Option<serde_json::Value>,
            }
            let table = match t {
                Some(t) => Some(serde_json::from_str(&t.to_json()?)?),
                None => None,
            };
            json(&Out {
                omega0: p.omega0(),
                omega: p.omega(),
                table,
            })?
        }
    };
    emit(a.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(clap::Args, Debug)]
pub struct FhnArgs {
    /// Key-value file with `n dx da db alpha beta dt steps`.
    #[arg(long)]
    config: PathBuf,
    /// Initial value of `a` in every cell.
    #[arg(long, default_value_t = 0.0)]
    a0: f64,
    /// Initial value of `b` in every cell.
    #[arg(long, default_value_t = 0.0)]
    b0: f64,
    /// Uniform random perturbation of `a` in `[-amp, amp]`.
    #[arg(long, default_value_t = 0.0)]
    perturb: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn fhn(a: FhnArgs, verbose: u8) -> Result<ExitCode> {
    let cfg: RdConfig = read(&a.config)?
        .parse()
        .with_context(|| format!("bad config {}", a.config.display()))?;
    let mut rng = StdRng::seed_from_u64(a.seed);
    let a0: Vec<f64> = (0..cfg.n())
        .map(|_| {
            if a.perturb > 0.0 {
                a.a0 + rng.gen_range(-a.perturb..=a.perturb)
            } else {
                a.a0
            }
        })
        .collect();
    let b0 = vec![a.b0; cfg.n()];
    if verbose > 0 {
        eprintln!("fhn: {} cells, {} steps of {}", cfg.n(), cfg.steps(), cfg.dt());
    }
    let fields = simulate_fhn(&cfg, &a0, &b0)?;
    let mut t = Table::new(vec!["cell_index", "a", "b"]);
    for (i, (x, y)) in fields.a.iter().zip(&fields.b).enumerate() {
        t.push(vec![i.to_string(), format_f64(*x), format_f64(*y)]);
    }
    emit(a.out.as_deref(), &t.render(a.format)?)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(clap::Args, Debug)]
pub struct MemristorArgs {
    #[arg(long)]
    steps: usize,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    /// Initial memory state.
    #[arg(long, default_value_t = 1.0)]
    x0: f64,
    /// Leak rate λ in `ẋ = u − λx`.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Constant input `u`.
    #[arg(long, default_value_t = 0.0)]
    input: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// `ẋ = u − λx` with readout `y = u / (1 + x²)`.
pub fn memristor(a: MemristorArgs) -> Result<ExitCode> {
    let lambda = a.lambda;
    let u = vec![a.input; a.steps + 1];
    let traj = simulate_memristive(
        |x, u, _| u - lambda * x,
        |x, _, _| 1.0 / (1.0 + x * x),
        a.x0,
        &u,
        a.dt,
        a.steps,
    )?;
    let mut t = Table::new(vec!["step", "t", "S", "Q", "R"]);
    for s in &traj {
        t.push(vec![
            s.step.to_string(),
            format_f64(s.t),
            format_f64(s.stimulus()),
            format_f64(s.memory()),
            format_f64(s.response()),
        ]);
    }
    emit(a.out.as_deref(), &t.render(a.format)?)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(clap::Args, Debug)]
pub struct NeuronArgs {
    #[command(subcommand)]
    action: NeuronAction,
}

#[derive(clap::Subcommand, Debug)]
enum NeuronAction {
    /// Perceptron training on rows `x1,..,xk,target` (targets 0 or 1).
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 50)]
        epochs: usize,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn neuron(a: NeuronArgs) -> Result<ExitCode> {
    let NeuronAction::Train {
        data,
        epochs,
        eta,
        format,
        out,
    } = a.action;
    let text = read(&data)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut samples = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let nums: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        let Ok(mut nums) = nums else {
            if i == 0 {
                continue; // header
            }
            bail!("{}: row {} is not numeric", data.display(), i + 1);
        };
        if nums.len() < 2 {
            bail!("{}: row {} needs at least one input and a target", data.display(), i + 1);
        }
        let target = nums.pop().expect("non-empty");
        samples.push((nums, target));
    }
    let Some(width) = samples.first().map(|(x, _)| x.len()) else {
        bail!("{}: no samples", data.display());
    };
    if let Some(i) = samples.iter().position(|(x, _)| x.len() != width) {
        bail!("{}: sample {} has {} inputs, expected {width}", data.display(), i + 1, samples[i].0.len());
    }
    let init = NeuronParams::new(vec![0.0; width], 0.0, Activation::Step)?;
    let report = perceptron_train_features(&init, &samples, epochs, eta)?;
    let text = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                weights: &'a [f64],
                bias: f64,
                errors_per_epoch: &'a [usize],
            }
            json(&Out {
                weights: report.params.weights(),
                bias: report.params.bias(),
                errors_per_epoch: &report.errors_per_epoch,
            })?
        }
        Format::Csv => {
            let mut t = Table::new(vec!["epoch", "errors"]);
            for (e, n) in report.errors_per_epoch.iter().enumerate() {
                t.push(vec![(e + 1).to_string(), n.to_string()]);
            }
            t.to_csv()?
        }
    };
    emit(out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}
