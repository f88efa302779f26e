use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use holo_core::holostate::format_f64;
use holo_core::infotheory::entropy_change;
use holo_core::{BargmannSpace, ChannelEnsemble, GateName, HoloPoly};
use serde::{Deserialize, Serialize};

use crate::output::{emit, json, json_or_file, Format, Table};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Ensemble as JSON `{"space":{"dim","t"},"components":[state,..]}` or a path to one.
    #[arg(long)]
    ensemble: String,
    /// Gate applied to every component.
    #[arg(long)]
    gate: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Deserialize)]
struct EnsembleSpec {
    space: Space,
    components: Vec<HoloPoly>,
}

#[derive(Deserialize)]
struct Space {
    dim: usize,
    t: f64,
}

#[derive(Serialize)]
struct Report {
    #[serde(rename = "S_in")]
    s_in: f64,
    #[serde(rename = "S_out")]
    s_out: f64,
    #[serde(rename = "delta_S")]
    delta_s: f64,
}

pub fn run(args: Args) -> Result<ExitCode> {
    let spec: EnsembleSpec = serde_json::from_str(&json_or_file(&args.ensemble)?).context("invalid ensemble JSON")?;
    let ens = ChannelEnsemble::new(BargmannSpace::new(spec.space.dim, spec.space.t)?, spec.components)?;
    let gate: GateName = args.gate.parse().map_err(|e| anyhow!("{e}"))?;
    let change = entropy_change(&ens, &gate.operator()?)?;
    let text = match args.format {
        Format::Json => json(&Report {
            s_in: change.s_in,
            s_out: change.s_out,
            delta_s: change.delta,
        })?,
        Format::Csv => {
            let mut t = Table::new(vec!["S_in", "S_out", "delta_S"]);
            t.push(vec![format_f64(change.s_in), format_f64(change.s_out), format_f64(change.delta)]);
            t.to_csv()?
        }
    };
    emit(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}
