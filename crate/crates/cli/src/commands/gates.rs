use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use holo_core::gates::expectation;
use holo_core::holostate::format_complex;
use holo_core::{BargmannSpace, HoloPoly, Normalization};

use super::parse_gates;
use crate::output::{emit, json_or_file, Format, Table};

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(subcommand)]
    action: Action,
}

#[derive(clap::Subcommand, Debug)]
enum Action {
    /// Image and expectation of each gate on one state.
    Table {
        /// State as JSON (`{"dim":..,"max_degree":..,"terms":[..]}`) or a path to such a file.
        #[arg(long)]
        state: String,
        /// Comma-separated gate names, e.g. `X,Y,Z,H,Rx:0.5`.
        #[arg(long, default_value = "X,Y,Z,I,H")]
        gates: String,
        /// Gaussian width parameter of the space.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, value_enum, default_value = "normalized")]
        normalization: Norm,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum Norm {
    Paper,
    Normalized,
}

pub fn run(args: Args) -> Result<ExitCode> {
    let Action::Table {
        state,
        gates,
        t,
        normalization,
        format,
        out,
    } = args.action;
    let f: HoloPoly = serde_json::from_str(&json_or_file(&state)?).context("invalid state JSON")?;
    let space = BargmannSpace::new(f.dim(), t)?;
    let mode = match normalization {
        Norm::Paper => Normalization::Paper,
        Norm::Normalized => Normalization::Normalized,
    };
    let mut table = Table::new(vec!["gate", "image", "expectation"]);
    for g in parse_gates(&gates)? {
        let op = g.operator()?;
        let image = op.apply(&f).with_context(|| format!("gate {g}"))?;
        let e = expectation(&space, &op, &f, mode).with_context(|| format!("gate {g}"))?;
        table.push(vec![g.to_string(), image.to_string(), format_complex(e)]);
    }
    emit(out.as_deref(), &table.render(format)?)?;
    Ok(ExitCode::SUCCESS)
}
