use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use holo_core::holostate::format_complex;
use holo_core::upl::{run_upl, ScheduleSpec, UplProgramSpec};
use holo_core::{Classification, Schedule, UplProgram};

use crate::output::{emit, json, read, Format, Table};

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(subcommand)]
    action: Action,
}

#[derive(clap::Subcommand, Debug)]
enum Action {
    /// Run one program and write its pattern catalog.
    Run {
        /// JSON `{space:{dim,t}, subsystems:[..], gates:[..], iterations}`.
        #[arg(long)]
        program: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a time-ordered stack of layers and write the execution trace.
    Layers {
        /// JSON `{layers:[{time_scale, program, consume_inbox}]}`.
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

pub fn run(args: Args, verbose: u8) -> Result<ExitCode> {
    match args.action {
        Action::Run { program, format, out } => {
            let spec: UplProgramSpec = serde_json::from_str(&read(&program)?)
                .with_context(|| format!("invalid program {}", program.display()))?;
            let catalog = run_upl(&UplProgram::try_from(spec)?)?;
            if verbose > 0 {
                eprintln!("upl: {} patterns", catalog.len());
            }
            let text = match format {
                Format::Json => json(&catalog)?,
                Format::Csv => {
                    let mut t = Table::new(vec!["gate", "input", "output", "expectation", "classification"]);
                    for r in &catalog {
                        t.push(vec![
                            r.gate.clone(),
                            r.input.to_string(),
                            r.output.to_string(),
                            format_complex(r.expectation),
                            match r.classification {
                                Classification::Classical => "classical".into(),
                                Classification::Quantum => "quantum".into(),
                            },
                        ]);
                    }
                    t.to_csv()?
                }
            };
            emit(out.as_deref(), &text)?;
        }
        Action::Layers {
            schedule,
            format,
            trace,
        } => {
            let spec: ScheduleSpec = serde_json::from_str(&read(&schedule)?)
                .with_context(|| format!("invalid schedule {}", schedule.display()))?;
            let run = Schedule::try_from(spec)?.run()?;
            let text = match format {
                Format::Json => json(&run.trace)?,
                Format::Csv => {
                    let mut t = Table::new(vec![
                        "index",
                        "time_scale",
                        "start_tick",
                        "end_tick",
                        "catalog_size",
                        "inbox_size",
                    ]);
                    for e in &run.trace {
                        t.push(vec![
                            e.index.to_string(),
                            holo_core::holostate::format_f64(e.time_scale),
                            e.start_tick.to_string(),
                            e.end_tick.to_string(),
                            e.catalog_size.to_string(),
                            e.inbox_size.to_string(),
                        ]);
                    }
                    t.to_csv()?
                }
            };
            emit(trace.as_deref(), &text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
