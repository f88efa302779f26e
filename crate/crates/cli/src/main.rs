//! `holo`: gate tables, oracle checks, information measures, simulations and
//! the pattern pipeline from the command line.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{bargmann, gates, info, systems, upl};

#[derive(Parser, Debug)]
#[command(name = "holo", version, about = "Holomorphic logic gates in Segal-Bargmann space")]
struct Cli {
    /// Print progress details on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply standard gates to a state.
    Gates(gates::Args),
    /// Exact inner products against the quadrature oracle.
    Bargmann(bargmann::Args),
    /// Entropy change of a channel ensemble under a gate.
    Info(info::Args),
    /// Coupled pendulum frequencies and gate table.
    Pendulum(systems::PendulumArgs),
    /// FitzHugh-Nagumo reaction-diffusion run.
    Fhn(systems::FhnArgs),
    /// Memristive system trajectory.
    Memristor(systems::MemristorArgs),
    /// Gate-fed perceptron.
    Neuron(systems::NeuronArgs),
    /// Pattern pipeline and layer scheduler.
    Upl(upl::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gates(a) => gates::run(a),
        Command::Bargmann(a) => bargmann::run(a),
        Command::Info(a) => info::run(a),
        Command::Pendulum(a) => systems::pendulum(a),
        Command::Fhn(a) => systems::fhn(a, cli.verbose),
        Command::Memristor(a) => systems::memristor(a),
        Command::Neuron(a) => systems::neuron(a),
        Command::Upl(a) => upl::run(a, cli.verbose),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::from(1)
        }
    }
}
