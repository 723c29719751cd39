mod commands;
mod document;
mod manifold;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "tatefgl", version, about = "Exact formal group law calculus")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build a law and compute with it
    Fgl(commands::FglArgs),
    /// Lubin's quotient by a finite subgroup
    Quotient(commands::QuotientArgs),
    /// Renormalized product at a finite cutoff
    Theta(commands::ThetaArgs),
    /// Sigma expansion and its identities
    Sigma(commands::SigmaArgs),
    /// Tate extension group over a test ring
    Tate(commands::TateArgs),
    /// Equivariant Euler class of a weighted bundle
    Euler(commands::EulerArgs),
    /// Genera of Chern-root data
    Genus(commands::GenusArgs),
    /// Thom towers
    Tower(commands::TowerArgs),
}

/// Shared approximation axes.
#[derive(Args, Clone, Debug)]
pub struct Orders {
    /// degree in the root variables
    #[arg(long, default_value_t = 6)]
    trunc: u32,
    /// order in qhat (additive) or q (multiplicative)
    #[arg(long, default_value_t = 6)]
    qorder: i64,
    /// lowest exponent admitted in the series variable; chosen from the other orders when absent
    #[arg(long)]
    tail: Option<u32>,
    /// product cutoff
    #[arg(long = "N", default_value_t = 3)]
    n: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Command::Fgl(a) => commands::fgl(a),
        Command::Quotient(a) => commands::quotient(a),
        Command::Theta(a) => commands::theta(a),
        Command::Sigma(a) => commands::sigma(a),
        Command::Tate(a) => commands::tate(a),
        Command::Euler(a) => commands::euler(a),
        Command::Genus(a) => commands::genus(a),
        Command::Tower(a) => commands::tower(a),
    };
    match result {
        Ok(out) => {
            println!("{}", out.render(cli.format));
            if out.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(2)
        }
    }
}
