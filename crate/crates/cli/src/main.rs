mod jobs;
mod suites;

use clap::{Parser, Subcommand, ValueEnum};
use cobar_core::Error;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "cobarkit", version, about = "Homology of simplicial sets, loop models and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Kan,
    Adams,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Homology of normalized chains in degrees 0..=dim.
    Homology {
        /// Standard space (point, delta<n>, boundary<n>, S<n>) or a JSON file.
        space: String,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Homology of a loop model of a single-vertex space in degrees 0..=deg.
    LoopHomology {
        space: String,
        #[arg(long, value_enum, default_value_t = Method::Adams)]
        method: Method,
        #[arg(long, default_value_t = 3)]
        deg: usize,
        /// Word-length bound for Kan chains and for cobar words with degree-0 letters.
        #[arg(long, default_value_t = 3)]
        fuel: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Runs an identity suite and reports PASS/FAIL per identity.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(suites::SUITES))]
        suite: String,
        size: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Verification(_) => 1,
        Error::Invalid(_) | Error::Dimension(_) => 2,
        Error::Truncation { .. } | Error::Fuel(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Homology { space, dim, format } => jobs::homology(&space, dim).map(|t| (t.render(format), true)),
        Command::LoopHomology { space, method, deg, fuel, format } => {
            jobs::loop_homology(&space, method, deg, fuel).map(|t| (t.render(format), true))
        }
        Command::Verify { suite, size, seed, format } => {
            let size = size.unwrap_or_else(|| jobs::default_size(&suite));
            suites::run(&suite, size, seed).map(|r| {
                let text = match format {
                    Format::Table => r.to_text(),
                    Format::Json => format!("{:#}\n", r.to_json()),
                };
                (text, r.passed())
            })
        }
    };
    match out {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
