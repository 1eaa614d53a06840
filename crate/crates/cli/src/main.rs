use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use charnum::{ExponentTuple, PotentialKind, Target};
use clap::{Args, Parser, Subcommand};

mod cache;
mod commands;

use commands::{Format, QuerySpec, TableSpec};

/// Exact characteristic numbers of rational curves in the projective plane
/// (p2) and on the quadric surface (p1xp1).
#[derive(Parser, Debug)]
#[command(name = "charnum", version, about)]
struct Cli {
    /// Directory holding cached potentials
    #[arg(long, global = true, default_value = "./.charnum-cache")]
    cache_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build potentials up to a degree cap and cache them
    Compute {
        #[arg(long, value_parser = parse_target)]
        target: Target,
        #[arg(long)]
        cap: u32,
        /// Comma-separated kinds, e.g. G,K,KL (default: all for the target)
        #[arg(long, value_delimiter = ',', value_parser = parse_kind)]
        kinds: Option<Vec<PotentialKind>>,
        /// Degree of the fixed curve for the plane F
        #[arg(long)]
        z: Option<u32>,
    },
    /// Print one characteristic number
    Query {
        #[command(flatten)]
        select: Select,
        #[arg(long, default_value_t = 0)]
        a: u32,
        #[arg(long, default_value_t = 0)]
        b: u32,
        #[arg(long, default_value_t = 0)]
        c: u32,
    },
    /// Print all numbers of one kind and class
    Table {
        #[command(flatten)]
        select: Select,
        /// Only rows with this many incidence conditions
        #[arg(long)]
        a: Option<u32>,
        /// Only rows with this many tangency conditions
        #[arg(long)]
        b: Option<u32>,
        /// Only rows with this many flag conditions
        #[arg(long)]
        c: Option<u32>,
    },
    /// Run the consistency checks; exits nonzero if any fails
    Verify {
        #[arg(long, value_parser = parse_target)]
        target: Target,
        #[arg(long)]
        cap: u32,
    },
}

#[derive(Args, Debug)]
struct Select {
    #[arg(long, value_parser = parse_target)]
    target: Target,
    #[arg(long, value_parser = parse_kind)]
    kind: PotentialKind,
    /// `d` on p2, `m,n` on p1xp1
    #[arg(long)]
    class: String,
    #[arg(long)]
    z: Option<u32>,
    /// Degree cap of the potential to read (default: largest cached)
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

fn parse_target(s: &str) -> Result<Target, String> {
    s.parse::<Target>().map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<PotentialKind, String> {
    s.parse::<PotentialKind>().map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<bool> {
    let dir = &cli.cache_dir;
    let (text, ok) = match cli.command {
        Command::Compute {
            target,
            cap,
            kinds,
            z,
        } => (commands::compute(dir, target, cap, kinds, z)?, true),
        Command::Query { select, a, b, c } => {
            let spec = QuerySpec {
                target: select.target,
                kind: select.kind,
                class: select.class,
                exp: ExponentTuple::new(a, b, c),
                z: select.z,
                cap: select.cap,
            };
            (commands::query(dir, &spec, select.format)?, true)
        }
        Command::Table { select, a, b, c } => {
            let spec = TableSpec {
                target: select.target,
                kind: select.kind,
                class: select.class,
                z: select.z,
                cap: select.cap,
                a,
                b,
                c,
            };
            (commands::table(dir, &spec, select.format)?, true)
        }
        Command::Verify { target, cap } => commands::verify(dir, target, cap)?,
    };
    print!("{text}");
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
