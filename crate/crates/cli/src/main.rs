use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

#[derive(Parser)]
#[command(name = "klat", version, about = "Exact integral lattice toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, signature, determinant and discriminant form of a lattice file.
    Info {
        lattice: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Recompute a classification table and compare with the printed values.
    Verify {
        /// 2.1 … 2.5, 3.1 … 3.4, 5, 6 or all.
        #[arg(long)]
        table: String,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "KLAT_JOBS")]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Wall divisors of a Kummer lattice within a coordinate box.
    Walls {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        lattice: PathBuf,
        /// Largest |v²| listed.
        #[arg(long, default_value_t = 6)]
        max_norm: i64,
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Primitive embeddings of one lattice into another.
    Embed {
        #[arg(long)]
        sub: PathBuf,
        #[arg(long)]
        ambient: PathBuf,
        #[arg(long, default_value_t = 1)]
        bound: i64,
        #[arg(long, default_value_t = 50)]
        limit: usize,
    },
    /// Orthogonal group of a definite lattice, or its discriminant kernel.
    Group {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        restricted: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Info { lattice, json } => commands::info(&lattice, json),
        Command::Verify { table, out, jobs, json } => commands::verify(&table, out.as_deref(), jobs, json),
        Command::Walls { n, lattice, max_norm, bound } => commands::walls(n, &lattice, max_norm, bound),
        Command::Embed { sub, ambient, bound, limit } => commands::embed(&sub, &ambient, bound, limit),
        Command::Group { lattice, restricted } => commands::group(&lattice, restricted),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
