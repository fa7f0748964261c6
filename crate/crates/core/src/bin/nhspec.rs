use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use nhspec::cli::{run, Command, Format, RunConfig, USpec};

/// Differential spectrum of the Ness-Helleseth binomial over GF(3^n).
#[derive(Parser, Debug)]
#[command(version, about)]
struct Args {
    /// Extension degree (odd, 3..=13).
    #[arg(long)]
    n: usize,
    /// Monic irreducible modulus as base-3 digits, lowest degree first.
    /// Defaults to the first irreducible in enumeration order.
    #[arg(long)]
    modulus: Option<String>,
    /// Digits, gen^k, all, or sample:N[:seed].
    #[arg(long, default_value = "all")]
    u: String,
    #[arg(long, value_enum)]
    command: Command,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Seed for sample:N when no seed is embedded.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let u_spec: USpec = match args.u.parse() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{{\"error\":{:?},\"kind\":\"usage\"}}", e.to_string());
            return ExitCode::from(2);
        }
    };
    let config = RunConfig {
        n: args.n,
        modulus: args.modulus,
        u_spec,
        command: args.command,
        format: args.format,
        seed: args.seed,
        jobs: args.jobs,
    };
    let mut out = BufWriter::new(io::stdout());
    let mut diag = io::stderr();
    let code = run(&config, &mut out, &mut diag);
    let _ = out.flush();
    ExitCode::from(code as u8)
}
