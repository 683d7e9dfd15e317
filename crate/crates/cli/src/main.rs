use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

mod commands;
mod config;

use commands::{Failure, Outcome};
use config::{Format, RunConfig};

/// Exact checks for pivot decompositions, S-topology neighbourhoods and
/// sequence convergence on the integers.
///
/// Exit status: 0 on success, 1 when a falsification or invariant
/// violation was found, 2 on usage or configuration errors.
#[derive(Parser, Debug)]
#[command(name = "qconvex", version, allow_negative_numbers = true)]
struct Cli {
    /// TOML file with the same keys as the flags; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,

    #[command(flatten)]
    run: RunConfig,
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn write_report(cfg: &RunConfig, out: &Outcome, w: &mut dyn Write) -> io::Result<()> {
    match (cfg.format.unwrap_or_default(), &out.table) {
        (Format::Csv, Some(table)) => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(&table.header)?;
            for row in &table.rows {
                csv.write_record(row)?;
            }
            csv.flush()
        }
        _ => {
            let record = json!({
                "command": cfg.command.map(|c| c.name()),
                "config": cfg,
                "version": qconvex::VERSION,
                "results": out.results,
            });
            serde_json::to_writer(&mut *w, &record)?;
            writeln!(w)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => match RunConfig::load(path) {
            Ok(file) => file.overlay(cli.run),
            Err(e) => return usage(&e),
        },
        None => cli.run,
    };
    if cfg.command.is_none() {
        return usage("no command given (on the command line or in the config file)");
    }
    let cfg = cfg.with_defaults();

    let out = match commands::run(&cfg) {
        Ok(out) => out,
        Err(Failure::Usage(e) | Failure::Runtime(e)) => return usage(&e),
    };

    let written = match &cfg.output {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            write_report(&cfg, &out, &mut w)?;
            w.flush()
        }),
        None => write_report(&cfg, &out, &mut io::stdout().lock()),
    };
    if let Err(e) = written {
        return usage(&format!("writing report: {e}"));
    }
    if out.flagged {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
