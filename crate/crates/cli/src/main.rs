//! `qcenter`: classify quadratic systems by the number of centers.

mod corpus;
mod input;
mod report;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use qcenter::families::Family;

use input::{parse_input, parse_tuple, ParseError, SystemRecord};
use report::{
    analyze, analyze_all, render_invariants, render_row, render_summary, render_system, Options,
    ReportDocument,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qcenter",
    version,
    about = "Count centers of planar quadratic systems from affine invariants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one system given as 12 comma-separated coefficients
    /// p00,p10,p01,p20,p11,p02,q00,q10,q01,q20,q11,q02 (read from stdin if omitted).
    Classify {
        system: Option<String>,
        /// Cross-check with the singular-point oracle.
        #[arg(long)]
        oracle: bool,
        /// Include the full invariant table.
        #[arg(long)]
        invariants: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Classify every system of a file of 12-tuples or a JSON array of records ("-" for stdin).
    Batch {
        file: PathBuf,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        invariants: bool,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Run the built-in families through classifier and oracle.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Systems per family.
        #[arg(long, default_value_t = 40)]
        count: usize,
        /// Restrict to one family: placed-points, hamiltonian, reversible, canonical, random.
        #[arg(long)]
        family: Option<Family>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        invariants: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Print the invariant table of one system.
    Invariants {
        system: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}

fn read_text(path: Option<&PathBuf>) -> anyhow::Result<String> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .context("reading stdin")?;
        }
    }
    Ok(text)
}

fn single_record(system: Option<String>) -> Result<SystemRecord, ParseError> {
    let text = match system {
        Some(s) => s,
        None => read_text(None).map_err(|e| ParseError {
            line: 1,
            column: 1,
            message: e.to_string(),
        })?,
    };
    let line = text.trim_end_matches(['\n', '\r']);
    if line.contains('\n') {
        return Err(ParseError {
            line: 2,
            column: 1,
            message: "expected a single system".to_string(),
        });
    }
    Ok(SystemRecord {
        id: "system".to_string(),
        coefficients: parse_tuple(line, 1)?,
        expected: None,
    })
}

fn emit(doc: &ReportDocument, format: Format, text: impl FnOnce(&ReportDocument) -> String) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(doc).expect("serializable report")
        ),
        Format::Text => print!("{}", text(doc)),
    }
}

fn status(doc: &ReportDocument) -> ExitCode {
    if doc.failed() {
        ExitCode::from(EXIT_FAILURE)
    } else {
        ExitCode::SUCCESS
    }
}

fn input_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("qcenter: {e}");
    ExitCode::from(EXIT_INPUT)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Classify {
            system,
            oracle,
            invariants,
            output,
        } => {
            let record = match single_record(system) {
                Ok(r) => r,
                Err(e) => return input_error(e),
            };
            let doc = ReportDocument::new(
                vec![analyze(&record, None, Options { oracle, invariants })],
                &[],
            );
            emit(&doc, output.format, |d| render_system(&d.systems[0]));
            status(&doc)
        }
        Command::Invariants { system, output } => {
            let record = match single_record(system) {
                Ok(r) => r,
                Err(e) => return input_error(e),
            };
            let table = qcenter::InvariantTable::compute(&record.system());
            match output.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&table).expect("serializable table")
                ),
                Format::Text => print!("{}", render_invariants(&table)),
            }
            ExitCode::SUCCESS
        }
        Command::Batch {
            file,
            oracle,
            invariants,
            jobs,
            output,
        } => {
            let text = match read_text(Some(&file)) {
                Ok(t) => t,
                Err(e) => return input_error(format!("{e:#}")),
            };
            let parsed = match parse_input(&text) {
                Ok(p) => p,
                Err(e) => return input_error(e),
            };
            for e in &parsed.errors {
                eprintln!("qcenter: {}: {e}", file.display());
            }
            let records: Vec<_> = parsed.records.into_iter().map(|r| (r, None)).collect();
            let reports = analyze_all(&records, Options { oracle, invariants }, jobs);
            let doc = ReportDocument::new(reports, &parsed.errors);
            emit(&doc, output.format, |d| {
                let mut out: String = d.systems.iter().map(|s| render_row(s) + "\n").collect();
                out.push_str(&render_summary(d));
                out
            });
            status(&doc)
        }
        Command::Corpus {
            seed,
            count,
            family,
            jobs,
            invariants,
            output,
        } => {
            let doc = corpus::run(&corpus::CorpusOptions {
                seed,
                count,
                family,
                jobs,
                invariants,
            });
            emit(&doc, output.format, render_summary);
            status(&doc)
        }
    }
}
