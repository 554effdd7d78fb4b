use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toric_cli::commands::analyze_many;
use toric_cli::{cmd_resolve, cmd_table, AnalyzeOptions, CliError, Report, TableOptions};

#[derive(Parser)]
#[command(name = "toric", version, about = "Fan combinatorics, stability bounds and finite resolution models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one or more fan files.
    Analyze {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Degree tuple d1,...,dr in ray order.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        degrees: Option<Vec<i64>>,
        /// Source dimension m (default 2).
        #[arg(long)]
        m: Option<i64>,
        /// Positive admissible shift a1,...,ar.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        shift: Option<Vec<i64>>,
        /// Certify connectivity for fans that are not complete.
        #[arg(long)]
        allow_incomplete: bool,
        #[arg(long)]
        json: bool,
    },
    /// Build the simplicial resolution of a finite cover.
    Resolve {
        file: PathBuf,
        /// Truncate at this level.
        #[arg(long)]
        truncate: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Print a first-page support table.
    Table {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        degrees: Vec<i64>,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        r_min: i64,
        /// truncated, truncated_shifted, veronese or vassiliev.
        #[arg(long, default_value = "truncated")]
        kind: String,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        shift: Option<Vec<i64>>,
        #[arg(long)]
        json: bool,
    },
}

fn emit(reports: &[Report], json: bool) {
    if json {
        if let [single] = reports {
            println!("{}", single.to_json());
        } else {
            let all: Vec<&Report> = reports.iter().collect();
            println!("{}", serde_json::to_string_pretty(&all).expect("reports serialize"));
        }
    } else {
        let texts: Vec<String> = reports.iter().map(Report::to_text).collect();
        print!("{}", texts.join("\n"));
    }
}

fn finish(results: Vec<Result<Report, CliError>>, json: bool) -> ExitCode {
    let mut code = 0u8;
    let mut reports = Vec::new();
    for r in results {
        match r {
            Ok(rep) => {
                code = code.max(rep.exit_code);
                reports.push(rep);
            }
            Err(e) => {
                code = code.max(e.exit_code());
                eprintln!("error: {e}");
            }
        }
    }
    emit(&reports, json);
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            files,
            degrees,
            m,
            shift,
            allow_incomplete,
            json,
        } => {
            let opts = AnalyzeOptions {
                degrees,
                m,
                shift,
                allow_incomplete,
            };
            let results = analyze_many(&files, &opts).into_iter().map(|(_, r)| r).collect();
            finish(results, json)
        }
        Command::Resolve { file, truncate, json } => finish(vec![cmd_resolve(&file, truncate)], json),
        Command::Table {
            degrees,
            m,
            r_min,
            kind,
            shift,
            json,
        } => finish(
            vec![cmd_table(&TableOptions {
                degrees,
                m,
                r_min,
                kind,
                shift,
            })],
            json,
        ),
    }
}
