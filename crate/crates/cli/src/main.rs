use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use symext_dsl::{force_query, parse_spec, run, Config, Limits, SpecDocument};

/// Finite forcing and symmetric-system workbench.
#[derive(Parser, Debug)]
#[command(name = "symext", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Opts {
    /// Largest group that may be enumerated.
    #[arg(long, global = true, default_value_t = 10_080)]
    max_group: usize,
    /// Largest poset that may be built.
    #[arg(long, global = true, env = "SYMEXT_MAX_ELEMENTS", default_value_t = 20_000)]
    max_poset: usize,
    /// Largest name rank.
    #[arg(long, global = true, default_value_t = 6)]
    rank_cap: u32,
    /// Largest number of entries in one name.
    #[arg(long, global = true, default_value_t = 4_096)]
    max_entries: usize,
    /// Seed for sampled name and formula families.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Include per-statement wall time in reports.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a document and print a table of outcomes.
    Check { file: PathBuf },
    /// Decide a formula at a condition of the document's active system.
    Force {
        file: PathBuf,
        /// `top`, a poset label, or cells such as `[(0,0)=1]`
        #[arg(long)]
        condition: String,
        /// Closed formula over the document's names, e.g. `gen(0) = gen(1)`
        #[arg(long)]
        formula: String,
    },
    /// Run a document and print the full report.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Json,
    Human,
}

impl Opts {
    fn config(&self) -> Config {
        Config {
            limits: Limits {
                max_poset: self.max_poset,
                max_group: self.max_group,
                rank_cap: self.rank_cap,
                max_entries: self.max_entries,
            },
            seed: self.seed,
            jobs: self.jobs,
            timing: self.timing,
        }
    }
}

fn load(path: &Path) -> Result<SpecDocument, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_spec(&text).map_err(|e| format!("{}:{e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = cli.opts.config();
    let code = match &cli.command {
        Command::Check { file } | Command::Report { file, .. } => match load(file) {
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
            Ok(doc) => {
                let report = run(&doc, &config);
                match cli.command {
                    Command::Report { format: Format::Json, .. } => println!("{}", report.to_json()),
                    _ => print!("{}", report.to_human()),
                }
                report.exit_code()
            }
        },
        Command::Force { file, condition, formula } => match load(file) {
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
            Ok(doc) => match force_query(&doc, &config, condition, formula) {
                Ok(ans) => {
                    println!("{}", serde_json::to_string_pretty(&ans).expect("answers serialize"));
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            },
        },
    };
    ExitCode::from(code as u8)
}
