//! `congnorm`: normalizers of congruence groups and lattice automorphisms
//! from the command line.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage or invalid input,
//! 3 disagreement between a closed form and its definition.

mod commands;
mod report;
mod subgroup_spec;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{LatticeQuery, SuiteArg};
use report::Report;
use subgroup_spec::SubgroupSpec;

const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "congnorm",
    version,
    about = "Normalizers of congruence groups and lattice automorphisms"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The normalizer of Gamma_H(N) for a subgroup H of (Z/N)^x.
    Normalizer {
        #[arg(long)]
        level: u64,
        /// kernel:D=.., torsion:m=.., gen:a,b,.. or pm:<any of these>
        #[arg(long)]
        subgroup: SubgroupSpec,
    },
    /// The lattice L(N, D): Gram matrix, SAut+, discriminant kernel and group.
    Lattice {
        #[arg(long = "N")]
        n: u64,
        #[arg(long = "D")]
        d: u64,
        /// Queries to answer; all when omitted.
        #[arg(value_enum)]
        queries: Vec<LatticeQuery>,
    },
    /// Data of a single element (mu; a, b, c, d) at level N.
    Element {
        #[arg(long)]
        level: u64,
        /// mu,a,b,c,d with rationals written p/q.
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
        /// Also test whether the element normalizes this subgroup.
        #[arg(long)]
        subgroup: Option<SubgroupSpec>,
        /// Also test the action on L(N, D).
        #[arg(long = "lattice-D")]
        lattice_d: Option<u64>,
    },
    /// Indices [Gamma0^(*,sigma)(N) : Gamma0(N)].
    Index {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        sigma: Option<u64>,
    },
    /// Run verification sweeps.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 12)]
        max_level: u64,
    },
}

/// `CONGNORM_MAX_LEVEL` caps sweep bounds when set.
fn capped_level(requested: u64) -> Result<u64, String> {
    match std::env::var("CONGNORM_MAX_LEVEL") {
        Ok(v) => {
            let cap: u64 = v
                .trim()
                .parse()
                .map_err(|_| format!("CONGNORM_MAX_LEVEL=`{v}` is not an integer"))?;
            Ok(requested.min(cap))
        }
        Err(_) => Ok(requested),
    }
}

fn run(cli: &Cli) -> Result<Report, String> {
    let r = match &cli.command {
        Command::Normalizer { level, subgroup } => commands::normalizer(*level, subgroup),
        Command::Lattice { n, d, queries } => commands::lattice(*n, *d, queries),
        Command::Element {
            level,
            elem,
            subgroup,
            lattice_d,
        } => commands::element(*level, elem, subgroup.as_ref(), *lattice_d)?,
        Command::Index { level, sigma } => commands::index(*level, *sigma),
        Command::Verify { suite, max_level } => {
            let capped = capped_level(*max_level)?;
            commands::verify(*suite, capped, *max_level).map(|mut r| {
                if cli.format == Format::Table {
                    commands::summarize_verify_table(&mut r);
                }
                r
            })
        }
    };
    r.map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => {
                    let mut s =
                        serde_json::to_string_pretty(&report.to_json()).expect("serializable");
                    s.push('\n');
                    s
                }
                Format::Table => report.render_table(),
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(report.status.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
