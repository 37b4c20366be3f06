//! Command-line driver. [`execute_command`] parses an argument vector, runs the
//! subcommand against the workspace, and returns the exit code together with
//! the report that the binary prints on standard output.

mod commands;
mod render;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

pub use commands::Outcome;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "panache", version, about = "Exact calculator for weight-filtered representations, their extension classes and blended extensions")]
pub struct Cli {
    /// Workspace file; defaults to $PANACHE_WORKSPACE, then ./panache.json.
    #[arg(long, global = true)]
    pub workspace: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Do not append the report to the workspace.
    #[arg(long, global = true)]
    pub no_record: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load the workspace and check every invariant.
    Validate,
    /// Dimension of u(M), u_p(M) or u_{>=q}(M) and largeness.
    U {
        object: String,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "geq")]
        p: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        geq: Option<i64>,
    },
    /// Region sets and independence axioms at (p, q).
    Axioms {
        object: String,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
    },
    /// The class E_p(M), optionally modulo u, u_p, or an explicit subobject.
    Ext {
        object: String,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        /// `u`, `up`, or a JSON list of vectors in the coordinates of the target.
        #[arg(long)]
        quotient_by: Option<String>,
    },
    /// Whether a stored extension class comes from the subcategory generated by an object.
    Originates {
        class: String,
        #[arg(long)]
        from: String,
    },
    /// Build the blended extension of a stored pair, or its obstruction.
    Blend {
        pair: String,
        /// Store the blended object in the workspace under this name.
        #[arg(long)]
        save_as: Option<String>,
    },
    /// Decide whether two stored pairs lie in one automorphism orbit.
    Equiv { pair1: String, pair2: String },
    /// Total class modulo u splits, and sampled subobjects not containing u do not split it.
    Theorem1 {
        object: String,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Splitting of E_p / u_p under the independence axioms, or origination when q > p.
    Theorem2 {
        object: String,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<i64>,
    },
    /// Largeness of u(M) from largeness of a sub and a quotient plus IA1.
    Theorem3 {
        object: String,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
    },
    /// Classify objects with graded pieces Q(n), Q(k), 1 and large u.
    ClassifyMt(ClassifyArgs),
    /// Formal period matrix of a classified object or of the four-dimensional example.
    ReportPeriods {
        #[command(flatten)]
        args: ClassifyArgs,
        /// Report on the four-dimensional example built from M_{4,r} instead.
        #[arg(long)]
        four_dim: bool,
    },
    /// Search for instances with E_p / u_p nonsplit over a weight pattern.
    SearchCounterexample(SearchArgs),
    /// Seeded property suites over the random corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 4)]
    pub n: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    pub k: i64,
    /// Positive rational for the Kummer class, as `p/q` or an integer.
    #[arg(long, default_value = "2")]
    pub r: String,
    #[arg(long)]
    pub max_twist: Option<i64>,
    #[arg(long, default_value_t = 2)]
    pub kummer_rank: usize,
    /// Also write the JSON report to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Occurring weights, comma separated, in the Tate convention (even, at most 0).
    #[arg(long, allow_hyphen_values = true)]
    pub pattern: String,
    /// Half-open seed range `A..B`.
    #[arg(long, default_value = "0..100")]
    pub seeds: String,
    /// Degrees of the generators of n, comma separated.
    #[arg(long, default_value = "1,2")]
    pub degrees: String,
    /// Use the truncated free Lie algebra on the degrees instead of the abelian one.
    #[arg(long)]
    pub free: bool,
    #[arg(long, default_value_t = 0.7)]
    pub density: f64,
    #[arg(long, default_value_t = 16)]
    pub max_found: usize,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Write found instances as a workspace file.
    #[arg(long)]
    pub save: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    /// Run one property suite.
    Run {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        max_seeds: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// List the available suites.
    List,
    /// Write corpus instances as workspace files into a directory.
    Generate {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        ia3: bool,
    },
}

/// Parses `argv` (including the program name) and runs the command.
/// Returns the exit code and the rendered report. Usage errors return clap's
/// usage text with exit code 2.
pub fn execute_command<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let recorded: Vec<String> = argv.iter().skip(1).map(|s| s.to_string_lossy().into_owned()).collect();
    match commands::run(&cli, &recorded) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => to_json_line(&out.report),
                Format::Text => render::text(&out.report),
            };
            (out.code, text)
        }
        Err(e) => {
            let report = serde_json::json!({ "error": e.to_string() });
            let text = match cli.format {
                Format::Json => to_json_line(&report),
                Format::Text => format!("error: {e}\n"),
            };
            (EXIT_USAGE, text)
        }
    }
}

fn to_json_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("report serializes");
    s.push('\n');
    s
}
