//! The `germcalc` command line.
//!
//! Exit codes: 0 success, 1 internal inconsistency (or a table mismatch),
//! 2 rejected input, 3 usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::corpus::{self, parse_p3_param, parse_selectors, CorpusError};
use crate::double_points::sample_real_points;
use crate::germ::parse_germ;
use crate::oracles::DEFAULT_SEED;
use crate::pipeline::{analyze, AnalysisError, Options};
use crate::report::{self, TableRow};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_REJECTED: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "germcalc", version, about = "Invariants of quasi-homogeneous corank-1 map germs (C^2,0) -> (C^3,0)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze one germ, given inline, in a file, or by corpus name (e.g. B5).
    Analyze(AnalyzeArgs),
    /// Recompute rows of the table of quasi-homogeneous germs.
    Table(TableArgs),
    /// Write real sample points of the double point branches and their images.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Germ such as "(x, y^2, y^5 + x^3*y)" or a corpus name.
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    pub germ: Option<String>,
    /// Read the germ from a file ('#' starts a comment line).
    #[arg(long, value_name = "F")]
    pub file: Option<PathBuf>,
    /// Run the independent oracles (the default).
    #[arg(long, overrides_with = "no_oracle")]
    pub oracle: bool,
    /// Skip the oracles.
    #[arg(long = "no-oracle", overrides_with = "oracle")]
    pub no_oracle: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Seed for the random shears of the oracles.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Parameter c of P3 when the germ is given as a corpus name.
    #[arg(long = "p3-param", value_name = "R", default_value = "2")]
    pub p3_param: String,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Families with optional ranges: `B`, `B=3..6`, `B 3..6`, `crosscap`.
    /// All families at their default ranges when omitted.
    pub selectors: Vec<String>,
    /// Run the oracles on every row.
    #[arg(long)]
    pub oracle: bool,
    /// Parameter c of P3.
    #[arg(long = "p3-param", value_name = "R", default_value = "2")]
    pub p3_param: String,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Germ or corpus name.
    pub germ: String,
    /// Samples per branch.
    #[arg(long)]
    pub count: usize,
    /// Parameters range over [-W, W].
    #[arg(long, value_name = "W")]
    pub window: f64,
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long = "p3-param", value_name = "R", default_value = "2")]
    pub p3_param: String,
}

/// Failure of a subcommand with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        Failure::usage(e.to_string())
    }
}

fn analysis_code(e: &AnalysisError) -> u8 {
    if e.is_rejection() {
        EXIT_REJECTED
    } else {
        EXIT_INTERNAL
    }
}

/// Resolves inline text or a corpus name to germ text.
fn germ_text(src: &str, p3: &str) -> Result<String, Failure> {
    let t = src.trim();
    if t.starts_with('(') {
        return Ok(t.to_string());
    }
    let c = parse_p3_param(p3)?;
    corpus::lookup(t, &c)
        .map(|e| e.germ)
        .ok_or_else(|| Failure { code: EXIT_REJECTED, message: format!("`{t}` is neither a germ (f1, f2, f3) nor a corpus name") })
}

fn read_germ_file(path: &Path) -> Result<String, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let body: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    if body.is_empty() {
        return Err(Failure::usage(format!("{} contains no germ", path.display())));
    }
    Ok(body.join(" "))
}

fn print(out: &mut impl Write, s: &str) {
    // a closed pipe is not worth a panic
    let _ = out.write_all(s.as_bytes());
}

fn cmd_analyze(args: &AnalyzeArgs, out: &mut impl Write) -> Result<(), Failure> {
    let text = match (&args.germ, &args.file) {
        (Some(g), None) => germ_text(g, &args.p3_param)?,
        (None, Some(f)) => read_germ_file(f)?,
        _ => return Err(Failure::usage("give exactly one of GERM or --file")),
    };
    let opts = Options { oracles: !args.no_oracle, seed: args.seed };
    let result = parse_germ(&text).map_err(AnalysisError::from).and_then(|g| analyze(&g, &opts));
    match (&result, args.format) {
        (Ok(a), Format::Json) => print(out, &(serde_json::to_string_pretty(&report::analysis_json(a)).unwrap() + "\n")),
        (Ok(a), Format::Table) => print(out, &report::analysis_text(a)),
        (Ok(a), Format::Csv) => print(out, &format!("{}\n{}\n", report::ANALYSIS_CSV_HEADER, report::analysis_csv_row(a))),
        (Err(e), Format::Json) => print(out, &(serde_json::to_string_pretty(&report::error_json(&text, e)).unwrap() + "\n")),
        (Err(_), _) => {}
    }
    match result {
        Ok(_) => Ok(()),
        Err(e) => {
            let kind = if e.is_rejection() { "rejected" } else { "internal error" };
            Err(Failure { code: analysis_code(&e), message: format!("{kind}: {}", e.reason()) })
        }
    }
}

fn cmd_table(args: &TableArgs, out: &mut impl Write) -> Result<(), Failure> {
    let p3 = parse_p3_param(&args.p3_param)?;
    let selectors = if args.selectors.is_empty() { corpus::default_selectors() } else { parse_selectors(&args.selectors)? };
    let mut entries = Vec::new();
    for s in &selectors {
        entries.extend(s.entries(&p3)?);
    }
    let opts = Options { oracles: args.oracle, seed: args.seed };
    // par_iter keeps input order in the collected vector
    let rows: Vec<TableRow> = entries
        .into_par_iter()
        .map(|entry| {
            let outcome = parse_germ(&entry.germ).map_err(AnalysisError::from).and_then(|g| analyze(&g, &opts));
            TableRow { entry, outcome }
        })
        .collect();
    match args.format {
        Format::Json => print(out, &(serde_json::to_string_pretty(&report::table_json(&rows)).unwrap() + "\n")),
        Format::Table => print(out, &report::table_text(&rows)),
        Format::Csv => print(out, &report::table_csv(&rows)),
    }
    let bad: Vec<&str> = rows.iter().filter(|r| !r.matches()).map(|r| r.entry.name.as_str()).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure { code: EXIT_INTERNAL, message: format!("rows disagree with the table: {}", bad.join(", ")) })
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), Failure> {
    fs::write(path, body).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn cmd_sample(args: &SampleArgs, err: &mut impl Write) -> Result<(), Failure> {
    if args.count == 0 {
        return Err(Failure::usage("invalid range: sample count must be at least 1"));
    }
    if !args.window.is_finite() || args.window < 0.0 {
        return Err(Failure::usage(format!("invalid range: window {} must be finite and non-negative", args.window)));
    }
    let text = germ_text(&args.germ, &args.p3_param)?;
    let opts = Options { oracles: false, seed: DEFAULT_SEED };
    let a = parse_germ(&text).map_err(AnalysisError::from).and_then(|g| analyze(&g, &opts)).map_err(|e| Failure {
        code: analysis_code(&e),
        message: e.reason(),
    })?;
    let samples = sample_real_points(&a.curve, &a.normal_form, args.count, args.window).map_err(|e| Failure::usage(e.to_string()))?;
    fs::create_dir_all(&args.out).map_err(|e| Failure::usage(format!("cannot create {}: {e}", args.out.display())))?;
    let mut src = String::from("branch,u,x,y\n");
    for s in &samples.source {
        src += &format!("{},{},{},{}\n", s.branch, s.u, s.x, s.y);
    }
    let mut img = String::from("branch,u,X,Y,Z\n");
    for s in &samples.image {
        img += &format!("{},{},{},{},{}\n", s.branch, s.u, s.point[0], s.point[1], s.point[2]);
    }
    write_file(&args.out.join("source_branches.csv"), &src)?;
    write_file(&args.out.join("image_branches.csv"), &img)?;
    let advisory = serde_json::json!({
        "schema": report::SCHEMA,
        "germ": a.input.to_string(),
        "normal_form": a.normal_form.germ.to_string(),
        "coordinates": "normal form",
        "non_real_branches": samples.non_real,
    });
    write_file(&args.out.join("advisory.json"), &(serde_json::to_string_pretty(&advisory).unwrap() + "\n"))?;
    if !samples.non_real.is_empty() {
        let _ = writeln!(err, "note: branches {:?} have no real points and were not sampled", samples.non_real);
    }
    Ok(())
}

/// Runs the CLI on explicit arguments, writing to the given streams, and
/// returns the exit code.
pub fn run<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                print(out, &rendered);
            } else {
                print(err, &rendered);
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::Table(t) => cmd_table(t, out),
        Command::Sample(s) => cmd_sample(s, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "germcalc: {}", f.message);
            f.code
        }
    }
}

pub fn main() -> ExitCode {
    let code = run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code)
}
