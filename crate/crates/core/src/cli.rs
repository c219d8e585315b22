//! Command-line front end. Exit codes: 0 success, 1 verification failure or
//! refused presentation, 2 usage or input format error.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::builder::{build_stage, BuildError, BuildRecipe, BuildStage};
use crate::complexes::{verify_spectacular, TwoComplex};
use crate::finite_geometry::prime_power;
use crate::homology::{homology, HomologyReport};
use crate::presentations::{materialize_hs, GraphicalPresentation, LabelSet, PresentationError};
use crate::wordproblem::{
    girth_cycle_tuple, r_invariant, DehnReducer, Evidence, TraceView, WordError, DEFAULT_WORD_BUDGET,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "spectacular",
    version,
    about = "Build and check spectacular 2-complexes and the groups H(S)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a complex from a recipe.
    Build(CommonArgs),
    /// Check the seven spectacular conditions (exit 1 if any fails).
    Verify(CommonArgs),
    /// Integral homology.
    Homology(CommonArgs),
    /// Materialise the presentation of H(S) over a window of degrees.
    Present(PresentArgs),
    /// Decide whether a word is trivial by Dehn reduction.
    Reduce(ReduceArgs),
    /// Degrees n in a range with g1^n ... gl^n trivial.
    Rset(RsetArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stage {
    K1,
    K2,
    Full,
}

#[derive(Debug, Clone, Args)]
pub struct RecipeArgs {
    /// Field order (a prime power); alternative to --p/--e.
    #[arg(long, conflicts_with_all = ["p", "e"])]
    pub q: Option<u32>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub e: Option<u32>,
    /// Polygon order d (default 7).
    #[arg(long)]
    pub d: Option<u64>,
    /// +1 or -1 with d | q + epsilon; inferred when omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<i8>,
    /// Which conjugacy class of order d, by least element.
    #[arg(long = "class", default_value_t = 0)]
    pub class_index: usize,
    #[arg(long, default_value_t = 0)]
    pub v0: usize,
    /// Subdivide every edge into this many.
    #[arg(long)]
    pub subdivide: Option<usize>,
    /// Pipeline stage; defaults to the full pipeline when --subdivide is given.
    #[arg(long, value_enum)]
    pub stage: Option<Stage>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Read the complex from a JSON file instead of building it.
    #[arg(long, conflicts_with_all = ["q", "p", "e", "d", "epsilon", "class_index", "v0", "subdivide", "stage"])]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub recipe: RecipeArgs,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    /// Degrees, e.g. `1..6` or `-2,1..3`.
    #[arg(long, allow_hyphen_values = true, default_value = "1..6")]
    pub window: String,
    /// Subset of the window, comma separated; empty for none.
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    pub s: String,
}

#[derive(Debug, Clone, Args)]
pub struct PresentArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub window: WindowArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Whitespace-separated labels; `~x` is the inverse of `x`.
    #[arg(long, allow_hyphen_values = true)]
    pub word: String,
}

#[derive(Debug, Clone, Args)]
pub struct RsetArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, allow_hyphen_values = true, default_value = "-6..6")]
    pub range: String,
    /// Generators g1 ... gl; defaults to the labels around a shortest cycle.
    #[arg(long, allow_hyphen_values = true)]
    pub tuple: Option<String>,
    /// Longest word the computation may build.
    #[arg(long, default_value_t = DEFAULT_WORD_BUDGET)]
    pub budget: usize,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl fmt::Display) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    fn failed(message: impl fmt::Display) -> Self {
        CliError {
            code: EXIT_FAILED,
            message: message.to_string(),
        }
    }
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> Self {
        CliError::failed(e)
    }
}

impl From<PresentationError> for CliError {
    fn from(e: PresentationError) -> Self {
        CliError::usage(e)
    }
}

impl From<WordError> for CliError {
    fn from(e: WordError) -> Self {
        match e {
            WordError::Refused(_) => CliError::failed(e),
            other => CliError::usage(other),
        }
    }
}

/// Parses `a..b`, `n`, or comma-separated mixtures of both (inclusive).
pub fn parse_int_list(s: &str) -> Result<Vec<i64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = split_range(part) {
            let a: i64 = a.trim().parse().map_err(|_| format!("bad integer in {part:?}"))?;
            let b: i64 = b.trim().parse().map_err(|_| format!("bad integer in {part:?}"))?;
            if a > b {
                return Err(format!("empty range {part:?}"));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| format!("bad integer {part:?}"))?);
        }
    }
    Ok(out)
}

fn split_range(part: &str) -> Option<(&str, &str)> {
    part.find("..").map(|i| (&part[..i], &part[i + 2..]))
}

pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = split_range(s.trim()).ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let a = a.trim().parse().map_err(|_| format!("bad range {s:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad range {s:?}"))?;
    Ok((a, b))
}

impl RecipeArgs {
    pub fn recipe(&self) -> Result<BuildRecipe, CliError> {
        let default = BuildRecipe::default();
        let (p, e) = match (self.q, self.p, self.e) {
            (Some(q), _, _) => prime_power(q).map_err(CliError::usage)?,
            (None, None, None) => (default.p, default.e),
            (None, p, e) => (p.unwrap_or(default.p), e.unwrap_or(1)),
        };
        let d = self.d.unwrap_or(default.d);
        let q = p
            .checked_pow(e)
            .ok_or_else(|| CliError::usage("field order overflows"))?;
        let epsilon = match self.epsilon {
            Some(eps) => eps,
            None => crate::finite_geometry::epsilon_for(q, d)
                .ok_or_else(|| CliError::usage(format!("{d} divides neither {q}+1 nor {q}-1")))?,
        };
        let recipe = BuildRecipe {
            p,
            e,
            d,
            epsilon,
            class_index: self.class_index,
            v0: self.v0,
            subdivision: self.subdivide.unwrap_or(default.subdivision),
        };
        recipe.validate().map_err(CliError::usage)?;
        Ok(recipe)
    }

    fn stage(&self, fallback: BuildStage) -> BuildStage {
        match (self.stage, self.subdivide) {
            (Some(Stage::K1), _) => BuildStage::K1,
            (Some(Stage::K2), _) => BuildStage::K2,
            (Some(Stage::Full), _) | (None, Some(_)) => BuildStage::Full,
            (None, None) => fallback,
        }
    }
}

impl CommonArgs {
    /// The input complex, or the built one at `fallback` stage unless flags say otherwise.
    fn complex(&self, fallback: BuildStage) -> Result<TwoComplex, CliError> {
        match &self.input {
            Some(path) => read_complex(path),
            None => {
                let recipe = self.recipe.recipe()?;
                Ok(build_stage(&recipe, self.recipe.stage(fallback))?)
            }
        }
    }
}

pub fn read_complex(path: &Path) -> Result<TwoComplex, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

struct Rendered {
    body: String,
    summary: String,
    code: i32,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

fn no_dot(command: &str) -> CliError {
    CliError::usage(format!("{command} has no dot output"))
}

pub fn complex_summary(c: &TwoComplex) -> String {
    let mut perimeters = c.perimeters();
    perimeters.sort_unstable();
    perimeters.dedup();
    let list: Vec<String> = perimeters.iter().map(usize::to_string).collect();
    format!(
        "V = {}, E = {}, F = {}, girth {}, perimeters {{{}}}\n",
        c.vertex_count(),
        c.edge_count(),
        c.polygon_count(),
        c.girth(),
        list.join(", ")
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomologyOutput {
    pub vertices: usize,
    pub edges: usize,
    pub polygons: usize,
    pub homology: HomologyReport,
    pub acyclic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceOutput {
    pub evidence: Evidence,
    pub trace: TraceView,
}

fn windows(w: &WindowArgs) -> Result<(Vec<i64>, Vec<i64>), CliError> {
    let window = parse_int_list(&w.window).map_err(CliError::usage)?;
    let s = parse_int_list(&w.s).map_err(CliError::usage)?;
    Ok((window, s))
}

fn presentation(common: &CommonArgs, w: &WindowArgs) -> Result<(TwoComplex, GraphicalPresentation), CliError> {
    let (window, s) = windows(w)?;
    let k = common.complex(BuildStage::Full)?;
    let p = materialize_hs(&k, &window, &s)?;
    Ok((k, p))
}

fn execute(cmd: &Command) -> Result<Rendered, CliError> {
    match cmd {
        Command::Build(a) => {
            let c = a.complex(BuildStage::K1)?;
            let summary = complex_summary(&c);
            let body = match a.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&c),
                Format::Dot => c.to_dot(),
                Format::Text => summary.clone(),
            };
            Ok(Rendered {
                body,
                summary,
                code: EXIT_OK,
            })
        }
        Command::Verify(a) => {
            let c = a.complex(BuildStage::Full)?;
            let report = verify_spectacular(&c);
            let code = if report.spectacular { EXIT_OK } else { EXIT_FAILED };
            let summary = report.to_text();
            let body = match a.format.unwrap_or(Format::Text) {
                Format::Json => to_json(&report),
                Format::Dot => return Err(no_dot("verify")),
                Format::Text => summary.clone(),
            };
            Ok(Rendered { body, summary, code })
        }
        Command::Homology(a) => {
            let c = a.complex(BuildStage::K1)?;
            let h = homology(&c);
            let summary = format!(
                "{} ({})\n",
                h.summary(),
                if h.is_acyclic() { "acyclic" } else { "not acyclic" }
            );
            let out = HomologyOutput {
                vertices: c.vertex_count(),
                edges: c.edge_count(),
                polygons: c.polygon_count(),
                acyclic: h.is_acyclic(),
                homology: h,
            };
            let body = match a.format.unwrap_or(Format::Text) {
                Format::Json => to_json(&out),
                Format::Dot => return Err(no_dot("homology")),
                Format::Text => summary.clone(),
            };
            Ok(Rendered {
                body,
                summary,
                code: EXIT_OK,
            })
        }
        Command::Present(a) => {
            let (_, p) = presentation(&a.common, &a.window)?;
            let reducer = DehnReducer::new(&p)?;
            let basis = match reducer.evidence() {
                Evidence::Certificate { .. } => "C'(1/6) holds for all degrees (certificate)".to_string(),
                Evidence::Exhaustive { pairs, .. } => format!("C'(1/6) holds on this window ({pairs} pairs checked)"),
            };
            let summary = format!("{}{basis}\n", p.to_text());
            let body = match a.common.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&p),
                Format::Dot => p.to_dot(),
                Format::Text => summary.clone(),
            };
            Ok(Rendered {
                body,
                summary,
                code: EXIT_OK,
            })
        }
        Command::Reduce(a) => {
            let (_, p) = presentation(&a.common, &a.window)?;
            let word = p.labels().parse_word(&a.word)?;
            let reducer = DehnReducer::new(&p)?;
            let trace = reducer.reduce(&word).view(p.labels());
            let summary = trace.to_text();
            let out = ReduceOutput {
                evidence: reducer.evidence().clone(),
                trace,
            };
            let body = match a.common.format.unwrap_or(Format::Text) {
                Format::Json => to_json(&out),
                Format::Dot => return Err(no_dot("reduce")),
                Format::Text => summary.clone(),
            };
            Ok(Rendered {
                body,
                summary,
                code: EXIT_OK,
            })
        }
        Command::Rset(a) => {
            let (window, s) = windows(&a.window)?;
            let range = parse_range(&a.range).map_err(CliError::usage)?;
            let k = a.common.complex(BuildStage::Full)?;
            let tuple = match &a.tuple {
                Some(t) => {
                    let labels = LabelSet::for_edges(k.edge_count());
                    labels.parse_word(t)?.0
                }
                None => girth_cycle_tuple(&k)?,
            };
            let r = r_invariant(&k, &window, &s, &tuple, range, a.budget)?;
            let summary = r.to_text();
            let body = match a.common.format.unwrap_or(Format::Text) {
                Format::Json => to_json(&r),
                Format::Dot => return Err(no_dot("rset")),
                Format::Text => summary.clone(),
            };
            Ok(Rendered {
                body,
                summary,
                code: EXIT_OK,
            })
        }
    }
}

fn out_path(cmd: &Command) -> Option<&Path> {
    let common = match cmd {
        Command::Build(a) | Command::Verify(a) | Command::Homology(a) => a,
        Command::Present(a) => &a.common,
        Command::Reduce(a) => &a.common,
        Command::Rset(a) => &a.common,
    };
    common.out.as_deref()
}

/// Runs the CLI on `args` (program name first), writing to the given streams.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(&cli.command) {
        Ok(r) => {
            match out_path(&cli.command) {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &r.body) {
                        let _ = writeln!(stderr, "error: {}: {e}", path.display());
                        return EXIT_USAGE;
                    }
                    let _ = stdout.write_all(r.summary.as_bytes());
                }
                None => {
                    let _ = stdout.write_all(r.body.as_bytes());
                }
            }
            r.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["spectacular"];
        full.extend_from_slice(args);
        let code = run_with(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn int_lists() {
        assert_eq!(parse_int_list("1..3,5").unwrap(), vec![1, 2, 3, 5]);
        assert_eq!(parse_int_list("-2..-1").unwrap(), vec![-2, -1]);
        assert_eq!(parse_int_list("").unwrap(), Vec::<i64>::new());
        assert!(parse_int_list("3..1").is_err());
        assert!(parse_int_list("x").is_err());
        assert_eq!(parse_range("-6..6").unwrap(), (-6, 6));
    }

    #[test]
    fn build_triangle_text() {
        let (code, out, _) = run_capture(&["build", "--q", "2", "--d", "3", "--format", "text"]);
        assert_eq!(code, 0);
        assert_eq!(out, "V = 3, E = 3, F = 1, girth 3, perimeters {3}\n");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["build", "--q", "6"]).0, 2);
        assert_eq!(run_capture(&["build", "--q", "8", "--d", "5"]).0, 2);
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        assert_eq!(
            run_capture(&["homology", "--format", "dot", "--q", "2", "--d", "3"]).0,
            2
        );
        assert_eq!(run_capture(&["present", "--window", "1..2", "--s", "3"]).0, 2);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn homology_of_the_hemicube() {
        let (code, out, _) = run_capture(&["homology", "--q", "3", "--d", "4"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("H0 = Z, H1 = Z/2, H2 = 0"), "{out}");
    }
}
