//! `mpf` command line: JSON in, one JSON document out.
//!
//! Exit codes: 0 success or verified, 1 falsified, 2 usage or input error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::alphabet::{parse_rationals, DistanceAlphabet};
use crate::error::{Error, Result};
use crate::functions::GridFunction;
use crate::json::{
    self, family_value, function_set_value, space_value, FamilyJson, FunctionJson,
    FunctionSetJson, SpaceJson,
};
use crate::monoid::{all_endofunctions, is_submonoid, monoid_closure, FunctionSet};
use crate::preservation::{
    compute_am, compute_f0, compute_p_universe, compute_p_x, compute_si, mainth_construction,
    PreservationUniverse, PreservedKind,
};
use crate::spaces::{
    delhomme_space, enumerate_spaces, enumerate_spaces_up_to, DistanceMatrix, SpaceFamily,
    SpaceKind,
};
use crate::verifier::{explore_conjecture1, run_check, CheckParams, Status, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mpf", version, about = "Preservation monoids of finite metric spaces")]
pub struct Cli {
    /// Also write the JSON result to this file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FunctionPredicate {
    Amenable,
    Increasing,
    Subadditive,
    TriangleTriplet,
    F0,
    MetricPreserving,
    UltrametricPreserving,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SpacePredicate {
    Metric,
    Ultrametric,
    Discrete,
    ThreePointDiscrete,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum UniverseKind {
    Metric,
    Ultrametric,
    Si,
    F0,
    Am,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EnumKind {
    Metric,
    Ultrametric,
    Discrete,
    Raw,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PreserveKindArg {
    Metric,
    Ultrametric,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a predicate on one function.
    CheckFunction {
        #[arg(long)]
        alphabet: Option<String>,
        /// Images of the alphabet values, in order, e.g. `1,0,2`.
        #[arg(long)]
        table: Option<String>,
        #[arg(long)]
        function: Option<PathBuf>,
        #[arg(long, value_enum)]
        predicate: FunctionPredicate,
        /// Space size bound for the preserving predicates.
        #[arg(long, default_value_t = 3)]
        max_points: usize,
    },
    /// Evaluate space predicates.
    CheckSpace {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, value_enum)]
        predicate: Option<SpacePredicate>,
    },
    /// Apply a function entrywise to a space.
    Transform {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        function: Option<PathBuf>,
        #[arg(long)]
        table: Option<String>,
    },
    /// Monoid generated by a set of functions.
    Closure {
        #[arg(long)]
        functions: Option<PathBuf>,
        #[arg(long)]
        alphabet: Option<String>,
        /// Repeatable; each value is one table.
        #[arg(long)]
        table: Vec<String>,
    },
    /// Preservation set of a family.
    Pfx {
        #[arg(long)]
        family: PathBuf,
    },
    /// Family whose preservation set is the given submonoid.
    Construct {
        #[arg(long)]
        functions: PathBuf,
        /// Base space; defaults to the Delhommé space of the alphabet.
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// A named function set over an alphabet.
    Universe {
        #[arg(long)]
        alphabet: String,
        #[arg(long, value_enum)]
        kind: UniverseKind,
        #[arg(long, default_value_t = 3)]
        max_points: usize,
    },
    /// All labeled spaces of a kind.
    Enumerate {
        #[arg(long)]
        alphabet: String,
        /// Exact number of points.
        #[arg(long, conflicts_with = "max_points")]
        points: Option<usize>,
        /// All sizes from 1 to this bound.
        #[arg(long)]
        max_points: Option<usize>,
        #[arg(long, value_enum)]
        kind: EnumKind,
    },
    /// Run one of the verification checks.
    Verify {
        /// l1, th1, th2, pr10, t24, si, mainth, mainth-u, ex10, dis, submonoid
        check: String,
        #[arg(long, default_value = "0,1,2")]
        alphabet: String,
        #[arg(long)]
        max_points: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// ex10 only: scan every family instead of every space.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Search families of metrics for a given preservation set.
    Explore {
        #[arg(long)]
        functions: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_points: usize,
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_function(path: &Path) -> Result<GridFunction> {
    json::from_str::<FunctionJson, _>(&read(path)?)
}

fn load_space(path: &Path) -> Result<DistanceMatrix> {
    json::from_str::<SpaceJson, _>(&read(path)?)
}

fn load_family(path: &Path) -> Result<SpaceFamily> {
    json::from_str::<FamilyJson, _>(&read(path)?)
}

fn load_functions(path: &Path) -> Result<FunctionSet> {
    json::from_str::<FunctionSetJson, _>(&read(path)?)
}

/// Function from a table of rational images over `alphabet`.
pub fn table_function(alphabet: &DistanceAlphabet, table: &str) -> Result<GridFunction> {
    let images = parse_rationals(table)?
        .into_iter()
        .map(|r| {
            alphabet
                .index_of_rational(r)
                .ok_or_else(|| Error::ImageOutsideAlphabet(r.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    GridFunction::from_indices(alphabet.clone(), images)
}

fn usage(msg: &str) -> Error {
    Error::InvalidParameter(msg.to_string())
}

fn function_arg(
    alphabet: Option<&DistanceAlphabet>,
    table: Option<&str>,
    file: Option<&Path>,
) -> Result<GridFunction> {
    match (file, alphabet, table) {
        (Some(path), _, None) => {
            let f = load_function(path)?;
            if alphabet.is_some_and(|a| a != f.alphabet()) {
                return Err(Error::AlphabetMismatch);
            }
            Ok(f)
        }
        (None, Some(a), Some(t)) => table_function(a, t),
        _ => Err(usage("give either --function FILE or an alphabet and --table")),
    }
}

/// Executes a parsed command and returns the exit code and JSON document.
pub fn execute(cli: &Cli) -> Result<(i32, Value)> {
    let ok = |v: Value| Ok((EXIT_OK, v));
    match &cli.command {
        Command::CheckFunction {
            alphabet,
            table,
            function,
            predicate,
            max_points,
        } => {
            let a = alphabet.as_deref().map(DistanceAlphabet::parse).transpose()?;
            let f = function_arg(a.as_ref(), table.as_deref(), function.as_deref())?;
            let universe = |kind| -> Result<bool> {
                let u = PreservationUniverse::new(f.alphabet().clone(), *max_points, kind)?;
                Ok(compute_p_universe(&u)?.contains(&f))
            };
            let result = match predicate {
                FunctionPredicate::Amenable => f.is_amenable(),
                FunctionPredicate::Increasing => f.is_increasing(),
                FunctionPredicate::Subadditive => f.is_subadditive_on_grid(),
                FunctionPredicate::TriangleTriplet => f.is_triangle_triplet_preserving(),
                FunctionPredicate::F0 => f.fixes_zero(),
                FunctionPredicate::MetricPreserving => universe(PreservedKind::Metric)?,
                FunctionPredicate::UltrametricPreserving => universe(PreservedKind::Ultrametric)?,
            };
            ok(json!({ "result": result }))
        }
        Command::CheckSpace { space, predicate } => {
            let m = load_space(space)?;
            let three = || m.all_three_point_subspaces_discrete();
            match predicate {
                Some(SpacePredicate::Metric) => ok(json!({ "result": m.is_metric() })),
                Some(SpacePredicate::Ultrametric) => ok(json!({ "result": m.is_ultrametric() })),
                Some(SpacePredicate::Discrete) => ok(json!({ "result": m.is_discrete() })),
                Some(SpacePredicate::ThreePointDiscrete) => ok(json!({ "result": three()? })),
                None => ok(json!({
                    "metric": m.is_metric(),
                    "ultrametric": m.is_ultrametric(),
                    "discrete": m.is_discrete(),
                    "three_point_discrete": three().ok(),
                    "distance_set": m.distance_set(),
                })),
            }
        }
        Command::Transform {
            space,
            function,
            table,
        } => {
            let m = load_space(space)?;
            let f = function_arg(Some(m.alphabet()), table.as_deref(), function.as_deref())?;
            ok(space_value(&m.transform(&f)?))
        }
        Command::Closure {
            functions,
            alphabet,
            table,
        } => {
            let set = match (functions, alphabet) {
                (Some(path), None) if table.is_empty() => load_functions(path)?,
                (None, Some(a)) => {
                    let a = DistanceAlphabet::parse(a)?;
                    let fs = table
                        .iter()
                        .map(|t| table_function(&a, t))
                        .collect::<Result<Vec<_>>>()?;
                    FunctionSet::from_functions(a, fs)?
                }
                _ => return Err(usage("give either --functions FILE or --alphabet with --table")),
            };
            ok(function_set_value(&monoid_closure(&set)))
        }
        Command::Pfx { family } => ok(function_set_value(&compute_p_x(&load_family(family)?)?)),
        Command::Construct { functions, space } => {
            let set = load_functions(functions)?;
            let base = match space {
                Some(p) => load_space(p)?,
                None => delhomme_space(set.alphabet()),
            };
            ok(family_value(&mainth_construction(&set, &base)?))
        }
        Command::Universe {
            alphabet,
            kind,
            max_points,
        } => {
            let a = DistanceAlphabet::parse(alphabet)?;
            let set = match kind {
                UniverseKind::Metric => compute_p_universe(&PreservationUniverse::new(
                    a,
                    *max_points,
                    PreservedKind::Metric,
                )?)?,
                UniverseKind::Ultrametric => compute_p_universe(&PreservationUniverse::new(
                    a,
                    *max_points,
                    PreservedKind::Ultrametric,
                )?)?,
                UniverseKind::Si => compute_si(&a)?,
                UniverseKind::F0 => compute_f0(&a)?,
                UniverseKind::Am => compute_am(&a)?,
                UniverseKind::All => all_endofunctions(&a)?,
            };
            ok(function_set_value(&set))
        }
        Command::Enumerate {
            alphabet,
            points,
            max_points,
            kind,
        } => {
            let a = DistanceAlphabet::parse(alphabet)?;
            let kind = match kind {
                EnumKind::Metric => SpaceKind::Metric,
                EnumKind::Ultrametric => SpaceKind::Ultrametric,
                EnumKind::Discrete => SpaceKind::Discrete,
                EnumKind::Raw => SpaceKind::Raw,
            };
            let family = match (points, max_points) {
                (Some(n), None) => enumerate_spaces(&a, *n, kind)?,
                (None, Some(n)) => enumerate_spaces_up_to(&a, *n, kind)?,
                _ => return Err(usage("give --points or --max-points")),
            };
            ok(family_value(&family))
        }
        Command::Verify {
            check,
            alphabet,
            max_points,
            trials,
            seed,
            exhaustive,
        } => {
            let mut params = CheckParams::new(DistanceAlphabet::parse(alphabet)?);
            params.max_points = *max_points;
            params.trials = *trials;
            params.seed = *seed;
            params.exhaustive = *exhaustive;
            let report = run_check(check, &params)?;
            let code = if report.status == Status::Falsified {
                EXIT_FALSIFIED
            } else {
                EXIT_OK
            };
            Ok((code, json::to_value(&report)))
        }
        Command::Explore {
            functions,
            max_points,
            budget,
        } => {
            let target = load_functions(functions)?;
            if !is_submonoid(&target) {
                return Err(Error::NotSubmonoid("target must contain the identity and be closed".into()));
            }
            let report = explore_conjecture1(target.alphabet(), &target, *max_points, *budget)?;
            let code = if report.status == Status::Falsified {
                EXIT_FALSIFIED
            } else {
                EXIT_OK
            };
            Ok((code, json::to_value(&report)))
        }
    }
}

fn error_document(kind: &str, message: String) -> Value {
    json!({ "error": { "kind": kind, "message": message } })
}

/// Parses `args` (program name first), runs the command and renders the
/// output document. Never panics on bad input.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (EXIT_OK, e.to_string());
            }
            let doc = error_document("usage", e.render().to_string());
            return (EXIT_ERROR, render(&doc));
        }
    };
    let (code, doc) = match execute(&cli) {
        Ok(out) => out,
        Err(e) => (EXIT_ERROR, error_document("input", e.to_string())),
    };
    let text = render(&doc);
    if let Some(path) = &cli.output {
        if let Err(e) = fs::write(path, format!("{text}\n")) {
            let doc = error_document("io", format!("{}: {e}", path.display()));
            return (EXIT_ERROR, render(&doc));
        }
    }
    (code, text)
}

fn render(doc: &Value) -> String {
    serde_json::to_string_pretty(doc).expect("json values always render")
}
