//! Command-line front end: reads data files, dispatches to the solvers and
//! writes JSON.

pub mod input;
pub mod render;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed, Zero};
use rankopt::arrangement::{zeta, Arrangement, Cell, Hyperplane};
use rankopt::ccc_solver::{minimize_ccc, CccOptions, CccOutcome, CccSolution};
use rankopt::ellipsoid_oracle::OracleConfig;
use rankopt::gen_solver::{minimize_gen, minimize_gen_bruteforce, GenOptions, GenOutcome, GenSolution};
use rankopt::model::{score_coefficients, DEFAULT_SCORE_PRECISION};
use rankopt::reference::brute_vertices;
use rankopt::{CoefficientOracle, CoreError, Dataset, Rational, ScoreKind};
use serde_json::{json, Value};

use input::{parse_dataset, CoefficientTable};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Core(e) => match e {
                CoreError::DuplicateRow { .. }
                | CoreError::DimensionMismatch(_)
                | CoreError::EmptyScores
                | CoreError::NotMonotone
                | CoreError::PermutationLimitExceeded { .. }
                | CoreError::Oracle(_) => 2,
                _ => 3,
            },
            CliError::Io(_) => 3,
        }
    }
}

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Minimum,
    Unbounded,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Minimum => 0,
            Status::Unbounded => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rankopt", version, about = "Exact minimization of rank-based regression criteria")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize the criterion over β.
    Fit(FitArgs),
    /// List the cells of the residual-order arrangement.
    Cells(CellsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Ccc,
    Gen,
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Score {
    Sign,
    Wilcoxon,
    Vdw,
}

impl From<Score> for ScoreKind {
    fn from(s: Score) -> Self {
        match s {
            Score::Sign => ScoreKind::Sign,
            Score::Wilcoxon => ScoreKind::Wilcoxon,
            Score::Vdw => ScoreKind::VanDerWaerden,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Indented JSON object.
    Json,
    /// One JSON object per line.
    Compact,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Data file: y in the first column, regressors after it.
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Ccc)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = Score::Wilcoxon)]
    pub score: Score,
    /// Permutation-keyed coefficient table (gen and brute only).
    #[arg(long, value_name = "FILE")]
    pub coeffs: Option<PathBuf>,
    /// Bits for score rationalization and the ellipsoid mantissa floor.
    #[arg(long, value_name = "BITS", default_value_t = DEFAULT_SCORE_PRECISION)]
    pub precision: u32,
    /// Try a reduced bit bound first; falls back when it cannot certify.
    #[arg(long)]
    pub fast: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub output: Format,
}

#[derive(Debug, Args)]
pub struct CellsArgs {
    pub data: PathBuf,
    /// Also emit hyperplane segments clipped to a bounding box (p = 2 only).
    #[arg(long)]
    pub plot2d: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Status, CliError> {
    match &cli.command {
        Command::Fit(args) => fit(args, out),
        Command::Cells(args) => cells(args, out),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Dataset, CliError> {
    let d = parse_dataset(&read(path)?)?;
    d.validate()?;
    Ok(d)
}

fn emit(out: &mut dyn Write, value: &Value, format: Format) -> Result<(), CliError> {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(value),
        Format::Compact => serde_json::to_string(value),
    }
    .expect("serializable");
    writeln!(out, "{text}")?;
    Ok(())
}

pub fn fit(args: &FitArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    let data = load(&args.data)?;
    let table = match &args.coeffs {
        Some(path) => {
            if args.method == Method::Ccc {
                return Err(CliError::Input("--coeffs needs --method gen or brute".into()));
            }
            Some(CoefficientTable::parse(&read(path)?, data.n())?)
        }
        None => None,
    };
    let scores = match table {
        Some(_) => None,
        None => Some(score_coefficients(args.score.into(), data.n(), args.precision)?),
    };
    let mut result = json!({
        "method": format!("{:?}", args.method).to_lowercase(),
        "n": data.n(),
        "p": data.p(),
    });
    if let Some(a) = &scores {
        result["score"] = json!(format!("{:?}", args.score).to_lowercase());
        result["scores"] = render::vector(a.values());
    }
    let status = match args.method {
        Method::Ccc => {
            let a = scores.as_ref().expect("scores without a table");
            let options = CccOptions {
                oracle: OracleConfig {
                    min_precision: args.precision as usize,
                    ..OracleConfig::default()
                },
                fast: args.fast,
                ..CccOptions::default()
            };
            ccc_result(&minimize_ccc(&data, a, &options)?, &mut result)
        }
        Method::Gen | Method::Brute => {
            let oracle: &dyn CoefficientOracle = match (&table, &scores) {
                (Some(t), _) => t,
                (None, Some(a)) => a,
                (None, None) => unreachable!("either a table or scores"),
            };
            let options = GenOptions {
                seed: args.seed,
                ..GenOptions::default()
            };
            let sol = if args.method == Method::Gen {
                minimize_gen(&data, oracle, &options)?
            } else {
                minimize_gen_bruteforce(&data, oracle, &options)?
            };
            gen_result(&sol, &mut result)
        }
    };
    emit(out, &result, args.output)?;
    Ok(status)
}

fn ccc_result(sol: &CccSolution, result: &mut Value) -> Status {
    let s = &sol.stats;
    result["statistics"] = json!({
        "oracle_calls": s.oracle_calls,
        "bisection_steps": s.bisection_steps,
        "ellipsoid_cuts": s.ellipsoid_cuts,
        "precision_retries": s.precision_retries,
        "face_shortcuts": s.face_shortcuts,
        "fast_mode": s.fast_mode,
        "fell_back": s.fell_back,
    });
    let b = &sol.bounds;
    result["bounds"] = json!({"l": b.l, "q": b.q, "q1": b.q1, "q2": b.q2, "q3": b.q3});
    match &sol.outcome {
        CccOutcome::Unbounded => {
            result["status"] = json!("unbounded");
            Status::Unbounded
        }
        CccOutcome::Minimum {
            t0,
            beta0,
            face_w,
            face_z,
            face_pairs,
        } => {
            result["status"] = json!("minimum");
            result["t0"] = render::rational(t0);
            result["beta0"] = render::vector(beta0);
            result["face"] = face_pairs
                .iter()
                .zip(face_w.iter().zip(face_z))
                .map(|(&pair, (w, z))| json!({"pair": render::pair(pair), "w": render::vector(w), "z": render::rational(z)}))
                .collect();
            Status::Minimum
        }
    }
}

fn gen_result(sol: &GenSolution, result: &mut Value) -> Status {
    result["statistics"] = json!({
        "cells": sol.stats.cells,
        "cell_lps": sol.stats.cell_lps,
        "enumeration_lps": sol.stats.enumeration_lps,
    });
    match &sol.outcome {
        GenOutcome::Unbounded { cell } => {
            result["status"] = json!("unbounded");
            result["cell"] = render::indices(cell);
            Status::Unbounded
        }
        GenOutcome::Minimum { value, minimizer, cell } => {
            result["status"] = json!("minimum");
            result["t0"] = render::rational(value);
            result["beta0"] = render::vector(minimizer);
            result["cell"] = render::indices(cell);
            Status::Minimum
        }
    }
}

pub fn cells(args: &CellsArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    let data = load(&args.data)?;
    if args.plot2d && data.p() != 2 {
        return Err(CliError::Input(format!("--plot2d needs p = 2, data has p = {}", data.p())));
    }
    let arr = Arrangement::new(&data);
    let mut failure: Option<CliError> = None;
    let mut witnesses: Vec<Vec<Rational>> = Vec::new();
    let mut sink = |cell: &Cell| {
        if failure.is_some() {
            return;
        }
        let mut neighbours = 0;
        for pair in arr.candidate_tight_pairs(&cell.perm) {
            match arr.tightness_test(cell, pair) {
                Ok(t) if t.is_tight() => neighbours += 1,
                Ok(_) => {}
                Err(e) => {
                    failure = Some(e.into());
                    return;
                }
            }
        }
        let record = json!({
            "permutation": render::indices(&cell.perm),
            "witness": render::vector(&cell.witness),
            "neighbors": neighbours,
        });
        if let Err(e) = emit(out, &record, Format::Compact) {
            failure = Some(e);
        }
        if args.plot2d {
            witnesses.push(cell.witness.clone());
        }
    };
    let stats = arr.enumerate_cells(args.seed, &mut sink)?;
    if let Some(e) = failure {
        return Err(e);
    }
    if args.plot2d {
        for segment in segments(&arr, &witnesses) {
            emit(out, &segment, Format::Compact)?;
        }
    }
    let redundant: Vec<Value> = arr.redundant().iter().map(|&pair| render::pair(pair)).collect();
    let summary = json!({
        "statistics": {
            "cells": stats.cells,
            "lps": stats.lps,
            "max_depth": stats.max_depth,
            "max_tight_per_cell": stats.max_tight_per_cell,
            "hyperplanes": arr.distinct_count(),
            "redundant": redundant,
            "cell_bound": zeta(arr.distinct_count() as u64, data.p() as u64).to_string(),
        }
    });
    emit(out, &summary, Format::Compact)?;
    Ok(Status::Minimum)
}

/// A point on the line `normal·β = offset`.
fn anchor(h: &Hyperplane) -> Vec<Rational> {
    let zero = Rational::zero();
    if !h.normal[1].is_zero() {
        vec![zero, &h.offset / &h.normal[1]]
    } else {
        vec![&h.offset / &h.normal[0], zero]
    }
}

/// Each distinct line clipped to the square `[-B, B]²`, where `B` exceeds
/// every vertex, every witness and one point of every line.
fn segments(arr: &Arrangement, witnesses: &[Vec<Rational>]) -> Vec<Value> {
    let planes: Vec<&Hyperplane> = arr.distinct_hyperplanes().collect();
    let anchors: Vec<Vec<Rational>> = planes.iter().map(|h| anchor(h)).collect();
    let vertices = brute_vertices(arr.data());
    let one = Rational::one();
    let half_width = vertices
        .iter()
        .chain(witnesses)
        .chain(&anchors)
        .flatten()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(|| one.clone())
        .ceil()
        + &one;
    let mut out = vec![json!({"box": render::rational(&half_width)})];
    for h in planes {
        if let Some((from, to)) = clip(h, &half_width) {
            out.push(json!({
                "segment": {
                    "pair": render::pair((h.i, h.j)),
                    "from": render::vector(&from),
                    "to": render::vector(&to),
                }
            }));
        }
    }
    out
}

fn clip(h: &Hyperplane, b: &Rational) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let (a0, a1, c) = (&h.normal[0], &h.normal[1], &h.offset);
    let mut hits: Vec<Vec<Rational>> = Vec::new();
    for s in [-b.clone(), b.clone()] {
        // vertical edges β0 = s, horizontal edges β1 = s
        if !a1.is_zero() {
            let v = (c - a0 * &s) / a1;
            if v.abs() <= *b {
                hits.push(vec![s.clone(), v]);
            }
        }
        if !a0.is_zero() {
            let v = (c - a1 * &s) / a0;
            if v.abs() <= *b {
                hits.push(vec![v, s.clone()]);
            }
        }
    }
    hits.sort();
    hits.dedup();
    match (hits.first(), hits.last()) {
        (Some(from), Some(to)) if from != to => Some((from.clone(), to.clone())),
        _ => None,
    }
}
