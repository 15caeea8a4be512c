//! Command-line interface: validation, maximization, feasibility, the
//! brute-force oracle, f↔h transforms, the built-in example suite, and
//! the sampling study, all with machine-readable JSON output.
//!
//! Exit codes: 0 success/feasible, 1 malformed input, 2 infeasible (or
//! failed verification), 3 oracle capacity exceeded.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde_json::{json, Value};

use crate::complex::TriComplex;
use crate::experiments::{reproduce_examples, sample_candidate_stats, StatsConfig, VertexMode};
use crate::flagvec::{f_to_h, h_to_f, int_from_json, int_to_json, FlagVector, HVector};
use crate::maximize::{is_feasible, maximize};
use crate::oracle::{brute_max, OracleError, OracleOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_CAP_EXCEEDED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "flag3",
    version,
    about = "Exact facet-count maximization and feasibility for flag f-vectors of 3-colored complexes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether a proposed flag f-vector is achievable, or verify a
    /// witness file against budgets.
    Check {
        #[command(flatten)]
        input: InstanceArgs,
        /// Verify a previously emitted witness JSON file instead of a
        /// proposal: recounts its facets and checks it against the
        /// budgets when given.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Include the full candidate ledger in the output.
        #[arg(long)]
        trace: bool,
    },
    /// Compute the maximum facet count, with witness and ledger.
    Max {
        #[command(flatten)]
        input: InstanceArgs,
        /// Include the full candidate ledger in the output.
        #[arg(long)]
        trace: bool,
        /// Expand explicit edge lists in the witness (subject to --cap).
        #[arg(long)]
        witness_edges: bool,
        /// Size cap for expanded edge lists and literal row lists.
        #[arg(long, default_value_t = crate::complex::DEFAULT_SERIALIZATION_CAP)]
        cap: u64,
    },
    /// Exhaustive brute-force maximization (desk-scale ground truth).
    Oracle {
        #[command(flatten)]
        input: InstanceArgs,
        /// Bound on the number of complexes the search may enumerate.
        #[arg(long, default_value_t = 100_000_000)]
        cap: u64,
        /// Worker threads for the search.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Expand explicit edge lists in the witness.
        #[arg(long)]
        witness_edges: bool,
    },
    /// Convert a full flag f-vector to its flag h-vector, or back.
    Hvec {
        #[command(flatten)]
        input: InstanceArgs,
        /// Interpret the JSON input as an h-vector and convert to f.
        #[arg(long)]
        from_h: bool,
    },
    /// Run the built-in regression suite of known instances.
    Examples,
    /// Sample random instances and study the candidate counts.
    Stats {
        /// Number of instances to draw.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Edge budgets are uniform on [1, edge-max].
        #[arg(long = "edge-max", default_value_t = 1_000_000)]
        edge_max: u64,
        /// How vertex budgets are chosen.
        #[arg(long = "vertex-mode", value_enum, default_value_t = VertexModeArg::Ample)]
        vertex_mode: VertexModeArg,
        /// RNG seed; runs are reproducible bit-for-bit.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write one CSV row per instance to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VertexModeArg {
    Ample,
    Random,
}

#[derive(Args, Debug)]
pub struct InstanceArgs {
    /// Vertex budgets as "f1,f2,f3".
    #[arg(long = "f", value_name = "F1,F2,F3")]
    pub vertices: Option<String>,
    /// Edge budgets as "f12,f13,f23".
    #[arg(long = "e", value_name = "F12,F13,F23")]
    pub edges: Option<String>,
    /// Proposed facet count.
    #[arg(long)]
    pub f123: Option<String>,
    /// Read the instance from a JSON file with keys f1..f23 (and
    /// optionally f123) instead of inline flags.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

struct BadInput(String);

impl From<String> for BadInput {
    fn from(msg: String) -> Self {
        BadInput(msg)
    }
}

fn parse_triple(label: &str, text: &str) -> Result<[BigUint; 3], BadInput> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("--{label} expects three comma-separated values").into());
    }
    let mut out: [BigUint; 3] = Default::default();
    for (i, part) in parts.iter().enumerate() {
        out[i] = part
            .parse::<BigUint>()
            .map_err(|_| format!("--{label}: '{part}' is not a nonnegative integer"))?;
    }
    Ok(out)
}

fn read_json(path: &Path) -> Result<Value, BadInput> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| format!("{} is not valid JSON: {e}", path.display()).into())
}

impl InstanceArgs {
    fn to_flag_vector(&self) -> Result<FlagVector, BadInput> {
        let mut fv = if let Some(path) = &self.json {
            let value = read_json(path)?;
            FlagVector::from_json(&value).map_err(|e| e.to_string())?
        } else {
            let vertices = self
                .vertices
                .as_deref()
                .ok_or_else(|| "missing --f (or --json)".to_string())?;
            let edges = self
                .edges
                .as_deref()
                .ok_or_else(|| "missing --e (or --json)".to_string())?;
            FlagVector::new(parse_triple("f", vertices)?, parse_triple("e", edges)?)
        };
        if let Some(f123) = &self.f123 {
            let value = f123
                .parse::<BigUint>()
                .map_err(|_| format!("--f123: '{f123}' is not a nonnegative integer"))?;
            fv = fv.with_facets(value);
        }
        Ok(fv)
    }

    fn raw_json(&self) -> Result<Option<Value>, BadInput> {
        self.json.as_deref().map(read_json).transpose()
    }
}

fn emit(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn emit_error(code: i32, message: &str) -> i32 {
    emit(&json!({ "error": message }));
    code
}

/// Runs one parsed invocation and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match run_inner(cli) {
        Ok(code) => code,
        Err(BadInput(msg)) => emit_error(EXIT_BAD_INPUT, &msg),
    }
}

fn run_inner(cli: Cli) -> Result<i32, BadInput> {
    match cli.command {
        Command::Max {
            input,
            trace,
            witness_edges,
            cap,
        } => {
            let fv = input.to_flag_vector()?;
            match maximize(&fv) {
                Ok(result) => {
                    let edge_cap = witness_edges.then_some(cap);
                    emit(&result.to_json(trace, edge_cap));
                    Ok(EXIT_OK)
                }
                Err(e) => Ok(emit_error(EXIT_INFEASIBLE, &e.to_string())),
            }
        }
        Command::Check {
            input,
            witness,
            trace,
        } => {
            match witness {
                Some(path) => check_witness(&input, &path),
                None => {
                    let fv = input.to_flag_vector()?;
                    if fv.facets().is_none() {
                        return Err("check needs a proposed facet count: pass --f123 (or \"f123\" in the JSON)"
                        .to_string()
                        .into());
                    }
                    let verdict = is_feasible(&fv).map_err(|e| e.to_string())?;
                    emit(&verdict.to_json(trace, None));
                    Ok(if verdict.feasible {
                        EXIT_OK
                    } else {
                        EXIT_INFEASIBLE
                    })
                }
            }
        }
        Command::Oracle {
            input,
            cap,
            workers,
            witness_edges,
        } => {
            let fv = input.to_flag_vector()?;
            let opts = OracleOptions { cap, workers };
            match brute_max(&fv, &opts) {
                Ok(result) => {
                    let edge_cap =
                        witness_edges.then_some(crate::complex::DEFAULT_SERIALIZATION_CAP);
                    emit(&json!({
                        "m": result.m.to_string(),
                        "examined": result.examined,
                        "witness": result.witness.to_json(edge_cap),
                    }));
                    Ok(EXIT_OK)
                }
                Err(e @ OracleError::InfeasibleEdges) => {
                    Ok(emit_error(EXIT_INFEASIBLE, &e.to_string()))
                }
                Err(e) => Ok(emit_error(EXIT_CAP_EXCEEDED, &e.to_string())),
            }
        }
        Command::Hvec { input, from_h } => {
            if from_h {
                let value = input
                    .raw_json()?
                    .ok_or_else(|| "hvec --from-h needs --json".to_string())?;
                let entries = subset_entries_from_json(&value, "h")?;
                let counts = h_to_f(&HVector { entries });
                emit(&subset_entries_to_json(&counts, "f"));
            } else {
                let entries = match input.raw_json()? {
                    Some(value) => subset_entries_from_json(&value, "f")?,
                    None => {
                        let fv = input.to_flag_vector()?;
                        fv.to_subset_counts().map_err(|e| e.to_string())?
                    }
                };
                let h = f_to_h(&entries);
                emit(&subset_entries_to_json(&h.entries, "h"));
            }
            Ok(EXIT_OK)
        }
        Command::Examples => {
            let results = reproduce_examples();
            let mut failures = 0;
            for result in &results {
                if result.passed() {
                    println!("PASS  {}", result.name);
                } else {
                    failures += 1;
                    println!("FAIL  {}", result.name);
                    for f in &result.failures {
                        println!("      {f}");
                    }
                }
            }
            println!(
                "{} of {} cases passed",
                results.len() - failures,
                results.len()
            );
            Ok(if failures == 0 {
                EXIT_OK
            } else {
                EXIT_INFEASIBLE
            })
        }
        Command::Stats {
            n,
            edge_max,
            vertex_mode,
            seed,
            csv,
        } => {
            if n == 0 || edge_max == 0 {
                return Err("stats needs --n >= 1 and --edge-max >= 1"
                    .to_string()
                    .into());
            }
            let mode = match vertex_mode {
                VertexModeArg::Ample => VertexMode::Ample,
                VertexModeArg::Random => VertexMode::Random,
            };
            let report = sample_candidate_stats(StatsConfig {
                samples: n,
                edge_max,
                mode,
                seed,
            });
            if let Some(path) = csv {
                fs::write(&path, report.to_csv())
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            emit(&json!({
                "samples": report.config.samples,
                "edge_max": report.config.edge_max,
                "vertex_mode": format!("{:?}", report.config.mode).to_lowercase(),
                "seed": report.config.seed,
                "mean_candidates": report.mean_candidates(),
                "max_candidates": report.max_candidates,
                "bound_violations": report.bound_violations,
                "infeasible_instances": report.infeasible_instances,
            }));
            Ok(if report.bound_violations == 0 {
                EXIT_OK
            } else {
                EXIT_INFEASIBLE
            })
        }
    }
}

fn check_witness(input: &InstanceArgs, path: &Path) -> Result<i32, BadInput> {
    let value = read_json(path)?;
    let witness = TriComplex::from_json(&value).map_err(|e| e.to_string())?;
    let recounted = witness.facet_count();
    let declared = value
        .get("facets")
        .map(|v| crate::flagvec::uint_from_json("facets", v))
        .transpose()
        .map_err(|e| e.to_string())?;
    let matches_declared = declared.as_ref().is_none_or(|d| *d == recounted);

    let mut obj = serde_json::Map::new();
    obj.insert("facets".into(), json!(recounted.to_string()));
    if let Some(d) = &declared {
        obj.insert("declared_facets".into(), json!(d.to_string()));
        obj.insert("matches_declared".into(), json!(matches_declared));
    }
    obj.insert("color_shifted".into(), json!(witness.is_color_shifted()));
    let mut ok = matches_declared && witness.is_color_shifted();
    if input.vertices.is_some() || input.json.is_some() {
        let fv = input.to_flag_vector()?;
        let within = witness.within_budget(&fv);
        obj.insert("within_budget".into(), json!(within));
        ok &= within;
    }
    emit(&Value::Object(obj));
    Ok(if ok { EXIT_OK } else { EXIT_INFEASIBLE })
}

const SUBSET_KEYS: [(&str, usize); 8] = [
    ("empty", 0b000),
    ("1", 0b001),
    ("2", 0b010),
    ("3", 0b100),
    ("12", 0b011),
    ("13", 0b101),
    ("23", 0b110),
    ("123", 0b111),
];

fn subset_entries_from_json(value: &Value, prefix: &str) -> Result<[BigInt; 8], BadInput> {
    let obj = value
        .as_object()
        .ok_or_else(|| format!("expected a JSON object of {prefix}-entries"))?;
    let mut entries: [BigInt; 8] = Default::default();
    entries[0] = BigInt::one();
    for (suffix, mask) in SUBSET_KEYS {
        let key = if suffix == "empty" {
            format!("{prefix}_empty")
        } else {
            format!("{prefix}{suffix}")
        };
        match obj.get(&key) {
            Some(v) => entries[mask] = int_from_json(&key, v).map_err(|e| e.to_string())?,
            None if suffix == "empty" => {}
            None => return Err(format!("missing entry {key}").into()),
        }
    }
    Ok(entries)
}

fn subset_entries_to_json(entries: &[BigInt; 8], prefix: &str) -> Value {
    let mut obj = serde_json::Map::new();
    for (suffix, mask) in SUBSET_KEYS {
        let key = if suffix == "empty" {
            format!("{prefix}_empty")
        } else {
            format!("{prefix}{suffix}")
        };
        obj.insert(key, int_to_json(&entries[mask]));
    }
    Value::Object(obj)
}
