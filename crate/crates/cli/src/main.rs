//! `mapvir` command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mapvir::algebra::Algebra;
use mapvir::classify::{classify_module, trichotomy_profile, Descriptor, Orientation};
use mapvir::evalmod::{annihilator_support, weight_multiplicities, ModuleHandle};
use mapvir::expr::parse_lie_element;
use mapvir::io;
use mapvir::liealg::{bracket, set_mode_max};
use mapvir::pbw::{colors, height_hm, pbw_basis, Straightener};
use mapvir::verma::{check_quasifinite, check_verma_reducible, split_phi, verma_dims, Functional, VermaModule};
use mapvir::{selftest, Error, Result};

#[derive(Parser)]
#[command(name = "mapvir", version, about = "Exact computations for map Virasoro algebras Vir ⊗ A")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format. `bracket` and `verma` dimension lists default to plain
    /// text, everything else to JSON.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Seed recorded in reports and used by randomized suites.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args, Clone)]
struct AlgebraArg {
    /// Algebra spec file (JSON); defaults to A = Q.
    #[arg(short = 'A', long = "algebra")]
    algebra: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Bracket of two Lie expressions, e.g. "d[2]*1" "d[-2]*1".
    Bracket {
        #[command(flatten)]
        alg: AlgebraArg,
        x: String,
        y: String,
    },
    /// PBW basis of U(V_-) at a depth, or straightening of a word.
    Pbw {
        #[command(flatten)]
        alg: AlgebraArg,
        /// List the basis at depth -n.
        #[arg(long, conflicts_with = "straighten")]
        basis: bool,
        #[arg(short = 'n', long, default_value_t = 1)]
        depth: u32,
        /// Exponent window [lo,hi] of colors for windowed algebras, as "lo,hi".
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        colors: Option<(i64, i64)>,
        /// Straighten the product of these lowering elements (left to right).
        #[arg(long, num_args = 1.., allow_hyphen_values = true)]
        straighten: Vec<String>,
    },
    /// Graded dimensions, singular vectors and irreducible-quotient dimensions.
    Verma {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long)]
        phi: Option<PathBuf>,
        /// Dimensions of M(φ) at depths 0..=n.
        #[arg(long)]
        dims: bool,
        /// Singular vectors at depth n.
        #[arg(long)]
        singular: bool,
        /// Dimensions of V(φ) at depths 0..=n.
        #[arg(long)]
        quotient_dims: bool,
        #[arg(short = 'n', long, default_value_t = 4)]
        depth: u32,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        colors: Option<(i64, i64)>,
    },
    /// Quasifiniteness or Verma reducibility of a functional.
    Check {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long)]
        phi: PathBuf,
        #[arg(long, conflicts_with = "reducible")]
        quasifinite: bool,
        #[arg(long)]
        reducible: bool,
        /// Number of window values fed to recurrence detection.
        #[arg(long)]
        bound: Option<usize>,
        /// Treat the given sequences as the complete functional.
        #[arg(long)]
        assume_exact: bool,
    },
    /// Splits a functional over the local factors of A.
    Split {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long)]
        phi: PathBuf,
    },
    /// Weight table, annihilator/support and shape profile of a module.
    Module {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(short = 'M', long = "module")]
        module: PathBuf,
        /// Offsets "lo,hi" from the base weight.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true, default_value = "-5,5")]
        weights: (i64, i64),
        #[arg(long)]
        ann: bool,
        #[arg(long)]
        profile: bool,
    },
    /// Canonical decomposition of highest/lowest-weight or intermediate-series data.
    Classify {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long, conflicts_with = "module")]
        phi: Option<PathBuf>,
        /// Intermediate-series evaluation module spec.
        #[arg(short = 'M', long = "module")]
        module: Option<PathBuf>,
        /// The functional describes a lowest-weight module.
        #[arg(long)]
        lowest: bool,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        assume_exact: bool,
        /// Include witness ideals and idempotents.
        #[arg(long)]
        explain: bool,
    },
    /// Runs the seeded invariant suites.
    Selftest {
        /// Restrict to these suites.
        #[arg(long)]
        suite: Vec<String>,
    },
}

fn parse_window(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected \"lo,hi\", got {s:?}"))?;
    let lo = a.trim().parse().map_err(|_| format!("bad integer {a:?}"))?;
    let hi = b.trim().parse().map_err(|_| format!("bad integer {b:?}"))?;
    if lo > hi {
        return Err(format!("empty window {lo},{hi}"));
    }
    Ok((lo, hi))
}

fn read(path: &Path, what: &str) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{what} file {}: {e}", path.display())))?;
    io::parse_json(&text, &format!("{what} file {}", path.display()))
}

fn load_algebra(a: &AlgebraArg) -> Result<Arc<Algebra>> {
    match &a.algebra {
        Some(p) => io::algebra_from_json(&read(p, "algebra")?),
        None => Ok(Algebra::rationals()),
    }
}

fn load_phi(path: &Path, alg: &Arc<Algebra>) -> Result<Functional> {
    io::functional_from_json(&read(path, "functional")?, alg)
}

/// Default recurrence bound: the whole window.
fn bound_for(alg: &Algebra, bound: Option<usize>) -> usize {
    bound.unwrap_or(alg.dim().saturating_sub(1))
}

enum Report {
    Json(Value),
    Text(String),
}

fn with_metadata(mut v: Value, alg: &Algebra, seed: u64) -> Value {
    let mut meta = io::metadata(alg);
    meta["seed"] = json!(seed);
    if let Value::Object(m) = &mut v {
        m.insert("metadata".into(), meta);
        v
    } else {
        json!({ "result": v, "metadata": meta })
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let seed = cli.seed;
    match &cli.command {
        Command::Bracket { alg, x, y } => {
            let alg = load_algebra(alg)?;
            let b = bracket(&parse_lie_element(x, &alg)?, &parse_lie_element(y, &alg)?)?;
            Ok(match cli.format {
                Some(Format::Json) => Report::Json(with_metadata(json!({ "bracket": b.to_string() }), &alg, seed)),
                _ => Report::Text(b.to_string()),
            })
        }
        Command::Pbw { alg, basis, depth, colors: window, straighten } => {
            let alg = load_algebra(alg)?;
            if !straighten.is_empty() {
                let word = straighten.iter().map(|s| parse_lie_element(s, &alg)).collect::<Result<Vec<_>>>()?;
                let st = Straightener::new(&alg);
                let out = st.straighten(&word)?;
                let (h, hm) = height_hm(&out);
                return Ok(Report::Json(with_metadata(
                    json!({
                        "straightened": out.display(&alg),
                        "height": h,
                        "hm": hm.display(&alg),
                    }),
                    &alg,
                    seed,
                )));
            }
            if !basis {
                return Err(Error::Parse("pbw: pass --basis or --straighten".into()));
            }
            let cols = colors(&alg, *window)?;
            let monos: Vec<String> = pbw_basis(*depth, &cols).iter().map(|m| m.display(&alg)).collect();
            Ok(match cli.format {
                Some(Format::Tsv) => Report::Text(monos.join("\n")),
                _ => Report::Json(with_metadata(json!({ "depth": depth, "basis": monos }), &alg, seed)),
            })
        }
        Command::Verma { alg, phi, dims, singular, quotient_dims, depth, colors: window } => {
            let alg = load_algebra(alg)?;
            let cols = colors(&alg, *window)?;
            if *dims {
                let d = verma_dims(*depth, &cols);
                let line = d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
                return Ok(match cli.format {
                    Some(Format::Json) => Report::Json(with_metadata(json!({ "dims": d }), &alg, seed)),
                    _ => Report::Text(line),
                });
            }
            let phi = match phi {
                Some(p) => load_phi(p, &alg)?,
                None => return Err(Error::InvalidFunctional("--phi is required for --singular/--quotient-dims".into())),
            };
            let m = VermaModule::new(&phi);
            if *singular {
                let vs: Vec<String> =
                    m.singular_vectors(*depth, &cols)?.iter().map(|v| format!("({})·v", v.display(&alg))).collect();
                return Ok(Report::Json(with_metadata(json!({ "depth": depth, "singular_vectors": vs }), &alg, seed)));
            }
            if *quotient_dims {
                let d = m.quotient_dims(*depth, &cols)?;
                let line = d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
                return Ok(match cli.format {
                    Some(Format::Json) => Report::Json(with_metadata(
                        json!({ "quotient_dims": d, "truncated": !alg.is_finite() }),
                        &alg,
                        seed,
                    )),
                    _ => Report::Text(line),
                });
            }
            Err(Error::Parse("verma: pass --dims, --singular or --quotient-dims".into()))
        }
        Command::Check { alg, phi, quasifinite, reducible, bound, assume_exact } => {
            let alg = load_algebra(alg)?;
            let phi = load_phi(phi, &alg)?;
            let bound = bound_for(&alg, *bound);
            let v = if *reducible {
                io::reducibility_json(&check_verma_reducible(&phi, bound, *assume_exact)?, &alg)
            } else if *quasifinite {
                io::quasifinite_json(&check_quasifinite(&phi, bound, *assume_exact))
            } else {
                return Err(Error::Parse("check: pass --quasifinite or --reducible".into()));
            };
            Ok(Report::Json(with_metadata(v, &alg, seed)))
        }
        Command::Split { alg, phi } => {
            let alg = load_algebra(alg)?;
            let phi = load_phi(phi, &alg)?;
            let parts = split_phi(&phi)?;
            Ok(Report::Json(with_metadata(json!({ "components": io::split_json(&parts) }), &alg, seed)))
        }
        Command::Module { alg, module, weights, ann, profile } => {
            let alg = load_algebra(alg)?;
            let handle = io::module_from_json(&read(module, "module")?, &alg)?;
            if *ann {
                return Ok(Report::Json(with_metadata(io::ann_support_json(&annihilator_support(&handle)?), &alg, seed)));
            }
            if *profile {
                return Ok(Report::Json(with_metadata(io::profile_json(&trichotomy_profile(&handle, *weights)?), &alg, seed)));
            }
            let table = weight_multiplicities(&handle, *weights)?;
            Ok(match cli.format {
                Some(Format::Tsv) => Report::Text(io::weight_table_tsv(&table).trim_end().to_string()),
                _ => Report::Json(with_metadata(
                    json!({ "variant": handle.variant_name(), "weights": io::weight_table_json(&table) }),
                    &alg,
                    seed,
                )),
            })
        }
        Command::Classify { alg, phi, module, lowest, bound, assume_exact, explain } => {
            let alg = load_algebra(alg)?;
            let desc = match (phi, module) {
                (Some(p), None) => Descriptor::Functional {
                    phi: load_phi(p, &alg)?,
                    orientation: if *lowest { Orientation::Lowest } else { Orientation::Highest },
                    bound: bound_for(&alg, *bound),
                    assume_exact: *assume_exact,
                },
                (None, Some(m)) => match io::module_from_json(&read(m, "module")?, &alg)? {
                    ModuleHandle::IntSeriesEval { alg, spec, point } => Descriptor::IntSeries { alg, spec, point },
                    other => {
                        return Err(Error::InvalidModule(format!(
                            "classify takes an int_series_eval module, got {}",
                            other.variant_name()
                        )))
                    }
                },
                _ => return Err(Error::Parse("classify: pass exactly one of --phi or --module".into())),
            };
            let rec = classify_module(&desc)?;
            Ok(Report::Json(with_metadata(io::classification_json(&rec, *explain), &alg, seed)))
        }
        Command::Selftest { suite } => {
            let known = selftest::suite_names();
            for s in suite {
                if !known.contains(&s.as_str()) {
                    return Err(Error::Parse(format!("--suite: unknown suite {s:?}; known: {}", known.join(", "))));
                }
            }
            let names: Vec<&str> = suite.iter().map(String::as_str).collect();
            let results = selftest::run(seed, &names)?;
            let ok = results.iter().all(|r| r.passed());
            if cli.format == Some(Format::Tsv) {
                let mut rows = vec![vec!["suite".to_string(), "cases".into(), "status".into()]];
                for r in &results {
                    rows.push(vec![r.name.into(), r.cases.to_string(), if r.passed() { "pass" } else { "FAIL" }.into()]);
                }
                emit(io::aligned(&rows).trim_end());
            } else {
                let v = json!({
                    "seed": seed,
                    "passed": ok,
                    "suites": results.iter().map(|r| json!({
                        "name": r.name,
                        "cases": r.cases,
                        "passed": r.passed(),
                        "failures": r.failures,
                    })).collect::<Vec<_>>(),
                });
                emit(&serde_json::to_string_pretty(&v).expect("serializable"));
            }
            if ok {
                Ok(Report::Text(String::new()))
            } else {
                Err(Error::UnsupportedKind("self-test failures".into()))
            }
        }
    }
}

/// Top-level fields as `key<TAB>value` lines.
fn flatten_tsv(v: &Value) -> String {
    let Value::Object(m) = v else { return v.to_string() };
    let rows: Vec<Vec<String>> = m
        .iter()
        .filter(|(k, _)| k.as_str() != "metadata")
        .map(|(k, v)| {
            vec![
                k.clone(),
                match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                },
            ]
        })
        .collect();
    io::aligned(&rows).trim_end().to_string()
}

/// Writes a line to stdout; a closed pipe is not an error.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}");
}

/// Accepts the single-dash long form `-phi` as well.
fn normalize_args(args: impl Iterator<Item = String>) -> Vec<String> {
    args.map(|a| if a == "-phi" { "--phi".to_string() } else { a }).collect()
}

fn main() -> ExitCode {
    let args = normalize_args(std::env::args());
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(v) = std::env::var("MAPVIR_MODE_MAX") {
        match v.trim().parse::<i64>() {
            Ok(n) if n > 0 => set_mode_max(n),
            _ => {
                eprintln!("error: MAPVIR_MODE_MAX must be a positive integer, got {v:?}");
                return ExitCode::from(1);
            }
        }
    }
    match run(&cli) {
        Ok(Report::Text(s)) => {
            if !s.is_empty() {
                emit(&s);
            }
            ExitCode::SUCCESS
        }
        Ok(Report::Json(v)) => {
            match cli.format {
                Some(Format::Tsv) => emit(&flatten_tsv(&v)),
                _ => emit(&serde_json::to_string_pretty(&v).expect("serializable")),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Map;

    #[test]
    fn windows_parse() {
        assert_eq!(parse_window("-3,4"), Ok((-3, 4)));
        assert!(parse_window("4,3").is_err());
        assert!(parse_window("x").is_err());
    }

    #[test]
    fn single_dash_phi() {
        let a = normalize_args(["mapvir", "check", "-phi", "p.json"].iter().map(|s| s.to_string()));
        assert_eq!(a[2], "--phi");
    }

    #[test]
    fn tsv_flattening_skips_metadata() {
        let mut m = Map::new();
        m.insert("status".into(), json!("ok"));
        m.insert("metadata".into(), json!({}));
        assert_eq!(flatten_tsv(&Value::Object(m)), "status\tok");
    }
}
