//! `quiverreach`: reachability posets, path reduction, algebra and homology
//! invariants of quivers from the command line.
//!
//! Exit codes: 0 success or a true answer, 1 a false answer, 64 usage error,
//! 65 malformed input, 66 precondition violation or unreadable file.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quiverreach::algebra::{
    algebra_summary, hochschild_oracle_with, morita_equivalent, ORACLE_MAX_DEGREE,
};
use quiverreach::homology::{betti_with, nerve_betti_of_quiver, order_complex, poset_homology};
use quiverreach::persistence::{hh_betti_curves, parse_filtration};
use quiverreach::quiver::{diameter, is_acyclic, scc_partition, validate_morphism};
use quiverreach::reach::{map_poset, reachability_poset, t_quiver};
use quiverreach::reduction::{parse_order, path_reach_isomorphic, path_reduction, ReductionOrder};
use quiverreach::selftest::run_selftest;
use quiverreach::{parse_morphism, parse_quiver, Error, FieldSpec, Poset, Quiver};
use serde_json::{json, Value};

const SEED_VAR: &str = "QUIVERREACH_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "quiverreach",
    version,
    about = "Reachability structure of finite quivers"
)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Coefficient field: a prime below 100, or 0 for the rationals.
    #[arg(long, global = true, default_value = "2", value_parser = parse_field)]
    field: FieldSpec,
    /// Highest homology degree to report.
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    /// Reduction order: `lex`, or a file with one maximal simple path per line (edge ids).
    #[arg(long, global = true, default_value = "lex")]
    order: String,
    /// Drop the identity loops of T(Q).
    #[arg(long, global = true)]
    strip_loops: bool,
    /// Worker threads for `persist` (0 picks the number of cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Summary of a quiver: components, reachability poset, algebra and nerve.
    Analyze { file: PathBuf },
    /// Path reduction; prints the reduced quiver in QVR.
    Reduce {
        file: PathBuf,
        /// Write the reduction trace as JSON to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Whether the path and reachability categories coincide (exit 0/1).
    CheckIsoPathreach { file: PathBuf },
    /// The reachability poset R(Q) and the quotient map onto it.
    Poset { file: PathBuf },
    /// The quiver T(Q) underlying the reachability poset, in QVR.
    Tq { file: PathBuf },
    /// Commuting algebra dimensions, Hochschild numbers, global dimension.
    Algebra { file: PathBuf },
    /// Whether two commuting algebras are Morita equivalent (exit 0/1).
    Morita { first: PathBuf, second: PathBuf },
    /// Betti numbers of the nerve of the reachability category.
    Homology { file: PathBuf },
    /// Betti curves of a filtered quiver (FQVR); CSV by default.
    Persist {
        file: PathBuf,
        /// Emit a gnuplot script instead of CSV.
        #[arg(long)]
        gnuplot: bool,
    },
    /// Hochschild cohomology of R(Q) from the cochain complex, next to the nerve Betti numbers.
    Oracle { file: PathBuf },
    /// Randomized consistency checks; the seed comes from QUIVERREACH_SEED.
    Selftest {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Check that a map between two quivers is a morphism (exit 0/1).
    Morphism {
        source: PathBuf,
        target: PathBuf,
        map: PathBuf,
    },
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Parse(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 64,
            Failure::Parse(_) => 65,
            Failure::Precondition(_) => 66,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_parse() {
            Failure::Parse(e.to_string())
        } else {
            Failure::Precondition(e.to_string())
        }
    }
}

/// What a command hands back: the document for stdout and whether the
/// answer was true.
struct Output {
    text: String,
    answer: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, answer: true }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Precondition(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Quiver, Failure> {
    let text = read(path)?;
    parse_quiver(&text).map_err(|e| in_file(path, e))
}

fn in_file(path: &Path, e: Error) -> Failure {
    match Failure::from(e) {
        Failure::Parse(m) => Failure::Parse(format!("{}: {m}", path.display())),
        other => other,
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn strict_pairs(p: &Poset) -> Vec<[&str; 2]> {
    let n = p.len();
    (0..n)
        .flat_map(|a| {
            (0..n)
                .filter(move |&b| p.lt(a, b))
                .map(move |b| [p.elements[a].as_str(), p.elements[b].as_str()])
        })
        .collect()
}

fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn list(values: &[usize]) -> String {
    values
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Analyze { file } => {
            let q = load(file)?;
            let scc = scc_partition(&q);
            let r = reachability_poset(&q);
            let betti = nerve_betti_of_quiver(&q, cli.field, Some(cli.max_dim.unwrap_or(1)))?;
            let summary = algebra_summary(&q);
            let iso = path_reach_isomorphic(&q).map(|c| c.isomorphic).ok();
            let doc = json!({
                "vertices": q.vertex_count(),
                "edges": q.edge_count(),
                "scc_count": scc.len(),
                "acyclic": is_acyclic(&q),
                "commuting_dim": summary.dimension,
                "poset": { "elements": r.poset.elements, "relations": strict_pairs(&r.poset) },
                "diameter": diameter(&q),
                "betti": betti,
                "path_reach_isomorphic": iso,
            });
            if cli.json {
                return Ok(Output::ok(pretty(&doc)));
            }
            Ok(Output::ok(table(&[
                ("vertices", q.vertex_count().to_string()),
                ("edges", q.edge_count().to_string()),
                ("strong components", scc.len().to_string()),
                ("acyclic", is_acyclic(&q).to_string()),
                ("commuting dim", summary.dimension.to_string()),
                ("poset elements", r.poset.elements.join(" ")),
                (
                    "poset relations",
                    strict_pairs(&r.poset)
                        .iter()
                        .map(|[a, b]| format!("{a}<{b}"))
                        .collect::<Vec<_>>()
                        .join(" "),
                ),
                ("diameter", diameter(&q).to_string()),
                ("nerve betti", list(&betti)),
                (
                    "path = reach",
                    iso.map_or("n/a (disconnected)".into(), |b| b.to_string()),
                ),
            ])))
        }
        Command::Reduce { file, trace } => {
            let q = load(file)?;
            let order = if cli.order == "lex" {
                ReductionOrder::Lex
            } else {
                parse_order(&read(Path::new(&cli.order))?)
            };
            let (reduced, steps) = path_reduction(&q, &order)?;
            if let Some(path) = trace {
                fs::write(path, pretty(&steps))
                    .map_err(|e| Failure::Precondition(format!("{}: {e}", path.display())))?;
            }
            if cli.json {
                return Ok(Output::ok(pretty(&json!({
                    "quiver": reduced.to_json(),
                    "qvr": reduced.to_qvr(),
                    "trace": steps,
                }))));
            }
            Ok(Output::ok(reduced.to_qvr()))
        }
        Command::CheckIsoPathreach { file } => {
            let q = load(file)?;
            let check = path_reach_isomorphic(&q)?;
            let text = if cli.json {
                pretty(&check)
            } else if check.isomorphic {
                "isomorphic\n".to_string()
            } else {
                format!(
                    "not isomorphic: {}",
                    serde_json::to_string(&check.certificate).expect("serializable") + "\n"
                )
            };
            Ok(Output {
                text,
                answer: check.isomorphic,
            })
        }
        Command::Poset { file } => {
            let q = load(file)?;
            let r = reachability_poset(&q);
            let quotient = r.quotient_map(&q);
            if cli.json {
                return Ok(Output::ok(pretty(&json!({
                    "elements": r.poset.elements,
                    "relations": strict_pairs(&r.poset),
                    "quotient": quotient,
                }))));
            }
            let mut out = String::new();
            for [a, b] in strict_pairs(&r.poset) {
                out.push_str(&format!("{a} < {b}\n"));
            }
            for (v, c) in &quotient {
                out.push_str(&format!("{v} -> {c}\n"));
            }
            Ok(Output::ok(format!(
                "elements: {}\n{out}",
                r.poset.elements.join(" ")
            )))
        }
        Command::Tq { file } => {
            let t = t_quiver(&load(file)?, cli.strip_loops);
            Ok(Output::ok(if cli.json {
                pretty(&t.to_json())
            } else {
                t.to_qvr()
            }))
        }
        Command::Algebra { file } => {
            let s = algebra_summary(&load(file)?);
            if cli.json {
                return Ok(Output::ok(pretty(&s)));
            }
            let opt = |v: Option<String>| v.unwrap_or_else(|| "n/a".into());
            Ok(Output::ok(table(&[
                ("commuting dim", s.dimension.to_string()),
                ("incidence dim", s.incidence_dimension.to_string()),
                ("hh0", opt(s.hh0.as_ref().map(ToString::to_string))),
                ("hh1", opt(s.hh1.as_ref().map(ToString::to_string))),
                ("gldim upper bound", s.gldim_upper.to_string()),
                ("gldim is one", opt(s.gldim_is_one.map(|b| b.to_string()))),
                ("gldim", opt(s.gldim.exact.map(|g| g.to_string()))),
            ])))
        }
        Command::Morita { first, second } => {
            let witness = morita_equivalent(&load(first)?, &load(second)?);
            let text = if cli.json {
                pretty(&json!({ "equivalent": witness.is_some(), "witness": witness }))
            } else {
                match &witness {
                    Some(w) => w.iter().map(|(a, b)| format!("{a} -> {b}\n")).collect(),
                    None => "not equivalent\n".to_string(),
                }
            };
            Ok(Output {
                text,
                answer: witness.is_some(),
            })
        }
        Command::Homology { file } => {
            let p = reachability_poset(&load(file)?).poset;
            let report = poset_homology(&p, cli.field, cli.max_dim)?;
            if cli.json {
                return Ok(Output::ok(pretty(&report)));
            }
            Ok(Output::ok(table(&[
                ("betti", list(&report.betti)),
                ("f-vector", list(&report.f_vector)),
                ("euler", report.euler.to_string()),
            ])))
        }
        Command::Persist { file, gnuplot } => {
            let fq = parse_filtration(&read(file)?).map_err(|e| in_file(file, e))?;
            let curve = hh_betti_curves(&fq, cli.field, cli.max_dim, cli.jobs)?;
            let text = match (cli.json, gnuplot) {
                (true, true) => {
                    return Err(Failure::Usage("--json and --gnuplot are exclusive".into()))
                }
                (true, false) => pretty(&curve),
                (false, true) => curve.to_gnuplot(),
                (false, false) => curve.to_csv(),
            };
            Ok(Output::ok(text))
        }
        Command::Oracle { file } => {
            let p = reachability_poset(&load(file)?).poset;
            let top = cli.max_dim.unwrap_or(1);
            if top > ORACLE_MAX_DEGREE {
                return Err(Failure::Usage(format!(
                    "--max-dim is at most {ORACLE_MAX_DEGREE} for the oracle"
                )));
            }
            let nerve = betti_with(&order_complex(&p, Some(top + 1)), cli.field, top)?;
            let hh = (0..=top)
                .map(|k| hochschild_oracle_with(&p, k, cli.field))
                .collect::<Result<Vec<_>, _>>()?;
            let agree = hh == nerve;
            let text = if cli.json {
                pretty(&json!({ "hochschild": hh, "nerve_betti": nerve, "agree": agree }))
            } else {
                table(&[
                    ("hochschild", list(&hh)),
                    ("nerve betti", list(&nerve)),
                    ("agree", agree.to_string()),
                ])
            };
            Ok(Output {
                text,
                answer: agree,
            })
        }
        Command::Selftest { samples } => {
            let seed = match std::env::var(SEED_VAR) {
                Ok(s) => s.trim().parse().map_err(|_| {
                    Failure::Usage(format!("{SEED_VAR} must be an unsigned integer"))
                })?,
                Err(_) => 0,
            };
            let report = run_selftest(seed, *samples);
            let text = if cli.json {
                pretty(&report)
            } else {
                let mut out = format!("seed {seed}\n");
                for c in &report.checks {
                    let status = if c.failures == 0 { "ok" } else { "FAILED" };
                    out.push_str(&format!(
                        "{:<32} {status} ({}/{} failed)\n",
                        c.name, c.failures, c.samples
                    ));
                }
                out
            };
            Ok(Output {
                text,
                answer: report.passed(),
            })
        }
        Command::Morphism {
            source,
            target,
            map,
        } => {
            let (src, dst) = (load(source)?, load(target)?);
            let f = parse_morphism(&read(map)?).map_err(|e| in_file(map, e))?;
            let check = validate_morphism(&f, &src, &dst)?;
            let induced: Option<Value> = if check.valid {
                let m = map_poset(&f, &src, &dst)?;
                let (ps, pd) = (
                    reachability_poset(&src).poset,
                    reachability_poset(&dst).poset,
                );
                Some(
                    m.map
                        .iter()
                        .enumerate()
                        .map(|(a, &b)| {
                            (ps.elements[a].clone(), Value::from(pd.elements[b].clone()))
                        })
                        .collect(),
                )
            } else {
                None
            };
            let text = if cli.json {
                pretty(
                    &json!({ "valid": check.valid, "violation": check.violation, "poset_map": induced }),
                )
            } else if let Some(Value::Object(m)) = &induced {
                m.iter()
                    .map(|(a, b)| format!("{a} -> {}\n", b.as_str().unwrap_or_default()))
                    .collect()
            } else {
                format!(
                    "not a morphism: {}\n",
                    serde_json::to_string(&check.violation).expect("serializable")
                )
            };
            Ok(Output {
                text,
                answer: check.valid,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.answer { 0 } else { 1 })
        }
        Err(f) => {
            let code = f.code();
            let (Failure::Usage(m) | Failure::Parse(m) | Failure::Precondition(m)) = f;
            eprintln!("quiverreach: {m}");
            ExitCode::from(code)
        }
    }
}
