//! `hcd`: contiguity classes, contiguity distance, scat and TC_n from the
//! command line.
//!
//! Every command writes one JSON document to stdout and a short summary to
//! stderr. Exit status is 0 for a definite result, 1 for an error (or a
//! failed `verify`), and 2 when a budget ran out before the answer was known.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use higher_contiguity::io::{
    class_decision_json, collapse_json, complex_json, distance_report_json, emit_complex, emit_map,
    error_json, map_json,
};
use higher_contiguity::{
    barycentric_subdivision, categorical_power, contiguity_distance, contiguity_witness, core,
    decide_class, discrete_tc, parse_complex, parse_complex_file, parse_map_file,
    same_contiguity_class, scat, scat_at, verify_tuples, Complex, DistanceBudget, DistanceReport,
    Error, Mode, SdValue, SimplicialMap, SuiteConfig, Verdict,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "hcd",
    version,
    about = "Exact contiguity distance, scat and TC_n for simplicial complexes"
)]
struct Cli {
    #[command(flatten)]
    budget: BudgetArgs,

    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BudgetArgs {
    /// Maps visited per contiguity-class decision.
    #[arg(long, global = true, env = "HCD_MAX_VISITS")]
    max_visits: Option<usize>,

    /// Distinct pieces judged per distance computation.
    #[arg(long, global = true, env = "HCD_MAX_PIECES")]
    max_pieces: Option<usize>,

    /// Nodes of the cover search per distance computation.
    #[arg(long, global = true, env = "HCD_MAX_SUBCOMPLEXES")]
    max_subcomplexes: Option<usize>,
}

impl BudgetArgs {
    fn resolve(&self) -> DistanceBudget {
        let mut b = DistanceBudget::default();
        if let Some(v) = self.max_visits {
            b.class.max_visits = v;
        }
        if let Some(v) = self.max_pieces {
            b.max_pieces = v;
        }
        if let Some(v) = self.max_subcomplexes {
            b.max_subcomplexes = v;
        }
        b
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    All,
    Induced,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::All => Mode::All,
            ModeArg::Induced => Mode::Induced,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a complex (and optionally maps on it) and describe it.
    Validate {
        #[arg(long)]
        complex: PathBuf,
        /// Codomain of the maps (default: the complex itself).
        #[arg(long)]
        codomain: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        maps: Vec<PathBuf>,
    },
    /// Decide whether two maps are contiguous.
    Contiguous {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        codomain: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        maps: Vec<PathBuf>,
    },
    /// Decide whether two maps lie in the same contiguity class.
    Class {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        codomain: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        maps: Vec<PathBuf>,
        /// Shrink both ends to their cores first; chains need not be shortest.
        #[arg(long)]
        reduced: bool,
    },
    /// Contiguity distance SD of a tuple of maps.
    Sd {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        codomain: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        maps: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "all")]
        mode: ModeArg,
    },
    /// Simplicial LS category.
    Scat {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        mode: ModeArg,
        /// Vertex for the constant map (default: first vertex of each component).
        #[arg(long)]
        basepoint: Option<String>,
    },
    /// Discrete higher topological complexity TC_n.
    Tc {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "all")]
        mode: ModeArg,
    },
    /// Barycentric subdivision.
    Subdivide {
        #[arg(long)]
        complex: PathBuf,
        /// Print the facet text format instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Categorical power K^n.
    Power {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        text: bool,
    },
    /// Strong-collapse core with the deletion trace.
    Core {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Check a corpus directory: formats, round trips and the sampled
    /// property suite.
    Verify {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Contiguous { .. } => "contiguous",
            Command::Class { .. } => "class",
            Command::Sd { .. } => "sd",
            Command::Scat { .. } => "scat",
            Command::Tc { .. } => "tc",
            Command::Subdivide { .. } => "subdivide",
            Command::Power { .. } => "power",
            Command::Core { .. } => "core",
            Command::Verify { .. } => "verify",
        }
    }
}

/// What a command produced: the JSON document (or raw text), a summary line
/// and the exit status.
struct Output {
    doc: Doc,
    summary: String,
    code: u8,
}

enum Doc {
    Json(Value),
    Text(String),
}

struct Failure {
    error: Error,
    path: Option<PathBuf>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, path: None }
    }
}

type Run = std::result::Result<Output, Failure>;

fn at<T>(path: &Path, r: higher_contiguity::Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(|error| Failure {
        error,
        path: Some(path.to_path_buf()),
    })
}

fn load_complex(path: &Path) -> std::result::Result<Arc<Complex>, Failure> {
    at(path, parse_complex_file(path)).map(Arc::new)
}

/// Loads domain, codomain and maps; every file is parsed before any search.
fn load_maps(
    complex: &Path,
    codomain: Option<&Path>,
    maps: &[PathBuf],
) -> std::result::Result<(Arc<Complex>, Vec<SimplicialMap>), Failure> {
    let dom = load_complex(complex)?;
    let cod = match codomain {
        Some(p) => load_complex(p)?,
        None => Arc::clone(&dom),
    };
    let maps = maps
        .iter()
        .map(|p| at(p, parse_map_file(p, &dom, &cod)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok((dom, maps))
}

fn two(maps: &[SimplicialMap]) -> std::result::Result<(&SimplicialMap, &SimplicialMap), Failure> {
    match maps {
        [f, g] => Ok((f, g)),
        _ => Err(Error::TooFewMaps {
            needed: 2,
            got: maps.len(),
        }
        .into()),
    }
}

fn code_of(v: SdValue) -> u8 {
    if v.is_definite() {
        0
    } else {
        2
    }
}

fn distance_output(command: &str, r: &DistanceReport, connected: bool, extra: Value) -> Output {
    let mut doc = distance_report_json(r);
    doc["command"] = json!(command);
    doc["edge_path_connected"] = json!(connected);
    if let (Value::Object(d), Value::Object(e)) = (&mut doc, extra) {
        d.extend(e);
    }
    let mut summary = format!(
        "{command} = {} (mode {}",
        r.value,
        json!(r.mode).as_str().unwrap_or("?")
    );
    if let Some(s) = &r.solution {
        summary += &format!(", {} pieces", s.pieces.len());
    }
    summary += &format!(", {} pieces judged)", r.stats.pieces_judged);
    if !connected {
        summary += "; warning: the complex is not edge-path connected";
    }
    Output {
        doc: Doc::Json(doc),
        summary,
        code: code_of(r.value),
    }
}

fn run(command: &Command, budget: &DistanceBudget) -> Run {
    let name = command.name();
    match command {
        Command::Validate {
            complex,
            codomain,
            maps,
        } => {
            let (dom, maps) = load_maps(complex, codomain.as_deref(), maps)?;
            let summary = format!(
                "{}: {} vertices, {} facets, dimension {}; {} maps ok",
                complex.display(),
                dom.num_vertices(),
                dom.facets().len(),
                dom.dimension(),
                maps.len()
            );
            let doc = json!({
                "command": name,
                "status": "definite",
                "complex": complex_json(&dom),
                "maps": maps.iter().map(map_json).collect::<Vec<_>>(),
            });
            Ok(Output {
                doc: Doc::Json(doc),
                summary,
                code: 0,
            })
        }
        Command::Contiguous {
            complex,
            codomain,
            maps,
        } => {
            let (_, maps) = load_maps(complex, codomain.as_deref(), maps)?;
            let (f, g) = two(&maps)?;
            let witness = contiguity_witness(f, g)?;
            let summary = match &witness {
                None => "contiguous".to_string(),
                Some(w) => format!("not contiguous: face {{{}}} breaks it", w.join(",")),
            };
            let doc = json!({
                "command": name,
                "status": "definite",
                "contiguous": witness.is_none(),
                "witness": witness,
            });
            Ok(Output {
                doc: Doc::Json(doc),
                summary,
                code: 0,
            })
        }
        Command::Class {
            complex,
            codomain,
            maps,
            reduced,
        } => {
            let (_, maps) = load_maps(complex, codomain.as_deref(), maps)?;
            let (f, g) = two(&maps)?;
            let d = if *reduced {
                decide_class(f, g, &budget.class)?
            } else {
                same_contiguity_class(f, g, &budget.class)?
            };
            let (status, code, summary) = match &d.verdict {
                Verdict::Equivalent(c) => (
                    "definite",
                    0,
                    format!("same class, chain of {} steps", c.steps()),
                ),
                Verdict::NotEquivalent => ("definite", 0, "different classes".to_string()),
                Verdict::Unknown => ("unknown", 2, format!("unknown after {} maps", d.explored)),
            };
            let mut doc = class_decision_json(&d);
            doc["command"] = json!(name);
            doc["status"] = json!(status);
            Ok(Output {
                doc: Doc::Json(doc),
                summary,
                code,
            })
        }
        Command::Sd {
            complex,
            codomain,
            maps,
            mode,
        } => {
            let (dom, maps) = load_maps(complex, codomain.as_deref(), maps)?;
            let r = contiguity_distance(&maps, (*mode).into(), budget)?;
            Ok(distance_output(
                name,
                &r,
                dom.is_edge_path_connected(),
                json!({"arity": maps.len()}),
            ))
        }
        Command::Scat {
            complex,
            mode,
            basepoint,
        } => {
            let k = load_complex(complex)?;
            let r = match basepoint {
                Some(v) => scat_at(&k, v, (*mode).into(), budget)?,
                None => scat(&k, (*mode).into(), budget)?,
            };
            Ok(distance_output(
                name,
                &r,
                k.is_edge_path_connected(),
                json!({"basepoint": basepoint}),
            ))
        }
        Command::Tc { complex, n, mode } => {
            let k = load_complex(complex)?;
            let r = discrete_tc(&k, *n, (*mode).into(), budget)?;
            Ok(distance_output(
                name,
                &r,
                k.is_edge_path_connected(),
                json!({"n": n}),
            ))
        }
        Command::Subdivide { complex, text } => {
            let k = load_complex(complex)?;
            let sd = barycentric_subdivision(&k)?;
            let c = sd.complex();
            let summary = format!(
                "sd: {} vertices, {} facets",
                c.num_vertices(),
                c.facets().len()
            );
            complex_output(name, c, *text, summary, json!({}))
        }
        Command::Power { complex, n, text } => {
            let k = load_complex(complex)?;
            let p = categorical_power(&k, *n)?;
            let c = p.complex();
            let summary = format!(
                "power {n}: {} vertices, {} facets",
                c.num_vertices(),
                c.facets().len()
            );
            complex_output(name, c, *text, summary, json!({"n": n}))
        }
        Command::Core { complex } => {
            let k = load_complex(complex)?;
            let trace = core(&k);
            let mut doc = collapse_json(&trace);
            let summary = format!(
                "{} deletions, core has {} vertices{}",
                trace.steps.len(),
                trace.result().num_vertices(),
                if trace.result().num_vertices() == 1 {
                    " (strongly collapsible)"
                } else {
                    ""
                }
            );
            doc["command"] = json!(name);
            doc["status"] = json!("definite");
            Ok(Output {
                doc: Doc::Json(doc),
                summary,
                code: 0,
            })
        }
        Command::Verify {
            corpus,
            samples,
            seed,
        } => verify(corpus, *samples, *seed, budget),
    }
}

fn complex_output(name: &str, c: &Complex, text: bool, summary: String, extra: Value) -> Run {
    let body = emit_complex(c);
    if text {
        return Ok(Output {
            doc: Doc::Text(body),
            summary,
            code: 0,
        });
    }
    let mut doc = json!({
        "command": name,
        "status": "definite",
        "complex": complex_json(c),
        "text": body,
    });
    if let (Value::Object(d), Value::Object(e)) = (&mut doc, extra) {
        d.extend(e);
    }
    Ok(Output {
        doc: Doc::Json(doc),
        summary,
        code: 0,
    })
}

/// `verify --corpus dir`: every `X.cx` is a complex and every `X.name.map` a
/// self-map of `X.cx`. Checks that files parse, that canonical emission is a
/// fixed point, and runs the property suite on the named tuples plus random
/// samples.
fn verify(dir: &Path, samples: usize, seed: u64, budget: &DistanceBudget) -> Run {
    let io_err = |e: std::io::Error| Failure {
        error: Error::Io {
            path: dir.display().to_string(),
            message: e.to_string(),
        },
        path: Some(dir.to_path_buf()),
    };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    paths.sort();
    let mut complexes: BTreeMap<String, Arc<Complex>> = BTreeMap::new();
    let mut files = Vec::new();
    let mut stable = true;
    for p in paths
        .iter()
        .filter(|p| p.extension().is_some_and(|e| e == "cx"))
    {
        let k = load_complex(p)?;
        let text = fs::read_to_string(p).unwrap_or_default();
        let canon = emit_complex(&k);
        let fixed = parse_complex(&canon)
            .map(|c| emit_complex(&c) == canon)
            .unwrap_or(false);
        stable &= fixed;
        files.push(json!({"path": p.display().to_string(), "kind": "complex", "canonical": text == canon, "stable": fixed}));
        let stem = p
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        complexes.insert(stem, k);
    }
    let mut named: BTreeMap<String, Vec<SimplicialMap>> = BTreeMap::new();
    for p in paths
        .iter()
        .filter(|p| p.extension().is_some_and(|e| e == "map"))
    {
        let file = p
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let stem = file.split('.').next().unwrap_or_default().to_string();
        let Some(k) = complexes.get(&stem) else {
            return Err(Failure {
                error: Error::Io {
                    path: p.display().to_string(),
                    message: format!("no complex `{stem}.cx` for this map"),
                },
                path: Some(p.clone()),
            });
        };
        let f = at(p, parse_map_file(p, k, k))?;
        let text = fs::read_to_string(p).unwrap_or_default();
        let canon = emit_map(&f);
        files.push(json!({"path": p.display().to_string(), "kind": "map", "canonical": text == canon, "stable": true}));
        named.entry(stem).or_default().push(f);
    }
    if complexes.is_empty() {
        return Err(Failure {
            error: Error::Io {
                path: dir.display().to_string(),
                message: "no `.cx` files".into(),
            },
            path: Some(dir.to_path_buf()),
        });
    }
    let corpus: Vec<Arc<Complex>> = complexes.values().cloned().collect();
    let tuples: Vec<Vec<SimplicialMap>> = named.into_values().collect();
    let config = SuiteConfig {
        samples,
        seed,
        budget: *budget,
        ..SuiteConfig::default()
    };
    let report = verify_tuples(&corpus, &tuples, &config);
    let pass = stable && report.passed();
    let summary = format!(
        "{} files, {} tuples, {} violations: {}",
        files.len(),
        report.tuples,
        report.violations(),
        if pass { "pass" } else { "FAIL" }
    );
    let doc = json!({
        "command": "verify",
        "status": if pass { "pass" } else { "fail" },
        "files": files,
        "tuples": report.tuples,
        "checks": report.checks,
    });
    Ok(Output {
        doc: Doc::Json(doc),
        summary,
        code: if pass { 0 } else { 1 },
    })
}

fn error_output(command: &str, f: &Failure) -> Output {
    let mut error = error_json(&f.error);
    if let Some(p) = &f.path {
        error["path"] = json!(p.display().to_string());
    }
    let summary = match (&f.path, &f.error) {
        (Some(p), e) if !matches!(e, Error::Io { .. }) => format!("error: {}: {e}", p.display()),
        _ => format!("error: {}", f.error),
    };
    Output {
        doc: Doc::Json(json!({"command": command, "status": "error", "error": error})),
        summary,
        code: 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let doc = json!({
                "command": Value::Null,
                "status": "error",
                "error": {"kind": "usage", "message": e.kind().to_string(), "details": {"usage": e.render().to_string()}},
            });
            let _ = writeln!(std::io::stdout(), "{doc}");
            eprint!("{}", e.render());
            return ExitCode::from(1);
        }
    };
    if let Some(n) = cli.threads {
        // Only fails if a global pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    let budget = cli.budget.resolve();
    let out = run(&cli.command, &budget).unwrap_or_else(|f| error_output(cli.command.name(), &f));
    let text = match &out.doc {
        Doc::Json(v) if cli.pretty => serde_json::to_string_pretty(v).expect("serializable") + "\n",
        Doc::Json(v) => v.to_string() + "\n",
        Doc::Text(t) => t.clone(),
    };
    // A closed pipe is not worth a panic.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    eprintln!("{}", out.summary);
    ExitCode::from(out.code)
}
