use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use skeinlab::algebra::symbol;
use skeinlab::cheb::{reduce_mod_n, thread_tau, to_threaded};
use skeinlab::curves::{decompose, hilbert_basis};
use skeinlab::planar::{max_crossings_from_env, place};
use skeinlab::trace::{nonzero_certificate, trace};
use skeinlab::{json as codec, verify, Error, IdealTriangulation, RingMode, SkeinAlgebra, SkeinElement};

#[derive(Parser)]
#[command(name = "skein", version, about = "Kauffman bracket skein algebra calculator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Refuse products whose placement has more crossings than this.
    /// Defaults to $SKEINLAB_MAX_CROSSINGS, then 20.
    #[arg(long, global = true)]
    max_crossings: Option<usize>,
}

#[derive(Args)]
struct SurfaceArg {
    /// Surface JSON file, or `preset:NAME`.
    #[arg(long)]
    surface: String,
}

#[derive(Args)]
struct RingArg {
    /// `generic` or `cyclotomic:N`.
    #[arg(long, default_value = "generic")]
    ring: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check a triangulation and report its topology.
    Validate {
        #[command(flatten)]
        surface: SurfaceArg,
    },
    /// Split a coloring into components with multiplicities.
    Components {
        #[command(flatten)]
        surface: SurfaceArg,
        /// Coloring JSON file.
        #[arg(long)]
        coloring: PathBuf,
    },
    /// Indecomposable admissible colorings up to a weight bound.
    HilbertBasis {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        bound: u64,
    },
    /// Stacking product, left over right.
    Product {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[command(flatten)]
        ring: RingArg,
        /// Dump placements of every basis pair to stderr.
        #[arg(long)]
        debug: bool,
    },
    /// Top-weight part of an element.
    Symbol {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        element: PathBuf,
        #[command(flatten)]
        ring: RingArg,
    },
    /// Apply the threading map at order N.
    Thread {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        element: PathBuf,
        #[arg(long = "N")]
        n: Option<u32>,
        #[command(flatten)]
        ring: RingArg,
    },
    /// Rewrite an element in the Chebyshev threaded basis; with --N, also
    /// split exponents modulo N.
    ToCheb {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        element: PathBuf,
        #[arg(long = "N")]
        n: Option<u32>,
        #[command(flatten)]
        ring: RingArg,
    },
    /// Trace onto the threaded central part.
    Trace {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        element: PathBuf,
        #[arg(long = "N")]
        n: Option<u32>,
        /// Defaults to cyclotomic:N.
        #[arg(long)]
        ring: Option<String>,
    },
    /// Find a multiplier with nonzero trace.
    CertifyNonzero {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        element: PathBuf,
        #[arg(long = "N")]
        n: Option<u32>,
    },
    /// Run the built-in self-check suites.
    Verify {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        suite: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Domain(Error::Parse(format!("{}: {e}", path.display()))))
}

fn load_surface(arg: &SurfaceArg) -> Result<IdealTriangulation, Failure> {
    match arg.surface.strip_prefix("preset:") {
        Some(name) => Ok(IdealTriangulation::preset(name)?),
        None => Ok(IdealTriangulation::from_value(&read_json(Path::new(&arg.surface))?)?),
    }
}

fn parse_ring(s: &str) -> Result<RingMode, Failure> {
    s.parse().map_err(|e| Failure::Usage(format!("--ring: {e}")))
}

fn require_n(n: Option<u32>) -> Result<u32, Failure> {
    let n = n.ok_or_else(|| Failure::Usage("--N is required".into()))?;
    if n < 3 || n % 2 == 0 {
        return Err(Failure::Usage(format!("--N must be odd and at least 3, got {n}")));
    }
    Ok(n)
}

fn load_element(surface: &IdealTriangulation, path: &Path, mode: RingMode) -> Result<SkeinElement, Failure> {
    Ok(codec::element_from_json(surface, &read_json(path)?, mode)?)
}

fn algebra(surface: IdealTriangulation, mode: RingMode, bound: Option<usize>) -> SkeinAlgebra {
    SkeinAlgebra::new(surface, mode).with_max_crossings(bound.unwrap_or_else(max_crossings_from_env))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate { surface } => {
            let s = load_surface(surface)?;
            Ok((
                json!({
                    "valid": true,
                    "edges": s.num_edges(),
                    "triangles": s.num_triangles(),
                    "punctures": s.puncture_count(),
                    "genus": s.genus(),
                    "embedded_only": s.is_embedded_only(),
                }),
                true,
            ))
        }
        Command::Components { surface, coloring } => {
            let s = load_surface(surface)?;
            let f = codec::coloring_from_json(&s, &read_json(coloring)?)?;
            Ok((codec::decomposition_to_json(&s, &decompose(&s, &f)?), true))
        }
        Command::HilbertBasis { surface, bound } => {
            let s = load_surface(surface)?;
            Ok((codec::hilbert_to_json(&s, &hilbert_basis(&s, *bound)), true))
        }
        Command::Product { surface, left, right, ring, debug } => {
            let s = load_surface(surface)?;
            let mode = parse_ring(&ring.ring)?;
            let x = load_element(&s, left, mode)?;
            let y = load_element(&s, right, mode)?;
            if *debug {
                let mut dumps = Vec::new();
                for f in x.terms().keys() {
                    for g in y.terms().keys() {
                        dumps.push(place(&s, f, g)?.debug_json(&s));
                    }
                }
                eprintln!("{}", serde_json::to_string_pretty(&Value::Array(dumps)).expect("json"));
            }
            let alg = algebra(s, mode, cli.max_crossings);
            let p = alg.product(&x, &y)?;
            Ok((codec::element_to_json(alg.surface(), &p), true))
        }
        Command::Symbol { surface, element, ring } => {
            let s = load_surface(surface)?;
            let x = load_element(&s, element, parse_ring(&ring.ring)?)?;
            Ok((codec::symbol_to_json(&s, &symbol(&x)?), true))
        }
        Command::Thread { surface, element, n, ring } => {
            let s = load_surface(surface)?;
            let n = require_n(*n)?;
            let x = load_element(&s, element, parse_ring(&ring.ring)?)?;
            Ok((codec::element_to_json(&s, &thread_tau(&s, &x, n)?), true))
        }
        Command::ToCheb { surface, element, n, ring } => {
            let s = load_surface(surface)?;
            let x = load_element(&s, element, parse_ring(&ring.ring)?)?;
            let t = to_threaded(&s, &x)?;
            match n {
                None => Ok((codec::threaded_to_json(&s, &t), true)),
                Some(_) => {
                    let n = require_n(*n)?;
                    Ok((codec::reduced_to_json(&s, &reduce_mod_n(&t, n)), true))
                }
            }
        }
        Command::Trace { surface, element, n, ring } => {
            let s = load_surface(surface)?;
            let n = require_n(*n)?;
            let mode = match ring {
                Some(r) => parse_ring(r)?,
                None => RingMode::Cyclotomic(n),
            };
            let x = load_element(&s, element, mode)?;
            Ok((codec::trace_to_json(&s, &trace(&s, &x, n)?), true))
        }
        Command::CertifyNonzero { surface, element, n } => {
            let s = load_surface(surface)?;
            let n = require_n(*n)?;
            let mode = RingMode::Cyclotomic(n);
            let x = load_element(&s, element, mode)?;
            let alg = algebra(s, mode, cli.max_crossings);
            let cert = nonzero_certificate(&alg, &x, n)?;
            Ok((codec::certificate_to_json(alg.surface(), &cert), true))
        }
        Command::Verify { suite, all, seed } => {
            let reports = if *all {
                verify::run_all(*seed)
            } else {
                let name = suite.as_deref().unwrap_or_default();
                let s = verify::find_suite(name).ok_or_else(|| {
                    let known: Vec<&str> = verify::SUITES.iter().map(|s| s.name).collect();
                    Failure::Usage(format!("unknown suite {name:?}; known: {}", known.join(", ")))
                })?;
                vec![verify::run_suite(&s, *seed)]
            };
            let passed = reports.iter().all(|r| r.passed);
            let suites: Vec<Value> = reports.iter().map(|r| r.to_json()).collect();
            Ok((json!({"seed": seed, "passed": passed, "suites": suites}), passed))
        }
    }
}

fn emit(value: &Value, output: Option<&Path>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).expect("json") + "\n";
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("skein: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((value, ok)) => {
            if let Err(e) = emit(&value, cli.output.as_deref()) {
                eprintln!("skein: {e}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Domain(e)) => {
            println!("{}", serde_json::to_string_pretty(&codec::error_to_json(&e)).expect("json"));
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("skein: {msg}");
            ExitCode::from(2)
        }
    }
}
