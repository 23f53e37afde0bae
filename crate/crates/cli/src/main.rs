use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use ropesweep_core::calibration::{projected_area_bound, sup_plane_bound, Bound};
use ropesweep_core::corpus::{generate, CorpusSpec, Family};
use ropesweep_core::reidemeister::{build_graph, diagram_distance, project, DiagramGraph, GaussCode};
use ropesweep_core::{
    check_admissible, lambda_sweep, merge_scale_upper, minimize_sweep, ropelength, swept_area, thickness, IsotopyPath,
    OptimizeConfig, OrientedPlane, PolygonalKnot, SizeFunctionalKind, Vec3,
};

#[derive(Debug, Parser)]
#[command(name = "ropesweep", version, about = "Thickness, ropelength and swept-area bounds for polygonal knots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Thickness breakdown of a knot.
    Thickness { knot: PathBuf },
    /// Length, thickness, ropelength and the size factorizations.
    Rop { knot: PathBuf },
    /// Swept area of an isotopy.
    Sweep {
        isotopy: PathBuf,
        /// Also check admissibility at this level.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 64)]
        time_samples: usize,
        /// Subdivide every keyframe interval this many times first.
        #[arg(long, default_value_t = 1)]
        refine: usize,
        /// Per-interval table instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Projected-area lower bounds between two knots.
    Bound {
        knot0: PathBuf,
        knot1: PathBuf,
        #[arg(long, num_args = 3, value_names = ["NX", "NY", "NZ"], allow_negative_numbers = true)]
        plane: Option<Vec<f64>>,
    },
    /// Optimized upper bound on the swept-area distance.
    Optimize {
        knot0: PathBuf,
        knot1: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[command(flatten)]
        opt: OptArgs,
    },
    /// Upper bound on the first level at which two knots connect.
    MergeScale {
        knot0: PathBuf,
        knot1: PathBuf,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[command(flatten)]
        opt: OptArgs,
    },
    /// Warm-started upper bounds over a list of levels.
    LambdaSweep {
        knot0: PathBuf,
        knot1: PathBuf,
        /// Comma-separated, nondecreasing.
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<f64>,
        #[command(flatten)]
        opt: OptArgs,
        #[arg(long)]
        csv: bool,
    },
    /// Diagram of a knot seen along a direction.
    Diagram {
        knot: PathBuf,
        #[arg(long, num_args = 3, value_names = ["NX", "NY", "NZ"], allow_negative_numbers = true, required = true)]
        u: Vec<f64>,
    },
    /// Weighted diagram graph from one or more isotopies.
    Graph {
        #[arg(required = true)]
        isotopies: Vec<PathBuf>,
        #[arg(long, num_args = 3, value_names = ["NX", "NY", "NZ"], allow_negative_numbers = true, required = true)]
        u: Vec<f64>,
        /// Require every path to be admissible at this level.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 200)]
        time_samples: usize,
    },
    /// Shortest weighted distance between two diagrams of a graph.
    Ddist { graph: PathBuf, code0: String, code1: String },
    /// Knot from one of the built-in families.
    Generate {
        /// regular-ngon, ellipse-ngon, square-family, trefoil-polygon or random-perturbed
        family: Family,
        /// Family parameter as name=value; repeatable.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct OptArgs {
    #[arg(long, default_value_t = 16)]
    keyframes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    time_samples: usize,
}

impl OptArgs {
    fn config(&self, lambda: f64) -> OptimizeConfig {
        OptimizeConfig {
            keyframe_count: self.keyframes,
            seed: self.seed,
            time_samples: self.time_samples,
            ..OptimizeConfig::new(lambda)
        }
    }
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let value: f64 = value.trim().parse().map_err(|e| format!("{name}: {e}"))?;
    Ok((name.trim().to_string(), value))
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

impl From<ropesweep_core::Error> for Failure {
    fn from(e: ropesweep_core::Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("failed to read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(value: &T) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Numeric(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn direction(v: &[f64]) -> Result<Vec3, Failure> {
    let u = Vec3::new(v[0], v[1], v[2]);
    u.normalized()
        .filter(|_| u.is_finite())
        .ok_or_else(|| Failure::Validation(format!("direction ({}, {}, {}) has no length", v[0], v[1], v[2])))
}

#[derive(Serialize)]
struct SizeReport {
    kind: SizeFunctionalKind,
    size: f64,
    density: f64,
    compression_radius: f64,
}

#[derive(Serialize)]
struct RopReport {
    length: f64,
    thickness: f64,
    ropelength: f64,
    sizes: Vec<SizeReport>,
}

fn rop(knot: &PolygonalKnot) -> Result<RopReport, Failure> {
    let thi = thickness(knot).thickness;
    let sizes = [SizeFunctionalKind::Diameter, SizeFunctionalKind::MinEnclosingBallRadius]
        .into_iter()
        .map(|kind| {
            Ok(SizeReport {
                kind,
                size: knot.size(kind),
                density: knot.density(kind)?,
                compression_radius: knot.compression_radius(kind, thi)?,
            })
        })
        .collect::<Result<Vec<_>, ropesweep_core::Error>>()?;
    Ok(RopReport {
        length: knot.length(),
        thickness: thi,
        ropelength: ropelength(knot)?,
        sizes,
    })
}

#[derive(Serialize)]
struct SweepReport {
    #[serde(flatten)]
    area: ropesweep_core::SweptAreaResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    admissibility: Option<ropesweep_core::AdmissibilityReport>,
}

#[derive(Serialize)]
struct BoundReport {
    projected: Bound,
    sup_plane: Bound,
}

#[derive(Serialize)]
struct DistanceReport {
    from: GaussCode,
    to: GaussCode,
    /// `null` when the diagrams are not connected.
    distance: Option<f64>,
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Thickness { knot } => emit(&thickness(&read_json::<PolygonalKnot>(&knot)?)),
        Command::Rop { knot } => emit(&rop(&read_json(&knot)?)?),
        Command::Sweep {
            isotopy,
            lambda,
            time_samples,
            refine,
            csv,
        } => {
            if refine == 0 {
                return Err(Failure::Validation("--refine must be at least 1".into()));
            }
            let path = read_json::<IsotopyPath>(&isotopy)?.refine(refine);
            let area = swept_area(&path);
            if csv {
                let mut out = String::from("interval,t0,t1,area\n");
                for (i, (w, a)) in path.times().windows(2).zip(&area.per_interval).enumerate() {
                    writeln!(out, "{i},{},{},{a}", w[0], w[1]).unwrap();
                }
                print!("{out}");
                return Ok(());
            }
            let admissibility = match lambda {
                Some(l) if l.is_nan() || l <= 0.0 => return Err(Failure::Validation("--lambda must be positive".into())),
                Some(l) => Some(check_admissible(&path, l, time_samples)),
                None => None,
            };
            emit(&SweepReport { area, admissibility })
        }
        Command::Bound { knot0, knot1, plane } => {
            let (g0, g1): (PolygonalKnot, PolygonalKnot) = (read_json(&knot0)?, read_json(&knot1)?);
            let plane = match plane {
                Some(v) => OrientedPlane::new(direction(&v)?)?,
                None => OrientedPlane::xy(),
            };
            emit(&BoundReport {
                projected: projected_area_bound(&g0, &g1, &plane)?,
                sup_plane: sup_plane_bound(&g0, &g1)?,
            })
        }
        Command::Optimize {
            knot0,
            knot1,
            lambda,
            opt,
        } => {
            let r = minimize_sweep(&read_json(&knot0)?, &read_json(&knot1)?, &opt.config(lambda))?;
            emit(&r)?;
            if !r.admissible {
                return Err(Failure::Numeric(format!(
                    "no admissible path found (violation {:e}); no bound claimed",
                    r.constraint_violation_max
                )));
            }
            Ok(())
        }
        Command::MergeScale {
            knot0,
            knot1,
            lo,
            hi,
            opt,
        } => {
            let m = merge_scale_upper(&read_json(&knot0)?, &read_json(&knot1)?, lo, hi, &opt.config(hi))?;
            emit(&serde_json::json!({ "merge_scale_upper": m, "lambda_lo": lo, "lambda_hi": hi }))
        }
        Command::LambdaSweep {
            knot0,
            knot1,
            levels,
            opt,
            csv,
        } => {
            let first = levels.first().copied().unwrap_or(1.0);
            let sweep = lambda_sweep(&read_json(&knot0)?, &read_json(&knot1)?, &levels, &opt.config(first))?;
            if csv {
                let mut out = String::from("lambda,upper_bound\n");
                for l in &sweep {
                    let v = l.upper_bound.map(|v| v.to_string()).unwrap_or_default();
                    writeln!(out, "{},{v}", l.lambda).unwrap();
                }
                print!("{out}");
                Ok(())
            } else {
                emit(&sweep)
            }
        }
        Command::Diagram { knot, u } => emit(&project(&read_json(&knot)?, direction(&u)?)?),
        Command::Graph {
            isotopies,
            u,
            lambda,
            time_samples,
        } => {
            let paths = isotopies
                .iter()
                .map(|p| read_json::<IsotopyPath>(p))
                .collect::<Result<Vec<_>, _>>()?;
            emit(&build_graph(&paths, direction(&u)?, lambda, time_samples)?)
        }
        Command::Ddist { graph, code0, code1 } => {
            let g: DiagramGraph = read_json(&graph)?;
            let parse = |s: &str| s.parse::<GaussCode>().map_err(Failure::from);
            let (from, to) = (parse(&code0)?, parse(&code1)?);
            let d = diagram_distance(&g, &from, &to)?;
            emit(&DistanceReport {
                from,
                to,
                distance: d.is_finite().then_some(d),
            })
        }
        Command::Generate { family, params, seed } => {
            let mut spec = CorpusSpec::new(family).with_seed(seed);
            for (name, value) in params {
                spec = spec.with(&name, value);
            }
            emit(&generate(&spec)?)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            process::exit(code);
        }
    };
    if let Err(f) = run(cli.command) {
        match &f {
            Failure::Validation(m) | Failure::Numeric(m) => eprintln!("ropesweep: {m}"),
        }
        process::exit(f.code());
    }
}
