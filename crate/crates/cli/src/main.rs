//! `isomon`: batch front end. Every command prints a JSON run report on
//! stdout; `--out` receives the command's artifact (CSV for `traces`,
//! `fricke-singular` and `flow`, a system file for `validate` and the `swap`
//! and `schlesinger` transforms, the report otherwise).
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3
//! undetermined verdict.

mod parse;

use clap::{Parser, Subcommand};
use isomon::character::{find_fricke_singular_points, sample_fiber_point};
use isomon::fuchsian::{
    check_stability, classify_lambda, default_lines, local_exponents, ExponentClass,
    ParabolicConnection, StabilityVerdict, DEFAULT_D_MAX,
};
use isomon::io::{
    complex_json, connection_json, parse_system_str, write_flow_csv, write_singular_csv,
    write_traces_csv, RunReport, SystemFile,
};
use isomon::isomonodromy::{
    apparent_singularity_trajectory, frozen_residue_control, integrate_flow, FlowOptions, FlowPath,
    SchlesingerState,
};
use isomon::monodromy::{canonical_loops, compute_monodromy, local_trace, riemann_hilbert};
use isomon::transform::{
    apply_to_book, bl_word, elm_bookkeeping, schlesinger_connection, swap_parabolic, weyl_word,
    AffineMapOnLambda, TransformKind,
};
use isomon::{Error, Matrix2, Tolerances, C64};
use num_rational::BigRational;
use parse::Kind;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "isomon",
    version,
    about = "Rank-2 Fuchsian systems: monodromy, trace coordinates, symmetries and isomonodromic flows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Verification tolerance; takes precedence over ISOMON_TOL and the file.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Where to write the command's artifact.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every random draw; echoed in the report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for `flow` and `sample-rep`.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a system file; echo it with defaults filled in.
    Validate { file: PathBuf },
    /// Local exponents and the traces 2cos(2πλ) they force.
    Exponents { file: PathBuf },
    /// Resonant and reducible exponent tests.
    Classify {
        file: Option<PathBuf>,
        /// Exact exponents, e.g. `1/4,0.25,1/4,1/4`, instead of a file.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Parabolic stability with the invariant subbundle search.
    Stability {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_D_MAX)]
        d_max: u32,
    },
    /// Monodromy matrices along canonical loops.
    Monodromy {
        file: PathBuf,
        /// Basepoint of the loops; placed automatically if absent.
        #[arg(long)]
        basepoint: Option<String>,
    },
    /// Trace coordinates of the monodromy.
    Traces { file: PathBuf },
    /// Singular points of the Fricke cubic fiber over a = (a₁, …, a₄).
    FrickeSingular {
        file: Option<PathBuf>,
        #[arg(long)]
        a: Option<String>,
    },
    /// Random representations with prescribed local traces.
    SampleRep {
        #[arg(long)]
        a: String,
        /// Number of samples, seeded consecutively from --seed.
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Elementary transformations, swaps, Schlesinger gauges and the
    /// Weyl and Bäcklund actions.
    Transform {
        file: Option<PathBuf>,
        /// elm-plus:i, elm-minus:i, tensor:ν₁,…,νₙ:deg, swap:i,
        /// schlesinger:i,j, weyl:"s0 s1 …" or bl:"t-1,2 r1 …".
        #[arg(long)]
        kind: String,
        /// Exact exponents for the exponent-level transforms.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Isomonodromic flow moving one pole along a straight line.
    Flow {
        file: PathBuf,
        /// 1-based index of the moving (finite) point.
        #[arg(long = "move")]
        moving: usize,
        /// Destination, e.g. `2.5` or `2.5+0.1i`.
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 11)]
        samples: usize,
        /// Also run the frozen-residue control.
        #[arg(long)]
        control: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Exponents { .. } => "exponents",
            Command::Classify { .. } => "classify",
            Command::Stability { .. } => "stability",
            Command::Monodromy { .. } => "monodromy",
            Command::Traces { .. } => "traces",
            Command::FrickeSingular { .. } => "fricke-singular",
            Command::SampleRep { .. } => "sample-rep",
            Command::Transform { .. } => "transform",
            Command::Flow { .. } => "flow",
        }
    }

    fn file(&self) -> Option<&Path> {
        match self {
            Command::Validate { file }
            | Command::Exponents { file }
            | Command::Stability { file, .. }
            | Command::Monodromy { file, .. }
            | Command::Traces { file }
            | Command::Flow { file, .. } => Some(file),
            Command::Classify { file, .. }
            | Command::FrickeSingular { file, .. }
            | Command::Transform { file, .. } => file.as_deref(),
            Command::SampleRep { .. } => None,
        }
    }
}

/// What a command produced.
struct Outcome {
    outputs: Value,
    diagnostics: Map<String, Value>,
    status: i32,
    artifact: Option<Vec<u8>>,
}

impl Outcome {
    fn new(outputs: Value) -> Self {
        Self {
            outputs,
            diagnostics: Map::new(),
            status: 0,
            artifact: None,
        }
    }

    fn diag(mut self, key: &str, v: Value) -> Self {
        self.diagnostics.insert(key.to_string(), v);
        self
    }
}

struct Context {
    tols: Tolerances,
    seed: u64,
    file: Option<SystemFile>,
}

impl Context {
    fn conn(&self) -> &ParabolicConnection {
        &self
            .file
            .as_ref()
            .expect("commands that need a file always have one")
            .connection
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn rational_json(q: &BigRational) -> Value {
    json!(q.to_string())
}

fn matrix_json(m: &Matrix2) -> Value {
    json!([
        [complex_json(m.m[0][0]), complex_json(m.m[0][1])],
        [complex_json(m.m[1][0]), complex_json(m.m[1][1])]
    ])
}

fn complexes(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|&z| complex_json(z)).collect())
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> isomon::Result<()>) -> isomon::Result<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn system_artifact(conn: &ParabolicConnection, tols: &Tolerances) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(&connection_json(conn, tols))
        .expect("JSON values always serialize");
    s.push('\n');
    s.into_bytes()
}

fn four(a: Vec<C64>) -> isomon::Result<[C64; 4]> {
    a.try_into()
        .map_err(|v: Vec<C64>| usage(format!("need exactly 4 traces, got {}", v.len())))
}

fn run(cmd: &Command, ctx: &Context) -> isomon::Result<Outcome> {
    let tols = &ctx.tols;
    match cmd {
        Command::Validate { .. } => {
            let f = ctx.file.as_ref().expect("validate reads a file");
            let mut out = Outcome::new(json!({
                "valid": true,
                "defaulted": f.defaulted,
                "system": connection_json(&f.connection, tols),
            }));
            out.artifact = Some(system_artifact(&f.connection, tols));
            Ok(out)
        }
        Command::Exponents { .. } => {
            let conn = ctx.conn();
            let ex = local_exponents(&conn.system, &conn.book, tols.spectral)?;
            let points: Vec<Value> = ex
                .iter()
                .enumerate()
                .map(|(i, &(l, o))| {
                    json!({
                        "point": i + 1,
                        "at": conn.system.points()[i].to_string(),
                        "lambda": complex_json(l),
                        "other": complex_json(o),
                        "mu": conn.book.mu[i],
                        "a": complex_json(local_trace(l)),
                    })
                })
                .collect();
            Ok(Outcome::new(
                json!({ "points": points, "deg_l": conn.book.deg_l }),
            ))
        }
        Command::Classify { lambda, .. } => {
            let class = match (lambda, &ctx.file) {
                (Some(l), _) => {
                    let l = parse::rational_list(l).map_err(usage)?;
                    classify_lambda(&l, &vec![0; l.len()], 0.0)
                }
                (None, Some(f)) => classify_lambda(
                    &f.connection.book.lambda,
                    &f.connection.book.mu,
                    tols.spectral,
                ),
                (None, None) => return Err(usage("classify needs a file or --lambda")),
            };
            Ok(Outcome::new(class_json(&class)))
        }
        Command::Stability { d_max, .. } => {
            let conn = ctx.conn();
            let r = check_stability(conn, *d_max, tols.spectral);
            let (verdict, witness, status) = match &r.verdict {
                StabilityVerdict::Stable => ("stable", Value::Null, 0),
                StabilityVerdict::Unstable(f) => (
                    "unstable",
                    json!({ "degree": f.degree, "exponents": complexes(&f.exponents) }),
                    0,
                ),
                StabilityVerdict::Undetermined => ("undetermined", Value::Null, 3),
            };
            let mut out = Outcome::new(json!({
                "verdict": verdict,
                "pardeg": rational_json(&r.pardeg),
                "threshold": rational_json(&r.threshold),
                "witness_degree": r.witness_degree.as_ref().map(rational_json),
                "witness": witness,
                "d_star": r.d_star,
            }))
            .diag("subbundles_found", json!(r.search.subbundles.len()))
            .diag(
                "undetermined_patterns",
                Value::Array(
                    r.search
                        .undetermined
                        .iter()
                        .map(|u| json!({ "degree": -(u.d as i64), "exponents": complexes(&u.exponents) }))
                        .collect(),
                ),
            );
            out.status = status;
            Ok(out)
        }
        Command::Monodromy { basepoint, .. } => {
            let conn = ctx.conn();
            let base = basepoint
                .as_deref()
                .map(parse::complex)
                .transpose()
                .map_err(usage)?;
            let loops = canonical_loops(&conn.system.finite_poles(), base)?;
            let rep = compute_monodromy(&conn.system, &conn.book, &loops, tols)?;
            Ok(Outcome::new(json!({
                "basepoint": complex_json(rep.basepoint),
                "matrices": rep.matrices.iter().map(matrix_json).collect::<Vec<_>>(),
            }))
            .diag("det_residual", json!(rep.det_residual))
            .diag("relation_residual", json!(rep.relation_residual))
            .diag("trace_residual", json!(rep.trace_residual))
            .diag("local_error", json!(rep.local_error)))
        }
        Command::Traces { .. } => {
            let t = riemann_hilbert(ctx.conn(), tols)?;
            let entries: Map<String, Value> = t
                .entries()
                .into_iter()
                .map(|(k, v)| (k, complex_json(v)))
                .collect();
            let mut out = Outcome::new(Value::Object(entries));
            out.artifact = Some(csv_bytes(|b| write_traces_csv(b, &t))?);
            Ok(out)
        }
        Command::FrickeSingular { a, .. } => {
            let a = match (a, &ctx.file) {
                (Some(a), _) => four(parse::complex_list(a).map_err(usage)?)?,
                (None, Some(f)) => four(
                    f.connection
                        .book
                        .lambda
                        .iter()
                        .map(|&l| local_trace(l))
                        .collect(),
                )?,
                (None, None) => return Err(usage("fricke-singular needs a file or --a")),
            };
            let pts = find_fricke_singular_points(&a, tols.spectral);
            let mut out = Outcome::new(json!({
                "a": complexes(&a),
                "points": pts.iter().map(|x| complexes(x)).collect::<Vec<_>>(),
            }));
            out.artifact = Some(csv_bytes(|b| write_singular_csv(b, &pts, &a))?);
            Ok(out)
        }
        Command::SampleRep { a, count } => {
            let a = parse::complex_list(a).map_err(usage)?;
            let samples = (0..*count as u64)
                .into_par_iter()
                .map(|k| {
                    let seed = ctx.seed + k;
                    let rep = sample_fiber_point(&a, seed)?;
                    Ok(json!({
                        "seed": seed,
                        "matrices": rep.matrices().iter().map(matrix_json).collect::<Vec<_>>(),
                        "trace_residual": rep.trace_residual(&a),
                    }))
                })
                .collect::<isomon::Result<Vec<_>>>()?;
            Ok(Outcome::new(
                json!({ "a": complexes(&a), "samples": samples }),
            ))
        }
        Command::Transform { kind, lambda, .. } => transform(ctx, kind, lambda.as_deref()),
        Command::Flow {
            moving,
            to,
            samples,
            control,
            ..
        } => flow(ctx, *moving, to, *samples, *control),
    }
}

fn class_json(class: &ExponentClass) -> Value {
    match class {
        ExponentClass::Generic => json!({ "class": "generic" }),
        ExponentClass::Special(w) => json!({
            "class": "special",
            "resonant": w.resonant.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "reducible": w.reducible.iter().map(|(e, k)| json!({ "signs": e, "integer": k })).collect::<Vec<_>>(),
            "walls": w.walls.iter().map(|x| json!({ "normal": x.normal, "level": x.level })).collect::<Vec<_>>(),
        }),
    }
}

fn affine_outcome(
    map: &AffineMapOnLambda,
    lambda: Option<&str>,
    ctx: &Context,
) -> isomon::Result<Outcome> {
    match lambda {
        Some(l) => {
            let l = parse::rational_list(l).map_err(usage)?;
            check_dim(map, l.len())?;
            let out = map.apply(&l);
            Ok(Outcome::new(json!({
                "lambda": l.iter().map(rational_json).collect::<Vec<_>>(),
                "result": out.iter().map(rational_json).collect::<Vec<_>>(),
                "exact": true,
            })))
        }
        None => {
            let f = ctx
                .file
                .as_ref()
                .ok_or_else(|| usage("this transform needs a file or --lambda"))?;
            let l = &f.connection.book.lambda;
            check_dim(map, l.len())?;
            Ok(Outcome::new(json!({
                "lambda": complexes(l),
                "result": complexes(&map.apply(l)),
                "exact": false,
            })))
        }
    }
}

fn check_dim(map: &AffineMapOnLambda, n: usize) -> isomon::Result<()> {
    if map.dim() == n {
        Ok(())
    } else {
        Err(usage(format!(
            "the map acts on {} exponents, got {n}",
            map.dim()
        )))
    }
}

fn exponent_count(lambda: Option<&str>, ctx: &Context) -> isomon::Result<usize> {
    match (lambda, &ctx.file) {
        (Some(l), _) => Ok(parse::rational_list(l).map_err(usage)?.len()),
        (None, Some(f)) => Ok(f.connection.n()),
        (None, None) => Err(usage("this transform needs a file or --lambda")),
    }
}

fn transform(ctx: &Context, kind: &str, lambda: Option<&str>) -> isomon::Result<Outcome> {
    let tols = &ctx.tols;
    let kind = parse::kind(kind).map_err(usage)?;
    let table = |k: TransformKind<C64>,
                 exact: Option<TransformKind<BigRational>>|
     -> isomon::Result<Outcome> {
        if let (Some(l), Some(exact)) = (lambda, exact) {
            let l = parse::rational_list(l).map_err(usage)?;
            let zero = vec![BigRational::from_integer(0.into()); l.len()];
            let d = elm_bookkeeping(&exact, &l, &zero, 0);
            return Ok(Outcome::new(json!({
                "lambda": d.lambda.iter().map(rational_json).collect::<Vec<_>>(),
                "mu": d.mu.iter().map(rational_json).collect::<Vec<_>>(),
                "deg_l": d.deg_l,
            })));
        }
        let f = ctx
            .file
            .as_ref()
            .ok_or_else(|| usage("this transform needs a file or --lambda"))?;
        let before = &f.connection.book;
        let after = apply_to_book(&k, before)?;
        let trace_shift = before
            .lambda
            .iter()
            .zip(&after.lambda)
            .map(|(&a, &b)| (local_trace(a) - local_trace(b)).norm())
            .fold(0.0, f64::max);
        Ok(Outcome::new(json!({
            "lambda": complexes(&after.lambda),
            "mu": after.mu,
            "deg_l": after.deg_l,
        }))
        .diag("local_trace_change", json!(trace_shift)))
    };
    match kind {
        Kind::ElmPlus(i) => table(TransformKind::ElmPlus(i), Some(TransformKind::ElmPlus(i))),
        Kind::ElmMinus(i) => table(TransformKind::ElmMinus(i), Some(TransformKind::ElmMinus(i))),
        Kind::Tensor { nu, deg_l1 } => table(TransformKind::Tensor { nu, deg_l1 }, None),
        Kind::Swap(i) => {
            let conn = ctx
                .file
                .as_ref()
                .ok_or_else(|| usage("swap needs a file"))?;
            let out = swap_parabolic(&conn.connection, i, tols.spectral)?;
            let mut o = Outcome::new(json!({ "system": connection_json(&out, tols) }));
            o.artifact = Some(system_artifact(&out, tols));
            Ok(o)
        }
        Kind::Schlesinger(i, j) => {
            let conn = ctx
                .file
                .as_ref()
                .ok_or_else(|| usage("schlesinger needs a file"))?
                .connection
                .clone();
            let out = schlesinger_connection(&conn, i, j, tols.spectral)?;
            let (before, after) = rayon::join(
                || riemann_hilbert(&conn, tols),
                || riemann_hilbert(&out, tols),
            );
            let drift = before?.max_abs_diff(&after?);
            let mut o = Outcome::new(json!({ "system": connection_json(&out, tols) }))
                .diag("fingerprint_drift", json!(drift));
            if drift.is_nan() || drift > tols.verify {
                o.status = 2;
            }
            o.artifact = Some(system_artifact(&out, tols));
            Ok(o)
        }
        Kind::Weyl(word) => {
            let map = weyl_word(&word)?;
            affine_outcome(&map, lambda, ctx)
        }
        Kind::Bl(word) => {
            let n = exponent_count(lambda, ctx)?;
            let map = bl_word(&word, n)?;
            affine_outcome(&map, lambda, ctx)
        }
    }
}

fn flow(
    ctx: &Context,
    moving: usize,
    to: &str,
    samples: usize,
    control: bool,
) -> isomon::Result<Outcome> {
    let tols = &ctx.tols;
    let conn = ctx.conn();
    let state = SchlesingerState::from_system(&conn.system, &conn.book)?;
    let k = moving
        .checked_sub(1)
        .filter(|&k| k < state.poles.len())
        .ok_or_else(|| {
            usage(format!(
                "--move must name a finite point between 1 and {}",
                state.poles.len()
            ))
        })?;
    let to = parse::complex(to).map_err(usage)?;
    let path = FlowPath::move_pole(&state.poles, k, to)?;
    let opts = FlowOptions {
        tols: *tols,
        samples,
        with_traces: true,
    };
    let result = integrate_flow(&state, &path, &opts)?;
    let trajectory = apparent_singularity_trajectory(&result);
    let last = result.final_state();
    let sys = last.system()?;
    let lines = default_lines(&sys, &last.book, tols.spectral);
    let final_conn = ParabolicConnection::new(sys, last.book.clone(), lines, conn.weight.clone());
    let trace_drift = result.max_trace_drift().unwrap_or(f64::NAN);
    let mut out = Outcome::new(json!({
        "samples": result.samples.len(),
        "final": connection_json(&final_conn, tols),
    }))
    .diag("max_eig_drift", json!(result.max_eig_drift()))
    .diag("max_sum_drift", json!(result.max_sum_drift()))
    .diag("max_trace_drift", json!(trace_drift))
    .diag("steps_accepted", json!(result.stats.accepted))
    .diag("steps_rejected", json!(result.stats.rejected));
    if control {
        let c = frozen_residue_control(&state, &path, tols)?;
        out = out.diag("frozen_control_drift", json!(c.max_drift));
    }
    if trace_drift.is_nan() || trace_drift > tols.verify {
        out.status = 2;
    }
    out.artifact = Some(csv_bytes(|b| write_flow_csv(b, &result, k, &trajectory))?);
    Ok(out)
}

fn tolerances(cli: &Cli, file: Option<&SystemFile>) -> isomon::Result<Tolerances> {
    let mut t = file.map(|f| f.tolerances).unwrap_or_default();
    if let Ok(v) = std::env::var("ISOMON_TOL") {
        t.verify = v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|x| *x > 0.0 && x.is_finite())
            .ok_or_else(|| usage(format!("ISOMON_TOL is not a positive number: {v:?}")))?;
    }
    if let Some(x) = cli.tol {
        if !(x > 0.0 && x.is_finite()) {
            return Err(usage("--tol must be a positive number"));
        }
        t.verify = x;
    }
    Ok(t)
}

fn execute(
    cli: &Cli,
    digest: &mut Option<String>,
    tols_out: &mut Tolerances,
) -> isomon::Result<Outcome> {
    let file = match cli.command.file() {
        Some(p) => {
            let bytes = std::fs::read(p)?;
            *digest = Some(hex::encode(Sha256::digest(&bytes)));
            let text = String::from_utf8(bytes)
                .map_err(|_| usage(format!("{} is not UTF-8", p.display())))?;
            Some(parse_system_str(&text)?)
        }
        None => None,
    };
    let tols = tolerances(cli, file.as_ref())?;
    *tols_out = tols;
    let ctx = Context {
        tols,
        seed: cli.seed,
        file,
    };
    run(&cli.command, &ctx)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let parallel = matches!(
        cli.command,
        Command::Flow { .. } | Command::SampleRep { .. }
    );
    let threads = if parallel { cli.jobs.max(1) } else { 1 };
    // Only fails if a pool already exists, which cannot happen here.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();

    let mut digest = None;
    let mut tols = Tolerances::default();
    let (outcome, error) = match execute(&cli, &mut digest, &mut tols) {
        Ok(o) => (o, None),
        Err(e) => {
            let mut o = Outcome::new(Value::Null).diag("error", json!(e.to_string()));
            o.status = e.exit_code();
            (o, Some(e))
        }
    };
    let report = RunReport {
        command: cli.command.name().to_string(),
        input_digest: digest,
        seed: Some(cli.seed),
        tolerances: tols,
        outputs: outcome.outputs,
        diagnostics: outcome.diagnostics,
        exit_status: outcome.status,
    };
    let text = serde_json::to_string_pretty(&report).expect("reports always serialize") + "\n";
    print!("{text}");
    if let Some(e) = &error {
        eprintln!("error: {e}");
    }
    if let Some(path) = &cli.out {
        let bytes = outcome.artifact.unwrap_or_else(|| text.into_bytes());
        if let Err(e) = std::fs::write(path, bytes) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(report.exit_status as u8)
}
