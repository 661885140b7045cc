use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use sigma_groups::components::{components_at_level, sigma_components};
use sigma_groups::diff::{
    perfect_closure_step, reflexive_closure, well_mixed_closure_step, Prolongation,
};
use sigma_groups::files::{ComoduleFile, MorphismFile, SpecFile};
use sigma_groups::hopf::hopf_check;
use sigma_groups::morphisms::{
    factorize, image_closure, is_injective, is_surjective, kernel_group, preimage_group,
    MorphismSpec,
};
use sigma_groups::quotients::{quotient_spec, verify_quotient_invariants};
use sigma_groups::reps::{check_comodule, stabilizer_ideal, torus_decompose};
use sigma_groups::tower::{
    build_tower_with_budget, default_depth, growth_group, invariants, stabilization_level,
};
use sigma_groups::{Error, IdealBasis, Polynomial};

mod text;

const BUDGET_ENV: &str = "SIGMA_GROUPS_BUDGET";

#[derive(Parser, Debug)]
#[command(
    name = "sigma-groups",
    version,
    about = "Invariants and constructions for difference algebraic groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Top level (tower depth, check level or component level).
    #[arg(long, global = true)]
    levels: Option<u32>,
    /// Extra prolongation steps that must agree before a level is accepted.
    #[arg(long, global = true, default_value_t = 2)]
    lookahead: u32,
    /// Degree bound for quotient searches.
    #[arg(long, global = true, default_value_t = 4)]
    degree: u32,
    /// Truncation bound for morphism classification and closures.
    #[arg(long, global = true)]
    bound: Option<u32>,
    /// Prolongation allowance above each level (overridden by SIGMA_GROUPS_BUDGET).
    #[arg(long, global = true, default_value_t = 8)]
    budget: u32,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include wall time in the report (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Reflexive,
    WellMixed,
    Perfect,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MorphismOp {
    Image,
    Kernel,
    Preimage,
    Classify,
    Factorize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closure ideals, dimensions and kernel fibers level by level.
    Tower { spec: PathBuf },
    /// σ-dimension, order and limit degree.
    Invariants { spec: PathBuf },
    /// Hopf-ideal test of the generators.
    CheckSubgroup { spec: PathBuf },
    /// Image, kernel, preimage, classification or factorization of a morphism.
    Morphism {
        #[arg(value_enum)]
        op: MorphismOp,
        morphism: PathBuf,
        /// Target subgroup for `preimage`.
        #[arg(long)]
        subgroup: Option<PathBuf>,
    },
    /// Quotient `G/N` and the invariant identities.
    Quotient { group: PathBuf, normal: PathBuf },
    /// Components of the level algebra.
    Components { spec: PathBuf },
    /// Number of σ-components.
    SigmaComponents { spec: PathBuf },
    /// Reflexive closure, or one well-mixed or perfect enrichment pass.
    Closure {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "reflexive")]
        kind: Kind,
    },
    /// Stabilizer of the span of the first basis vectors of a comodule.
    Stabilizer {
        comodule: PathBuf,
        #[arg(long)]
        subspace: usize,
    },
    /// Character lines of a torus representation.
    TorusDecompose { comodule: PathBuf },
}

enum Failure {
    /// Exit code 2, with whatever was computed.
    Partial(Error, Value),
    Fatal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unsupported(_) | Error::NotStabilized { .. } => Failure::Partial(e, Value::Null),
            e => Failure::Fatal(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Fatal(format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> std::result::Result<sigma_groups::ambient::GroupSpec, Failure> {
    Ok(SpecFile::from_json(&read(path)?)?)
}

fn strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn ideal_json(ideal: &IdealBasis) -> Value {
    json!(strings(ideal.polynomials()))
}

fn morphism_json(phi: &MorphismSpec) -> Value {
    let assignment: Map<String, Value> = phi
        .assignment
        .iter()
        .map(|(c, p)| (c.to_string(), json!(p.to_string())))
        .collect();
    json!({
        "source": SpecFile::from_spec(&phi.source),
        "target": SpecFile::from_spec(&phi.target),
        "assignment": assignment,
    })
}

fn tower(opts: &Opts, budget: u32, path: &Path) -> Outcome {
    let spec = load_spec(path)?;
    let depth = opts
        .levels
        .unwrap_or_else(|| default_depth(&spec, opts.lookahead));
    let tower = build_tower_with_budget(&spec, depth, opts.lookahead, budget)?;
    let levels: Vec<Value> = tower
        .levels
        .iter()
        .map(|l| {
            json!({
                "i": l.i,
                "dim": l.dim,
                "prolongation": l.prolongation,
                "fiber_vecdim": l.fiber_vecdim,
                "identity_holds": l.identity_holds,
                "ideal": ideal_json(&l.ideal),
                "fiber": ideal_json(&l.fiber),
            })
        })
        .collect();
    let m = stabilization_level(&tower).ok();
    Ok(json!({ "spec": spec.name, "depth": depth, "stabilization": m, "levels": levels }))
}

fn invariants_cmd(opts: &Opts, budget: u32, path: &Path) -> Outcome {
    let spec = load_spec(path)?;
    let depth = opts
        .levels
        .unwrap_or_else(|| default_depth(&spec, opts.lookahead));
    let tower = build_tower_with_budget(&spec, depth, opts.lookahead, budget)?;
    let dims = tower.dims();
    let partial = |e: Error| {
        Failure::Partial(
            e,
            json!({ "spec": spec.name, "depth": depth, "dims": dims }),
        )
    };
    let report = invariants(&tower).map_err(partial)?;
    let growth = growth_group(&tower)?;
    Ok(json!({
        "spec": spec.name,
        "depth": depth,
        "dims": tower.dims(),
        "m": report.m,
        "sigma_dim": report.sigma_dim,
        "order": report.order,
        "limit_degree": report.limit_degree,
        "verified": report.verified,
        "window": report.window,
        "growth_group": ideal_json(&growth),
    }))
}

fn check_subgroup(opts: &Opts, budget: u32, path: &Path) -> Outcome {
    let spec = load_spec(path)?;
    let level = opts.levels.unwrap_or_else(|| spec.max_order());
    if level < spec.max_order() {
        return Err(Error::LevelTooSmall {
            n: level,
            required: spec.max_order(),
        }
        .into());
    }
    let (ideal, _) = Prolongation::new(&spec).closure(level, opts.lookahead, level + budget)?;
    let report = hopf_check(&spec, &ideal, level)?;
    let checks: Vec<Value> = report.failures.iter().map(|f| json!(f.check)).collect();
    Ok(json!({
        "spec": spec.name,
        "hopf": report.hopf,
        "level": report.level,
        "failures": checks,
        "details": report.failures,
    }))
}

fn morphism(
    opts: &Opts,
    budget: u32,
    op: MorphismOp,
    path: &Path,
    subgroup: Option<&Path>,
) -> Outcome {
    let phi = MorphismFile::from_json(&read(path)?)?;
    let bound = opts.bound.unwrap_or(2);
    match op {
        MorphismOp::Image => {
            let top = opts.levels.unwrap_or(0);
            let levels = (0..=top)
                .map(|i| Ok(json!({ "i": i, "ideal": ideal_json(&image_closure(&phi, i, opts.lookahead, budget)?) })))
                .collect::<std::result::Result<Vec<Value>, Error>>()?;
            Ok(json!({ "levels": levels }))
        }
        MorphismOp::Kernel => Ok(json!({ "kernel": SpecFile::from_spec(&kernel_group(&phi)) })),
        MorphismOp::Preimage => {
            let z = subgroup.ok_or_else(|| Failure::Fatal("preimage needs --subgroup".into()))?;
            let z = load_spec(z)?;
            Ok(json!({ "preimage": SpecFile::from_spec(&preimage_group(&phi, &z)?) }))
        }
        MorphismOp::Classify => Ok(json!({
            "bound": bound,
            "injective": is_injective(&phi, bound, opts.lookahead)?,
            "surjective": is_surjective(&phi, bound, opts.lookahead)?,
        })),
        MorphismOp::Factorize => {
            let f = factorize(&phi, bound, opts.lookahead)?;
            Ok(json!({
                "bound": bound,
                "image": SpecFile::from_spec(&f.image),
                "surjection": morphism_json(&f.surjection),
                "embedding": morphism_json(&f.embedding),
                "stabilized": f.stabilized,
                "composition_ok": f.composition_ok,
            }))
        }
    }
}

fn quotient(opts: &Opts, g: &Path, n: &Path) -> Outcome {
    let g = load_spec(g)?;
    let n = load_spec(n)?;
    let level = opts.levels.unwrap_or(2);
    let q = quotient_spec(&g, &n, opts.degree, level, opts.lookahead)?;
    let partial = q.quotient.clone();
    let check = verify_quotient_invariants(&g, &n, &q.quotient, opts.lookahead)
        .map_err(|e| Failure::Partial(e, json!({ "quotient": SpecFile::from_spec(&partial) })))?;
    Ok(json!({
        "degree": opts.degree,
        "level": level,
        "basis": strings(&q.takeuchi.basis),
        "sigma_generators": strings(&q.takeuchi.sigma_generators),
        "normality_assumed": q.takeuchi.normality_assumed,
        "quotient": SpecFile::from_spec(&q.quotient),
        "projection": morphism_json(&q.projection),
        "stabilized": q.stabilized,
        "injective_surrogate": q.injective_surrogate,
        "kernel_surrogate": q.kernel_surrogate,
        "identities": check,
    }))
}

fn components(opts: &Opts, path: &Path) -> Outcome {
    let spec = load_spec(path)?;
    let level = opts.levels.unwrap_or(0);
    let r = components_at_level(&spec, level)?;
    Ok(json!({
        "spec": spec.name,
        "level": level,
        "algebra_vecdim": r.algebra_vecdim,
        "count": r.components.len(),
        "components": r.summary()?,
        "identity_component": ideal_json(&r.identity_component),
    }))
}

fn sigma_components_cmd(opts: &Opts, path: &Path) -> Outcome {
    let spec = load_spec(path)?;
    let level = opts.levels.unwrap_or(0);
    let r = sigma_components(&spec, level)?;
    Ok(json!({
        "spec": spec.name,
        "count": r.count,
        "window": r.window,
        "next_count": r.next_count,
        "stable": r.stable,
    }))
}

fn closure(opts: &Opts, path: &Path, kind: Kind) -> Outcome {
    let spec = load_spec(path)?;
    let bound = opts.bound.unwrap_or_else(|| spec.max_order() + 1);
    let r = match kind {
        Kind::Reflexive => reflexive_closure(&spec, bound)?,
        Kind::WellMixed => well_mixed_closure_step(&spec.generators, &spec, bound)?,
        Kind::Perfect => perfect_closure_step(&spec.generators, &spec, bound)?,
    };
    Ok(json!({
        "spec": spec.name,
        "kind": r.kind,
        "bound": r.bound,
        "closed": r.closed_flag,
        "generators": strings(&r.generators),
    }))
}

fn stabilizer(opts: &Opts, path: &Path, m: usize) -> Outcome {
    let c = ComoduleFile::from_json(&read(path)?)?;
    let check = check_comodule(&c, opts.levels.unwrap_or(0))?;
    let stab = stabilizer_ideal(&c, m)?;
    Ok(json!({
        "comodule": check,
        "valid": check.valid(),
        "subspace": m,
        "stabilizer": SpecFile::from_spec(&stab),
    }))
}

fn torus(path: &Path) -> Outcome {
    let c = ComoduleFile::from_json(&read(path)?)?;
    let lines: Vec<Value> = torus_decompose(&c)?
        .into_iter()
        .map(|l| {
            let v: Vec<String> = l.vector.iter().map(|x| x.to_string()).collect();
            json!({ "character": l.character.to_string(), "vector": v })
        })
        .collect();
    Ok(json!({ "dim": c.dim(), "lines": lines }))
}

fn budget(opts: &Opts) -> std::result::Result<u32, String> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{BUDGET_ENV}={v} is not a number")),
        Err(_) => Ok(opts.budget),
    }
}

fn dispatch(cli: &Cli, budget: u32) -> Outcome {
    let o = &cli.opts;
    match &cli.command {
        Command::Tower { spec } => tower(o, budget, spec),
        Command::Invariants { spec } => invariants_cmd(o, budget, spec),
        Command::CheckSubgroup { spec } => check_subgroup(o, budget, spec),
        Command::Morphism {
            op,
            morphism: m,
            subgroup,
        } => morphism(o, budget, *op, m, subgroup.as_deref()),
        Command::Quotient { group, normal } => quotient(o, group, normal),
        Command::Components { spec } => components(o, spec),
        Command::SigmaComponents { spec } => sigma_components_cmd(o, spec),
        Command::Closure { spec, kind } => closure(o, spec, *kind),
        Command::Stabilizer { comodule, subspace } => stabilizer(o, comodule, *subspace),
        Command::TorusDecompose { comodule } => torus(comodule),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Tower { .. } => "tower",
        Command::Invariants { .. } => "invariants",
        Command::CheckSubgroup { .. } => "check-subgroup",
        Command::Morphism { .. } => "morphism",
        Command::Quotient { .. } => "quotient",
        Command::Components { .. } => "components",
        Command::SigmaComponents { .. } => "sigma-components",
        Command::Closure { .. } => "closure",
        Command::Stabilizer { .. } => "stabilizer",
        Command::TorusDecompose { .. } => "torus-decompose",
    }
}

fn emit(opts: &Opts, report: &Value) -> std::io::Result<()> {
    let body = match opts.format {
        Format::Json => serde_json::to_string_pretty(report).expect("json values serialize") + "\n",
        Format::Text => text::render(report),
    };
    match &opts.out {
        Some(path) => std::fs::write(path, body),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(body.as_bytes())
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
    let start = Instant::now();
    let budget = match budget(&cli.opts) {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(64);
        }
    };
    let outcome = dispatch(&cli, budget);
    let mut report = Map::new();
    report.insert("command".into(), json!(command_name(&cli.command)));
    report.insert("lookahead".into(), json!(cli.opts.lookahead));
    report.insert("budget".into(), json!(budget));
    let code = match outcome {
        Ok(result) => {
            report.insert("result".into(), result);
            0
        }
        Err(Failure::Partial(e, partial)) => {
            report.insert("error".into(), json!(e.to_string()));
            report.insert("partial".into(), partial);
            2
        }
        Err(Failure::Fatal(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    if cli.opts.timing {
        report.insert(
            "wall_time_ms".into(),
            json!(start.elapsed().as_millis() as u64),
        );
    }
    if let Err(e) = emit(&cli.opts, &Value::Object(report)) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
