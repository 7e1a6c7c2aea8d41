//! Command-line front end. Properties are numbered from 1 on the command
//! line.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::constructions::{circle_epsilon_max, gen_circle, gen_cube_two_maxima, gen_missing_label, gen_random_all_labels};
use crate::data::LabeledPointSet;
use crate::error::{Error, Result};
use crate::geometry::OrthoBasis;
use crate::io::{
    load_dataset, load_report, save_dataset, to_json, write_report, DatasetFile, DatasetMeta, Grid, LoadedDataset,
    ReportFile, ReportFormat,
};
use crate::linalg;
use crate::overlap::{f_value, maximize_overlap, ClimbOptions, OverlapSpec};
use crate::separability::{
    bc_separable_bruteforce, common_point, kirchberger_reduce, linear_separability, one_infty_separable,
    one_infty_witness, strict_slack, Hyperplane, Predicate, DEFAULT_BRUTE_FORCE_CAP,
};
use crate::synthesis::{
    construct_eliminating_projection, multi_projection_driver, perturb_general_position, verify_after_projection,
    DriverOptions, PerturbOptions, SynthesisOutcome, SynthesisProblem,
};
use crate::Tolerances;

#[derive(Debug, Parser)]
#[command(name = "projsep", version, about = "Separability certificates and separation-preserving projections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a fixture dataset.
    Generate(GenerateArgs),
    /// Decide separability of one property and print the certificate.
    Separate(SeparateArgs),
    /// Shrink a common-point certificate to a small witness.
    Reduce(ReduceArgs),
    /// Single projection eliminating strict linear separability.
    Construct(ConstructArgs),
    /// Several projections eliminating a general predicate.
    Multi(MultiArgs),
    /// Evaluate the overlap function at a vector or over a grid.
    Overlap(OverlapArgs),
    /// Hill-climb the overlap over projection vectors.
    Optimize(OptimizeArgs),
    /// Re-check separability after a projection and validate a report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Shared {
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// LP feasibility tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Record wall-clock time in reports (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

impl Shared {
    fn tolerances(&self) -> Result<Tolerances> {
        let mut t = Tolerances::default();
        if let Some(v) = self.tol {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::BadParams(format!("--tol must be positive, got {v}")));
            }
            t.lp = v;
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Cube,
    Circle,
    MissingLabel,
    Random,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Points (random) or circle size (circle).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    pub margin: f64,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Debug, Args)]
pub struct SeparateArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub property: usize,
    /// Require strict separation (linear predicate).
    #[arg(long)]
    pub strict: bool,
    #[arg(long, default_value = "linear")]
    pub predicate: String,
    /// Point cap for the exhaustive (b,c) search.
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub property: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Property whose separability is eliminated.
    #[arg(long, default_value_t = 1)]
    pub property: usize,
    /// Projected dataset.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Also perturb the vector to remove non-strict separability.
    #[arg(long)]
    pub perturb: bool,
    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Debug, Args)]
pub struct MultiArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub property: usize,
    #[arg(long, default_value = "linear")]
    pub predicate: String,
    #[arg(long, default_value_t = 12)]
    pub witness_cap: usize,
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Svm,
    Interval,
}

#[derive(Debug, Args)]
pub struct OverlapArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub property: usize,
    #[arg(long, value_enum, default_value = "svm")]
    pub kind: KindArg,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Projection vector, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    /// Grid resolution over the chart (x/z, y/z); three-dimensional data only.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Chart range `lo,hi` on both axes.
    #[arg(long, default_value = "-0.5,1.5", allow_hyphen_values = true)]
    pub range: String,
    /// Properties that must stay strictly separable; other grid points are
    /// left empty.
    #[arg(long, value_delimiter = ',')]
    pub preserve: Vec<usize>,
    /// CSV grid output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub property: usize,
    #[arg(long, value_enum, default_value = "svm")]
    pub kind: KindArg,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 20)]
    pub starts: usize,
    /// Properties whose separating hyperplanes the vector must be parallel to.
    #[arg(long, value_delimiter = ',')]
    pub keep: Vec<usize>,
    /// Properties that must stay strictly separable.
    #[arg(long, value_delimiter = ',')]
    pub preserve: Vec<usize>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Report whose basis and certificates are checked.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Projected dataset carrying the basis in its metadata.
    #[arg(long)]
    pub projection: Option<PathBuf>,
    /// Property whose stored plane is not a keep-plane.
    #[arg(long, default_value_t = 1)]
    pub property: usize,
    /// Fresh verification report.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub shared: Shared,
}

/// Parses `argv` (including the program name) and runs the command. Returns
/// 0 on success, 1 on a domain error and 2 on a usage error.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(Error::BadParams(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Generate(a) => generate(a),
        Command::Separate(a) => separate(a),
        Command::Reduce(a) => reduce(a),
        Command::Construct(a) => construct(a),
        Command::Multi(a) => multi(a),
        Command::Overlap(a) => overlap(a),
        Command::Optimize(a) => optimize(a),
        Command::Verify(a) => verify(a),
    }
}

fn property_index(data: &LabeledPointSet, one_based: usize) -> Result<usize> {
    if one_based == 0 || one_based > data.k() {
        return Err(Error::BadParams(format!(
            "property must be between 1 and {}, got {one_based}",
            data.k()
        )));
    }
    Ok(one_based - 1)
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    print!("{}", to_json(value)?);
    Ok(())
}

fn finish(mut report: ReportFile, path: Option<&Path>, started: Instant, shared: &Shared) -> Result<()> {
    if shared.timing {
        report.timing_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    if let Some(p) = path {
        write_report(&report, p, ReportFormat::Json)?;
    }
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<()> {
    let (data, planes, generator, params) = match a.kind {
        GenKind::Cube => {
            let eps = a.epsilon.unwrap_or(0.2);
            (gen_cube_two_maxima(eps)?, None, "cube", json!({ "epsilon": eps }))
        }
        GenKind::Circle => {
            let n = a.n.unwrap_or(9);
            let eps = a.epsilon.unwrap_or(0.5 * circle_epsilon_max(n));
            let c = gen_circle(n, eps)?;
            let labels = vec![c.p.iter().map(|_| -1).chain(c.q.iter().map(|_| 1)).collect()];
            let points = c.p.into_iter().chain(c.q).collect();
            (LabeledPointSet::new(points, labels)?, None, "circle", json!({ "n": n, "epsilon": eps }))
        }
        GenKind::MissingLabel => {
            let k = a.k.unwrap_or(2);
            let d = a.d.unwrap_or(k);
            let eps = a.epsilon.unwrap_or(0.1);
            (
                gen_missing_label(k, d, eps)?,
                None,
                "missing_label",
                json!({ "k": k, "d": d, "epsilon": eps }),
            )
        }
        GenKind::Random => {
            let n = a.n.unwrap_or(40);
            let d = a.d.unwrap_or(3);
            let k = a.k.unwrap_or(2);
            let (set, planes) = gen_random_all_labels(n, d, k, a.margin, a.shared.seed)?;
            (
                set,
                Some(planes),
                "random_all_labels",
                json!({ "n": n, "d": d, "k": k, "margin": a.margin }),
            )
        }
    };
    let meta = DatasetMeta {
        generator: Some(generator.into()),
        seed: (a.kind == GenKind::Random).then_some(a.shared.seed),
        params: Some(params),
        basis: None,
    };
    save_dataset(&a.out, &DatasetFile::new(&data, planes, Some(meta)))
}

fn separate(a: SeparateArgs) -> Result<()> {
    let started = Instant::now();
    let tol = a.shared.tolerances()?;
    let ds = load_dataset(&a.input)?;
    let i = property_index(&ds.data, a.property)?;
    let predicate: Predicate = a.predicate.parse()?;
    let (p, q) = ds.data.split(i);
    let result = match predicate {
        Predicate::Linear => {
            let res = linear_separability(&p, &q, a.strict, &tol)?;
            res.validate(&p, &q, 1e-9, 1e-7)?;
            json!({ "predicate": "linear", "property": a.property, "strict": a.strict, "result": res })
        }
        Predicate::Bc { b, c } => {
            let out = bc_separable_bruteforce(&p, &q, b, c, a.cap, &tol)?;
            json!({ "predicate": predicate.to_string(), "property": a.property, "separable": out.separable, "cover": out.cover })
        }
        Predicate::OneInfinity => {
            let out = one_infty_separable(&p, &q, &tol)?;
            let witness = match (out.p_star, out.q_star) {
                (Some(ps), Some(qs)) => Some(one_infty_witness(&p, &q, ps, qs, &tol)?),
                _ => None,
            };
            json!({ "predicate": "1,inf", "property": a.property, "separable": out.separable, "p_star": out.p_star, "q_star": out.q_star, "witness": witness })
        }
    };
    print_json(&result)?;
    let mut report = ReportFile::new("separate");
    report.predicate = Some(predicate.to_string());
    report.properties = verify_after_projection(&ds.data, &OrthoBasis::empty(ds.data.dim()), &[], &tol)?.properties;
    report.outcome = Some(result);
    finish(report, a.report.as_deref(), started, &a.shared)
}

fn reduce(a: ReduceArgs) -> Result<()> {
    let tol = a.shared.tolerances()?;
    let ds = load_dataset(&a.input)?;
    let i = property_index(&ds.data, a.property)?;
    let (neg, pos) = ds.data.split_indices(i);
    let (p, q) = ds.data.split(i);
    let cp = common_point(&p, &q, &tol)?;
    let kw = kirchberger_reduce(&p, &q, &cp.x, &cp.lambda, &cp.mu, &tol)?;
    let out = json!({
        "property": a.property,
        "negative_points": kw.p_idx.iter().map(|&j| neg[j]).collect::<Vec<_>>(),
        "positive_points": kw.q_idx.iter().map(|&j| pos[j]).collect::<Vec<_>>(),
        "lambda": kw.lambda,
        "mu": kw.mu,
        "x": kw.x,
        "size": kw.size(),
    });
    if let Some(path) = &a.out {
        std::fs::write(path, to_json(&out)?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    print_json(&out)
}

/// Keep-planes stored in the dataset, when there is one per property.
fn stored_keep_planes(ds: &LoadedDataset, hidden: usize) -> Option<Vec<Hyperplane>> {
    let planes = ds.planes.as_ref()?;
    (planes.len() == ds.data.k()).then(|| {
        planes
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != hidden)
            .map(|(_, h)| h.clone())
            .collect()
    })
}

fn projection_report(
    command: &str,
    data: &LabeledPointSet,
    basis: &OrthoBasis,
    keep_normals: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<ReportFile> {
    let v = verify_after_projection(data, basis, keep_normals, tol)?;
    let mut report = ReportFile::new(command);
    report.basis = basis.vectors().to_vec();
    report.r = basis.len();
    report.properties = v.properties;
    report.residuals = v.residuals;
    report.max_residual = v.max_residual;
    Ok(report)
}

fn write_projection(path: &Path, data: &LabeledPointSet, basis: &OrthoBasis, projected: Vec<Vec<f64>>) -> Result<()> {
    let meta = DatasetMeta {
        generator: Some("projection".into()),
        seed: None,
        params: None,
        basis: Some(basis.vectors().to_vec()),
    };
    save_dataset(path, &DatasetFile::new(&data.with_points(projected)?, None, Some(meta)))
}

fn construct(a: ConstructArgs) -> Result<()> {
    let started = Instant::now();
    let tol = a.shared.tolerances()?;
    let ds = load_dataset(&a.input)?;
    let hidden = property_index(&ds.data, a.property)?;
    let prob = SynthesisProblem {
        data: ds.data.clone(),
        hidden,
        keep_planes: stored_keep_planes(&ds, hidden),
    };
    let planes = prob.resolve_keep_planes(&tol)?;
    let normals: Vec<Vec<f64>> = planes.iter().map(|h| h.normal.clone()).collect();
    let (basis, outcome) = match construct_eliminating_projection(&prob, &tol) {
        Ok(e) => {
            let mut basis = e.outcome.basis.clone();
            let mut outcome = json!({
                "outcome": "projection",
                "w": e.w,
                "witness": e.witness,
                "p_star": e.p_star,
                "r": e.r,
                "certificate": e.certificate,
            });
            if a.perturb {
                let (neg, pos) = ds.data.split(hidden);
                let pert = perturb_general_position(&neg, &pos, &e.w, &PerturbOptions::default(), &tol)?;
                basis = OrthoBasis::from_orthonormal(ds.data.dim(), vec![pert.w.clone()], tol.orth)?;
                outcome["perturbation"] = serde_json::to_value(&pert).map_err(|e| Error::Io(e.to_string()))?;
            }
            (Some(basis), outcome)
        }
        Err(Error::NotAllLabels { k, present }) => {
            log::info!("only {present} of {} label tuples present; using the general driver", 1usize << k);
            match multi_projection_driver(&prob, &Predicate::Linear, &DriverOptions::default(), &tol)? {
                SynthesisOutcome::Projection(p) => {
                    let v = serde_json::to_value(&p).map_err(|e| Error::Io(e.to_string()))?;
                    (Some(p.basis), json!({ "outcome": "projection", "driver": v }))
                }
                imp @ SynthesisOutcome::Impossible { .. } => {
                    (None, serde_json::to_value(&imp).map_err(|e| Error::Io(e.to_string()))?)
                }
            }
        }
        Err(e) => return Err(e),
    };
    let basis_used = basis.clone().unwrap_or_else(|| OrthoBasis::empty(ds.data.dim()));
    let mut report = projection_report("construct", &ds.data, &basis_used, &normals, &tol)?;
    report.predicate = Some("linear".into());
    report.outcome = Some(outcome);
    if let (Some(path), Some(b)) = (&a.out, &basis) {
        let projected = crate::geometry::project_points(ds.data.points(), b)?;
        write_projection(path, &ds.data, b, projected)?;
    }
    print_summary(&report);
    finish(report, a.report.as_deref(), started, &a.shared)
}

fn multi(a: MultiArgs) -> Result<()> {
    let started = Instant::now();
    let tol = a.shared.tolerances()?;
    let ds = load_dataset(&a.input)?;
    let hidden = property_index(&ds.data, a.property)?;
    let predicate: Predicate = a.predicate.parse()?;
    let prob = SynthesisProblem {
        data: ds.data.clone(),
        hidden,
        keep_planes: stored_keep_planes(&ds, hidden),
    };
    let normals: Vec<Vec<f64>> = prob.resolve_keep_planes(&tol)?.into_iter().map(|h| h.normal).collect();
    let opts = DriverOptions {
        witness_cap: a.witness_cap,
        brute_force_cap: a.cap,
        ..DriverOptions::default()
    };
    let outcome = multi_projection_driver(&prob, &predicate, &opts, &tol)?;
    let basis = match &outcome {
        SynthesisOutcome::Projection(p) => p.basis.clone(),
        SynthesisOutcome::Impossible { .. } => OrthoBasis::empty(ds.data.dim()),
    };
    let mut report = projection_report("multi", &ds.data, &basis, &normals, &tol)?;
    report.predicate = Some(predicate.to_string());
    report.outcome = Some(serde_json::to_value(&outcome).map_err(|e| Error::Io(e.to_string()))?);
    if let (Some(path), SynthesisOutcome::Projection(p)) = (&a.out, &outcome) {
        write_projection(path, &ds.data, &p.basis, p.projected.clone())?;
    }
    match &outcome {
        SynthesisOutcome::Projection(p) => println!("projection with r = {} (witness size {})", p.basis.len(), p.witness.len()),
        SynthesisOutcome::Impossible { reason, .. } => println!("impossible: {reason}"),
    }
    finish(report, a.report.as_deref(), started, &a.shared)
}

fn overlap_spec(kind: KindArg, lambda: f64, property: usize) -> OverlapSpec {
    let mut spec = match kind {
        KindArg::Svm => OverlapSpec::svm(lambda),
        KindArg::Interval => OverlapSpec::interval(),
    };
    spec.property = property;
    spec
}

fn parse_vector(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::BadParams(format!("'{t}' is not a number")))
        })
        .collect()
}

fn projection_slack(data: &LabeledPointSet, w: &[f64], preserve: &[usize]) -> Result<f64> {
    let basis = OrthoBasis::from_orthonormal(w.len(), vec![w.to_vec()], 1e-8)?;
    let projected = crate::geometry::project_points(data.points(), &basis)?;
    let mut worst = f64::INFINITY;
    for &i in preserve {
        let (a, b) = data.split_indices(i);
        let pa: Vec<Vec<f64>> = a.iter().map(|&j| projected[j].clone()).collect();
        let pb: Vec<Vec<f64>> = b.iter().map(|&j| projected[j].clone()).collect();
        worst = worst.min(strict_slack(&pa, &pb)?);
    }
    Ok(worst)
}

fn overlap(a: OverlapArgs) -> Result<()> {
    let started = Instant::now();
    let tol = a.shared.tolerances()?;
    let ds = load_dataset(&a.input)?;
    let data = &ds.data;
    let i = property_index(data, a.property)?;
    let spec = overlap_spec(a.kind, a.lambda, i);
    let preserve: Vec<usize> = a.preserve.iter().map(|&p| property_index(data, p)).collect::<Result<_>>()?;
    let mut report = ReportFile::new("overlap");
    match (&a.w, a.grid) {
        (Some(w), None) => {
            let w = linalg::normalized(&parse_vector(w)?, tol.geom)
                .ok_or_else(|| Error::BadParams("w must be nonzero".into()))?;
            let value = f_value(data, &w, &spec)?;
            println!("{value}");
            report.outcome = Some(json!({ "w": w, "value": value }));
        }
        (None, Some(n)) => {
            if data.dim() != 3 {
                return Err(Error::BadParams("grid evaluation needs three-dimensional data".into()));
            }
            if n < 2 {
                return Err(Error::BadParams("grid needs at least 2 ticks per axis".into()));
            }
            let range = parse_vector(&a.range)?;
            if range.len() != 2 || !(range[0] < range[1]) {
                return Err(Error::BadParams("range must be lo,hi with lo < hi".into()));
            }
            let ticks: Vec<f64> = (0..n)
                .map(|t| range[0] + (range[1] - range[0]) * t as f64 / (n - 1) as f64)
                .collect();
            let mut values = Vec::with_capacity(n);
            for &y in &ticks {
                let mut row = Vec::with_capacity(n);
                for &x in &ticks {
                    let w = linalg::scale(&[x, y, 1.0], 1.0 / (x * x + y * y + 1.0).sqrt());
                    let inside = preserve.is_empty() || projection_slack(data, &w, &preserve)? > tol.lp;
                    row.push(if inside { Some(f_value(data, &w, &spec)?) } else { None });
                }
                values.push(row);
            }
            let grid = Grid {
                xs: ticks.clone(),
                ys: ticks,
                values,
            };
            if let Some(path) = &a.out {
                let mut g = ReportFile::new("overlap");
                g.grid = Some(grid.clone());
                write_report(&g, path, ReportFormat::CsvGrid)?;
            }
            report.grid = Some(grid);
        }
        _ => return Err(Error::BadParams("give exactly one of --w and --grid".into())),
    }
    finish(report, a.report.as_deref(), started, &a.shared)
}

fn optimize(a: OptimizeArgs) -> Result<()> {
    let started = Instant::now();
    let tol = a.shared.tolerances()?;
    let ds = load_dataset(&a.input)?;
    let data = &ds.data;
    let i = property_index(data, a.property)?;
    let spec = overlap_spec(a.kind, a.lambda, i);
    let mut keep_normals = Vec::new();
    for &p in &a.keep {
        let j = property_index(data, p)?;
        let plane = match ds.planes.as_ref().filter(|pl| pl.len() == data.k()) {
            Some(pl) => pl[j].clone(),
            None => {
                let (neg, pos) = data.split(j);
                crate::separability::max_margin_hyperplane(&neg, &pos, &tol)?
                    .ok_or(Error::NotSeparableInput { property: p })?
                    .0
            }
        };
        keep_normals.push(plane.normal);
    }
    let opts = ClimbOptions {
        starts: a.starts,
        seed: a.shared.seed,
        preserve: a.preserve.iter().map(|&p| property_index(data, p)).collect::<Result<_>>()?,
        ..ClimbOptions::default()
    };
    let res = maximize_overlap(data, &spec, &keep_normals, &opts, &tol)?;
    for (c, m) in res.maxima.iter().enumerate() {
        println!("maximum {}: value {} from {} starts, w = {:?}", c + 1, m.value, m.members.len(), m.w);
    }
    let basis = OrthoBasis::from_orthonormal(data.dim(), vec![res.best.clone()], 1e-8)?;
    let mut report = projection_report("optimize", data, &basis, &keep_normals, &tol)?;
    report.outcome = Some(serde_json::to_value(&res).map_err(|e| Error::Io(e.to_string()))?);
    finish(report, a.report.as_deref(), started, &a.shared)
}

fn print_summary(report: &ReportFile) {
    println!("r = {}, max residual {:e}", report.r, report.max_residual);
    for p in &report.properties {
        let state = if p.strictly_separable {
            "strictly separable"
        } else if p.weakly_separable {
            "weakly separable only"
        } else {
            "inseparable"
        };
        println!("property {}: {state}", p.property);
    }
}

fn verify(a: VerifyArgs) -> Result<()> {
    let started = Instant::now();
    let tol = a.shared.tolerances()?;
    let ds = load_dataset(&a.input)?;
    let data = &ds.data;
    let d = data.dim();
    let loaded = a.report.as_deref().map(load_report).transpose()?;
    let basis_vectors = match (&loaded, &a.projection) {
        (Some(_), Some(_)) => return Err(Error::BadParams("give at most one of --report and --projection".into())),
        (Some(r), None) => r.basis.clone(),
        (None, Some(p)) => load_dataset(p)?.metadata.basis.unwrap_or_default(),
        (None, None) => Vec::new(),
    };
    let basis = OrthoBasis::from_orthonormal(d, basis_vectors, 1e-9)?;
    if let Some(r) = &loaded {
        r.validate(data, 1e-7)?;
    }
    let hidden = property_index(data, a.property)?;
    let keep_normals: Vec<Vec<f64>> = stored_keep_planes(&ds, hidden)
        .unwrap_or_default()
        .into_iter()
        .map(|h| h.normal)
        .collect();
    let mut report = projection_report("verify", data, &basis, &keep_normals, &tol)?;
    if let Some(r) = &loaded {
        for (old, new) in r.properties.iter().zip(&report.properties) {
            if old.strictly_separable != new.strictly_separable || old.weakly_separable != new.weakly_separable {
                return Err(Error::InvariantViolation(format!(
                    "report disagrees with recomputation for property {}",
                    old.property
                )));
            }
        }
        report.predicate = r.predicate.clone();
    }
    print_summary(&report);
    finish(report, a.out.as_deref(), started, &a.shared)
}
