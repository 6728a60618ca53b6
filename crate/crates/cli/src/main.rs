use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use wassdeg::exact::{parse_rational_list, Rational};
use wassdeg::groebner::{projective_dimension_and_degree, Arithmetic, Budget};
use wassdeg::metric::{FiniteMetric, MetricSpec};
use wassdeg::polar::{
    fixture_multidegree, formula_multidegree, polar_degrees_slicing, ConormalRoute, MultiDegree, SlicingOptions,
};
use wassdeg::polytope::{face_lattice, wasserstein_ball, Face, FaceLattice};
use wassdeg::toric::{ModelSpec, ToricModel};
use wassdeg::wdeg::{
    degree_table_on_lattice, distance_candidate, wasserstein_degree, wasserstein_lp, FaceFilter, Grouping,
    SimplexPoint, TableOptions, WdegOptions,
};

/// Exit status for malformed metrics, models and points.
const EXIT_CONFIG: u8 = 2;
/// Exit status when the requested polar method does not apply.
const EXIT_NO_METHOD: u8 = 3;

#[derive(Debug)]
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn config(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_CONFIG, error: e.into() }
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { code: 1, error: e.into() }
    }
}

#[derive(Parser)]
#[command(name = "wassdeg", version, about = "Wasserstein degrees, polar degrees and Wasserstein balls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Face lattice of the Wasserstein ball of a metric.
    Ball {
        #[command(flatten)]
        metric: MetricArg,
        #[command(flatten)]
        out: Output,
    },
    /// Polar degrees (conormal multidegree) of a toric model.
    Polar {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, value_enum, default_value = "formula")]
        method: Method,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "jacobian")]
        route: Route,
        #[arg(long, value_enum, default_value = "modular")]
        arithmetic: ArithmeticArg,
        #[arg(long)]
        budget_secs: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Wasserstein degrees of the faces of the ball.
    Wdeg {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        metric: MetricArg,
        #[command(flatten)]
        faces: FaceArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Group frequencies by codimension instead of dimension in pretty output.
        #[arg(long)]
        by_codim: bool,
        #[arg(long)]
        journal: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Candidate distance from a point to the model, or the distance between two points.
    Solve {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        metric: MetricArg,
        #[command(flatten)]
        faces: FaceArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Scan every face of the ball.
        #[arg(long)]
        all_faces: bool,
        /// Second point: print the exact distance from `--mu` to it.
        #[arg(long)]
        nu: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Ideal, dimension and degree of a model.
    Model {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        budget_secs: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct MetricArg {
    /// JSON such as '{"type":"l1","n":5}', shorthand such as `hamming:2,2,2`, or a JSON file.
    #[arg(long)]
    metric: String,
}

#[derive(Args)]
struct ModelArg {
    /// JSON such as '{"type":"hirzebruch","a":1,"b":2}', or a JSON file.
    #[arg(long)]
    model: Option<String>,
}

#[derive(Args)]
struct FaceArgs {
    /// Face dimensions to include (repeatable).
    #[arg(long)]
    face_dim: Vec<usize>,
    /// Face codimensions to include (repeatable).
    #[arg(long)]
    face_codim: Vec<usize>,
    /// A single face given by its vertices, e.g. `0,0,1,-1;1,0,0,-1`.
    #[arg(long)]
    face: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    /// Base point as comma-separated rationals; drawn from `--seed` when absent.
    #[arg(long)]
    mu: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Wall-clock limit per face.
    #[arg(long)]
    budget_secs: Option<u64>,
    /// S-pair reduction limit per Gröbner basis.
    #[arg(long)]
    max_steps: Option<u64>,
    #[arg(long)]
    saturate_singular: bool,
    #[arg(long, value_enum, default_value = "modular")]
    arithmetic: ArithmeticArg,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Slicing,
    Fixture,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Jacobian,
    Toric,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArithmeticArg {
    Modular,
    Exact,
}

impl From<ArithmeticArg> for Arithmetic {
    fn from(a: ArithmeticArg) -> Self {
        match a {
            ArithmeticArg::Modular => Arithmetic::Modular,
            ArithmeticArg::Exact => Arithmetic::Exact,
        }
    }
}

fn read_json_arg(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
}

fn parse_metric(arg: &str) -> Result<(FiniteMetric, String), Failure> {
    let spec = match MetricSpec::parse_short(arg) {
        Some(s) => s,
        None => serde_json::from_str(&read_json_arg(arg).map_err(config)?)
            .map_err(|e| config(anyhow!("invalid metric {arg:?}: {e}")))?,
    };
    let m = spec.build().map_err(|e| config(anyhow!("invalid metric: {e}")))?;
    let label = spec.label();
    Ok((m, label))
}

fn parse_model(arg: &ModelArg, budget: &Budget) -> Result<ToricModel, Failure> {
    let Some(s) = &arg.model else {
        return Err(config(anyhow!("--model is required")));
    };
    let spec: ModelSpec = serde_json::from_str(&read_json_arg(s).map_err(config)?)
        .map_err(|e| config(anyhow!("invalid model {s:?}: {e}")))?;
    spec.build(budget).map_err(|e| config(anyhow!("invalid model: {e}")))
}

fn parse_mu(run: &RunArgs, n: usize) -> Result<SimplexPoint, Failure> {
    match &run.mu {
        None => Ok(SimplexPoint::random(run.seed, n)),
        Some(s) => {
            let v = parse_rational_list(s).map_err(|e| config(anyhow!("invalid --mu: {e}")))?;
            if v.len() != n {
                return Err(config(anyhow!("--mu has {} entries, expected {n}", v.len())));
            }
            SimplexPoint::new(v).map_err(config)
        }
    }
}

fn wdeg_options(run: &RunArgs) -> WdegOptions {
    WdegOptions {
        arithmetic: run.arithmetic.into(),
        saturate_singular: run.saturate_singular,
        seed: run.seed,
        face_timeout: run.budget_secs.map(Duration::from_secs),
        max_steps: run.max_steps,
    }
}

fn budget(secs: Option<u64>) -> Budget {
    secs.map_or_else(Budget::unlimited, |s| Budget::with_timeout(Duration::from_secs(s)))
}

fn emit(out: &Output, text: String) -> Result<()> {
    let text = if text.ends_with('\n') { text } else { text + "\n" };
    match &out.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn lattice_for(metric: &FiniteMetric) -> FaceLattice {
    face_lattice(&wasserstein_ball(metric))
}

/// Finds the face whose vertex set is the given `;`-separated list of points.
fn find_face<'a>(lattice: &'a FaceLattice, spec: &str) -> Result<(usize, usize, &'a Face), Failure> {
    let mut want: Vec<Vec<Rational>> = spec
        .split(';')
        .map(parse_rational_list)
        .collect::<Result<_, _>>()
        .map_err(|e| config(anyhow!("invalid --face: {e}")))?;
    want.sort();
    for d in 0..lattice.dim() {
        for (k, f) in lattice.faces(d).iter().enumerate() {
            let mut vs: Vec<Vec<Rational>> =
                f.vertex_indices.iter().map(|&i| lattice.polytope().vertices[i].clone()).collect();
            vs.sort();
            if vs == want {
                return Ok((d, k, f));
            }
        }
    }
    Err(config(anyhow!("no face of the ball has vertices {spec}")))
}

fn check_sizes(model: &ToricModel, metric: &FiniteMetric) -> Result<(), Failure> {
    if model.n() != metric.n() {
        return Err(config(anyhow!("model has {} coordinates, metric has {} states", model.n(), metric.n())));
    }
    Ok(())
}

fn cmd_ball(metric: &MetricArg, out: &Output) -> Result<(), Failure> {
    let (m, label) = parse_metric(&metric.metric)?;
    let l = lattice_for(&m);
    let text = match out.format {
        Format::Json => {
            let faces: Vec<_> = l.all_faces().map(|f| l.face_json(f)).collect();
            serde_json::to_string_pretty(&json!({
                "metric": label,
                "f_vector": l.f_vector(),
                "vertices": l.polytope().vertices,
                "faces": faces,
            }))?
        }
        Format::Csv => {
            let mut s = String::from("dim,count\n");
            for (d, k) in l.f_vector().iter().enumerate() {
                s += &format!("{d},{k}\n");
            }
            s
        }
        Format::Pretty => format!(
            "ball of {label}: dimension {}, f-vector {:?}\n{} vertices, {} facets",
            l.dim(),
            l.f_vector(),
            l.polytope().vertices.len(),
            l.hrep().inequalities.len()
        ),
    };
    emit(out, text)?;
    Ok(())
}

fn multidegree_json(md: &MultiDegree, dim: usize) -> serde_json::Value {
    let mut v = serde_json::to_value(md).unwrap();
    v["polynomial"] = json!(md.to_string());
    v["polar_degrees"] = json!(md.polar_degrees(dim));
    v
}

#[allow(clippy::too_many_arguments)]
fn cmd_polar(
    model: &ModelArg,
    method: Method,
    seed: u64,
    route: Route,
    arithmetic: ArithmeticArg,
    budget_secs: Option<u64>,
    out: &Output,
) -> Result<(), Failure> {
    let b = budget(budget_secs);
    let m = parse_model(model, &b)?;
    let md = match method {
        Method::Formula => formula_multidegree(&m),
        Method::Fixture => fixture_multidegree(&m.label),
        Method::Slicing => {
            let route = match route {
                Route::Jacobian => ConormalRoute::Jacobian,
                Route::Toric => ConormalRoute::Toric,
            };
            let opts = SlicingOptions { seed, route, arithmetic: arithmetic.into(), budget: b };
            Some(polar_degrees_slicing(&m, &opts)?)
        }
    };
    let method_name = match method {
        Method::Formula => "formula",
        Method::Slicing => "slicing",
        Method::Fixture => "fixture",
    };
    let Some(md) = md else {
        return Err(Failure {
            code: EXIT_NO_METHOD,
            error: anyhow!("no {method_name} multidegree is available for {}", m.label),
        });
    };
    let text = match out.format {
        Format::Json | Format::Csv => serde_json::to_string_pretty(&json!({
            "model": m.label,
            "method": method_name,
            "dim": m.dim_projective,
            "multidegree": multidegree_json(&md, m.dim_projective),
        }))?,
        Format::Pretty => format!(
            "{} ({method_name}): {md}\npolar degrees mu_0..mu_{}: {:?}",
            m.label,
            m.dim_projective,
            md.polar_degrees(m.dim_projective)
        ),
    };
    emit(out, text)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_wdeg(
    model: &ModelArg,
    metric: &MetricArg,
    faces: &FaceArgs,
    run: &RunArgs,
    by_codim: bool,
    journal: Option<PathBuf>,
    out: &Output,
) -> Result<(), Failure> {
    let (metric, label) = parse_metric(&metric.metric)?;
    let m = parse_model(model, &Budget::unlimited())?;
    check_sizes(&m, &metric)?;
    let mu = parse_mu(run, m.n())?;
    let lattice = lattice_for(&metric);
    let opts = wdeg_options(run);
    if let Some(spec) = &faces.face {
        let (dim, index, face) = find_face(&lattice, spec)?;
        let outcome = wasserstein_degree(&m, face, &mu, &opts)?;
        let text = match out.format {
            Format::Json | Format::Csv => serde_json::to_string_pretty(&json!({
                "model": m.label,
                "metric": label,
                "face": lattice.face_json(face),
                "face_dim": dim,
                "face_index": index,
                "outcome": outcome,
            }))?,
            Format::Pretty => format!("face dim {dim} #{index}: {outcome}"),
        };
        emit(out, text)?;
        return Ok(());
    }
    let table_opts = TableOptions {
        filter: FaceFilter { dims: faces.face_dim.clone(), codims: faces.face_codim.clone() },
        wdeg: opts,
        jobs: run.jobs,
        journal,
    };
    let table = degree_table_on_lattice(&m, &lattice, &label, &mu, &table_opts)?;
    let text = match out.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
        Format::Pretty => table.pretty(if by_codim { Grouping::Codimension } else { Grouping::Dimension }),
    };
    emit(out, text)?;
    Ok(())
}

fn fmt_point(p: &[f64]) -> String {
    format!("({})", p.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(", "))
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    model: &ModelArg,
    metric: &MetricArg,
    faces: &FaceArgs,
    run: &RunArgs,
    all_faces: bool,
    nu: Option<&str>,
    out: &Output,
) -> Result<(), Failure> {
    let (metric, _) = parse_metric(&metric.metric)?;
    if let Some(nu) = nu {
        let mu = parse_mu(run, metric.n())?;
        let nu = parse_rational_list(nu).map_err(|e| config(anyhow!("invalid --nu: {e}")))?;
        let nu = SimplexPoint::new(nu).map_err(config)?;
        let w = wasserstein_lp(mu.coords(), nu.coords(), &metric).map_err(config)?;
        let text = match out.format {
            Format::Json | Format::Csv => serde_json::to_string_pretty(&json!({ "distance": w, "approx": w.to_f64() }))?,
            Format::Pretty => format!("distance {w} ~ {:.6}", w.to_f64()),
        };
        emit(out, text)?;
        return Ok(());
    }
    let m = parse_model(model, &Budget::unlimited())?;
    check_sizes(&m, &metric)?;
    let mu = parse_mu(run, m.n())?;
    let lattice = lattice_for(&metric);
    let selected: Vec<(usize, usize, &Face)> = if let Some(spec) = &faces.face {
        vec![find_face(&lattice, spec)?]
    } else {
        if faces.face_dim.is_empty() && faces.face_codim.is_empty() && !all_faces {
            return Err(config(anyhow!("choose faces with --face, --face-dim, --face-codim or --all-faces")));
        }
        let ball_dim = lattice.dim();
        (0..ball_dim)
            .filter(|&d| all_faces || faces.face_dim.contains(&d) || faces.face_codim.contains(&(ball_dim - d)))
            .flat_map(|d| lattice.faces(d).iter().enumerate().map(move |(k, f)| (d, k, f)))
            .collect()
    };
    let c = distance_candidate(&m, &metric, &mu, &selected, &wdeg_options(run))?;
    let text = match out.format {
        Format::Json | Format::Csv => serde_json::to_string_pretty(&c)?,
        Format::Pretty => {
            let mut s = match c.face {
                Some((d, k)) => format!("candidate distance {:.6} at nu = {} from face dim {d} #{k}\n", c.lambda, fmt_point(&c.nu)),
                None if c.lambda == 0.0 => "mu lies on the model: distance 0\n".to_string(),
                None => "no real critical point in the simplex on the scanned faces\n".to_string(),
            };
            for f in &c.faces {
                match (&f.error, f.best) {
                    (Some(e), _) => s += &format!("  face dim {} #{}: {e}\n", f.dim, f.index),
                    (None, Some(b)) => s += &format!("  face dim {} #{}: {} real points, best {b:.6}\n", f.dim, f.index, f.points.len()),
                    (None, None) => {}
                }
            }
            s
        }
    };
    emit(out, text)?;
    Ok(())
}

fn cmd_model(model: &ModelArg, budget_secs: Option<u64>, out: &Output) -> Result<(), Failure> {
    let b = budget(budget_secs);
    let m = parse_model(model, &b)?;
    let (dim, degree) = projective_dimension_and_degree(&m.ideal, &b)?;
    let gens: Vec<String> = m.ideal.gens().iter().map(|g| m.ring().display(g)).collect();
    let text = match out.format {
        Format::Json | Format::Csv => serde_json::to_string_pretty(&json!({
            "model": m.label,
            "n": m.n(),
            "A": m.a,
            "scaling": m.scaling,
            "dim": dim,
            "degree": degree,
            "ideal": gens,
        }))?,
        Format::Pretty => {
            format!("{}: dimension {dim} in P^{}, degree {degree}\n{}", m.label, m.n() - 1, gens.join("\n"))
        }
    };
    emit(out, text)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Ball { metric, out } => cmd_ball(&metric, &out),
        Command::Polar { model, method, seed, route, arithmetic, budget_secs, out } => {
            cmd_polar(&model, method, seed, route, arithmetic, budget_secs, &out)
        }
        Command::Wdeg { model, metric, faces, run, by_codim, journal, out } => {
            cmd_wdeg(&model, &metric, &faces, &run, by_codim, journal, &out)
        }
        Command::Solve { model, metric, faces, run, all_faces, nu, out } => {
            cmd_solve(&model, &metric, &faces, &run, all_faces, nu.as_deref(), &out)
        }
        Command::Model { model, budget_secs, out } => cmd_model(&model, budget_secs, &out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_arguments() {
        let (m, label) = parse_metric("hamming:2,2").unwrap();
        assert_eq!((m.n(), label.as_str()), (4, "hamming:2,2"));
        let (m, label) = parse_metric(r#"{"type":"l1","n":5}"#).unwrap();
        assert_eq!((m.n(), label.as_str()), (5, "l1:5"));
        let bad = parse_metric(r#"{"type":"explicit","d":[[0,1,5],[1,0,1],[5,1,0]]}"#).unwrap_err();
        assert_eq!(bad.code, EXIT_CONFIG);
        assert!(bad.error.to_string().contains("triangle"));
    }

    #[test]
    fn face_lookup() {
        let (m, _) = parse_metric("discrete:4").unwrap();
        let l = lattice_for(&m);
        let (d, _, f) = find_face(&l, "1,0,0,-1;0,0,1,-1").unwrap();
        assert_eq!((d, f.vertex_indices.len()), (1, 2));
        assert!(find_face(&l, "1,0,0,-1;0,1,0,-1;0,0,1,-1;1,-1,0,0").is_err());
    }

    #[test]
    fn mu_arguments() {
        let run = RunArgs {
            mu: Some("1/2,1/4,1/4".into()),
            seed: 1,
            jobs: 0,
            budget_secs: None,
            max_steps: None,
            saturate_singular: false,
            arithmetic: ArithmeticArg::Modular,
        };
        assert_eq!(parse_mu(&run, 3).unwrap().coords()[0], Rational::new(1, 2));
        assert_eq!(parse_mu(&run, 4).unwrap_err().code, EXIT_CONFIG);
        let run = RunArgs { mu: Some("1/2,1/4,1/2".into()), ..run };
        assert_eq!(parse_mu(&run, 3).unwrap_err().code, EXIT_CONFIG);
    }

    #[test]
    fn fixture_files_parse() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        for name in ["quartic-curve.json", "twisted-cubic.json"] {
            let arg = ModelArg { model: Some(dir.join(name).to_string_lossy().into_owned()) };
            let m = parse_model(&arg, &Budget::unlimited()).unwrap();
            assert_eq!(m.dim_projective, 1);
        }
    }
}
