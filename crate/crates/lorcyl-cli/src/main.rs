//! `lorcyl` — causal structure of flat and conformally flat Lorentzian
//! metrics on the cylinder, from the command line.
//!
//! Three commands: `classify` (exact causal class plus cone data),
//! `oracle` (brute-force graph re-derivation with cross-checks), and
//! `render` (CSV/PGM plot data for cones, diamonds, and curvature).
//!
//! Exit codes: 0 success, 1 domain error (unreadable or invalid spec,
//! evaluation failure, inconclusive oracle), 2 usage or configuration
//! error.

mod output;

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lorcyl::expr::{DEFAULT_PERIODICITY_SAMPLES, DEFAULT_PERIODICITY_TOL};
use lorcyl::{
    brioschi_curvature, classify, diamond_membership, oracle_classify, validate_periodicity,
    CausalGraph, CylinderPoint, Expression, FlatMetric, GridSpec, MetricField, MetricSpec,
    OracleVerdict, TangentVector, TimeOrientation,
};
use output::{csv_num, report_num, report_vec, write_pgm};

#[derive(Parser)]
#[command(
    name = "lorcyl",
    version,
    about = "Causal structure of flat and conformally flat Lorentzian metrics on the cylinder"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the spacetime of a metric spec file exactly
    Classify {
        /// Metric spec file (flat or conformal)
        spec: PathBuf,
        /// Also print the class of the negated metric
        #[arg(long)]
        dual: bool,
        /// Relative tolerance for the printed circle-direction character
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        eps: f64,
    },
    /// Re-derive the classification from a discretized causal graph
    Oracle {
        /// Metric spec file (flat or conformal)
        spec: PathBuf,
        #[command(flatten)]
        geometry: Geometry,
        /// Chebyshev stencil radius
        #[arg(long, default_value_t = 3)]
        stencil: usize,
        /// Relative tolerance for edge admissibility
        #[arg(long, default_value_t = 1e-12, allow_negative_numbers = true)]
        eps: f64,
        /// Write the reachable set from cell (0,0) (.pgm or .csv)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export plot data
    #[command(subcommand)]
    Render(Render),
}

#[derive(Subcommand)]
enum Render {
    /// Null directions per grid node, as CSV
    Cones {
        /// Metric spec file (flat, conformal, or general)
        spec: PathBuf,
        #[command(flatten)]
        geometry: Geometry,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Causal diamond membership mask, as PGM
    Diamond {
        /// Metric spec file (flat or conformal)
        spec: PathBuf,
        #[command(flatten)]
        geometry: Geometry,
        /// Diamond foot point as "x,y"
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Diamond tip point as "x,y"
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Output PGM path
        #[arg(long)]
        out: PathBuf,
    },
    /// Gaussian curvature per grid node, as CSV
    Curvature {
        /// Metric spec file (flat, conformal, or general)
        spec: PathBuf,
        #[command(flatten)]
        geometry: Geometry,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Geometry {
    /// Grid resolution as "NXxNY"
    #[arg(long, default_value = "64x64")]
    grid: String,
    /// Vertical extent as "ymin:ymax"
    #[arg(long = "y-range", default_value = "-1:1", allow_hyphen_values = true)]
    y_range: String,
}

/// A failed command: domain errors exit 1, configuration errors exit 2
/// (usage errors from argument parsing also exit 2, via clap).
enum Failure {
    Domain(String),
    Config(String),
}

impl Failure {
    fn domain(e: impl Display) -> Failure {
        Failure::Domain(e.to_string())
    }

    fn config(e: impl Display) -> Failure {
        Failure::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Config(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { spec, dual, eps } => cmd_classify(&spec, dual, eps),
        Command::Oracle { spec, geometry, stencil, eps, out } => {
            cmd_oracle(&spec, &geometry, stencil, eps, out.as_deref())
        }
        Command::Render(render) => match render {
            Render::Cones { spec, geometry, out } => cmd_render_cones(&spec, &geometry, &out),
            Render::Diamond { spec, geometry, p, q, out } => {
                cmd_render_diamond(&spec, &geometry, &p, &q, &out)
            }
            Render::Curvature { spec, geometry, out } => {
                cmd_render_curvature(&spec, &geometry, &out)
            }
        },
    }
}

fn cmd_classify(spec_path: &Path, dual: bool, eps: f64) -> Result<(), Failure> {
    let spec = load_spec(spec_path)?;
    let m = flat_representative(&spec)?;
    warn_if_fragile(&m);

    let class = classify(&m);
    println!("class={class}");
    if dual {
        let dual_class = class.dual();
        assert_eq!(classify(&-m), dual_class, "duality relation must hold");
        println!("dual_class={dual_class}");
    }

    let dx = TangentVector::new(1.0, 0.0);
    println!("q_dx={}", report_num(m.quadratic_form(dx)));
    let character = m.classify_vector(dx, eps).map_err(Failure::config)?;
    println!("dx_character={character}");
    let (d1, d2) = m.null_directions();
    println!("null_dir_1={}", report_vec(d1.dx, d1.dy));
    println!("null_dir_2={}", report_vec(d2.dx, d2.dy));
    let t = TimeOrientation::canonical(&m);
    println!("time_orientation={}", report_vec(t.vector().dx, t.vector().dy));
    Ok(())
}

fn cmd_oracle(
    spec_path: &Path,
    geometry: &Geometry,
    stencil: usize,
    eps: f64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let spec = load_spec(spec_path)?;
    let m = flat_representative(&spec)?;
    let grid = parse_geometry(geometry)?;

    let report = oracle_classify(&m, grid, stencil, eps).map_err(Failure::config)?;
    let exact = classify(&m);
    let inferred = report.inferred_class();

    match inferred {
        Some(class) => println!("inferred={class}"),
        None => println!("inferred=Inconclusive"),
    }
    println!("exact={exact}");
    println!("match={}", inferred == Some(exact));
    println!("causal_cycle={}", report.causal_cycle_found);
    println!("timelike_cycle={}", report.timelike_cycle_found);
    println!("timelike_scc_coverage={}", report_num(report.timelike_scc_coverage));
    println!("reach_from_origin={}", report_num(report.reach_from_origin));
    println!("diamond_violations={}", report.diamond_bound_violations);
    println!("diamond_samples={}", report.diamond_samples);
    println!("soundness_violations={}", report.soundness_violations);
    println!("sampled_pairs={}", report.sampled_pairs);
    println!("interior_pairs={}", report.interior_pairs);
    println!("interior_reached={}", report.interior_reached);
    println!("agreement={}", report_num(report.agreement_with_exact));

    if let Some(out) = out {
        let orientation = TimeOrientation::canonical(&m);
        let graph =
            CausalGraph::build(&m, &orientation, grid, stencil, eps).map_err(Failure::config)?;
        let reachable = graph.reachable_from(0);
        write_reachable(out, &grid, &reachable)?;
    }

    if let OracleVerdict::Inconclusive(reason) = report.verdict {
        println!("inconclusive_reason={reason}");
        return Err(Failure::Domain(format!("oracle inconclusive: {reason}")));
    }
    Ok(())
}

fn write_reachable(out: &Path, grid: &GridSpec, reachable: &[bool]) -> Result<(), Failure> {
    match out.extension().and_then(|e| e.to_str()) {
        Some("pgm") => {
            write_pgm(out, grid.nx(), grid.ny(), |i, j| {
                if reachable[grid.index(i, j)] {
                    255
                } else {
                    0
                }
            })
            .map_err(|e| write_error(out, e))
        }
        Some("csv") => {
            let mut text = String::from("i,j,reachable\n");
            for j in 0..grid.ny() {
                for i in 0..grid.nx() {
                    let bit = u8::from(reachable[grid.index(i, j)]);
                    text.push_str(&format!("{i},{j},{bit}\n"));
                }
            }
            fs::write(out, text).map_err(|e| write_error(out, e))
        }
        _ => Err(Failure::Config(format!(
            "unsupported output format for {}: use .pgm or .csv",
            out.display()
        ))),
    }
}

fn cmd_render_cones(spec_path: &Path, geometry: &Geometry, out: &Path) -> Result<(), Failure> {
    let spec = load_spec(spec_path)?;
    let grid = parse_geometry(geometry)?;

    // The two null directions of a conformally scaled metric are those of
    // its flat representative, so only general specs vary per node.
    let mut text = String::from("x,y,d1x,d1y,d2x,d2y\n");
    let mut emit = |x: f64, y: f64, m: &FlatMetric| {
        let (d1, d2) = m.null_directions();
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            csv_num(x),
            csv_num(y),
            csv_num(d1.dx),
            csv_num(d1.dy),
            csv_num(d2.dx),
            csv_num(d2.dy)
        ));
    };
    match &spec {
        MetricSpec::General { e, f, g } => {
            require_periodic_coefficients(e, f, g)?;
            for j in 0..grid.ny() {
                for i in 0..grid.nx() {
                    let (x, y) = (grid.node_x(i), grid.node_y(j));
                    let m = metric_at(e, f, g, x, y)?;
                    emit(x, y, &m);
                }
            }
        }
        _ => {
            let m = flat_representative(&spec)?;
            for j in 0..grid.ny() {
                for i in 0..grid.nx() {
                    emit(grid.node_x(i), grid.node_y(j), &m);
                }
            }
        }
    }
    fs::write(out, text).map_err(|e| write_error(out, e))
}

fn cmd_render_diamond(
    spec_path: &Path,
    geometry: &Geometry,
    p: &str,
    q: &str,
    out: &Path,
) -> Result<(), Failure> {
    let spec = load_spec(spec_path)?;
    let m = flat_representative(&spec)?;
    let grid = parse_geometry(geometry)?;
    let p = parse_point(p)?;
    let q = parse_point(q)?;
    let orientation = TimeOrientation::canonical(&m);

    write_pgm(out, grid.nx(), grid.ny(), |i, j| {
        let r = CylinderPoint::new(grid.center_x(i), grid.center_y(j));
        if diamond_membership(&m, &orientation, p, q, r) {
            255
        } else {
            0
        }
    })
    .map_err(|e| write_error(out, e))
}

fn cmd_render_curvature(spec_path: &Path, geometry: &Geometry, out: &Path) -> Result<(), Failure> {
    let spec = load_spec(spec_path)?;
    let grid = parse_geometry(geometry)?;

    let field = match &spec {
        MetricSpec::Flat(m) => MetricField::constant(grid, m),
        MetricSpec::Conformal { base, psi } => {
            require_periodic(psi, "psi")?;
            let (e, f, g) = (base.e(), base.f(), base.g());
            sample_field(grid, |x, y| {
                let scale = psi.eval(x, y).map(|v| (2.0 * v).exp())?;
                Ok((-e * scale, f * scale, g * scale))
            })?
        }
        MetricSpec::General { e, f, g } => {
            require_periodic_coefficients(e, f, g)?;
            sample_field(grid, |x, y| {
                Ok((-e.eval(x, y)?, f.eval(x, y)?, g.eval(x, y)?))
            })?
        }
    };

    let curvature = brioschi_curvature(&field);
    let mut text = String::from("x,y,K\n");
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            text.push_str(&format!(
                "{},{},{}\n",
                csv_num(grid.node_x(i)),
                csv_num(grid.node_y(j)),
                csv_num(curvature.value(i, j))
            ));
        }
    }
    fs::write(out, text).map_err(|e| write_error(out, e))
}

// ---------------------------------------------------------------------
// Shared helpers.

fn load_spec(path: &Path) -> Result<MetricSpec, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))?;
    lorcyl::parse_metric_spec(&text).map_err(Failure::domain)
}

/// The constant-coefficient metric a command operates on: flat specs
/// directly, conformal specs through their flat representative (causality
/// is conformally invariant; the factor must be periodic in x). General
/// specs have no flat representative.
fn flat_representative(spec: &MetricSpec) -> Result<FlatMetric, Failure> {
    match spec {
        MetricSpec::Flat(m) => Ok(*m),
        MetricSpec::Conformal { base, psi } => {
            require_periodic(psi, "psi")?;
            Ok(*base)
        }
        MetricSpec::General { .. } => Err(Failure::Domain(String::from(
            "this command needs constant coefficients; the spec has expression coefficients",
        ))),
    }
}

fn require_periodic(e: &Expression, name: &str) -> Result<(), Failure> {
    let periodic = validate_periodicity(e, DEFAULT_PERIODICITY_SAMPLES, DEFAULT_PERIODICITY_TOL)
        .map_err(|err| Failure::Domain(format!("{name}: {err}")))?;
    if periodic {
        Ok(())
    } else {
        Err(Failure::Domain(format!("{name} is not periodic in x with period 1")))
    }
}

fn require_periodic_coefficients(
    e: &Expression,
    f: &Expression,
    g: &Expression,
) -> Result<(), Failure> {
    require_periodic(e, "E")?;
    require_periodic(f, "F")?;
    require_periodic(g, "G")
}

fn metric_at(
    e: &Expression,
    f: &Expression,
    g: &Expression,
    x: f64,
    y: f64,
) -> Result<FlatMetric, Failure> {
    let ev = e.eval(x, y).map_err(Failure::domain)?;
    let fv = f.eval(x, y).map_err(Failure::domain)?;
    let gv = g.eval(x, y).map_err(Failure::domain)?;
    FlatMetric::new(ev, fv, gv)
        .map_err(|err| Failure::Domain(format!("at (x, y) = ({x}, {y}): {err}")))
}

fn sample_field(
    grid: GridSpec,
    mut coeffs: impl FnMut(f64, f64) -> Result<(f64, f64, f64), lorcyl::EvalError>,
) -> Result<MetricField, Failure> {
    let mut eval_error: Option<lorcyl::EvalError> = None;
    let field = MetricField::from_fn(grid, |x, y| match coeffs(x, y) {
        Ok(triple) => triple,
        Err(err) => {
            eval_error.get_or_insert(err);
            (-1.0, 0.0, 1.0)
        }
    });
    if let Some(err) = eval_error {
        return Err(Failure::domain(err));
    }
    field.map_err(Failure::domain)
}

fn parse_geometry(geometry: &Geometry) -> Result<GridSpec, Failure> {
    let (nx, ny) = geometry
        .grid
        .split_once(['x', 'X'])
        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
        .ok_or_else(|| {
            Failure::Config(format!("invalid --grid {:?}: expected \"NXxNY\"", geometry.grid))
        })?;
    let (y_min, y_max) = geometry
        .y_range
        .split_once(':')
        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
        .ok_or_else(|| {
            Failure::Config(format!(
                "invalid --y-range {:?}: expected \"ymin:ymax\"",
                geometry.y_range
            ))
        })?;
    GridSpec::new(nx, ny, y_min, y_max).map_err(Failure::config)
}

fn parse_point(text: &str) -> Result<CylinderPoint, Failure> {
    let parse = |t: &str| t.trim().parse::<f64>().ok().filter(|v| v.is_finite());
    text.split_once(',')
        .and_then(|(a, b)| Some(CylinderPoint::new(parse(a)?, parse(b)?)))
        .ok_or_else(|| Failure::Config(format!("invalid point {text:?}: expected \"x,y\"")))
}

fn warn_if_fragile(m: &FlatMetric) {
    let scale = m.e().abs() + m.f().abs() + m.g().abs();
    if m.e().abs() < 1e-9 * scale {
        eprintln!(
            "warning: |E| is below 1e-9 of the coefficient scale; \
             the class sits at the E = 0 knife edge"
        );
    }
}

fn write_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::Domain(format!("cannot write {}: {e}", path.display()))
}
