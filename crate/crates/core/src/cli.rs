//! The `orchard` command line.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::conic::{
    affine_coefficient, image_count, involution_value, parabola_collinear, reps_collinear, ExternalPoint,
};
use crate::cubic::fit_cubics;
use crate::error::{Error, Result};
use crate::generators::{
    gen_cubic_power, gen_hyperbola_with_directions, gen_ngon_directions, gen_parabola_with_directions,
    gen_parallel_aps, gen_triangle_ratios_default, Example,
};
use crate::group_law::{group_check, GroupDescription, GroupValue, Triangle, WeierstrassCurve};
use crate::io::{format_rational, parse_rational, points_to_json, read_points_file, write_points_file};
use crate::plot::render_svg;
use crate::projective::{ProjPoint, Rational};
use crate::rich_lines::{direction_count, green_tao_bound, spanned_lines, tripartite_count, Pattern};
use crate::surface::{dichotomy_experiment, few_directions_experiment, int_range, quadruple_experiment, CurveSpec};
use crate::tenpoint::{build_tenpoint, extend_cantilever, lattice_report, nine_point_report, CurveModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "orchard", version, about = "Exact triple-line counting and cubic configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a named configuration as a JSON points file.
    Generate {
        #[arg(long)]
        example: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count k-rich lines or tripartite triple lines.
    Count {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        exactly: bool,
        #[arg(long)]
        tripartite: Option<String>,
    },
    /// Count distinct directions spanned by the points.
    Directions {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// The Green–Tao maximum of 3-rich lines.
    Bound {
        #[arg(long)]
        n: u64,
    },
    /// Fit the cubics through up to twelve points.
    FitCubic {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        indices: Option<Vec<usize>>,
    },
    /// Check a group description exhaustively on a generated configuration.
    GroupCheck {
        #[arg(long, value_enum)]
        config: GroupConfig,
        #[arg(long)]
        n: usize,
    },
    /// Build a ten point configuration and optionally extend it.
    Tenpoint(TenpointArgs),
    /// Same as `tenpoint`.
    Cantilever(TenpointArgs),
    /// Parabola collinearity through an external point.
    Conic {
        #[arg(long, value_enum)]
        mode: ConicMode,
        /// External point `a,b`.
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xs: Option<Vec<String>>,
        #[arg(long, allow_hyphen_values = true)]
        e2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        e3: Option<String>,
    },
    /// Collinear triples on integer samples of `y = x^d`.
    Experiment {
        #[arg(long, value_enum)]
        kind: ExperimentKind,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        n: usize,
    },
    /// Render a points file as SVG.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        mark_triple_lines: bool,
    },
}

#[derive(clap::Args, Debug)]
struct TenpointArgs {
    /// `cuspidal` or `weierstrass:a,b`.
    #[arg(long)]
    curve: String,
    /// Three parameters; points are written `x:y` on a Weierstrass curve.
    #[arg(long, allow_hyphen_values = true)]
    base: String,
    #[arg(long, allow_hyphen_values = true)]
    delta: String,
    #[arg(long)]
    extend: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GroupConfig {
    Example1,
    Example4,
    Triangle,
    ParabolaInf,
    HyperbolaInf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConicMode {
    Collinear,
    Involution,
    ImageCount,
    Reps,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExperimentKind {
    Dichotomy,
    Quadruple,
    Directions,
}

enum Failure {
    Usage(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn w(out: &mut dyn Write, s: impl AsRef<str>) -> CmdResult {
    out.write_all(s.as_ref().as_bytes()).map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

/// Runs the command line with `args` (including the program name) and
/// returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Invariant(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_INVARIANT
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Generate { example, n, out: path } => generate(&example, n, path, out),
        Command::Count { input, k, exactly, tripartite } => {
            let set = read_points_file(&input)?;
            let count = match tripartite {
                Some(p) => tripartite_count(&set, p.parse::<Pattern>()?)?,
                None => spanned_lines(&set)?.k_rich_count(k, exactly)?,
            };
            w(out, format!("{count}\n"))
        }
        Command::Directions { input } => {
            let set = read_points_file(&input)?;
            w(out, format!("{}\n", direction_count(&set)?))
        }
        Command::Bound { n } => w(out, format!("{}\n", green_tao_bound(n)?)),
        Command::FitCubic { input, indices } => fit_cubic(input, indices, out),
        Command::GroupCheck { config, n } => group_check_cmd(config, n, out),
        Command::Tenpoint(a) | Command::Cantilever(a) => tenpoint(a, out),
        Command::Conic { mode, e, x, y, xs, e2, e3 } => conic(mode, &e, x, y, xs, e2, e3, out),
        Command::Experiment { kind, degree, n } => experiment(kind, degree, n, out, err),
        Command::Plot { input, out: path, mark_triple_lines } => {
            let set = read_points_file(&input)?;
            let marked = if mark_triple_lines {
                spanned_lines(&set)?.triple_lines().map(|e| e.line.clone()).collect()
            } else {
                Vec::new()
            };
            std::fs::write(&path, render_svg(&set, &marked))
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
        }
    }
}

fn generate(example: &str, n: usize, path: Option<PathBuf>, out: &mut dyn Write) -> CmdResult {
    let example: Example = example.parse()?;
    if example == Example::Ngon {
        let cfg = gen_ngon_directions(n)?;
        return w(
            out,
            format!("n,chords,direction_classes\n{},{},{}\n", n, cfg.chord_count(), cfg.class_count()),
        );
    }
    let set = example.point_set(n)?;
    match path {
        Some(p) => Ok(write_points_file(&p, &set)?),
        None => w(out, points_to_json(&set)),
    }
}

fn fit_cubic(input: PathBuf, indices: Option<Vec<usize>>, out: &mut dyn Write) -> CmdResult {
    let set = read_points_file(&input)?;
    let pts: Vec<ProjPoint> = match indices {
        None => set.points().to_vec(),
        Some(idx) => idx
            .iter()
            .map(|&i| {
                set.points().get(i).cloned().ok_or_else(|| Error::invalid(format!("index {i} out of range")))
            })
            .collect::<Result<_>>()?,
    };
    let basis = fit_cubics(&pts)?;
    let mut s = format!("dimension {}\n", basis.len());
    for f in &basis {
        s.push_str(&format!("{}\n", f.to_form()));
    }
    w(out, s)
}

fn group_check_cmd(config: GroupConfig, n: usize, out: &mut dyn Write) -> CmdResult {
    let (name, set, desc) = match config {
        GroupConfig::Example1 => ("example1", gen_parallel_aps(n)?, GroupDescription::ThreeParallelLines),
        GroupConfig::Example4 => ("example4", gen_cubic_power(n)?, GroupDescription::CuspidalCubic),
        GroupConfig::Triangle => {
            ("triangle", gen_triangle_ratios_default(n)?, GroupDescription::TriangleMenelaus(Triangle::standard()))
        }
        GroupConfig::ParabolaInf => {
            ("parabola-inf", gen_parabola_with_directions(n)?, GroupDescription::ParabolaPlusInfinity)
        }
        GroupConfig::HyperbolaInf => {
            ("hyperbola-inf", gen_hyperbola_with_directions(n)?, GroupDescription::HyperbolaPlusInfinity)
        }
    };
    let r = group_check(&set, &desc)?;
    w(
        out,
        format!(
            "config,n,points,checked,collinear,failures\n{name},{n},{},{},{},{}\n",
            set.len(),
            r.checked,
            r.collinear,
            r.failures
        ),
    )?;
    if r.passed() {
        Ok(())
    } else {
        Err(Failure::Invariant(format!(
            "collinear iff identity fails on {} of {} triples",
            r.failures, r.checked
        )))
    }
}

fn parse_pair(s: &str, sep: char) -> Result<(Rational, Rational)> {
    let (a, b) = s
        .split_once(sep)
        .ok_or_else(|| Error::Parse(format!("expected two values separated by {sep:?}: {s:?}")))?;
    Ok((parse_rational(a)?, parse_rational(b)?))
}

fn parse_curve(s: &str) -> Result<CurveModel> {
    if s == "cuspidal" {
        return Ok(CurveModel::Cuspidal);
    }
    match s.strip_prefix("weierstrass:") {
        Some(ab) => {
            let (a, b) = parse_pair(ab, ',')?;
            Ok(CurveModel::Weierstrass(WeierstrassCurve::new(a, b)?))
        }
        None => Err(Error::Parse(format!("unknown curve {s:?}"))),
    }
}

fn parse_param(curve: &CurveModel, s: &str) -> Result<GroupValue> {
    match curve {
        CurveModel::Cuspidal => Ok(GroupValue::Scalar(crate::group_law::GroupElement::additive(parse_rational(s)?))),
        CurveModel::Weierstrass(c) => {
            let (x, y) = parse_pair(s, ':')?;
            let p = ProjPoint::affine(&x, &y);
            if !c.contains(&p) {
                return Err(Error::OffCurve(format!("{p}")));
            }
            Ok(GroupValue::Point(p))
        }
    }
}

fn tenpoint(a: TenpointArgs, out: &mut dyn Write) -> CmdResult {
    let curve = parse_curve(&a.curve)?;
    let base: Vec<GroupValue> = a.base.split(',').map(|s| parse_param(&curve, s)).collect::<Result<_>>()?;
    let base: [GroupValue; 3] =
        base.try_into().map_err(|_| Error::Parse("--base needs exactly three parameters".into()))?;
    let delta = parse_param(&curve, &a.delta)?;
    let cfg = build_tenpoint(curve.clone(), base, delta)?;
    let mut s = String::from("name,point\n");
    for (name, p) in cfg.named_points() {
        s.push_str(&format!("{name},{p}\n"));
    }
    let incidences = cfg.defining_incidences();
    s.push_str(&format!(
        "defining incidences: {}/7\nderived incidence A2 B3 C1: {}\n",
        incidences.iter().filter(|b| **b).count(),
        cfg.derived_incidence()
    ));
    let nine = nine_point_report(&cfg)?;
    s.push_str(&format!(
        "cubics through nine points: {}\nnine point check: {}\n",
        nine.basis.len(),
        nine.passed()
    ));
    let mut violated = Vec::new();
    if !incidences.iter().all(|b| *b) || !cfg.derived_incidence() {
        violated.push("ten point incidences".to_string());
    }
    if !nine.passed() {
        violated.push("nine point check".to_string());
    }
    if let Some(m) = a.extend {
        let cant = extend_cantilever(&cfg, m)?;
        let r = lattice_report(&cant);
        let on_curve = cant.all_points().all(|p| curve.contains(p));
        s.push_str(&format!(
            "extension: {m}\nlattice triples: {}\noff-lattice triples: {}\nmismatches: {}\non curve: {on_curve}\n",
            r.lattice_triples,
            r.off_lattice_triples,
            r.mismatches.len()
        ));
        if !r.passed() {
            violated.push("A_i B_j C_k collinear iff i + k = j".to_string());
        }
        if !on_curve {
            violated.push("cantilever points lie on the cubic".to_string());
        }
    }
    w(out, s)?;
    if violated.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(format!("invariant violated: {}", violated.join("; "))))
    }
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::invalid(format!("--{flag} is required for this mode")))
}

fn external(s: &str) -> Result<ExternalPoint> {
    let (a, b) = parse_pair(s, ',')?;
    ExternalPoint::new(a, b)
}

#[allow(clippy::too_many_arguments)]
fn conic(
    mode: ConicMode,
    e: &str,
    x: Option<String>,
    y: Option<String>,
    xs: Option<Vec<String>>,
    e2: Option<String>,
    e3: Option<String>,
    out: &mut dyn Write,
) -> CmdResult {
    let e = external(e)?;
    let line = match mode {
        ConicMode::Collinear => {
            let (x, y) = (parse_rational(required(&x, "x")?)?, parse_rational(required(&y, "y")?)?);
            parabola_collinear(&x, &y, &e)?.to_string()
        }
        ConicMode::Involution => format_rational(&involution_value(&e, &parse_rational(required(&x, "x")?)?)?),
        ConicMode::ImageCount => {
            let xs = xs.ok_or_else(|| Error::invalid("--xs is required for this mode"))?;
            let xs = xs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            image_count(&e, &xs).to_string()
        }
        ConicMode::Reps => {
            let (e2, e3) = (external(required(&e2, "e2")?)?, external(required(&e3, "e3")?)?);
            let col = reps_collinear(&e, &e2, &e3)?;
            match affine_coefficient(&e, &e2, &e3)? {
                Some(l) => format!("{col} {}", format_rational(&l)),
                None => col.to_string(),
            }
        }
    };
    w(out, format!("{line}\n"))
}

fn experiment(kind: ExperimentKind, degree: u32, n: usize, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let _ = writeln!(err, "note: finite-size evidence only; asymptotic claims are not verified");
    let curve = CurveSpec::GraphPower(degree);
    let nn = n as i64;
    let s = match kind {
        ExperimentKind::Dichotomy => {
            let mut s = String::from("degree,n,points,triple_lines,ratio_n2,ratio_cubic\n");
            for r in dichotomy_experiment(&[degree], &[n])? {
                s.push_str(&format!(
                    "{},{},{},{},{:.6},{:.6}\n",
                    r.degree,
                    r.n,
                    2 * r.n + 1,
                    r.count,
                    r.ratio_n2,
                    r.ratio_cubic
                ));
            }
            s
        }
        ExperimentKind::Quadruple => {
            let c = quadruple_experiment(&curve, &int_range(-nn, nn))?;
            format!("degree,n,points,four_rich_lines\n{degree},{n},{},{c}\n", 2 * n + 1)
        }
        ExperimentKind::Directions => {
            let c = few_directions_experiment(&curve, &int_range(1, nn))?;
            format!("degree,n,points,directions\n{degree},{n},{n},{c}\n")
        }
    };
    w(out, s)
}
