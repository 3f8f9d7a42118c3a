//! Command-line surface of the engine: catalog listing, curvature and ideal
//! computations, the embedded-table verification run, and the dynamics suite.
//!
//! Exit codes: 0 all checks pass, 1 verification mismatch, 2 usage or parse
//! error, 3 algebraic failure (non-invertible element, degenerate chart/web).

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use painleve_webs::dynamics::{
    non_periodicity_probe, periodicity_check, phi_affine_form, verify_surface_symmetries,
};
use painleve_webs::ideal::{flat_locus_ordered, CurvatureKind};
use painleve_webs::parse::{parse_expression, parse_rational};
use painleve_webs::poly::rat_int;
use painleve_webs::surface::catalog_names;
use painleve_webs::web::{leaf_line_curvature, surface_web_curvature, ChartFunction};
use painleve_webs::{
    Chart, EngineError, MonomialOrder, RationalFunction, Report, SurfaceSpec, VariableContext,
};

#[derive(Parser)]
#[command(
    name = "painleve-webs",
    version,
    about = "Exact web and Hess curvature on the Painlevé character-variety cubics"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the catalog surfaces with their defining cubics.
    List,
    /// Blaschke curvature of the coordinate 3-web on the (x1, x2) chart.
    WebCurvature(SurfaceArgs),
    /// Hess curvature of a coordinate bi-Lagrangian pair.
    HessCurvature {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Coordinate pair: 12, 23 or 13 (order-insensitive).
        #[arg(long)]
        pair: String,
    },
    /// Flat-locus parameter ideal as a reduced Gröbner basis.
    Ideal {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Which curvature: `web` or a pair like `12`.
        #[arg(long)]
        what: String,
        #[arg(long, value_enum, default_value_t = OrderArg::Lex)]
        order: OrderArg,
    },
    /// Check the catalog against the embedded expected flat-locus table.
    VerifyTable {
        /// Restrict to one surface.
        #[arg(long)]
        surface: Option<String>,
    },
    /// Surface symmetries, the fibred affine map, and periodicity checks.
    Dynamics,
    /// Leaf curvature gamma of a graph x3 = f(x1, x2).
    LeafCurvature {
        /// Polynomial expression for f in x1, x2 (other identifiers become
        /// symbolic parameters).
        #[arg(long)]
        f: String,
    },
}

#[derive(Args)]
struct SurfaceArgs {
    /// Catalog surface name (default pvi).
    #[arg(long, conflicts_with = "custom")]
    surface: Option<String>,
    /// Custom cubic in x1, x2, x3; other identifiers become parameters.
    #[arg(long)]
    custom: Option<String>,
    /// Parameter substitutions `name=rational`, e.g. `--set a1=0 a4=4`.
    #[arg(long = "set", num_args = 1.., value_name = "NAME=VALUE")]
    set: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Lex,
    Grevlex,
}

impl From<OrderArg> for MonomialOrder {
    fn from(o: OrderArg) -> MonomialOrder {
        match o {
            OrderArg::Lex => MonomialOrder::Lex,
            OrderArg::Grevlex => MonomialOrder::GrevLex,
        }
    }
}

fn resolve_spec(args: &SurfaceArgs) -> painleve_webs::Result<SurfaceSpec> {
    let spec = match (&args.surface, &args.custom) {
        (_, Some(expr)) => SurfaceSpec::custom(expr)?,
        (Some(name), None) => SurfaceSpec::lookup(name)?,
        (None, None) => SurfaceSpec::lookup("pvi")?,
    };
    if args.set.is_empty() {
        return Ok(spec);
    }
    let mut values = Vec::new();
    for s in &args.set {
        let Some((name, val)) = s.split_once('=') else {
            return Err(EngineError::BadSubstitution(format!(
                "`{s}` is not of the form name=rational"
            )));
        };
        values.push((name.trim().to_string(), parse_rational(val.trim())?));
    }
    spec.substitute(&values)
}

fn parse_pair(text: &str) -> painleve_webs::Result<(u8, u8)> {
    let digits: Vec<u8> = text
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as u8)
                .ok_or_else(|| EngineError::Unsupported(format!("bad pair `{text}`")))
        })
        .collect::<painleve_webs::Result<_>>()?;
    if digits.len() != 2 {
        return Err(EngineError::Unsupported(format!(
            "pair must be two coordinate indices, got `{text}`"
        )));
    }
    Ok((digits[0], digits[1]))
}

fn cmd_list() -> Report {
    let mut report = Report::new("list");
    for name in catalog_names() {
        let spec = SurfaceSpec::lookup(name).expect("catalog name resolves");
        let params = spec.param_names.join(", ");
        report.info(
            name,
            if params.is_empty() {
                format!("{}", spec.defining_poly)
            } else {
                format!("{} [params: {params}]", spec.defining_poly)
            },
        );
    }
    report
}

fn echo_sets(args: &SurfaceArgs) -> String {
    if args.set.is_empty() {
        String::new()
    } else {
        format!(" --set {}", args.set.join(" "))
    }
}

fn cmd_web_curvature(args: &SurfaceArgs) -> painleve_webs::Result<Report> {
    let spec = resolve_spec(args)?;
    let mut report = Report::new(format!(
        "web-curvature --surface {}{}",
        spec.name,
        echo_sets(args)
    ));
    let (num, den) = surface_web_curvature(&spec, Chart::web_default())?;
    report.info("numerator", format!("{num}"));
    report.info("denominator", format!("{den}"));
    report.info("flat", format!("{}", num.is_zero()));
    Ok(report)
}

fn cmd_hess_curvature(args: &SurfaceArgs, pair: &str) -> painleve_webs::Result<Report> {
    let spec = resolve_spec(args)?;
    let (i, j) = parse_pair(pair)?;
    let mut report = Report::new(format!(
        "hess-curvature --surface {} --pair {i}{j}{}",
        spec.name,
        echo_sets(args)
    ));
    let (num, den_factors) = painleve_webs::hess::surface_hess_curvature(&spec, (i, j))?;
    report.info("numerator", format!("{num}"));
    let den = den_factors
        .iter()
        .map(|(base, exp)| {
            if *exp == 1 {
                format!("({base})")
            } else {
                format!("({base})^{exp}")
            }
        })
        .collect::<Vec<_>>()
        .join("*");
    report.info("denominator", den);
    report.info("flat", format!("{}", num.is_zero()));
    Ok(report)
}

fn cmd_ideal(args: &SurfaceArgs, what: &str, order: OrderArg) -> painleve_webs::Result<Report> {
    let spec = resolve_spec(args)?;
    let kind = if what.eq_ignore_ascii_case("web") {
        CurvatureKind::Web
    } else {
        let (i, j) = parse_pair(what)?;
        CurvatureKind::Hess(i, j)
    };
    let mut report = Report::new(format!("ideal --surface {} --what {kind}", spec.name));
    let gb = flat_locus_ordered(&spec, kind, order.into())?;
    report.info("groebner basis", gb.describe());
    report.info("kind", format!("{:?}", gb.kind()));
    report.info(
        "order",
        match order {
            OrderArg::Lex => "lex",
            OrderArg::Grevlex => "grevlex",
        },
    );
    Ok(report)
}

fn cmd_dynamics() -> painleve_webs::Result<Report> {
    let started = Instant::now();
    let spec = SurfaceSpec::lookup("pvi")?;
    let mut report = verify_surface_symmetries(&spec)?;
    report.command = "dynamics".to_string();

    let phi = phi_affine_form(None);
    let ctx = spec.ctx();
    report.info("phi on {x3 = t}", format!("{phi}"));
    report.check("det of phi matrix", phi.det().is_one(), "1", format!("{}", phi.det()));
    let want_trace = RationalFunction::from_poly(parse_expression("x3^2-2", ctx)?);
    report.check(
        "trace of phi matrix",
        phi.trace() == want_trace,
        "x3^2-2",
        format!("{}", phi.trace()),
    );
    for (t, p, q) in [(0i64, 1u32, 2u32), (1, 1, 3), (-1, 2, 3)] {
        report.extend(periodicity_check(&rat_int(t), p, q)?);
    }
    report.extend(non_periodicity_probe(&rat_int(3), 24));
    report.set_elapsed_ms(started.elapsed().as_millis());
    Ok(report)
}

fn cmd_leaf_curvature(f: &str) -> painleve_webs::Result<Report> {
    let names = painleve_webs::parse::scan_identifiers(f)?;
    let params: Vec<&str> = names
        .iter()
        .map(|s| s.as_str())
        .filter(|s| !["x1", "x2", "x3"].contains(s))
        .collect();
    let ctx = VariableContext::with_surface_vars(["x1", "x2", "x3"], &params);
    let poly = parse_expression(f, &ctx)?;
    if poly.involves(2) {
        return Err(EngineError::Unsupported(
            "f must be a function of x1 and x2 only".into(),
        ));
    }
    let mut report = Report::new(format!("leaf-curvature --f {f}"));
    let gamma = leaf_line_curvature(&ChartFunction::Plane(RationalFunction::from_poly(poly)))?;
    report.info("gamma", format!("{gamma}"));
    report.info("lines", format!("{}", gamma.is_zero()));
    Ok(report)
}

fn dispatch(cmd: &Cmd) -> painleve_webs::Result<Report> {
    match cmd {
        Cmd::List => Ok(cmd_list()),
        Cmd::WebCurvature(args) => cmd_web_curvature(args),
        Cmd::HessCurvature { surface, pair } => cmd_hess_curvature(surface, pair),
        Cmd::Ideal {
            surface,
            what,
            order,
        } => cmd_ideal(surface, what, *order),
        Cmd::VerifyTable { surface } => painleve_webs::verify_table(surface.as_deref()),
        Cmd::Dynamics => cmd_dynamics(),
        Cmd::LeafCurvature { f } => cmd_leaf_curvature(f),
    }
}

fn error_exit_code(e: &EngineError) -> i32 {
    match e {
        EngineError::Parse { .. }
        | EngineError::UnknownSurface(_)
        | EngineError::BadSubstitution(_)
        | EngineError::Unsupported(_) => 2,
        EngineError::NonInvertible { .. }
        | EngineError::DegenerateChart(_)
        | EngineError::DegenerateWeb(_)
        | EngineError::DivisionByZero => 3,
    }
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    match dispatch(&cli.cmd) {
        Ok(mut report) => {
            if report.elapsed_ms == 0 {
                report.set_elapsed_ms(started.elapsed().as_millis());
            }
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_text());
            }
            std::process::exit(if report.all_pass() { 0 } else { 1 });
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(error_exit_code(&e));
        }
    }
}
