//! Command-line front end for `dissipstab`.

pub mod catalog;
pub mod error;
pub mod output;
pub mod sweep;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dissipstab::hurwitz::{classify, hurwitz_h, surface_v_sample, StabilityClass};
use dissipstab::krein::collision_scan;
use dissipstab::models::*;
use dissipstab::msystem::QuarticPoly;
use dissipstab::paradox::vanishing_damping_scan;
use dissipstab::smallalg::{poly_roots, Poly};
use dissipstab::umbrella::{abscissa_min_affine, discriminant_swallowtail_probe, AffineConstraint, Field, ProbeLabel};
use dissipstab::Complex64;

use catalog::{metric_form, parse_assignments, Model};
use error::*;
use output::{render, Cell, Document, Format, Table};

#[derive(Parser, Debug)]
#[command(name = "dissipstab", version, about = "Stability of dissipative and gyroscopic linear systems")]
pub struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format. Tables default to CSV, reports to plain text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true, env = "DISSIPSTAB_THREADS")]
    threads: Option<usize>,
    /// Relative tolerance for stability classification.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the quartic λ⁴ + a1 λ³ + a2 λ² + a3 λ + a4.
    #[command(after_help = "Exit status: 0 asymptotically stable, 1 unstable, 2 marginally stable.")]
    Stability {
        #[arg(allow_negative_numbers = true)]
        a1: f64,
        #[arg(allow_negative_numbers = true)]
        a2: f64,
        #[arg(allow_negative_numbers = true)]
        a3: f64,
        #[arg(allow_negative_numbers = true)]
        a4: f64,
    },
    /// Roots of a real polynomial, coefficients from the leading one down.
    #[command(after_help = "Columns: re, im, multiplicity (clustered roots).")]
    Roots {
        #[arg(required = true, allow_negative_numbers = true)]
        coeffs: Vec<f64>,
    },
    /// Evaluate a model over a parameter grid described by a TOML or JSON file.
    #[command(after_help = SWEEP_HELP)]
    Sweep { config: PathBuf },
    /// Sample the stability boundary or the swallowtail of the quartic family (a4 = 1).
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Undamped onset versus the vanishing-damping limit of the onset.
    #[command(after_help = "Models: ziegler (damping b, load p), maclaurin-viscous (viscosity mu, eccentricity e).\n\
Columns: quantity, eps, value. Quantities: onset (one per eps), raw_limit, extrapolated, undamped, gap.")]
    Paradox(ParadoxArgs),
    /// Krein signs along a parameter path, or the collision events on it.
    #[command(after_help = "Models: sobolev (default param c), maclaurin (e), brouwer (omega).\n\
Points columns: param, index, re, im, alg_mult, geom_mult, sign.\n\
Events columns (--events): kind, lo, hi, param, lambda_d, sign1, sign2, regular.")]
    KreinPath(KreinArgs),
    /// Infimum of the spectral abscissa of monic polynomials under b0 + sum b_j a_j = 0.
    #[command(after_help = "Degree n is the number of coefficients minus one.")]
    AbscissaMin {
        #[arg(required = true, allow_negative_numbers = true)]
        b: Vec<f64>,
        #[arg(long, value_enum, default_value_t = FieldArg::Real)]
        field: FieldArg,
    },
    /// Parameters, defaults and derived constants of a model.
    #[command(after_help = "Columns: name, default, unit, doc.")]
    ModelInfo { model: String },
}

const SWEEP_HELP: &str = "Config keys: model, params (table of fixed values), axes (1 to 3 of \
{name, start, stop, count, scale = linear|log}), outputs (subset of verdict, abscissa, leading, h, \
krein), tol. The last axis varies fastest. A JSON output of an earlier sweep is accepted as config.\n\
Columns: one per axis, then verdict, abscissa, leading_re, leading_im, h, krein as selected.";

#[derive(Subcommand, Debug)]
enum SurfaceCmd {
    /// Points (a1, m a1, m + 1/m) of the H = 0 surface; a1 = a3 = 0 rows mark the double line.
    #[command(after_help = "Columns: m, a1, a3, a2, h, on_double_line.")]
    V {
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "0.2,5")]
        m_range: (f64, f64),
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-2,2")]
        a1_range: (f64, f64),
        #[arg(long, value_parser = parse_pair, default_value = "25,21")]
        counts: (usize, usize),
    },
    /// Label a grid of (a1, a3, a2) as heavy-damped, discriminant or other.
    #[command(after_help = "Columns: a1, a3, a2, label.")]
    Swallowtail {
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "3,6")]
        a1_range: (f64, f64),
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "3,6")]
        a3_range: (f64, f64),
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "5,8")]
        a2_range: (f64, f64),
        #[arg(long, value_parser = parse_triple, default_value = "16,16,16")]
        counts: (usize, usize, usize),
    },
}

#[derive(Args, Debug)]
struct ParadoxArgs {
    model: String,
    /// Damping scales, strictly decreasing.
    #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4")]
    eps: Vec<f64>,
    /// Fixed model parameters as name=value.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
}

#[derive(Args, Debug)]
struct KreinArgs {
    model: String,
    #[arg(long)]
    param: Option<String>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    range: Option<(f64, f64)>,
    #[arg(long, default_value_t = 101)]
    count: usize,
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
    /// Report collision events instead of the per-point spectra.
    #[arg(long)]
    events: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split([',', ':'])
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("'{x}' is not a number")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated values"));
    }
    Ok(v)
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let v = parse_floats(s, 2)?;
    if !(v[0] <= v[1]) {
        return Err("range must be lo,hi with lo <= hi".into());
    }
    Ok((v[0], v[1]))
}

fn parse_count(x: f64) -> Result<usize, String> {
    if x >= 1.0 && x.fract() == 0.0 && x <= 1e7 {
        Ok(x as usize)
    } else {
        Err(format!("'{x}' is not a positive count"))
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let v = parse_floats(s, 2)?;
    Ok((parse_count(v[0])?, parse_count(v[1])?))
}

fn parse_triple(s: &str) -> Result<(usize, usize, usize), String> {
    let v = parse_floats(s, 3)?;
    Ok((parse_count(v[0])?, parse_count(v[1])?, parse_count(v[2])?))
}

fn model_arg(name: &str) -> CliResult<Model> {
    Model::parse(name).ok_or_else(|| CliError::Usage(format!("unknown model '{name}' (known: {})", Model::names())))
}

/// Parse arguments, run the command and return the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("dissipstab: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> CliResult<i32> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Io(io::Error::other(e)))?;
    let (doc, code) = pool.install(|| dispatch(cli))?;

    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            render(&mut w, &doc, cli.format)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            render(&mut w, &doc, cli.format)?;
            w.flush()?;
        }
    }
    Ok(code)
}

fn dispatch(cli: &Cli) -> CliResult<(Document, i32)> {
    match &cli.command {
        Command::Stability { a1, a2, a3, a4 } => stability(QuarticPoly::new(*a1, *a2, *a3, *a4), cli.tol),
        Command::Roots { coeffs } => roots(coeffs).map(|d| (d, EXIT_OK)),
        Command::Sweep { config } => {
            let plan = sweep::plan(sweep::load_spec(config)?, cli.tol)?;
            Ok((sweep::run(&plan), EXIT_OK))
        }
        Command::Surface(s) => surface(s).map(|d| (d, EXIT_OK)),
        Command::Paradox(a) => paradox(a).map(|d| (d, EXIT_OK)),
        Command::KreinPath(a) => krein_path(a).map(|d| (d, EXIT_OK)),
        Command::AbscissaMin { b, field } => abscissa_min(b, *field).map(|d| (d, EXIT_OK)),
        Command::ModelInfo { model } => model_info(model_arg(model)?).map(|d| (d, EXIT_OK)),
    }
}

fn stability(q: QuarticPoly, tol: f64) -> CliResult<(Document, i32)> {
    let v = classify(&q, tol)?;
    let mut doc = Document::new("stability");
    doc.add("coefficients", Cell::List(q.coeffs().to_vec()));
    doc.add("verdict", Cell::Text(v.class.to_string()));
    doc.add("certificate", Cell::Text(v.certificate.to_string()));
    doc.add("h", Cell::Num(hurwitz_h(&q)));
    doc.add("abscissa", Cell::Num(v.abscissa));
    let code = match v.class {
        StabilityClass::AsymptoticallyStable => EXIT_OK,
        StabilityClass::Unstable => EXIT_UNSTABLE,
        StabilityClass::MarginallyStable => EXIT_MARGINAL,
    };
    Ok((doc, code))
}

fn roots(coeffs: &[f64]) -> CliResult<Document> {
    if coeffs[0] == 0.0 {
        return Err(CliError::Usage("leading coefficient must be nonzero".into()));
    }
    let roots = poly_roots(&Poly::from_descending(coeffs), dissipstab::tol::EIG)?;
    let mut t = Table::new(&[("re", ""), ("im", ""), ("multiplicity", "")]);
    for r in roots {
        t.rows.push(vec![Cell::Num(r.value.re), Cell::Num(r.value.im), Cell::Int(r.multiplicity as i64)]);
    }
    let mut doc = Document::new("roots");
    doc.table = Some(t);
    Ok(doc)
}

fn surface(cmd: &SurfaceCmd) -> CliResult<Document> {
    let mut doc = Document::new("surface");
    match cmd {
        SurfaceCmd::V { m_range, a1_range, counts } => {
            let pts = surface_v_sample(*m_range, *a1_range, *counts)?;
            let mut t = Table::new(&[("m", ""), ("a1", ""), ("a3", ""), ("a2", ""), ("h", ""), ("on_double_line", "")]);
            for p in pts {
                let h = hurwitz_h(&QuarticPoly::new(p.a1, p.a2, p.a3, 1.0));
                t.rows.push(vec![
                    Cell::Num(p.m),
                    Cell::Num(p.a1),
                    Cell::Num(p.a3),
                    Cell::Num(p.a2),
                    Cell::Num(h),
                    Cell::Bool(p.on_double_line),
                ]);
            }
            doc.meta.insert("surface".into(), "v".into());
            doc.table = Some(t);
        }
        SurfaceCmd::Swallowtail { a1_range, a3_range, a2_range, counts } => {
            let total = counts.0 as u64 * counts.1 as u64 * counts.2 as u64;
            if total > sweep::MAX_POINTS {
                return Err(CliError::Guard(format!("grid has {total} points, limit is {}", sweep::MAX_POINTS)));
            }
            let pts = discriminant_swallowtail_probe(*a1_range, *a3_range, *a2_range, *counts)?;
            let mut t = Table::new(&[("a1", ""), ("a3", ""), ("a2", ""), ("label", "")]);
            for p in pts {
                let label = match p.label {
                    ProbeLabel::HeavyDamped => "heavy-damped",
                    ProbeLabel::Discriminant => "discriminant",
                    ProbeLabel::Other => "other",
                };
                t.rows.push(vec![Cell::Num(p.point.a1), Cell::Num(p.point.a3), Cell::Num(p.point.a2), Cell::Text(label.into())]);
            }
            doc.meta.insert("surface".into(), "swallowtail".into());
            doc.table = Some(t);
        }
    }
    Ok(doc)
}

fn paradox(a: &ParadoxArgs) -> CliResult<Document> {
    let model = model_arg(&a.model)?;
    let base = parse_assignments(model, &a.set)?;
    let (scan, undamped) = match model {
        Model::Ziegler => {
            let zp = ZieglerParams { m: base.get("m"), c: base.get("c"), l: base.get("l"), p: 0.0, b: 0.0 };
            let family = |eps: f64, load: f64| build_ziegler(&ZieglerParams { b: eps, p: load, ..zp });
            let scan = vanishing_damping_scan(family, (0.0, 3.0 * zp.c / zp.l), 61, &a.eps)?;
            (scan, ziegler_onset(&zp)?)
        }
        Model::MaclaurinViscous => {
            let family = |mu: f64, e: f64| {
                build_maclaurin(&MaclaurinParams { mu, ..MaclaurinParams::new(e) }, MaclaurinVariant::Viscous)
            };
            let scan = vanishing_damping_scan(family, (0.7, 0.999), 60, &a.eps)?;
            (scan, viscous_onset(0.0)?)
        }
        _ => {
            return Err(CliError::Usage(format!(
                "paradox supports ziegler and maclaurin-viscous, not {}",
                model.name()
            )))
        }
    };
    let mut t = Table::new(&[("quantity", ""), ("eps", ""), ("value", "")]);
    let row = |q: &str, eps: f64, v: f64| vec![Cell::Text(q.into()), Cell::Num(eps), Cell::Num(v)];
    for e in &scan.entries {
        t.rows.push(row("onset", e.eps, e.onset));
    }
    t.rows.push(row("raw_limit", 0.0, scan.raw_limit));
    t.rows.push(row("extrapolated", 0.0, scan.extrapolated));
    t.rows.push(row("undamped", 0.0, undamped));
    t.rows.push(row("gap", 0.0, undamped - scan.extrapolated));
    for w in &scan.warnings {
        eprintln!("dissipstab: warning: {w}");
    }
    let mut doc = Document::new("paradox");
    doc.meta.insert("model".into(), model.name().into());
    doc.meta.insert("warnings".into(), scan.warnings.clone().into());
    doc.table = Some(t);
    Ok(doc)
}

fn krein_path(a: &KreinArgs) -> CliResult<Document> {
    let model = model_arg(&a.model)?;
    let (default_param, default_range) = match model {
        Model::Sobolev => ("c", (0.5, 4.0)),
        Model::Maclaurin => ("e", (0.7, 0.99)),
        Model::Brouwer => ("omega", (0.0, 2.0)),
        _ => return Err(CliError::Usage(format!("krein-path supports sobolev, maclaurin and brouwer, not {}", model.name()))),
    };
    let param = a.param.as_deref().unwrap_or(default_param);
    let (lo, hi) = a.range.unwrap_or(default_range);
    if a.count < 2 {
        return Err(CliError::Usage("--count must be at least 2".into()));
    }
    let base = parse_assignments(model, &a.set)?;
    base.clone().set(model, param, lo).map_err(CliError::Usage)?;
    let grid: Vec<f64> = (0..a.count).map(|i| lo + (hi - lo) * i as f64 / (a.count - 1) as f64).collect();
    let family = |x: f64| {
        let mut p = base.clone();
        p.set(model, param, x).map_err(dissipstab::Error::InvalidParameter)?;
        metric_form(model, &p)
    };
    let (path, events) = collision_scan(param, &grid, family, dissipstab::tol::EIG)?;

    let unit = model.unit(param);
    let mut doc = Document::new("krein-path");
    doc.meta.insert("model".into(), model.name().into());
    doc.meta.insert("param".into(), param.into());
    if a.events {
        let mut t = Table::new(&[
            ("kind", ""),
            ("lo", unit),
            ("hi", unit),
            ("param", unit),
            ("lambda_d", ""),
            ("sign1", ""),
            ("sign2", ""),
            ("regular", ""),
        ]);
        for e in &events {
            let kind = match e.kind {
                dissipstab::krein::CollisionKind::RealToComplex => "real-to-complex",
                dissipstab::krein::CollisionKind::ComplexToReal => "complex-to-real",
            };
            t.rows.push(vec![
                Cell::Text(kind.into()),
                Cell::Num(e.bracket.0),
                Cell::Num(e.bracket.1),
                Cell::Num(e.param),
                Cell::Num(e.lambda_d),
                Cell::Int(e.signs.0 as i64),
                Cell::Int(e.signs.1 as i64),
                Cell::Bool(e.regular),
            ]);
        }
        doc.table = Some(t);
    } else {
        let mut t = Table::new(&[
            ("param", unit),
            ("index", ""),
            ("re", ""),
            ("im", ""),
            ("alg_mult", ""),
            ("geom_mult", ""),
            ("sign", ""),
        ]);
        for pt in &path.points {
            for (i, e) in pt.entries.iter().enumerate() {
                t.rows.push(vec![
                    Cell::Num(pt.param),
                    Cell::Int(i as i64),
                    Cell::Num(e.value.re),
                    Cell::Num(e.value.im),
                    Cell::Int(e.alg_mult as i64),
                    Cell::Int(e.geom_mult as i64),
                    Cell::Int(e.sign as i64),
                ]);
            }
        }
        doc.add("events", Cell::Int(events.len() as i64));
        doc.table = Some(t);
    }
    Ok(doc)
}

fn abscissa_min(b: &[f64], field: FieldArg) -> CliResult<Document> {
    let field = match field {
        FieldArg::Real => Field::Real,
        FieldArg::Complex => Field::Complex,
    };
    let r = abscissa_min_affine(&AffineConstraint::real(b), field)?;
    let mut doc = Document::new("abscissa-min");
    doc.add("a_star", Cell::Num(r.a_star));
    doc.add("attained", Cell::Bool(r.attained));
    doc.add("gamma_re", Cell::Num(r.gamma.re));
    doc.add("gamma_im", Cell::Num(r.gamma.im));
    if let Some(p) = &r.p_star {
        // monic, descending; real parts only for the real field
        let c: Vec<Complex64> = p.coeffs().iter().rev().copied().collect();
        doc.add("p_star_re", Cell::List(c.iter().map(|z| z.re).collect()));
        if c.iter().any(|z| z.im != 0.0) {
            doc.add("p_star_im", Cell::List(c.iter().map(|z| z.im).collect()));
        }
    }
    Ok(doc)
}

fn model_info(model: Model) -> CliResult<Document> {
    let mut doc = Document::new("model-info");
    doc.meta.insert("model".into(), model.name().into());
    doc.meta.insert("description".into(), model.describe().into());
    let mut t = Table::new(&[("name", ""), ("default", ""), ("unit", ""), ("doc", "")]);
    for s in model.params() {
        t.rows.push(vec![Cell::Text(s.name.into()), Cell::Num(s.default), Cell::Text(s.unit.into()), Cell::Text(s.doc.into())]);
    }
    let mut derived = |name: &str, v: f64| {
        t.rows.push(vec![Cell::Text(name.into()), Cell::Num(v), Cell::Text(String::new()), Cell::Text("derived at defaults".into())]);
    };
    match model {
        Model::Ziegler => {
            let z = ziegler_criticals(&ZieglerParams::default());
            derived("pk_undamped", z.pk_undamped);
            derived("pk_limit", z.pk_limit);
        }
        Model::Brouwer => derived("gascheau_mass_ratio", gascheau_mass_ratio()),
        Model::Maclaurin | Model::MaclaurinViscous | Model::MaclaurinRadiative => {
            let c = maclaurin_criticals()?;
            derived("e_ml", c.e_ml);
            derived("e_riemann", c.e_riemann);
        }
        Model::Combres => derived("sum_frequency", sum_frequency(0.5)),
        Model::Quartic | Model::Sobolev => {}
    }
    doc.table = Some(t);
    Ok(doc)
}
