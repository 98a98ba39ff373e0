use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use torsio::bounds::{check_all, BoundKind};
use torsio::document::{emit_graph, fmt17, parse_graph, Num};
use torsio::figure::{self, COLUMNS};
use torsio::generators::{make_complete, make_path, make_random_connected, make_random_tree, make_star};
use torsio::geometry::geometry_summary;
use torsio::spectral::lambda0;
use torsio::surgery::{invert_edge_weights, merge_dirichlet, scale, symmetrize, ScaleParams};
use torsio::torsion::solve_torsion;
use torsio::{
    Error, MassMode, Method, Reach, Report, SolverOptions, Spec, SpectralMethod, SpectralOptions,
};

const EXIT_INPUT: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "torsio", version, about = "Torsional rigidity and p-Laplacian spectra of weighted graphs")]
struct Cli {
    /// Output format; each subcommand accepts a subset.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
    Csv,
}

#[derive(Args)]
struct Input {
    /// Graph document (JSON); `-` reads standard input.
    file: PathBuf,
    /// Overrides the exponent stored in the document.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TorsionMethod {
    Auto,
    GaussSeidel,
    Newton,
    Direct,
}

#[derive(Clone, Copy, ValueEnum)]
enum EigenMethod {
    Auto,
    Dense,
    InversePower,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mass {
    Unit,
    Deg,
}

impl Mass {
    fn mode(self) -> MassMode<f64> {
        match self {
            Mass::Unit => MassMode::Unit,
            Mass::Deg => MassMode::Degree,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a document and summarise it.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Torsion function and torsional rigidity.
    Torsion {
        #[command(flatten)]
        input: Input,
        /// Sup-norm residual target.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value = "auto")]
        method: TorsionMethod,
        /// Sweeps (Gauss-Seidel) or steps (Newton) before giving up.
        #[arg(long, default_value_t = 1_000_000)]
        max_iter: usize,
    },
    /// Bottom of the spectrum and a ground state.
    Lambda0 {
        #[command(flatten)]
        input: Input,
        /// Relative change of the eigenvalue that stops inverse iteration.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value = "auto")]
        method: EigenMethod,
        /// Outer inverse-power iterations before giving up.
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
    },
    /// Inradius, mean distance, inverted diameter and minimal cut.
    Metrics {
        #[command(flatten)]
        input: Input,
        /// Distance exponent; defaults to p.
        #[arg(long)]
        q: Option<f64>,
    },
    /// Evaluate every bound on the instance.
    Bounds {
        #[command(flatten)]
        input: Input,
    },
    /// Transform a graph and print the resulting document.
    #[command(subcommand)]
    Surgery(Surgery),
    /// Print a generated graph document.
    #[command(subcommand)]
    Generate(Generate),
    /// Paths and stars with 1..=emax edges: T₂, λ₀ and T₂^{2/3}·λ₀.
    Figure4 {
        #[arg(long, default_value_t = 50)]
        emax: usize,
    },
}

#[derive(Subcommand)]
enum Surgery {
    /// Collapse the Dirichlet set to one vertex.
    MergeDirichlet {
        #[command(flatten)]
        input: Input,
    },
    /// Multiply masses by `mu`, weights and potentials by `lambda`.
    Scale {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
    },
    /// Replace every edge weight by its reciprocal.
    Invert {
        #[command(flatten)]
        input: Input,
    },
    /// Path ordered by the torsion function, Dirichlet set merged first.
    Symmetrize {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Subcommand)]
enum Generate {
    /// Path with `free` free vertices after a Dirichlet end.
    Path {
        #[arg(long)]
        free: usize,
        #[arg(long, value_enum, default_value = "unit")]
        mass: Mass,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
    },
    /// Star with one Dirichlet leaf.
    Star {
        #[arg(long)]
        edges: usize,
        #[arg(long, value_enum, default_value = "unit")]
        mass: Mass,
    },
    /// Complete graph with one Dirichlet vertex.
    Complete {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "unit")]
        mass: Mass,
    },
    /// Connected random graph (or recursive tree) with one Dirichlet vertex.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        prob: f64,
        #[arg(long, default_value_t = 1.0)]
        wmin: f64,
        #[arg(long, default_value_t = 1.0)]
        wmax: f64,
        #[arg(long, env = "TORSIO_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tree: bool,
        #[arg(long, value_enum, default_value = "unit")]
        mass: Mass,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Lib(e) => e.kind(),
            Failure::Io(_) => "Io",
            Failure::Usage(_) => "Usage",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(m) | Failure::Usage(m) => m.clone(),
        }
    }
}

type Outcome = std::result::Result<(String, u8), Failure>;

/// Key-value pairs serialized as a JSON object in insertion order.
struct Ordered(Vec<(&'static str, Value)>);

enum Value {
    Num(Num),
    Int(usize),
    Str(String),
    Bool(Option<bool>),
    Null,
    List(Vec<Ordered>),
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Value::Num(n) => n.serialize(s),
            Value::Int(i) => i.serialize(s),
            Value::Str(t) => t.serialize(s),
            Value::Bool(b) => b.serialize(s),
            Value::Null => s.serialize_none(),
            Value::List(l) => l.serialize(s),
        }
    }
}

impl Serialize for Ordered {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

fn num(x: f64) -> Value {
    Value::Num(Num(x))
}

fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

fn text(s: impl Into<String>) -> Value {
    Value::Str(s.into())
}

fn json(o: &Ordered) -> String {
    let mut s = serde_json::to_string_pretty(o).expect("output serializes");
    s.push('\n');
    s
}

fn vertex_values(spec: &Spec, values: &[f64]) -> Value {
    Value::List(
        values
            .iter()
            .enumerate()
            .map(|(i, &x)| Ordered(vec![("id", text(spec.graph().id(i))), ("value", num(x))]))
            .collect(),
    )
}

fn load(input: &Input) -> std::result::Result<Spec, Failure> {
    let mut body = String::new();
    if input.file.as_os_str() == "-" {
        io::stdin()
            .read_to_string(&mut body)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
    } else {
        body = std::fs::read_to_string(&input.file)
            .map_err(|e| Failure::Io(format!("{}: {e}", input.file.display())))?;
    }
    let spec = parse_graph(&body)?;
    Ok(match input.p {
        Some(p) => spec.with_p(p)?,
        None => spec,
    })
}

fn require(format: Format, allowed: &[Format], command: &str) -> std::result::Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        let name = format.to_possible_value().expect("not skipped").get_name().to_string();
        Err(Failure::Usage(format!("`{command}` does not support --format {name}")))
    }
}

fn check_tol(tol: Option<f64>) -> std::result::Result<(), Failure> {
    match tol {
        Some(t) if !(t > 0.0 && t.is_finite()) => Err(Failure::Usage("--tol must be positive".into())),
        _ => Ok(()),
    }
}

fn validate(spec: &Spec) -> String {
    let g = spec.graph();
    json(&Ordered(vec![
        ("valid", Value::Bool(Some(true))),
        ("p", num(*spec.p())),
        ("vertex_count", Value::Int(spec.len())),
        ("edge_count", Value::Int(g.edge_count())),
        ("dirichlet_count", Value::Int(spec.dirichlet_indices().len())),
        ("free_count", Value::Int(spec.free_count())),
        ("connected", Value::Bool(Some(g.is_connected()))),
        ("solvable", Value::Bool(Some(spec.check_solvable().is_ok()))),
    ]))
}

fn torsion(spec: &Spec, tol: Option<f64>, method: TorsionMethod, max_iter: usize) -> Outcome {
    check_tol(tol)?;
    let opts = SolverOptions {
        tol,
        method: match method {
            TorsionMethod::Auto => Method::Auto,
            TorsionMethod::GaussSeidel => Method::GaussSeidel,
            TorsionMethod::Newton => Method::Newton,
            TorsionMethod::Direct => Method::DirectP2,
        },
        max_iterations: max_iter,
        ..SolverOptions::default()
    };
    let sol = solve_torsion(spec, &opts)?;
    Ok((
        json(&Ordered(vec![
            ("p", num(*spec.p())),
            ("rigidity", num(sol.rigidity)),
            ("residual", num(sol.residual_inf)),
            ("iterations", Value::Int(sol.iterations)),
            ("method", text(sol.method.name())),
            ("tau", vertex_values(spec, sol.tau.values())),
        ])),
        0,
    ))
}

fn spectrum(spec: &Spec, tol: Option<f64>, method: EigenMethod, max_iter: usize) -> Outcome {
    check_tol(tol)?;
    let mut opts = SpectralOptions::with_method(match method {
        EigenMethod::Auto => SpectralMethod::Auto,
        EigenMethod::Dense => SpectralMethod::Dense,
        EigenMethod::InversePower => SpectralMethod::InversePower,
    });
    if let Some(t) = tol {
        opts.tol = t;
    }
    opts.max_iterations = max_iter;
    let sol = lambda0(spec, &opts)?;
    Ok((
        json(&Ordered(vec![
            ("p", num(*spec.p())),
            ("lambda0", num(sol.lambda0)),
            ("evidence", text(sol.evidence.name())),
            ("residual", num(sol.residual)),
            ("iterations", Value::Int(sol.iterations)),
            ("method", text(sol.method.name())),
            ("ground_state", vertex_values(spec, sol.ground_state.values())),
        ])),
        0,
    ))
}

fn metrics(spec: &Spec, q: Option<f64>) -> Outcome {
    let q = q.unwrap_or(*spec.p());
    let m = geometry_summary(spec, q)?;
    let diameter = match m.diameter_inverted {
        Reach::Finite(x) => num(x),
        Reach::Unreachable => Value::Null,
    };
    Ok((
        json(&Ordered(vec![
            ("q", num(m.q)),
            ("inradius", opt(m.inradius)),
            ("mean_distance", opt(m.mean_distance)),
            ("diameter_inverted", diameter),
            ("min_cut_weight", opt(m.min_cut_weight)),
        ])),
        0,
    ))
}

fn bounds_json(r: &Report) -> String {
    let checks = r
        .checks
        .iter()
        .map(|c| {
            Ordered(vec![
                ("name", text(c.id.name())),
                (
                    "kind",
                    text(match c.id.kind() {
                        BoundKind::Upper => "upper",
                        BoundKind::Lower => "lower",
                    }),
                ),
                ("statement", text(c.id.statement())),
                ("applicability", text(c.applicability.name())),
                ("reason", c.applicability.reason().map_or(Value::Null, text)),
                ("lhs", opt(c.lhs)),
                ("rhs", opt(c.rhs)),
                ("slack", opt(c.slack)),
                ("satisfied", Value::Bool(c.satisfied)),
                ("strict", Value::Bool(c.strict)),
                ("evidence", c.evidence.map_or(Value::Null, |e| text(e.name()))),
                ("verdict", text(c.verdict())),
            ])
        })
        .collect();
    json(&Ordered(vec![
        ("p", num(r.p)),
        ("vertex_count", Value::Int(r.vertex_count)),
        ("free_count", Value::Int(r.free_count)),
        ("edge_count", Value::Int(r.edge_count)),
        ("dirichlet_count", Value::Int(r.dirichlet_count)),
        ("rigidity", opt(r.rigidity)),
        ("torsion_residual", opt(r.torsion_residual)),
        ("lambda0", opt(r.lambda0)),
        ("spectral_residual", opt(r.spectral_residual)),
        ("evidence", r.evidence.map_or(Value::Null, |e| text(e.name()))),
        ("eta", opt(r.eta)),
        ("violations", Value::Int(r.violations().count())),
        ("checks", Value::List(checks)),
    ]))
}

fn cell(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), fmt17)
}

fn bounds_md(r: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "p = {}, |V| = {}, |E| = {}, |V0| = {}, T_p = {}, lambda0 = {} ({}), eta = {}\n\n",
        fmt17(r.p),
        r.vertex_count,
        r.edge_count,
        r.dirichlet_count,
        cell(r.rigidity),
        cell(r.lambda0),
        r.evidence.map_or("-", |e| e.name()),
        cell(r.eta),
    ));
    out.push_str("| bound | statement | lhs | rhs | slack | verdict | note |\n");
    out.push_str("|---|---|---|---|---|---|---|\n");
    for c in &r.checks {
        let note = match (c.applicability.reason(), c.strict) {
            (Some(reason), _) => reason.to_string(),
            (None, Some(false)) => "not strict".to_string(),
            _ => String::new(),
        };
        out.push_str(&format!(
            "| {} | `{}` | {} | {} | {} | {} | {} |\n",
            c.id.name(),
            c.id.statement(),
            cell(c.lhs),
            cell(c.rhs),
            cell(c.slack),
            c.verdict(),
            note.replace('|', "\\|"),
        ));
    }
    out
}

fn bounds(spec: &Spec, format: Format) -> Outcome {
    let report = check_all(spec);
    let body = match format {
        Format::Md => bounds_md(&report),
        _ => bounds_json(&report),
    };
    let code = if report.violations().next().is_some() {
        EXIT_VIOLATION
    } else {
        0
    };
    Ok((body, code))
}

fn surgery(op: &Surgery) -> Outcome {
    let spec = match op {
        Surgery::MergeDirichlet { input } => merge_dirichlet(&load(input)?)?,
        Surgery::Scale { input, mu, lambda } => {
            let spec = load(input)?;
            let params = ScaleParams::new(*mu, *lambda)?;
            spec.with_graph(scale(spec.graph(), &params))?
        }
        Surgery::Invert { input } => {
            let spec = load(input)?;
            spec.with_graph(invert_edge_weights(spec.graph()))?
        }
        Surgery::Symmetrize { input } => {
            let spec = load(input)?;
            let merged = if spec.dirichlet_indices().len() > 1 {
                merge_dirichlet(&spec)?
            } else {
                spec
            };
            let tau = solve_torsion(&merged, &SolverOptions::default())?;
            symmetrize(&merged, tau.tau.values())?
        }
    };
    Ok((emit_graph(&spec) + "\n", 0))
}

fn generate(op: &Generate) -> Outcome {
    let spec = match *op {
        Generate::Path { free, mass, b } => make_path(free, mass.mode(), b)?,
        Generate::Star { edges, mass } => make_star(edges, mass.mode())?,
        Generate::Complete { n, mass } => make_complete(n, mass.mode())?,
        Generate::Random {
            n,
            prob,
            wmin,
            wmax,
            seed,
            tree,
            mass,
        } => {
            let spec = if tree {
                make_random_tree(n, (wmin, wmax), seed)?
            } else {
                make_random_connected(n, prob, (wmin, wmax), seed)?
            };
            match mass {
                Mass::Unit => spec,
                Mass::Deg => spec.with_degree_measure()?,
            }
        }
    };
    Ok((emit_graph(&spec) + "\n", 0))
}

fn figure4(emax: usize, format: Format) -> Outcome {
    if emax == 0 {
        return Err(Failure::Usage("--emax must be at least 1".into()));
    }
    let rows = figure::rows(emax)?;
    let body = if format == Format::Json {
        let list = rows
            .iter()
            .map(|r| {
                let mut fields = vec![(COLUMNS[0], Value::Int(r.edges))];
                fields.extend(COLUMNS[1..].iter().zip(r.values()).map(|(&k, x)| (k, num(x))));
                Ordered(fields)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::List(list)).expect("output serializes");
        s.push('\n');
        s
    } else {
        let mut s = COLUMNS.join(",") + "\n";
        for r in &rows {
            let cells: Vec<String> = r.values().into_iter().map(fmt17).collect();
            s.push_str(&format!("{},{}\n", r.edges, cells.join(",")));
        }
        s
    };
    Ok((body, 0))
}

fn run(cli: &Cli) -> Outcome {
    let format = cli.format;
    let only = |allowed: &[Format], name: &str, default: Format| -> std::result::Result<Format, Failure> {
        let f = format.unwrap_or(default);
        require(f, allowed, name)?;
        Ok(f)
    };
    match &cli.command {
        Command::Validate { input } => {
            only(&[Format::Json], "validate", Format::Json)?;
            Ok((validate(&load(input)?), 0))
        }
        Command::Torsion {
            input,
            tol,
            method,
            max_iter,
        } => {
            only(&[Format::Json], "torsion", Format::Json)?;
            torsion(&load(input)?, *tol, *method, *max_iter)
        }
        Command::Lambda0 {
            input,
            tol,
            method,
            max_iter,
        } => {
            only(&[Format::Json], "lambda0", Format::Json)?;
            spectrum(&load(input)?, *tol, *method, *max_iter)
        }
        Command::Metrics { input, q } => {
            only(&[Format::Json], "metrics", Format::Json)?;
            metrics(&load(input)?, *q)
        }
        Command::Bounds { input } => {
            let f = only(&[Format::Json, Format::Md], "bounds", Format::Json)?;
            bounds(&load(input)?, f)
        }
        Command::Surgery(op) => {
            only(&[Format::Json], "surgery", Format::Json)?;
            surgery(op)
        }
        Command::Generate(op) => {
            only(&[Format::Json], "generate", Format::Json)?;
            generate(op)
        }
        Command::Figure4 { emax } => {
            let f = only(&[Format::Csv, Format::Json], "figure4", Format::Csv)?;
            figure4(*emax, f)
        }
    }
}

fn report_failure(f: &Failure) -> ExitCode {
    let body = Ordered(vec![("error", text(f.kind())), ("message", text(f.message()))]);
    eprintln!("{}", serde_json::to_string(&body).expect("error serializes"));
    ExitCode::from(f.code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return report_failure(&Failure::Usage(e.to_string().trim_end().to_string())),
    };
    match run(&cli) {
        Ok((body, code)) => {
            let mut out = io::stdout().lock();
            if let Err(e) = out.write_all(body.as_bytes()).and_then(|()| out.flush()) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    return report_failure(&Failure::Io(e.to_string()));
                }
            }
            ExitCode::from(code)
        }
        Err(f) => report_failure(&f),
    }
}
