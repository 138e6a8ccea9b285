//! Command-line front end. Each job reads interchange documents, runs one
//! operation and writes one document (or a selftest transcript).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::decomp::{is_isomorphic_with_retries, IsoVerdict, DEFAULT_RETRIES};
use crate::diagram::{Diagram, DiagramCategory};
use crate::diffmod::{loop_category, rz_h, rz_k, DifferentialModule};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::io::{self, Body, CheckDoc, Document, HomologyEntry, IsoVerdictDoc, ResolutionCertificates, SplitWitness};
use crate::module::{Module, ModuleMap};
use crate::quiver::QuiverAlgebra;
use crate::random::{hereditary_algebras, random_differential_module, random_module, random_semiinjective, rng};
use crate::resolve::{
    hom_in_derived, is_minimal_semiinjective_with, resolve_min, socle_in_cycles, split_injective_part, Certificates,
    ResolveOptions, DEFAULT_BOUND,
};
use crate::selftest::{self, Scale};
use crate::shape::{ShapeCategory, ShapeKind};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "qshape", version, about = "Exact minimal semiinjective resolutions of Q-shaped diagrams")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Coinduction bound for shapes other than the loop.
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    pub bound: usize,
    /// Retry budget for randomized decomposition.
    #[arg(long, global = true, default_value_t = DEFAULT_RETRIES)]
    pub retries: usize,
    /// Field (`F<p>` or `Q`): required to match the inputs, or chosen for `generate`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Summary,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Gorenstein injective differential module to its homology.
    H,
    /// Module to its minimal Gorenstein injective differential module.
    K,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Module,
    Diffmod,
    Semiinjective,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Homology dimension vectors in degrees 1 and 2 at every object.
    Homology { input: PathBuf },
    /// Minimal semiinjective resolution with certificates.
    Resolve { input: PathBuf },
    /// Split a semiinjective object into minimal and injective parts.
    Split { input: PathBuf },
    /// Decide minimality of a semiinjective object.
    CheckMinimal { input: PathBuf },
    /// Decide isomorphism; embeds a witness when one exists.
    Iso { first: PathBuf, second: PathBuf },
    /// Dimension and representatives of Hom in the derived category.
    HomDerived { source: PathBuf, target: PathBuf },
    /// The Ringel-Zhang correspondence in either direction.
    Rz { direction: Direction, input: PathBuf },
    /// Run the property suites at the given scale.
    Selftest { scale: String },
    /// Re-check an output document and its embedded certificates.
    Verify { document: PathBuf },
    /// Write a random input document.
    Generate {
        #[arg(value_enum)]
        kind: GenKind,
        /// Base algebra: A2, A3 or D4.
        #[arg(long, default_value = "A2")]
        algebra: String,
        /// Shape for semiinjective diagrams: `loop` or `cyclic:M,N`.
        #[arg(long, default_value = "loop")]
        shape: String,
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
    },
}

/// The result of one job: exit code and the bytes for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    doc: Option<Document>,
    summary: String,
    pass: bool,
    /// Exit code when `pass` is false.
    fail_code: i32,
}

struct Input {
    path: PathBuf,
    doc: Document,
    digest: String,
}

/// Error tagged with the digest of the input it concerns.
struct JobError {
    error: Error,
    context: Option<(PathBuf, String)>,
}

impl From<Error> for JobError {
    fn from(error: Error) -> Self {
        JobError { error, context: None }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_internal() {
        EXIT_CERTIFICATE
    } else {
        EXIT_INPUT
    }
}

pub fn main_from_env() -> i32 {
    let cli = Cli::parse();
    let out = run(&cli);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

/// Parses `args` (including the program name) and runs the job.
pub fn run_args<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Selftest { scale } => return selftest_job(cli, scale),
        _ => execute(cli),
    };
    match result {
        Ok(report) => {
            let text = match (cli.format, &report.doc) {
                (Format::Json, Some(doc)) => doc.to_string_pretty(),
                _ => report.summary.clone(),
            };
            let code = if report.pass { EXIT_PASS } else { report.fail_code };
            emit(cli, text, code)
        }
        Err(JobError { error, context }) => {
            let mut msg = format!("error[{}]: {error}", error.name());
            if let Some((path, digest)) = context {
                let _ = write!(msg, " (input {}, digest {digest})", path.display());
            }
            msg.push('\n');
            Outcome { code: exit_code(&error), stdout: String::new(), stderr: msg }
        }
    }
}

fn emit(cli: &Cli, text: String, code: i32) -> Outcome {
    match &cli.output {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
            Err(e) => Outcome {
                code: EXIT_INPUT,
                stdout: String::new(),
                stderr: format!("error[io]: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome { code, stdout: text, stderr: String::new() },
    }
}

fn selftest_job(cli: &Cli, scale: &str) -> Outcome {
    let scale = match Scale::parse(scale) {
        Ok(s) => s,
        Err(e) => return Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error[{}]: {e}\n", e.name()) },
    };
    let outcomes = selftest::run(scale, cli.seed);
    let all = outcomes.iter().all(|o| o.passed());
    let text = match cli.format {
        Format::Summary => {
            let mut s: String = outcomes.iter().map(|o| format!("{o}\n")).collect();
            let passed = outcomes.iter().filter(|o| o.passed()).count();
            let _ = writeln!(s, "selftest: {passed} of {} suites passed", outcomes.len());
            s
        }
        Format::Json => {
            let suites: Vec<Value> = outcomes
                .iter()
                .map(|o| {
                    serde_json::json!({
                        "name": o.name,
                        "instances": o.instances,
                        "nontrivial": o.nontrivial,
                        "failures": o.failures,
                        "passed": o.passed(),
                    })
                })
                .collect();
            let v = serde_json::json!({ "format": io::FORMAT, "version": io::VERSION, "kind": "selftest", "seed": cli.seed, "suites": suites, "passed": all });
            io::to_string_pretty(&v)
        }
    };
    emit(cli, text, if all { EXIT_PASS } else { EXIT_CERTIFICATE })
}

fn read_input(path: &PathBuf) -> std::result::Result<Input, JobError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| JobError { error: Error::Parse(format!("cannot read {}: {e}", path.display())), context: None })?;
    let digest = match serde_json::from_str::<Value>(&text) {
        Ok(v) => io::digest(&v),
        Err(_) => io::digest(&Value::String(text.clone())),
    };
    let doc = Document::parse(&text).map_err(|error| JobError { error, context: Some((path.clone(), digest.clone())) })?;
    Ok(Input { path: path.clone(), doc, digest })
}

fn options(cli: &Cli) -> ResolveOptions {
    ResolveOptions { seed: cli.seed, bound: cli.bound, retries: cli.retries }
}

fn execute(cli: &Cli) -> std::result::Result<Report, JobError> {
    if let Command::Generate { kind, algebra, shape, max_dim } = &cli.command {
        let spec = match &cli.field {
            Some(s) => FieldSpec::parse(s)?,
            None => FieldSpec::Prime { p: 2 },
        };
        return Ok(match spec {
            FieldSpec::Prime { p } => generate(PrimeField::new(p)?, cli, *kind, algebra, shape, *max_dim)?,
            FieldSpec::Rationals => generate(Rationals, cli, *kind, algebra, shape, *max_dim)?,
        });
    }
    let paths: Vec<&PathBuf> = match &cli.command {
        Command::Homology { input }
        | Command::Resolve { input }
        | Command::Split { input }
        | Command::CheckMinimal { input }
        | Command::Rz { input, .. } => vec![input],
        Command::Iso { first, second } => vec![first, second],
        Command::HomDerived { source, target } => vec![source, target],
        Command::Verify { document } => vec![document],
        Command::Selftest { .. } | Command::Generate { .. } => unreachable!(),
    };
    let inputs = paths.into_iter().map(read_input).collect::<std::result::Result<Vec<_>, _>>()?;
    let spec = inputs[0].doc.header.field;
    if let Some(want) = &cli.field {
        let want = FieldSpec::parse(want)?;
        if want != spec {
            return Err(tag(&inputs[0], Error::Parse(format!("at `field`: document is over {spec}, --field requests {want}"))));
        }
    }
    for i in &inputs[1..] {
        if i.doc.header.field != spec || i.doc.header.algebra != inputs[0].doc.header.algebra {
            return Err(tag(i, Error::MismatchedShapes));
        }
    }
    match spec {
        FieldSpec::Prime { p } => dispatch(PrimeField::new(p)?, cli, &inputs),
        FieldSpec::Rationals => dispatch(Rationals, cli, &inputs),
    }
}

fn tag(input: &Input, error: Error) -> JobError {
    JobError { error, context: Some((input.path.clone(), input.digest.clone())) }
}

/// A parsed input object: a plain module, or a diagram over a shape.
enum Obj<F: Field> {
    Module(Module<F>),
    Diagram(Arc<DiagramCategory<F>>, Diagram<F>),
}

impl<F: Field> Obj<F> {
    /// Modules become differential modules with zero differential.
    fn into_diagram(self) -> Result<(Arc<DiagramCategory<F>>, Diagram<F>)> {
        match self {
            Obj::Diagram(c, x) => Ok((c, x)),
            Obj::Module(m) => {
                let cat = loop_category(m.algebra());
                let x = DifferentialModule::trivial(&m).to_diagram(&cat)?;
                Ok((cat, x))
            }
        }
    }
}

fn load<F: Field>(field: F, input: &Input) -> Result<Obj<F>> {
    let h = &input.doc.header;
    let algebra = io::parse_algebra(field, &h.algebra, "algebra")?;
    match &input.doc.body {
        Body::Module { module } => {
            if h.shape.is_some() {
                return Err(Error::Parse("at `shape`: a module document carries no shape".into()));
            }
            Ok(Obj::Module(io::parse_module(&algebra, module, "module")?))
        }
        Body::Diffmod { module, differential } => {
            if !matches!(h.shape, None | Some(io::ShapeDoc::Loop)) {
                return Err(Error::Parse("at `shape`: a differential module has the loop shape".into()));
            }
            let m = io::parse_module(&algebra, module, "module")?;
            let d = io::parse_module_map(&m, &m, differential, "differential")?;
            let dm = DifferentialModule::new(m, d)?;
            let cat = loop_category(&algebra);
            let x = dm.to_diagram(&cat)?;
            Ok(Obj::Diagram(cat, x))
        }
        Body::Diagram { diagram } => {
            let shape = h.shape.as_ref().ok_or_else(|| Error::Parse("at `shape`: a diagram document needs a shape".into()))?;
            let cat = DiagramCategory::new(io::parse_shape(field, shape)?, algebra)?;
            let x = io::parse_diagram(&cat, diagram, "diagram")?;
            Ok(Obj::Diagram(cat, x))
        }
        other => Err(Error::Parse(format!("at `kind`: expected an input object, found a {} document", other.kind()))),
    }
}

fn load_diagram<F: Field>(field: F, input: &Input) -> std::result::Result<(Arc<DiagramCategory<F>>, Diagram<F>), JobError> {
    load(field, input).and_then(Obj::into_diagram).map_err(|e| tag(input, e))
}

fn diagram_header<F: Field>(cat: &DiagramCategory<F>) -> io::Header {
    io::header(cat.base(), Some(cat.shape()))
}

fn dims_summary(dims: &[usize]) -> String {
    format!("({})", dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","))
}

fn dispatch<F: Field>(field: F, cli: &Cli, inputs: &[Input]) -> std::result::Result<Report, JobError> {
    let opts = options(cli);
    let first = &inputs[0];
    let wrap = |e: Error| tag(first, e);
    match &cli.command {
        Command::Homology { .. } => {
            let (cat, x) = load_diagram(field, first)?;
            homology_report(&cat, &x).map_err(wrap)
        }
        Command::Resolve { .. } => {
            let (cat, x) = load_diagram(field, first)?;
            let r = resolve_min(&cat, &x, &opts).map_err(wrap)?;
            let summary = format!(
                "resolution: source dims {} -> target dims {}\nweak equivalence: {}\nsemiinjective: {}\nminimal: {}\n",
                dims_summary(r.source.dims()),
                dims_summary(r.target.dims()),
                r.certified.weak_equivalence,
                r.certified.semiinjective,
                r.certified.minimal
            );
            let doc = Document {
                header: diagram_header(&cat),
                body: Body::Resolution {
                    source: io::diagram_doc(&cat, &r.source),
                    target: io::diagram_doc(&cat, &r.target),
                    map: io::diagram_map_doc(&cat, &r.map),
                    certificates: cert_doc(r.certified),
                },
            };
            Ok(Report { doc: Some(doc), summary, pass: r.certified.all(), fail_code: EXIT_FALSE })
        }
        Command::Split { .. } => {
            let (cat, x) = load_diagram(field, first)?;
            let s = split_injective_part(&cat, &x, &opts).map_err(wrap)?;
            let summary = format!(
                "split: minimal part dims {}, injective part dims {}\n",
                dims_summary(s.minimal.dims()),
                dims_summary(s.injective.dims())
            );
            let doc = Document {
                header: diagram_header(&cat),
                body: Body::Split {
                    source: io::diagram_doc(&cat, &x),
                    minimal: io::diagram_doc(&cat, &s.minimal),
                    injective: io::diagram_doc(&cat, &s.injective),
                    iso: io::diagram_map_doc(&cat, &s.iso),
                },
            };
            Ok(Report { doc: Some(doc), summary, pass: true, fail_code: EXIT_FALSE })
        }
        Command::CheckMinimal { .. } => {
            let (cat, x) = load_diagram(field, first)?;
            minimality_report(&cat, &x, &opts).map_err(wrap)
        }
        Command::Iso { .. } => iso_report(field, inputs, &opts),
        Command::HomDerived { .. } => {
            let (cat, x) = load_diagram(field, first)?;
            let (cat2, y) = load_diagram(field, &inputs[1])?;
            if cat.shape().kind() != cat2.shape().kind() || io::shape_doc(cat.shape()) != io::shape_doc(cat2.shape()) {
                return Err(tag(&inputs[1], Error::MismatchedShapes));
            }
            let h = hom_in_derived(&cat, &x, &y, &opts).map_err(wrap)?;
            let summary = format!("derived hom: dimension {}\n", h.dim);
            let doc = Document {
                header: diagram_header(&cat),
                body: Body::DerivedHom {
                    source: io::diagram_doc(&cat, &x),
                    target: io::diagram_doc(&cat, &y),
                    dim: h.dim,
                    resolution_target: io::diagram_doc(&cat, &h.resolution.target),
                    resolution_map: io::diagram_map_doc(&cat, &h.resolution.map),
                    representatives: h.representatives.iter().map(|g| io::diagram_map_doc(&cat, g)).collect(),
                },
            };
            Ok(Report { doc: Some(doc), summary, pass: true, fail_code: EXIT_FALSE })
        }
        Command::Rz { direction: Direction::K, .. } => {
            let m = match load(field, first).map_err(wrap)? {
                Obj::Module(m) => m,
                Obj::Diagram(..) => return Err(wrap(Error::Parse("at `kind`: rz k expects a module document".into()))),
            };
            let d = rz_k(&m).map_err(wrap)?;
            let summary = format!("rz k: differential module with dims {}\n", dims_summary(d.underlying().dims()));
            let doc = Document {
                header: io::header(d.algebra(), None),
                body: Body::Diffmod {
                    module: io::module_doc(d.underlying()),
                    differential: io::module_map_doc(d.differential()),
                },
            };
            Ok(Report { doc: Some(doc), summary, pass: true, fail_code: EXIT_FALSE })
        }
        Command::Rz { direction: Direction::H, .. } => {
            let (cat, x) = load_diagram(field, first)?;
            if cat.shape().kind() != ShapeKind::Loop {
                return Err(wrap(Error::Parse("at `shape`: rz h expects a differential module".into())));
            }
            let d = DifferentialModule::from_diagram(&cat, &x).map_err(wrap)?;
            let h = rz_h(&d, cli.seed).map_err(wrap)?;
            let summary = format!("rz h: homology module with dims {}\n", dims_summary(h.dims()));
            let doc = Document { header: io::header(h.algebra(), None), body: Body::Module { module: io::module_doc(&h) } };
            Ok(Report { doc: Some(doc), summary, pass: true, fail_code: EXIT_FALSE })
        }
        Command::Verify { .. } => verify(field, first, &opts),
        Command::Selftest { .. } | Command::Generate { .. } => unreachable!(),
    }
}

fn cert_doc(c: Certificates) -> ResolutionCertificates {
    ResolutionCertificates { weak_equivalence: c.weak_equivalence, semiinjective: c.semiinjective, minimal: c.minimal }
}

fn homology_entries<F: Field>(cat: &DiagramCategory<F>, x: &Diagram<F>) -> Result<Vec<HomologyEntry>> {
    let mut entries = Vec::new();
    for (q, name) in cat.shape().objects().iter().enumerate() {
        for degree in 1..=2 {
            let h = cat.homology(q, degree, x)?;
            entries.push(HomologyEntry { object: name.clone(), degree, dims: h.module().dims().to_vec() });
        }
    }
    Ok(entries)
}

fn homology_report<F: Field>(cat: &DiagramCategory<F>, x: &Diagram<F>) -> Result<Report> {
    let entries = homology_entries(cat, x)?;
    let exact = cat.is_exact(x)?;
    let mut summary = String::new();
    for e in &entries {
        let _ = writeln!(summary, "H^{} at {}: dims {}", e.degree, e.object, dims_summary(&e.dims));
    }
    let _ = writeln!(summary, "exact: {exact}");
    let doc = Document { header: diagram_header(cat), body: Body::Homology { source: io::diagram_doc(cat, x), entries, exact } };
    Ok(Report { doc: Some(doc), summary, pass: true, fail_code: EXIT_FALSE })
}

fn minimality_report<F: Field>(cat: &DiagramCategory<F>, x: &Diagram<F>, opts: &ResolveOptions) -> Result<Report> {
    let semiinjective = cat.is_semiinjective(x)?;
    let socle = if semiinjective && cat.shape().kind() == ShapeKind::Loop { Some(socle_in_cycles(cat, x)?) } else { None };
    let (minimal, split) = if !semiinjective {
        (false, None)
    } else if x.field().modulus().is_some() {
        let s = split_injective_part(cat, x, opts)?;
        let witness = SplitWitness {
            minimal: io::diagram_doc(cat, &s.minimal),
            injective: io::diagram_doc(cat, &s.injective),
            iso: io::diagram_map_doc(cat, &s.iso),
        };
        (s.injective.is_zero(), Some(witness))
    } else {
        (is_minimal_semiinjective_with(cat, x, opts)?, None)
    };
    let mut summary = format!("semiinjective: {semiinjective}\nminimal: {minimal}\n");
    if let Some(s) = socle {
        let _ = writeln!(summary, "socle in cycles: {s}");
    }
    let doc = Document {
        header: diagram_header(cat),
        body: Body::Minimality { source: io::diagram_doc(cat, x), semiinjective, minimal, socle_in_cycles: socle, split },
    };
    Ok(Report { doc: Some(doc), summary, pass: semiinjective && minimal, fail_code: EXIT_FALSE })
}

fn iso_report<F: Field>(field: F, inputs: &[Input], opts: &ResolveOptions) -> std::result::Result<Report, JobError> {
    let a = load(field, &inputs[0]).map_err(|e| tag(&inputs[0], e))?;
    let b = load(field, &inputs[1]).map_err(|e| tag(&inputs[1], e))?;
    let (header, m, n, cat) = match (a, b) {
        (Obj::Module(m), Obj::Module(n)) => (io::header(m.algebra(), None), m, n, None),
        (a, b) => {
            let (cat, x) = a.into_diagram().map_err(|e| tag(&inputs[0], e))?;
            let (cat2, y) = b.into_diagram().map_err(|e| tag(&inputs[1], e))?;
            if io::shape_doc(cat.shape()) != io::shape_doc(cat2.shape()) {
                return Err(tag(&inputs[1], Error::MismatchedShapes));
            }
            (diagram_header(&cat), x, y, Some(cat))
        }
    };
    let as_doc = |x: &Module<F>| match &cat {
        Some(c) => io::diagram_doc(c, x),
        None => io::module_as_diagram_doc(x),
    };
    let map_doc = |g: &ModuleMap<F>| match &cat {
        Some(c) => io::diagram_map_doc(c, g),
        None => vec![io::module_map_doc(g)],
    };
    let (verdict, reason, witness) = match is_isomorphic_with_retries(&m, &n, opts.seed, opts.retries) {
        Ok(IsoVerdict::Isomorphic(w)) => (IsoVerdictDoc::Isomorphic, None, Some(map_doc(&w))),
        Ok(IsoVerdict::NotIsomorphic(r)) => (IsoVerdictDoc::NotIsomorphic, Some(format!("{r:?}")), None),
        Err(Error::Inconclusive(msg)) => (IsoVerdictDoc::Inconclusive, Some(msg), None),
        Err(e) => return Err(tag(&inputs[0], e)),
    };
    let summary = match &verdict {
        IsoVerdictDoc::Isomorphic => "isomorphic\n".to_string(),
        IsoVerdictDoc::NotIsomorphic => format!("not isomorphic ({})\n", reason.as_deref().unwrap_or("")),
        IsoVerdictDoc::Inconclusive => format!("inconclusive ({})\n", reason.as_deref().unwrap_or("")),
    };
    let pass = verdict == IsoVerdictDoc::Isomorphic;
    let doc = Document { header, body: Body::Isomorphism { first: as_doc(&m), second: as_doc(&n), verdict, reason, witness } };
    Ok(Report { doc: Some(doc), summary, pass, fail_code: EXIT_FALSE })
}

fn verify<F: Field>(field: F, input: &Input, opts: &ResolveOptions) -> std::result::Result<Report, JobError> {
    let wrap = |e: Error| tag(input, e);
    let h = &input.doc.header;
    let mut checks: Vec<CheckDoc> = Vec::new();
    let mut check = |name: &str, passed: bool| checks.push(CheckDoc { name: name.into(), passed });
    let algebra = io::parse_algebra(field, &h.algebra, "algebra").map_err(wrap)?;
    let cat = || -> Result<Arc<DiagramCategory<F>>> {
        let shape = h.shape.as_ref().ok_or_else(|| Error::Parse("at `shape`: missing".into()))?;
        DiagramCategory::new(io::parse_shape(field, shape)?, algebra.clone())
    };
    match &input.doc.body {
        Body::Module { .. } | Body::Diffmod { .. } | Body::Diagram { .. } => {
            load(field, input).map_err(wrap)?;
            check("well-formed", true);
        }
        Body::Homology { source, entries, exact } => {
            let cat = cat().map_err(wrap)?;
            let x = io::parse_diagram(&cat, source, "source").map_err(wrap)?;
            check("entries", &homology_entries(&cat, &x).map_err(wrap)? == entries);
            check("exact", cat.is_exact(&x).map_err(wrap)? == *exact);
        }
        Body::Resolution { source, target, map, certificates } => {
            let cat = cat().map_err(wrap)?;
            let x = io::parse_diagram(&cat, source, "source").map_err(wrap)?;
            let i = io::parse_diagram(&cat, target, "target").map_err(wrap)?;
            let f = io::parse_diagram_map(&cat, &x, &i, map, "map").map_err(wrap)?;
            let r = crate::resolve::Resolution { source: x, target: i, map: f, certified: Certificates::default() };
            let again = r.recheck(&cat, opts).map_err(wrap)?;
            check("weak-equivalence", again.weak_equivalence && certificates.weak_equivalence);
            check("semiinjective", again.semiinjective && certificates.semiinjective);
            check("minimal", again.minimal && certificates.minimal);
        }
        Body::Split { source, minimal, injective, iso } => {
            let cat = cat().map_err(wrap)?;
            let (passed, ok_min, ok_inj) = check_split(&cat, source, minimal, injective, iso, opts).map_err(wrap)?;
            check("iso-witness", passed);
            check("minimal-part", ok_min);
            check("injective-part", ok_inj);
        }
        Body::Minimality { source, semiinjective, minimal, socle_in_cycles: socle, split } => {
            let cat = cat().map_err(wrap)?;
            let x = io::parse_diagram(&cat, source, "source").map_err(wrap)?;
            let semi = cat.is_semiinjective(&x).map_err(wrap)?;
            check("semiinjective", semi == *semiinjective);
            if semi {
                let min = is_minimal_semiinjective_with(&cat, &x, opts).map_err(wrap)?;
                check("minimal", min == *minimal);
            } else {
                check("minimal", !*minimal);
            }
            if let Some(s) = socle {
                check("socle-in-cycles", socle_in_cycles(&cat, &x).map_err(wrap)? == *s);
            }
            if let Some(w) = split {
                let (passed, ok_min, ok_inj) = check_split(&cat, source, &w.minimal, &w.injective, &w.iso, opts).map_err(wrap)?;
                let inj = io::parse_diagram(&cat, &w.injective, "split.injective").map_err(wrap)?;
                check("split-witness", passed && ok_min && ok_inj);
                check("verdict-matches-split", inj.is_zero() == *minimal);
            }
        }
        Body::Isomorphism { first, second, verdict, witness, .. } => {
            let shaped = h.shape.as_ref().map(|_| cat()).transpose().map_err(wrap)?;
            let parse = |d: &io::DiagramDoc, at: &str| match &shaped {
                Some(c) => io::parse_diagram(c, d, at),
                None if d.objects.len() == 1 => io::parse_module(&algebra, &d.objects[0], &format!("{at}.objects[0]")),
                None => Err(Error::Parse(format!("at `{at}`: expected one object"))),
            };
            let m = parse(first, "first").map_err(wrap)?;
            let n = parse(second, "second").map_err(wrap)?;
            match (verdict, witness) {
                (IsoVerdictDoc::Isomorphic, Some(w)) => {
                    let g = match &shaped {
                        Some(c) => io::parse_diagram_map(c, &m, &n, w, "witness"),
                        None if w.len() == 1 => io::parse_module_map(&m, &n, &w[0], "witness[0]"),
                        None => Err(Error::Parse("at `witness`: expected one object".into())),
                    }
                    .map_err(wrap)?;
                    check("witness-is-isomorphism", g.is_homomorphism() && g.is_iso());
                }
                (IsoVerdictDoc::Isomorphic, None) => check("witness-present", false),
                (IsoVerdictDoc::NotIsomorphic, _) => {
                    let again = is_isomorphic_with_retries(&m, &n, opts.seed, opts.retries).map_err(wrap)?;
                    check("not-isomorphic", !again.is_isomorphic());
                }
                (IsoVerdictDoc::Inconclusive, _) => check("inconclusive-carries-no-claim", witness.is_none()),
            }
        }
        Body::DerivedHom { source, target, dim, resolution_target, resolution_map, representatives } => {
            let cat = cat().map_err(wrap)?;
            let x = io::parse_diagram(&cat, source, "source").map_err(wrap)?;
            let y = io::parse_diagram(&cat, target, "target").map_err(wrap)?;
            let i = io::parse_diagram(&cat, resolution_target, "resolution_target").map_err(wrap)?;
            let f = io::parse_diagram_map(&cat, &y, &i, resolution_map, "resolution_map").map_err(wrap)?;
            let r = crate::resolve::Resolution { source: y, target: i.clone(), map: f, certified: Certificates::default() };
            check("resolution", r.recheck(&cat, opts).map_err(wrap)?.all());
            let reps = representatives
                .iter()
                .enumerate()
                .map(|(k, g)| io::parse_diagram_map(&cat, &x, &i, g, &format!("representatives[{k}]")))
                .collect::<Result<Vec<_>>>()
                .map_err(wrap)?;
            check("representatives-are-maps", reps.iter().all(|g| g.is_homomorphism()));
            check("representative-count", reps.len() == *dim);
            check("dimension", cat.hom_mod_injectives(&x, &i).map_err(wrap)?.dim == *dim);
        }
        Body::Verification { .. } => {
            return Err(wrap(Error::Parse("at `kind`: verification reports are not re-verifiable".into())));
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    let mut summary = String::new();
    for c in &checks {
        let _ = writeln!(summary, "{} {}", if c.passed { "ok  " } else { "FAIL" }, c.name);
    }
    let _ = writeln!(summary, "verify {}: {}", input.doc.body.kind(), if passed { "passed" } else { "failed" });
    let doc = Document { header: h.clone(), body: Body::Verification { checked: input.doc.body.kind().into(), checks, passed } };
    Ok(Report { doc: Some(doc), summary, pass: passed, fail_code: EXIT_CERTIFICATE })
}

/// Checks `iso: source → minimal ⊕ injective`; returns (witness ok, minimal part ok, injective part ok).
fn check_split<F: Field>(
    cat: &DiagramCategory<F>,
    source: &io::DiagramDoc,
    minimal: &io::DiagramDoc,
    injective: &io::DiagramDoc,
    iso: &io::MapDoc,
    opts: &ResolveOptions,
) -> Result<(bool, bool, bool)> {
    let x = io::parse_diagram(cat, source, "source")?;
    let m = io::parse_diagram(cat, minimal, "minimal")?;
    let j = io::parse_diagram(cat, injective, "injective")?;
    let sum = cat.direct_sum(&[m.clone(), j.clone()]).module;
    let g = io::parse_diagram_map(cat, &x, &sum, iso, "iso")?;
    let witness = g.is_homomorphism() && g.is_iso();
    let ok_inj = cat.is_injective_object(&j)? && cat.is_exact(&j)?;
    let ok_min = cat.is_semiinjective(&m)? && is_minimal_semiinjective_with(cat, &m, opts)?;
    Ok((witness, ok_min, ok_inj))
}

fn named_algebra<F: Field>(field: F, name: &str) -> Result<Arc<QuiverAlgebra<F>>> {
    hereditary_algebras(field)
        .into_iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, a)| a)
        .ok_or_else(|| Error::Parse(format!("unknown algebra {name:?}; expected A2, A3 or D4")))
}

/// `loop` or `cyclic:M,N`.
pub fn parse_shape_spec<F: Field>(field: F, spec: &str) -> Result<Arc<ShapeCategory<F>>> {
    if spec == "loop" {
        return Ok(ShapeCategory::shape_loop(field));
    }
    let bad = || Error::Parse(format!("unknown shape {spec:?}; expected loop or cyclic:M,N"));
    let rest = spec.strip_prefix("cyclic:").ok_or_else(bad)?;
    let (m, n) = rest.split_once(',').ok_or_else(bad)?;
    let m: usize = m.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    ShapeCategory::shape_cyclic(field, m, n)
}

fn generate<F: Field>(field: F, cli: &Cli, kind: GenKind, algebra: &str, shape: &str, max_dim: usize) -> Result<Report> {
    let a = named_algebra(field, algebra)?;
    let mut r = rng(cli.seed);
    let doc = match kind {
        GenKind::Module => {
            let m = random_module(&a, max_dim, &mut r);
            Document { header: io::header(&a, None), body: Body::Module { module: io::module_doc(&m) } }
        }
        GenKind::Diffmod => {
            let d = random_differential_module(&a, max_dim, &mut r);
            Document {
                header: io::header(&a, None),
                body: Body::Diffmod {
                    module: io::module_doc(d.underlying()),
                    differential: io::module_map_doc(d.differential()),
                },
            }
        }
        GenKind::Semiinjective => {
            let cat = DiagramCategory::new(parse_shape_spec(field, shape)?, a)?;
            let x = random_semiinjective(&cat, max_dim.max(1), cli.bound, &mut r)?;
            Document { header: diagram_header(&cat), body: Body::Diagram { diagram: io::diagram_doc(&cat, &x) } }
        }
    };
    let summary = format!("generated {} {}\n", kind_name(kind), doc.digest());
    Ok(Report { doc: Some(doc), summary, pass: true, fail_code: EXIT_FALSE })
}

fn kind_name(k: GenKind) -> &'static str {
    match k {
        GenKind::Module => "module",
        GenKind::Diffmod => "diffmod",
        GenKind::Semiinjective => "diagram",
    }
}
