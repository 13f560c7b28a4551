//! The `symspace` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use symspace_core::corpus::{self, assembled, section_witness, CorpusError, EXTENSION_CAP};
use symspace_core::envelope::{
    envelope_automorphism, primeness, reduce_triplet, standard_envelope, LocalRegularSTriplet,
};
use symspace_core::lya::InfSManifold;
use symspace_core::module::{
    check_structure_maps, cokernel_module, extension_triple_mode, image_module, kernel_module,
    materialize_extension, LinearQuandleModule,
};
use symspace_core::perm::{GroupError, PermGroup};
use symspace_core::quandle::{
    inner_group, is_transitive, orbits, transvection_group, FiniteQuandle, QuandleError,
    TripleCheck,
};
use symspace_core::representation::{
    assemble, check_abelian_group_object, compare_lift, extract_ism_rep, extract_rep, semidirect,
    IsmRep, LyaRep,
};
use symspace_core::{Matrix, DEFAULT_GROUP_CAP, DEFAULT_SAMPLED_TRIPLES, EXHAUSTIVE_TRIPLE_LIMIT};

use crate::format::{
    self, lya_json, module_json, quandle_json, to_pretty, triplet_json, FormatError, Structure,
};
use crate::report::Report;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "symspace",
    version,
    about = "Check and construct quandles, quandle modules and Lie-Yamaguti algebras"
)]
pub struct Cli {
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum group order enumerated by closure.
    #[arg(long, global = true, default_value_t = DEFAULT_GROUP_CAP)]
    pub cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Treat skipped checks as failures.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the axioms of any structure file.
    Check { file: PathBuf },
    /// Inner and transvection groups of a quandle.
    Groups { file: PathBuf },
    /// Standard enveloping Lie algebra of a Lie-Yamaguti algebra.
    Derive {
        file: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Reduce a local regular s-triplet to an infinitesimal s-manifold.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Semidirect product of a representation, or the extension of a module.
    Extend {
        file: PathBuf,
        /// Build the extension quandle table of a module over GF(p).
        #[arg(long)]
        materialize: bool,
        /// Largest extension table to build.
        #[arg(long, default_value_t = EXTENSION_CAP)]
        max_elements: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Kernel, image or cokernel of a module homomorphism.
    ReduceModule {
        file: PathBuf,
        #[command(flatten)]
        which: Which,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Round trips between representations and split extensions.
    Equiv { file: PathBuf },
    /// The built-in corpus.
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Which {
    #[arg(long)]
    kernel: bool,
    #[arg(long)]
    image: bool,
    #[arg(long)]
    cokernel: bool,
}

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    /// Names of all entries.
    List,
    /// Write an entry as a structure file.
    Emit {
        name: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the manifest of one entry, or of all of them.
    Run { name: Option<String> },
}

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("{path}: expected a {expected} file, found {found}")]
    WrongKind {
        path: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("{path}: {message}")]
    Construction { path: String, message: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

struct Loaded {
    path: String,
    bytes: Vec<u8>,
    structure: Structure,
}

fn load(path: &Path) -> Result<Loaded, InputError> {
    let shown = path.display().to_string();
    let bytes = fs::read(path).map_err(|source| InputError::Io {
        path: shown.clone(),
        source,
    })?;
    let value: Value = serde_json::from_slice(&bytes).map_err(|e| InputError::Format {
        path: shown.clone(),
        source: e.into(),
    })?;
    let structure = Structure::from_json(&value).map_err(|source| InputError::Format {
        path: shown.clone(),
        source,
    })?;
    Ok(Loaded {
        path: shown,
        bytes,
        structure,
    })
}

fn wrong(l: &Loaded, expected: &'static str) -> InputError {
    InputError::WrongKind {
        path: l.path.clone(),
        expected,
        found: l.structure.kind(),
    }
}

fn construction(l: &Loaded, e: impl std::fmt::Display) -> InputError {
    InputError::Construction {
        path: l.path.clone(),
        message: e.to_string(),
    }
}

fn write_output(path: &Path, v: &Value) -> Result<(), InputError> {
    fs::write(path, to_pretty(v)).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn error_witness(e: impl std::fmt::Display) -> Value {
    json!({ "error": e.to_string() })
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let start = Instant::now();
    match execute(&cli, out) {
        Ok(Some(mut report)) => {
            report.finish(cli.strict, start.elapsed().as_millis() as u64);
            let text = match cli.format {
                OutputFormat::Json => to_pretty(&report.to_json()),
                OutputFormat::Text => report.to_text(),
            };
            let _ = out.write_all(text.as_bytes());
            if report.passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Ok(None) => EXIT_PASS,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Option<Report>, InputError> {
    let seed = cli.seed;
    Ok(Some(match &cli.command {
        Command::Check { file } => {
            let l = load(file)?;
            check(&l, seed)?
        }
        Command::Groups { file } => {
            let l = load(file)?;
            let Structure::Quandle(q) = &l.structure else {
                return Err(wrong(&l, "quandle"));
            };
            groups(&l, q, cli.cap)
        }
        Command::Derive { file, output } => {
            let l = load(file)?;
            derive(&l, output.as_deref())?
        }
        Command::Reduce { file, output } => {
            let l = load(file)?;
            reduce(&l, output.as_deref())?
        }
        Command::Extend {
            file,
            materialize,
            max_elements,
            output,
        } => {
            let l = load(file)?;
            match &l.structure {
                Structure::Rep { .. } => extend_rep(&l, output.as_deref())?,
                Structure::Module(m) => {
                    extend_module(&l, m, *materialize, *max_elements, seed, output.as_deref())?
                }
                _ => return Err(wrong(&l, "rep or module")),
            }
        }
        Command::ReduceModule {
            file,
            which,
            output,
        } => {
            let l = load(file)?;
            reduce_module(&l, which, output.as_deref())?
        }
        Command::Equiv { file } => {
            let l = load(file)?;
            equiv(&l)?
        }
        Command::Corpus(CorpusCommand::List) => {
            let mut r = Report::new("corpus list", None, seed);
            r.set("entries", json!(corpus::list()));
            r
        }
        Command::Corpus(CorpusCommand::Emit { name, output }) => {
            let entry = corpus::build(name)?;
            let v = Structure::from(entry.object).to_json();
            match output {
                Some(p) => write_output(p, &v)?,
                None => {
                    let _ = out.write_all(to_pretty(&v).as_bytes());
                }
            }
            return Ok(None);
        }
        Command::Corpus(CorpusCommand::Run { name }) => corpus_run(name.as_deref(), seed)?,
    }))
}

fn check(l: &Loaded, seed: u64) -> Result<Report, InputError> {
    let mut r = Report::new("check", Some(&l.bytes), seed);
    r.set("kind", json!(l.structure.kind()));
    match &l.structure {
        Structure::Quandle(q) => {
            let mode = TripleCheck::by_size(
                q.size(),
                EXHAUSTIVE_TRIPLE_LIMIT,
                DEFAULT_SAMPLED_TRIPLES,
                seed,
            );
            r.quandle("", &q.check(mode), q.is_rack_only());
            r.set("size", json!(q.size()));
        }
        Structure::Module(m) => {
            r.module("", &m.check());
            r.set(
                "regular_everywhere",
                json!(m.regularity_by_point().iter().all(|&b| b)),
            );
        }
        Structure::Hom(h) => {
            r.module("source", &h.source.check());
            r.module("target", &h.target.check());
            let w = h
                .witness()
                .map(|w| json!({"map": w.which, "x": w.x, "y": w.y}));
            r.flag("homomorphism", w.is_none(), w.unwrap_or(Value::Null));
        }
        Structure::Lya { lya, sigma } => {
            r.axioms("", &lya.check_auto(DEFAULT_SAMPLED_TRIPLES, seed));
            if let Some(s) = sigma {
                let ism =
                    InfSManifold::new(lya.clone(), s.clone()).map_err(|e| construction(l, e))?;
                r.axioms("ism", &ism.check());
            }
        }
        Structure::Lie(g) => r.axioms("", &g.check()),
        Structure::Triplet(t) => r.axioms("", &t.check()),
        Structure::Rep { rep, sigma, psi } => {
            r.axioms("", &rep.check());
            if sigma.is_some() || psi.is_some() {
                let ism = format::ism_rep(rep.clone(), sigma.clone(), psi.clone())
                    .map_err(|e| construction(l, e))?;
                r.axioms("", &ism.check());
                r.set("regular", json!(ism.is_regular()));
            }
        }
        Structure::Section(s) => {
            r.module("module", &s.module.check());
            match section_witness(s) {
                Ok(w) => r.flag(
                    "section_identity",
                    w.is_none(),
                    json!(w.map(|(x, y)| json!({"x": x, "y": y}))),
                ),
                Err(e) => r.fail("section_identity", error_witness(e)),
            }
        }
    }
    Ok(r)
}

fn groups(l: &Loaded, q: &FiniteQuandle, cap: usize) -> Report {
    let mut r = Report::new("groups", Some(&l.bytes), 0);
    let order = |r: &mut Report, name: &str, g: Result<PermGroup, QuandleError>| match g {
        Ok(g) => {
            r.pass(format!("{name}_closure"));
            r.set(&format!("{name}_order"), json!(g.order()));
        }
        Err(QuandleError::Group(GroupError::CapExceeded { cap })) => r.skip(
            format!("{name}_closure"),
            format!("closure exceeded the cap of {cap} elements"),
        ),
        Err(e) => r.fail(format!("{name}_closure"), error_witness(e)),
    };
    order(&mut r, "inn", inner_group(q, cap));
    order(&mut r, "tr", transvection_group(q, cap));
    let orbits = orbits(q);
    r.set("orbits", json!(orbits.len()));
    r.set(
        "orbit_sizes",
        json!(orbits.iter().map(Vec::len).collect::<Vec<_>>()),
    );
    r.set("transitive", json!(is_transitive(q)));
    r.set("cap", json!(cap));
    r
}

fn derive(l: &Loaded, output: Option<&Path>) -> Result<Report, InputError> {
    let Structure::Lya { lya, sigma } = &l.structure else {
        return Err(wrong(l, "lya"));
    };
    let mut r = Report::new("derive", Some(&l.bytes), 0);
    r.axioms("lya", &lya.check_auto(DEFAULT_SAMPLED_TRIPLES, 0));
    let env = match standard_envelope(lya) {
        Ok(e) => e,
        Err(e) => {
            r.fail("envelope", error_witness(e));
            return Ok(r);
        }
    };
    r.set("envelope_dim", json!(env.dim()));
    r.set("h_dim", json!(env.h_dim()));
    r.axioms("envelope", &env.lie.check());
    r.axioms("reductive", &env.reductive_triple().check());
    match primeness(&env) {
        Ok(p) => {
            r.set("prime", json!(p.is_prime()));
            r.set("largest_ideal_in_h", json!(p.largest_ideal_in_h));
            r.set("h_in_bracket_of_t", json!(p.h_in_bracket_of_t));
        }
        Err(e) => r.fail("primeness", error_witness(e)),
    }
    let mut structure = format::lie_json(&env.lie);
    if let Some(s) = sigma {
        let ism = InfSManifold::new(lya.clone(), s.clone()).map_err(|e| construction(l, e))?;
        match envelope_automorphism(&env, &ism) {
            Ok(phi) => {
                let triplet = LocalRegularSTriplet {
                    lie: env.lie.clone(),
                    phi,
                };
                r.axioms("triplet", &triplet.check());
                match reduce_triplet(&triplet.lie, &triplet.phi) {
                    Ok(red) => r.flag(
                        "round_trip",
                        red.ism == ism,
                        json!({"reduced": lya_json(&red.ism.lya, Some(&red.ism.sigma))}),
                    ),
                    Err(e) => r.fail("round_trip", error_witness(e)),
                }
                structure = triplet_json(&triplet);
            }
            Err(e) => r.fail("envelope_automorphism", error_witness(e)),
        }
    }
    match output {
        Some(p) => write_output(p, &structure)?,
        None => r.set("structure", structure),
    }
    Ok(r)
}

fn reduce(l: &Loaded, output: Option<&Path>) -> Result<Report, InputError> {
    let Structure::Triplet(t) = &l.structure else {
        return Err(wrong(l, "triplet"));
    };
    let mut r = Report::new("reduce", Some(&l.bytes), 0);
    r.axioms("triplet", &t.check());
    match reduce_triplet(&t.lie, &t.phi) {
        Ok(red) => {
            r.set("dim", json!(red.ism.dim()));
            r.set("degenerate", json!(red.degenerate));
            r.axioms("lya", &red.ism.lya.check_auto(DEFAULT_SAMPLED_TRIPLES, 0));
            r.axioms("ism", &red.ism.check());
            let v = lya_json(&red.ism.lya, Some(&red.ism.sigma));
            match output {
                Some(p) => write_output(p, &v)?,
                None => r.set("structure", v),
            }
        }
        Err(e) => r.fail("reduction", error_witness(e)),
    }
    Ok(r)
}

fn as_ism_rep(l: &Loaded) -> Result<(&LyaRep, Option<IsmRep>), InputError> {
    let Structure::Rep { rep, sigma, psi } = &l.structure else {
        return Err(wrong(l, "rep"));
    };
    let ism = match (sigma, psi) {
        (None, None) => None,
        _ => Some(
            format::ism_rep(rep.clone(), sigma.clone(), psi.clone())
                .map_err(|e| construction(l, e))?,
        ),
    };
    Ok((rep, ism))
}

fn extend_rep(l: &Loaded, output: Option<&Path>) -> Result<Report, InputError> {
    let (rep, ism) = as_ism_rep(l)?;
    let mut r = Report::new("extend", Some(&l.bytes), 0);
    r.axioms("rep", &rep.check());
    let v = match &ism {
        Some(ism) => {
            r.axioms("rep", &ism.check());
            r.set("regular", json!(ism.is_regular()));
            let s = assembled(ism);
            r.axioms("extension", &s.lya.check_auto(DEFAULT_SAMPLED_TRIPLES, 0));
            r.axioms("extension", &s.check());
            if rep.is_rep() && ism.base().is_ok_and(|b| b.check().is_valid()) {
                match semidirect(ism) {
                    Ok(_) => r.pass("equivalence"),
                    Err(e) => r.fail("equivalence", error_witness(e)),
                }
            }
            lya_json(&s.lya, Some(&s.sigma))
        }
        None => {
            let s = assemble(rep);
            r.axioms("extension", &s.check_auto(DEFAULT_SAMPLED_TRIPLES, 0));
            lya_json(&s, None)
        }
    };
    match output {
        Some(p) => write_output(p, &v)?,
        None => r.set("structure", v),
    }
    Ok(r)
}

fn extend_module(
    l: &Loaded,
    m: &LinearQuandleModule,
    materialize: bool,
    max_elements: usize,
    seed: u64,
    output: Option<&Path>,
) -> Result<Report, InputError> {
    let mut r = Report::new("extend", Some(&l.bytes), seed);
    r.module("module", &m.check());
    r.set(
        "regular_everywhere",
        json!(m.regularity_by_point().iter().all(|&b| b)),
    );
    if !materialize {
        return Ok(r);
    }
    let ext = match materialize_extension(m, max_elements) {
        Ok(e) => e,
        Err(e) => {
            r.skip("extension", e.to_string());
            return Ok(r);
        }
    };
    r.set("extension_size", json!(ext.size()));
    let q = &ext.quandle;
    r.quandle(
        "extension",
        &q.check(extension_triple_mode(q.size(), seed)),
        q.is_rack_only(),
    );
    for c in check_structure_maps(
        m,
        &ext,
        EXHAUSTIVE_TRIPLE_LIMIT * EXHAUSTIVE_TRIPLE_LIMIT,
        DEFAULT_SAMPLED_TRIPLES,
        seed,
    ) {
        let w = c.witness.map(|(i, j)| json!({"x": i, "y": j}));
        r.flag(
            format!("map.{}", c.name),
            w.is_none(),
            w.unwrap_or(Value::Null),
        );
    }
    let v = quandle_json(q);
    match output {
        Some(p) => write_output(p, &v)?,
        None => r.set("structure", v),
    }
    Ok(r)
}

fn reduce_module(l: &Loaded, which: &Which, output: Option<&Path>) -> Result<Report, InputError> {
    let Structure::Hom(h) = &l.structure else {
        return Err(wrong(l, "hom"));
    };
    let mut r = Report::new("reduce-module", Some(&l.bytes), 0);
    let w = h
        .witness()
        .map(|w| json!({"map": w.which, "x": w.x, "y": w.y}));
    r.flag("homomorphism", w.is_none(), w.unwrap_or(Value::Null));
    let (name, m) = if which.kernel {
        ("kernel", kernel_module(h))
    } else if which.image {
        ("image", image_module(h))
    } else {
        ("cokernel", cokernel_module(h))
    };
    r.set("which", json!(name));
    match m {
        Ok(m) => {
            r.module(name, &m.check());
            r.set("dims", json!(m.dims()));
            let v = module_json(&m);
            match output {
                Some(p) => write_output(p, &v)?,
                None => r.set("structure", v),
            }
        }
        Err(e) => r.fail(name, error_witness(e)),
    }
    Ok(r)
}

fn equiv(l: &Loaded) -> Result<Report, InputError> {
    let (rep, ism) = as_ism_rep(l)?;
    let mut r = Report::new("equiv", Some(&l.bytes), 0);
    let n = rep.lya.dim();
    r.axioms("rep", &rep.check());
    if !rep.is_rep() {
        return Ok(r);
    }
    let s = assemble(rep);
    match extract_rep(&s, n) {
        Ok(back) => r.flag("round_trip.rep", &back == rep, Value::Null),
        Err(e) => r.fail("round_trip.rep", error_witness(e)),
    }
    match extract_rep(&s, n).map(|back| assemble(&back)) {
        Ok(again) => r.flag("round_trip.extension", again == s, Value::Null),
        Err(e) => r.fail("round_trip.extension", error_witness(e)),
    }
    let sigma = ism
        .as_ref()
        .map(|i| i.sigma.direct_sum(&i.psi).expect("same field"));
    match check_abelian_group_object(&s, n, sigma.as_ref()) {
        Ok(a) => r.axioms("group_object", &a),
        Err(e) => r.fail("group_object", error_witness(e)),
    }
    if let Some(ism) = &ism {
        r.axioms("rep", &ism.check());
        r.set("regular", json!(ism.is_regular()));
        match semidirect(ism) {
            Ok(sd) => {
                r.pass("equivalence");
                r.set("extension_is_ism", json!(sd.is_ism()));
                match extract_ism_rep(&sd.ism, n) {
                    Ok(back) => r.flag("round_trip.ism_rep", &back == ism, Value::Null),
                    Err(e) => r.fail("round_trip.ism_rep", error_witness(e)),
                }
            }
            Err(e) => r.fail("equivalence", error_witness(e)),
        }
        let field = rep.field();
        for k in [0i64, 1, -1, 2] {
            let f = Matrix::identity(field, rep.dim_v).scale(&field.from_i64(k));
            let name = format!("lift.scalar_{k}");
            match compare_lift(ism, ism, &f) {
                Ok(c) => r.flag(
                    name,
                    c.rep_hom == c.lift_is_ism_hom,
                    json!({"rep_hom": c.rep_hom, "lift_is_ism_hom": c.lift_is_ism_hom}),
                ),
                Err(e) => r.fail(name, error_witness(e)),
            }
        }
    }
    Ok(r)
}

fn corpus_run(name: Option<&str>, seed: u64) -> Result<Report, InputError> {
    let mut r = Report::new("corpus run", None, seed);
    let names = match name {
        Some(n) => vec![n.to_string()],
        None => corpus::list(),
    };
    for n in &names {
        let entry = corpus::build(n)?;
        match corpus::run_manifest(&entry) {
            Ok(outcomes) => {
                for o in outcomes {
                    let witness =
                        json!({"expected": o.expected.value(), "observed": o.observed.value()});
                    r.flag(format!("{n}.{}", o.expected.name()), o.passed(), witness);
                }
            }
            Err(e) => r.fail(n.clone(), error_witness(e)),
        }
    }
    r.set("entries", json!(names.len()));
    Ok(r)
}
