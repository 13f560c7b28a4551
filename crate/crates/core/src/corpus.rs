//! Named example structures with the properties they are expected to have.
//!
//! Finite-field entries stand in for complex matrix groups: `diag(2, 3)` in
//! `SL(2, 5)` plays the role of `diag(i, -i)` (since `2^2 = -1` mod 5), and
//! `diag(1, 3)` in `GL(2, 7)` that of `diag(1, α)` for a generic `α`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::envelope::{
    envelope_automorphism, primeness, reduce_triplet, standard_envelope, EnvelopeError, LieAlgebra,
};
use crate::linalg::{unit_vector, zero_vector, Matrix};
use crate::lya::{InfSManifold, LieYamagutiAlgebra, LyaError};
use crate::module::{
    alexander_module, check_module_hom, extension_triple_mode, kernel_module,
    materialize_extension, AlexanderVariant, LinearQuandleModule, ModuleError, ModuleHom,
};
use crate::quandle::{
    conjugacy_quandle, inner_group, is_transitive, orbits, transvection_group, ConjugacyQuandle,
    FiniteQuandle, QuandleError, TripleCheck,
};
use crate::representation::{
    assemble, check_abelian_group_object, extract_ism_rep, IsmRep, LyaRep, RepError,
};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown corpus entry {0:?}")]
    UnknownEntry(String),
    #[error("expectation {expectation} does not apply to a {object}")]
    Inapplicable {
        expectation: &'static str,
        object: &'static str,
    },
    #[error(transparent)]
    Quandle(#[from] QuandleError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Lya(#[from] LyaError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Element cap for materializing corpus extensions.
pub const EXTENSION_CAP: usize = 5_000;

/// A module together with a section `x ↦ s(x)` of its extension.
#[derive(Debug, Clone)]
pub struct Section {
    pub module: LinearQuandleModule,
    pub values: Vec<Vec<Scalar>>,
}

#[derive(Debug, Clone)]
pub enum CorpusObject {
    Quandle(FiniteQuandle),
    Module(LinearQuandleModule),
    Section(Section),
    ModuleHom(ModuleHom),
    Ism(InfSManifold),
    Rep(IsmRep),
}

impl CorpusObject {
    pub fn kind(&self) -> &'static str {
        match self {
            CorpusObject::Quandle(_) => "quandle",
            CorpusObject::Module(_) => "module",
            CorpusObject::Section(_) => "section",
            CorpusObject::ModuleHom(_) => "hom",
            CorpusObject::Ism(_) => "lya",
            CorpusObject::Rep(_) => "rep",
        }
    }
}

/// One expected property. Evaluating it yields the same variant holding the observed value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expect {
    QuandleValid(bool),
    Size(usize),
    InnOrder(usize),
    TrOrder(usize),
    Transitive(bool),
    Orbits(usize),
    ModuleValid(bool),
    RegularEverywhere(bool),
    ExtensionSize(usize),
    /// Extension axioms: pairwise exhaustive, self-distributivity exhaustive
    /// up to the triple limit and sampled above it.
    ExtensionValid(bool),
    SectionIdentity(bool),
    HomValid(bool),
    /// `Some(d)` when every kernel fiber has dimension `d`.
    KernelDim(Option<usize>),
    LyaValid(bool),
    IsmValid(bool),
    EnvelopeDim(usize),
    EnvelopeRoundTrip(bool),
    Prime(bool),
    RepValid(bool),
    RismValid(bool),
    RepRegular(bool),
    /// RLY1-6 imply RLY7, RLY8 and RISM1-3 imply RISM4, RISM5 on this instance.
    DerivedIdentities(bool),
    /// Axioms failing on `(T ⊕ V, σ ⊕ ψ)`, in check order.
    ExtensionFailures(Vec<&'static str>),
    RepRoundTrip(bool),
    AbelianGroupObject(bool),
}

impl Expect {
    pub fn name(&self) -> &'static str {
        match self {
            Expect::QuandleValid(_) => "quandle_valid",
            Expect::Size(_) => "size",
            Expect::InnOrder(_) => "inn_order",
            Expect::TrOrder(_) => "tr_order",
            Expect::Transitive(_) => "transitive",
            Expect::Orbits(_) => "orbits",
            Expect::ModuleValid(_) => "module_valid",
            Expect::RegularEverywhere(_) => "regular_everywhere",
            Expect::ExtensionSize(_) => "extension_size",
            Expect::ExtensionValid(_) => "extension_valid",
            Expect::SectionIdentity(_) => "section_identity",
            Expect::HomValid(_) => "hom_valid",
            Expect::KernelDim(_) => "kernel_dim",
            Expect::LyaValid(_) => "lya_valid",
            Expect::IsmValid(_) => "ism_valid",
            Expect::EnvelopeDim(_) => "envelope_dim",
            Expect::EnvelopeRoundTrip(_) => "envelope_round_trip",
            Expect::Prime(_) => "prime",
            Expect::RepValid(_) => "rep_valid",
            Expect::RismValid(_) => "rism_valid",
            Expect::RepRegular(_) => "rep_regular",
            Expect::DerivedIdentities(_) => "derived_identities",
            Expect::ExtensionFailures(_) => "extension_failures",
            Expect::RepRoundTrip(_) => "rep_round_trip",
            Expect::AbelianGroupObject(_) => "abelian_group_object",
        }
    }

    pub fn value(&self) -> String {
        match self {
            Expect::Size(v)
            | Expect::InnOrder(v)
            | Expect::TrOrder(v)
            | Expect::Orbits(v)
            | Expect::ExtensionSize(v)
            | Expect::EnvelopeDim(v) => v.to_string(),
            Expect::KernelDim(v) => match v {
                Some(d) => d.to_string(),
                None => "varies".into(),
            },
            Expect::ExtensionFailures(v) => format!("{v:?}"),
            Expect::QuandleValid(b)
            | Expect::Transitive(b)
            | Expect::ModuleValid(b)
            | Expect::RegularEverywhere(b)
            | Expect::ExtensionValid(b)
            | Expect::SectionIdentity(b)
            | Expect::HomValid(b)
            | Expect::LyaValid(b)
            | Expect::IsmValid(b)
            | Expect::EnvelopeRoundTrip(b)
            | Expect::Prime(b)
            | Expect::RepValid(b)
            | Expect::RismValid(b)
            | Expect::RepRegular(b)
            | Expect::DerivedIdentities(b)
            | Expect::RepRoundTrip(b)
            | Expect::AbelianGroupObject(b) => b.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub description: &'static str,
    pub object: CorpusObject,
    pub manifest: Vec<Expect>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestOutcome {
    pub expected: Expect,
    pub observed: Expect,
}

impl ManifestOutcome {
    pub fn passed(&self) -> bool {
        self.expected == self.observed
    }
}

const FIXED: [&str; 18] = [
    "r3-union",
    "r3-gf3-trivial",
    "r3-gf3-alexander",
    "sl2-gf5-class",
    "sl2-gf5-alexander",
    "sl2-gf5-alexander-prime",
    "gl2-gf7-class",
    "gl2-gf7-alexander",
    "gl2-gf7-alexander-prime",
    "gl2-gf7-hom",
    "gl2-gf7-section",
    "zero-lya",
    "heisenberg-lya",
    "curvature-lts",
    "line-rep",
    "curvature-adjoint-rep",
    "rism3-base-rep",
    "zero-rep",
];

const MUTANTS: [&str; 6] = [
    "mutant-rism1",
    "mutant-rism2-left",
    "mutant-rism2-right",
    "mutant-rism3",
    "mutant-regularity",
    "mutant-rly4",
];

pub const MAX_DIHEDRAL: usize = 15;
pub const MAX_TRIVIAL: usize = 5;

/// Every registered entry name.
pub fn list() -> Vec<String> {
    let mut out: Vec<String> = (1..=MAX_DIHEDRAL)
        .map(|n| format!("dihedral-{n}"))
        .collect();
    out.extend((1..=MAX_TRIVIAL).map(|n| format!("trivial-{n}")));
    out.extend(FIXED.iter().chain(&MUTANTS).map(|s| s.to_string()));
    out
}

fn sized(name: &str, prefix: &str, max: usize) -> Option<usize> {
    let n: usize = name.strip_prefix(prefix)?.parse().ok()?;
    (1..=max).contains(&n).then_some(n)
}

pub fn build(name: &str) -> Result<CorpusEntry, CorpusError> {
    let entry = |description, object, manifest| CorpusEntry {
        name: name.to_string(),
        description,
        object,
        manifest,
    };
    if let Some(n) = sized(name, "dihedral-", MAX_DIHEDRAL) {
        let mut manifest = vec![Expect::QuandleValid(true), Expect::Size(n)];
        if n == 3 {
            manifest.extend([
                Expect::InnOrder(6),
                Expect::TrOrder(3),
                Expect::Transitive(true),
            ]);
        }
        return Ok(entry(
            "dihedral quandle i ▷ j = 2i - j mod n",
            CorpusObject::Quandle(FiniteQuandle::dihedral(n)),
            manifest,
        ));
    }
    if let Some(n) = sized(name, "trivial-", MAX_TRIVIAL) {
        let manifest = vec![
            Expect::QuandleValid(true),
            Expect::Size(n),
            Expect::InnOrder(1),
            Expect::Orbits(n),
        ];
        return Ok(entry(
            "trivial quandle x ▷ y = y",
            CorpusObject::Quandle(FiniteQuandle::trivial(n)),
            manifest,
        ));
    }
    let gf3 = Field::Prime(3);
    let q = Field::Rational;
    Ok(match name {
        "r3-union" => entry(
            "R3 ⊔ one point",
            CorpusObject::Quandle(
                FiniteQuandle::dihedral(3).disjoint_union(&FiniteQuandle::trivial(1)),
            ),
            vec![
                Expect::QuandleValid(true),
                Expect::Size(4),
                Expect::Transitive(false),
                Expect::Orbits(2),
            ],
        ),
        "r3-gf3-trivial" => entry(
            "trivial module (x, a) ▷ (y, b) = (x ▷ y, b) over R3 and GF(3)",
            CorpusObject::Module(LinearQuandleModule::trivial(
                FiniteQuandle::dihedral(3),
                gf3,
                1,
            )),
            vec![
                Expect::ModuleValid(true),
                Expect::RegularEverywhere(false),
                Expect::ExtensionSize(9),
                Expect::ExtensionValid(true),
            ],
        ),
        "r3-gf3-alexander" => entry(
            "(x, a) ▷ (y, b) = (x ▷ y, 2a - b) over R3 and GF(3)",
            CorpusObject::Module(constant_module(
                FiniteQuandle::dihedral(3),
                &gf3.from_i64(-1),
            )),
            vec![
                Expect::ModuleValid(true),
                Expect::RegularEverywhere(true),
                Expect::ExtensionSize(9),
                Expect::ExtensionValid(true),
            ],
        ),
        "sl2-gf5-class" => entry(
            "conjugacy class of diag(2, 3) in SL(2, 5)",
            CorpusObject::Quandle(sl2_gf5_class()?.quandle),
            vec![
                Expect::QuandleValid(true),
                Expect::Size(30),
                Expect::Transitive(true),
                Expect::TrOrder(60),
            ],
        ),
        "sl2-gf5-alexander" | "sl2-gf5-alexander-prime" => {
            let c = sl2_gf5_class()?;
            let prime = name.ends_with("prime");
            let variant = if prime {
                AlexanderVariant::Prime
            } else {
                AlexanderVariant::Standard
            };
            let mut manifest = vec![Expect::ModuleValid(true), Expect::RegularEverywhere(true)];
            if prime {
                manifest.extend([Expect::ExtensionSize(750), Expect::ExtensionValid(true)]);
            }
            entry(
                "tautological module of the SL(2, 5) class",
                CorpusObject::Module(alexander_module(&c.quandle, &c.elements, variant)?),
                manifest,
            )
        }
        "gl2-gf7-class" => entry(
            "conjugacy class of diag(1, 3) in GL(2, 7)",
            CorpusObject::Quandle(gl2_gf7_class()?.quandle),
            vec![
                Expect::QuandleValid(true),
                Expect::Size(56),
                Expect::Transitive(true),
            ],
        ),
        "gl2-gf7-alexander" | "gl2-gf7-alexander-prime" => {
            let c = gl2_gf7_class()?;
            let variant = if name.ends_with("prime") {
                AlexanderVariant::Prime
            } else {
                AlexanderVariant::Standard
            };
            entry(
                "tautological module of the GL(2, 7) class; not regular since 1 is an eigenvalue",
                CorpusObject::Module(alexander_module(&c.quandle, &c.elements, variant)?),
                vec![Expect::ModuleValid(true), Expect::RegularEverywhere(false)],
            )
        }
        "gl2-gf7-hom" => entry(
            "f_x = 1 - X from the primed to the standard module",
            CorpusObject::ModuleHom(gl2_gf7_hom()?),
            vec![Expect::HomValid(true), Expect::KernelDim(Some(1))],
        ),
        "gl2-gf7-section" => entry(
            "section s(X) = (3 - X) e1, with (X, s(X)) ▷' (Y, 0) = (X ▷ Y, 0)",
            CorpusObject::Section(gl2_gf7_section()?),
            vec![Expect::SectionIdentity(true)],
        ),
        "zero-lya" => entry(
            "2-dim zero algebra with σ = -1",
            CorpusObject::Ism(InfSManifold::new(
                LieYamagutiAlgebra::zero(q, 2),
                -&Matrix::identity(q, 2),
            )?),
            lya_manifest(2, true),
        ),
        "heisenberg-lya" => entry(
            "Heisenberg Lie algebra as a Lie-Yamaguti algebra, σ = diag(2, 3, 6)",
            CorpusObject::Ism(InfSManifold::new(
                heisenberg(q).as_lya(),
                Matrix::diagonal(q, &[q.from_i64(2), q.from_i64(3), q.from_i64(6)]),
            )?),
            lya_manifest(3, true),
        ),
        "curvature-lts" => entry(
            "constant-curvature triple system [x, y, z] = <y, z> x - <x, z> y with σ = -1",
            CorpusObject::Ism(InfSManifold::new(
                curvature_lts(q, 2),
                -&Matrix::identity(q, 2),
            )?),
            lya_manifest(3, true),
        ),
        "line-rep" => entry(
            "ρ = 0, θ(e, e) = 3 on zero 1-dim T, σ = ψ = -1",
            CorpusObject::Rep(line_rep(0, 3, -1)?),
            rep_manifest(vec![]),
        ),
        "curvature-adjoint-rep" => {
            let t = curvature_lts(q, 2);
            let neg = -&Matrix::identity(q, 2);
            entry(
                "adjoint representation of curvature-lts",
                CorpusObject::Rep(IsmRep::new(LyaRep::adjoint(&t), neg.clone(), neg)?),
                rep_manifest(vec![]),
            )
        }
        "rism3-base-rep" => entry(
            "valid counterpart of mutant-rism3",
            CorpusObject::Rep(rism3_rep(false)?),
            rep_manifest(vec![]),
        ),
        "zero-rep" => {
            let rep = LyaRep::zero(LieYamagutiAlgebra::zero(q, 1), 2);
            entry(
                "zero representation on V = Q^2",
                CorpusObject::Rep(IsmRep::new(
                    rep,
                    s1(-1),
                    Matrix::scalar(q, 2, &q.from_i64(-1)),
                )?),
                rep_manifest(vec![]),
            )
        }
        "mutant-rism1" => entry(
            "line-rep with ρ = 1",
            CorpusObject::Rep(line_rep(1, 3, -1)?),
            mutant_manifest(true, false, true, vec!["ISM1"]),
        ),
        "mutant-rism2-left" => entry(
            "θ(e, e) = E11, ψ = [[-1, 0], [1, -1]]",
            CorpusObject::Rep(rism2_rep([[-1, 0], [1, -1]])?),
            mutant_manifest(true, false, true, vec!["ISM2", "ISM3"]),
        ),
        "mutant-rism2-right" => entry(
            "θ(e, e) = E11, ψ = [[-1, 1], [0, -1]]",
            CorpusObject::Rep(rism2_rep([[-1, 1], [0, -1]])?),
            mutant_manifest(true, false, true, vec!["ISM2"]),
        ),
        "mutant-rism3" => entry(
            "rism3-base-rep with σ = diag(2, 3), ψ = diag(3, 1/2)",
            CorpusObject::Rep(rism3_rep(true)?),
            mutant_manifest(true, false, true, vec!["ISM3"]),
        ),
        "mutant-regularity" => entry(
            "line-rep with t = 0 and ψ = 1",
            CorpusObject::Rep(line_rep(0, 0, 1)?),
            mutant_manifest(true, true, false, vec!["ISM0"]),
        ),
        "mutant-rly4" => entry(
            "θ(e1, e1) = θ(e2, e2) = 1 on zero 2-dim T",
            CorpusObject::Rep(rly4_rep(true)?),
            mutant_manifest(false, true, true, vec!["LY6"]),
        ),
        _ => return Err(CorpusError::UnknownEntry(name.to_string())),
    })
}

fn lya_manifest(envelope_dim: usize, prime: bool) -> Vec<Expect> {
    vec![
        Expect::LyaValid(true),
        Expect::IsmValid(true),
        Expect::EnvelopeDim(envelope_dim),
        Expect::EnvelopeRoundTrip(true),
        Expect::Prime(prime),
    ]
}

fn rep_manifest(failures: Vec<&'static str>) -> Vec<Expect> {
    vec![
        Expect::RepValid(true),
        Expect::RismValid(true),
        Expect::RepRegular(true),
        Expect::DerivedIdentities(true),
        Expect::ExtensionFailures(failures),
        Expect::RepRoundTrip(true),
        Expect::AbelianGroupObject(true),
    ]
}

fn mutant_manifest(
    rep: bool,
    rism: bool,
    regular: bool,
    failures: Vec<&'static str>,
) -> Vec<Expect> {
    vec![
        Expect::RepValid(rep),
        Expect::RismValid(rism),
        Expect::RepRegular(regular),
        Expect::DerivedIdentities(true),
        Expect::ExtensionFailures(failures),
        Expect::RepRoundTrip(true),
    ]
}

fn s1(v: i64) -> Matrix {
    Matrix::scalar(Field::Rational, 1, &Field::Rational.from_i64(v))
}

/// `η = s`, `τ = 1 - s` on every pair, with 1-dim fibers.
pub fn constant_module(q: FiniteQuandle, s: &Scalar) -> LinearQuandleModule {
    let f = s.field();
    let n = q.size();
    let eta = Matrix::scalar(f, 1, s);
    let tau = &Matrix::identity(f, 1) - &eta;
    LinearQuandleModule::new(q, f, vec![1; n], vec![eta; n * n], vec![tau; n * n], false)
        .expect("shapes")
}

pub fn sl2_gf5_class() -> Result<ConjugacyQuandle, QuandleError> {
    let f = Field::Prime(5);
    let gens = [
        Matrix::from_i64_rows(f, &[&[1, 1], &[0, 1]]),
        Matrix::from_i64_rows(f, &[&[1, 0], &[1, 1]]),
    ];
    conjugacy_quandle(
        &gens,
        &Matrix::from_i64_rows(f, &[&[2, 0], &[0, 3]]),
        crate::DEFAULT_GROUP_CAP,
    )
}

pub fn gl2_gf7_class() -> Result<ConjugacyQuandle, QuandleError> {
    let f = Field::Prime(7);
    let gens = [
        Matrix::from_i64_rows(f, &[&[1, 1], &[0, 1]]),
        Matrix::from_i64_rows(f, &[&[1, 0], &[1, 1]]),
        Matrix::from_i64_rows(f, &[&[3, 0], &[0, 1]]),
    ];
    conjugacy_quandle(
        &gens,
        &Matrix::from_i64_rows(f, &[&[1, 0], &[0, 3]]),
        crate::DEFAULT_GROUP_CAP,
    )
}

pub fn gl2_gf7_hom() -> Result<ModuleHom, CorpusError> {
    let c = gl2_gf7_class()?;
    let primed = alexander_module(&c.quandle, &c.elements, AlexanderVariant::Prime)?;
    let standard = alexander_module(&c.quandle, &c.elements, AlexanderVariant::Standard)?;
    let id = Matrix::identity(Field::Prime(7), 2);
    let maps = c.elements.iter().map(|x| &id - x).collect();
    Ok(ModuleHom::new(primed, standard, maps)?)
}

pub fn gl2_gf7_section() -> Result<Section, CorpusError> {
    let f = Field::Prime(7);
    let c = gl2_gf7_class()?;
    let module = alexander_module(&c.quandle, &c.elements, AlexanderVariant::Prime)?;
    let alpha = Matrix::scalar(f, 2, &f.from_i64(3));
    let e1 = unit_vector(f, 2, 0);
    let values = c.elements.iter().map(|x| (&alpha - x).apply(&e1)).collect();
    Ok(Section { module, values })
}

/// First pair `(x, y)` where `(x, s(x)) ▷ (y, 0) ≠ (x ▷ y, 0)`.
pub fn section_witness(s: &Section) -> Result<Option<(usize, usize)>, ModuleError> {
    let m = &s.module;
    let n = m.quandle().size();
    for x in 0..n {
        for y in 0..n {
            let zero = zero_vector(m.field(), m.dims()[y]);
            let (t, v) = m.module_op(x, &s.values[x], y, &zero)?;
            if t != m.quandle().op(x, y) || v.iter().any(|c| !c.is_zero()) {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// `[x, y, z] = <y, z> x - <x, z> y` on `k^n`, with zero binary product.
pub fn curvature_lts(field: Field, n: usize) -> LieYamagutiAlgebra {
    LieYamagutiAlgebra::from_fns(
        field,
        n,
        |_, _| zero_vector(field, n),
        |i, j, k| {
            let mut v = zero_vector(field, n);
            if j == k {
                v[i] = &v[i] + &field.one();
            }
            if i == k {
                v[j] = &v[j] - &field.one();
            }
            v
        },
    )
    .expect("shapes")
}

/// `[e1, e2] = e3`.
pub fn heisenberg(field: Field) -> LieAlgebra {
    LieAlgebra::from_fn(field, 3, |(i, j)| match (i, j) {
        (0, 1) => unit_vector(field, 3, 2),
        (1, 0) => unit_vector(field, 3, 2).iter().map(|s| -s).collect(),
        _ => zero_vector(field, 3),
    })
    .expect("shapes")
}

/// The 1-dim family on the zero 1-dim algebra: `ρ = (r)`, `θ(e, e) = (t)`, `δ = 0`, `σ = -1`.
pub fn line_rep(r: i64, t: i64, psi: i64) -> Result<IsmRep, RepError> {
    let lya = LieYamagutiAlgebra::zero(Field::Rational, 1);
    let rep = LyaRep::new(lya, 1, vec![s1(r)], vec![s1(t)], vec![s1(0)])?;
    IsmRep::new(rep, s1(-1), s1(psi))
}

fn rism2_rep(psi: [[i64; 2]; 2]) -> Result<IsmRep, RepError> {
    let q = Field::Rational;
    let mut rep = LyaRep::zero(LieYamagutiAlgebra::zero(q, 1), 2);
    rep.set_theta(0, 0, Matrix::from_i64_rows(q, &[&[1, 0], &[0, 0]]));
    IsmRep::new(rep, s1(-1), Matrix::from_i64_rows(q, &[&psi[0], &psi[1]]))
}

fn rism3_rep(mutated: bool) -> Result<IsmRep, RepError> {
    let q = Field::Rational;
    let e12 = Matrix::from_i64_rows(q, &[&[0, 1], &[0, 0]]);
    let mut rep = LyaRep::zero(LieYamagutiAlgebra::zero(q, 2), 2);
    rep.set_theta(0, 1, e12.clone());
    rep.set_delta(0, 1, -&e12);
    rep.set_delta(1, 0, e12);
    let half = q.ratio(1, 2).expect("nonzero");
    let (sigma, psi) = if mutated {
        (
            Matrix::diagonal(q, &[q.from_i64(2), q.from_i64(3)]),
            Matrix::diagonal(q, &[q.from_i64(3), half]),
        )
    } else {
        (
            Matrix::diagonal(q, &[q.from_i64(2), half.clone()]),
            Matrix::scalar(q, 2, &half),
        )
    };
    IsmRep::new(rep, sigma, psi)
}

fn rly4_rep(mutated: bool) -> Result<IsmRep, RepError> {
    let q = Field::Rational;
    let mut rep = LyaRep::zero(LieYamagutiAlgebra::zero(q, 2), 1);
    rep.set_theta(0, 0, s1(1));
    if mutated {
        rep.set_theta(1, 1, s1(1));
    }
    IsmRep::new(rep, -&Matrix::identity(q, 2), s1(-1))
}

/// `(T ⊕ V, σ ⊕ ψ)` from the raw formulas, whether or not the data is a representation.
pub fn assembled(rep: &IsmRep) -> InfSManifold {
    InfSManifold {
        lya: assemble(&rep.rep),
        sigma: rep.sigma.direct_sum(&rep.psi).expect("same field"),
    }
}

/// Failing axioms of an ISM, LY1-LY6 (sampled LY6 above the exhaustive limit) then ISM0-ISM3.
pub fn ism_failures(ism: &InfSManifold) -> Vec<&'static str> {
    let mut failed = ism
        .lya
        .check_auto(crate::DEFAULT_SAMPLED_TRIPLES / 100, 0)
        .failures();
    failed.extend(ism.check().failures());
    failed
}

fn envelope_round_trip(ism: &InfSManifold) -> Result<bool, CorpusError> {
    let env = standard_envelope(&ism.lya)?;
    let phi = envelope_automorphism(&env, ism)?;
    let red = reduce_triplet(&env.lie, &phi)?;
    Ok(red.ism == *ism)
}

fn all_regular(m: &LinearQuandleModule) -> bool {
    m.regularity_by_point().iter().all(|&r| r)
}

pub fn evaluate(object: &CorpusObject, expect: &Expect) -> Result<Expect, CorpusError> {
    use CorpusObject as O;
    use Expect as E;
    let cap = crate::DEFAULT_GROUP_CAP;
    let inapplicable = || CorpusError::Inapplicable {
        expectation: expect.name(),
        object: object.kind(),
    };
    Ok(match (object, expect) {
        (O::Quandle(q), E::QuandleValid(_)) => {
            E::QuandleValid(q.check(TripleCheck::Exhaustive).is_valid())
        }
        (O::Quandle(q), E::Size(_)) => E::Size(q.size()),
        (O::Quandle(q), E::InnOrder(_)) => E::InnOrder(inner_group(q, cap)?.order()),
        (O::Quandle(q), E::TrOrder(_)) => E::TrOrder(transvection_group(q, cap)?.order()),
        (O::Quandle(q), E::Transitive(_)) => E::Transitive(is_transitive(q)),
        (O::Quandle(q), E::Orbits(_)) => E::Orbits(orbits(q).len()),
        (O::Module(m), E::ModuleValid(_)) => E::ModuleValid(m.check().is_valid()),
        (O::Module(m), E::RegularEverywhere(_)) => E::RegularEverywhere(all_regular(m)),
        (O::Module(m), E::ExtensionSize(_)) => {
            E::ExtensionSize(materialize_extension(m, EXTENSION_CAP)?.size())
        }
        (O::Module(m), E::ExtensionValid(_)) => {
            let ext = materialize_extension(m, EXTENSION_CAP)?;
            E::ExtensionValid(
                ext.quandle
                    .check(extension_triple_mode(ext.size(), 0))
                    .is_valid(),
            )
        }
        (O::Section(s), E::SectionIdentity(_)) => E::SectionIdentity(section_witness(s)?.is_none()),
        (O::ModuleHom(h), E::HomValid(_)) => E::HomValid(check_module_hom(h)),
        (O::ModuleHom(h), E::KernelDim(_)) => {
            let k = kernel_module(h)?;
            let dims = k.dims();
            E::KernelDim(
                dims.first()
                    .copied()
                    .filter(|d| dims.iter().all(|x| x == d)),
            )
        }
        (O::Ism(t), E::LyaValid(_)) => E::LyaValid(
            t.lya
                .check_auto(crate::DEFAULT_SAMPLED_TRIPLES / 100, 0)
                .is_valid(),
        ),
        (O::Ism(t), E::IsmValid(_)) => E::IsmValid(t.check().is_valid()),
        (O::Ism(t), E::EnvelopeDim(_)) => E::EnvelopeDim(standard_envelope(&t.lya)?.dim()),
        (O::Ism(t), E::EnvelopeRoundTrip(_)) => E::EnvelopeRoundTrip(envelope_round_trip(t)?),
        (O::Ism(t), E::Prime(_)) => E::Prime(primeness(&standard_envelope(&t.lya)?)?.is_prime()),
        (O::Rep(r), E::RepValid(_)) => E::RepValid(r.rep.is_rep()),
        (O::Rep(r), E::RismValid(_)) => E::RismValid(r.satisfies_rism()),
        (O::Rep(r), E::RepRegular(_)) => E::RepRegular(r.is_regular()),
        (O::Rep(r), E::DerivedIdentities(_)) => {
            let rly = r.rep.derived_identities().unwrap_or(true);
            let rism = !r.rep.is_rep() || r.derived_identities().unwrap_or(true);
            E::DerivedIdentities(rly && rism)
        }
        (O::Rep(r), E::ExtensionFailures(_)) => E::ExtensionFailures(ism_failures(&assembled(r))),
        (O::Rep(r), E::RepRoundTrip(_)) => {
            let s = assembled(r);
            let back = extract_ism_rep(&s, r.rep.lya.dim())?;
            E::RepRoundTrip(back == *r && assembled(&back) == s)
        }
        (O::Rep(r), E::AbelianGroupObject(_)) => {
            let s = assembled(r);
            E::AbelianGroupObject(
                check_abelian_group_object(&s.lya, r.rep.lya.dim(), Some(&s.sigma))?.is_valid(),
            )
        }
        _ => return Err(inapplicable()),
    })
}

pub fn run_manifest(entry: &CorpusEntry) -> Result<Vec<ManifestOutcome>, CorpusError> {
    entry
        .manifest
        .iter()
        .map(|e| {
            Ok(ManifestOutcome {
                expected: e.clone(),
                observed: evaluate(&entry.object, e)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn green(name: &str) {
        let entry = build(name).unwrap();
        for o in run_manifest(&entry).unwrap() {
            assert!(o.passed(), "{name}: {o:?}");
        }
    }

    #[test]
    fn unknown_names() {
        for bad in ["dihedral-0", "dihedral-16", "trivial-x", "nope"] {
            assert!(matches!(build(bad), Err(CorpusError::UnknownEntry(_))));
        }
    }

    #[test]
    fn small_entries_green() {
        for name in [
            "dihedral-3",
            "trivial-2",
            "r3-union",
            "r3-gf3-trivial",
            "r3-gf3-alexander",
            "zero-lya",
            "curvature-lts",
            "line-rep",
            "mutant-rly4",
        ] {
            green(name);
        }
    }

    #[test]
    fn inapplicable_expectation() {
        let e = build("dihedral-3").unwrap();
        assert!(matches!(
            evaluate(&e.object, &Expect::Prime(true)),
            Err(CorpusError::Inapplicable { .. })
        ));
    }

    #[test]
    fn list_is_buildable_names() {
        let names = list();
        assert_eq!(
            names.len(),
            MAX_DIHEDRAL + MAX_TRIVIAL + FIXED.len() + MUTANTS.len()
        );
        assert!(names.iter().any(|n| n == "sl2-gf5-class"));
    }
}
