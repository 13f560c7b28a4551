//! Linear modules over finite quandles, their extension quandles, and
//! module homomorphisms with kernels, images and cokernels.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{unit_vector, vec_add, vec_scale, LinalgError, Matrix, SpanCoordinates};
use crate::quandle::{is_transitive, FiniteQuandle, QuandleError, TripleCheck};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("shape mismatch for {which} at ({x}, {y})")]
    ShapeMismatch {
        which: &'static str,
        x: usize,
        y: usize,
    },
    #[error("expected {expected} matrices, found {found}")]
    FamilySize { expected: usize, found: usize },
    #[error("matrix over {found}, module over {expected}")]
    FieldMismatch { expected: Field, found: Field },
    #[error("fiber dimensions must be constant over a transitive quandle")]
    NonConstantDims,
    #[error("phi(x ▷ y) != phi(x) phi(y) phi(x)^-1 at ({x}, {y})")]
    NotConjEquivariant { x: usize, y: usize },
    #[error("phi({x}) is not invertible")]
    NotInvertible { x: usize },
    #[error("fiber map ranks vary: rank {first} at 0 but {found} at {x}")]
    NonConstantRank {
        first: usize,
        found: usize,
        x: usize,
    },
    #[error("not a module homomorphism: {0:?}")]
    NotAHom(HomWitness),
    #[error("extension has more than {cap} elements")]
    CapExceeded { cap: usize },
    #[error("extension materialization needs a prime field")]
    NotPrimeField,
    #[error("modules live over different quandles")]
    DifferentBase,
    #[error("induced map is not well defined at ({x}, {y})")]
    NotWellDefined { x: usize, y: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Quandle(#[from] QuandleError),
}

/// The defining conditions of a module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ModuleAxiom {
    /// `η_{x,y▷z} η_{yz} = η_{x▷y,x▷z} η_{xz}`
    EtaEta,
    /// `η_{x,y▷z} τ_{yz} = τ_{x▷y,x▷z} η_{xy}`
    EtaTau,
    /// `τ_{x,y▷z} = η_{x▷y,x▷z} τ_{xz} + τ_{x▷y,x▷z} τ_{xy}`
    TauSum,
    /// `η_{xx} + τ_{xx} = id`
    Diagonal,
    /// `η_{xy}` invertible
    EtaInvertible,
}

impl ModuleAxiom {
    pub fn name(&self) -> &'static str {
        match self {
            ModuleAxiom::EtaEta => "module_1",
            ModuleAxiom::EtaTau => "module_2",
            ModuleAxiom::TauSum => "module_3",
            ModuleAxiom::Diagonal => "diagonal",
            ModuleAxiom::EtaInvertible => "eta_invertible",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleViolation {
    pub axiom: ModuleAxiom,
    pub x: usize,
    pub y: usize,
    /// Present for the three-variable conditions.
    pub z: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModuleReport {
    pub violations: Vec<ModuleViolation>,
}

impl ModuleReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn failed(&self, axiom: ModuleAxiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlexanderVariant {
    /// `η_{xy} = φ(x)`, `τ_{xy} = 1 - φ(x ▷ y)`
    Standard,
    /// `η_{xy} = φ(x)`, `τ_{xy} = 1 - φ(x)`
    Prime,
}

/// Fibers `A_x = k^{dims[x]}` with `η_{xy}: A_y → A_{x▷y}` and `τ_{xy}: A_x → A_{x▷y}`,
/// both stored at index `x * n + y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearQuandleModule {
    quandle: FiniteQuandle,
    field: Field,
    dims: Vec<usize>,
    eta: Vec<Matrix>,
    tau: Vec<Matrix>,
    rack_module: bool,
}

impl LinearQuandleModule {
    /// Check shapes and fields; the axioms are left to [`LinearQuandleModule::check`].
    pub fn new(
        quandle: FiniteQuandle,
        field: Field,
        dims: Vec<usize>,
        eta: Vec<Matrix>,
        tau: Vec<Matrix>,
        rack_module: bool,
    ) -> Result<Self, ModuleError> {
        let n = quandle.size();
        if dims.len() != n {
            return Err(ModuleError::FamilySize {
                expected: n,
                found: dims.len(),
            });
        }
        for fam in [&eta, &tau] {
            if fam.len() != n * n {
                return Err(ModuleError::FamilySize {
                    expected: n * n,
                    found: fam.len(),
                });
            }
        }
        for x in 0..n {
            for y in 0..n {
                let t = quandle.op(x, y);
                let (e, ta) = (&eta[x * n + y], &tau[x * n + y]);
                for m in [e, ta] {
                    if m.field() != field {
                        return Err(ModuleError::FieldMismatch {
                            expected: field,
                            found: m.field(),
                        });
                    }
                }
                if e.shape() != (dims[t], dims[y]) {
                    return Err(ModuleError::ShapeMismatch { which: "eta", x, y });
                }
                if ta.shape() != (dims[t], dims[x]) {
                    return Err(ModuleError::ShapeMismatch { which: "tau", x, y });
                }
            }
        }
        if is_transitive(&quandle) && dims.windows(2).any(|w| w[0] != w[1]) {
            return Err(ModuleError::NonConstantDims);
        }
        Ok(Self {
            quandle,
            field,
            dims,
            eta,
            tau,
            rack_module,
        })
    }

    /// `η = id`, `τ = 0` with constant fiber dimension.
    pub fn trivial(quandle: FiniteQuandle, field: Field, dim: usize) -> Self {
        let n = quandle.size();
        let eta = vec![Matrix::identity(field, dim); n * n];
        let tau = vec![Matrix::zeros(field, dim, dim); n * n];
        Self {
            quandle,
            field,
            dims: vec![dim; n],
            eta,
            tau,
            rack_module: false,
        }
    }

    pub fn quandle(&self) -> &FiniteQuandle {
        &self.quandle
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn is_rack_module(&self) -> bool {
        self.rack_module
    }

    pub fn eta(&self, x: usize, y: usize) -> &Matrix {
        &self.eta[x * self.quandle.size() + y]
    }

    pub fn tau(&self, x: usize, y: usize) -> &Matrix {
        &self.tau[x * self.quandle.size() + y]
    }

    /// Replace one `η_{xy}`; shapes are not rechecked.
    pub fn set_eta(&mut self, x: usize, y: usize, m: Matrix) {
        let n = self.quandle.size();
        self.eta[x * n + y] = m;
    }

    pub fn set_tau(&mut self, x: usize, y: usize, m: Matrix) {
        let n = self.quandle.size();
        self.tau[x * n + y] = m;
    }

    /// All violated conditions, with the first witness for each.
    pub fn check(&self) -> ModuleReport {
        let q = &self.quandle;
        let n = q.size();
        let mut report = ModuleReport::default();
        let push = |report: &mut ModuleReport, v: ModuleViolation| {
            if !report.failed(v.axiom) {
                report.violations.push(v);
            }
        };
        for x in 0..n {
            for y in 0..n {
                if !self.eta(x, y).is_invertible() {
                    push(
                        &mut report,
                        ModuleViolation {
                            axiom: ModuleAxiom::EtaInvertible,
                            x,
                            y,
                            z: None,
                        },
                    );
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = q.op(x, y);
                for z in 0..n {
                    let (yz, xz) = (q.op(y, z), q.op(x, z));
                    let w = Some(z);
                    if self.eta(x, yz) * self.eta(y, z) != self.eta(xy, xz) * self.eta(x, z) {
                        push(
                            &mut report,
                            ModuleViolation {
                                axiom: ModuleAxiom::EtaEta,
                                x,
                                y,
                                z: w,
                            },
                        );
                    }
                    if self.eta(x, yz) * self.tau(y, z) != self.tau(xy, xz) * self.eta(x, y) {
                        push(
                            &mut report,
                            ModuleViolation {
                                axiom: ModuleAxiom::EtaTau,
                                x,
                                y,
                                z: w,
                            },
                        );
                    }
                    let rhs =
                        &(self.eta(xy, xz) * self.tau(x, z)) + &(self.tau(xy, xz) * self.tau(x, y));
                    if *self.tau(x, yz) != rhs {
                        push(
                            &mut report,
                            ModuleViolation {
                                axiom: ModuleAxiom::TauSum,
                                x,
                                y,
                                z: w,
                            },
                        );
                    }
                }
            }
        }
        if !self.rack_module {
            for x in 0..n {
                if !(self.eta(x, x) + self.tau(x, x)).is_identity() {
                    push(
                        &mut report,
                        ModuleViolation {
                            axiom: ModuleAxiom::Diagonal,
                            x,
                            y: x,
                            z: None,
                        },
                    );
                    break;
                }
            }
        }
        report.violations.sort_by_key(|v| v.axiom);
        report
    }

    /// `id - η_{qq}` invertible.
    pub fn is_regular_at(&self, q: usize) -> bool {
        let e = self.eta(q, q);
        (&Matrix::identity(self.field, e.rows()) - e).is_invertible()
    }

    /// Regularity at the given basepoint.
    pub fn is_regular_module(&self, q: usize) -> bool {
        self.is_regular_at(q)
    }

    /// Regularity at every point; on a transitive quandle these agree.
    pub fn regularity_by_point(&self) -> Vec<bool> {
        (0..self.quandle.size())
            .map(|x| self.is_regular_at(x))
            .collect()
    }

    /// `(x, a) ▷ (y, b) = (x ▷ y, η_{xy} b + τ_{xy} a)`.
    pub fn module_op(
        &self,
        x: usize,
        a: &[Scalar],
        y: usize,
        b: &[Scalar],
    ) -> Result<(usize, Vec<Scalar>), ModuleError> {
        if a.len() != self.dims[x] || b.len() != self.dims[y] {
            return Err(ModuleError::ShapeMismatch {
                which: "operand",
                x,
                y,
            });
        }
        let v = vec_add(&self.eta(x, y).apply(b), &self.tau(x, y).apply(a));
        Ok((self.quandle.op(x, y), v))
    }

    pub fn direct_sum(&self, other: &LinearQuandleModule) -> Result<Self, ModuleError> {
        if self.quandle != other.quandle {
            return Err(ModuleError::DifferentBase);
        }
        let n = self.quandle.size();
        let mut eta = Vec::with_capacity(n * n);
        let mut tau = Vec::with_capacity(n * n);
        for i in 0..n * n {
            eta.push(self.eta[i].direct_sum(&other.eta[i])?);
            tau.push(self.tau[i].direct_sum(&other.tau[i])?);
        }
        let dims = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(
            self.quandle.clone(),
            self.field,
            dims,
            eta,
            tau,
            self.rack_module || other.rack_module,
        )
    }
}

/// Alexander-type module of a map `φ` into a conjugation quandle of matrices.
pub fn alexander_module(
    quandle: &FiniteQuandle,
    phi: &[Matrix],
    variant: AlexanderVariant,
) -> Result<LinearQuandleModule, ModuleError> {
    let n = quandle.size();
    if phi.len() != n {
        return Err(ModuleError::FamilySize {
            expected: n,
            found: phi.len(),
        });
    }
    let Some(first) = phi.first() else {
        return Err(ModuleError::FamilySize {
            expected: 1,
            found: 0,
        });
    };
    let field = first.field();
    let d = first.rows();
    for (x, m) in phi.iter().enumerate() {
        if m.shape() != (d, d) {
            return Err(ModuleError::ShapeMismatch {
                which: "phi",
                x,
                y: x,
            });
        }
        if m.field() != field {
            return Err(ModuleError::FieldMismatch {
                expected: field,
                found: m.field(),
            });
        }
        if !m.is_invertible() {
            return Err(ModuleError::NotInvertible { x });
        }
    }
    for x in 0..n {
        for y in 0..n {
            if &phi[quandle.op(x, y)] * &phi[x] != &phi[x] * &phi[y] {
                return Err(ModuleError::NotConjEquivariant { x, y });
            }
        }
    }
    let id = Matrix::identity(field, d);
    let one_minus: Vec<Matrix> = phi.iter().map(|m| &id - m).collect();
    let mut eta = Vec::with_capacity(n * n);
    let mut tau = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            eta.push(phi[x].clone());
            tau.push(match variant {
                AlexanderVariant::Standard => one_minus[quandle.op(x, y)].clone(),
                AlexanderVariant::Prime => one_minus[x].clone(),
            });
        }
    }
    LinearQuandleModule::new(quandle.clone(), field, vec![d; n], eta, tau, false)
}

/// The finite extension quandle on `⊔ A_x` over a prime field.
///
/// Elements are listed fiber by fiber in base order; within a fiber vectors
/// are in lexicographic order with the first coordinate most significant.
#[derive(Debug, Clone)]
pub struct Extension {
    pub quandle: FiniteQuandle,
    prime: u64,
    dims: Vec<usize>,
    offsets: Vec<usize>,
}

impl Extension {
    pub fn size(&self) -> usize {
        self.quandle.size()
    }

    pub fn offset(&self, x: usize) -> usize {
        self.offsets[x]
    }

    pub fn fiber_size(&self, x: usize) -> usize {
        self.offsets[x + 1] - self.offsets[x]
    }

    pub fn encode(&self, x: usize, v: &[Scalar]) -> usize {
        let r: Vec<u64> = v
            .iter()
            .map(|s| s.residue().expect("prime field"))
            .collect();
        self.offsets[x] + encode_residues(&r, self.prime)
    }

    pub fn decode(&self, i: usize) -> (usize, Vec<Scalar>) {
        let x = self.offsets.partition_point(|&o| o <= i) - 1;
        let field = Field::Prime(self.prime);
        let v = decode_residues(i - self.offsets[x], self.dims[x], self.prime)
            .into_iter()
            .map(|r| field.element(r).expect("residue in range"))
            .collect();
        (x, v)
    }

    /// Base point of element `i`.
    pub fn base(&self, i: usize) -> usize {
        self.offsets.partition_point(|&o| o <= i) - 1
    }
}

fn encode_residues(v: &[u64], p: u64) -> usize {
    v.iter()
        .fold(0usize, |acc, &r| acc * p as usize + r as usize)
}

fn decode_residues(mut i: usize, d: usize, p: u64) -> Vec<u64> {
    let mut v = vec![0u64; d];
    for k in (0..d).rev() {
        v[k] = (i % p as usize) as u64;
        i /= p as usize;
    }
    v
}

fn residue_matrix(m: &Matrix) -> Vec<u64> {
    m.entries()
        .iter()
        .map(|s| s.residue().expect("prime field"))
        .collect()
}

fn apply_residues(m: &[u64], rows: usize, v: &[u64], p: u64, out: &mut [u64]) {
    let cols = v.len();
    for r in 0..rows {
        let mut acc = 0u64;
        for c in 0..cols {
            acc = (acc + m[r * cols + c] * v[c]) % p;
        }
        out[r] = (out[r] + acc) % p;
    }
}

/// Build the extension quandle table; requires `Σ p^{dims[x]} <= cap`.
pub fn materialize_extension(
    m: &LinearQuandleModule,
    cap: usize,
) -> Result<Extension, ModuleError> {
    let Field::Prime(p) = m.field else {
        return Err(ModuleError::NotPrimeField);
    };
    let n = m.quandle.size();
    let mut offsets = vec![0usize];
    for &d in &m.dims {
        let size = (p as usize)
            .checked_pow(d as u32)
            .ok_or(ModuleError::CapExceeded { cap })?;
        let next = offsets
            .last()
            .unwrap()
            .checked_add(size)
            .ok_or(ModuleError::CapExceeded { cap })?;
        if next > cap {
            return Err(ModuleError::CapExceeded { cap });
        }
        offsets.push(next);
    }
    let total = offsets[n];
    let vectors: Vec<Vec<Vec<u64>>> = (0..n)
        .map(|x| {
            (0..offsets[x + 1] - offsets[x])
                .map(|i| decode_residues(i, m.dims[x], p))
                .collect()
        })
        .collect();
    let mut table = vec![0usize; total * total];
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let t = m.quandle.op(x, y);
            let eta = residue_matrix(m.eta(x, y));
            let tau = residue_matrix(m.tau(x, y));
            let dt = m.dims[t];
            // η b for each b in A_y, then τ a added per a
            let eta_b: Vec<Vec<u64>> = vectors[y]
                .iter()
                .map(|b| {
                    let mut o = vec![0u64; dt];
                    apply_residues(&eta, dt, b, p, &mut o);
                    o
                })
                .collect();
            for (ia, a) in vectors[x].iter().enumerate() {
                let mut tau_a = vec![0u64; dt];
                apply_residues(&tau, dt, a, p, &mut tau_a);
                let row = (offsets[x] + ia) * total;
                for (ib, eb) in eta_b.iter().enumerate() {
                    out.clear();
                    out.extend(eb.iter().zip(&tau_a).map(|(u, v)| (u + v) % p));
                    table[row + offsets[y] + ib] = offsets[t] + encode_residues(&out, p);
                }
            }
        }
    }
    let quandle = FiniteQuandle::from_flat_unverified(
        total,
        table,
        m.rack_module || m.quandle.is_rack_only(),
    );
    Ok(Extension {
        quandle,
        prime: p,
        dims: m.dims.clone(),
        offsets,
    })
}

/// Outcome for one of the structure maps of an extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureMapCheck {
    pub name: &'static str,
    pub exhaustive: bool,
    /// A pair of source elements on which the homomorphism identity fails.
    pub witness: Option<(usize, usize)>,
}

/// Verify that projection, zero section, fiberwise addition, negation and
/// scalar multiplication are rack homomorphisms.
///
/// Pairs are swept exhaustively for sources of at most `limit` elements;
/// larger sources use `samples` seeded random pairs.
pub fn check_structure_maps(
    m: &LinearQuandleModule,
    ext: &Extension,
    limit: usize,
    samples: usize,
    seed: u64,
) -> Vec<StructureMapCheck> {
    let e = &ext.quandle;
    let q = &m.quandle;
    let field = m.field;
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut sweep = |name: &'static str, size: usize, hom: &dyn Fn(usize, usize) -> bool| {
        let exhaustive = size <= limit;
        let witness = if exhaustive {
            (0..size)
                .flat_map(|i| (0..size).map(move |j| (i, j)))
                .find(|&(i, j)| !hom(i, j))
        } else if size == 0 {
            None
        } else {
            (0..samples)
                .map(|_| (rng.random_range(0..size), rng.random_range(0..size)))
                .find(|&(i, j)| !hom(i, j))
        };
        out.push(StructureMapCheck {
            name,
            exhaustive,
            witness,
        });
    };

    // π(i ▷ j) = π(i) ▷ π(j)
    sweep("projection", e.size(), &|i, j| {
        ext.base(e.op(i, j)) == q.op(ext.base(i), ext.base(j))
    });
    // ζ(x ▷ y) = ζ(x) ▷ ζ(y)
    let zero = |x: usize| ext.offset(x);
    sweep("zero_section", q.size(), &|x, y| {
        zero(q.op(x, y)) == e.op(zero(x), zero(y))
    });
    let neg = |i: usize| {
        let (x, v) = ext.decode(i);
        ext.encode(x, &v.iter().map(|s| -s).collect::<Vec<_>>())
    };
    sweep("negation", e.size(), &|i, j| {
        neg(e.op(i, j)) == e.op(neg(i), neg(j))
    });
    let two = field.from_i64(2);
    let dbl = |i: usize| {
        let (x, v) = ext.decode(i);
        ext.encode(x, &vec_scale(&two, &v))
    };
    sweep("scalar_multiplication", e.size(), &|i, j| {
        dbl(e.op(i, j)) == e.op(dbl(i), dbl(j))
    });

    // The fiber product A ×_X A, enumerated as (x, a, b) with a, b in A_x.
    let mut fp: Vec<(usize, usize, usize)> = Vec::new();
    for x in 0..q.size() {
        for a in 0..ext.fiber_size(x) {
            for b in 0..ext.fiber_size(x) {
                fp.push((x, ext.offset(x) + a, ext.offset(x) + b));
            }
        }
    }
    let fp_index: BTreeMap<(usize, usize), usize> = fp
        .iter()
        .enumerate()
        .map(|(k, &(_, a, b))| ((a, b), k))
        .collect();
    let add = |k: usize| {
        let (x, a, b) = fp[k];
        let (_, u) = ext.decode(a);
        let (_, v) = ext.decode(b);
        ext.encode(x, &vec_add(&u, &v))
    };
    // (x, a, b) ▷ (y, c, d) = (x ▷ y, a ▷ c, b ▷ d) componentwise
    let fp_op = |k: usize, l: usize| {
        let (_, a, b) = fp[k];
        let (_, c, d) = fp[l];
        fp_index[&(e.op(a, c), e.op(b, d))]
    };
    sweep("addition", fp.len(), &|k, l| {
        add(fp_op(k, l)) == e.op(add(k), add(l))
    });
    out
}

/// Self-distributivity sweep mode for an extension of the given size.
pub fn extension_triple_mode(size: usize, seed: u64) -> TripleCheck {
    TripleCheck::by_size(
        size,
        crate::EXHAUSTIVE_TRIPLE_LIMIT,
        crate::DEFAULT_SAMPLED_TRIPLES,
        seed,
    )
}

/// Where a homomorphism identity fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomWitness {
    /// `"eta"` or `"tau"`.
    pub which: &'static str,
    pub x: usize,
    pub y: usize,
}

/// Fiberwise maps `f_x: A_x → B_x` between modules over the same quandle.
#[derive(Debug, Clone)]
pub struct ModuleHom {
    pub source: LinearQuandleModule,
    pub target: LinearQuandleModule,
    pub maps: Vec<Matrix>,
}

impl ModuleHom {
    pub fn new(
        source: LinearQuandleModule,
        target: LinearQuandleModule,
        maps: Vec<Matrix>,
    ) -> Result<Self, ModuleError> {
        if source.quandle != target.quandle {
            return Err(ModuleError::DifferentBase);
        }
        let n = source.quandle.size();
        if maps.len() != n {
            return Err(ModuleError::FamilySize {
                expected: n,
                found: maps.len(),
            });
        }
        for (x, f) in maps.iter().enumerate() {
            if f.shape() != (target.dims[x], source.dims[x]) {
                return Err(ModuleError::ShapeMismatch {
                    which: "map",
                    x,
                    y: x,
                });
            }
        }
        Ok(Self {
            source,
            target,
            maps,
        })
    }

    pub fn identity(m: &LinearQuandleModule) -> Self {
        let maps = m
            .dims
            .iter()
            .map(|&d| Matrix::identity(m.field, d))
            .collect();
        Self {
            source: m.clone(),
            target: m.clone(),
            maps,
        }
    }

    pub fn zero(
        source: &LinearQuandleModule,
        target: &LinearQuandleModule,
    ) -> Result<Self, ModuleError> {
        let maps = (0..source.dims.len())
            .map(|x| Matrix::zeros(source.field, target.dims[x], source.dims[x]))
            .collect();
        Self::new(source.clone(), target.clone(), maps)
    }

    /// First pair violating `η^B f_y = f_{x▷y} η^A` or `τ^B f_x = f_{x▷y} τ^A`.
    pub fn witness(&self) -> Option<HomWitness> {
        let q = &self.source.quandle;
        for x in 0..q.size() {
            for y in 0..q.size() {
                let t = q.op(x, y);
                if self.target.eta(x, y) * &self.maps[y] != &self.maps[t] * self.source.eta(x, y) {
                    return Some(HomWitness { which: "eta", x, y });
                }
                if self.target.tau(x, y) * &self.maps[x] != &self.maps[t] * self.source.tau(x, y) {
                    return Some(HomWitness { which: "tau", x, y });
                }
            }
        }
        None
    }

    fn constant_rank(&self) -> Result<usize, ModuleError> {
        if let Some(w) = self.witness() {
            return Err(ModuleError::NotAHom(w));
        }
        let ranks: Vec<usize> = self.maps.iter().map(Matrix::rank).collect();
        let first = ranks.first().copied().unwrap_or(0);
        match ranks.iter().position(|&r| r != first) {
            Some(x) => Err(ModuleError::NonConstantRank {
                first,
                found: ranks[x],
                x,
            }),
            None => Ok(first),
        }
    }
}

pub fn check_module_hom(h: &ModuleHom) -> bool {
    h.witness().is_none()
}

/// Module structure induced on the subspaces `S_x ⊆ M_x`.
fn submodule(
    m: &LinearQuandleModule,
    bases: Vec<Vec<Vec<Scalar>>>,
) -> Result<LinearQuandleModule, ModuleError> {
    let q = &m.quandle;
    let n = q.size();
    let coords: Vec<SpanCoordinates> = bases
        .iter()
        .enumerate()
        .map(|(x, b)| SpanCoordinates::new(m.field, m.dims[x], b.clone()))
        .collect::<Result<_, _>>()?;
    let mut eta = Vec::with_capacity(n * n);
    let mut tau = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let t = q.op(x, y);
            let bad = ModuleError::NotWellDefined { x, y };
            eta.push(
                coords[t]
                    .restrict(m.eta(x, y), &bases[y])
                    .ok_or(bad.clone())?,
            );
            tau.push(coords[t].restrict(m.tau(x, y), &bases[x]).ok_or(bad)?);
        }
    }
    let dims = bases.iter().map(Vec::len).collect();
    LinearQuandleModule::new(q.clone(), m.field, dims, eta, tau, m.rack_module)
}

/// Kernel fibers `ker f_x` with restricted structure maps.
pub fn kernel_module(h: &ModuleHom) -> Result<LinearQuandleModule, ModuleError> {
    h.constant_rank()?;
    submodule(&h.source, h.maps.iter().map(Matrix::kernel_basis).collect())
}

/// Image fibers `im f_x`, spanned by the pivot columns of each `f_x`.
pub fn image_module(h: &ModuleHom) -> Result<LinearQuandleModule, ModuleError> {
    h.constant_rank()?;
    submodule(&h.target, h.maps.iter().map(Matrix::column_basis).collect())
}

/// Quotients `B_x / im f_x`, in coordinates of the standard basis vectors
/// that are not pivots of the image.
pub fn cokernel_module(h: &ModuleHom) -> Result<LinearQuandleModule, ModuleError> {
    h.constant_rank()?;
    let m = &h.target;
    let q = &m.quandle;
    let n = q.size();
    let field = m.field;
    let mut images = Vec::with_capacity(n);
    let mut complements = Vec::with_capacity(n);
    let mut full = Vec::with_capacity(n);
    for x in 0..n {
        let img = h.maps[x].column_basis();
        let d = m.dims[x];
        let pivots = if img.is_empty() {
            Vec::new()
        } else {
            Matrix::from_rows(field, d, img.clone())?.rref().pivots
        };
        let comp: Vec<Vec<Scalar>> = (0..d)
            .filter(|j| !pivots.contains(j))
            .map(|j| unit_vector(field, d, j))
            .collect();
        let mut all = img.clone();
        all.extend(comp.iter().cloned());
        full.push(SpanCoordinates::new(field, d, all)?);
        images.push(img.len());
        complements.push(comp);
    }
    // Tail coordinates in the basis (image, complement) give the quotient class.
    let quotient = |x: usize, v: &[Scalar]| -> Vec<Scalar> {
        let c = full[x].coords(v).expect("full basis");
        c[images[x]..].to_vec()
    };
    let mut eta = Vec::with_capacity(n * n);
    let mut tau = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let t = q.op(x, y);
            let cols_e: Vec<Vec<Scalar>> = complements[y]
                .iter()
                .map(|c| quotient(t, &m.eta(x, y).apply(c)))
                .collect();
            let cols_t: Vec<Vec<Scalar>> = complements[x]
                .iter()
                .map(|c| quotient(t, &m.tau(x, y).apply(c)))
                .collect();
            let dt = complements[t].len();
            eta.push(Matrix::from_columns(field, dt, &cols_e)?);
            tau.push(Matrix::from_columns(field, dt, &cols_t)?);
        }
    }
    let dims = complements.iter().map(Vec::len).collect();
    LinearQuandleModule::new(q.clone(), field, dims, eta, tau, m.rack_module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::{check_quandle_hom, conjugacy_quandle};

    fn gf(p: u64) -> Field {
        Field::Prime(p)
    }

    fn sl2_class() -> (FiniteQuandle, Vec<Matrix>) {
        let f = gf(5);
        let gens = [
            Matrix::from_i64_rows(f, &[&[1, 1], &[0, 1]]),
            Matrix::from_i64_rows(f, &[&[1, 0], &[1, 1]]),
        ];
        let c =
            conjugacy_quandle(&gens, &Matrix::from_i64_rows(f, &[&[2, 0], &[0, 3]]), 1000).unwrap();
        (c.quandle, c.elements)
    }

    #[test]
    fn zero_dimensional_fibers_are_valid() {
        let m = LinearQuandleModule::trivial(FiniteQuandle::dihedral(3), gf(3), 0);
        assert!(m.check().is_valid());
        let ext = materialize_extension(&m, 100).unwrap();
        assert_eq!(ext.quandle, FiniteQuandle::dihedral(3));
    }

    #[test]
    fn trivial_action_module() {
        let m = LinearQuandleModule::trivial(FiniteQuandle::dihedral(3), gf(3), 1);
        assert!(m.check().is_valid());
        assert!(!m.is_regular_module(0));
        let one = gf(3).one();
        let (t, v) = m
            .module_op(0, std::slice::from_ref(&one), 1, &[gf(3).from_i64(2)])
            .unwrap();
        assert_eq!((t, v), (2, vec![gf(3).from_i64(2)]));
    }

    #[test]
    fn tautological_alexander_modules() {
        let (q, phi) = sl2_class();
        assert_eq!(q.size(), 30);
        for variant in [AlexanderVariant::Standard, AlexanderVariant::Prime] {
            let m = alexander_module(&q, &phi, variant).unwrap();
            assert!(m.check().is_valid(), "{variant:?}");
            assert!(m.regularity_by_point().iter().all(|&r| r));
        }
    }

    #[test]
    fn mutation_breaks_condition_one() {
        let (q, phi) = sl2_class();
        let mut m = alexander_module(&q, &phi, AlexanderVariant::Standard).unwrap();
        let doubled = m.eta(0, 1).scale(&gf(5).from_i64(2));
        m.set_eta(0, 1, doubled);
        let r = m.check();
        assert!(r.failed(ModuleAxiom::EtaEta));
        let v = &r.violations[0];
        assert_eq!(v.axiom, ModuleAxiom::EtaEta);
        assert!(v.z.is_some());
    }

    #[test]
    fn scalar_alexander_module() {
        let q = FiniteQuandle::dihedral(5);
        let g = Matrix::scalar(gf(7), 1, &gf(7).from_i64(3));
        let m = alexander_module(&q, &vec![g; 5], AlexanderVariant::Standard).unwrap();
        assert!(m.check().is_valid());
        assert!(m.is_regular_module(0));
        assert_eq!(*m.tau(0, 1).get(0, 0), gf(7).from_i64(-2));
    }

    #[test]
    fn nonequivariant_phi_is_rejected() {
        let q = FiniteQuandle::dihedral(3);
        let f = gf(5);
        let mut phi = vec![Matrix::identity(f, 1); 3];
        phi[1] = Matrix::scalar(f, 1, &f.from_i64(2));
        assert!(matches!(
            alexander_module(&q, &phi, AlexanderVariant::Standard),
            Err(ModuleError::NotConjEquivariant { .. })
        ));
    }

    #[test]
    fn small_extension_is_product() {
        let m = LinearQuandleModule::trivial(FiniteQuandle::dihedral(3), gf(3), 1);
        let ext = materialize_extension(&m, 100).unwrap();
        assert_eq!(ext.size(), 9);
        let r = ext.quandle.check(TripleCheck::Exhaustive);
        assert!(r.is_valid());
        assert_eq!(r.triples_checked, 729);
        for i in 0..9 {
            for j in 0..9 {
                let (x, _) = ext.decode(i);
                let (y, b) = ext.decode(j);
                assert_eq!(
                    ext.decode(ext.quandle.op(i, j)),
                    (FiniteQuandle::dihedral(3).op(x, y), b)
                );
            }
        }
        assert!(check_structure_maps(&m, &ext, 100, 1000, 0)
            .iter()
            .all(|c| c.witness.is_none()));
        let proj: Vec<usize> = (0..9).map(|i| ext.base(i)).collect();
        assert!(check_quandle_hom(&ext.quandle, m.quandle(), &proj));
    }

    #[test]
    fn cap_and_field_errors() {
        let m = LinearQuandleModule::trivial(FiniteQuandle::dihedral(3), gf(3), 2);
        assert_eq!(
            materialize_extension(&m, 10).unwrap_err(),
            ModuleError::CapExceeded { cap: 10 }
        );
        let r = LinearQuandleModule::trivial(FiniteQuandle::dihedral(3), Field::Rational, 1);
        assert_eq!(
            materialize_extension(&r, 10).unwrap_err(),
            ModuleError::NotPrimeField
        );
    }

    #[test]
    fn identity_and_zero_homs() {
        let (q, phi) = sl2_class();
        let m = alexander_module(&q, &phi, AlexanderVariant::Prime).unwrap();
        let id = ModuleHom::identity(&m);
        assert!(check_module_hom(&id));
        assert!(kernel_module(&id).unwrap().dims().iter().all(|&d| d == 0));
        assert_eq!(image_module(&id).unwrap(), m);
        let z = ModuleHom::zero(&m, &m).unwrap();
        assert_eq!(kernel_module(&z).unwrap(), m);
        assert_eq!(cokernel_module(&z).unwrap(), m);
    }

    #[test]
    fn direct_sum_is_valid() {
        let (q, phi) = sl2_class();
        let a = alexander_module(&q, &phi, AlexanderVariant::Prime).unwrap();
        let b = LinearQuandleModule::trivial(q, gf(5), 1);
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.dims()[0], 3);
        assert!(s.check().is_valid());
    }
}
