//! Lie algebras, reductive triples, the standard enveloping algebra
//! `g(T) = T ⊕ h(T)`, the reduction of a local regular s-triplet back to an
//! infinitesimal s-manifold, and the extended homomorphism algebra.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::check::{find_tuple, AxiomReport};
use crate::linalg::{
    axpy, canonical_basis, is_zero_vector, unit_vector, vec_add, zero_vector, LinalgError, Matrix,
    SpanCoordinates,
};
use crate::lya::{classify_subspace, lya_hom_witness, InfSManifold, LieYamagutiAlgebra, LyaError};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),
    #[error("input is not an infinitesimal s-manifold; failed {0:?}")]
    NotIsm(Vec<&'static str>),
    #[error("input is not a Lie-Yamaguti algebra; failed {0:?}")]
    NotLya(Vec<&'static str>),
    #[error("map is not an automorphism of the Lie algebra")]
    NotAutomorphism,
    #[error("fixed space of dimension {fixed} differs from generalized 1-eigenspace of dimension {generalized}")]
    FixedSpaceMismatch { fixed: usize, generalized: usize },
    #[error("map is not a Lie-Yamaguti homomorphism at basis tuple {0:?}")]
    NotLyaHom(Vec<usize>),
    #[error("subspace is not an ideal")]
    NotIdeal,
    #[error("bracket leaves the subspace")]
    NotClosed,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Lya(#[from] LyaError),
}

/// `[e_i, e_j] = Σ_k bracket[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    field: Field,
    dim: usize,
    bracket: Vec<Vec<Scalar>>,
}

impl LieAlgebra {
    pub fn new(field: Field, dim: usize, bracket: Vec<Vec<Scalar>>) -> Result<Self, EnvelopeError> {
        if bracket.len() != dim * dim || bracket.iter().any(|v| v.len() != dim) {
            return Err(EnvelopeError::ShapeMismatch(
                "bracket tensor must be n x n x n",
            ));
        }
        Ok(Self {
            field,
            dim,
            bracket,
        })
    }

    pub fn from_fn(
        field: Field,
        dim: usize,
        f: impl FnMut((usize, usize)) -> Vec<Scalar>,
    ) -> Result<Self, EnvelopeError> {
        let b = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(f)
            .collect();
        Self::new(field, dim, b)
    }

    pub fn abelian(field: Field, dim: usize) -> Self {
        Self {
            field,
            dim,
            bracket: vec![zero_vector(field, dim); dim * dim],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Scalar] {
        &self.bracket[i * self.dim + j]
    }

    pub fn unit(&self, i: usize) -> Vec<Scalar> {
        unit_vector(self.field, self.dim, i)
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut acc = zero_vector(self.field, self.dim);
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                axpy(&mut acc, &(a * b), self.bracket_basis(i, j));
            }
        }
        acc
    }

    /// `ad_x = [x, -]`.
    pub fn ad(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|k| self.bracket(x, &self.unit(k)))
            .collect();
        Matrix::from_columns(self.field, self.dim, &cols).expect("square")
    }

    /// `[x, x] = 0` (polarized over the basis) and the Jacobi identity.
    pub fn check(&self) -> AxiomReport {
        let n = self.dim;
        let mut r = AxiomReport::new();
        r.push(
            "alternating",
            find_tuple(n, 2, |t| {
                if t[0] == t[1] {
                    is_zero_vector(self.bracket_basis(t[0], t[0]))
                } else {
                    is_zero_vector(&vec_add(
                        self.bracket_basis(t[0], t[1]),
                        self.bracket_basis(t[1], t[0]),
                    ))
                }
            }),
        );
        r.push(
            "jacobi",
            find_tuple(n, 3, |t| {
                let (x, y, z) = (self.unit(t[0]), self.unit(t[1]), self.unit(t[2]));
                let s = vec_add(
                    &vec_add(
                        &self.bracket(&x, &self.bracket(&y, &z)),
                        &self.bracket(&y, &self.bracket(&z, &x)),
                    ),
                    &self.bracket(&z, &self.bracket(&x, &y)),
                );
                is_zero_vector(&s)
            }),
        );
        r
    }

    /// `f[e_i, e_j] = [f e_i, f e_j]` for all basis pairs.
    pub fn hom_witness(&self, target: &LieAlgebra, f: &Matrix) -> Option<Vec<usize>> {
        if f.shape() != (target.dim, self.dim) {
            return Some(Vec::new());
        }
        let fc: Vec<Vec<Scalar>> = (0..self.dim).map(|i| f.column(i)).collect();
        find_tuple(self.dim, 2, |t| {
            f.apply(self.bracket_basis(t[0], t[1])) == target.bracket(&fc[t[0]], &fc[t[1]])
        })
    }

    pub fn is_automorphism(&self, phi: &Matrix) -> bool {
        phi.is_invertible() && self.hom_witness(self, phi).is_none()
    }

    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let (n, m) = (self.dim, other.dim);
        let field = self.field;
        LieAlgebra::from_fn(field, n + m, |(i, j)| {
            let mut v = zero_vector(field, n + m);
            match (i < n, j < n) {
                (true, true) => v[..n].clone_from_slice(self.bracket_basis(i, j)),
                (false, false) => v[n..].clone_from_slice(other.bracket_basis(i - n, j - n)),
                _ => {}
            }
            v
        })
        .expect("shapes")
    }

    /// Whether `[span(a), span(b)] ⊆ span(c)`.
    pub fn bracket_within(
        &self,
        a: &[Vec<Scalar>],
        b: &[Vec<Scalar>],
        c: &[Vec<Scalar>],
    ) -> Result<bool, EnvelopeError> {
        let sc = SpanCoordinates::new(self.field, self.dim, c.to_vec())?;
        Ok(a.iter()
            .all(|x| b.iter().all(|y| sc.contains(&self.bracket(x, y)))))
    }

    pub fn is_subalgebra(&self, basis: &[Vec<Scalar>]) -> Result<bool, EnvelopeError> {
        self.bracket_within(basis, basis, basis)
    }

    pub fn is_ideal(&self, basis: &[Vec<Scalar>]) -> Result<bool, EnvelopeError> {
        let all: Vec<Vec<Scalar>> = (0..self.dim).map(|i| self.unit(i)).collect();
        self.bracket_within(&all, basis, basis)
    }

    /// Structure constants of the subalgebra spanned by `basis`, in that basis.
    pub fn restrict(&self, basis: &[Vec<Scalar>]) -> Result<LieAlgebra, EnvelopeError> {
        let sc = SpanCoordinates::new(self.field, self.dim, basis.to_vec())?;
        let k = basis.len();
        let mut b = Vec::with_capacity(k * k);
        for x in basis {
            for y in basis {
                b.push(
                    sc.coords(&self.bracket(x, y))
                        .ok_or(EnvelopeError::NotClosed)?,
                );
            }
        }
        LieAlgebra::new(self.field, k, b)
    }

    /// The same bracket read as a Lie-Yamaguti algebra with vanishing triple product.
    pub fn as_lya(&self) -> LieYamagutiAlgebra {
        let z = zero_vector(self.field, self.dim);
        LieYamagutiAlgebra::from_fns(
            self.field,
            self.dim,
            |i, j| self.bracket_basis(i, j).to_vec(),
            |_, _, _| z.clone(),
        )
        .expect("shapes")
    }
}

/// `g = m ⊕ h` with `h` a subalgebra and `[h, m] ⊆ m`.
#[derive(Debug, Clone)]
pub struct ReductiveTriple {
    pub lie: LieAlgebra,
    pub m: Vec<Vec<Scalar>>,
    pub h: Vec<Vec<Scalar>>,
}

impl ReductiveTriple {
    fn split(&self) -> Result<SpanCoordinates, EnvelopeError> {
        let mut all = self.m.clone();
        all.extend(self.h.iter().cloned());
        if all.len() != self.lie.dim {
            return Err(EnvelopeError::Linalg(LinalgError::DependentBasis));
        }
        Ok(SpanCoordinates::new(self.lie.field, self.lie.dim, all)?)
    }

    pub fn check(&self) -> AxiomReport {
        let mut r = AxiomReport::new();
        let split = self.split();
        r.push("direct_sum", split.is_err().then(Vec::new));
        let flag = |ok: Result<bool, EnvelopeError>| (!ok.unwrap_or(false)).then(Vec::new);
        r.push("h_subalgebra", flag(self.lie.is_subalgebra(&self.h)));
        r.push(
            "h_m_in_m",
            flag(self.lie.bracket_within(&self.h, &self.m, &self.m)),
        );
        r
    }

    /// `x * y = [x, y]_m` and `[x, y, z] = [[x, y]_h, z]`, in the `m` basis.
    pub fn induced_lya(&self) -> Result<LieYamagutiAlgebra, EnvelopeError> {
        let split = self.split()?;
        let mc = SpanCoordinates::new(self.lie.field, self.lie.dim, self.m.clone())?;
        let k = self.m.len();
        let field = self.lie.field;
        let parts = |v: &[Scalar]| -> (Vec<Scalar>, Vec<Scalar>) {
            let c = split.coords(v).expect("basis of g");
            let mut hv = zero_vector(field, self.lie.dim);
            for (coef, b) in c[k..].iter().zip(&self.h) {
                axpy(&mut hv, coef, b);
            }
            (c[..k].to_vec(), hv)
        };
        let mut star = Vec::with_capacity(k * k);
        let mut triple = Vec::with_capacity(k * k * k);
        for x in &self.m {
            for y in &self.m {
                let (xy_m, xy_h) = parts(&self.lie.bracket(x, y));
                star.push(xy_m);
                for z in &self.m {
                    let v = self.lie.bracket(&xy_h, z);
                    triple.push(mc.coords(&v).ok_or(EnvelopeError::NotClosed)?);
                }
            }
        }
        Ok(LieYamagutiAlgebra::new(field, k, star, triple)?)
    }
}

/// `g(T) = T ⊕ h(T)` in the basis `e_1..e_n` followed by the chosen `D_{e_i,e_j}`.
#[derive(Debug, Clone)]
pub struct Envelope {
    pub lie: LieAlgebra,
    pub lya_dim: usize,
    /// The pivot pairs `(i, j)` whose `D_{e_i,e_j}` form the basis of `h(T)`.
    pub h_pairs: Vec<(usize, usize)>,
    pub h_basis: Vec<Matrix>,
    h_coords: SpanCoordinates,
}

impl Envelope {
    pub fn dim(&self) -> usize {
        self.lie.dim
    }

    pub fn h_dim(&self) -> usize {
        self.h_basis.len()
    }

    /// Coordinates of an endomorphism in the `h(T)` basis.
    pub fn h_coords(&self, u: &Matrix) -> Option<Vec<Scalar>> {
        self.h_coords.coords(&u.vectorize())
    }

    /// The element `(x, u)` of `g(T)`, if `u ∈ h(T)`.
    pub fn element(&self, x: &[Scalar], u: &Matrix) -> Option<Vec<Scalar>> {
        let mut v = x.to_vec();
        v.extend(self.h_coords(u)?);
        Some(v)
    }

    /// Split an element into `(x, u)`.
    pub fn components(&self, v: &[Scalar]) -> (Vec<Scalar>, Matrix) {
        let n = self.lya_dim;
        let field = self.lie.field;
        let mut u = Matrix::zeros(field, n, n);
        for (c, h) in v[n..].iter().zip(&self.h_basis) {
            u = &u + &h.scale(c);
        }
        (v[..n].to_vec(), u)
    }

    pub fn m_basis(&self) -> Vec<Vec<Scalar>> {
        (0..self.lya_dim).map(|i| self.lie.unit(i)).collect()
    }

    pub fn h_vectors(&self) -> Vec<Vec<Scalar>> {
        (self.lya_dim..self.lie.dim)
            .map(|i| self.lie.unit(i))
            .collect()
    }

    pub fn reductive_triple(&self) -> ReductiveTriple {
        ReductiveTriple {
            lie: self.lie.clone(),
            m: self.m_basis(),
            h: self.h_vectors(),
        }
    }
}

/// Build `g(T)` with `[(x, u), (y, v)] = (x*y + u(y) - v(x), D_{x,y} + [u, v])`.
pub fn standard_envelope(t: &LieYamagutiAlgebra) -> Result<Envelope, EnvelopeError> {
    let n = t.dim();
    let field = t.field();
    let mut pairs = Vec::with_capacity(n * n);
    let mut ds = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            pairs.push((i, j));
            ds.push(t.d_basis(i, j));
        }
    }
    let vecs: Vec<Vec<Scalar>> = ds.iter().map(Matrix::vectorize).collect();
    let pivots = if vecs.is_empty() {
        Vec::new()
    } else {
        Matrix::from_columns(field, n * n, &vecs)?.rref().pivots
    };
    let h_pairs: Vec<(usize, usize)> = pivots.iter().map(|&p| pairs[p]).collect();
    let h_basis: Vec<Matrix> = pivots.iter().map(|&p| ds[p].clone()).collect();
    let h_coords = SpanCoordinates::new(
        field,
        n * n,
        pivots.iter().map(|&p| vecs[p].clone()).collect(),
    )?;
    let r = h_basis.len();
    let dim = n + r;
    let hc = |u: &Matrix| {
        h_coords
            .coords(&u.vectorize())
            .ok_or(EnvelopeError::NotClosed)
    };
    let mut bracket = Vec::with_capacity(dim * dim);
    for a in 0..dim {
        for b in 0..dim {
            let mut v = zero_vector(field, dim);
            match (a < n, b < n) {
                (true, true) => {
                    v[..n].clone_from_slice(t.star_basis(a, b));
                    v[n..].clone_from_slice(&hc(&ds[a * n + b])?);
                }
                (true, false) => {
                    let col = h_basis[b - n].column(a);
                    for (k, s) in col.iter().enumerate() {
                        v[k] = -s;
                    }
                }
                (false, true) => {
                    v[..n].clone_from_slice(&h_basis[a - n].column(b));
                }
                (false, false) => {
                    v[n..].clone_from_slice(&hc(&h_basis[a - n].commutator(&h_basis[b - n]))?);
                }
            }
            bracket.push(v);
        }
    }
    Ok(Envelope {
        lie: LieAlgebra::new(field, dim, bracket)?,
        lya_dim: n,
        h_pairs,
        h_basis,
        h_coords,
    })
}

/// `φ_σ(x, f) = (σ x, σ f σ^{-1})` on `g(T)`.
pub fn envelope_automorphism(env: &Envelope, ism: &InfSManifold) -> Result<Matrix, EnvelopeError> {
    let report = ism.check();
    if !report.is_valid() {
        return Err(EnvelopeError::NotIsm(report.failures()));
    }
    let n = env.lya_dim;
    let sigma = &ism.sigma;
    let sinv = sigma.invert()?;
    let mut cols = Vec::with_capacity(env.dim());
    for i in 0..n {
        let mut v = sigma.column(i);
        v.extend(zero_vector(sigma.field(), env.h_dim()));
        cols.push(v);
    }
    for h in &env.h_basis {
        let conj = &(sigma * h) * &sinv;
        let mut v = zero_vector(sigma.field(), n);
        v.extend(env.h_coords(&conj).ok_or(EnvelopeError::NotClosed)?);
        cols.push(v);
    }
    Ok(Matrix::from_columns(sigma.field(), env.dim(), &cols)?)
}

/// A Lie algebra with an automorphism whose fixed space equals its
/// generalized 1-eigenspace.
#[derive(Debug, Clone)]
pub struct LocalRegularSTriplet {
    pub lie: LieAlgebra,
    pub phi: Matrix,
}

impl LocalRegularSTriplet {
    pub fn check(&self) -> AxiomReport {
        let mut r = AxiomReport::new();
        let shaped = self.phi.shape() == (self.lie.dim, self.lie.dim);
        r.push(
            "automorphism",
            (!(shaped && self.lie.is_automorphism(&self.phi))).then(Vec::new),
        );
        let fixed = if shaped {
            fixed_dims(&self.phi)
        } else {
            (0, 1)
        };
        r.push(
            "fixed_equals_generalized",
            (fixed.0 != fixed.1).then(|| vec![fixed.0, fixed.1]),
        );
        r
    }
}

fn one_minus(phi: &Matrix) -> Matrix {
    phi - &Matrix::identity(phi.field(), phi.rows())
}

/// `(dim ker(φ - 1), dim ker(φ - 1)^n)`.
fn fixed_dims(phi: &Matrix) -> (usize, usize) {
    let a = one_minus(phi);
    let n = phi.rows();
    let p = a.pow(n as u64).expect("square");
    (n - a.rank(), n - p.rank())
}

/// Output of [`reduce_triplet`].
#[derive(Debug, Clone)]
pub struct Reduction {
    /// Canonical basis of `m`: the reduced row-echelon rows of the columns of `(φ - 1)^n`.
    pub m_basis: Vec<Vec<Scalar>>,
    /// `ker(φ - 1)` by the kernel convention.
    pub h_basis: Vec<Vec<Scalar>>,
    pub ism: InfSManifold,
    /// `m = 0`.
    pub degenerate: bool,
}

/// `σ = φ|_m`, `x * y = [x, y]_m`, `[x, y, z] = [[x, y]_h, z]` on
/// `m = im (φ - 1)^n`, with `h = ker(φ - 1)`.
pub fn reduce_triplet(lie: &LieAlgebra, phi: &Matrix) -> Result<Reduction, EnvelopeError> {
    let n = lie.dim;
    if phi.shape() != (n, n) {
        return Err(EnvelopeError::ShapeMismatch("phi must be dim x dim"));
    }
    if !lie.is_automorphism(phi) {
        return Err(EnvelopeError::NotAutomorphism);
    }
    let (fixed, generalized) = fixed_dims(phi);
    if fixed != generalized {
        return Err(EnvelopeError::FixedSpaceMismatch { fixed, generalized });
    }
    let field = lie.field;
    let p = one_minus(phi).pow(n as u64)?;
    let m_basis = canonical_basis(field, n, &p.columns());
    let h_basis = one_minus(phi).kernel_basis();
    let triple = ReductiveTriple {
        lie: lie.clone(),
        m: m_basis.clone(),
        h: h_basis.clone(),
    };
    let lya = triple.induced_lya()?;
    let mc = SpanCoordinates::new(field, n, m_basis.clone())?;
    let sigma = mc.restrict(phi, &m_basis).ok_or(EnvelopeError::NotClosed)?;
    let degenerate = m_basis.is_empty();
    Ok(Reduction {
        m_basis,
        h_basis,
        ism: InfSManifold::new(lya, sigma)?,
        degenerate,
    })
}

/// `g~ = {((x, u), (x', u')) : x' = f x, u' f = f u}` inside `g(T) ⊕ g(T')`.
#[derive(Debug, Clone)]
pub struct ExtendedHom {
    pub source: Envelope,
    pub target: Envelope,
    /// Basis of `g~`, in coordinates of `g(T) ⊕ g(T')`.
    pub basis: Vec<Vec<Scalar>>,
    /// Structure constants of `g~` in [`ExtendedHom::basis`].
    pub lie: LieAlgebra,
    /// `π_f: g~ → g(T)`.
    pub pi: Matrix,
    /// `f~: g~ → g(T')`.
    pub f_tilde: Matrix,
    /// `m~` and `h~`, in `g~` coordinates.
    pub m: Vec<Vec<Scalar>>,
    pub h: Vec<Vec<Scalar>>,
}

impl ExtendedHom {
    /// Lie subalgebra, reductive triple, homomorphism and induced-map checks.
    pub fn check(&self, t: &LieYamagutiAlgebra, f: &Matrix) -> AxiomReport {
        let mut r = AxiomReport::new();
        let sum = self.source.lie.direct_sum(&self.target.lie);
        r.push(
            "subalgebra",
            (!sum.is_subalgebra(&self.basis).unwrap_or(false)).then(Vec::new),
        );
        r.push(
            "jacobi",
            self.lie.check().failures().first().map(|_| Vec::new()),
        );
        let rt = ReductiveTriple {
            lie: self.lie.clone(),
            m: self.m.clone(),
            h: self.h.clone(),
        };
        r.extend(rt.check());
        r.push("pi_hom", self.lie.hom_witness(&self.source.lie, &self.pi));
        r.push(
            "f_tilde_hom",
            self.lie.hom_witness(&self.target.lie, &self.f_tilde),
        );
        r.push(
            "pi_surjective",
            (self.pi.rank() != self.source.dim()).then(Vec::new),
        );
        let induced = rt.induced_lya();
        r.push(
            "m_isomorphic_to_source",
            (!induced.as_ref().is_ok_and(|l| l == t)).then(Vec::new),
        );
        let n = t.dim();
        r.push(
            "f_tilde_induces_f",
            (0..n)
                .find(|&i| {
                    let mut want = f.column(i);
                    want.extend(zero_vector(f.field(), self.target.h_dim()));
                    self.f_tilde.apply(&self.m[i]) != want
                })
                .map(|i| vec![i]),
        );
        r
    }
}

pub fn extend_hom(
    t: &LieYamagutiAlgebra,
    t2: &LieYamagutiAlgebra,
    f: &Matrix,
) -> Result<ExtendedHom, EnvelopeError> {
    if let Some(w) = lya_hom_witness(t, t2, f) {
        return Err(EnvelopeError::NotLyaHom(w));
    }
    let (n, n2) = (t.dim(), t2.dim());
    let field = t.field();
    let source = standard_envelope(t)?;
    let target = standard_envelope(t2)?;
    let (r, r2) = (source.h_dim(), target.h_dim());
    let total = n + r + n2 + r2;
    // Unknowns (x, a, x', b); rows: x' - f x = 0, then Σ b_l H'_l f - f Σ a_k H_k = 0.
    let constraints = |with_x: bool| -> Matrix {
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        if with_x {
            for p in 0..n2 {
                let mut row = zero_vector(field, total);
                for q in 0..n {
                    row[q] = -f.get(p, q);
                }
                row[n + r + p] = field.one();
                rows.push(row);
            }
        } else {
            for q in 0..n {
                rows.push(unit_vector(field, total, q));
            }
            for p in 0..n2 {
                rows.push(unit_vector(field, total, n + r + p));
            }
        }
        let fh: Vec<Matrix> = source.h_basis.iter().map(|h| f * h).collect();
        let hf: Vec<Matrix> = target.h_basis.iter().map(|h| h * f).collect();
        for p in 0..n2 {
            for q in 0..n {
                let mut row = zero_vector(field, total);
                for (k, m) in fh.iter().enumerate() {
                    row[n + k] = -m.get(p, q);
                }
                for (l, m) in hf.iter().enumerate() {
                    row[n + r + n2 + l] = m.get(p, q).clone();
                }
                rows.push(row);
            }
        }
        Matrix::from_rows(field, total, rows).expect("rows")
    };
    let basis = constraints(true).kernel_basis();
    let sum = source.lie.direct_sum(&target.lie);
    let lie = sum.restrict(&basis)?;
    let coords = SpanCoordinates::new(field, total, basis.clone())?;
    let k = basis.len();
    let pi = Matrix::from_columns(
        field,
        n + r,
        &basis
            .iter()
            .map(|v| v[..n + r].to_vec())
            .collect::<Vec<_>>(),
    )?;
    let f_tilde = Matrix::from_columns(
        field,
        n2 + r2,
        &basis
            .iter()
            .map(|v| v[n + r..].to_vec())
            .collect::<Vec<_>>(),
    )?;
    let m = (0..n)
        .map(|i| {
            let mut v = unit_vector(field, n, i);
            v.extend(zero_vector(field, r));
            v.extend(f.column(i));
            v.extend(zero_vector(field, r2));
            coords.coords(&v).ok_or(EnvelopeError::NotClosed)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let h = constraints(false)
        .kernel_basis()
        .iter()
        .map(|v| coords.coords(v).ok_or(EnvelopeError::NotClosed))
        .collect::<Result<Vec<_>, _>>()?;
    debug_assert_eq!(m.len() + h.len(), k);
    Ok(ExtendedHom {
        source,
        target,
        basis,
        lie,
        pi,
        f_tilde,
        m,
        h,
    })
}

/// Checks of `U ⊕ h(U, T)` and `U ⊕ h(U, U)` inside `g(T)` for an ideal `U`.
#[derive(Debug, Clone)]
pub struct IdealEnvelope {
    pub report: AxiomReport,
    pub h_ut_dim: usize,
    pub h_uu_dim: usize,
    pub abelian: bool,
}

pub fn ideal_envelope(
    t: &LieYamagutiAlgebra,
    env: &Envelope,
    u: &[Vec<Scalar>],
) -> Result<IdealEnvelope, EnvelopeError> {
    let flags = classify_subspace(t, u)?;
    if !flags.ideal {
        return Err(EnvelopeError::NotIdeal);
    }
    let n = t.dim();
    let field = t.field();
    let g = &env.lie;
    let tb: Vec<Vec<Scalar>> = (0..n).map(|i| t.unit(i)).collect();
    let h_span =
        |left: &[Vec<Scalar>], right: &[Vec<Scalar>]| -> Result<Vec<Vec<Scalar>>, EnvelopeError> {
            let mut vs = Vec::new();
            for x in left {
                for y in right {
                    let mut v = zero_vector(field, n);
                    v.extend(
                        env.h_coords(&t.d_operator(x, y))
                            .ok_or(EnvelopeError::NotClosed)?,
                    );
                    vs.push(v);
                }
            }
            Ok(canonical_basis(field, g.dim(), &vs))
        };
    let h_ut = h_span(u, &tb)?;
    let h_uu = h_span(u, u)?;
    let u_g: Vec<Vec<Scalar>> = u
        .iter()
        .map(|x| {
            let mut v = x.clone();
            v.extend(zero_vector(field, env.h_dim()));
            v
        })
        .collect();
    let join = |a: &[Vec<Scalar>], b: &[Vec<Scalar>]| {
        let mut v = a.to_vec();
        v.extend(b.iter().cloned());
        v
    };
    let big = join(&u_g, &h_ut);
    let small = join(&u_g, &h_uu);
    let all: Vec<Vec<Scalar>> = (0..g.dim()).map(|i| g.unit(i)).collect();
    let h_all = env.h_vectors();
    let flag = |ok: Result<bool, EnvelopeError>| (!ok.unwrap_or(false)).then(Vec::new);
    let mut r = AxiomReport::new();
    r.push(
        "u_plus_h_ut_ideal",
        flag(g.bracket_within(&all, &big, &big)),
    );
    r.push(
        "u_plus_h_uu_ideal_in_u_plus_h_ut",
        flag(g.bracket_within(&big, &small, &small)),
    );
    r.push(
        "h_ut_ideal_in_h",
        flag(g.bracket_within(&h_all, &h_ut, &h_ut)),
    );
    r.push(
        "h_uu_ideal_in_h",
        flag(g.bracket_within(&h_all, &h_uu, &h_uu)),
    );
    if flags.abelian_ideal {
        r.push("h_uu_zero", (!h_uu.is_empty()).then(Vec::new));
        r.push(
            "u_ideal_in_u_plus_h_ut",
            flag(g.bracket_within(&big, &u_g, &u_g)),
        );
        let zero: Vec<Vec<Scalar>> = Vec::new();
        r.push("u_abelian", flag(g.bracket_within(&u_g, &u_g, &zero)));
    }
    Ok(IdealEnvelope {
        report: r,
        h_ut_dim: h_ut.len(),
        h_uu_dim: h_uu.len(),
        abelian: flags.abelian_ideal,
    })
}

/// Primeness of `g(T)`: `h(T)` contains no nonzero ideal of `g(T)`, and `h(T) ⊆ [T, T]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Primeness {
    /// Dimension of the largest ideal of `g(T)` contained in `h(T)`.
    pub largest_ideal_in_h: usize,
    pub h_in_bracket_of_t: bool,
}

impl Primeness {
    pub fn is_prime(&self) -> bool {
        self.largest_ideal_in_h == 0 && self.h_in_bracket_of_t
    }
}

/// Exact decision: the largest ideal inside `h` is the limit of
/// `J_0 = h`, `J_{k+1} = {v ∈ J_k : [e_i, v] ∈ J_k for all i}`.
pub fn primeness(env: &Envelope) -> Result<Primeness, EnvelopeError> {
    let g = &env.lie;
    let field = g.field;
    let dim = g.dim;
    let ads: Vec<Matrix> = (0..dim).map(|i| g.ad(&g.unit(i))).collect();
    let mut j = env.h_vectors();
    loop {
        // equations cutting out J: rows spanning its annihilator
        let eq = if j.is_empty() {
            Matrix::identity(field, dim)
        } else {
            let ann = Matrix::from_rows(field, dim, j.clone())?.kernel_basis();
            Matrix::from_rows(field, dim, ann)?
        };
        let mut stacked = eq.clone();
        for ad in &ads {
            stacked = stacked.vstack(&(&eq * ad))?;
        }
        let next = canonical_basis(field, dim, &stacked.kernel_basis());
        if next.len() == j.len() {
            break;
        }
        j = next;
    }
    let n = env.lya_dim;
    let mut tt = Vec::new();
    for a in 0..n {
        for b in 0..n {
            tt.push(g.bracket_basis(a, b).to_vec());
        }
    }
    let h_in = if env.h_dim() == 0 {
        true
    } else if tt.is_empty() {
        false
    } else {
        let tt = canonical_basis(field, dim, &tt);
        let sc = SpanCoordinates::new(field, dim, tt)?;
        env.h_vectors().iter().all(|v| sc.contains(v))
    };
    Ok(Primeness {
        largest_ideal_in_h: j.len(),
        h_in_bracket_of_t: h_in,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn curvature() -> LieYamagutiAlgebra {
        let f = q();
        LieYamagutiAlgebra::from_fns(
            f,
            2,
            |_, _| zero_vector(f, 2),
            |i, j, k| {
                let mut v = zero_vector(f, 2);
                if j == k {
                    v[i] = &v[i] + &f.one();
                }
                if i == k {
                    v[j] = &v[j] - &f.one();
                }
                v
            },
        )
        .unwrap()
    }

    fn heisenberg() -> LieAlgebra {
        let f = q();
        LieAlgebra::from_fn(f, 3, |(i, j)| match (i, j) {
            (0, 1) => unit_vector(f, 3, 2),
            (1, 0) => unit_vector(f, 3, 2).iter().map(|s| -s).collect(),
            _ => zero_vector(f, 3),
        })
        .unwrap()
    }

    #[test]
    fn curvature_envelope() {
        let t = curvature();
        let env = standard_envelope(&t).unwrap();
        assert_eq!(env.dim(), 3);
        assert!(env.lie.check().is_valid());
        assert!(env.reductive_triple().check().is_valid());
        let d = Matrix::from_i64_rows(q(), &[&[0, 1], &[-1, 0]]);
        assert_eq!(
            env.lie.bracket_basis(0, 1),
            env.element(&zero_vector(q(), 2), &d).unwrap().as_slice()
        );
        let ism = InfSManifold::new(t.clone(), -&Matrix::identity(q(), 2)).unwrap();
        let phi = envelope_automorphism(&env, &ism).unwrap();
        assert_eq!(
            phi,
            Matrix::from_i64_rows(q(), &[&[-1, 0, 0], &[0, -1, 0], &[0, 0, 1]])
        );
        assert!(LocalRegularSTriplet {
            lie: env.lie.clone(),
            phi: phi.clone()
        }
        .check()
        .is_valid());
        let red = reduce_triplet(&env.lie, &phi).unwrap();
        assert_eq!(red.ism, ism);
        assert!(!red.degenerate);
        let p = primeness(&env).unwrap();
        assert!(p.is_prime());
    }

    #[test]
    fn lie_algebra_round_trip() {
        let h = heisenberg();
        assert!(h.check().is_valid());
        let t = h.as_lya();
        assert!(t.check().unwrap().is_valid());
        let env = standard_envelope(&t).unwrap();
        assert_eq!(env.h_dim(), 0);
        assert_eq!(env.lie, h);
        let sigma = Matrix::diagonal(q(), &[q().from_i64(2), q().from_i64(3), q().from_i64(6)]);
        let ism = InfSManifold::new(t, sigma.clone()).unwrap();
        assert!(ism.check().is_valid());
        let phi = envelope_automorphism(&env, &ism).unwrap();
        assert_eq!(phi, sigma);
        assert_eq!(reduce_triplet(&env.lie, &phi).unwrap().ism, ism);
    }

    #[test]
    fn identity_automorphism_is_degenerate() {
        let h = heisenberg();
        let red = reduce_triplet(&h, &Matrix::identity(q(), 3)).unwrap();
        assert!(red.degenerate);
        assert_eq!(red.ism.dim(), 0);
        assert!(red.ism.check().is_valid());
    }

    #[test]
    fn fixed_space_mismatch() {
        let a = LieAlgebra::abelian(q(), 2);
        let jordan = Matrix::from_i64_rows(q(), &[&[1, 1], &[0, 1]]);
        assert_eq!(
            reduce_triplet(&a, &jordan).unwrap_err(),
            EnvelopeError::FixedSpaceMismatch {
                fixed: 1,
                generalized: 2
            }
        );
        let singular = Matrix::zeros(q(), 2, 2);
        assert_eq!(
            reduce_triplet(&a, &singular).unwrap_err(),
            EnvelopeError::NotAutomorphism
        );
    }

    #[test]
    fn no_eigenvalue_one_gives_full_m() {
        let h = heisenberg();
        let phi = Matrix::diagonal(q(), &[q().from_i64(2), q().from_i64(3), q().from_i64(6)]);
        let red = reduce_triplet(&h, &phi).unwrap();
        assert_eq!(red.m_basis.len(), 3);
        assert!(red.h_basis.is_empty());
        assert_eq!(red.ism.lya, h.as_lya());
    }

    #[test]
    fn extend_identity_and_zero() {
        let t = curvature();
        let id = Matrix::identity(q(), 2);
        let e = extend_hom(&t, &t, &id).unwrap();
        assert!(e.check(&t, &id).is_valid());
        assert!(e.pi.is_invertible());
        let z = LieYamagutiAlgebra::zero(q(), 0);
        let zf = Matrix::zeros(q(), 0, 2);
        let e0 = extend_hom(&t, &z, &zf).unwrap();
        assert!(e0.check(&t, &zf).is_valid());
        assert_eq!(e0.lie.dim(), 3);
        assert!(e0.pi.is_invertible());
    }

    #[test]
    fn non_hom_is_rejected() {
        let t = curvature();
        let f = Matrix::from_i64_rows(q(), &[&[2, 0], &[0, 1]]);
        assert!(matches!(
            extend_hom(&t, &t, &f),
            Err(EnvelopeError::NotLyaHom(_))
        ));
    }

    #[test]
    fn ideals_of_envelope() {
        let t = curvature();
        let env = standard_envelope(&t).unwrap();
        let all = ideal_envelope(&t, &env, &[t.unit(0), t.unit(1)]).unwrap();
        assert!(all.report.is_valid());
        assert_eq!(all.h_ut_dim, 1);
        let none = ideal_envelope(&t, &env, &[]).unwrap();
        assert!(none.report.is_valid());
        assert_eq!(none.h_ut_dim, 0);
        assert_eq!(
            ideal_envelope(&t, &env, &[t.unit(0)]).unwrap_err(),
            EnvelopeError::NotIdeal
        );
    }

    #[test]
    fn zero_algebra_envelope_is_prime() {
        let z = LieYamagutiAlgebra::zero(q(), 2);
        let env = standard_envelope(&z).unwrap();
        assert!(primeness(&env).unwrap().is_prime());
    }
}
