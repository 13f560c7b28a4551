//! Lie-Yamaguti algebras and infinitesimal s-manifolds given by structure
//! constants, with axiom checkers, ideals and homomorphisms.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::check::{find_tuple, AxiomReport};
use crate::linalg::{
    axpy, is_zero_vector, unit_vector, vec_add, zero_vector, LinalgError, Matrix, SpanCoordinates,
};
use crate::scalar::{Field, Scalar};

/// Largest dimension with an exhaustive LY6 sweep.
pub const LY6_EXHAUSTIVE_MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LyaError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("dimension {dim} exceeds the exhaustive LY6 limit of {max}; use sampled checking")]
    TooLargeForExhaustive { dim: usize, max: usize },
    #[error("products leave the subspace")]
    NotClosed,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `e_i * e_j = Σ_k star[i][j][k] e_k` and `[e_i, e_j, e_k] = Σ_l triple[i][j][k][l] e_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieYamagutiAlgebra {
    field: Field,
    dim: usize,
    /// `star[i * n + j]` is the vector `e_i * e_j`.
    star: Vec<Vec<Scalar>>,
    /// `triple[(i * n + j) * n + k]` is the vector `[e_i, e_j, e_k]`.
    triple: Vec<Vec<Scalar>>,
}

impl LieYamagutiAlgebra {
    pub fn new(
        field: Field,
        dim: usize,
        star: Vec<Vec<Scalar>>,
        triple: Vec<Vec<Scalar>>,
    ) -> Result<Self, LyaError> {
        if star.len() != dim * dim || star.iter().any(|v| v.len() != dim) {
            return Err(LyaError::ShapeMismatch("star tensor must be n x n x n"));
        }
        if triple.len() != dim * dim * dim || triple.iter().any(|v| v.len() != dim) {
            return Err(LyaError::ShapeMismatch(
                "triple tensor must be n x n x n x n",
            ));
        }
        if let Some(s) = star
            .iter()
            .chain(&triple)
            .flatten()
            .find(|s| s.field() != field)
        {
            return Err(LyaError::FieldMismatch(field, s.field()));
        }
        Ok(Self {
            field,
            dim,
            star,
            triple,
        })
    }

    pub fn zero(field: Field, dim: usize) -> Self {
        Self {
            field,
            dim,
            star: vec![zero_vector(field, dim); dim * dim],
            triple: vec![zero_vector(field, dim); dim * dim * dim],
        }
    }

    pub fn from_fns(
        field: Field,
        dim: usize,
        mut star: impl FnMut(usize, usize) -> Vec<Scalar>,
        mut triple: impl FnMut(usize, usize, usize) -> Vec<Scalar>,
    ) -> Result<Self, LyaError> {
        let s = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| star(i, j))
            .collect();
        let mut t = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    t.push(triple(i, j, k));
                }
            }
        }
        Self::new(field, dim, s, t)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn star_basis(&self, i: usize, j: usize) -> &[Scalar] {
        &self.star[i * self.dim + j]
    }

    pub fn triple_basis(&self, i: usize, j: usize, k: usize) -> &[Scalar] {
        &self.triple[(i * self.dim + j) * self.dim + k]
    }

    pub fn set_star(&mut self, i: usize, j: usize, v: Vec<Scalar>) {
        let n = self.dim;
        self.star[i * n + j] = v;
    }

    pub fn set_triple(&mut self, i: usize, j: usize, k: usize, v: Vec<Scalar>) {
        let n = self.dim;
        self.triple[(i * n + j) * n + k] = v;
    }

    pub fn unit(&self, i: usize) -> Vec<Scalar> {
        unit_vector(self.field, self.dim, i)
    }

    /// `x * y`, expanded bilinearly.
    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut acc = zero_vector(self.field, self.dim);
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                axpy(&mut acc, &(a * b), self.star_basis(i, j));
            }
        }
        acc
    }

    /// `[x, y, z]`, expanded trilinearly.
    pub fn tri(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Vec<Scalar> {
        let mut acc = zero_vector(self.field, self.dim);
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (k, c) in z.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    axpy(&mut acc, &(&ab * c), self.triple_basis(i, j, k));
                }
            }
        }
        acc
    }

    /// `D_{x,y}: z ↦ [x, y, z]`.
    pub fn d_operator(&self, x: &[Scalar], y: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|k| self.tri(x, y, &self.unit(k)))
            .collect();
        Matrix::from_columns(self.field, self.dim, &cols).expect("square")
    }

    /// `D_{e_i, e_j}`.
    pub fn d_basis(&self, i: usize, j: usize) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|k| self.triple_basis(i, j, k).to_vec())
            .collect();
        Matrix::from_columns(self.field, self.dim, &cols).expect("square")
    }

    /// Left multiplication `L_x: z ↦ x * z`.
    pub fn left_mul(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|k| self.mul(x, &self.unit(k))).collect();
        Matrix::from_columns(self.field, self.dim, &cols).expect("square")
    }

    pub fn is_abelian(&self) -> bool {
        self.star
            .iter()
            .chain(&self.triple)
            .all(|v| is_zero_vector(v))
    }

    /// `f(T)` transported along an invertible change of basis.
    pub fn transport(&self, f: &Matrix) -> Result<LieYamagutiAlgebra, LyaError> {
        let finv = f.invert()?;
        let n = self.dim;
        let cols: Vec<Vec<Scalar>> = (0..n).map(|i| finv.column(i)).collect();
        Self::from_fns(
            self.field,
            n,
            |i, j| f.apply(&self.mul(&cols[i], &cols[j])),
            |i, j, k| f.apply(&self.tri(&cols[i], &cols[j], &cols[k])),
        )
    }

    /// Structure constants of the subalgebra spanned by `basis`, in that basis.
    pub fn restrict(&self, basis: &[Vec<Scalar>]) -> Result<LieYamagutiAlgebra, LyaError> {
        let sc = SpanCoordinates::new(self.field, self.dim, basis.to_vec())?;
        let k = basis.len();
        let coords = |v: Vec<Scalar>| sc.coords(&v).ok_or(LyaError::NotClosed);
        let mut star = Vec::with_capacity(k * k);
        let mut triple = Vec::with_capacity(k * k * k);
        for x in basis {
            for y in basis {
                star.push(coords(self.mul(x, y))?);
                for z in basis {
                    triple.push(coords(self.tri(x, y, z))?);
                }
            }
        }
        Self::new(self.field, k, star, triple)
    }

    /// [`LieYamagutiAlgebra::check`] up to the exhaustive limit, sampled LY6 above it.
    pub fn check_auto(&self, samples: usize, seed: u64) -> AxiomReport {
        self.check()
            .unwrap_or_else(|_| self.check_sampled(samples, seed))
    }

    /// LY1-LY6 on every basis tuple; fails above [`LY6_EXHAUSTIVE_MAX_DIM`].
    pub fn check(&self) -> Result<AxiomReport, LyaError> {
        if self.dim > LY6_EXHAUSTIVE_MAX_DIM {
            return Err(LyaError::TooLargeForExhaustive {
                dim: self.dim,
                max: LY6_EXHAUSTIVE_MAX_DIM,
            });
        }
        let mut r = self.check_through_ly5();
        r.push(
            "LY6",
            find_tuple(self.dim, 5, |t| {
                self.ly6_holds(
                    &self.unit(t[0]),
                    &self.unit(t[1]),
                    &self.unit(t[2]),
                    &self.unit(t[3]),
                    &self.unit(t[4]),
                )
            }),
        );
        self.annotate(&mut r);
        Ok(r)
    }

    /// LY1-LY5 exhaustively and LY6 on `samples` seeded random vector tuples.
    pub fn check_sampled(&self, samples: usize, seed: u64) -> AxiomReport {
        let mut r = self.check_through_ly5();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut witness = None;
        for s in 0..samples {
            let v: Vec<Vec<Scalar>> = (0..5)
                .map(|_| random_vector(self.field, self.dim, &mut rng))
                .collect();
            if !self.ly6_holds(&v[0], &v[1], &v[2], &v[3], &v[4]) {
                witness = Some(vec![s]);
                break;
            }
        }
        r.push_sampled("LY6", witness);
        self.annotate(&mut r);
        r
    }

    fn annotate(&self, r: &mut AxiomReport) {
        let c = self.field.characteristic();
        if c == 2 || c == 3 {
            r.note(
                "LY1",
                format!("characteristic {c}: equivalence with antisymmetric forms not assumed"),
            );
        }
    }

    fn check_through_ly5(&self) -> AxiomReport {
        let n = self.dim;
        let e = |i: usize| self.unit(i);
        let mut r = AxiomReport::new();
        // x * x = 0 for all x, polarized over the basis
        r.push(
            "LY1",
            find_tuple(n, 2, |t| {
                let (i, j) = (t[0], t[1]);
                if i == j {
                    is_zero_vector(self.star_basis(i, i))
                } else {
                    is_zero_vector(&vec_add(self.star_basis(i, j), self.star_basis(j, i)))
                }
            }),
        );
        r.push(
            "LY2",
            find_tuple(n, 3, |t| {
                let (i, j, k) = (t[0], t[1], t[2]);
                if i == j {
                    is_zero_vector(self.triple_basis(i, i, k))
                } else {
                    is_zero_vector(&vec_add(
                        self.triple_basis(i, j, k),
                        self.triple_basis(j, i, k),
                    ))
                }
            }),
        );
        r.push(
            "LY3",
            find_tuple(n, 3, |t| {
                let (x, y, z) = (e(t[0]), e(t[1]), e(t[2]));
                let mut s = self.tri(&x, &y, &z);
                for v in [
                    self.tri(&y, &z, &x),
                    self.tri(&z, &x, &y),
                    self.mul(&self.mul(&x, &y), &z),
                    self.mul(&self.mul(&y, &z), &x),
                    self.mul(&self.mul(&z, &x), &y),
                ] {
                    s = vec_add(&s, &v);
                }
                is_zero_vector(&s)
            }),
        );
        r.push(
            "LY4",
            find_tuple(n, 4, |t| {
                let (x, y, z, w) = (e(t[0]), e(t[1]), e(t[2]), e(t[3]));
                let s = vec_add(
                    &vec_add(
                        &self.tri(&self.mul(&x, &y), &z, &w),
                        &self.tri(&self.mul(&y, &z), &x, &w),
                    ),
                    &self.tri(&self.mul(&z, &x), &y, &w),
                );
                is_zero_vector(&s)
            }),
        );
        r.push(
            "LY5",
            find_tuple(n, 4, |t| {
                let (x, y, z, w) = (e(t[0]), e(t[1]), e(t[2]), e(t[3]));
                let lhs = self.tri(&x, &y, &self.mul(&z, &w));
                let rhs = vec_add(
                    &self.mul(&self.tri(&x, &y, &z), &w),
                    &self.mul(&z, &self.tri(&x, &y, &w)),
                );
                lhs == rhs
            }),
        );
        r
    }

    fn ly6_holds(
        &self,
        x: &[Scalar],
        y: &[Scalar],
        z: &[Scalar],
        v: &[Scalar],
        w: &[Scalar],
    ) -> bool {
        let lhs = self.tri(x, y, &self.tri(z, v, w));
        let rhs = vec_add(
            &vec_add(
                &self.tri(&self.tri(x, y, z), v, w),
                &self.tri(z, &self.tri(x, y, v), w),
            ),
            &self.tri(z, v, &self.tri(x, y, w)),
        );
        lhs == rhs
    }

    /// Consequences stated alongside the axioms, checked independently:
    /// antisymmetry of `*` and of `[ , , ]` in its first two slots, and the
    /// derivation properties of `D_{x,y}` for `*` and `[ , , ]`.
    pub fn derived_checks(&self) -> AxiomReport {
        let n = self.dim;
        let e = |i: usize| self.unit(i);
        let mut r = AxiomReport::new();
        r.push(
            "star_antisymmetric",
            find_tuple(n, 2, |t| {
                is_zero_vector(&vec_add(
                    self.star_basis(t[0], t[1]),
                    self.star_basis(t[1], t[0]),
                ))
            }),
        );
        r.push(
            "triple_antisymmetric",
            find_tuple(n, 3, |t| {
                is_zero_vector(&vec_add(
                    self.triple_basis(t[0], t[1], t[2]),
                    self.triple_basis(t[1], t[0], t[2]),
                ))
            }),
        );
        r.push(
            "d_derivation_star",
            find_tuple(n, 2, |t| {
                let d = self.d_basis(t[0], t[1]);
                (0..n).all(|a| {
                    (0..n).all(|b| {
                        d.apply(&self.mul(&e(a), &e(b)))
                            == vec_add(
                                &self.mul(&d.column(a), &e(b)),
                                &self.mul(&e(a), &d.column(b)),
                            )
                    })
                })
            }),
        );
        if n <= LY6_EXHAUSTIVE_MAX_DIM {
            // [D_{x,y}, D_{z,v}] = D_{[x,y,z],v} + D_{z,[x,y,v]}
            r.push(
                "d_bracket",
                find_tuple(n, 4, |t| {
                    let (x, y, z, v) = (e(t[0]), e(t[1]), e(t[2]), e(t[3]));
                    let lhs = self.d_operator(&x, &y).commutator(&self.d_operator(&z, &v));
                    let rhs = &self.d_operator(&self.tri(&x, &y, &z), &v)
                        + &self.d_operator(&z, &self.tri(&x, &y, &v));
                    lhs == rhs
                }),
            );
        }
        r
    }
}

pub(crate) fn random_vector(field: Field, n: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    (0..n)
        .map(|_| match field {
            Field::Rational => field.from_i64(rng.random_range(-5..=5)),
            Field::Prime(p) => field.element(rng.random_range(0..p)).expect("residue"),
        })
        .collect()
}

/// A Lie-Yamaguti algebra with a distinguished automorphism `σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfSManifold {
    pub lya: LieYamagutiAlgebra,
    pub sigma: Matrix,
}

impl InfSManifold {
    pub fn new(lya: LieYamagutiAlgebra, sigma: Matrix) -> Result<Self, LyaError> {
        if sigma.shape() != (lya.dim, lya.dim) {
            return Err(LyaError::ShapeMismatch("sigma must be n x n"));
        }
        if sigma.field() != lya.field {
            return Err(LyaError::FieldMismatch(lya.field, sigma.field()));
        }
        Ok(Self { lya, sigma })
    }

    pub fn dim(&self) -> usize {
        self.lya.dim
    }

    /// ISM0-ISM3. The ISM0 witness is `[0]` for singular `σ` and `[1]` for singular `1 - σ`.
    pub fn check(&self) -> AxiomReport {
        let t = &self.lya;
        let n = t.dim;
        let s = &self.sigma;
        let mut r = AxiomReport::new();
        let one_minus = &Matrix::identity(t.field, n) - s;
        r.push(
            "ISM0",
            if !s.is_invertible() {
                Some(vec![0])
            } else if !one_minus.is_invertible() {
                Some(vec![1])
            } else {
                None
            },
        );
        let sc: Vec<Vec<Scalar>> = (0..n).map(|i| s.column(i)).collect();
        r.push(
            "ISM1",
            find_tuple(n, 2, |q| {
                s.apply(t.star_basis(q[0], q[1])) == t.mul(&sc[q[0]], &sc[q[1]])
            }),
        );
        r.push(
            "ISM2",
            find_tuple(n, 3, |q| {
                s.apply(t.triple_basis(q[0], q[1], q[2])) == t.tri(&sc[q[0]], &sc[q[1]], &sc[q[2]])
            }),
        );
        r.push(
            "ISM3",
            find_tuple(n, 3, |q| {
                s.apply(t.triple_basis(q[0], q[1], q[2]))
                    == t.tri(&t.unit(q[0]), &t.unit(q[1]), &sc[q[2]])
            }),
        );
        r
    }

    /// Whether `σ D_{e_i,e_j} = D_{e_i,e_j} σ` for all `i, j`, the
    /// commutation form of ISM3.
    pub fn sigma_fixes_d(&self) -> bool {
        let n = self.lya.dim;
        find_tuple(n, 2, |q| {
            let d = self.lya.d_basis(q[0], q[1]);
            &self.sigma * &d == &d * &self.sigma
        })
        .is_none()
    }
}

/// Which closure properties a subspace has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubspaceFlags {
    pub subalgebra: bool,
    pub ideal: bool,
    pub abelian_ideal: bool,
}

/// Classify `span(basis)`; `U*U ⊆ U, [U,U,U] ⊆ U` (subalgebra), `U*T ⊆ U, [U,T,T] ⊆ U`
/// (ideal), and additionally `U*U = 0, [T,U,U] = 0` (abelian ideal).
pub fn classify_subspace(
    t: &LieYamagutiAlgebra,
    basis: &[Vec<Scalar>],
) -> Result<SubspaceFlags, LyaError> {
    let u = SpanCoordinates::new(t.field, t.dim, basis.to_vec())?;
    let tb: Vec<Vec<Scalar>> = (0..t.dim).map(|i| t.unit(i)).collect();
    let k = basis.len();
    let n = t.dim;
    let subalgebra = find_tuple(k, 2, |q| u.contains(&t.mul(&basis[q[0]], &basis[q[1]]))).is_none()
        && find_tuple(k, 3, |q| {
            u.contains(&t.tri(&basis[q[0]], &basis[q[1]], &basis[q[2]]))
        })
        .is_none();
    let ideal = (0..k).all(|a| {
        (0..n).all(|i| {
            u.contains(&t.mul(&basis[a], &tb[i]))
                && (0..n).all(|j| u.contains(&t.tri(&basis[a], &tb[i], &tb[j])))
        })
    });
    let abelian = find_tuple(k, 2, |q| is_zero_vector(&t.mul(&basis[q[0]], &basis[q[1]])))
        .is_none()
        && (0..n).all(|i| {
            find_tuple(k, 2, |q| {
                is_zero_vector(&t.tri(&tb[i], &basis[q[0]], &basis[q[1]]))
            })
            .is_none()
        });
    Ok(SubspaceFlags {
        subalgebra,
        ideal,
        abelian_ideal: ideal && abelian,
    })
}

/// First basis tuple where `f` fails to preserve `*` (arity 2) or `[ , , ]` (arity 3).
pub fn lya_hom_witness(
    t: &LieYamagutiAlgebra,
    t2: &LieYamagutiAlgebra,
    f: &Matrix,
) -> Option<Vec<usize>> {
    if f.shape() != (t2.dim, t.dim) {
        return Some(Vec::new());
    }
    let fc: Vec<Vec<Scalar>> = (0..t.dim).map(|i| f.column(i)).collect();
    find_tuple(t.dim, 2, |q| {
        f.apply(t.star_basis(q[0], q[1])) == t2.mul(&fc[q[0]], &fc[q[1]])
    })
    .or_else(|| {
        find_tuple(t.dim, 3, |q| {
            f.apply(t.triple_basis(q[0], q[1], q[2])) == t2.tri(&fc[q[0]], &fc[q[1]], &fc[q[2]])
        })
    })
}

pub fn check_lya_hom(t: &LieYamagutiAlgebra, t2: &LieYamagutiAlgebra, f: &Matrix) -> bool {
    lya_hom_witness(t, t2, f).is_none()
}

/// LYA homomorphism with `f σ = σ' f`.
pub fn check_ism_hom(a: &InfSManifold, b: &InfSManifold, f: &Matrix) -> bool {
    check_lya_hom(&a.lya, &b.lya, f) && f * &a.sigma == &b.sigma * f
}

/// Direct sum `T ⊕ T'` with componentwise operations.
pub fn direct_sum(
    a: &LieYamagutiAlgebra,
    b: &LieYamagutiAlgebra,
) -> Result<LieYamagutiAlgebra, LyaError> {
    if a.field != b.field {
        return Err(LyaError::FieldMismatch(a.field, b.field));
    }
    let (n, m) = (a.dim, b.dim);
    let embed = |v: &[Scalar], first: bool| -> Vec<Scalar> {
        let mut out = zero_vector(a.field, n + m);
        let off = if first { 0 } else { n };
        for (i, s) in v.iter().enumerate() {
            out[off + i] = s.clone();
        }
        out
    };
    let zero = zero_vector(a.field, n + m);
    LieYamagutiAlgebra::from_fns(
        a.field,
        n + m,
        |i, j| match (i < n, j < n) {
            (true, true) => embed(a.star_basis(i, j), true),
            (false, false) => embed(b.star_basis(i - n, j - n), false),
            _ => zero.clone(),
        },
        |i, j, k| match (i < n, j < n, k < n) {
            (true, true, true) => embed(a.triple_basis(i, j, k), true),
            (false, false, false) => embed(b.triple_basis(i - n, j - n, k - n), false),
            _ => zero.clone(),
        },
    )
}
