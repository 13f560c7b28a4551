//! Representations of Lie-Yamaguti algebras and infinitesimal s-manifolds,
//! the split extension `T ⊕ V` they define, and the way back.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::check::{find_tuple, AxiomReport};
use crate::linalg::{unit_vector, zero_vector, LinalgError, Matrix};
use crate::lya::{lya_hom_witness, InfSManifold, LieYamagutiAlgebra, LyaError};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),
    #[error("psi is not invertible")]
    SingularPsi,
    #[error("data is not a representation; failed {0:?}")]
    NotRlyRep(Vec<&'static str>),
    #[error("base is not an infinitesimal s-manifold; failed {0:?}")]
    NotIsm(Vec<&'static str>),
    #[error("structure is not a split extension over T: {0:?}")]
    NotOverTForm(OverTWitness),
    #[error("extension data violates {which} at {at:?}")]
    NotNormalized { which: &'static str, at: Vec<usize> },
    #[error("T+V is an ISM: {extension}, but RISM and regularity: {representation}")]
    EquivalenceViolated {
        extension: bool,
        representation: bool,
    },
    #[error(transparent)]
    Lya(#[from] LyaError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Where a structure on `T ⊕ V` departs from the split form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverTWitness {
    /// `"star"`, `"triple"` or `"sigma"`.
    pub product: &'static str,
    /// Basis indices of `T ⊕ V` (T first).
    pub indices: Vec<usize>,
    pub reason: &'static str,
}

/// `ρ(e_i)`, `θ(e_i, e_j)`, `δ(e_i, e_j)` acting on `V = k^d`; pairs stored at `i * n + j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LyaRep {
    pub lya: LieYamagutiAlgebra,
    pub dim_v: usize,
    pub rho: Vec<Matrix>,
    pub theta: Vec<Matrix>,
    pub delta: Vec<Matrix>,
}

impl LyaRep {
    pub fn new(
        lya: LieYamagutiAlgebra,
        dim_v: usize,
        rho: Vec<Matrix>,
        theta: Vec<Matrix>,
        delta: Vec<Matrix>,
    ) -> Result<Self, RepError> {
        let n = lya.dim();
        if rho.len() != n || theta.len() != n * n || delta.len() != n * n {
            return Err(RepError::ShapeMismatch(
                "need n rho matrices and n^2 theta and delta matrices",
            ));
        }
        if rho
            .iter()
            .chain(&theta)
            .chain(&delta)
            .any(|m| m.shape() != (dim_v, dim_v) || m.field() != lya.field())
        {
            return Err(RepError::ShapeMismatch(
                "representation matrices must be d x d over the base field",
            ));
        }
        Ok(Self {
            lya,
            dim_v,
            rho,
            theta,
            delta,
        })
    }

    pub fn zero(lya: LieYamagutiAlgebra, dim_v: usize) -> Self {
        let n = lya.dim();
        let z = Matrix::zeros(lya.field(), dim_v, dim_v);
        Self {
            rho: vec![z.clone(); n],
            theta: vec![z.clone(); n * n],
            delta: vec![z; n * n],
            lya,
            dim_v,
        }
    }

    /// `ρ(x) = L_x`, `θ(x, y) v = [v, x, y]`, `δ(x, y) = D_{x,y}` on `V = T`.
    pub fn adjoint(lya: &LieYamagutiAlgebra) -> Self {
        let n = lya.dim();
        let f = lya.field();
        let rho = (0..n).map(|i| lya.left_mul(&lya.unit(i))).collect();
        let mut theta = Vec::with_capacity(n * n);
        let mut delta = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let cols: Vec<Vec<Scalar>> =
                    (0..n).map(|v| lya.triple_basis(v, i, j).to_vec()).collect();
                theta.push(Matrix::from_columns(f, n, &cols).expect("square"));
                delta.push(lya.d_basis(i, j));
            }
        }
        Self {
            lya: lya.clone(),
            dim_v: n,
            rho,
            theta,
            delta,
        }
    }

    pub fn field(&self) -> Field {
        self.lya.field()
    }

    fn n(&self) -> usize {
        self.lya.dim()
    }

    pub fn theta_at(&self, i: usize, j: usize) -> &Matrix {
        &self.theta[i * self.n() + j]
    }

    pub fn delta_at(&self, i: usize, j: usize) -> &Matrix {
        &self.delta[i * self.n() + j]
    }

    pub fn set_theta(&mut self, i: usize, j: usize, m: Matrix) {
        let n = self.n();
        self.theta[i * n + j] = m;
    }

    pub fn set_delta(&mut self, i: usize, j: usize, m: Matrix) {
        let n = self.n();
        self.delta[i * n + j] = m;
    }

    fn zero_map(&self) -> Matrix {
        Matrix::zeros(self.field(), self.dim_v, self.dim_v)
    }

    pub fn rho_of(&self, x: &[Scalar]) -> Matrix {
        let mut acc = self.zero_map();
        for (c, m) in x.iter().zip(&self.rho) {
            if !c.is_zero() {
                acc = &acc + &m.scale(c);
            }
        }
        acc
    }

    fn bilinear(&self, fam: &[Matrix], x: &[Scalar], y: &[Scalar]) -> Matrix {
        let n = self.n();
        let mut acc = self.zero_map();
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                acc = &acc + &fam[i * n + j].scale(&(a * b));
            }
        }
        acc
    }

    pub fn theta_of(&self, x: &[Scalar], y: &[Scalar]) -> Matrix {
        self.bilinear(&self.theta, x, y)
    }

    pub fn delta_of(&self, x: &[Scalar], y: &[Scalar]) -> Matrix {
        self.bilinear(&self.delta, x, y)
    }

    /// RLY1-RLY6 and the derived RLY7, RLY8 on all basis tuples.
    pub fn check(&self) -> AxiomReport {
        let t = &self.lya;
        let n = self.n();
        let e = |i: usize| t.unit(i);
        let mut r = AxiomReport::new();
        r.push(
            "RLY1",
            find_tuple(n, 2, |q| {
                let (x, y) = (e(q[0]), e(q[1]));
                let lhs =
                    &(&self.delta_of(&x, &y) + &self.theta_of(&x, &y)) - &self.theta_of(&y, &x);
                let rhs =
                    &self.rho_of(&x).commutator(&self.rho_of(&y)) - &self.rho_of(&t.mul(&x, &y));
                lhs == rhs
            }),
        );
        r.push(
            "RLY2",
            find_tuple(n, 3, |q| {
                let (x, y, z) = (e(q[0]), e(q[1]), e(q[2]));
                let s = &(&self.theta_of(&x, &t.mul(&y, &z))
                    - &(&self.rho_of(&y) * &self.theta_of(&x, &z)))
                    + &(&self.rho_of(&z) * &self.theta_of(&x, &y));
                s.is_zero()
            }),
        );
        r.push(
            "RLY3",
            find_tuple(n, 3, |q| {
                let (x, y, z) = (e(q[0]), e(q[1]), e(q[2]));
                let s = &(&self.theta_of(&t.mul(&x, &y), &z)
                    - &(&self.theta_of(&x, &z) * &self.rho_of(&y)))
                    + &(&self.theta_of(&y, &z) * &self.rho_of(&x));
                s.is_zero()
            }),
        );
        r.push(
            "RLY4",
            find_tuple(n, 4, |q| {
                let (x, y, z, w) = (e(q[0]), e(q[1]), e(q[2]), e(q[3]));
                let s = &(&(&self.theta_of(&z, &w) * &self.theta_of(&x, &y))
                    - &(&self.theta_of(&y, &w) * &self.theta_of(&x, &z)))
                    - &self.theta_of(&x, &t.tri(&y, &z, &w));
                (&s + &(&self.delta_of(&y, &z) * &self.theta_of(&x, &w))).is_zero()
            }),
        );
        r.push(
            "RLY5",
            find_tuple(n, 3, |q| {
                let (x, y, z) = (e(q[0]), e(q[1]), e(q[2]));
                self.delta_of(&x, &y).commutator(&self.rho_of(&z))
                    == self.rho_of(&t.tri(&x, &y, &z))
            }),
        );
        r.push(
            "RLY6",
            find_tuple(n, 4, |q| {
                let (x, y, z, w) = (e(q[0]), e(q[1]), e(q[2]), e(q[3]));
                self.delta_of(&x, &y).commutator(&self.theta_of(&z, &w))
                    == &self.theta_of(&t.tri(&x, &y, &z), &w)
                        + &self.theta_of(&z, &t.tri(&x, &y, &w))
            }),
        );
        r.push(
            "RLY7",
            find_tuple(n, 3, |q| {
                let (x, y, z) = (e(q[0]), e(q[1]), e(q[2]));
                let s = &(&self.delta_of(&t.mul(&x, &y), &z) + &self.delta_of(&t.mul(&y, &z), &x))
                    + &self.delta_of(&t.mul(&z, &x), &y);
                s.is_zero()
            }),
        );
        r.push(
            "RLY8",
            find_tuple(n, 4, |q| {
                let (x, y, z, w) = (e(q[0]), e(q[1]), e(q[2]), e(q[3]));
                self.delta_of(&x, &y).commutator(&self.delta_of(&z, &w))
                    == &self.delta_of(&t.tri(&x, &y, &z), &w)
                        + &self.delta_of(&z, &t.tri(&x, &y, &w))
            }),
        );
        r
    }

    /// RLY1-RLY6 all hold.
    pub fn is_rep(&self) -> bool {
        let r = self.check();
        RLY_CORE.iter().all(|a| r.passed(a))
    }

    /// `Some(RLY7 ∧ RLY8)` when RLY1-RLY6 hold.
    pub fn derived_identities(&self) -> Option<bool> {
        let r = self.check();
        RLY_CORE
            .iter()
            .all(|a| r.passed(a))
            .then(|| r.passed("RLY7") && r.passed("RLY8"))
    }

    /// `V ⊕ V'` with block-diagonal action.
    pub fn direct_sum(&self, other: &LyaRep) -> Result<LyaRep, RepError> {
        if self.lya != other.lya {
            return Err(RepError::ShapeMismatch(
                "representations over different algebras",
            ));
        }
        let sum = |a: &[Matrix], b: &[Matrix]| -> Result<Vec<Matrix>, RepError> {
            a.iter().zip(b).map(|(x, y)| Ok(x.direct_sum(y)?)).collect()
        };
        Ok(LyaRep {
            lya: self.lya.clone(),
            dim_v: self.dim_v + other.dim_v,
            rho: sum(&self.rho, &other.rho)?,
            theta: sum(&self.theta, &other.theta)?,
            delta: sum(&self.delta, &other.delta)?,
        })
    }
}

const RLY_CORE: [&str; 6] = ["RLY1", "RLY2", "RLY3", "RLY4", "RLY5", "RLY6"];
const RISM_CORE: [&str; 4] = ["RISM1", "RISM2_left", "RISM2_right", "RISM3"];

/// A representation of `(T, σ)` with invertible `ψ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsmRep {
    pub rep: LyaRep,
    pub sigma: Matrix,
    pub psi: Matrix,
}

impl IsmRep {
    pub fn new(rep: LyaRep, sigma: Matrix, psi: Matrix) -> Result<Self, RepError> {
        let n = rep.lya.dim();
        if sigma.shape() != (n, n) || psi.shape() != (rep.dim_v, rep.dim_v) {
            return Err(RepError::ShapeMismatch("sigma must be n x n and psi d x d"));
        }
        if !psi.is_invertible() {
            return Err(RepError::SingularPsi);
        }
        Ok(Self { rep, sigma, psi })
    }

    pub fn base(&self) -> Result<InfSManifold, RepError> {
        Ok(InfSManifold::new(self.rep.lya.clone(), self.sigma.clone())?)
    }

    /// `1 - ψ` invertible.
    pub fn is_regular(&self) -> bool {
        (&Matrix::identity(self.rep.field(), self.rep.dim_v) - &self.psi).is_invertible()
    }

    /// RISM1-RISM3 with both halves of RISM2, and the derived RISM4, RISM5.
    pub fn check(&self) -> AxiomReport {
        let rep = &self.rep;
        let n = rep.lya.dim();
        let psi = &self.psi;
        let pinv = psi.invert().expect("psi invertible");
        let e = |i: usize| rep.lya.unit(i);
        let s = |i: usize| self.sigma.column(i);
        let conj = |m: &Matrix| &(psi * m) * &pinv;
        let mut r = AxiomReport::new();
        r.push(
            "RISM1",
            find_tuple(n, 1, |q| rep.rho_of(&s(q[0])) == conj(&rep.rho[q[0]])),
        );
        r.push(
            "RISM2_left",
            find_tuple(n, 2, |q| {
                rep.theta_of(&e(q[0]), &s(q[1])) == psi * rep.theta_at(q[0], q[1])
            }),
        );
        r.push(
            "RISM2_right",
            find_tuple(n, 2, |q| {
                rep.theta_of(&s(q[0]), &e(q[1])) == rep.theta_at(q[0], q[1]) * &pinv
            }),
        );
        r.push(
            "RISM3",
            find_tuple(n, 2, |q| {
                *rep.delta_at(q[0], q[1]) == conj(rep.delta_at(q[0], q[1]))
            }),
        );
        r.push(
            "RISM4",
            find_tuple(n, 2, |q| {
                rep.theta_of(&s(q[0]), &s(q[1])) == conj(rep.theta_at(q[0], q[1]))
            }),
        );
        r.push(
            "RISM5",
            find_tuple(n, 2, |q| {
                rep.delta_of(&s(q[0]), &s(q[1])) == conj(rep.delta_at(q[0], q[1]))
            }),
        );
        r
    }

    pub fn satisfies_rism(&self) -> bool {
        let r = self.check();
        RISM_CORE.iter().all(|a| r.passed(a))
    }

    /// `Some(RISM4 ∧ RISM5)` when RISM1-RISM3 hold.
    pub fn derived_identities(&self) -> Option<bool> {
        let r = self.check();
        RISM_CORE
            .iter()
            .all(|a| r.passed(a))
            .then(|| r.passed("RISM4") && r.passed("RISM5"))
    }

    pub fn direct_sum(&self, other: &IsmRep) -> Result<IsmRep, RepError> {
        if self.sigma != other.sigma {
            return Err(RepError::ShapeMismatch(
                "representations over different automorphisms",
            ));
        }
        IsmRep::new(
            self.rep.direct_sum(&other.rep)?,
            self.sigma.clone(),
            self.psi.direct_sum(&other.psi)?,
        )
    }
}

/// Structure constants of `T ⊕ V` from the representation, without checking it:
/// `(x1, v1) * (x2, v2) = (x1 * x2, ρ(x1) v2 - ρ(x2) v1)` and
/// `[(x1, v1), (x2, v2), (x3, v3)] = ([x1, x2, x3], θ(x2, x3) v1 - θ(x1, x3) v2 + δ(x1, x2) v3)`.
pub fn assemble(rep: &LyaRep) -> LieYamagutiAlgebra {
    let t = &rep.lya;
    let (n, d) = (t.dim(), rep.dim_v);
    let f = t.field();
    let dim = n + d;
    let lift = |x: &[Scalar], v: &[Scalar]| -> Vec<Scalar> {
        let mut out = x.to_vec();
        out.extend_from_slice(v);
        out
    };
    let zt = zero_vector(f, n);
    let zv = zero_vector(f, d);
    let neg = |m: &Matrix, b: usize| -> Vec<Scalar> { m.column(b).iter().map(|s| -s).collect() };
    LieYamagutiAlgebra::from_fns(
        f,
        dim,
        |i, j| match (i < n, j < n) {
            (true, true) => lift(t.star_basis(i, j), &zv),
            (true, false) => lift(&zt, &rep.rho[i].column(j - n)),
            (false, true) => lift(&zt, &neg(&rep.rho[j], i - n)),
            (false, false) => zero_vector(f, dim),
        },
        |i, j, k| match (i < n, j < n, k < n) {
            (true, true, true) => lift(t.triple_basis(i, j, k), &zv),
            (false, true, true) => lift(&zt, &rep.theta_at(j, k).column(i - n)),
            (true, false, true) => lift(&zt, &neg(rep.theta_at(i, k), j - n)),
            (true, true, false) => lift(&zt, &rep.delta_at(i, j).column(k - n)),
            _ => zero_vector(f, dim),
        },
    )
    .expect("shapes")
}

/// `T ⊕ V` as a Lie-Yamaguti algebra; the representation is checked first.
pub fn semidirect_lya(rep: &LyaRep) -> Result<LieYamagutiAlgebra, RepError> {
    let r = rep.check();
    let failed: Vec<&'static str> = RLY_CORE.iter().copied().filter(|a| !r.passed(a)).collect();
    if !failed.is_empty() {
        return Err(RepError::NotRlyRep(failed));
    }
    Ok(assemble(rep))
}

/// `(T ⊕ V, σ ⊕ ψ)` together with the checks that relate it to the representation.
#[derive(Debug, Clone)]
pub struct Semidirect {
    pub ism: InfSManifold,
    pub lya_report: AxiomReport,
    pub ism_report: AxiomReport,
    pub rism_report: AxiomReport,
    pub regular: bool,
}

impl Semidirect {
    pub fn is_ism(&self) -> bool {
        self.lya_report.is_valid() && self.ism_report.is_valid()
    }
}

/// Build `(T ⊕ V, σ ⊕ ψ)` and confirm that it is an infinitesimal s-manifold
/// exactly when the representation satisfies RISM1-RISM3 and is regular.
pub fn semidirect(rep: &IsmRep) -> Result<Semidirect, RepError> {
    let base = rep.base()?.check();
    if !base.is_valid() {
        return Err(RepError::NotIsm(base.failures()));
    }
    let lya = semidirect_lya(&rep.rep)?;
    let sigma = rep.sigma.direct_sum(&rep.psi)?;
    let ism = InfSManifold::new(lya, sigma)?;
    let lya_report = ism.lya.check_auto(crate::DEFAULT_SAMPLED_TRIPLES / 100, 0);
    let ism_report = ism.check();
    let rism_report = rep.check();
    let regular = rep.is_regular();
    let representation = RISM_CORE.iter().all(|a| rism_report.passed(a)) && regular;
    let out = Semidirect {
        ism,
        lya_report,
        ism_report,
        rism_report,
        regular,
    };
    if !out.lya_report.is_valid() || out.ism_report.is_valid() != representation {
        return Err(RepError::EquivalenceViolated {
            extension: out.is_ism(),
            representation,
        });
    }
    Ok(out)
}

/// The unnormalized coefficients of a split extension:
/// `(x1, v1) * (x2, v2) = (x1 * x2, A(x1) v2 + B(x2) v1)` and
/// `[(x1, v1), (x2, v2), (x3, v3)] = ([x1, x2, x3], E(x2, x3) v1 + F(x3, x1) v2 + G(x1, x2) v3)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionData {
    pub a: Vec<Matrix>,
    pub b: Vec<Matrix>,
    pub e: Vec<Matrix>,
    pub f: Vec<Matrix>,
    pub g: Vec<Matrix>,
}

/// Accept `(A, B, E, F, G)` only in the normalized form `B = -A`,
/// `F(y, x) = -E(x, y)`, `G(x, x) = 0`, and return `ρ = A, θ = E, δ = G`.
pub fn normalize(
    lya: &LieYamagutiAlgebra,
    dim_v: usize,
    data: ExtensionData,
) -> Result<LyaRep, RepError> {
    let n = lya.dim();
    if data.a.len() != n
        || data.b.len() != n
        || [&data.e, &data.f, &data.g].iter().any(|v| v.len() != n * n)
    {
        return Err(RepError::ShapeMismatch("extension data sizes"));
    }
    if let Some(i) = (0..n).find(|&i| data.b[i] != -&data.a[i]) {
        return Err(RepError::NotNormalized {
            which: "B = -A",
            at: vec![i],
        });
    }
    if let Some(w) = find_tuple(n, 2, |q| {
        data.f[q[1] * n + q[0]] == -&data.e[q[0] * n + q[1]]
    }) {
        return Err(RepError::NotNormalized {
            which: "F(y, x) = -E(x, y)",
            at: w,
        });
    }
    if let Some(w) = find_tuple(n, 2, |q| {
        let (i, j) = (q[0], q[1]);
        if i == j {
            data.g[i * n + i].is_zero()
        } else {
            (&data.g[i * n + j] + &data.g[j * n + i]).is_zero()
        }
    }) {
        return Err(RepError::NotNormalized {
            which: "G(x, x) = 0",
            at: w,
        });
    }
    LyaRep::new(lya.clone(), dim_v, data.a, data.e, data.g)
}

/// Read `(A, B, E, F, G)` off a structure on `T ⊕ V` with `T` the first `n`
/// coordinates, after confirming that `T` is a subalgebra, `V` an abelian
/// ideal, and the projection to `T` a homomorphism.
pub fn extension_data(
    s: &LieYamagutiAlgebra,
    n: usize,
) -> Result<(LieYamagutiAlgebra, ExtensionData), RepError> {
    let dim = s.dim();
    if n > dim {
        return Err(RepError::ShapeMismatch(
            "T dimension exceeds total dimension",
        ));
    }
    let d = dim - n;
    let f = s.field();
    let is_v = |i: usize| i >= n;
    let fail = |product, indices: &[usize], reason| {
        RepError::NotOverTForm(OverTWitness {
            product,
            indices: indices.to_vec(),
            reason,
        })
    };
    if let Some(w) = find_tuple(dim, 2, |q| {
        let v = s.star_basis(q[0], q[1]);
        match q.iter().filter(|&&i| is_v(i)).count() {
            0 => v[n..].iter().all(Scalar::is_zero),
            1 => v[..n].iter().all(Scalar::is_zero),
            _ => v.iter().all(Scalar::is_zero),
        }
    }) {
        return Err(fail("star", &w, "product not of split form"));
    }
    if let Some(w) = find_tuple(dim, 3, |q| {
        let v = s.triple_basis(q[0], q[1], q[2]);
        match q.iter().filter(|&&i| is_v(i)).count() {
            0 => v[n..].iter().all(Scalar::is_zero),
            1 => v[..n].iter().all(Scalar::is_zero),
            _ => v.iter().all(Scalar::is_zero),
        }
    }) {
        return Err(fail("triple", &w, "product not of split form"));
    }
    let t = LieYamagutiAlgebra::from_fns(
        f,
        n,
        |i, j| s.star_basis(i, j)[..n].to_vec(),
        |i, j, k| s.triple_basis(i, j, k)[..n].to_vec(),
    )?;
    let block = |cols: &dyn Fn(usize) -> Vec<Scalar>| -> Matrix {
        let c: Vec<Vec<Scalar>> = (0..d).map(|b| cols(n + b)[n..].to_vec()).collect();
        Matrix::from_columns(f, d, &c).expect("square")
    };
    let mut data = ExtensionData {
        a: Vec::new(),
        b: Vec::new(),
        e: Vec::new(),
        f: Vec::new(),
        g: Vec::new(),
    };
    for i in 0..n {
        data.a.push(block(&|v| s.star_basis(i, v).to_vec()));
        data.b.push(block(&|v| s.star_basis(v, i).to_vec()));
    }
    for i in 0..n {
        for j in 0..n {
            // E(e_i, e_j) v = [v, e_i, e_j], F(e_i, e_j) v = [e_j, v, e_i], G(e_i, e_j) v = [e_i, e_j, v]
            data.e.push(block(&|v| s.triple_basis(v, i, j).to_vec()));
            data.f.push(block(&|v| s.triple_basis(j, v, i).to_vec()));
            data.g.push(block(&|v| s.triple_basis(i, j, v).to_vec()));
        }
    }
    Ok((t, data))
}

/// Recover the representation from a structure on `T ⊕ V`.
pub fn extract_rep(s: &LieYamagutiAlgebra, n: usize) -> Result<LyaRep, RepError> {
    let (t, data) = extension_data(s, n)?;
    normalize(&t, s.dim() - n, data)
}

/// Recover `(rep, σ, ψ)` from `(T ⊕ V, σ~)`, where `σ~` must be block diagonal.
pub fn extract_ism_rep(s: &InfSManifold, n: usize) -> Result<IsmRep, RepError> {
    let rep = extract_rep(&s.lya, n)?;
    let dim = s.dim();
    let st = &s.sigma;
    for r in 0..dim {
        for c in 0..dim {
            if (r < n) != (c < n) && !st.get(r, c).is_zero() {
                return Err(RepError::NotOverTForm(OverTWitness {
                    product: "sigma",
                    indices: vec![r, c],
                    reason: "automorphism does not preserve the splitting",
                }));
            }
        }
    }
    IsmRep::new(rep, st.submatrix(0, n, 0, n), st.submatrix(n, dim, n, dim))
}

/// Where `f` fails to intertwine: `"rho"`, `"theta"`, `"delta"` or `"psi"` plus basis indices.
pub fn rep_hom_witness(a: &IsmRep, b: &IsmRep, f: &Matrix) -> Option<(&'static str, Vec<usize>)> {
    if f.shape() != (b.rep.dim_v, a.rep.dim_v) {
        return Some(("shape", Vec::new()));
    }
    let n = a.rep.lya.dim();
    if let Some(i) = (0..n).find(|&i| f * &a.rep.rho[i] != &b.rep.rho[i] * f) {
        return Some(("rho", vec![i]));
    }
    if let Some(w) = find_tuple(n, 2, |q| {
        f * a.rep.theta_at(q[0], q[1]) == b.rep.theta_at(q[0], q[1]) * f
    }) {
        return Some(("theta", w));
    }
    if let Some(w) = find_tuple(n, 2, |q| {
        f * a.rep.delta_at(q[0], q[1]) == b.rep.delta_at(q[0], q[1]) * f
    }) {
        return Some(("delta", w));
    }
    (f * &a.psi != &b.psi * f).then(|| ("psi", Vec::new()))
}

pub fn check_rep_hom(a: &IsmRep, b: &IsmRep, f: &Matrix) -> bool {
    rep_hom_witness(a, b, f).is_none()
}

/// `id_T × f: T ⊕ V → T ⊕ V'`.
pub fn lift_hom(n: usize, f: &Matrix) -> Matrix {
    Matrix::identity(f.field(), n)
        .direct_sum(f)
        .expect("same field")
}

/// Witness that a linear map between two ISM structures is not a homomorphism:
/// a basis tuple for the products, or `[]` when only `σ`-compatibility fails.
pub fn ism_hom_witness(a: &InfSManifold, b: &InfSManifold, f: &Matrix) -> Option<Vec<usize>> {
    lya_hom_witness(&a.lya, &b.lya, f).or_else(|| (f * &a.sigma != &b.sigma * f).then(Vec::new))
}

/// The lifted map's verdict next to the representation-level verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftComparison {
    pub rep_hom: bool,
    pub lift_is_ism_hom: bool,
    pub lift: Matrix,
}

pub fn compare_lift(a: &IsmRep, b: &IsmRep, f: &Matrix) -> Result<LiftComparison, RepError> {
    let sa = InfSManifold::new(semidirect_lya(&a.rep)?, a.sigma.direct_sum(&a.psi)?)?;
    let sb = InfSManifold::new(semidirect_lya(&b.rep)?, b.sigma.direct_sum(&b.psi)?)?;
    let lift = lift_hom(a.rep.lya.dim(), f);
    Ok(LiftComparison {
        rep_hom: check_rep_hom(a, b, f),
        lift_is_ism_hom: ism_hom_witness(&sa, &sb, &lift).is_none(),
        lift,
    })
}

/// Scalars at which `μ_λ` is checked. The homomorphism defect of `μ_λ` is a
/// polynomial of degree at most 3 in `λ`, so these four points cover every
/// scalar; over GF(2) and GF(3) they already exhaust the field.
pub const MU_SCALARS: [i64; 4] = [0, 1, -1, 2];

/// Check that `π`, `ζ`, `α`, `ι` and `μ_λ` are homomorphisms for a structure on
/// `T ⊕ V` (first `n` coordinates are `T`), with `σ~` when given.
///
/// `T ⊕ V ⊕ V` is realized as the fiber product inside `(T ⊕ V) ⊕ (T ⊕ V)`.
pub fn check_abelian_group_object(
    s: &LieYamagutiAlgebra,
    n: usize,
    sigma: Option<&Matrix>,
) -> Result<AxiomReport, RepError> {
    let dim = s.dim();
    if n > dim {
        return Err(RepError::ShapeMismatch(
            "T dimension exceeds total dimension",
        ));
    }
    let d = dim - n;
    let f = s.field();
    let t = LieYamagutiAlgebra::from_fns(
        f,
        n,
        |i, j| s.star_basis(i, j)[..n].to_vec(),
        |i, j, k| s.triple_basis(i, j, k)[..n].to_vec(),
    )?;
    let doubled = crate::lya::direct_sum(s, s)?;
    // basis: (e_i, e_i), (v_a, 0), (0, v_a)
    let mut fiber = Vec::with_capacity(n + 2 * d);
    for i in 0..n {
        let mut v = unit_vector(f, 2 * dim, i);
        v[dim + i] = f.one();
        fiber.push(v);
    }
    for a in 0..d {
        fiber.push(unit_vector(f, 2 * dim, n + a));
    }
    for a in 0..d {
        fiber.push(unit_vector(f, 2 * dim, dim + n + a));
    }
    let fp = doubled.restrict(&fiber).map_err(|_| {
        RepError::NotOverTForm(OverTWitness {
            product: "fiber_product",
            indices: Vec::new(),
            reason: "T x_T T is not closed",
        })
    })?;
    let id_t = Matrix::identity(f, n);
    let id_v = Matrix::identity(f, d);
    let pi = id_t.hstack(&Matrix::zeros(f, n, d))?;
    let zeta = id_t.vstack(&Matrix::zeros(f, d, n))?;
    let alpha = id_t.direct_sum(&id_v.hstack(&id_v)?)?;
    let iota = id_t.direct_sum(&(-&id_v))?;

    let wrap = |l: &LieYamagutiAlgebra, sg: Option<Matrix>| InfSManifold {
        lya: l.clone(),
        sigma: sg.unwrap_or_else(|| Matrix::identity(f, l.dim())),
    };
    let (s_sig, t_sig, fp_sig) = match sigma {
        Some(sg) => {
            let ts = sg.submatrix(0, n, 0, n);
            let vs = sg.submatrix(n, dim, n, dim);
            (
                Some(sg.clone()),
                Some(ts.clone()),
                Some(ts.direct_sum(&vs)?.direct_sum(&vs)?),
            )
        }
        None => (None, None, None),
    };
    let ss = wrap(s, s_sig);
    let ts = wrap(&t, t_sig);
    let fs = wrap(&fp, fp_sig);
    let mut r = AxiomReport::new();
    r.push("pi", ism_hom_witness(&ss, &ts, &pi));
    r.push("zeta", ism_hom_witness(&ts, &ss, &zeta));
    r.push("alpha", ism_hom_witness(&fs, &ss, &alpha));
    r.push("iota", ism_hom_witness(&ss, &ss, &iota));
    for (name, l) in MU_SCALARS.iter().map(|&l| (mu_name(l), l)) {
        let mu = id_t.direct_sum(&Matrix::scalar(f, d, &f.from_i64(l)))?;
        r.push(name, ism_hom_witness(&ss, &ss, &mu));
    }
    // group laws as identities of linear maps
    let unit = &alpha * &id_t.direct_sum(&Matrix::zeros(f, d, d).vstack(&id_v)?)?;
    r.push("unit_law", (!unit.is_identity()).then(Vec::new));
    let inverse = &alpha * &id_t.direct_sum(&id_v.vstack(&(-&id_v))?)?;
    r.push("inverse_law", (inverse != &zeta * &pi).then(Vec::new));
    let swap = id_t.direct_sum(
        &Matrix::zeros(f, d, d)
            .hstack(&id_v)?
            .vstack(&id_v.hstack(&Matrix::zeros(f, d, d))?)?,
    )?;
    r.push("commutativity", (&alpha * &swap != alpha).then(Vec::new));
    Ok(r)
}

fn mu_name(l: i64) -> &'static str {
    match l {
        0 => "mu_0",
        1 => "mu_1",
        -1 => "mu_-1",
        _ => "mu_2",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn s(v: i64) -> Matrix {
        Matrix::scalar(q(), 1, &q().from_i64(v))
    }

    fn line(r: i64, t: i64) -> LyaRep {
        let lya = LieYamagutiAlgebra::zero(q(), 1);
        LyaRep::new(lya, 1, vec![s(r)], vec![s(t)], vec![s(0)]).unwrap()
    }

    #[test]
    fn line_family_is_a_rep() {
        for (r, t) in [(0, 0), (1, 2), (-3, 5)] {
            let rep = line(r, t);
            assert!(rep.check().is_valid());
            assert_eq!(rep.derived_identities(), Some(true));
        }
        let mut bad = line(1, 1);
        bad.set_delta(0, 0, s(1));
        assert!(bad.check().failed("RLY1"));
    }

    #[test]
    fn line_family_ism() {
        let rep = IsmRep::new(line(0, 3), s(-1), s(-1)).unwrap();
        assert!(rep.satisfies_rism() && rep.is_regular());
        let out = semidirect(&rep).unwrap();
        assert!(out.is_ism());
        assert_eq!(extract_ism_rep(&out.ism, 1).unwrap(), rep);
        let nonreg = IsmRep::new(line(0, 3), s(-1), s(1)).unwrap();
        assert!(!nonreg.is_regular());
        let out = semidirect(&nonreg).unwrap();
        assert!(out.ism_report.failed("ISM0"));
        assert!(matches!(
            IsmRep::new(line(0, 0), s(-1), s(0)),
            Err(RepError::SingularPsi)
        ));
    }

    #[test]
    fn rho_breaks_rism1_and_ism1() {
        let rep = IsmRep::new(line(1, 0), s(-1), s(-1)).unwrap();
        assert!(rep.check().failed("RISM1"));
        let out = semidirect(&rep).unwrap();
        assert_eq!(out.ism_report.failures(), vec!["ISM1"]);
    }

    #[test]
    fn zero_rep_is_central_direct_sum() {
        let t = LieYamagutiAlgebra::zero(q(), 2);
        let rep = LyaRep::zero(t.clone(), 2);
        let sd = semidirect_lya(&rep).unwrap();
        assert_eq!(sd, LieYamagutiAlgebra::zero(q(), 4));
        assert!(check_abelian_group_object(&sd, 2, None).unwrap().is_valid());
    }

    #[test]
    fn adjoint_rep() {
        let f = q();
        let curv = LieYamagutiAlgebra::from_fns(
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
        .unwrap();
        let rep = LyaRep::adjoint(&curv);
        assert!(rep.check().is_valid());
        let ism = IsmRep::new(
            rep.clone(),
            -&Matrix::identity(f, 2),
            -&Matrix::identity(f, 2),
        )
        .unwrap();
        let out = semidirect(&ism).unwrap();
        assert!(out.is_ism());
        assert_eq!(extract_rep(&out.ism.lya, 2).unwrap(), rep);
        assert!(
            check_abelian_group_object(&out.ism.lya, 2, Some(&out.ism.sigma))
                .unwrap()
                .is_valid()
        );
    }

    #[test]
    fn over_t_violations() {
        let sd = assemble(&line(1, 1));
        let mut bad = sd.clone();
        // a V-dependent T-component
        bad.set_star(0, 1, vec![q().one(), q().one()]);
        let err = extract_rep(&bad, 1).unwrap_err();
        assert!(matches!(
            err,
            RepError::NotOverTForm(OverTWitness {
                product: "star",
                ..
            })
        ));
        let nonab = crate::lya::direct_sum(
            &LieYamagutiAlgebra::zero(q(), 1),
            &LieYamagutiAlgebra::from_fns(
                q(),
                2,
                |i, j| {
                    let mut v = zero_vector(q(), 2);
                    if (i, j) == (0, 1) {
                        v[1] = q().one();
                    }
                    if (i, j) == (1, 0) {
                        v[1] = -q().one();
                    }
                    v
                },
                |_, _, _| zero_vector(q(), 2),
            )
            .unwrap(),
        )
        .unwrap();
        assert!(matches!(
            extract_rep(&nonab, 1),
            Err(RepError::NotOverTForm(_))
        ));
    }

    #[test]
    fn asymmetric_b_is_rejected_and_breaks_ly1() {
        let mut sd = assemble(&line(1, 0));
        // B(e) = 2 instead of -A(e) = -1
        sd.set_star(1, 0, vec![q().zero(), q().from_i64(2)]);
        assert!(matches!(
            extract_rep(&sd, 1),
            Err(RepError::NotNormalized {
                which: "B = -A",
                ..
            })
        ));
        assert!(sd.check().unwrap().failed("LY1"));
        assert!(check_abelian_group_object(&sd, 1, None)
            .unwrap()
            .passed("alpha"));
    }

    #[test]
    fn c0_term_breaks_alpha() {
        let t = LieYamagutiAlgebra::zero(q(), 2);
        let mut sd = assemble(&LyaRep::zero(t, 1));
        sd.set_star(0, 1, vec![q().zero(), q().zero(), q().one()]);
        sd.set_star(1, 0, vec![q().zero(), q().zero(), -q().one()]);
        let r = check_abelian_group_object(&sd, 2, None).unwrap();
        assert!(r.failed("alpha"));
        assert!(r.witness("alpha").is_some());
        assert!(r.failed("zeta"));
    }

    #[test]
    fn rep_homs_and_lifts() {
        let a = IsmRep::new(line(0, 1), s(-1), s(-1)).unwrap();
        let b = IsmRep::new(line(0, 2), s(-1), s(-1)).unwrap();
        let one = s(1);
        let same = compare_lift(&a, &a, &one).unwrap();
        assert!(same.rep_hom && same.lift_is_ism_hom);
        let zero = compare_lift(&a, &b, &s(0)).unwrap();
        assert!(zero.rep_hom && zero.lift_is_ism_hom);
        let diff = compare_lift(&a, &b, &one).unwrap();
        assert!(!diff.rep_hom && !diff.lift_is_ism_hom);
        assert_eq!(rep_hom_witness(&a, &b, &one).unwrap().0, "theta");
        assert_ne!(compare_lift(&a, &a, &s(2)).unwrap().lift, same.lift);
    }
}
