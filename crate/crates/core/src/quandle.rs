//! Finite racks and quandles given by operation tables, their symmetries
//! `s_x = x ▷ -`, inner and transvection groups, and homomorphisms.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{LinalgError, Matrix};
use crate::perm::{GroupError, Perm, PermGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuandleError {
    #[error("malformed table: {0}")]
    MalformedTable(&'static str),
    #[error("table violates the axioms: {0:?}")]
    NotAQuandle(QuandleReport),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("orbit exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("map is not a quandle homomorphism at ({x}, {y})")]
    NotHomomorphism { x: usize, y: usize },
    #[error("map has length {found}, expected {expected}")]
    MapLength { expected: usize, found: usize },
    #[error("matrix is not invertible")]
    NotInvertible,
}

/// A violated axiom together with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuandleViolation {
    /// `x ▷ y1 = x ▷ y2` with `y1 != y2`, so `s_x` is not a bijection.
    NotLeftInvertible { x: usize, y1: usize, y2: usize },
    /// `x ▷ (y ▷ z) != (x ▷ y) ▷ (x ▷ z)`.
    NotSelfDistributive { x: usize, y: usize, z: usize },
    /// `x ▷ x != x`.
    NotIdempotent { x: usize },
}

impl QuandleViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            QuandleViolation::NotLeftInvertible { .. } => "left_invertibility",
            QuandleViolation::NotSelfDistributive { .. } => "self_distributivity",
            QuandleViolation::NotIdempotent { .. } => "idempotence",
        }
    }
}

/// Outcome of an axiom check: one entry per violated axiom, first witness found.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuandleReport {
    pub violations: Vec<QuandleViolation>,
    /// Whether self-distributivity was checked on all triples.
    pub exhaustive: bool,
    pub triples_checked: u64,
}

impl QuandleReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// How to sweep self-distributivity triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleCheck {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

impl TripleCheck {
    /// Exhaustive up to `limit` elements, sampled above.
    pub fn by_size(n: usize, limit: usize, samples: usize, seed: u64) -> Self {
        if n <= limit {
            TripleCheck::Exhaustive
        } else {
            TripleCheck::Sampled { samples, seed }
        }
    }
}

/// A finite rack or quandle. `table[x * n + y] = x ▷ y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuandle {
    n: usize,
    table: Vec<usize>,
    rack_only: bool,
}

impl FiniteQuandle {
    /// Build from rows and verify every axiom exhaustively.
    pub fn new(rows: Vec<Vec<usize>>, rack_only: bool) -> Result<Self, QuandleError> {
        let q = Self::new_unverified(rows, rack_only)?;
        let report = q.check(TripleCheck::Exhaustive);
        if report.is_valid() {
            Ok(q)
        } else {
            Err(QuandleError::NotAQuandle(report))
        }
    }

    /// Build from rows, checking only that the table is square with entries in range.
    /// Axioms are not verified; use [`FiniteQuandle::check`].
    pub fn new_unverified(rows: Vec<Vec<usize>>, rack_only: bool) -> Result<Self, QuandleError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(QuandleError::MalformedTable("table is not square"));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        if table.iter().any(|&v| v >= n) {
            return Err(QuandleError::MalformedTable("entry out of range"));
        }
        Ok(Self {
            n,
            table,
            rack_only,
        })
    }

    pub(crate) fn from_flat_unverified(n: usize, table: Vec<usize>, rack_only: bool) -> Self {
        debug_assert_eq!(table.len(), n * n);
        Self {
            n,
            table,
            rack_only,
        }
    }

    /// `x ▷ y = 2x - y mod n`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1, "dihedral quandle needs n >= 1");
        let table = (0..n)
            .flat_map(|x| (0..n).map(move |y| (2 * x + n - y % n) % n))
            .collect();
        Self {
            n,
            table,
            rack_only: false,
        }
    }

    /// `x ▷ y = y`.
    pub fn trivial(n: usize) -> Self {
        let table = (0..n).flat_map(|_| 0..n).collect();
        Self {
            n,
            table,
            rack_only: false,
        }
    }

    /// Disjoint union with `x ▷ y = y` across the two blocks.
    pub fn disjoint_union(&self, other: &FiniteQuandle) -> Self {
        let (a, b) = (self.n, other.n);
        let n = a + b;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let v = match (x < a, y < a) {
                    (true, true) => self.op(x, y),
                    (false, false) => other.op(x - a, y - a) + a,
                    _ => y,
                };
                table.push(v);
            }
        }
        Self {
            n,
            table,
            rack_only: self.rack_only || other.rack_only,
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn is_rack_only(&self) -> bool {
        self.rack_only
    }

    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    pub fn row(&self, x: usize) -> &[usize] {
        &self.table[x * self.n..(x + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|x| self.row(x).to_vec()).collect()
    }

    /// The left translation `s_x`. Panics if the row is not a bijection.
    pub fn symmetry(&self, x: usize) -> Perm {
        Perm::from_images(self.row(x).to_vec()).expect("row is a permutation")
    }

    /// `s_x^{-1}(y)`, the unique `z` with `x ▷ z = y`.
    pub fn left_divide(&self, x: usize, y: usize) -> Option<usize> {
        self.row(x).iter().position(|&v| v == y)
    }

    /// Verify the rack axioms, plus idempotence unless `rack_only`.
    pub fn check(&self, mode: TripleCheck) -> QuandleReport {
        let n = self.n;
        let mut report = QuandleReport::default();
        'rows: for x in 0..n {
            let mut first = vec![usize::MAX; n];
            for y in 0..n {
                let v = self.op(x, y);
                if first[v] != usize::MAX {
                    report.violations.push(QuandleViolation::NotLeftInvertible {
                        x,
                        y1: first[v],
                        y2: y,
                    });
                    break 'rows;
                }
                first[v] = y;
            }
        }
        let sd = |x: usize, y: usize, z: usize| {
            self.op(x, self.op(y, z)) == self.op(self.op(x, y), self.op(x, z))
        };
        match mode {
            TripleCheck::Exhaustive => {
                report.exhaustive = true;
                'sd: for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            report.triples_checked += 1;
                            if !sd(x, y, z) {
                                report
                                    .violations
                                    .push(QuandleViolation::NotSelfDistributive { x, y, z });
                                break 'sd;
                            }
                        }
                    }
                }
            }
            TripleCheck::Sampled { samples, seed } => {
                report.exhaustive = false;
                if n > 0 {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    for _ in 0..samples {
                        let (x, y, z) = (
                            rng.random_range(0..n),
                            rng.random_range(0..n),
                            rng.random_range(0..n),
                        );
                        report.triples_checked += 1;
                        if !sd(x, y, z) {
                            report
                                .violations
                                .push(QuandleViolation::NotSelfDistributive { x, y, z });
                            break;
                        }
                    }
                }
            }
        }
        if !self.rack_only {
            if let Some(x) = (0..n).find(|&x| self.op(x, x) != x) {
                report
                    .violations
                    .push(QuandleViolation::NotIdempotent { x });
            }
        }
        report
    }
}

/// Check a raw table: range errors are reported as `MalformedTable`, axiom
/// violations in the report.
pub fn check_quandle(
    rows: Vec<Vec<usize>>,
    rack_only: bool,
) -> Result<QuandleReport, QuandleError> {
    let q = FiniteQuandle::new_unverified(rows, rack_only)?;
    Ok(q.check(TripleCheck::Exhaustive))
}

fn ensure_rows_are_perms(q: &FiniteQuandle) -> Result<(), QuandleError> {
    for x in 0..q.size() {
        if Perm::from_images(q.row(x).to_vec()).is_none() {
            return Err(QuandleError::MalformedTable("row is not a permutation"));
        }
    }
    Ok(())
}

/// `Inn(Q) = <s_x>`.
pub fn inner_group(q: &FiniteQuandle, cap: usize) -> Result<PermGroup, QuandleError> {
    ensure_rows_are_perms(q)?;
    let gens = (0..q.size()).map(|x| q.symmetry(x)).collect();
    Ok(PermGroup::generate(q.size(), gens, cap)?)
}

/// Generators `s_x s_0^{-1}` of the transvection group.
pub fn transvection_generators(q: &FiniteQuandle) -> Vec<Perm> {
    if q.size() == 0 {
        return Vec::new();
    }
    let base_inv = q.symmetry(0).inverse();
    (0..q.size())
        .map(|x| q.symmetry(x).compose(&base_inv))
        .collect()
}

/// `Tr(Q)`, generated by `s_x s_{x0}^{-1}` with base point `x0 = 0`.
pub fn transvection_group(q: &FiniteQuandle, cap: usize) -> Result<PermGroup, QuandleError> {
    ensure_rows_are_perms(q)?;
    Ok(PermGroup::generate(
        q.size(),
        transvection_generators(q),
        cap,
    )?)
}

/// Whether `Inn(Q)` acts transitively.
pub fn is_transitive(q: &FiniteQuandle) -> bool {
    if q.size() == 0 {
        return true;
    }
    let gens: Vec<Perm> = (0..q.size()).map(|x| q.symmetry(x)).collect();
    crate::perm::orbit(q.size(), &gens, 0).len() == q.size()
}

/// Orbits of `Inn(Q)`, each listed in BFS order, ordered by smallest element.
pub fn orbits(q: &FiniteQuandle) -> Vec<Vec<usize>> {
    let gens: Vec<Perm> = (0..q.size()).map(|x| q.symmetry(x)).collect();
    let mut seen = vec![false; q.size()];
    let mut out = Vec::new();
    for p in 0..q.size() {
        if !seen[p] {
            let o = crate::perm::orbit(q.size(), &gens, p);
            for &i in &o {
                seen[i] = true;
            }
            out.push(o);
        }
    }
    out
}

/// First pair `(x, y)` with `F(x ▷ y) != F(x) ▷ F(y)`.
pub fn quandle_hom_witness(
    q: &FiniteQuandle,
    target: &FiniteQuandle,
    f: &[usize],
) -> Option<(usize, usize)> {
    if f.len() != q.size() {
        return Some((0, 0));
    }
    for x in 0..q.size() {
        for y in 0..q.size() {
            if f[q.op(x, y)] != target.op(f[x], f[y]) {
                return Some((x, y));
            }
        }
    }
    None
}

pub fn check_quandle_hom(q: &FiniteQuandle, target: &FiniteQuandle, f: &[usize]) -> bool {
    f.len() == q.size()
        && f.iter().all(|&v| v < target.size())
        && quandle_hom_witness(q, target, f).is_none()
}

/// Homomorphism check on seeded random pairs, for large sources.
pub fn quandle_hom_witness_sampled(
    q: &FiniteQuandle,
    target: &FiniteQuandle,
    f: &[usize],
    samples: usize,
    seed: u64,
) -> Option<(usize, usize)> {
    let n = q.size();
    if n == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
        .find(|&(x, y)| f[q.op(x, y)] != target.op(f[x], f[y]))
}

/// Which enveloping group the pair construction uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Inner,
    Transvection,
}

/// Pairs `(g, g')` with `F ∘ g = g' ∘ F`, stored as permutations of `Q ⊔ Q'`.
#[derive(Debug, Clone)]
pub struct PairGroup {
    pub source_size: usize,
    pub group: PermGroup,
}

impl PairGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Perm, Perm)> + '_ {
        self.group
            .elements()
            .map(|p| p.split(self.source_size).expect("block preserving"))
    }

    pub fn contains_pair(&self, g: &Perm, g2: &Perm) -> bool {
        self.group.contains(&g.disjoint_union(g2))
    }

    /// Every pair satisfies `F ∘ g = g' ∘ F`.
    pub fn is_equivariant(&self, f: &[usize]) -> bool {
        self.pairs()
            .all(|(g, g2)| (0..self.source_size).all(|x| f[g.apply(x)] == g2.apply(f[x])))
    }

    /// First coordinates, as a set.
    pub fn first_projection(&self) -> BTreeSet<Perm> {
        self.pairs().map(|(g, _)| g).collect()
    }
}

/// The subgroup of `G x G'` generated by the canonical pairs `(s_x, s_{F(x)})`
/// (or `(s_x s_{x0}^{-1}, s_{F(x)} s_{F(x0)}^{-1})` for transvections).
pub fn extended_pair_group(
    q: &FiniteQuandle,
    target: &FiniteQuandle,
    f: &[usize],
    kind: GroupKind,
    cap: usize,
) -> Result<PairGroup, QuandleError> {
    if f.len() != q.size() {
        return Err(QuandleError::MapLength {
            expected: q.size(),
            found: f.len(),
        });
    }
    if let Some((x, y)) = hom_witness_in_range(q, target, f) {
        return Err(QuandleError::NotHomomorphism { x, y });
    }
    ensure_rows_are_perms(q)?;
    ensure_rows_are_perms(target)?;
    let n = q.size();
    let gens: Vec<Perm> = match kind {
        GroupKind::Inner => (0..n)
            .map(|x| q.symmetry(x).disjoint_union(&target.symmetry(f[x])))
            .collect(),
        GroupKind::Transvection => {
            if n == 0 {
                Vec::new()
            } else {
                let b = q.symmetry(0).inverse();
                let b2 = target.symmetry(f[0]).inverse();
                (0..n)
                    .map(|x| {
                        q.symmetry(x)
                            .compose(&b)
                            .disjoint_union(&target.symmetry(f[x]).compose(&b2))
                    })
                    .collect()
            }
        }
    };
    let group = PermGroup::generate(n + target.size(), gens, cap)?;
    Ok(PairGroup {
        source_size: n,
        group,
    })
}

fn hom_witness_in_range(
    q: &FiniteQuandle,
    target: &FiniteQuandle,
    f: &[usize],
) -> Option<(usize, usize)> {
    if f.iter().any(|&v| v >= target.size()) {
        return Some((0, 0));
    }
    quandle_hom_witness(q, target, f)
}

/// All F-compatible pairs in `G x G'`, by filtering the product. Only
/// available when `|G| |G'| <= cap`.
pub fn full_extended_group(
    q: &FiniteQuandle,
    target: &FiniteQuandle,
    f: &[usize],
    kind: GroupKind,
    cap: usize,
) -> Result<PairGroup, QuandleError> {
    if let Some((x, y)) = hom_witness_in_range(q, target, f) {
        return Err(QuandleError::NotHomomorphism { x, y });
    }
    let (g, g2) = match kind {
        GroupKind::Inner => (inner_group(q, cap)?, inner_group(target, cap)?),
        GroupKind::Transvection => (
            transvection_group(q, cap)?,
            transvection_group(target, cap)?,
        ),
    };
    if g.order().saturating_mul(g2.order()) > cap {
        return Err(QuandleError::CapExceeded { cap });
    }
    let n = q.size();
    let mut elements = BTreeSet::new();
    for a in g.elements() {
        for b in g2.elements() {
            if (0..n).all(|x| f[a.apply(x)] == b.apply(f[x])) {
                elements.insert(a.disjoint_union(b));
            }
        }
    }
    let group = PermGroup::from_elements(n + target.size(), Vec::new(), elements);
    Ok(PairGroup {
        source_size: n,
        group,
    })
}

/// A conjugation quandle on an orbit of matrices.
#[derive(Debug, Clone)]
pub struct ConjugacyQuandle {
    pub quandle: FiniteQuandle,
    /// `elements[i]` is the matrix indexing element `i`; `elements[0]` is the seed.
    pub elements: Vec<Matrix>,
}

impl ConjugacyQuandle {
    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.elements.iter().position(|e| e == m)
    }
}

/// Orbit of `seed` under conjugation by the group generated by `generators`,
/// in BFS order, with `X ▷ Y = X Y X^{-1}`.
pub fn conjugacy_quandle(
    generators: &[Matrix],
    seed: &Matrix,
    cap: usize,
) -> Result<ConjugacyQuandle, QuandleError> {
    if !seed.is_invertible() {
        return Err(QuandleError::NotInvertible);
    }
    let gens: Vec<(Matrix, Matrix)> = generators
        .iter()
        .map(|g| {
            g.invert()
                .map(|gi| (g.clone(), gi))
                .map_err(|_| QuandleError::NotInvertible)
        })
        .collect::<Result<_, _>>()?;
    let mut index: BTreeMap<Matrix, usize> = BTreeMap::new();
    let mut elements = vec![seed.clone()];
    index.insert(seed.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (g, gi) in &gens {
            let y = &(g * &elements[i]) * gi;
            if !index.contains_key(&y) {
                if elements.len() >= cap {
                    return Err(QuandleError::CapExceeded { cap });
                }
                index.insert(y.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(y);
            }
        }
    }
    let n = elements.len();
    let inverses: Vec<Matrix> = elements
        .iter()
        .map(|e| e.invert().expect("conjugate of invertible"))
        .collect();
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let c = &(&elements[x] * &elements[y]) * &inverses[x];
            let idx = *index.get(&c).ok_or(QuandleError::MalformedTable(
                "orbit not closed under conjugation",
            ))?;
            table.push(idx);
        }
    }
    Ok(ConjugacyQuandle {
        quandle: FiniteQuandle::from_flat_unverified(n, table, false),
        elements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn r3() -> FiniteQuandle {
        FiniteQuandle::dihedral(3)
    }

    #[test]
    fn dihedral_tables() {
        assert_eq!(FiniteQuandle::dihedral(1).rows(), vec![vec![0]]);
        assert_eq!(
            r3().rows(),
            vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]
        );
        assert_eq!(
            FiniteQuandle::dihedral(2).rows(),
            vec![vec![0, 1], vec![0, 1]]
        );
        assert_eq!(FiniteQuandle::dihedral(2), FiniteQuandle::trivial(2));
    }

    #[test]
    fn check_examples() {
        assert!(
            check_quandle(vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]], false)
                .unwrap()
                .is_valid()
        );
        assert!(check_quandle(vec![vec![0]], false).unwrap().is_valid());
        let r = check_quandle(vec![vec![0, 0, 1], vec![2, 1, 0], vec![1, 0, 2]], false).unwrap();
        assert!(matches!(
            r.violations[0],
            QuandleViolation::NotLeftInvertible { x: 0, .. }
        ));
        assert!(matches!(
            check_quandle(vec![vec![0, 3], vec![0, 1]], false),
            Err(QuandleError::MalformedTable(_))
        ));
    }

    #[test]
    fn rack_flag_skips_idempotence() {
        // x ▷ y = y + 1 mod 2 is a rack but not a quandle
        let rows = vec![vec![1, 0], vec![1, 0]];
        assert!(check_quandle(rows.clone(), true).unwrap().is_valid());
        let r = check_quandle(rows, false).unwrap();
        assert_eq!(r.violations, vec![QuandleViolation::NotIdempotent { x: 0 }]);
    }

    #[test]
    fn group_orders() {
        assert_eq!(
            inner_group(&FiniteQuandle::trivial(3), 100)
                .unwrap()
                .order(),
            1
        );
        assert_eq!(inner_group(&r3(), 100).unwrap().order(), 6);
        assert_eq!(transvection_group(&r3(), 100).unwrap().order(), 3);
    }

    #[test]
    fn transitivity() {
        assert!(is_transitive(&r3()));
        assert!(!is_transitive(&FiniteQuandle::trivial(2)));
        let u = r3().disjoint_union(&r3());
        assert!(u.check(TripleCheck::Exhaustive).is_valid());
        assert!(!is_transitive(&u));
        assert_eq!(orbits(&u).len(), 2);
    }

    #[test]
    fn homomorphisms() {
        let q = r3();
        assert!(check_quandle_hom(&q, &q, &[0, 1, 2]));
        assert!(check_quandle_hom(&q, &q, &[1, 1, 1]));
        assert!(check_quandle_hom(&q, &q, &[1, 0, 2]));
        assert!(!check_quandle_hom(&q, &q, &[0, 1, 0]));
        assert_eq!(quandle_hom_witness(&q, &q, &[0, 1, 0]), Some((0, 1)));
    }

    #[test]
    fn pair_groups() {
        let q = r3();
        let diag = extended_pair_group(&q, &q, &[0, 1, 2], GroupKind::Inner, 100).unwrap();
        assert_eq!(diag.order(), 6);
        assert!(diag.pairs().all(|(a, b)| a == b));
        let point = FiniteQuandle::trivial(1);
        let c = extended_pair_group(&q, &point, &[0, 0, 0], GroupKind::Inner, 100).unwrap();
        assert_eq!(c.order(), 6);
        assert!(c.pairs().all(|(_, b)| b.is_identity()));
        assert!(c.is_equivariant(&[0, 0, 0]));
        let full = full_extended_group(&q, &q, &[0, 1, 2], GroupKind::Inner, 100).unwrap();
        assert_eq!(full.order(), 6);
        assert!(extended_pair_group(&q, &q, &[0, 1, 0], GroupKind::Inner, 100).is_err());
    }

    #[test]
    fn conjugacy_of_identity_is_singleton() {
        let f = Field::Prime(5);
        let gens = [
            Matrix::from_i64_rows(f, &[&[1, 1], &[0, 1]]),
            Matrix::from_i64_rows(f, &[&[1, 0], &[1, 1]]),
        ];
        let c = conjugacy_quandle(&gens, &Matrix::identity(f, 2), 100).unwrap();
        assert_eq!(c.quandle.size(), 1);
    }
}
