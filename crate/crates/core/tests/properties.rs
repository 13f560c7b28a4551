use proptest::prelude::*;

use symspace_core::corpus::{constant_module, curvature_lts, line_rep};
use symspace_core::envelope::{envelope_automorphism, reduce_triplet, standard_envelope};
use symspace_core::linalg::canonical_basis;
use symspace_core::lya::InfSManifold;
use symspace_core::module::materialize_extension;
use symspace_core::quandle::{FiniteQuandle, TripleCheck};
use symspace_core::representation::{extract_ism_rep, semidirect};
use symspace_core::{Field, Matrix, Scalar};

fn small_matrix(field: Field, max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-4i64..=4, r * c).prop_map(move |v| {
            let rows: Vec<&[i64]> = v.chunks(c).collect();
            Matrix::from_i64_rows(field, &rows)
        })
    })
}

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::Rational),
        Just(Field::Prime(2)),
        Just(Field::Prime(5)),
        Just(Field::Prime(7))
    ]
}

/// Textbook Gauss-Jordan with division at every step.
fn plain_rref(m: &Matrix) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut a = m.to_rows();
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().unwrap();
        a[r] = a[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let k = a[i][c].clone();
                a[i] = a[i].iter().zip(&a[r]).map(|(x, y)| x - &(&k * y)).collect();
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

proptest! {
    #[test]
    fn rref_matches_plain_elimination(m in fields().prop_flat_map(|f| small_matrix(f, 6))) {
        let r = m.rref();
        let (plain, pivots) = plain_rref(&m);
        prop_assert_eq!(r.matrix.to_rows(), plain);
        prop_assert_eq!(r.pivots, pivots);
    }

    #[test]
    fn rref_is_idempotent(m in fields().prop_flat_map(|f| small_matrix(f, 6))) {
        let once = m.rref().matrix;
        prop_assert_eq!(once.rref().matrix, once.clone());
    }

    #[test]
    fn kernel_is_annihilated_and_rank_nullity_holds(m in fields().prop_flat_map(|f| small_matrix(f, 6))) {
        let k = m.kernel_basis();
        prop_assert_eq!(k.len() + m.rank(), m.cols());
        for v in &k {
            prop_assert!(m.apply(v).iter().all(Scalar::is_zero));
        }
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.column_basis().len(), m.rank());
    }

    #[test]
    fn inverse_is_two_sided(m in fields().prop_flat_map(|f| (1usize..=4).prop_flat_map(move |n| {
        proptest::collection::vec(-4i64..=4, n * n).prop_map(move |v| {
            let rows: Vec<&[i64]> = v.chunks(n).collect();
            Matrix::from_i64_rows(f, &rows)
        })
    }))) {
        let n = m.rows();
        match m.invert() {
            Ok(inv) => {
                prop_assert!((&m * &inv).is_identity());
                prop_assert!((&inv * &m).is_identity());
                prop_assert!(!m.det().unwrap().is_zero());
            }
            Err(_) => {
                prop_assert!(m.rank() < n);
                prop_assert!(m.det().unwrap().is_zero());
            }
        }
    }

    #[test]
    fn canonical_basis_depends_only_on_span(m in small_matrix(Field::Rational, 4), k in 1i64..5) {
        let rows = m.to_rows();
        let dim = m.cols();
        let mut mixed = rows.clone();
        if mixed.len() > 1 {
            let scaled: Vec<Scalar> = mixed[1].iter().map(|x| x * &Field::Rational.from_i64(k)).collect();
            mixed[0] = mixed[0].iter().zip(&scaled).map(|(a, b)| a + b).collect();
        }
        mixed.reverse();
        prop_assert_eq!(canonical_basis(Field::Rational, dim, &rows), canonical_basis(Field::Rational, dim, &mixed));
    }

    #[test]
    fn dihedral_quandles_are_quandles(n in 1usize..=25) {
        prop_assert!(FiniteQuandle::dihedral(n).check(TripleCheck::Exhaustive).is_valid());
    }

    #[test]
    fn table_mutations_of_r5_are_detected(x in 0usize..5, y in 0usize..5, shift in 1usize..5) {
        let mut rows = FiniteQuandle::dihedral(5).rows();
        rows[x][y] = (rows[x][y] + shift) % 5;
        let q = FiniteQuandle::new_unverified(rows, false).unwrap();
        prop_assert!(!q.check(TripleCheck::Exhaustive).is_valid());
    }

    #[test]
    fn constant_modules_give_quandle_extensions(n in prop::sample::select(vec![3usize, 5, 7]), p in prop::sample::select(vec![3u64, 5, 7]), s in 1i64..7) {
        let f = Field::Prime(p);
        let s = f.from_i64(s);
        prop_assume!(!s.is_zero());
        let m = constant_module(FiniteQuandle::dihedral(n), &s);
        prop_assert!(m.check().is_valid());
        let ext = materialize_extension(&m, 100).unwrap();
        prop_assert!(ext.quandle.check(TripleCheck::Exhaustive).is_valid());
    }

    #[test]
    fn envelope_round_trip_survives_change_of_basis(entries in proptest::collection::vec(-3i64..=3, 4)) {
        let q = Field::Rational;
        let g = Matrix::from_i64_rows(q, &[&entries[..2], &entries[2..]]);
        prop_assume!(g.is_invertible());
        let t = curvature_lts(q, 2).transport(&g).unwrap();
        prop_assert!(t.check().unwrap().is_valid());
        let ism = InfSManifold::new(t.clone(), -&Matrix::identity(q, 2)).unwrap();
        let env = standard_envelope(&t).unwrap();
        prop_assert_eq!(env.dim(), 3);
        let phi = envelope_automorphism(&env, &ism).unwrap();
        prop_assert_eq!(reduce_triplet(&env.lie, &phi).unwrap().ism, ism);
    }

    #[test]
    fn semidirect_equivalence_on_line_family(r in -3i64..=3, t in -3i64..=3, psi in prop::sample::select(vec![-2i64, -1, 1, 2, 3])) {
        let rep = line_rep(r, t, psi).unwrap();
        // semidirect itself asserts: ISM on T+V iff RISM1-3 and regular
        let out = semidirect(&rep).unwrap();
        prop_assert_eq!(out.is_ism(), rep.satisfies_rism() && rep.is_regular());
        prop_assert_eq!(extract_ism_rep(&out.ism, 1).unwrap(), rep);
    }
}
