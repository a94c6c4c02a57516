use proptest::prelude::*;

use qik::cli::io::MatrixFile;
use qik::construct::generate::{random_complex, random_conjugation, rng_from_seed};
use qik::defect::{defect_scale, lambda, lambda_by_recurrence};
use qik::linalg::spectral::{column_space_basis, eigen_backward_error, eigenvalues, norms, singular_values};
use qik::{ComplexMatrix, ExactMatrix, TolerancePolicy, C64};

fn close(a: &ComplexMatrix, b: &ComplexMatrix, scale: f64) -> bool {
    (a - b).frobenius_norm() <= 1e-10 * scale.max(1.0)
}

fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_is_an_involution(seed in any::<u64>(), r in 1usize..6, c in 1usize..6) {
        let a = random_complex(r, c, 1.0, &mut rng_from_seed(seed));
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn norm_inequalities(seed in any::<u64>(), r in 1usize..7, c in 1usize..7) {
        let a = random_complex(r, c, 2.0, &mut rng_from_seed(seed));
        let n = norms(&a);
        let k = r.min(c) as f64;
        prop_assert!(a.max_abs() <= n.spectral * (1.0 + 1e-12));
        prop_assert!(n.spectral <= n.frobenius * (1.0 + 1e-12));
        prop_assert!(n.frobenius <= k.sqrt() * n.spectral * (1.0 + 1e-12));
        let sv = singular_values(&a).unwrap();
        let sum_sq: f64 = sv.iter().map(|s| s * s).sum();
        prop_assert!((sum_sq.sqrt() - n.frobenius).abs() <= 1e-10 * n.frobenius.max(1.0));
    }

    #[test]
    fn kron_mixed_product(seed in any::<u64>(), p in 1usize..4, q in 1usize..4) {
        let mut rng = rng_from_seed(seed);
        let a = random_complex(p, p, 1.0, &mut rng);
        let b = random_complex(q, q, 1.0, &mut rng);
        let c = random_complex(p, p, 1.0, &mut rng);
        let d = random_complex(q, q, 1.0, &mut rng);
        let lhs = &a.kron(&b) * &c.kron(&d);
        let rhs = (&a * &c).kron(&(&b * &d));
        prop_assert!(close(&lhs, &rhs, lhs.frobenius_norm()));
    }

    #[test]
    fn eigenvalues_have_small_backward_error(seed in any::<u64>(), n in 1usize..7) {
        let a = random_complex(n, n, 1.0, &mut rng_from_seed(seed));
        let eig = eigenvalues(&a).unwrap();
        prop_assert_eq!(eig.len(), n);
        let scale = norms(&a).frobenius.max(1.0);
        for z in eig {
            prop_assert!(eigen_backward_error(&a, z) <= 1e-10 * scale);
        }
    }

    #[test]
    fn column_basis_is_orthonormal_and_projects(seed in any::<u64>(), n in 2usize..7, k in 1usize..4) {
        let mut rng = rng_from_seed(seed);
        let k = k.min(n);
        // Rank at most k by construction.
        let a = &random_complex(n, k, 1.0, &mut rng) * &random_complex(k, n, 1.0, &mut rng);
        let b = column_space_basis(&a, &TolerancePolicy::default()).unwrap();
        prop_assert_eq!(b.rank, k);
        let u = b.unitary();
        prop_assert!(close(&(&u.adjoint() * &u), &ComplexMatrix::identity(n), 1.0));
        let p = &b.range * &b.range.adjoint();
        prop_assert!(close(&(&p * &a), &a, a.frobenius_norm()));
    }

    #[test]
    fn conjugation_is_an_antiunitary_involution(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = rng_from_seed(seed);
        let c = random_conjugation(n, &mut rng);
        let x = random_complex(n, 1, 1.0, &mut rng).entries_row_major();
        let y = random_complex(n, 1, 1.0, &mut rng).entries_row_major();
        let cx = c.apply(&x).unwrap();
        let cy = c.apply(&y).unwrap();
        let back = c.apply(&cx).unwrap();
        for (u, v) in back.iter().zip(&x) {
            prop_assert!((u - v).norm() <= 1e-12);
        }
        // ⟨Cx, Cy⟩ = ⟨y, x⟩
        prop_assert!((dot(&cx, &cy) - dot(&y, &x)).norm() <= 1e-12 * (1.0 + n as f64));
    }

    #[test]
    fn conj_similarity_is_multiplicative_and_adjoint_compatible(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = rng_from_seed(seed);
        let c = random_conjugation(n, &mut rng);
        let a = random_complex(n, n, 1.0, &mut rng);
        let b = random_complex(n, n, 1.0, &mut rng);
        let ab = c.conj_similarity(&(&a * &b)).unwrap();
        let split = &c.conj_similarity(&a).unwrap() * &c.conj_similarity(&b).unwrap();
        prop_assert!(close(&ab, &split, ab.frobenius_norm()));
        let adj = c.conj_similarity(&a.adjoint()).unwrap();
        prop_assert!(close(&adj, &c.conj_similarity(&a).unwrap().adjoint(), adj.frobenius_norm()));
        let twice = c.conj_similarity(&c.conj_similarity(&a).unwrap()).unwrap();
        prop_assert!(close(&twice, &a, a.frobenius_norm()));
    }

    #[test]
    fn recurrence_matches_direct_sum(seed in any::<u64>(), n in 1usize..6, m in 1u32..6) {
        let mut rng = rng_from_seed(seed);
        let t = random_complex(n, n, 1.0, &mut rng);
        let c = random_conjugation(n, &mut rng);
        let direct = lambda(&t, &c, m).unwrap();
        let rec = lambda_by_recurrence(&t, &c, m).unwrap();
        prop_assert!((&rec.matrix - &direct.matrix).frobenius_norm() <= 1e-9 * defect_scale(&t, m, 0));
    }

    #[test]
    fn exact_and_float_defects_agree(
        entries in proptest::collection::vec(-3i64..=3, 9),
        m in 1u32..4,
    ) {
        let rows: Vec<&[i64]> = entries.chunks(3).collect();
        let t = ExactMatrix::from_i64_rows(&rows);
        let flip = ExactMatrix::from_complex(&ComplexMatrix::flip(3)).unwrap();
        let exact = t.lambda(&flip, m).unwrap().to_complex();
        let float = lambda(&t.to_complex(), &qik::Conjugation::flip(3), m).unwrap().matrix;
        prop_assert!((&exact - &float).frobenius_norm() <= 1e-9 * defect_scale(&t.to_complex(), m, 0));
    }

    #[test]
    fn matrix_file_round_trips(seed in any::<u64>(), r in 1usize..5, c in 1usize..5) {
        let a = random_complex(r, c, 3.0, &mut rng_from_seed(seed));
        let text = serde_json::to_string(&MatrixFile::from_matrix(&a)).unwrap();
        let back: MatrixFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_input().unwrap().matrix, a);
    }
}
