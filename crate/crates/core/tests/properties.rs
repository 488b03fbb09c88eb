use blockdiag::matfun::{align_eigenvectors, hermitian_eig, hpd_inv_sqrt, matrix_exp_i, unitary_log_principal};
use blockdiag::random::{generate_random_hermitian, random_block_unitary, random_hermitian, rng_from_seed};
use blockdiag::series::{series_exp, series_inv_sqrt, series_log, series_mul};
use blockdiag::{block_project, BlockPartition, Complex64, Matrix, Series};
use proptest::prelude::*;

fn partition_strategy() -> impl Strategy<Value = BlockPartition> {
    prop::collection::vec(1usize..=3, 1..=4).prop_map(|sizes| BlockPartition::contiguous(&sizes).unwrap())
}

fn herm(n: usize, seed: u64, scale: f64) -> Matrix {
    generate_random_hermitian(n, seed, scale).unwrap()
}

fn general(n: usize, seed: u64) -> Matrix {
    let a = herm(n, seed, 1.0);
    let b = herm(n, seed ^ 0x9e37_79b9, 1.0);
    &a + &b.scale(Complex64::i())
}

/// Hermitian series with zero constant term.
fn generator(n: usize, order: usize, seed: u64, scale: f64) -> Series {
    let mut coeffs = vec![Matrix::zeros(n)];
    coeffs.extend((1..=order).map(|k| herm(n, seed.wrapping_mul(31).wrapping_add(k as u64), scale)));
    Series::new(coeffs).unwrap()
}

fn general_series(n: usize, order: usize, seed: u64) -> Series {
    Series::new((0..=order).map(|k| general(n, seed.wrapping_mul(17).wrapping_add(k as u64))).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn projector_is_linear_idempotent_and_contractive(p in partition_strategy(), s1 in any::<u64>(), s2 in any::<u64>(), c in -3.0f64..3.0) {
        let n = p.n();
        let (a, b) = (general(n, s1), general(n, s2));
        let ba = block_project(&a, &p).unwrap();
        let lin = block_project(&(&a + &b.scale_real(c)), &p).unwrap();
        let expect = &ba + &block_project(&b, &p).unwrap().scale_real(c);
        prop_assert!((&lin - &expect).max_abs() < 1e-13);
        prop_assert_eq!(block_project(&ba, &p).unwrap(), ba.clone());
        prop_assert_eq!(block_project(&a.adjoint(), &p).unwrap(), ba.adjoint());
        prop_assert!(ba.frobenius_norm() <= a.frobenius_norm() + 1e-14);
    }

    #[test]
    fn eigendecomposition_reconstructs(n in 2usize..=16, seed in any::<u64>(), scale in 0.1f64..10.0) {
        let h = herm(n, seed, scale);
        let d = hermitian_eig(&h).unwrap();
        prop_assert!((&d.reconstruct() - &h).frobenius_norm() <= 1e-12 * scale);
        prop_assert!(d.vectors.unitary_deviation() <= 1e-12);
        prop_assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let trace: f64 = d.eigenvalues.iter().sum();
        prop_assert!((trace - h.trace().re).abs() <= 1e-12 * scale * n as f64);
    }

    #[test]
    fn inverse_sqrt_squares_to_inverse(n in 1usize..=8, seed in any::<u64>()) {
        let g = general(n, seed);
        let a = &(&g * &g.adjoint()) + &Matrix::identity(n);
        let r = hpd_inv_sqrt(&a).unwrap();
        prop_assert!(r.hermitian_deviation() < 1e-13);
        prop_assert!(hermitian_eig(&r).unwrap().eigenvalues.iter().all(|&e| e > 0.0));
        prop_assert!((&(&(&r * &r) * &a) - &Matrix::identity(n)).frobenius_norm() < 1e-11);
    }

    #[test]
    fn block_diagonal_gauge_is_absorbed_by_alignment(p in partition_strategy(), seed in any::<u64>()) {
        // a block-diagonal H is diagonalized by a block-diagonal X, so B(X) = X
        let n = p.n();
        let h = block_project(&herm(n, seed, 1.0), &p).unwrap();
        let shifted = &h + &Matrix::from_fn(n, |i, j| if i == j { Complex64::new(10.0 * p.block_of(i) as f64, 0.0) } else { Complex64::new(0.0, 0.0) });
        let x = align_eigenvectors(&hermitian_eig(&shifted).unwrap(), &p).unwrap().vectors;
        prop_assert!((&block_project(&x, &p).unwrap() - &x).frobenius_norm() < 1e-12);
    }

    #[test]
    fn block_unitaries_are_unitary_and_block_diagonal(p in partition_strategy(), seed in any::<u64>()) {
        let v: Matrix = random_block_unitary(&p, &mut rng_from_seed(seed));
        prop_assert!(v.unitary_deviation() < 1e-13);
        prop_assert_eq!(block_project(&v, &p).unwrap(), v);
    }

    #[test]
    fn series_product_is_associative(n in 1usize..=4, k in 0usize..=8, s in any::<u64>()) {
        let (a, b, c) = (general_series(n, k, s), general_series(n, k, s ^ 1), general_series(n, k, s ^ 2));
        let left = series_mul(&series_mul(&a, &b).unwrap(), &c).unwrap();
        let right = series_mul(&a, &series_mul(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_coeff_distance(&right).unwrap() < 1e-10);
    }

    #[test]
    fn series_adjoint_reverses_products(n in 1usize..=4, k in 0usize..=8, s in any::<u64>()) {
        let (a, b) = (general_series(n, k, s), general_series(n, k, s ^ 7));
        let lhs = series_mul(&a, &b).unwrap().adjoint();
        let rhs = series_mul(&b.adjoint(), &a.adjoint()).unwrap();
        prop_assert!(lhs.max_coeff_distance(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn series_inverse_sqrt_identity(n in 1usize..=4, k in 1usize..=8, s in any::<u64>(), scale in 0.01f64..1.0) {
        // A = I + λ(...) Hermitian; R·R·A = I order by order
        let mut coeffs = vec![Matrix::identity(n)];
        coeffs.extend((1..=k).map(|j| herm(n, s.wrapping_add(j as u64), scale)));
        let a = Series::new(coeffs).unwrap();
        let r = series_inv_sqrt(&a).unwrap();
        let rra = series_mul(&series_mul(&r, &r).unwrap(), &a).unwrap();
        prop_assert!(rra.max_coeff_distance(&Series::identity(n, k)).unwrap() < 1e-11);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn series_log_inverts_exp(n in 1usize..=5, k in 1usize..=8, s in any::<u64>(), scale in 0.01f64..1.0) {
        let g = generator(n, k, s, scale);
        let u = series_exp(&g).unwrap();
        let back = series_log(&u).unwrap();
        prop_assert!(back.max_coeff_distance(&g).unwrap() <= 1e-12, "{}", back.max_coeff_distance(&g).unwrap());
        let again = series_exp(&back).unwrap();
        prop_assert!(again.max_coeff_distance(&u).unwrap() <= 1e-12);
    }

    #[test]
    fn unitary_log_inverts_exp(n in 1usize..=8, s in any::<u64>(), norm in 0.0f64..3.0) {
        // ‖S‖₂ ≤ ‖S‖_F ≤ 3 < π
        let sm = random_hermitian::<f64>(n, &mut rng_from_seed(s), norm.max(1e-9)).unwrap();
        let u = matrix_exp_i(&sm).unwrap();
        prop_assert!(u.unitary_deviation() < 1e-13);
        let back = unitary_log_principal(&u).unwrap();
        prop_assert!((&back - &sm).frobenius_norm() < 1e-10);
    }
}
