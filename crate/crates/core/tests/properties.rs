use proptest::prelude::*;

use symball::balls::{analyze_split, analyze_subspace, complexity_of_image, exactness_check};
use symball::harness::MatrixFile;
use symball::projection::{
    contains, partition, project_ellipsoid, schur, shadow_lift, Block, BlockPartition, Ellipsoid,
};
use symball::sampling::{random_spd, stream, unit_vector};
use symball::symplectic::{
    inverse_spectrum_residual, is_symplectic, psd_check, random_orthosymplectic, random_symplectic,
    standard_j, symplectic_inverse, symplectic_spectrum, unitary_reduction, williamson, ComplexSubspace,
};
use symball::{Matrix, Tolerance};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn matrix_file_round_trip(n in 1usize..4, data in prop::collection::vec(any::<f64>(), 64)) {
        let d = 2 * n;
        let entries: Vec<f64> = data.iter().take(d * d).map(|x| if x.is_finite() { *x } else { 0.0 }).collect();
        let m = Matrix::new(d, d, entries).unwrap();
        let back = MatrixFile::parse(&MatrixFile::new(m.clone()).unwrap().to_json()).unwrap();
        for (a, b) in back.matrix.as_slice().iter().zip(m.as_slice()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn random_symplectic_is_symplectic(n in 1usize..5, spread in 0.1f64..2.0, seed in any::<u64>()) {
        let s = random_symplectic(n, spread, seed).unwrap();
        prop_assert!(is_symplectic(&s, n, tol()).unwrap());
        prop_assert_eq!(&s, &random_symplectic(n, spread, seed).unwrap());
        let si = symplectic_inverse(&s);
        prop_assert!((&si * &s).max_abs_diff(&Matrix::identity(2 * n)) < 1e-9 * s.norm_max().powi(2));
    }

    #[test]
    fn symplectic_balls_have_unit_spectrum(n in 1usize..5, seed in any::<u64>()) {
        let s = random_symplectic(n, 1.0, seed).unwrap();
        let spec = symplectic_spectrum(&(&s * &s.transpose()), n).unwrap();
        for l in spec.values {
            prop_assert!((l - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn spectrum_is_congruence_invariant(n in 1usize..4, seed in any::<u64>()) {
        let mut rng = stream(seed, "prop/congruence", 0);
        let m = random_spd(&mut rng, 2 * n, 0.1, 100.0);
        let s = random_symplectic(n, 0.5, seed).unwrap();
        let moved = (&(&s.transpose() * &m) * &s).symmetrize();
        let a = symplectic_spectrum(&m, n).unwrap().values;
        let b = symplectic_spectrum(&moved, n).unwrap().values;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-8 * x.max(1.0));
        }
    }

    #[test]
    fn williamson_reconstructs(n in 1usize..5, seed in any::<u64>(), log_cond in 0.0f64..4.0) {
        let mut rng = stream(seed, "prop/williamson", n as u64);
        let m = random_spd(&mut rng, 2 * n, 0.1, 10f64.powf(log_cond));
        let w = williamson(&m, n).unwrap();
        prop_assert!(w.reconstruction_residual(&m) <= 1e-9 * m.norm_max());
        prop_assert!(w.symplectic_residual() <= 1e-9);
        prop_assert!(w.lambda.windows(2).all(|p| p[0] <= p[1]));
    }

    #[test]
    fn psd_routes_agree(n in 1usize..4, seed in any::<u64>(), scale in 0.2f64..3.0) {
        let mut rng = stream(seed, "prop/psd", n as u64);
        let m = random_spd(&mut rng, 2 * n, 1.0, 10.0).scale(scale);
        prop_assert!(psd_check(&m, n, tol()).unwrap().routes_agree());
    }

    #[test]
    fn inverse_spectrum_reverses_order(n in 1usize..4, seed in any::<u64>()) {
        let mut rng = stream(seed, "prop/inverse", n as u64);
        let m = random_spd(&mut rng, 2 * n, 0.1, 1e3);
        prop_assert!(inverse_spectrum_residual(&m, n).unwrap() < 1e-9);
    }

    #[test]
    fn shadows_contain_projected_points(na in 1usize..3, nb in 1usize..3, seed in any::<u64>()) {
        let part = BlockPartition::new(na, nb).unwrap();
        let d = 2 * (na + nb);
        let mut rng = stream(seed, "prop/shadow", 0);
        let q = random_spd(&mut rng, d, 0.1, 100.0);
        let e = Ellipsoid::centered(q.clone(), 1.5).unwrap();
        let shadow = project_ellipsoid(&e, &part, Block::A).unwrap();
        let pm = partition(&q, &part).unwrap();
        // interior points project inside
        let root = q.inv_sqrt_pd(tol()).unwrap();
        for k in 0..50 {
            let mut r = stream(seed, "prop/shadow/points", k);
            let z = root.matvec(&unit_vector(&mut r, d)).unwrap().iter().map(|x| 1.5 * x).collect::<Vec<_>>();
            let (za, _) = part.split(&z).unwrap();
            prop_assert!(shadow.contains_point(&za).unwrap());
        }
        // boundary points of the shadow lift to the source boundary
        let sroot = shadow.shape().inv_sqrt_pd(tol()).unwrap();
        let mut r = stream(seed, "prop/shadow/lift", 0);
        let za: Vec<f64> = sroot.matvec(&unit_vector(&mut r, 2 * na)).unwrap().iter().map(|x| 1.5 * x).collect();
        let zb = shadow_lift(&pm, &za).unwrap();
        let z = part.merge(&za, &zb).unwrap();
        prop_assert!((e.level(&z).unwrap() - 1.0).abs() < 1e-9);
        prop_assert_eq!(shadow.shape(), &schur(&pm, Block::B).unwrap());
    }

    #[test]
    fn inscribed_ball_bounds(n in 2usize..5, seed in any::<u64>(), r in 0.5f64..3.0) {
        let s = random_symplectic(n, 1.0, seed).unwrap();
        for na in 1..n {
            let a = analyze_split(&s, na, r).unwrap();
            prop_assert!(a.max_lambda() <= 1.0 + 1e-8);
            prop_assert!(a.vol_projected >= a.vol_bound * (1.0 - 1e-9));
            prop_assert!((a.vol_inscribed / a.vol_bound - 1.0).abs() < 1e-9);
            prop_assert!(a.exactness.criteria_agree());
            prop_assert!(a.exactness.identity_residual < 1e-9 * s.norm_max().powi(4));
            prop_assert!(contains(&a.projected, &a.inscribed, 500, seed).unwrap());
            let psd = psd_check(&a.projected.shape().inv().unwrap().symmetrize(), na, tol()).unwrap();
            prop_assert!(psd.psd && psd.embedding_psd);
        }
    }

    #[test]
    fn split_matrices_are_exact(na in 1usize..3, nb in 1usize..3, seed in any::<u64>()) {
        let part = BlockPartition::new(na, nb).unwrap();
        let sa = random_symplectic(na, 1.0, seed).unwrap();
        let sb = random_symplectic(nb, 1.0, seed ^ 1).unwrap();
        let s = part.to_global_order(&Matrix::block_diag(&sa, &sb)).unwrap();
        let a = analyze_split(&s, na, 1.0).unwrap();
        prop_assert!(a.exact && !a.borderline);
        prop_assert!(a.exactness.criteria_agree());
        prop_assert!(a.s_b.is_some());
        let v = ComplexSubspace::coordinate(na + nb, na).unwrap();
        prop_assert!(complexity_of_image(&s, &v, tol()).unwrap());
    }

    /// `S = U_θ·Z` with `Z` squeezing the first degree of freedom by `a` and
    /// `U_θ` rotating degrees of freedom 1 and 2 by `θ` in both the x and the
    /// p plane. Then `SSᵀ` has x-x coupling `sc(a²−1)` and p-p coupling
    /// `sc(a⁻²−1)` with `s = sin θ`, `c = cos θ`.
    #[test]
    fn coupling_follows_mixing_angle(theta in -1.5f64..1.5, a in 1.1f64..3.0) {
        let (s, c) = theta.sin_cos();
        let rot = |m: &mut Matrix, off: usize| {
            m[(off, off)] = c;
            m[(off, off + 1)] = -s;
            m[(off + 1, off)] = s;
            m[(off + 1, off + 1)] = c;
        };
        let mut u = Matrix::identity(4);
        rot(&mut u, 0);
        rot(&mut u, 2);
        let z = Matrix::from_diag(&[a, 1.0, 1.0 / a, 1.0]);
        let sm = &u * &z;
        let minv_max = [c * c * a * a + s * s, s * s * a * a + c * c, c * c / (a * a) + s * s, s * s / (a * a) + c * c]
            .into_iter()
            .chain([(s * c * (a * a - 1.0)).abs(), (s * c * (1.0 / (a * a) - 1.0)).abs()])
            .fold(0.0, f64::max);
        let coupling = (s * c).abs() * (a * a - 1.0).abs().max((1.0 / (a * a) - 1.0).abs());
        let (exact, x) = exactness_check(&sm, 1).unwrap();
        prop_assert!((x - coupling / minv_max).abs() < 1e-12);
        prop_assert!(!exact || coupling / minv_max <= 1e-8);
        // a pure rotation leaves the round ball alone, so it is always exact
        prop_assert!(exactness_check(&u, 1).unwrap().0);
    }

    #[test]
    fn coordinate_subspace_matches_split(n in 2usize..4, seed in any::<u64>()) {
        let s = random_symplectic(n, 1.0, seed).unwrap();
        for k in 1..n {
            let v = ComplexSubspace::coordinate(n, k).unwrap();
            let a = analyze_subspace(&s, &v, 1.0).unwrap();
            let b = analyze_split(&s, k, 1.0).unwrap();
            for (x, y) in a.lambda_a.iter().zip(&b.lambda_a) {
                prop_assert!((x - y).abs() < 1e-9);
            }
            prop_assert!((a.vol_projected - b.vol_projected).abs() < 1e-9 * b.vol_projected);
            let gram = |m: &Matrix| m * &m.transpose();
            prop_assert!(gram(&a.s_a).max_abs_diff(&gram(&b.s_a)) < 1e-9 * gram(&b.s_a).norm_max());
        }
    }

    #[test]
    fn unitary_reduction_is_orthosymplectic(n in 2usize..5, k in 1usize..4, seed in any::<u64>()) {
        prop_assume!(k < n);
        let u0 = random_orthosymplectic(n, seed).unwrap();
        let v = symball::symplectic::complex_subspace_from_span(
            &(&u0 * ComplexSubspace::coordinate(n, k).unwrap().basis()),
            tol(),
        )
        .unwrap();
        let u = unitary_reduction(&v).unwrap();
        prop_assert!((&u.transpose() * &u).max_abs_diff(&Matrix::identity(2 * n)) < 1e-12);
        let j = standard_j(n);
        prop_assert!((&(&u.transpose() * &j) * &u).max_abs_diff(&j) < 1e-12);
    }
}
