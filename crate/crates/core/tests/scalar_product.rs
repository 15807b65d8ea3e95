use proptest::prelude::*;
use su3_core::identities::ZRepresentation;
use su3_core::laurent::laurent_at_zero;
use su3_core::sampling::Sampler;
use su3_core::scalar::{Complex64, Rational, Scalar};
use su3_core::scalar_product::chain::{block_expansion_sum, reduced_det, reduced_partition_sum, sub_subset_sum};
use su3_core::scalar_product::gen::{
    norm_coincident_data, random_onshell, random_partial_u, random_partial_v, random_spurious, SpuriousPlacement,
};
use su3_core::scalar_product::matrix::prefactor;
use su3_core::scalar_product::norm::{norm_det_with, norm_limit, LowerBlock};
use su3_core::scalar_product::omega::{det_kappa_derivative, omega_image, omega_vector};
use su3_core::scalar_product::spurious::spurious_column_ratios;
use su3_core::scalar_product::{
    build_block_matrix, norm_det, scalar_product_det, scalar_product_det_with, scalar_product_oracle,
    spurious_pole_check, BetheData, Construction,
};
use su3_core::Error;

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn one() -> Rational {
    q(1, 1)
}

fn zero() -> Rational {
    q(0, 1)
}

#[test]
fn empty_scalar_product_is_one() {
    let d = BetheData::make_onshell(vec![], vec![], vec![], vec![], q(3, 2), one()).unwrap();
    assert_eq!(scalar_product_oracle(&d, ZRepresentation::First).unwrap(), one());
    assert_eq!(scalar_product_det(&d).unwrap(), one());
    assert_eq!(norm_det::<Rational>(&[], &[], &[], &[], &one()).unwrap(), one());
}

#[test]
fn single_root_r_values() {
    let d = BetheData::make_onshell(vec![q(1, 3)], vec![], vec![q(5, 2)], vec![], q(2, 1), one()).unwrap();
    assert_eq!(d.r1_ub, vec![one()]);
    assert_eq!(d.r1_uc, vec![q(2, 1)]);
    let d = BetheData::make_onshell(vec![], vec![q(1, 3)], vec![], vec![q(5, 2)], one(), one()).unwrap();
    assert_eq!(d.r3_vb, vec![one()]);
}

#[test]
fn one_by_one_entries() {
    let c = one();
    let mut s = Sampler::new(5);
    let d = random_onshell(&mut s, 1, 1, &q(3, 2), &c).unwrap();
    let k = d.kernels().unwrap();
    let m = build_block_matrix(&d, Construction::Explicit).unwrap();
    let (uc, vc) = (&d.u_c[0], &d.v_c[0]);
    let expected = d.kappa.clone() * &k.t(vc, uc).unwrap() * &k.h(vc, uc).unwrap() * &k.h(vc, vc).unwrap();
    assert_eq!(m.entry(0, 1), &expected);

    let d = random_onshell(&mut s, 1, 0, &q(3, 2), &c).unwrap();
    let (uc, ub) = (&d.u_c[0], &d.u_b[0]);
    let hand = d.kappa.clone() * &k.g(ub, uc).unwrap() + &k.g(uc, ub).unwrap();
    let m = build_block_matrix(&d, Construction::Explicit).unwrap();
    assert_eq!(m.entry(0, 0), &hand);
}

#[test]
fn conflicting_shared_point_is_rejected() {
    let c = one();
    let err = BetheData::make_onshell(vec![q(1, 3)], vec![q(7, 2)], vec![q(1, 3)], vec![q(-9, 4)], q(2, 1), c);
    assert!(matches!(err, Err(Error::Conflict(_))));
}

#[test]
fn oracle_matches_determinant_exactly() {
    let c = one();
    let mut s = Sampler::new(101);
    for a in 0..=3 {
        for b in 0..=3 {
            if a + b > 4 {
                continue;
            }
            for _ in 0..3 {
                let kappa = s.nonzero_rational();
                let d = random_onshell(&mut s, a, b, &kappa, &c).unwrap();
                let oracle = scalar_product_oracle(&d, ZRepresentation::First).unwrap();
                assert_eq!(scalar_product_det(&d).unwrap(), oracle, "a={a} b={b}");
            }
        }
    }
}

#[test]
fn z_representation_does_not_change_oracle() {
    let c = q(2, 3);
    let mut s = Sampler::new(7);
    let d = random_onshell(&mut s, 2, 2, &q(-5, 3), &c).unwrap();
    assert_eq!(
        scalar_product_oracle(&d, ZRepresentation::First).unwrap(),
        scalar_product_oracle(&d, ZRepresentation::Second).unwrap()
    );
}

#[test]
fn oracle_size_guard() {
    let c = one();
    let mut s = Sampler::new(1);
    let d = random_onshell(&mut s, 6, 0, &q(2, 1), &c).unwrap();
    assert!(matches!(scalar_product_oracle(&d, ZRepresentation::First), Err(Error::Size { .. })));
}

#[test]
fn constructions_agree_entrywise() {
    let c = q(3, 2);
    let mut s = Sampler::new(33);
    for a in 0..=3 {
        for b in 0..=3 {
            let kappa = s.nonzero_rational();
            let d = random_onshell(&mut s, a, b, &kappa, &c).unwrap();
            let e = build_block_matrix(&d, Construction::Explicit).unwrap();
            let j = build_block_matrix(&d, Construction::Jacobian).unwrap();
            assert_eq!(e, j, "a={a} b={b}");
        }
    }
}

#[test]
fn orthogonality_at_unit_twist() {
    let c = one();
    let mut s = Sampler::new(55);
    for a in 0..=3 {
        for b in 0..=3 {
            if a + b == 0 {
                continue;
            }
            let d = random_onshell(&mut s, a, b, &one(), &c).unwrap();
            let m = build_block_matrix(&d, Construction::Explicit).unwrap();
            assert_eq!(m.det().unwrap(), zero());
            let action = m.left_multiply(&omega_vector(&d).unwrap());
            assert!(action.iter().all(Scalar::is_zero), "a={a} b={b}");
        }
    }
}

#[test]
fn omega_maps_to_one_minus_kappa_times_v() {
    let c = q(1, 2);
    let mut s = Sampler::new(77);
    for (a, b) in [(1, 0), (0, 1), (1, 1), (2, 1), (2, 3)] {
        let kappa = q(7, 3);
        let d = random_onshell(&mut s, a, b, &kappa, &c).unwrap();
        let m = build_block_matrix(&d, Construction::Jacobian).unwrap();
        let action = m.left_multiply(&omega_vector(&d).unwrap());
        let v = omega_image(&d).unwrap();
        for (x, y) in action.iter().zip(&v) {
            assert_eq!(x, &((one() - &kappa) * y));
        }
    }
}

#[test]
fn omega_single_component() {
    let d = BetheData::make_onshell(vec![q(1, 3)], vec![], vec![q(5, 2)], vec![], one(), one()).unwrap();
    assert_eq!(omega_vector(&d).unwrap(), vec![q(5, 2) - q(1, 3)]);
    let d = BetheData::make_onshell(vec![q(1, 3)], vec![], vec![q(1, 3)], vec![], one(), one()).unwrap();
    assert!(matches!(omega_vector(&d), Err(Error::Degenerate(_))));
}

#[test]
fn partial_coincidences_keep_zero_eigenvector() {
    let c = one();
    let mut s = Sampler::new(404);
    // at a = b = 1 a shared u-point forces vB = vC, which is the norm
    for (a, b) in [(2, 1), (1, 2), (2, 2), (3, 2), (2, 3)] {
        for partial in [random_partial_u, random_partial_v] {
            let d = partial(&mut s, a, b, &one(), &c).unwrap();
            assert!(d.is_on_shell_b().unwrap() && d.is_twisted_on_shell_c().unwrap());
            let m = build_block_matrix(&d, Construction::Jacobian).unwrap();
            let omega = omega_vector(&d).unwrap();
            assert!(omega.iter().any(Scalar::is_zero));
            assert!(m.left_multiply(&omega).iter().all(Scalar::is_zero), "a={a} b={b}");
            assert_eq!(m.det().unwrap(), zero());
            assert_eq!(scalar_product_det(&d).unwrap(), zero());
        }
    }
}

#[test]
fn kappa_derivative_from_omega_row() {
    // The closed-form entries depend on κ explicitly and on the roots. At
    // fixed roots det 𝒩 is then a polynomial in κ whose slope at κ = 1 the
    // Ω-row formula must reproduce.
    let c = one();
    let mut s = Sampler::new(9);
    let d = random_onshell(&mut s, 2, 1, &one(), &c).unwrap();
    let analytic = det_kappa_derivative(&d, Construction::Explicit).unwrap();
    let fit = laurent_at_zero(
        |e| {
            let mut dk = d.clone();
            dk.kappa = one() + e;
            build_block_matrix(&dk, Construction::Explicit)?.det()
        },
        0,
        &[],
        2,
    )
    .unwrap();
    assert_eq!(fit[1], analytic);
}

#[test]
fn spurious_columns_are_proportional() {
    let c = one();
    let mut s = Sampler::new(303);
    for (a, b) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 3)] {
        let kappa = s.nonzero_rational();
        let d = random_spurious(&mut s, a, b, &kappa, &c, SpuriousPlacement::Shifted).unwrap();
        let ratio = spurious_pole_check(&d).unwrap();
        assert_eq!(ratio, d.r3_vc[0].clone() / &d.r1_ub[0], "a={a} b={b}");
        let m = build_block_matrix(&d, Construction::Jacobian).unwrap();
        assert_eq!(m.det().unwrap(), zero());
        assert!(matches!(build_block_matrix(&d, Construction::Explicit), Err(Error::Pole(_))));

        let d = random_spurious(&mut s, a, b, &kappa, &c, SpuriousPlacement::Equal).unwrap();
        let r = spurious_column_ratios(&d, 0, 0).unwrap();
        assert_eq!(r.upper.unwrap_or_else(one), one());
        assert_eq!(r.lower.unwrap_or_else(one), one());
        assert_eq!(build_block_matrix(&d, Construction::Jacobian).unwrap().det().unwrap(), zero());
    }
}

#[test]
fn spurious_pole_cancels_in_full_product() {
    let c = one();
    let mut s = Sampler::new(808);
    let d0 = random_spurious(&mut s, 2, 1, &q(3, 2), &c, SpuriousPlacement::Shifted).unwrap();
    // move vC₁ off the pole and re-impose the twisted system
    let v1 = d0.v_c[0].clone();
    let mut poles = Vec::new();
    for p in d0.u_b.iter().skip(1).chain(&d0.u_c).chain(&d0.v_c[1..]).chain(&d0.v_b) {
        for shift in [-1, 0, 1] {
            poles.push(p.clone() + &(c.clone() * q(shift, 1)) - &v1);
        }
    }
    poles.push(c.clone());
    poles.sort();
    poles.dedup();
    poles.retain(|p| p != &zero());
    // double poles occur where a kernel pole meets a prefactor pole
    let poles = [poles.clone(), poles].concat();
    let coeffs = laurent_at_zero(
        |e| {
            let mut v_c = d0.v_c.clone();
            v_c[0] += e;
            let d = BetheData::make_onshell(d0.u_b.clone(), d0.v_b.clone(), d0.u_c.clone(), v_c, d0.kappa.clone(), c.clone())?;
            scalar_product_det_with(&d, Construction::Jacobian)
        },
        1,
        &poles,
        2,
    )
    .unwrap();
    assert_eq!(coeffs[0], zero());
}

#[test]
fn norm_matches_exact_coincident_limit() {
    let c = one();
    let mut s = Sampler::new(1234);
    for (a, b) in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2), (3, 2)] {
        let pts = s.generic_sets(&[a, b], &c);
        let (u, v) = (&pts[0], &pts[1]);
        let x1: Vec<_> = (0..a).map(|_| s.rational()).collect();
        let x3: Vec<_> = (0..b).map(|_| s.rational()).collect();
        let d = norm_coincident_data(u, v, &x1, &x3, &c).unwrap();
        let limit = scalar_product_det(&d).unwrap();
        assert_eq!(norm_det(u, v, &x1, &x3, &c).unwrap(), limit, "a={a} b={b}");
    }
}

#[test]
fn printed_lower_block_order() {
    let c = one();
    let mut s = Sampler::new(4321);
    let pts = s.generic_sets(&[2, 2], &c);
    let x1: Vec<_> = (0..2).map(|_| s.rational()).collect();
    let x3: Vec<_> = (0..2).map(|_| s.rational()).collect();
    let vu = norm_det_with(&pts[0], &pts[1], &x1, &x3, &c, LowerBlock::VU).unwrap();
    let uv = norm_det_with(&pts[0], &pts[1], &x1, &x3, &c, LowerBlock::UV).unwrap();
    assert_ne!(vu, uv);
}

#[test]
fn norm_of_single_root() {
    let c = q(2, 1);
    let x = q(5, 3);
    assert_eq!(norm_det(&[q(1, 7)], &[], &[x.clone()], &[], &c).unwrap(), -(c * &x));
}

#[test]
fn norm_matches_richardson_limit() {
    let c = one();
    let mut s = Sampler::new(99);
    for (a, b) in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)] {
        let pts = s.generic_sets(&[a, b], &c);
        let u: Vec<Complex64> = pts[0].iter().map(Complex64::from_rational).collect();
        let v: Vec<Complex64> = pts[1].iter().map(Complex64::from_rational).collect();
        let x1: Vec<Complex64> = (0..a).map(|_| Complex64::from_rational(&s.rational())).collect();
        let x3: Vec<Complex64> = (0..b).map(|_| Complex64::from_rational(&s.rational())).collect();
        let cf = Complex64::from_rational(&c);
        let exact = norm_det(&u, &v, &x1, &x3, &cf).unwrap();
        let (lim, _) = norm_limit(&u, &v, &x1, &x3, &cf, 1e-2, 6).unwrap();
        let rel = (lim - exact).norm() / exact.norm();
        assert!(rel < 1e-8, "a={a} b={b} rel={rel:e}");
    }
}

#[test]
fn derivation_chain_sums() {
    let c = one();
    let mut s = Sampler::new(2024);
    for a in 0..=2 {
        for b in 0..=2 {
            let kappa = s.nonzero_rational();
            let d = random_onshell(&mut s, a, b, &kappa, &c).unwrap();
            let hat = reduced_det(&d, Construction::Explicit).unwrap();
            let k = d.kernels().unwrap();
            let full = k.f_set(&d.v_c, &d.u_c).unwrap() * &k.f_set(&d.v_b, &d.u_b).unwrap() * &hat;
            assert_eq!(full, scalar_product_oracle(&d, ZRepresentation::First).unwrap(), "a={a} b={b}");
            assert_eq!(block_expansion_sum(&d, Construction::Explicit).unwrap(), hat, "laplace a={a} b={b}");
            assert_eq!(reduced_partition_sum(&d).unwrap(), hat, "reduced a={a} b={b}");
            assert_eq!(sub_subset_sum(&d).unwrap(), hat, "sub-subsets a={a} b={b}");
        }
    }
}

#[test]
fn float_matches_exact() {
    let c = one();
    let mut s = Sampler::new(66);
    let d = random_onshell(&mut s, 2, 2, &q(4, 3), &c).unwrap();
    let exact = scalar_product_det(&d).unwrap().to_complex();
    let f = d.to_float();
    let det = scalar_product_det(&f).unwrap();
    let oracle = scalar_product_oracle(&f, ZRepresentation::First).unwrap();
    assert!((det - exact).norm() <= 1e-10 * exact.norm());
    assert!((oracle - exact).norm() <= 1e-10 * exact.norm());
    assert!(prefactor(&f).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prop_oracle_equals_det(seed in any::<u64>(), a in 0usize..=2, b in 0usize..=2) {
        let c = one();
        let mut s = Sampler::new(seed);
        let kappa = s.nonzero_rational();
        let d = random_onshell(&mut s, a, b, &kappa, &c).unwrap();
        prop_assert_eq!(scalar_product_det(&d).unwrap(), scalar_product_oracle(&d, ZRepresentation::First).unwrap());
    }

    #[test]
    fn prop_orthogonal_at_unit_twist(seed in any::<u64>(), a in 0usize..=3, b in 0usize..=3) {
        prop_assume!(a + b > 0);
        let c = q(1, 2);
        let mut s = Sampler::new(seed);
        let d = random_onshell(&mut s, a, b, &one(), &c).unwrap();
        prop_assert_eq!(scalar_product_det(&d).unwrap(), zero());
    }
}
