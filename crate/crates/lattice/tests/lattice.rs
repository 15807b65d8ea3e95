use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use su3_lattice::monodromy::RTT_MAX_SITES;
use su3_lattice::rmatrix::{max_abs, permutation};
use su3_lattice::spectrum::residual;
use su3_lattice::*;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn one() -> Complex64 {
    cx(1.0, 0.0)
}

fn rand_c(rng: &mut ChaCha8Rng) -> Complex64 {
    cx(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

fn couplings() -> [Complex64; 3] {
    [cx(0.0, 1.0), cx(1.0, 0.0), cx(0.6, -0.35)]
}

#[test]
fn r_matrix_far_apart_is_identity() {
    let r = build_r(cx(1e9, 0.0), cx(0.0, 0.0), one(), Normalization::Plain).unwrap();
    assert!(max_abs(&(r - Dense::identity(9, 9))) < 1e-8);
}

#[test]
fn r_matrix_plain_pole() {
    assert!(matches!(
        build_r(cx(0.5, 0.0), cx(0.5, 0.0), one(), Normalization::Plain),
        Err(LatticeError::Pole(_))
    ));
    assert!(build_r(cx(0.5, 0.0), cx(0.5, 0.0), one(), Normalization::Rescaled).is_ok());
}

#[test]
fn rescaled_r_at_minus_c_is_an_antisymmetrizer() {
    let c = cx(0.3, 0.8);
    let p = permutation(3);
    assert!(max_abs(&(&p * &p - Dense::identity(9, 9))) < 1e-15);
    let r = build_r(cx(1.0, 0.0) - c, cx(1.0, 0.0), c, Normalization::Rescaled).unwrap();
    // R̄ = c(P − I), so R̄² = −2c R̄.
    assert!(max_abs(&(&r * &r + &r * (c * 2.0))) < 1e-14);
}

#[test]
fn yang_baxter() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for c in couplings() {
        for _ in 0..20 {
            let (x, y, z) = (rand_c(&mut rng), rand_c(&mut rng), rand_c(&mut rng));
            let d = yang_baxter_defect(x, y, z, c).unwrap();
            let scale = (c / (x - y)).norm().max(1.0) * (c / (x - z)).norm().max(1.0) * (c / (y - z)).norm().max(1.0);
            assert!(d / scale < 1e-12, "YBE defect {d:e}");
        }
    }
}

#[test]
fn single_site_monodromy_is_r() {
    let l = Lattice::new(1, cx(0.0, 1.0)).unwrap();
    let w = cx(0.4, -0.7);
    let t = l.monodromy(w, Normalization::Plain).unwrap().full();
    let r = build_r(w, cx(0.0, 0.0), l.c, Normalization::Plain).unwrap();
    assert!(max_abs(&(t - r)) < 1e-15);
}

#[test]
fn vacuum_eigenvalues_and_annihilation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 1..=4 {
        for c in couplings() {
            let l = Lattice::new(n, c).unwrap();
            let w = rand_c(&mut rng);
            let mono = l.monodromy(w, Normalization::Plain).unwrap();
            let mut vac = Vector::zeros(l.dim());
            vac[0] = one();
            let f = (w + c) / w;
            let lambdas = [f.powu(n as u32), one(), one()];
            for j in 0..3 {
                let img = mono.entry(j, j) * &vac;
                assert!((&img - &vac * lambdas[j]).norm() < 1e-12 * lambdas[j].norm().max(1.0), "λ_{}", j + 1);
                for k in 0..j {
                    assert!((mono.entry(j, k) * &vac).norm() < 1e-14, "T_{}{} |0⟩", j + 1, k + 1);
                }
            }
        }
    }
    let l = Lattice::new(1, cx(1.0, 0.0)).unwrap();
    let t11 = l.monodromy(l.c, Normalization::Plain).unwrap().entry(0, 0)[(0, 0)];
    assert!((t11 - cx(2.0, 0.0)).norm() < 1e-15);
}

#[test]
fn rtt_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=3 {
        for c in couplings() {
            let l = Lattice::new(n, c).unwrap();
            let (w1, w2) = (rand_c(&mut rng), rand_c(&mut rng));
            let d = l.rtt_defect(w1, w2, one()).unwrap();
            assert!(d < 1e-11, "N = {n}: RTT defect {d:e}");
        }
    }
    let l = Lattice::new(2, cx(0.0, 1.0)).unwrap();
    let d = l.rtt_defect(cx(0.3, 0.1), cx(-0.8, 0.4), cx(2.0, 0.0)).unwrap();
    assert!(d < 1e-12, "twisted RTT defect {d:e}");
    let big = Lattice::new(RTT_MAX_SITES + 1, one()).unwrap();
    assert!(matches!(big.rtt_defect(one(), cx(2.0, 0.0), one()), Err(LatticeError::Size { .. })));
}

#[test]
fn transfer_matrices_commute() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 1..=4 {
        let l = Lattice::new(n, cx(0.0, 1.0)).unwrap();
        for kappa in [one(), cx(0.7, 0.0), cx(1.3, 0.2)] {
            let d = l.commutator_defect(rand_c(&mut rng), rand_c(&mut rng), kappa).unwrap();
            assert!(d < 1e-11, "N = {n}, κ = {kappa}: commutator {d:e}");
        }
    }
}

#[test]
fn transfer_preserves_weight_sectors() {
    for n in 1..=5 {
        let l = Lattice::new(n, cx(0.2, 1.0)).unwrap();
        assert!(l.sector_leakage(cx(0.37, -0.2), Normalization::Plain).unwrap() < 1e-13);
        assert!(l.sector_leakage(cx(0.0, 0.0), Normalization::Rescaled).unwrap() < 1e-13);
    }
}

#[test]
fn sector_enumeration() {
    for n in 1..=6 {
        let sectors = WeightSector::all(n).unwrap();
        let total: usize = sectors.iter().map(|s| s.len()).sum();
        assert_eq!(total, 3usize.pow(n as u32));
        for s in &sectors {
            for (p, &idx) in s.states.iter().enumerate() {
                assert_eq!(su3_lattice::basis::counts(idx, n), s.counts);
                assert_eq!(s.position(idx), Some(p));
            }
        }
    }
    assert_eq!(WeightSector::new([2, 2, 2]).unwrap().len(), 90);
    assert!(matches!(WeightSector::new([4, 2, 1]), Err(LatticeError::Size { .. })));
    assert!(WeightSector::of_bethe(4, 1, 2).is_err());
}

#[test]
fn vacuum_sector_eigenvalue() {
    for n in 1..=6 {
        let l = Lattice::new(n, cx(0.0, 1.0)).unwrap();
        let w = cx(0.45, 0.3);
        let s = sector_spectrum(&l, w, &WeightSector::new([n, 0, 0]).unwrap(), one()).unwrap();
        let expect = ((w + l.c) / w).powu(n as u32) + 2.0;
        assert_eq!(s.values.len(), 1);
        assert!((s.values[0] - expect).norm() < 1e-12 * expect.norm());
    }
}

#[test]
fn sector_spectra_are_eigenpairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 2..=5 {
        let l = Lattice::new(n, cx(0.0, 1.0)).unwrap();
        for s in WeightSector::all(n).unwrap() {
            for kappa in [one(), cx(0.7, 0.0)] {
                let w = rand_c(&mut rng);
                let dense = sector_spectrum(&l, w, &s, kappa).unwrap();
                let res = residual(&l, w, &dense, kappa).unwrap();
                assert!(res < 1e-9, "N = {n}, sector {:?}: residual {res:e}", s.counts);
            }
        }
    }
}

#[test]
fn twisted_spectrum_at_unit_twist() {
    let l = Lattice::new(4, cx(0.0, 1.0)).unwrap();
    let w = cx(0.3, -0.6);
    let s = WeightSector::new([2, 1, 1]).unwrap();
    let plain = l.monodromy(w, Normalization::Plain).unwrap();
    let direct = plain.entry(0, 0) + plain.entry(1, 1) + plain.entry(2, 2);
    assert!(max_abs(&(plain.transfer(one()) - direct)) < 1e-15);
    let a = sector_spectrum(&l, w, &s, one()).unwrap();
    for z in &a.values {
        let b = sector_spectrum(&l, w, &s, cx(1.0, 0.0)).unwrap();
        let (_, err) = b.closest(*z).unwrap();
        assert!(err < 1e-12);
    }
}

#[test]
fn shift_structure_at_zero() {
    for n in 1..=5 {
        for c in couplings() {
            let l = Lattice::new(n, c).unwrap();
            let check = l.shift_structure().unwrap();
            assert!(check.shift_defect < 1e-13, "N = {n}: {check:?}");
            assert!(check.power_defect < 1e-12, "N = {n}: {check:?}");
        }
    }
}

#[test]
fn vacuum_local_elements() {
    let mut vac = Vector::zeros(27);
    vac[0] = one();
    for m in 1..=3 {
        assert_eq!(local_element(3, m, 1, 1, &vac, &vac).unwrap(), one());
        assert_eq!(local_element(3, m, 2, 2, &vac, &vac).unwrap(), cx(0.0, 0.0));
    }
    assert!(local_element(3, 4, 1, 1, &vac, &vac).is_err());
    assert!(local_element(3, 1, 0, 1, &vac, &vac).is_err());
}

#[test]
fn elementary_units_resolve_identity_on_eigenvectors() {
    let l = Lattice::new(4, cx(0.0, 1.0)).unwrap();
    let dense = sector_spectrum(&l, cx(0.2, 0.9), &WeightSector::new([2, 1, 1]).unwrap(), one()).unwrap();
    for i in 0..dense.values.len() {
        let psi = dense.embed(i);
        for m in 1..=4 {
            let total: Complex64 = (1..=3).map(|e| local_element(4, m, e, e, &psi, &psi).unwrap()).sum();
            assert!((total - one()).norm() < 1e-13);
        }
    }
}

#[test]
fn local_element_matches_embedding() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let n = 3;
    let bra = Vector::from_fn(27, |_, _| rand_c(&mut rng));
    let ket = Vector::from_fn(27, |_, _| rand_c(&mut rng));
    for m in 1..=n {
        for e in 1..=3 {
            for e2 in 1..=3 {
                let direct = local_element(n, m, e, e2, &bra, &ket).unwrap();
                let dense = (bra.adjoint() * embedded_unit(n, m, e, e2).unwrap() * &ket)[(0, 0)];
                assert!((direct - dense).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn inverse_scattering_of_local_units() {
    for n in 1..=4 {
        for c in couplings() {
            let l = Lattice::new(n, c).unwrap();
            let d = gen_sol_t_defect(&l).unwrap();
            assert!(d < 1e-10, "N = {n}, c = {c}: defect {d:e}");
        }
    }
}

#[test]
fn inverse_scattering_on_sector_eigenvectors() {
    let l = Lattice::new(4, cx(0.0, 1.0)).unwrap();
    let dense = sector_spectrum(&l, cx(0.15, 0.4), &WeightSector::new([2, 2, 0]).unwrap(), one()).unwrap();
    for m in 1..=4 {
        let scattered = inverse_scattering_unit(&l, m, 2, 2).unwrap();
        for i in 0..dense.values.len() {
            for j in 0..dense.values.len() {
                let (bra, ket) = (dense.embed(i), dense.embed(j));
                let lhs = local_element(4, m, 2, 2, &bra, &ket).unwrap();
                let rhs = (bra.adjoint() * &scattered * &ket)[(0, 0)];
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }
}
