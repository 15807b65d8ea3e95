use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use su3_chain::seeds::quantum_number_seeds;
use su3_chain::*;
use su3_lattice::{local_element, sector_spectrum, Lattice, Normalization, Vector, WeightSector};

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn one() -> Complex64 {
    cx(1.0, 0.0)
}

fn xxx() -> Complex64 {
    cx(0.0, 1.0)
}

/// A spectral point at distance ≥ 0.2|c| from every root and from 0, −c.
fn random_w(rng: &mut ChaCha8Rng, c: Complex64, avoid: &[&BetheRoots]) -> Complex64 {
    loop {
        let w = cx(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)) * c.norm();
        let mut bad = vec![cx(0.0, 0.0), -c];
        for r in avoid {
            bad.extend(r.u.iter().chain(&r.v).flat_map(|&x| [x, x - c, x + c]));
        }
        if bad.iter().all(|b| (w - b).norm() > 0.2 * c.norm()) {
            return w;
        }
    }
}

const SECTORS: [(usize, usize); 7] = [(0, 0), (1, 0), (2, 0), (3, 0), (1, 1), (2, 1), (1, 2)];

#[test]
fn r1_at_one_site() {
    let m = ChainModel::new(1, cx(1.0, 0.0)).unwrap();
    assert!((m.r1(m.c).unwrap() - cx(2.0, 0.0)).norm() < 1e-15);
    assert!(matches!(m.r1(cx(0.0, 0.0)), Err(ChainError::Pole(_))));
}

#[test]
fn model_functions_match_vacuum_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=4 {
        for c in [xxx(), cx(1.0, 0.0), cx(0.4, -0.9)] {
            let model = ChainModel::new(n, c).unwrap();
            let lat = Lattice::new(n, c).unwrap();
            for _ in 0..3 {
                let w = random_w(&mut rng, c, &[]);
                let mono = lat.monodromy(w, Normalization::Plain).unwrap();
                let mut vac = Vector::zeros(lat.dim());
                vac[0] = one();
                let lambda = |j: usize| (mono.entry(j, j) * &vac)[0];
                let l2 = lambda(1);
                assert!((l2 - model.lambda2(w)).norm() < 1e-13);
                assert!((lambda(0) / l2 - model.r1(w).unwrap()).norm() < 1e-12 * model.r1(w).unwrap().norm());
                assert!((lambda(2) / l2 - model.r3(w)).norm() < 1e-13);
            }
        }
    }
}

#[test]
fn single_magnon_on_two_sites() {
    for c in [xxx(), cx(1.0, 0.0), cx(-0.3, 0.7)] {
        let model = ChainModel::new(2, c).unwrap();
        let r = solve_bethe(&model, 1, 0, &[c * cx(-0.4, 0.1)], &[]).unwrap();
        assert!((r.u[0] + c / 2.0).norm() < 1e-12, "root {}", r.u[0]);
        assert!(r.residual < 1e-12);
    }
}

#[test]
fn solver_rejects_bad_input() {
    let model = ChainModel::new(3, xxx()).unwrap();
    assert!(matches!(solve_bethe(&model, 3, 1, &[cx(0.1, 0.0); 3], &[cx(0.2, 0.0)]), Err(ChainError::Invalid(_))));
    assert!(matches!(solve_bethe(&model, 1, 0, &[], &[]), Err(ChainError::Invalid(_))));
    assert!(matches!(solve_bethe(&model, 1, 0, &[cx(f64::NAN, 0.0)], &[]), Err(ChainError::Invalid(_))));
    assert!(ChainModel::new(0, xxx()).is_err());
}

#[test]
fn merged_seeds_do_not_return_a_state() {
    let model = ChainModel::new(4, xxx()).unwrap();
    let seed = cx(0.2, -0.5);
    let r = solve_bethe(&model, 2, 0, &[seed, seed], &[]);
    assert!(
        matches!(r, Err(ChainError::Collision { .. }) | Err(ChainError::NoConvergence { .. }) | Err(ChainError::Pole(_))),
        "{r:?}"
    );
}

#[test]
fn states_are_on_shell_and_stable_under_reseeding() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 2..=6 {
        let model = ChainModel::new(n, xxx()).unwrap();
        for (a, b) in SECTORS {
            if a + b > n {
                continue;
            }
            for s in enumerate_states(&model, a, b, &[]).unwrap() {
                assert!(bethe_defect(&model, &s).unwrap() < 1e-12);
                let jitter = |xs: &[Complex64], rng: &mut ChaCha8Rng| -> Vec<Complex64> {
                    xs.iter().map(|x| x + cx(rng.gen_range(-1e-3..1e-3), rng.gen_range(-1e-3..1e-3))).collect()
                };
                let su = jitter(&s.u, &mut rng);
                let sv = jitter(&s.v, &mut rng);
                let again = solve_bethe(&model, a, b, &su, &sv).unwrap();
                assert!(again.same_state(&s, 1e-10), "N = {n} ({a},{b}) moved");
            }
        }
    }
}

#[test]
fn only_dominant_weights_have_untwisted_states() {
    for (n, c) in (2..=6).flat_map(|n| [(n, xxx()), (n, cx(1.0, 0.0))]) {
        let model = ChainModel::new(n, c).unwrap();
        for (a, b) in SECTORS {
            if a + b > n {
                continue;
            }
            let states = enumerate_states(&model, a, b, &[]).unwrap();
            if !model.dominant(a, b) {
                assert!(states.is_empty(), "N = {n} ({a},{b}) has {} states", states.len());
            } else {
                assert!(!states.is_empty(), "N = {n} ({a},{b}) found no state");
            }
        }
    }
}

#[test]
fn quantum_number_scan_covers_the_single_magnon_band() {
    for n in 2..=6 {
        let model = ChainModel::new(n, xxx()).unwrap();
        assert!(quantum_number_seeds(&model, 1, 0).len() >= n - 1);
        // One highest-weight magnon state per nonzero momentum.
        assert_eq!(enumerate_states(&model, 1, 0, &[]).unwrap().len(), n - 1);
    }
}

#[test]
fn empty_state_eigenvalue() {
    let model = ChainModel::new(3, cx(0.5, 0.5)).unwrap();
    let empty = BetheRoots { u: vec![], v: vec![], residual: 0.0 };
    let w = cx(0.3, -1.2);
    let tau = transfer_eigenvalue(w, &empty, &model, false).unwrap();
    assert!((tau - (model.r1(w).unwrap() + 1.0 + model.r3(w))).norm() < 1e-14);
}

#[test]
fn eigenvalue_has_no_pole_at_roots() {
    let model = ChainModel::new(5, xxx()).unwrap();
    for (a, b) in [(1, 0), (2, 0), (2, 1)] {
        for s in enumerate_states(&model, a, b, &[]).unwrap() {
            for &x in s.u.iter().chain(&s.v) {
                // (1/2πi)∮τ on a small circle, trapezoidal and so spectrally accurate.
                let (r, k) = (1e-3, 64);
                let mut residue = cx(0.0, 0.0);
                let mut size: f64 = 0.0;
                for j in 0..k {
                    let z = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / k as f64);
                    let tau = transfer_eigenvalue(x + z, &s, &model, false).unwrap();
                    residue += tau * z / k as f64;
                    size = size.max(tau.norm());
                }
                assert!(residue.norm() < 1e-12 * size, "residue {residue} at {x}");
            }
        }
    }
}

#[test]
fn eigenvalues_are_in_the_dense_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 2..=6 {
        for c in [xxx(), cx(1.0, 0.0)] {
            let model = ChainModel::new(n, c).unwrap();
            let lat = Lattice::new(n, c).unwrap();
            for (a, b) in SECTORS {
                if a + b > n || b > a {
                    continue;
                }
                let sector = WeightSector::of_bethe(n, a, b).unwrap();
                let states = enumerate_states(&model, a, b, &[]).unwrap();
                let refs: Vec<&BetheRoots> = states.iter().collect();
                for _ in 0..5 {
                    let w = random_w(&mut rng, c, &refs);
                    let dense = sector_spectrum(&lat, w, &sector, one()).unwrap();
                    for s in &states {
                        let tau = transfer_eigenvalue(w, s, &model, false).unwrap();
                        let (_, err) = dense.closest(tau).unwrap();
                        assert!(err < 1e-9, "N = {n} ({a},{b}) c = {c}: {err:e}");
                    }
                }
            }
        }
    }
}

#[test]
fn twisted_eigenvalues_are_in_the_dense_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for n in 2..=6 {
        let model = ChainModel::new(n, xxx()).unwrap();
        let lat = Lattice::new(n, model.c).unwrap();
        for (a, b) in SECTORS {
            if a + b > n || b > a {
                continue;
            }
            let sector = WeightSector::of_bethe(n, a, b).unwrap();
            let base = enumerate_states(&model, a, b, &[]).unwrap();
            for kappa in [cx(0.7, 0.0), cx(1.3, 0.0)] {
                let twisted = model.with_kappa(kappa);
                let mut states: Vec<BetheRoots> =
                    base.iter().map(|s| continue_in_kappa(&model, s, kappa, 30).unwrap()).collect();
                states.extend(enumerate_states(&twisted, a, b, &[]).unwrap());
                let refs: Vec<&BetheRoots> = states.iter().collect();
                for _ in 0..5 {
                    let w = random_w(&mut rng, model.c, &refs);
                    let dense = sector_spectrum(&lat, w, &sector, kappa).unwrap();
                    for s in &states {
                        assert!(bethe_defect(&twisted, s).unwrap() < 1e-12);
                        let tau = transfer_eigenvalue(w, s, &twisted, true).unwrap();
                        let (_, err) = dense.closest(tau).unwrap();
                        assert!(err < 1e-9, "N = {n} ({a},{b}) κ = {kappa}: {err:e}");
                    }
                }
            }
        }
    }
}

#[test]
fn shift_eigenvalue_matches_rescaled_transfer_at_zero() {
    for n in 2..=5 {
        let model = ChainModel::new(n, xxx()).unwrap();
        let lat = Lattice::new(n, model.c).unwrap();
        for (a, b) in [(1, 0), (2, 1)] {
            let Ok(sector) = WeightSector::of_bethe(n, a, b) else { continue };
            let dense = sector_spectrum(&lat, cx(0.0, 0.0), &sector, one()).unwrap();
            for s in enumerate_states(&model, a, b, &[]).unwrap() {
                let t0 = rescaled_transfer_eigenvalue(cx(0.0, 0.0), &s, &model, false).unwrap();
                assert!(dense.closest(t0).unwrap().1 < 1e-12);
                // c^N times a phase: the eigenvalue of the cyclic shift.
                assert!((t0.norm() - model.c.norm().powi(n as i32)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn continuation_is_smooth() {
    let model = ChainModel::new(5, xxx()).unwrap();
    for s in enumerate_states(&model, 2, 1, &[]).unwrap() {
        let mut prev = s.clone();
        let mut prev_tau = rescaled_transfer_eigenvalue(cx(0.0, 0.0), &s, &model, true).unwrap();
        for k in 1..=10 {
            let kappa = cx(1.0 + 0.01 * k as f64, 0.0);
            let next = continue_in_kappa(&model.with_kappa(prev_kappa(k)), &prev, kappa, 1).unwrap();
            let jump = prev.u.iter().chain(&prev.v).zip(next.u.iter().chain(&next.v)).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            assert!(jump < 0.05, "roots jumped by {jump}");
            let tau = rescaled_transfer_eigenvalue(cx(0.0, 0.0), &next, &model.with_kappa(kappa), true).unwrap();
            assert!((tau - prev_tau).norm() < 0.05 * tau.norm());
            prev = next;
            prev_tau = tau;
        }
        let direct = continue_in_kappa(&model, &s, cx(1.1, 0.0), 10).unwrap();
        assert!(direct.same_state(&prev, 1e-10));
    }

    fn prev_kappa(k: usize) -> Complex64 {
        cx(1.0 + 0.01 * (k - 1) as f64, 0.0)
    }
}

fn states_with_lattice(n: usize, a: usize, b: usize) -> (ChainModel, Vec<BetheRoots>, Vec<Vector>) {
    let model = ChainModel::new(n, xxx()).unwrap();
    let lat = Lattice::new(n, model.c).unwrap();
    let states = enumerate_states(&model, a, b, &[]).unwrap();
    let w0 = cx(0.23, 0.61);
    let dense = sector_spectrum(&lat, w0, &WeightSector::of_bethe(n, a, b).unwrap(), one()).unwrap();
    let vectors = states
        .iter()
        .map(|s| {
            let (i, err) = dense.closest(transfer_eigenvalue(w0, s, &model, false).unwrap()).unwrap();
            assert!(err < 1e-10);
            assert!(dense.degeneracy(i).is_none(), "matched eigenvalue is degenerate");
            dense.embed(i)
        })
        .collect();
    (model, states, vectors)
}

#[test]
fn diagonal_form_factor_counts_color_two() {
    for n in 2..=5 {
        for (a, b) in [(0, 0), (1, 0), (2, 0), (2, 1)] {
            if !ChainModel::new(n, xxx()).unwrap().dominant(a, b) {
                continue;
            }
            let (model, states, vectors) = states_with_lattice(n, a, b);
            for (s, phi) in states.iter().zip(&vectors) {
                let family = KappaFamily::new(&model, s).unwrap();
                let ff = form_factors_e22(&family, s, Derivative::default()).unwrap();
                let norm = ff.norm.unwrap();
                let total: Complex64 = ff.values.iter().sum::<Complex64>() / norm;
                assert!((total - (a - b) as f64).norm() < 1e-8, "N = {n} ({a},{b}): Σ F/‖ψ‖² = {total}");
                // The general formula, differentiated per site without the diagonal shortcut.
                let (raw, spread) = su3_chain::qq2_numeric(&family, s, 1e-3).unwrap();
                assert!(spread < 1e-6);
                let scale = ff.values[0].norm().max(norm.norm() * 1e-3);
                for m in 1..=n {
                    assert!((raw[m - 1] - raw[0]).norm() < 1e-9 * scale, "m-dependence at m = {m}");
                    assert!((raw[m - 1] - ff.values[m - 1]).norm() < 1e-9 * scale);
                    let ed = local_element(n, m, 2, 2, phi, phi).unwrap();
                    assert!((ed - ff.values[m - 1] / norm).norm() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn analytic_and_numeric_derivatives_agree() {
    for n in 3..=5 {
        for (a, b) in [(1, 0), (2, 0), (2, 1)] {
            let model = ChainModel::new(n, xxx()).unwrap();
            let states = enumerate_states(&model, a, b, &[]).unwrap();
            for t in &states {
                let family = KappaFamily::new(&model, t).unwrap();
                for s in &states {
                    let scale = (bethe_norm(&model, t).unwrap() * bethe_norm(&model, s).unwrap()).norm().sqrt();
                    let num = form_factors_e22(&family, s, Derivative::default()).unwrap();
                    let ana = form_factors_e22(&family, s, Derivative::Analytic).unwrap();
                    assert!(num.step_spread < 1e-6);
                    for (x, y) in num.values.iter().zip(&ana.values) {
                        assert!((x - y).norm() < 1e-8 * y.norm().max(1e-3 * scale), "{x} vs {y}");
                    }
                }
            }
        }
    }
}

#[test]
fn off_diagonal_moduli_match_exact_diagonalization() {
    for n in 3..=5 {
        for (a, b) in [(1, 0), (2, 0), (2, 1)] {
            if !ChainModel::new(n, xxx()).unwrap().dominant(a, b) {
                continue;
            }
            let (model, states, vectors) = states_with_lattice(n, a, b);
            for i in 0..states.len() {
                for j in 0..states.len() {
                    if i == j {
                        continue;
                    }
                    let f = normalized_form_factors(&model, &states[i], &states[j], Derivative::default()).unwrap();
                    let sym = normalized_moduli(&model, &states[i], &states[j], Derivative::default()).unwrap();
                    for m in 1..=n {
                        let ed = local_element(n, m, 2, 2, &vectors[i], &vectors[j]).unwrap().norm();
                        let tol = 1e-7 * ed.max(1e-2);
                        assert!((f[m - 1].norm() - ed).abs() < tol, "N = {n} ({a},{b}) m = {m}: {} vs {ed}", f[m - 1].norm());
                        assert!((sym[m - 1] - ed).abs() < tol);
                    }
                }
            }
        }
    }
}

#[test]
fn form_factor_rejects_off_shell_and_mismatched_states() {
    let model = ChainModel::new(4, xxx()).unwrap();
    let s = enumerate_states(&model, 1, 0, &[]).unwrap();
    let mut off = s[0].clone();
    off.u[0] += 0.01;
    assert!(KappaFamily::new(&model, &off).is_err());
    let family = KappaFamily::new(&model, &s[0]).unwrap();
    assert!(form_factors_e22(&family, &off, Derivative::default()).is_err());
    let other = enumerate_states(&model, 2, 0, &[]).unwrap();
    assert!(form_factors_e22(&family, &other[0], Derivative::default()).is_err());
}

#[test]
fn root_bank_round_trip() {
    let model = ChainModel::twisted(4, xxx(), cx(1.3, 0.0)).unwrap();
    let states = enumerate_states(&model, 2, 1, &[]).unwrap();
    let bank: Vec<BankEntry> = states.iter().map(|s| BankEntry::new(&model, s)).collect();
    let json = bank_to_json(&bank).unwrap();
    let back = bank_from_json(&json).unwrap();
    assert_eq!(back, bank);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let first = &v[0];
    for key in ["N", "c", "kappa", "a", "b", "u", "v", "residual"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    assert_eq!(first["u"][0].as_array().unwrap().len(), 2);
    assert_eq!(back[0].model().unwrap(), model);
    assert!(back[0].roots().unwrap().same_state(&states[0], 0.0));
    assert!(bank_from_json("{").is_err());
}
