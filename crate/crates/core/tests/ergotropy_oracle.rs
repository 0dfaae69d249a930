//! Ergotropy against brute-force unitary work extraction.

mod common;

use common::*;
use nalgebra::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use star_battery::dynamics::Hamiltonian;
use star_battery::{ergotropy, passive_state, DensityMatrix};

fn ginibre(rng: &mut StdRng, d: usize) -> M {
    M::from_fn(d, d, |_, _| Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

fn random_state(rng: &mut StdRng, d: usize) -> M {
    let g = ginibre(rng, d);
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    rho / tr
}

/// Haar unitary from the QR of a Ginibre matrix with fixed diagonal phases.
fn haar(rng: &mut StdRng, d: usize) -> M {
    let qr = ginibre(rng, d).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = M::from_diagonal(&r.diagonal().map(|z| if z.norm() > 0.0 { z / z.norm() } else { c(1.0) }));
    q * phases
}

#[test]
fn no_random_unitary_beats_the_ergotropy() {
    let mut rng = StdRng::seed_from_u64(7);
    for instance in 0..50 {
        let d = 2 + instance % 3;
        let energies: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..2.0)).collect();
        let h = Hamiltonian::diagonal(&energies);
        let rho = random_state(&mut rng, d);
        let state = DensityMatrix::new(vec![d], rho.clone()).unwrap();
        let w = ergotropy(&state, &h).unwrap();

        let h_m = h.matrix().clone();
        let energy = expect(&rho, &h_m);
        // passive energy: sorted populations against sorted energies
        let mut pops = hermitian_eigenvalues(&rho);
        pops.sort_by(|a, b| b.total_cmp(a));
        let mut levels = energies.clone();
        levels.sort_by(f64::total_cmp);
        let passive: f64 = pops.iter().zip(&levels).map(|(p, e)| p * e).sum();
        assert!((w - (energy - passive)).abs() < 1e-12, "instance {instance}");

        let work = |u: &M| energy - expect(&conj(u, &rho), &h_m);
        let (mut best_u, mut best) = (M::identity(d, d), 0.0);
        for _ in 0..10_000 {
            let u = haar(&mut rng, d);
            let extracted = work(&u);
            assert!(extracted <= w + 1e-12, "instance {instance}: sample {extracted} > {w}");
            if extracted > best {
                (best_u, best) = (u, extracted);
            }
        }
        // climb from the best sample along the commutator direction i[H, UρU†]
        let id = M::identity(d, d);
        let mut step = 0.5;
        for _ in 0..5_000 {
            let sigma = conj(&best_u, &rho);
            let grad = (&h_m * &sigma - &sigma * &h_m) * Complex::new(0.0, 1.0);
            let mut moved = false;
            for sign in [1.0, -1.0] {
                let ik = &grad * Complex::new(0.0, 0.5 * sign * step);
                let rotation = (&id - &ik).try_inverse().unwrap() * (&id + &ik);
                let candidate = rotation * &best_u;
                let extracted = work(&candidate);
                assert!(extracted <= w + 1e-12, "instance {instance}: refined {extracted} > {w}");
                if extracted > best {
                    (best_u, best, moved) = (candidate, extracted, true);
                    break;
                }
            }
            step = if moved { step * 1.2 } else { step * 0.5 };
            if step < 1e-12 {
                break;
            }
        }
        assert!(w - best < 1e-9, "instance {instance}: search reached {best} of {w}");
    }
}

#[test]
fn passive_state_is_unitarily_equivalent_and_ordered() {
    let mut rng = StdRng::seed_from_u64(11);
    for d in 2..=4 {
        let energies: Vec<f64> = (0..d).map(|k| k as f64 * 0.7).collect();
        let h = Hamiltonian::diagonal(&energies);
        let state = DensityMatrix::new(vec![d], random_state(&mut rng, d)).unwrap();
        let p = passive_state(&state, &h).unwrap();
        let mut a = hermitian_eigenvalues(state.matrix());
        let mut b = hermitian_eigenvalues(p.matrix());
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        let pops: Vec<f64> = (0..d).map(|k| p.matrix()[(k, k)].re).collect();
        assert!(pops.windows(2).all(|w| w[0] >= w[1] - 1e-12));
    }
}
