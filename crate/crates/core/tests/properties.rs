mod common;

use common::*;
use nalgebra::Complex;
use proptest::prelude::*;
use star_battery::dynamics::{doubled_magnetization, evolve_full, Hamiltonian};
use star_battery::{
    dephase, evolve_exact, passive_state, quantum_discord, DensityMatrix, DiscordOptions, SectorState,
};

fn state_from(entries: &[f64], d: usize) -> DensityMatrix<f64> {
    let g = M::from_fn(d, d, |r, col| Complex::new(entries[2 * (r * d + col)], entries[2 * (r * d + col) + 1]));
    let rho = &g * g.adjoint() + M::identity(d, d) * c(1e-3);
    let tr = rho.trace();
    DensityMatrix::new(vec![2; d.trailing_zeros() as usize], rho / tr).unwrap()
}

fn magnetization(rho: &DensityMatrix<f64>) -> f64 {
    let m = doubled_magnetization(rho.dims());
    (0..rho.dim()).map(|k| rho.matrix()[(k, k)].re * m[k] as f64).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn total_magnetization_is_conserved(n in 1usize..5, entries in prop::collection::vec(-1.0f64..1.0, 2 * 1024), theta in 0.0f64..7.0) {
        let d = 1usize << (n + 1);
        let rho = state_from(&entries[..2 * d * d], d);
        let out = evolve_full(&rho, theta).unwrap();
        prop_assert!((magnetization(&out) - magnetization(&rho)).abs() < 1e-12);
    }

    #[test]
    fn evolution_keeps_trace_purity_and_positivity(n in 1usize..7, pb in -1.0f64..1.0, pc in -1.0f64..1.0, theta in 0.0f64..7.0) {
        let start = SectorState::<f64>::product(n, pb, pc).unwrap();
        let out = evolve_exact(&start, theta);
        prop_assert!((out.trace() - 1.0).abs() < 1e-12);
        prop_assert!((out.purity() - start.purity()).abs() < 1e-12);
        prop_assert!(out.expand().unwrap().validate().is_ok());
    }

    #[test]
    fn dephasing_is_idempotent(n in 1usize..6, pb in -1.0f64..1.0, pc in -1.0f64..1.0, theta in 0.0f64..7.0) {
        let s = evolve_exact(&SectorState::<f64>::product(n, pb, pc).unwrap(), theta);
        let once = dephase(&s);
        prop_assert!(dephase(&once).max_abs_diff(&once) == 0.0);
        let full = s.expand().unwrap();
        let f1 = dephase(&full);
        prop_assert!(dephase(&f1).max_abs_diff(&f1) == 0.0);
        prop_assert!(f1.max_abs_diff(&once.expand().unwrap()) < 1e-12);
    }

    #[test]
    fn passive_state_has_sorted_populations(entries in prop::collection::vec(-1.0f64..1.0, 32), e1 in 0.0f64..3.0, e2 in 0.0f64..3.0, e3 in 0.0f64..3.0) {
        let rho = state_from(&entries, 4);
        let energies = [0.0, e1, e2, e3];
        let h = Hamiltonian::diagonal(&energies);
        let p = passive_state(&rho, &h).unwrap();
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));
        let pops: Vec<f64> = order.iter().map(|&k| p.matrix()[(k, k)].re).collect();
        prop_assert!(pops.windows(2).all(|w| w[0] >= w[1] - 1e-12));
        prop_assert!((p.purity() - rho.purity()).abs() < 1e-12);
    }

    #[test]
    fn discord_is_non_negative(entries in prop::collection::vec(-1.0f64..1.0, 32)) {
        let rho = state_from(&entries, 4);
        let d = quantum_discord(&rho, &DiscordOptions::default()).unwrap();
        prop_assert!(d.value >= 0.0);
        prop_assert!(d.raw >= -1e-9, "raw discord {}", d.raw);
    }
}
