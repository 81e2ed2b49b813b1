//! Property tests over randomly generated states, Hamiltonians and channels.
//!
//! States, Hamiltonians and channels come from the seeded generators in
//! `oracle`; proptest drives the seeds and the scalar parameters.

use modeflow::bounds::{
    cptp_bound, qubit_symmetric_bound, qubit_thermal_bound, symmetric_bound, thermal_bound,
    BoundQuery,
};
use modeflow::channels::{
    check_gibbs_preserving, check_symmetric, convex_combine, induced_stochastic, shift_channel,
    ShiftDirection,
};
use modeflow::linalg;
use modeflow::oracle::{
    qubit_kraus_completion, random_hamiltonian, random_state, random_symmetric_channel,
    random_thermal_channel, rng_from_seed,
};
use modeflow::qstate::{
    dephase, gibbs_probabilities, gibbs_state, mode_decompose, mode_decompose_operator, mode_l1,
    time_translate, DensityMatrix, HamiltonianSpec, InverseTemperature, StateFile,
};
use modeflow::regions::{guaranteed_region, symmetric_region, thermal_region, triangle_region};
use modeflow::thermo::{
    extremal_incoherent_qubit, guaranteed_lambda, guaranteed_sigma, transition_bound,
    EnergyDistribution,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn system(seed: u64, d: usize) -> (HamiltonianSpec, DensityMatrix) {
    let mut rng = rng_from_seed(seed);
    let h = random_hamiltonian(&mut rng, d, !seed.is_multiple_of(3));
    let rho = random_state(&mut rng, d);
    (h, rho)
}

fn beta_strategy() -> impl Strategy<Value = InverseTemperature> {
    prop_oneof![
        1 => Just(InverseTemperature::zero()),
        8 => (0.01f64..4.0).prop_map(|b| InverseTemperature::new(b).unwrap()),
        1 => Just(InverseTemperature::Infinite),
    ]
}

/// Qubit `(p, q, r)` with `q` strictly inside the reachable interval.
fn qubit_transition() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.02f64..0.98, 0.51f64..0.98, 0.0f64..=1.0)
        .prop_filter("p = r", |(p, _, r)| (p - r).abs() > 1e-3)
        .prop_map(|(p, r, t)| {
            let qt = extremal_incoherent_qubit(p, r).unwrap();
            (p, p + t * (qt - p), r)
        })
        .prop_filter("q in (0,1)", |(_, q, _)| *q > 1e-6 && *q < 1.0 - 1e-6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn modes_reconstruct_the_state(seed in any::<u64>(), d in 2usize..=6) {
        let (h, rho) = system(seed, d);
        let md = mode_decompose(&rho, &h).unwrap();
        prop_assert!(linalg::max_abs_diff(&md.reconstruct(), rho.matrix()) <= 1e-14);
        prop_assert!((mode_l1(&md, 0.0) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn modes_pick_up_their_phase(seed in any::<u64>(), d in 2usize..=5, t in -20.0f64..20.0) {
        let (h, rho) = system(seed, d);
        let before = mode_decompose(&rho, &h).unwrap();
        let after = mode_decompose(&time_translate(&rho, &h, t).unwrap(), &h).unwrap();
        for (w, x) in before.iter() {
            let expected = x * Complex64::from_polar(1.0, -w * t);
            prop_assert!(linalg::max_abs_diff(after.get(w).unwrap(), &expected) <= 1e-12);
        }
    }

    #[test]
    fn dephasing_is_idempotent(seed in any::<u64>(), d in 2usize..=5) {
        let (h, rho) = system(seed, d);
        let once = dephase(&rho, &h).unwrap();
        prop_assert_eq!(dephase(&once, &h).unwrap(), once);
    }

    #[test]
    fn gibbs_state_is_stationary(seed in any::<u64>(), d in 2usize..=5, beta in beta_strategy(), t in -10.0f64..10.0) {
        let (h, _) = system(seed, d);
        let g = gibbs_state(&h, beta);
        prop_assert!(linalg::max_abs_diff(time_translate(&g, &h, t).unwrap().matrix(), g.matrix()) <= 1e-15);
        prop_assert_eq!(dephase(&g, &h).unwrap(), g);
    }

    #[test]
    fn state_files_roundtrip(seed in any::<u64>(), d in 2usize..=4) {
        let (h, rho) = system(seed, d);
        let json = StateFile::new(&h, &rho).to_json().unwrap();
        let (h2, rho2) = StateFile::parse(&json).unwrap();
        prop_assert_eq!(h2, h);
        prop_assert!(linalg::max_abs_diff(rho2.matrix(), rho.matrix()) <= 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn symmetric_channels_transport_modes(seed in any::<u64>(), d in 2usize..=4) {
        let (h, rho) = system(seed, d);
        let ch = random_symmetric_channel(&h, seed);
        prop_assert!(check_symmetric(&ch).holds);
        let out = ch.apply(&rho).unwrap();
        let md_in = mode_decompose(&rho, &h).unwrap();
        let md_out = mode_decompose(&out, &h).unwrap();
        for (w, x) in md_in.iter() {
            let mapped = ch.apply_operator(x).unwrap();
            prop_assert!(linalg::max_abs_diff(&mapped, md_out.get(w).unwrap()) <= 1e-10);
            prop_assert!(mode_l1(&md_out, w) <= mode_l1(&md_in, w) + 1e-10);
            prop_assert!(linalg::trace_norm(&mapped) <= linalg::trace_norm(x) + 1e-10);
        }
        // Dominance chain with the channel's own transition matrix.
        let base = BoundQuery::new(rho, h.clone(), 0, 0).unwrap()
            .with_stochastic(induced_stochastic(&ch).unwrap()).unwrap();
        for n in 0..d {
            for m in 0..d {
                let q = base.at(n, m).unwrap();
                let (s, full) = (symmetric_bound(&q).unwrap(), cptp_bound(&q).unwrap());
                prop_assert!(out.entry(n, m).norm() <= s + 1e-10);
                prop_assert!(s <= full + 1e-10);
            }
        }
    }

    #[test]
    fn thermal_channels_respect_every_bound(
        seed in any::<u64>(), d in 2usize..=4, beta in beta_strategy(), bath in 2usize..=4,
    ) {
        let (h, rho) = system(seed, d);
        let ch = random_thermal_channel(&h, beta, bath, seed).unwrap();
        prop_assert!(check_symmetric(&ch).violation <= 1e-9);
        prop_assert!(check_gibbs_preserving(&ch, beta).unwrap().violation <= 1e-9);
        let lam = induced_stochastic(&ch).unwrap();
        let r = gibbs_probabilities(&h, beta);
        for (l, v) in lam.apply(&r).iter().enumerate() {
            prop_assert!((v - r[l]).abs() <= 1e-10);
        }
        for k in 0..d {
            for l in 0..d {
                prop_assert!(lam.get(l, k) <= transition_bound(&h, beta, k, l).unwrap() + 1e-10);
            }
        }
        let out = ch.apply(&rho).unwrap();
        let base = BoundQuery::new(rho, h.clone(), 0, 0).unwrap().with_beta(beta);
        for n in 0..d {
            for m in 0..d {
                prop_assert!(out.entry(n, m).norm() <= thermal_bound(&base.at(n, m).unwrap()).unwrap() + 1e-10);
            }
        }
    }

    #[test]
    fn mixtures_stay_in_class(seed in any::<u64>(), beta in beta_strategy(), w in 0.0f64..=1.0) {
        let (h, _) = system(seed, 3);
        let a = random_thermal_channel(&h, beta, 2, seed).unwrap();
        let b = random_thermal_channel(&h, beta, 3, seed.wrapping_add(1)).unwrap();
        let mix = convex_combine(&a, &b, w).unwrap();
        prop_assert!(check_symmetric(&mix).violation <= 1e-9);
        prop_assert!(check_gibbs_preserving(&mix, beta).unwrap().violation <= 1e-9);
    }

    #[test]
    fn hot_thermal_bound_is_the_mode_norm(seed in any::<u64>(), d in 2usize..=5) {
        let (h, rho) = system(seed, d);
        let md = mode_decompose_operator(rho.matrix(), &h).unwrap();
        let base = BoundQuery::new(rho, h.clone(), 0, 0).unwrap().with_beta(InverseTemperature::zero());
        for n in 0..d {
            for m in 0..d {
                let b = thermal_bound(&base.at(n, m).unwrap()).unwrap();
                prop_assert!((b - mode_l1(&md, h.frequency(n, m))).abs() <= 1e-15);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn qubit_thermal_bound_sits_inside_symmetric((p, q, r) in qubit_transition(), frac in 0.0f64..=1.0) {
        let c = frac * (p * (1.0 - p)).sqrt();
        if let Ok(t) = qubit_thermal_bound(p, q, r, c) {
            prop_assert!(t <= qubit_symmetric_bound(p, q, c).unwrap() + 1e-12);
            let lam = guaranteed_lambda(p, q, r).unwrap();
            prop_assert!(lam * c <= t + 1e-12);
        }
    }

    #[test]
    fn kraus_completion_matches_closed_form((p, q, r) in qubit_transition()) {
        if let Ok(lam) = modeflow::bounds::qubit_thermal_stochastic(p, q, r) {
            let (t, _) = qubit_kraus_completion(&lam).unwrap();
            prop_assert!((t - qubit_thermal_bound(p, q, r, 1.0).unwrap()).abs() <= 1e-8);
        }
    }

    #[test]
    fn lambda_shrinks_towards_the_extreme(p in 0.02f64..0.98, r in 0.51f64..0.98, s in 0.0f64..1.0, t in 0.0f64..1.0) {
        prop_assume!((p - r).abs() > 1e-3);
        let qt = extremal_incoherent_qubit(p, r).unwrap();
        let (near, far) = (s.min(t), s.max(t));
        let q1 = p + near * (qt - p);
        let q2 = p + far * (qt - p);
        prop_assume!(q2 > 0.0 && q2 < 1.0 && q1 > 0.0 && q1 < 1.0);
        prop_assert!(guaranteed_lambda(p, q2, r).unwrap() <= guaranteed_lambda(p, q1, r).unwrap() + 1e-12);
    }

    #[test]
    fn guaranteed_state_is_reachable((p, q, r) in qubit_transition(), frac in 0.0f64..=1.0) {
        let c = frac * (p * (1.0 - p)).sqrt();
        let h = HamiltonianSpec::qubit(1.0).unwrap();
        let beta = InverseTemperature::from_ground_occupation(r, 1.0).unwrap();
        let rho = DensityMatrix::qubit(p, Complex64::new(c, 0.0)).unwrap();
        let sigma = guaranteed_sigma(&rho, &h, beta, &EnergyDistribution::qubit(q, h.clone()).unwrap()).unwrap();
        prop_assert!((sigma.entry(0, 0).re - q).abs() <= 1e-12);
        if let Ok(t) = qubit_thermal_bound(p, q, r, c) {
            prop_assert!(sigma.entry(0, 1).norm() <= t + 1e-12);
        }
    }

    #[test]
    fn regions_nest(p in 0.05f64..0.95, frac in 0.0f64..=1.0, r in 0.51f64..0.99) {
        prop_assume!((p - r).abs() > 1e-3);
        let c = frac * (p * (1.0 - p)).sqrt();
        let sym = symmetric_region(p, c, 41).unwrap();
        let th = thermal_region(p, c, r, 41).unwrap();
        let gu = guaranteed_region(p, c, r, 41).unwrap();
        for s in &th.samples {
            prop_assert!(s.d <= sym.d_at(s.q).unwrap() + 1e-12);
            if let Some(g) = gu.d_at(s.q) {
                prop_assert!(g <= s.d + 1e-12);
            }
        }
        // The state itself is a triangle vertex and a thermal boundary point.
        let tri = triangle_region(p, c, r).unwrap();
        for v in &tri.samples {
            if (v.q - p).abs() < 1e-15 {
                prop_assert!(v.d <= qubit_thermal_bound(p, p, r, c).unwrap() + 1e-12);
            } else {
                prop_assert_eq!(v.d, 0.0);
            }
        }
    }
}

#[test]
fn shift_cycle_converges_to_boltzmann_factor() {
    let beta = InverseTemperature::new(0.5).unwrap();
    let target = (-0.5f64).exp();
    let mut last = f64::INFINITY;
    for n in [5, 10, 20] {
        let cycle = shift_channel(ShiftDirection::Down, beta, 1.0, n)
            .unwrap()
            .then(&shift_channel(ShiftDirection::Up, beta, 1.0, n).unwrap())
            .unwrap();
        let y = cycle.apply_operator(&linalg::ket_bra(3, 3, 2, 1)).unwrap();
        let err = (y[(2, 1)].norm() - target).abs();
        assert!(err < last, "n = {n}: {err} !< {last}");
        last = err;
    }
    assert!(last < 1e-3);
}
