use proptest::prelude::*;
use stretchlab::potentials::*;

fn seed_strategy() -> impl Strategy<Value = SeedingSpec> {
    prop_oneof![
        (0.5f64..3.0).prop_map(|a| SeedingSpec::infinite_well(a).unwrap()),
        (0.3f64..3.0).prop_map(|w| SeedingSpec::harmonic(w).unwrap()),
    ]
}

/// Seed, level, and a plan cutting at one of that level's stationary points.
fn plan_strategy() -> impl Strategy<Value = (SeedingSpec, StretchPlan)> {
    (seed_strategy(), 0usize..5, any::<prop::sample::Index>(), 0.0f64..3.0).prop_map(|(seed, n, pick, l)| {
        let psi = seed.eigenpair(n).unwrap().wavefunction;
        let stationary = find_stationary_points(&psi).unwrap();
        let x = stationary[pick.index(stationary.len())];
        let plan = StretchPlan::new(&seed, n, &[(x, l)]).unwrap();
        (seed, plan)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn collapse_undoes_stretch((seed, plan) in plan_strategy()) {
        let v = stretch(&seed, &plan).unwrap();
        let back = match v.plateaus(plan.plateau_energy).first() {
            Some(&p) => collapse(&v, p, p.1 - p.0).unwrap(),
            None => v,
        };
        prop_assert!(back.approx_eq(&seed.potential().unwrap(), 1e-12));
    }

    #[test]
    fn stretching_keeps_nodes_norm_and_energy((seed, plan) in plan_strategy()) {
        let pair = stretch_wavefunction(&seed.eigenpair(plan.level).unwrap(), &plan).unwrap();
        prop_assert_eq!(pair.node_count, plan.level);
        prop_assert_eq!(pair.energy, seed.energy(plan.level));
        prop_assert!((pair.wavefunction.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn plateau_is_flat_at_the_level_energy((seed, plan) in plan_strategy()) {
        let v = stretch(&seed, &plan).unwrap();
        let psi = stretch_wavefunction(&seed.eigenpair(plan.level).unwrap(), &plan).unwrap().wavefunction;
        for (lo, hi) in v.plateaus(plan.plateau_energy) {
            let mid = 0.5 * (lo + hi);
            prop_assert_eq!(psi.derivative(mid), 0.0);
            prop_assert!(psi.value(mid) != 0.0);
            prop_assert!((psi.value(lo) - psi.value(hi)).abs() <= 1e-12 * psi.max_abs());
        }
    }

    #[test]
    fn stretched_state_solves_the_equation((seed, plan) in plan_strategy(), t in 0.0f64..1.0) {
        let v = stretch(&seed, &plan).unwrap();
        let pair = stretch_wavefunction(&seed.eigenpair(plan.level).unwrap(), &plan).unwrap();
        let (lo, hi) = pair.wavefunction.effective_domain();
        let x = lo + t * (hi - lo);
        let psi = &pair.wavefunction;
        prop_assume!(v.interior_breakpoints().iter().all(|b| (x - b).abs() > 1e-9));
        let r = psi.second_derivative(x) + 2.0 * (pair.energy - v.eval(x)) * psi.value(x);
        prop_assert!(r.abs() <= 1e-9 * (1.0 + pair.energy) * psi.max_abs(), "residual {r} at {x}");
    }

    #[test]
    fn json_round_trip((seed, plan) in plan_strategy()) {
        let v = stretch(&seed, &plan).unwrap();
        prop_assert_eq!(PiecewisePotential::from_json(&v.to_json()).unwrap(), v);
    }
}

#[test]
fn reverse_engineering_recovers_stretched_potentials() {
    let seed = SeedingSpec::infinite_well(1.0).unwrap();
    for (n, l) in [(0, 0.4), (2, 0.7), (4, 1.2)] {
        let plan = StretchPlan::central(&seed, n, l).unwrap();
        let v = stretch(&seed, &plan).unwrap();
        let psi = stretch_wavefunction(&seed.eigenpair(n).unwrap(), &plan).unwrap().wavefunction;
        let (lo, hi) = psi.domain();
        let pts = 601;
        let h = (hi - lo) / (pts - 1) as f64;
        let rebuilt = reverse_engineer(&psi.sampled_on(lo, hi, pts).unwrap(), plan.plateau_energy).unwrap();
        let junctions = v.interior_breakpoints();
        let mut checked = 0;
        for (x, val) in rebuilt.defined() {
            if junctions.iter().any(|b| (x - b).abs() <= 2.0 * h + 1e-12)
                || psi.value(x).abs() < 1e-3 * psi.max_abs()
                || x - lo <= 2.0 * h
                || hi - x <= 2.0 * h
            {
                continue;
            }
            assert!((val - v.eval(x)).abs() <= 10.0 * h * h, "n = {n}, x = {x}");
            checked += 1;
        }
        assert!(checked > pts / 2);
    }
}

#[test]
fn bare_well_is_not_a_plateau() {
    let v = SeedingSpec::infinite_well(1.0).unwrap().potential().unwrap();
    assert!(matches!(collapse(&v, (-0.1, 0.1), 0.1), Err(stretchlab::Error::NotPlateau { .. })));
}

#[test]
fn off_centre_cut_rejected_when_not_stationary() {
    let seed = SeedingSpec::harmonic(1.0).unwrap();
    assert!(matches!(
        StretchPlan::new(&seed, 1, &[(0.3, 0.5)]),
        Err(stretchlab::Error::NotStationary { .. })
    ));
}
