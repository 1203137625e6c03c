use num_complex::Complex64;
use std::f64::consts::PI;
use stretchlab::potentials::SeedingSpec;
use stretchlab::twod::*;
use stretchlab::Error;

fn well() -> SeedingSpec {
    SeedingSpec::infinite_well(1.0).unwrap()
}

fn step(seed: &SeedingSpec, max_slope: f64, k: f64) -> WaveguideProfile {
    let width = 3.0;
    let rise = max_slope * width / 1.875;
    WaveguideProfile::new(
        ProfileShape::SmoothStep {
            l_in: 0.2,
            l_fin: 0.2 + rise,
            y_in: 0.0,
            y_fin: width,
        },
        k,
        seed,
    )
    .unwrap()
}

fn fd_delta(p: &WaveguideProfile, seed: &SeedingSpec, x: f64, y: f64) -> Complex64 {
    let h = 1e-4;
    let amp = |y: f64| ansatz_state(p, seed, x, y).unwrap() * Complex64::from_polar(1.0, -p.k * y);
    let (m, c, q) = (amp(y - h), amp(y), amp(y + h));
    let d2 = (q - 2.0 * c + m) / (h * h);
    let d1 = (q - m) / (2.0 * h);
    -d2 - Complex64::new(0.0, 2.0 * p.k) * d1
}

#[test]
fn bare_2d_ground_is_product_of_sines() {
    let s = stretched_2d_ground(1.0, 1.0, 0.0, 0.0).unwrap();
    assert!((s.energy - PI * PI).abs() < 1e-12);
    for (x, y) in [(0.3, 0.6), (0.5, 0.5), (0.9, 0.1)] {
        let exact = 2.0 * (PI * x).sin() * (PI * y).sin();
        assert!((s.value(x, y) - exact).abs() < 1e-12);
    }
}

#[test]
fn energy_ignores_stretching() {
    let e0 = stretched_2d_ground(1.0, 1.0, 0.0, 0.0).unwrap().energy;
    for (lx, ly) in [(0.3, 0.5), (1.0, 0.0), (0.0, 2.0), (1.7, 0.9)] {
        assert_eq!(stretched_2d_ground(1.0, 1.0, lx, ly).unwrap().energy, e0);
    }
    let e = stretched_2d_ground(1.0, 2.0, 0.4, 0.4).unwrap().energy;
    assert!((e - (PI * PI / 2.0 + PI * PI / 8.0)).abs() < 1e-12);
}

#[test]
fn gradient_vanishes_on_plateau_strips() {
    let s = stretched_2d_ground(1.0, 1.0, 0.3, 0.5).unwrap();
    let (xs, ys) = ([0.5, 0.65, 0.8], [0.5, 0.75, 1.0]);
    for &x in &xs {
        for &y in &ys {
            let (gx, gy) = s.gradient(x, y);
            assert!(gx.hypot(gy) < 1e-10);
        }
        let (gx, gy) = s.gradient(x, 0.2);
        assert!(gx.abs() < 1e-10 && gy.abs() > 0.1);
    }
    for &y in &ys {
        let (gx, gy) = s.gradient(0.2, y);
        assert!(gy.abs() < 1e-10 && gx.abs() > 0.1);
    }
    assert!((s.value(0.65, 0.75) - 2.0 * s.value(0.5, 0.5) / 2.0).abs() < 1e-15);
}

#[test]
fn grid_hamiltonian_residual_is_small_and_second_order() {
    let s = stretched_2d_ground(1.0, 1.0, 0.3, 0.5).unwrap();
    let coarse = s.grid_residual(101).unwrap();
    let fine = s.grid_residual(201).unwrap();
    assert!(fine < 1e-3, "{fine}");
    let ratio = coarse / fine;
    assert!((3.0..5.0).contains(&ratio), "{ratio}");
}

#[test]
fn delta_matches_finite_differences() {
    for seed in [well(), SeedingSpec::harmonic(1.0).unwrap()] {
        for slope in [0.05, 0.2] {
            let p = step(&seed, slope, 1.0);
            let xbar = if matches!(seed, SeedingSpec::Harmonic { .. }) { 0.0 } else { 0.5 };
            for y in [0.7, 1.5, 2.4] {
                let l = p.length(y);
                for dx in [0.05, 0.2, 0.4] {
                    let x = xbar + l + dx;
                    let d = delta_residual(&p, &seed, x, y).unwrap();
                    let fd = fd_delta(&p, &seed, x, y);
                    assert!((d - fd).norm() < 1e-6, "{seed:?} y={y} x={x}: {d} vs {fd}");
                }
                assert_eq!(delta_residual(&p, &seed, xbar - 0.1, y).unwrap(), Complex64::new(0.0, 0.0));
            }
        }
    }
}

#[test]
fn delta_vanishes_where_profile_is_flat() {
    let seed = well();
    let p = step(&seed, 0.1, 1.0);
    for y in [-1.0, 4.0] {
        assert_eq!(delta_residual(&p, &seed, 0.9, y).unwrap().norm(), 0.0);
        assert_eq!(adiabaticity_margin(&p, y).unwrap(), f64::INFINITY);
    }
}

#[test]
fn constant_profile_ansatz_is_flat_plateau() {
    let seed = well();
    let p = WaveguideProfile::new(ProfileShape::Constant { length: 0.4 }, 2.0, &seed).unwrap();
    let a = ansatz_state(&p, &seed, 0.5, 1.0).unwrap();
    let b = ansatz_state(&p, &seed, 0.9, 1.0).unwrap();
    assert!((a - b).norm() < 1e-15);
    assert!((a.norm() - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn margin_scales_quadratically() {
    let p = step(&well(), 0.05, 1.0);
    let g = p.gentler();
    let y = 1.5;
    let ratio = adiabaticity_margin(&g, y).unwrap() / adiabaticity_margin(&p, y).unwrap();
    assert!((3.5..=4.5).contains(&ratio), "{ratio}");
    for i in 0..=30 {
        assert!(adiabaticity_margin(&p, 0.1 * i as f64).unwrap() > 100.0);
    }
}

#[test]
fn steep_profile_is_refused() {
    let p = step(&well(), 1.2, 1.0);
    assert!(matches!(adiabaticity_margin(&p, 1.5), Err(Error::SlopeTooLarge(_))));
}

#[test]
fn delta_norm_respects_bound() {
    for seed in [well(), SeedingSpec::harmonic(1.0).unwrap()] {
        for slope in [0.01, 0.05, 0.2] {
            let p = step(&seed, slope, 1.0);
            for i in 0..=30 {
                let y = 0.1 * i as f64;
                let r = delta_norm_ratio(&p, &seed, y).unwrap();
                let b = delta_norm_bound(&p, y);
                assert!(r <= b * (1.0 + 1e-9) + 1e-14, "{seed:?} slope {slope} y {y}: {r} > {b}");
            }
        }
    }
}

#[test]
fn moments_match_quadrature() {
    for seed in [well(), SeedingSpec::infinite_well(0.7).unwrap(), SeedingSpec::harmonic(1.0).unwrap()] {
        let (a, q) = (seed_moments(&seed).unwrap(), seed_moments_quadrature(&seed).unwrap());
        assert!((a.p2 - q.p2).abs() < 1e-10 * a.p2, "{seed:?}");
        assert!((a.p4 - q.p4).abs() < 1e-10 * a.p4, "{seed:?}");
        assert!(a.p4 >= a.p2 * a.p2);
    }
    let h = seed_moments(&SeedingSpec::harmonic(1.0).unwrap()).unwrap();
    assert_eq!((h.p2, h.p4), (0.5, 0.75));
}
