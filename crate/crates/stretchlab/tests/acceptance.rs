//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;
use std::f64::consts::PI;
use std::time::Instant;
use stretchlab::eigensolver;
use stretchlab::potentials::SeedingSpec;
use stretchlab::quantization::{residual, solve_levels, transfer_matrix_levels, Condition, Geometry, QuantizationProblem};
use stretchlab::specfun::{cylinder_d, hermite};
use stretchlab::twod::*;
use stretchlab::Result;

const POINTS: usize = 4001;

fn well(length: f64, level: usize) -> Geometry {
    Geometry::CentralWell {
        width: 1.0,
        length,
        level,
    }
}

fn harmonic(length: f64) -> Geometry {
    Geometry::CentralHarmonic {
        omega: 1.0,
        length,
        level: 4,
    }
}

fn sweep41() -> impl Iterator<Item = f64> {
    (0..=40).map(|i| 2.0 * i as f64 / 40.0)
}

type Criterion = fn() -> Result<Verdict>;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Result<Verdict> {
    Ok(Verdict { pass, detail })
}

fn seed_spectra() -> Result<Verdict> {
    let t = Instant::now();
    let w = SeedingSpec::infinite_well(1.0)?;
    let h = SeedingSpec::harmonic(1.0)?;
    let mut analytic = true;
    let mut numeric = 0.0f64;
    for n in 0..4 {
        analytic &= w.energy(n) == PI * PI * ((n + 1) * (n + 1)) as f64 / 2.0;
    }
    for n in 0..6 {
        analytic &= h.energy(n) == n as f64 + 0.5;
    }
    for (seed, n_max) in [(w, 3), (h, 5)] {
        let v = seed.potential()?;
        for pairs in [eigensolver::solve(&v, n_max, POINTS)?, eigensolver::solve_oracle(&v, n_max, POINTS)?] {
            for (n, p) in pairs.iter().enumerate() {
                numeric = numeric.max((p.energy - seed.energy(n)).abs());
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    verdict(
        analytic && numeric <= 1e-5 && secs < 5.0,
        format!("analytic exact: {analytic}; worst numeric error {numeric:.2e} (<= 1e-5); {secs:.2} s (< 5 s)"),
    )
}

fn energy_invariance() -> Result<Verdict> {
    let t = Instant::now();
    let e0 = PI * PI / 2.0;
    let (mut roots, mut oracle) = (0.0f64, 0.0f64);
    for l in sweep41() {
        let g = well(l, 0);
        roots = roots.max((solve_levels(&g, 0)?.levels[0].energy - e0).abs());
        oracle = oracle.max((eigensolver::solve_oracle(&g.potential()?, 0, POINTS)?[0].energy - e0).abs());
    }
    let secs = t.elapsed().as_secs_f64();
    verdict(
        roots == 0.0 && oracle <= 1e-5 && secs < 30.0,
        format!("roots off by {roots:e} (exact); oracle off by {oracle:.2e} (<= 1e-5); {secs:.2} s (< 30 s)"),
    )
}

fn gap_compression() -> Result<Verdict> {
    let spectra: Vec<Vec<f64>> = sweep41().map(|l| solve_levels(&well(l, 0), 3).map(|s| s.energies())).collect::<Result<_>>()?;
    let mut monotone = true;
    for w in spectra.windows(2) {
        for n in 0..3 {
            monotone &= w[1][n + 1] - w[1][n] <= w[0][n + 1] - w[0][n] + 1e-12;
        }
    }
    let far = solve_levels(&well(5.0, 0), 3)?.energies();
    let rel: Vec<f64> = (1..4).map(|m| (far[m] - far[0]) / far[0]).collect();
    let close = rel.iter().all(|&r| r <= 0.05);
    verdict(
        monotone && close,
        format!(
            "gaps non-increasing: {monotone}; (E_m - E_0)/E_0 at L/a = 5: {:.1}%, {:.1}%, {:.1}% (each <= 5%)",
            100.0 * rel[0],
            100.0 * rel[1],
            100.0 * rel[2]
        ),
    )
}

fn doublets() -> Result<Verdict> {
    let e4 = 25.0 * PI * PI / 2.0;
    let mut splits = Vec::new();
    let (mut roots, mut oracle) = (0.0f64, 0.0f64);
    for l in [0.5, 1.0, 1.5] {
        let g = well(l, 4);
        let e = solve_levels(&g, 4)?.energies();
        splits.push([e[1] - e[0], e[3] - e[2]]);
        roots = roots.max((e[4] - e4).abs());
        oracle = oracle.max((eigensolver::solve_oracle(&g.potential()?, 4, POINTS)?[4].energy - e4).abs());
    }
    let mut ok = true;
    for p in 0..2 {
        ok &= splits[1][p] < splits[0][p] && splits[2][p] < splits[1][p] && splits[2][p] < splits[0][p] / 10.0;
    }
    verdict(
        ok && roots <= 1e-9 && oracle <= 1e-5,
        format!(
            "splittings {:.3e} -> {:.3e} and {:.3e} -> {:.3e} (decreasing, /10); E_4 off by {roots:.1e} (roots), {oracle:.1e} (oracle)",
            splits[0][0], splits[2][0], splits[0][1], splits[2][1]
        ),
    )
}

fn two_barrier() -> Result<Verdict> {
    let steps = [0.0, 0.2, 0.4, 0.6, 0.8];
    let mut worst = 0.0f64;
    let mut ground = [[0.0; 5]; 5];
    for (i, &l1) in steps.iter().enumerate() {
        for (j, &l2) in steps.iter().enumerate() {
            let g = Geometry::TwoBarrierWell {
                width: 1.0,
                left: l1,
                right: l2,
            };
            let tm = transfer_matrix_levels(&g.potential()?, 2)?;
            worst = worst.max((tm[1] - 2.0 * PI * PI).abs());
            ground[i][j] = tm[0];
        }
    }
    let mut monotone = true;
    for i in 0..5 {
        for j in 1..5 {
            monotone &= ground[i][j] >= ground[i][j - 1] && ground[j][i] >= ground[j - 1][i];
        }
    }
    let g = Geometry::TwoBarrierWell {
        width: 1.0,
        left: 0.4,
        right: 0.2,
    };
    let s = solve_levels(&g, 4)?;
    let tm = transfer_matrix_levels(&g.potential()?, 4)?;
    let agree = s.levels.iter().zip(&tm).map(|(l, t)| (l.energy - t).abs()).fold(0.0, f64::max);
    let below = QuantizationProblem::new(Condition::TwoBarrierBelow, g)?;
    let printed = residual(&below, tm[0])?.abs() / residual(&below, 0.5 * tm[0])?.abs();
    let arbitrated = s.discrepancies.is_empty() && agree <= 1e-9 && printed <= 1e-9;
    verdict(
        worst <= 1e-9 && monotone && (arbitrated || !s.discrepancies.is_empty()),
        format!(
            "level 1 off 2π² by {worst:.1e}; ground monotone: {monotone}; printed vs transfer at (0.4, 0.2): {agree:.1e}, {} discrepancies",
            s.discrepancies.len()
        ),
    )
}

fn harmonic_stretch() -> Result<Verdict> {
    let mut worst = 0.0f64;
    let mut pinned = true;
    for i in 0..=10 {
        let l = 0.2 * i as f64;
        let s = solve_levels(&harmonic(l), 4)?;
        pinned &= s.levels[4].energy == 4.5;
        let oracle = eigensolver::solve_oracle(&harmonic(l).potential()?, 4, POINTS)?;
        for (a, b) in s.levels.iter().zip(&oracle) {
            worst = worst.max((a.energy - b.energy).abs());
        }
    }
    let split = |l: f64| -> Result<[f64; 2]> {
        let e = solve_levels(&harmonic(l), 3)?.energies();
        Ok([e[1] - e[0], e[3] - e[2]])
    };
    let (a, b, c) = (split(0.5)?, split(1.0)?, split(2.0)?);
    let shrinking = (0..2).all(|p| a[p] > b[p] && b[p] > c[p]);
    let mut hermite_err = 0.0f64;
    for n in 0..=8 {
        for k in 0..=100 {
            let x = -5.0 + 0.1 * k as f64;
            let h = hermite(n, x / 2f64.sqrt());
            let exact = 2f64.powf(-(n as f64) / 2.0) * (-x * x / 4.0).exp() * h;
            hermite_err = hermite_err.max((cylinder_d(n as f64, x)?.value - exact).abs() / (1.0 + h.abs()));
        }
    }
    verdict(
        pinned && worst <= 1e-5 && shrinking && hermite_err <= 1e-10,
        format!("E_4 = 4.5 exactly: {pinned}; roots vs oracle {worst:.1e} (<= 1e-5); doublets shrinking: {shrinking}; Hermite lattice {hermite_err:.1e} (<= 1e-10)"),
    )
}

fn separable_2d() -> Result<Verdict> {
    let s = stretched_2d_ground(1.0, 1.0, 0.3, 0.5)?;
    let res = s.grid_residual(201)?;
    let mut grad = 0.0f64;
    for i in 0..=12 {
        for j in 0..=12 {
            let (gx, gy) = s.gradient(0.5 + 0.025 * i as f64, 0.5 + 0.5 * j as f64 / 12.0);
            grad = grad.max(gx.hypot(gy));
        }
    }
    let mut energy = 0.0f64;
    for (lx, ly) in [(0.0, 0.0), (0.3, 0.5), (1.5, 0.1), (2.0, 2.0)] {
        energy = energy.max((stretched_2d_ground(1.0, 1.0, lx, ly)?.energy - PI * PI).abs());
    }
    verdict(
        res < 1e-3 && grad < 1e-10 && energy <= 1e-12,
        format!("grid residual {res:.2e} (< 1e-3); central |∇ψ| {grad:.1e} (< 1e-10); |E - π²| {energy:.1e}"),
    )
}

fn profile(seed: &SeedingSpec, max_slope: f64) -> Result<WaveguideProfile> {
    WaveguideProfile::new(
        ProfileShape::SmoothStep {
            l_in: 0.2,
            l_fin: 0.2 + max_slope * 3.0 / 1.875,
            y_in: 0.0,
            y_fin: 3.0,
        },
        1.0,
        seed,
    )
}

fn appendix_diagnostics() -> Result<Verdict> {
    let w = SeedingSpec::infinite_well(1.0)?;
    let mut fd = 0.0f64;
    let h = 1e-4;
    for slope in [0.01, 0.05, 0.2] {
        let p = profile(&w, slope)?;
        for y in [0.5, 1.0, 1.5, 2.0, 2.5] {
            for dx in [0.05, 0.2, 0.45] {
                let x = 0.5 + p.length(y) + dx;
                let amp = |y: f64| -> Result<Complex64> { Ok(ansatz_state(&p, &w, x, y)? * Complex64::from_polar(1.0, -y)) };
                let (m, c, q) = (amp(y - h)?, amp(y)?, amp(y + h)?);
                let num = -(q - 2.0 * c + m) / (h * h) - Complex64::new(0.0, 2.0) * (q - m) / (2.0 * h);
                fd = fd.max((delta_residual(&p, &w, x, y)? - num).norm());
            }
        }
    }
    let p = profile(&w, 0.05)?;
    let ratio = adiabaticity_margin(&p.gentler(), 1.5)? / adiabaticity_margin(&p, 1.5)?;
    let (m, q) = (seed_moments(&w)?, seed_moments_quadrature(&w)?);
    let moments = [(m.p2, PI * PI), (m.p4, PI.powi(4)), (q.p2, PI * PI), (q.p4, PI.powi(4))]
        .iter()
        .map(|(a, b)| ((a - b) / b).abs())
        .fold(0.0, f64::max);
    verdict(
        fd <= 1e-6 && (3.5..=4.5).contains(&ratio) && moments <= 1e-10,
        format!("Δ vs finite differences {fd:.1e} (<= 1e-6); margin ratio {ratio:.3} (in [3.5, 4.5]); moments rel. error {moments:.1e} (<= 1e-10)"),
    )
}

fn property_suite() -> Result<Verdict> {
    let t = Instant::now();
    let out = std::env::temp_dir().join(format!("stretchlab-acceptance-{}.json", std::process::id()));
    let code = stretchlab::cli::run(["stretchlab", "validate", "--out", out.to_str().expect("utf-8 temp path")]);
    let secs = t.elapsed().as_secs_f64();
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out)?)?;
    let _ = std::fs::remove_file(&out);
    let checks = report["checks"].as_array().map_or(0, Vec::len);
    let failed = report["failed"].as_u64().unwrap_or(u64::MAX);
    verdict(
        code == 0 && failed == 0 && checks >= 15 && secs < 120.0,
        format!("validate exit {code}; {failed} of {checks} checks failed; {secs:.1} s (< 120 s)"),
    )
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("seed spectra", seed_spectra),
        ("ground energy invariance", energy_invariance),
        ("gap compression", gap_compression),
        ("doublet formation", doublets),
        ("two-barrier system", two_barrier),
        ("harmonic stretching", harmonic_stretch),
        ("2D separable state", separable_2d),
        ("adiabatic diagnostics", appendix_diagnostics),
        ("property suite", property_suite),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (pass, detail) = match f() {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!("{} criterion {}: {name}: {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
