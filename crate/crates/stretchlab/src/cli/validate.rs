//! Self-check suite behind `stretchlab validate`.

use crate::eigensolver::{self, Grid};
use crate::potentials::{
    collapse, find_stationary_points, reverse_engineer, stretch, stretch_wavefunction, PiecewisePotential, Segment,
    SegmentForm, SeedingSpec, StretchPlan,
};
use crate::quantization::{solve_levels, transfer_matrix_levels, Geometry, Parity};
use crate::specfun::{cylinder_d, hermite};
use crate::twod::{
    adiabaticity_margin, ansatz_state, delta_norm_bound, delta_norm_ratio, delta_residual, seed_moments,
    seed_moments_quadrature, stretched_2d_ground, ProfileShape, WaveguideProfile,
};
use crate::Result;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

const ORACLE_POINTS: usize = 4001;
const NUMERIC_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst error or violation count.
    pub observed: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub passed: bool,
    pub failed: usize,
    pub checks: Vec<Check>,
}

struct Measure {
    observed: f64,
    tolerance: f64,
    detail: String,
}

fn measure(observed: f64, tolerance: f64, detail: impl Into<String>) -> Result<Measure> {
    Ok(Measure {
        observed,
        tolerance,
        detail: detail.into(),
    })
}

type Probe = fn(f64) -> Result<Measure>;

const CHECKS: &[(&str, Probe)] = &[
    ("seed_well_analytic", seed_well_analytic),
    ("seed_well_shooting", |_| seed_numeric(well(), 3, eigensolver::solve)),
    ("seed_well_oracle", |_| seed_numeric(well(), 3, eigensolver::solve_oracle)),
    ("seed_harmonic_shooting", |_| seed_numeric(harmonic(), 5, eigensolver::solve)),
    ("seed_harmonic_oracle", |_| seed_numeric(harmonic(), 5, eigensolver::solve_oracle)),
    ("energy_invariance_roots", energy_invariance_roots),
    ("energy_invariance_shooting", |d| energy_invariance_numeric(d, eigensolver::solve)),
    ("energy_invariance_oracle", |d| energy_invariance_numeric(d, eigensolver::solve_oracle)),
    ("stretched_level_invariance", stretched_level_invariance),
    ("gap_compression", gap_compression),
    ("round_trip_collapse_stretch", round_trip),
    ("flat_plateau_energy", flat_plateau_energy),
    ("node_preservation", node_preservation),
    ("sturm_ordering", sturm_ordering),
    ("normalization", normalization),
    ("reverse_engineering", reverse_engineering),
    ("oracle_equivalence", oracle_equivalence),
    ("roots_vs_transfer_matrix", roots_vs_transfer_matrix),
    ("roots_vs_shooting", roots_vs_shooting),
    ("doublet_approach", doublet_approach),
    ("parity_alternation", parity_alternation),
    ("two_barrier_stretched_level", two_barrier_stretched_level),
    ("harmonic_stretched_level", harmonic_stretched_level),
    ("hermite_identity", hermite_identity),
    ("cylinder_recurrence", cylinder_recurrence),
    ("grid2d_energy", grid2d_energy),
    ("grid2d_residual", grid2d_residual),
    ("grid2d_gradient_nullity", grid2d_gradient_nullity),
    ("delta_finite_difference", delta_finite_difference),
    ("delta_norm_bound", delta_norm_chain),
    ("margin_scaling", margin_scaling),
    ("seed_moments", moments),
];

/// Runs every check; `perturb_plateau` shifts inserted plateaus before the numerical invariance checks.
pub fn run_checks(perturb_plateau: f64) -> Report {
    let checks: Vec<Check> = CHECKS
        .par_iter()
        .map(|&(name, probe)| match probe(perturb_plateau) {
            Ok(m) => Check {
                name,
                passed: m.observed <= m.tolerance,
                observed: m.observed,
                tolerance: m.tolerance,
                detail: m.detail,
            },
            Err(e) => Check {
                name,
                passed: false,
                observed: f64::NAN,
                tolerance: 0.0,
                detail: e.to_string(),
            },
        })
        .collect();
    let failed = checks.iter().filter(|c| !c.passed).count();
    Report {
        version: super::table::HEADER,
        passed: failed == 0,
        failed,
        checks,
    }
}

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

fn well() -> SeedingSpec {
    SeedingSpec::infinite_well(1.0).expect("unit well")
}

fn harmonic() -> SeedingSpec {
    SeedingSpec::harmonic(1.0).expect("unit oscillator")
}

fn lengths(n: usize, hi: f64) -> impl Iterator<Item = f64> {
    (0..=n).map(move |i| hi * i as f64 / n as f64)
}

/// Shifts every constant segment at `energy` by `delta`.
fn perturbed(v: &PiecewisePotential, energy: f64, delta: f64) -> Result<PiecewisePotential> {
    if delta == 0.0 {
        return Ok(v.clone());
    }
    let segs = v
        .segments()
        .iter()
        .map(|s| match s.form {
            SegmentForm::Constant { value } if value == energy => {
                Segment::new(s.lo, s.hi, SegmentForm::Constant { value: value + delta })
            }
            _ => Ok(*s),
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewisePotential::new(segs, v.units())
}

/// Plans cutting level `n` at its first stationary point.
fn plans() -> Result<Vec<(SeedingSpec, StretchPlan)>> {
    let mut out = Vec::new();
    for seed in [well(), harmonic()] {
        for n in 0..5 {
            let psi = seed.eigenpair(n)?.wavefunction;
            let x = find_stationary_points(&psi)?[0];
            for l in [0.3, 1.1] {
                out.push((seed, StretchPlan::new(&seed, n, &[(x, l)])?));
            }
        }
    }
    out.push((well(), StretchPlan::new(&well(), 1, &[(-0.25, 0.4), (0.25, 0.2)])?));
    Ok(out)
}

fn seed_well_analytic(_: f64) -> Result<Measure> {
    let s = well();
    let worst = (0..4)
        .map(|n| {
            let exact = PI * PI * ((n + 1) * (n + 1)) as f64 / 2.0;
            (s.energy(n) - exact).abs() / exact
        })
        .fold(0.0, f64::max);
    measure(worst, 4.0 * f64::EPSILON, "relative error of E_n = π²(n+1)²/2, n = 0..3")
}

fn seed_numeric(
    seed: SeedingSpec,
    n_max: usize,
    solver: fn(&PiecewisePotential, usize, usize) -> Result<Vec<crate::EigenPair>>,
) -> Result<Measure> {
    let pairs = solver(&seed.potential()?, n_max, ORACLE_POINTS)?;
    let worst = pairs
        .iter()
        .enumerate()
        .map(|(n, p)| (p.energy - seed.energy(n)).abs())
        .fold(0.0, f64::max);
    measure(worst, NUMERIC_TOLERANCE, format!("levels 0..={n_max} against closed form"))
}

fn ground_plateau_potential(l: f64, delta: f64) -> Result<PiecewisePotential> {
    let plan = StretchPlan::central(&well(), 0, l)?;
    perturbed(&stretch(&well(), &plan)?, well().energy(0), delta)
}

fn energy_invariance_roots(_: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    for l in lengths(40, 2.0) {
        let g = Geometry::CentralWell {
            width: 1.0,
            length: l,
            level: 0,
        };
        worst = worst.max((solve_levels(&g, 0)?.levels[0].energy - PI * PI / 2.0).abs());
    }
    measure(worst, 0.0, "ground root at 41 values of L in [0, 2]")
}

fn energy_invariance_numeric(
    delta: f64,
    solver: fn(&PiecewisePotential, usize, usize) -> Result<Vec<crate::EigenPair>>,
) -> Result<Measure> {
    let mut worst = 0.0f64;
    for l in lengths(40, 2.0) {
        let v = ground_plateau_potential(l, delta)?;
        worst = worst.max((solver(&v, 0, ORACLE_POINTS)?[0].energy - PI * PI / 2.0).abs());
    }
    measure(worst, NUMERIC_TOLERANCE, "ground level at 41 values of L in [0, 2]")
}

fn stretched_level_invariance(delta: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    for (seed, plan) in plans()? {
        let v = perturbed(&stretch(&seed, &plan)?, plan.plateau_energy, delta)?;
        let levels = eigensolver::solve(&v, plan.level, ORACLE_POINTS)?;
        worst = worst.max((levels[plan.level].energy - plan.plateau_energy).abs());
    }
    measure(worst, NUMERIC_TOLERANCE, "shooting level n of every test plan against E_n")
}

fn gap_compression(_: f64) -> Result<Measure> {
    let spectra = lengths(10, 2.0)
        .map(|l| {
            let g = Geometry::CentralWell {
                width: 1.0,
                length: l,
                level: 0,
            };
            solve_levels(&g, 3).map(|s| s.energies())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut violations = 0;
    for w in spectra.windows(2) {
        for n in 0..3 {
            if w[1][n + 1] - w[1][n] > w[0][n + 1] - w[0][n] + 1e-12 {
                violations += 1;
            }
        }
    }
    measure(violations as f64, 0.0, "increases of E_{n+1} - E_n along L = 0, 0.2, ..., 2")
}

fn round_trip(_: f64) -> Result<Measure> {
    let mut bad = Vec::new();
    for (seed, plan) in plans()? {
        let mut v = stretch(&seed, &plan)?;
        let mut plats = v.plateaus(plan.plateau_energy);
        plats.sort_by(|a, b| b.0.total_cmp(&a.0));
        for p in plats {
            v = collapse(&v, p, p.1 - p.0)?;
        }
        if !v.approx_eq(&seed.potential()?, 1e-12) {
            bad.push(format!("{seed:?} level {}", plan.level));
        }
    }
    measure(bad.len() as f64, 0.0, bad.join("; "))
}

fn flat_plateau_energy(_: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    for (seed, plan) in plans()? {
        let v = stretch(&seed, &plan)?;
        let psi = stretch_wavefunction(&seed.eigenpair(plan.level)?, &plan)?.wavefunction;
        for (lo, hi) in v.plateaus(plan.plateau_energy) {
            for t in [0.1, 0.5, 0.9] {
                let x = lo + t * (hi - lo);
                worst = worst.max(psi.derivative(x).abs()).max((v.eval(x) - plan.plateau_energy).abs());
            }
            if psi.value(0.5 * (lo + hi)) == 0.0 {
                worst = f64::INFINITY;
            }
        }
    }
    measure(worst, 1e-12, "|ψ'| and |V - E_n| on every plateau")
}

fn node_preservation(_: f64) -> Result<Measure> {
    let mut bad = 0;
    for (seed, plan) in plans()? {
        if stretch_wavefunction(&seed.eigenpair(plan.level)?, &plan)?.node_count != plan.level {
            bad += 1;
        }
    }
    measure(bad as f64, 0.0, "stretched states whose node count differs from n")
}

fn sturm_ordering(_: f64) -> Result<Measure> {
    let mut bad = 0;
    for (seed, plan) in plans()?.into_iter().step_by(3) {
        let levels = eigensolver::solve(&stretch(&seed, &plan)?, 5, ORACLE_POINTS)?;
        bad += levels.iter().enumerate().filter(|(i, p)| p.node_count != *i).count();
    }
    measure(bad as f64, 0.0, "shooting levels whose node count differs from their index")
}

fn normalization(_: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    for (seed, plan) in plans()? {
        let st = stretch_wavefunction(&seed.eigenpair(plan.level)?, &plan)?;
        worst = worst.max((st.wavefunction.norm() - 1.0).abs());
        if plan.level == 0 {
            for p in eigensolver::solve(&stretch(&seed, &plan)?, 2, ORACLE_POINTS)? {
                worst = worst.max((p.wavefunction.norm() - 1.0).abs());
            }
        }
    }
    measure(worst, 1e-9, "|∫ψ² - 1| for analytic and grid states")
}

fn reverse_engineering(_: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    for (seed, plan) in plans()? {
        let v = stretch(&seed, &plan)?;
        let psi = stretch_wavefunction(&seed.eigenpair(plan.level)?, &plan)?.wavefunction;
        let (lo, hi) = psi.effective_domain();
        let n = 401;
        let h = (hi - lo) / (n - 1) as f64;
        let sampled = psi.sampled_on(lo, hi, n)?;
        let rebuilt = reverse_engineer(&sampled, plan.plateau_energy)?;
        let junctions = v.interior_breakpoints();
        let cutoff = 1e-3 * psi.max_abs();
        for (x, val) in rebuilt.defined() {
            let near = junctions.iter().any(|b| (x - b).abs() <= 2.0 * h + 1e-12);
            if near || psi.value(x).abs() < cutoff || x - lo <= 2.0 * h || hi - x <= 2.0 * h {
                continue;
            }
            worst = worst.max((val - v.eval(x)).abs() / (10.0 * h * h));
        }
    }
    measure(worst, 1.0, "|V_rebuilt - V| in units of 10h², away from junctions, walls and small |ψ|")
}

fn oracle_equivalence(_: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    for (seed, plan) in plans()?.into_iter().step_by(4) {
        let v = stretch(&seed, &plan)?;
        let grid = Grid::auto(&v, 4, ORACLE_POINTS)?;
        let h = grid.step();
        let shot = eigensolver::bound_states(&v, &grid, 4)?;
        let oracle = eigensolver::matrix_oracle_extrapolated(&v, &grid, 4)?;
        for (a, b) in shot.iter().zip(&oracle) {
            worst = worst.max((a.energy - b.energy).abs() / (10.0 * h * h).max(1e-8));
        }
    }
    measure(worst, 1.0, "|E_shoot - E_matrix| in units of max(1e-8, 10h²)")
}

fn central(length: f64, level: usize) -> Geometry {
    Geometry::CentralWell {
        width: 1.0,
        length,
        level,
    }
}

fn roots_vs_transfer_matrix(_: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    for g in [central(0.4, 0), central(0.6, 4), central(1.7, 2)] {
        let s = solve_levels(&g, 5)?;
        let tm = transfer_matrix_levels(&g.potential()?, 5)?;
        for (l, t) in s.levels.iter().zip(&tm) {
            worst = worst.max((l.energy - t).abs() / t.max(1.0));
        }
    }
    measure(worst, 1e-9, "relative gap between quantization roots and transfer-matrix zeros")
}

fn roots_vs_shooting(_: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    let geometries = [
        central(0.4, 0),
        central(1.0, 4),
        Geometry::CentralHarmonic {
            omega: 1.0,
            length: 1.0,
            level: 4,
        },
    ];
    for g in geometries {
        let s = solve_levels(&g, 5)?;
        let v = g.potential()?;
        let grid = Grid::auto(&v, 5, ORACLE_POINTS)?;
        let h = grid.step();
        for (l, p) in s.levels.iter().zip(&eigensolver::bound_states(&v, &grid, 5)?) {
            worst = worst.max((l.energy - p.energy).abs() / (10.0 * h * h).max(1e-8));
        }
    }
    measure(worst, 1.0, "|E_root - E_shoot| in units of max(1e-8, 10h²)")
}

fn splittings(g: impl Fn(f64) -> Geometry, ls: &[f64]) -> Result<Vec<[f64; 2]>> {
    ls.iter()
        .map(|&l| {
            let e = solve_levels(&g(l), 3)?.energies();
            Ok([e[1] - e[0], e[3] - e[2]])
        })
        .collect()
}

fn doublet_approach(_: f64) -> Result<Measure> {
    let s = splittings(|l| central(l, 4), &[0.5, 1.0, 1.5])?;
    let mut bad = 0;
    for p in 0..2 {
        bad += s.windows(2).filter(|w| !(w[1][p] < w[0][p])).count();
        if !(s[2][p] < s[0][p] / 10.0) {
            bad += 1;
        }
    }
    measure(bad as f64, 0.0, "non-decreasing or insufficiently shrinking even/odd splittings below E_4")
}

fn parity_alternation(_: f64) -> Result<Measure> {
    let mut bad = 0;
    for g in [central(0.4, 0), central(1.0, 4), central(2.0, 2)] {
        for (i, lv) in solve_levels(&g, 5)?.levels.iter().enumerate() {
            let want = if i % 2 == 0 { Parity::Even } else { Parity::Odd };
            if lv.parity.is_some_and(|p| p != want) {
                bad += 1;
            }
        }
    }
    measure(bad as f64, 0.0, "levels whose parity breaks the even/odd alternation")
}

fn two_barrier_stretched_level(_: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    let steps = [0.0, 0.2, 0.4, 0.6, 0.8];
    for &left in &steps {
        for &right in &steps {
            let g = Geometry::TwoBarrierWell {
                width: 1.0,
                left,
                right,
            };
            worst = worst.max((solve_levels(&g, 1)?.levels[1].energy - 2.0 * PI * PI).abs());
        }
    }
    measure(worst, 1e-9, "level 1 against 2π² on a 5x5 grid of barrier lengths")
}

fn harmonic_stretched_level(_: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    for l in lengths(10, 2.0) {
        let g = Geometry::CentralHarmonic {
            omega: 1.0,
            length: l,
            level: 4,
        };
        worst = worst.max((solve_levels(&g, 4)?.levels[4].energy - 4.5).abs());
    }
    measure(worst, 1e-9, "E_4 against 4.5 for L in [0, 2]")
}

fn hermite_identity(_: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    for n in 0..=8 {
        for i in 0..=100 {
            let x = -5.0 + 0.1 * i as f64;
            let h = hermite(n, x / 2f64.sqrt());
            let exact = 2f64.powf(-(n as f64) / 2.0) * (-x * x / 4.0).exp() * h;
            let d = cylinder_d(n as f64, x)?.value;
            worst = worst.max((d - exact).abs() / (1.0 + h.abs()));
        }
    }
    measure(worst, 1e-10, "D_n(x) against the Hermite form, n = 0..8, x in [-5, 5]")
}

fn cylinder_recurrence(_: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    for nu in [0.3, 1.7, 2.5, 4.2] {
        for i in 0..=40 {
            let x = -4.0 + 0.2 * i as f64;
            let (up, mid, down) = (cylinder_d(nu + 1.0, x)?.value, cylinder_d(nu, x)?.value, cylinder_d(nu - 1.0, x)?.value);
            let scale = up.abs().max((x * mid).abs()).max((nu * down).abs());
            worst = worst.max((up - x * mid + nu * down).abs() / scale);
        }
    }
    measure(worst, 1e-9, "relative residual of D_{ν+1} - xD_ν + νD_{ν-1}")
}

fn grid2d_energy(_: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    for (lx, ly) in [(0.0, 0.0), (0.3, 0.5), (1.0, 0.2), (2.0, 2.0)] {
        worst = worst.max((stretched_2d_ground(1.0, 1.0, lx, ly)?.energy - PI * PI).abs());
    }
    measure(worst, 1e-12, "E against π² for several (Lx, Ly)")
}

fn grid2d_residual(_: f64) -> Result<Measure> {
    let r = stretched_2d_ground(1.0, 1.0, 0.3, 0.5)?.grid_residual(201)?;
    measure(r, 1e-3, "max-norm grid Hamiltonian residual at 201x201, (Lx, Ly) = (0.3, 0.5)")
}

fn grid2d_gradient_nullity(_: f64) -> Result<Measure> {
    let s = stretched_2d_ground(1.0, 1.0, 0.3, 0.5)?;
    let mut worst = 0.0f64;
    for i in 0..=10 {
        let x = 0.5 + 0.03 * i as f64;
        for j in 0..=10 {
            let y = 0.5 + 0.05 * j as f64;
            let (gx, gy) = s.gradient(x, y);
            worst = worst.max(gx.hypot(gy));
            worst = worst.max(s.gradient(x, 0.1 + 0.03 * j as f64).0.abs());
            worst = worst.max(s.gradient(0.1 + 0.03 * j as f64, y).1.abs());
        }
    }
    measure(worst, 1e-10, "|∇ψ| on the central rectangle and the null component on each strip")
}

fn step_profile(seed: &SeedingSpec, max_slope: f64, k: f64) -> Result<WaveguideProfile> {
    let width = 3.0;
    WaveguideProfile::new(
        ProfileShape::SmoothStep {
            l_in: 0.2,
            l_fin: 0.2 + max_slope * width / 1.875,
            y_in: 0.0,
            y_fin: width,
        },
        k,
        seed,
    )
}

fn delta_finite_difference(_: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    let h = 1e-4;
    for (seed, xbar) in [(well(), 0.5), (harmonic(), 0.0)] {
        for slope in [0.05, 0.2] {
            let p = step_profile(&seed, slope, 1.0)?;
            for y in [0.7, 1.5, 2.4] {
                let x = xbar + p.length(y) + 0.2;
                let amp = |y: f64| -> Result<Complex64> {
                    Ok(ansatz_state(&p, &seed, x, y)? * Complex64::from_polar(1.0, -p.k * y))
                };
                let (m, c, q) = (amp(y - h)?, amp(y)?, amp(y + h)?);
                let fd = -(q - 2.0 * c + m) / (h * h) - Complex64::new(0.0, 2.0 * p.k) * (q - m) / (2.0 * h);
                worst = worst.max((delta_residual(&p, &seed, x, y)? - fd).norm());
            }
        }
    }
    measure(worst, 1e-6, "closed-form Δ against central differences of the ansatz")
}

fn delta_norm_chain(_: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    for seed in [well(), harmonic()] {
        for slope in [0.01, 0.05, 0.2] {
            let p = step_profile(&seed, slope, 1.0)?;
            for i in 0..=30 {
                let y = 0.1 * i as f64;
                let bound = delta_norm_bound(&p, y);
                if bound > 0.0 {
                    worst = worst.max(delta_norm_ratio(&p, &seed, y)? / bound);
                }
            }
        }
    }
    measure(worst, 1.0 + 1e-9, "largest ‖Δ‖/‖f‖ divided by its analytic bound")
}

fn margin_scaling(_: f64) -> Result<Measure> {
    let p = step_profile(&well(), 0.05, 1.0)?;
    let ratio = adiabaticity_margin(&p.gentler(), 1.5)? / adiabaticity_margin(&p, 1.5)?;
    measure((ratio - 4.0).abs(), 0.5, format!("margin ratio {ratio} after halving L' and L''"))
}

fn moments(_: f64) -> Result<Measure> {
    let mut worst = 0.0f64;
    for seed in [well(), harmonic()] {
        let (a, q) = (seed_moments(&seed)?, seed_moments_quadrature(&seed)?);
        worst = worst.max(((a.p2 - q.p2) / a.p2).abs()).max(((a.p4 - q.p4) / a.p4).abs());
    }
    let w = seed_moments(&well())?;
    worst = worst.max((w.p2 - PI * PI).abs() / (PI * PI)).max((w.p4 - PI.powi(4)).abs() / PI.powi(4));
    measure(worst, 1e-10, "relative error of (p2, p4) against quadrature and (π², π⁴)")
}
