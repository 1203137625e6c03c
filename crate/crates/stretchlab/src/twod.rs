//! Separable stretching in two dimensions and the adiabatic waveguide ansatz.
//!
//! Well seeds live on `[0, a]` here, so the stretching point of the ground
//! state is x̄ = a/2; harmonic seeds keep their own frame with x̄ = 0.

use crate::potentials::{
    stretch, stretch_wavefunction, EigenPair, PiecewisePotential, SeedingSpec, StretchPlan, WaveFunction,
};
use crate::quadrature::integrate;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

/// ψ(x, y) = ψₓ(x)·ψᵧ(y) on `[0, aₓ+Lₓ] × [0, aᵧ+Lᵧ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Product2DState {
    pub x_factor: EigenPair,
    pub y_factor: EigenPair,
    pub energy: f64,
    x_potential: PiecewisePotential,
    y_potential: PiecewisePotential,
}

fn stretched_axis(a: f64, l: f64) -> Result<(EigenPair, PiecewisePotential)> {
    if !(a > 0.0) || !a.is_finite() || !(l >= 0.0) || !l.is_finite() {
        return Err(Error::InvalidParameter(format!("width {a} and stretch {l}")));
    }
    let seed = SeedingSpec::infinite_well(a)?;
    let plan = StretchPlan::central(&seed, 0, l)?;
    let shift = (a + l) / 2.0;
    let mut pair = stretch_wavefunction(&seed.eigenpair(0)?, &plan)?;
    pair.wavefunction = pair.wavefunction.translated(shift);
    Ok((pair, stretch(&seed, &plan)?.translated(shift)))
}

/// Ground state of the 2D box with plateaus of `lx`, `ly` inserted at its centre lines.
pub fn stretched_2d_ground(ax: f64, ay: f64, lx: f64, ly: f64) -> Result<Product2DState> {
    let (x_factor, x_potential) = stretched_axis(ax, lx)?;
    let (y_factor, y_potential) = stretched_axis(ay, ly)?;
    Ok(Product2DState {
        energy: x_factor.energy + y_factor.energy,
        x_factor,
        y_factor,
        x_potential,
        y_potential,
    })
}

impl Product2DState {
    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.x_factor.wavefunction.value(x) * self.y_factor.wavefunction.value(y)
    }

    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let (fx, fy) = (&self.x_factor.wavefunction, &self.y_factor.wavefunction);
        (fx.derivative(x) * fy.value(y), fx.value(x) * fy.derivative(y))
    }

    /// Vₓ(x) + Vᵧ(y), infinite outside the box.
    pub fn potential(&self, x: f64, y: f64) -> f64 {
        self.x_potential.eval(x) + self.y_potential.eval(y)
    }

    pub fn extent(&self) -> (f64, f64) {
        (self.x_potential.support().1, self.y_potential.support().1)
    }

    /// Max-norm of (−½∇²ₕ + V − E)ψ over interior nodes of an `n × n` grid.
    ///
    /// The spacing along each axis is the largest one with at most `n − 1`
    /// cells that puts the plateau edges on nodes; the grid is padded past
    /// the far wall up to `n` points. Nodes on a plateau edge use the mean of
    /// the two one-sided potentials.
    pub fn grid_residual(&self, n: usize) -> Result<f64> {
        if n < 5 {
            return Err(Error::InvalidParameter("grid needs at least 5 points per axis".into()));
        }
        let ax = axis_nodes(&self.x_potential, n);
        let ay = axis_nodes(&self.y_potential, n);
        let (hx, hy) = (ax.h, ay.h);
        let px: Vec<f64> = ax.points.iter().map(|&x| self.x_factor.wavefunction.value(x)).collect();
        let py: Vec<f64> = ay.points.iter().map(|&y| self.y_factor.wavefunction.value(y)).collect();
        let mut worst = 0.0f64;
        for i in 1..ax.inside {
            for j in 1..ay.inside {
                let psi = px[i] * py[j];
                let lap = (px[i + 1] - 2.0 * px[i] + px[i - 1]) / (hx * hx) * py[j]
                    + px[i] * (py[j + 1] - 2.0 * py[j] + py[j - 1]) / (hy * hy);
                let v = ax.v[i] + ay.v[j];
                worst = worst.max((-0.5 * lap + (v - self.energy) * psi).abs());
            }
        }
        Ok(worst)
    }
}

struct AxisNodes {
    h: f64,
    points: Vec<f64>,
    v: Vec<f64>,
    /// Index of the far wall node.
    inside: usize,
}

fn axis_nodes(v: &PiecewisePotential, n: usize) -> AxisNodes {
    let (lo, hi) = v.support();
    let span = hi - lo;
    let bps = v.interior_breakpoints();
    let m = (2..n)
        .rev()
        .find(|&m| {
            bps.iter().all(|&b| {
                let t = (b - lo) / span * m as f64;
                (t - t.round()).abs() < 1e-9
            })
        })
        .unwrap_or(n - 1);
    let h = span / m as f64;
    let points: Vec<f64> = (0..n).map(|i| if i == m { hi } else { lo + h * i as f64 }).collect();
    let vals = points
        .iter()
        .map(|&x| {
            if x <= lo || x >= hi {
                return 0.0;
            }
            let (l, r) = v.one_sided(x);
            0.5 * (l.eval(x) + r.eval(x))
        })
        .collect();
    AxisNodes {
        h,
        points,
        v: vals,
        inside: m,
    }
}

/// ⟨p̂²⟩₀ = ∫|ψ₀′|² and ⟨p̂⁴⟩₀ = ∫|ψ₀″|² of a seed ground state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeedMoments {
    pub p2: f64,
    pub p4: f64,
}

pub fn seed_moments(seed: &SeedingSpec) -> Result<SeedMoments> {
    seed.validate()?;
    Ok(match *seed {
        SeedingSpec::InfiniteWell { width } => {
            let k2 = (std::f64::consts::PI / width).powi(2);
            SeedMoments { p2: k2, p4: k2 * k2 }
        }
        SeedingSpec::Harmonic { omega } => SeedMoments {
            p2: omega / 2.0,
            p4: 0.75 * omega * omega,
        },
    })
}

/// Same moments by Gauss–Legendre quadrature of the closed-form ground state.
pub fn seed_moments_quadrature(seed: &SeedingSpec) -> Result<SeedMoments> {
    let psi = seed.eigenpair(0)?.wavefunction;
    let (a, b) = psi.effective_domain();
    let p2 = integrate(|x| psi.derivative(x).powi(2), a, b, 64);
    let p4 = integrate(|x| psi.second_derivative(x).powi(2), a, b, 64);
    Ok(SeedMoments { p2, p4 })
}

/// Shape of the stretching parameter along the guide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ProfileShape {
    Constant { length: f64 },
    /// Quintic 10t³ − 15t⁴ + 6t⁵ from `l_in` at `y_in` to `l_fin` at `y_fin`.
    SmoothStep { l_in: f64, l_fin: f64, y_in: f64, y_fin: f64 },
}

/// L(y) with its derivatives, the longitudinal wave number and the seed moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveguideProfile {
    pub shape: ProfileShape,
    pub k: f64,
    pub moments: SeedMoments,
}

impl WaveguideProfile {
    pub fn new(shape: ProfileShape, k: f64, seed: &SeedingSpec) -> Result<WaveguideProfile> {
        let ok = match shape {
            ProfileShape::Constant { length } => length >= 0.0 && length.is_finite(),
            ProfileShape::SmoothStep { l_in, l_fin, y_in, y_fin } => {
                l_in >= 0.0 && l_fin >= 0.0 && l_in.is_finite() && l_fin.is_finite() && y_in < y_fin
            }
        };
        if !ok || !(k >= 0.0) || !k.is_finite() {
            return Err(Error::InvalidParameter(format!("waveguide profile {shape:?}, k = {k}")));
        }
        Ok(WaveguideProfile {
            shape,
            k,
            moments: seed_moments(seed)?,
        })
    }

    /// (L, L′, L″) at `y`.
    pub fn at(&self, y: f64) -> (f64, f64, f64) {
        match self.shape {
            ProfileShape::Constant { length } => (length, 0.0, 0.0),
            ProfileShape::SmoothStep { l_in, l_fin, y_in, y_fin } => {
                let w = y_fin - y_in;
                let t = ((y - y_in) / w).clamp(0.0, 1.0);
                let d = l_fin - l_in;
                let s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
                let ds = 30.0 * t * t * (1.0 - t) * (1.0 - t);
                let dds = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
                (l_in + d * s, d * ds / w, d * dds / (w * w))
            }
        }
    }

    pub fn length(&self, y: f64) -> f64 {
        self.at(y).0
    }

    /// max |L′|, reached mid-step.
    pub fn max_slope(&self) -> f64 {
        match self.shape {
            ProfileShape::Constant { .. } => 0.0,
            ProfileShape::SmoothStep { l_in, l_fin, y_in, y_fin } => 1.875 * (l_fin - l_in).abs() / (y_fin - y_in),
        }
    }

    /// Same profile with half the rise, so L′ and L″ are both halved.
    pub fn gentler(&self) -> WaveguideProfile {
        let shape = match self.shape {
            ProfileShape::SmoothStep { l_in, l_fin, y_in, y_fin } => ProfileShape::SmoothStep {
                l_in,
                l_fin: l_in + 0.5 * (l_fin - l_in),
                y_in,
                y_fin,
            },
            c => c,
        };
        WaveguideProfile { shape, ..*self }
    }

}

/// Seed ground state in the waveguide frame and its stretching point x̄.
fn seed_frame(seed: &SeedingSpec) -> Result<(WaveFunction, f64)> {
    let psi = seed.eigenpair(0)?.wavefunction;
    Ok(match *seed {
        SeedingSpec::InfiniteWell { width } => (psi.translated(width / 2.0), width / 2.0),
        SeedingSpec::Harmonic { .. } => (psi, 0.0),
    })
}

fn stretched_value(psi: &WaveFunction, xbar: f64, l: f64, x: f64) -> f64 {
    if x < xbar {
        psi.value(x)
    } else if x <= xbar + l {
        psi.value(xbar)
    } else {
        psi.value(x - l)
    }
}

/// e^{iky}·ψ₀^{[L(y)]}(x).
pub fn ansatz_state(profile: &WaveguideProfile, seed: &SeedingSpec, x: f64, y: f64) -> Result<Complex64> {
    let (psi, xbar) = seed_frame(seed)?;
    let amp = stretched_value(&psi, xbar, profile.length(y), x);
    Ok(Complex64::from_polar(1.0, profile.k * y) * amp)
}

/// Δ = −∂ᵧ²ψ̃ − 2ik∂ᵧψ̃ for ψ̃ = ψ₀^{[L(y)]}(x).
///
/// Equals Θ(x′ − x̄)·[ψ₀′(x′)(L″ + 2ikL′) − ψ₀″(x′)L′²] at x′ = x − L(y),
/// with Θ(0) = 1.
pub fn delta_residual(profile: &WaveguideProfile, seed: &SeedingSpec, x: f64, y: f64) -> Result<Complex64> {
    let (psi, xbar) = seed_frame(seed)?;
    let (l, dl, ddl) = profile.at(y);
    Ok(delta_at(&psi, xbar, profile.k, l, dl, ddl, x))
}

fn delta_at(psi: &WaveFunction, xbar: f64, k: f64, l: f64, dl: f64, ddl: f64, x: f64) -> Complex64 {
    let xp = x - l;
    if xp < xbar {
        return Complex64::new(0.0, 0.0);
    }
    let (d1, d2) = (psi.derivative(xp), psi.second_derivative(xp));
    Complex64::new(d1 * ddl - d2 * dl * dl, 2.0 * k * dl * d1)
}

/// ⟨p̂⁴⟩₀/⟨p̂²⟩₀ divided by (L″² + 4k²L′²)/(1 − L′²)²; +∞ where L is locally flat.
pub fn adiabaticity_margin(profile: &WaveguideProfile, y: f64) -> Result<f64> {
    let (_, dl, ddl) = profile.at(y);
    if dl.abs() >= 1.0 {
        return Err(Error::SlopeTooLarge(dl.abs()));
    }
    let rhs = (ddl * ddl + 4.0 * profile.k * profile.k * dl * dl) / (1.0 - dl * dl).powi(2);
    if rhs == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(profile.moments.p4 / profile.moments.p2 / rhs)
}

/// ‖Δ(·, y)‖/‖f‖ by quadrature, with ‖f‖ = √⟨p̂⁴⟩₀.
pub fn delta_norm_ratio(profile: &WaveguideProfile, seed: &SeedingSpec, y: f64) -> Result<f64> {
    let (psi, xbar) = seed_frame(seed)?;
    let (l, dl, ddl) = profile.at(y);
    let (_, end) = psi.effective_domain();
    let sq = integrate(
        |xp| delta_at(&psi, xbar, profile.k, l, dl, ddl, xp + l).norm_sqr(),
        xbar,
        end,
        64,
    );
    Ok(sq.sqrt() / profile.moments.p4.sqrt())
}

/// Upper bound (|L″ + 2ikL′|·√⟨p̂²⟩₀ + L′²·√⟨p̂⁴⟩₀)/√⟨p̂⁴⟩₀ on [`delta_norm_ratio`].
pub fn delta_norm_bound(profile: &WaveguideProfile, y: f64) -> f64 {
    let (_, dl, ddl) = profile.at(y);
    let m = profile.moments;
    let c = Complex64::new(ddl, 2.0 * profile.k * dl).norm();
    (c * m.p2.sqrt() + dl * dl * m.p4.sqrt()) / m.p4.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn smooth_step_derivatives_match_differences() {
        let seed = SeedingSpec::infinite_well(1.0).unwrap();
        let p = WaveguideProfile::new(
            ProfileShape::SmoothStep {
                l_in: 0.1,
                l_fin: 0.4,
                y_in: 0.0,
                y_fin: 3.0,
            },
            1.0,
            &seed,
        )
        .unwrap();
        let h = 1e-5;
        for y in [0.3, 1.1, 1.5, 2.2] {
            let (_, d, dd) = p.at(y);
            let fd = (p.length(y + h) - p.length(y - h)) / (2.0 * h);
            let fdd = (p.at(y + h).1 - p.at(y - h).1) / (2.0 * h);
            assert!((d - fd).abs() < 1e-8);
            assert!((dd - fdd).abs() < 1e-7);
        }
        assert!((p.at(1.5).1 - p.max_slope()).abs() < 1e-12);
        assert_eq!(p.at(-1.0), (0.1, 0.0, 0.0));
        assert_eq!(p.at(4.0).0, 0.4);
    }

    #[test]
    fn well_moments() {
        let m = seed_moments(&SeedingSpec::infinite_well(1.0).unwrap()).unwrap();
        assert_eq!(m.p2, PI * PI);
        assert!((m.p4 - PI.powi(4)).abs() < 1e-12);
    }
}
