//! Closed-form quantization conditions for centrally stretched wells and
//! oscillators and for the two-barrier well, plus a transfer-matrix condition
//! for any walls-and-constants potential.
//!
//! Conditions are evaluated in a cleared form free of tan/cot poles. Roots
//! are found by a phase-controlled scan plus bracketing, and every candidate
//! is accepted only if the assembled wavefunction joins smoothly.

mod transfer;

pub use transfer::{
    assemble_from_transfer, transfer_matrix_condition, transfer_matrix_levels, transfer_node_count,
};

use crate::potentials::{
    stretch, Branch, EigenPair, Method, Piece, PiecewisePotential, SeedingSpec, StretchPlan,
    WaveFunction,
};
use crate::roots::illinois;
use crate::specfun::{d_and_derivative, rgamma};
use crate::{Error, Result};
use serde::Serialize;
use std::f64::consts::SQRT_2;
use std::fmt;

/// Tolerance on the junction mismatch of an accepted root.
pub const ROOT_MISMATCH: f64 = 1e-9;

/// Scan ceiling as a multiple of the reference energy.
pub const CEILING_FACTOR: f64 = 60.0;

const PHASE_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Condition {
    GsEven,
    GsOdd,
    ExcBelowEven,
    ExcBelowOdd,
    TwoBarrierBelow,
    TwoBarrierAbove,
    HarmEvenBelow,
    HarmOddBelow,
    HarmEvenAbove,
    HarmOddAbove,
}

impl Condition {
    pub fn parity(self) -> Option<Parity> {
        use Condition::*;
        match self {
            GsEven | ExcBelowEven | HarmEvenBelow | HarmEvenAbove => Some(Parity::Even),
            GsOdd | ExcBelowOdd | HarmOddBelow | HarmOddAbove => Some(Parity::Odd),
            TwoBarrierBelow | TwoBarrierAbove => None,
        }
    }

    /// True for the branch E < E_ref.
    pub fn is_below(self) -> bool {
        use Condition::*;
        matches!(
            self,
            ExcBelowEven | ExcBelowOdd | TwoBarrierBelow | HarmEvenBelow | HarmOddBelow
        )
    }

    fn fits(self, g: &Geometry) -> bool {
        use Condition::*;
        match g {
            Geometry::CentralWell { .. } => matches!(self, GsEven | GsOdd | ExcBelowEven | ExcBelowOdd),
            Geometry::TwoBarrierWell { .. } => matches!(self, TwoBarrierBelow | TwoBarrierAbove),
            Geometry::CentralHarmonic { .. } => {
                matches!(self, HarmEvenBelow | HarmOddBelow | HarmEvenAbove | HarmOddAbove)
            }
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Stretched systems with closed-form conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Geometry {
    /// Well of width `width` with a plateau of `length` at E_level inserted at the centre.
    CentralWell { width: f64, length: f64, level: usize },
    /// Well with plateaus at E₁ inserted at x = −a/4 (`left`) and x = a/4 (`right`).
    TwoBarrierWell { width: f64, left: f64, right: f64 },
    /// Oscillator with a plateau of `length` at E_level inserted at the origin.
    CentralHarmonic { omega: f64, length: f64, level: usize },
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        let lengths_ok = match *self {
            Geometry::CentralWell { length, .. } | Geometry::CentralHarmonic { length, .. } => {
                length >= 0.0 && length.is_finite()
            }
            Geometry::TwoBarrierWell { left, right, .. } => {
                left >= 0.0 && right >= 0.0 && left.is_finite() && right.is_finite()
            }
        };
        if !lengths_ok {
            return Err(Error::InvalidParameter("plateau lengths must be finite and >= 0".into()));
        }
        match *self {
            Geometry::CentralWell { level, .. } | Geometry::CentralHarmonic { level, .. } if level % 2 == 1 => {
                Err(Error::InvalidParameter(format!(
                    "level {level} has a node, not a stationary point, at the centre"
                )))
            }
            _ => self.seed().validate(),
        }
    }

    pub fn seed(&self) -> SeedingSpec {
        match *self {
            Geometry::CentralWell { width, .. } | Geometry::TwoBarrierWell { width, .. } => {
                SeedingSpec::InfiniteWell { width }
            }
            Geometry::CentralHarmonic { omega, .. } => SeedingSpec::Harmonic { omega },
        }
    }

    /// Index of the stretched seed level.
    pub fn reference_level(&self) -> usize {
        match *self {
            Geometry::CentralWell { level, .. } | Geometry::CentralHarmonic { level, .. } => level,
            Geometry::TwoBarrierWell { .. } => 1,
        }
    }

    pub fn reference_energy(&self) -> f64 {
        self.seed().energy(self.reference_level())
    }

    pub fn plan(&self) -> Result<StretchPlan> {
        let seed = self.seed();
        match *self {
            Geometry::CentralWell { length, level, .. } | Geometry::CentralHarmonic { length, level, .. } => {
                StretchPlan::central(&seed, level, length)
            }
            Geometry::TwoBarrierWell { width, left, right } => {
                StretchPlan::new(&seed, 1, &[(-width / 4.0, left), (width / 4.0, right)])
            }
        }
    }

    pub fn potential(&self) -> Result<PiecewisePotential> {
        self.validate()?;
        stretch(&self.seed(), &self.plan()?)
    }

    pub fn conditions(&self) -> Vec<Condition> {
        use Condition::*;
        match self {
            Geometry::CentralWell { .. } => vec![ExcBelowEven, ExcBelowOdd, GsEven, GsOdd],
            Geometry::TwoBarrierWell { .. } => vec![TwoBarrierBelow, TwoBarrierAbove],
            Geometry::CentralHarmonic { .. } => {
                vec![HarmEvenBelow, HarmOddBelow, HarmEvenAbove, HarmOddAbove]
            }
        }
    }

    fn total_plateau(&self) -> f64 {
        match *self {
            Geometry::CentralWell { length, .. } | Geometry::CentralHarmonic { length, .. } => length,
            Geometry::TwoBarrierWell { left, right, .. } => left + right,
        }
    }

    /// Upper bound on |d(phase)/dE| of the condition's oscillating factors.
    fn phase_rate(&self, e: f64) -> f64 {
        let q = (2.0 * (e - self.reference_energy()).abs()).sqrt();
        let plateau = self.total_plateau() / q;
        let outer = match *self {
            Geometry::CentralWell { width, .. } | Geometry::TwoBarrierWell { width, .. } => {
                width / (2.0 * e).sqrt()
            }
            Geometry::CentralHarmonic { omega, .. } => 2.0 / omega,
        };
        outer + if plateau.is_nan() { 0.0 } else { plateau }
    }
}

/// k = √(2E) and the plateau wave number on the active side of E_ref.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveNumbers {
    pub k: f64,
    pub kbar: Option<f64>,
    pub gamma: Option<f64>,
}

impl WaveNumbers {
    pub fn new(e: f64, e_ref: f64) -> WaveNumbers {
        let d = 2.0 * (e - e_ref);
        WaveNumbers {
            k: (2.0 * e).max(0.0).sqrt(),
            kbar: (d >= 0.0).then(|| d.sqrt()),
            gamma: (d <= 0.0).then(|| (-d).sqrt()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantizationProblem {
    pub condition: Condition,
    pub geometry: Geometry,
}

impl QuantizationProblem {
    pub fn new(condition: Condition, geometry: Geometry) -> Result<QuantizationProblem> {
        geometry.validate()?;
        if !condition.fits(&geometry) {
            return Err(Error::InvalidParameter(format!(
                "{condition} does not apply to {geometry:?}"
            )));
        }
        Ok(QuantizationProblem { condition, geometry })
    }
}

/// sin(x)/x
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// sinh(x)/x
fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 6.0
    } else {
        x.sinh() / x
    }
}

/// Cleared residual of the problem's condition at energy `e`.
///
/// Odd-parity forms are divided by the plateau wave number so that they stay
/// finite and non-trivial at E = E_ref.
pub fn residual(problem: &QuantizationProblem, e: f64) -> Result<f64> {
    use Condition::*;
    let g = problem.geometry;
    let e_ref = g.reference_energy();
    let below = problem.condition.is_below();
    if !e.is_finite() || e < 0.0 || (below && e > e_ref) || (!below && e < e_ref) {
        return Err(Error::OutOfBranch {
            condition: problem.condition.to_string(),
            energy: e,
        });
    }
    let w = WaveNumbers::new(e, e_ref);
    let k = w.k;
    let r = match g {
        Geometry::CentralWell { width: a, length: l, .. } => {
            let (s, c) = (a * k / 2.0).sin_cos();
            match problem.condition {
                GsEven => {
                    let kb = w.kbar.unwrap();
                    k * c * (kb * l / 2.0).cos() - kb * s * (kb * l / 2.0).sin()
                }
                GsOdd => {
                    let kb = w.kbar.unwrap();
                    k * c * (l / 2.0) * sinc(kb * l / 2.0) + s * (kb * l / 2.0).cos()
                }
                ExcBelowEven => {
                    let gm = w.gamma.unwrap();
                    -k * c * (gm * l / 2.0).cosh() - gm * s * (gm * l / 2.0).sinh()
                }
                ExcBelowOdd => {
                    let gm = w.gamma.unwrap();
                    -k * c * (l / 2.0) * sinhc(gm * l / 2.0) - s * (gm * l / 2.0).cosh()
                }
                _ => unreachable!(),
            }
        }
        Geometry::TwoBarrierWell { width: a, left: l1, right: l2 } => match problem.condition {
            TwoBarrierBelow => {
                let gm = w.gamma.unwrap();
                let (k2, g2) = (k * k, gm * gm);
                -2.0 * (gm * (l1 + l2)).sinh()
                    * k
                    * gm
                    * ((k2 + g2) * (a * k / 2.0).cos() + (k2 - g2) * (a * k).cos())
                    + (gm * l1).sinh() * (gm * l2).sinh() * (a * k).sin() * (k2 - g2).powi(2)
                    + 2.0 * (gm * l2).sinh() * (gm * l1).sinh() * (a * k / 2.0).sin() * (k2 * k2 - g2 * g2)
                    - 4.0 * k2 * g2 * (gm * l2).cosh() * (gm * l1).cosh() * (a * k).sin()
            }
            TwoBarrierAbove => {
                let kb = w.kbar.unwrap();
                let (k2, b2) = (k * k, kb * kb);
                -(k2 - b2).powi(2) * (kb * (l2 - l1)).cos() * (a * k).sin()
                    + (k2 * k2 + 6.0 * k2 * b2 + b2 * b2) * (kb * (l1 + l2)).cos() * (a * k).sin()
                    - 4.0 * (k2 * k2 - b2 * b2) * (a * k / 2.0).sin() * (kb * l1).sin() * (kb * l2).sin()
                    + 4.0
                        * k
                        * kb
                        * (kb * (l1 + l2)).sin()
                        * ((k2 - b2) * (a * k / 2.0).cos() + (k2 + b2) * (a * k).cos())
            }
            _ => unreachable!(),
        },
        Geometry::CentralHarmonic { omega, length: l, .. } => {
            let eps = e / omega;
            let eps_n = e_ref / omega;
            let xi = omega.sqrt();
            let num = SQRT_2 * rgamma(0.25 - eps / 2.0);
            let den = rgamma(0.75 - eps / 2.0);
            let half = SQRT_2 * xi * l / 2.0;
            match problem.condition {
                HarmEvenBelow => {
                    let gm = (eps_n - eps).sqrt();
                    num * (half * gm).cosh() + gm * den * (half * gm).sinh()
                }
                HarmOddBelow => {
                    let gm = (eps_n - eps).sqrt();
                    num * half * sinhc(half * gm) + den * (half * gm).cosh()
                }
                HarmEvenAbove => {
                    let kb = (eps - eps_n).sqrt();
                    num * (half * kb).cos() - kb * den * (half * kb).sin()
                }
                HarmOddAbove => {
                    let kb = (eps - eps_n).sqrt();
                    num * half * sinc(half * kb) + den * (half * kb).cos()
                }
                _ => unreachable!(),
            }
        }
    };
    Ok(r)
}

/// Normalized eigenfunction at a root `e` of the problem's condition.
///
/// Fails with [`Error::NotARoot`] when the pieces do not join to within
/// [`ROOT_MISMATCH`].
pub fn assemble_wavefunction(problem: &QuantizationProblem, e: f64) -> Result<WaveFunction> {
    let g = problem.geometry;
    if let Geometry::TwoBarrierWell { .. } = g {
        return assemble_from_transfer(&g.potential()?, e);
    }
    let parity = problem.condition.parity().unwrap();
    let e_ref = g.reference_energy();
    let q = (2.0 * (e - e_ref).abs()).sqrt();
    let centre = match (parity, e >= e_ref, q > 0.0) {
        (Parity::Even, _, false) => Branch::Constant { value: 1.0 },
        (Parity::Odd, _, false) => Branch::Linear {
            value: 0.0,
            slope: 1.0,
            origin: 0.0,
        },
        (Parity::Even, true, true) => Branch::Trig {
            cos: 1.0,
            sin: 0.0,
            k: q,
            origin: 0.0,
        },
        (Parity::Odd, true, true) => Branch::Trig {
            cos: 0.0,
            sin: 1.0 / q,
            k: q,
            origin: 0.0,
        },
        (Parity::Even, false, true) => Branch::Hyperbolic {
            cosh: 1.0,
            sinh: 0.0,
            kappa: q,
            origin: 0.0,
        },
        (Parity::Odd, false, true) => Branch::Hyperbolic {
            cosh: 0.0,
            sinh: 1.0 / q,
            kappa: q,
            origin: 0.0,
        },
    };
    let sign = if parity == Parity::Even { 1.0 } else { -1.0 };
    let (half, length) = match g {
        Geometry::CentralWell { length, .. } | Geometry::CentralHarmonic { length, .. } => (length / 2.0, length),
        Geometry::TwoBarrierWell { .. } => unreachable!(),
    };
    let (pc, dpc) = centre.value_and_derivative(half);
    let (left, right, lo, hi) = match g {
        Geometry::CentralWell { width, .. } => {
            if e <= 0.0 {
                return Err(Error::NotARoot { energy: e, mismatch: f64::INFINITY });
            }
            let k = (2.0 * e).sqrt();
            let (s, c) = (k * width / 2.0).sin_cos();
            let amp = if s.abs() >= c.abs() { pc / s } else { -dpc / (k * c) };
            let wall = half + width / 2.0;
            let right = Branch::Trig {
                cos: 0.0,
                sin: -amp,
                k,
                origin: wall,
            };
            let left = Branch::Trig {
                cos: 0.0,
                sin: sign * amp,
                k,
                origin: -wall,
            };
            (left, right, -wall, wall)
        }
        Geometry::CentralHarmonic { omega, .. } => {
            let nu = e / omega - 0.5;
            let scale = SQRT_2 * omega.sqrt();
            let (d, dd) = d_and_derivative(nu, 0.0);
            let amp = if d.abs() >= dd.abs() { pc / d } else { dpc / (scale * dd) };
            let right = Branch::Cylinder {
                nu,
                scale,
                origin: half,
                amplitude: amp,
            };
            let left = Branch::Cylinder {
                nu,
                scale: -scale,
                origin: -half,
                amplitude: sign * amp,
            };
            (left, right, f64::NEG_INFINITY, f64::INFINITY)
        }
        Geometry::TwoBarrierWell { .. } => unreachable!(),
    };
    let mut pieces = vec![Piece {
        lo,
        hi: -half,
        branch: left,
    }];
    if length > 0.0 {
        pieces.push(Piece {
            lo: -half,
            hi: half,
            branch: centre,
        });
    }
    pieces.push(Piece {
        lo: half,
        hi,
        branch: right,
    });
    let mut wf = WaveFunction::analytic(pieces)?;
    let mismatch = wf.junction_mismatch();
    if !(mismatch <= ROOT_MISMATCH) {
        return Err(Error::NotARoot { energy: e, mismatch });
    }
    wf = wf.normalized()?;
    Ok(wf.with_positive_lead())
}

/// One bound level from [`solve_levels`].
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub energy: f64,
    pub parity: Option<Parity>,
    /// `None` for the stretched level at E_ref.
    pub condition: Option<Condition>,
    pub node_count: usize,
    pub wavefunction: WaveFunction,
}

/// A printed-condition root with no transfer-matrix counterpart, or the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discrepancy {
    pub condition: Condition,
    pub printed: Option<f64>,
    pub transfer: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub levels: Vec<Level>,
    pub discrepancies: Vec<Discrepancy>,
}

impl Spectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn eigenpairs(&self) -> Vec<EigenPair> {
        self.levels
            .iter()
            .map(|l| EigenPair::new(l.energy, l.wavefunction.clone(), Method::Analytic))
            .collect()
    }
}

/// Sign changes of `f` while walking from `from` towards `to`, refined to
/// machine precision. Stops after `limit` roots.
fn scan(
    f: &dyn Fn(f64) -> f64,
    rate: &dyn Fn(f64) -> f64,
    from: f64,
    to: f64,
    limit: usize,
) -> Vec<f64> {
    let dir = (to - from).signum();
    let min_step = 1e-13 * from.abs().max(to.abs()).max(1.0);
    let mut roots = Vec::new();
    let mut e = from;
    let mut fe = f(e);
    while roots.len() < limit && (to - e) * dir > 0.0 {
        let step = (PHASE_STEP / rate(e)).max(min_step);
        let next = if (to - e - dir * step) * dir <= 0.0 { to } else { e + dir * step };
        let fnext = f(next);
        if fe == 0.0 {
            roots.push(e);
        } else if fnext != 0.0 && (fnext > 0.0) != (fe > 0.0) {
            roots.push(illinois(f, e, fe, next, fnext));
        }
        e = next;
        fe = fnext;
    }
    roots
}

/// Roots of one condition: all of them below E_ref, or the first `limit`
/// above E_ref up to the scan ceiling.
fn condition_roots(problem: &QuantizationProblem, limit: usize) -> Vec<f64> {
    let g = problem.geometry;
    let e_ref = g.reference_energy();
    let delta = 1e-10 * e_ref;
    let f = |e: f64| residual(problem, e).unwrap_or(f64::NAN);
    let rate = |e: f64| g.phase_rate(e);
    let roots = if problem.condition.is_below() {
        scan(&f, &rate, e_ref - delta, 1e-9 * e_ref, usize::MAX)
    } else {
        scan(&f, &rate, e_ref + delta, CEILING_FACTOR * e_ref, limit)
    };
    roots.into_iter().filter(|e| e.is_finite()).collect()
}

/// Levels `0..=n_max` of the stretched geometry, sorted and parity-tagged.
///
/// For the two-barrier well the levels come from the transfer matrix; the
/// printed conditions are solved alongside and any root without a
/// transfer-matrix partner (or vice versa) within 1e−9 is returned as a
/// [`Discrepancy`].
pub fn solve_levels(geometry: &Geometry, n_max: usize) -> Result<Spectrum> {
    geometry.validate()?;
    let e_ref = geometry.reference_energy();
    let want = n_max + 1;
    let mut levels: Vec<Level> = Vec::new();
    let mut discrepancies = Vec::new();

    if let Geometry::TwoBarrierWell { .. } = geometry {
        let v = geometry.potential()?;
        let energies = transfer_matrix_levels(&v, n_max)?;
        for &e in &energies {
            let condition = if e == e_ref || ((e - e_ref) / e_ref).abs() < 1e-12 {
                None
            } else if e < e_ref {
                Some(Condition::TwoBarrierBelow)
            } else {
                Some(Condition::TwoBarrierAbove)
            };
            let wavefunction = assemble_from_transfer(&v, e)?;
            levels.push(Level {
                energy: e,
                parity: None,
                condition,
                node_count: wavefunction.node_count(),
                wavefunction,
            });
        }
        let top = energies.last().copied().unwrap_or(e_ref);
        let mut printed = Vec::new();
        for c in geometry.conditions() {
            let p = QuantizationProblem::new(c, *geometry)?;
            for e in condition_roots(&p, want) {
                if e <= top * (1.0 + 1e-9) {
                    printed.push((c, e));
                }
            }
        }
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(1.0);
        for &(c, e) in &printed {
            if !energies.iter().any(|&t| close(t, e)) {
                discrepancies.push(Discrepancy {
                    condition: c,
                    printed: Some(e),
                    transfer: None,
                });
            }
        }
        for &t in &energies {
            if close(t, e_ref) {
                continue;
            }
            let c = if t < e_ref {
                Condition::TwoBarrierBelow
            } else {
                Condition::TwoBarrierAbove
            };
            if !printed.iter().any(|&(_, e)| close(t, e)) {
                let nearest = printed
                    .iter()
                    .filter(|p| p.0 == c)
                    .map(|p| p.1)
                    .min_by(|a, b| (a - t).abs().total_cmp(&(b - t).abs()));
                discrepancies.push(Discrepancy {
                    condition: c,
                    printed: nearest,
                    transfer: Some(t),
                });
            }
        }
    } else {
        let mut push = |problem: &QuantizationProblem, e: f64, condition: Option<Condition>| {
            if let Ok(wavefunction) = assemble_wavefunction(problem, e) {
                levels.push(Level {
                    energy: e,
                    parity: problem.condition.parity(),
                    condition,
                    node_count: wavefunction.node_count(),
                    wavefunction,
                });
            }
        };
        for c in geometry.conditions() {
            let p = QuantizationProblem::new(c, *geometry)?;
            if !c.is_below() {
                push(&p, e_ref, None);
            }
            for e in condition_roots(&p, want) {
                push(&p, e, Some(c));
            }
        }
    }

    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    if levels.len() < want {
        return Err(Error::ScanCeiling {
            ceiling: CEILING_FACTOR * e_ref,
            found: levels.len(),
            requested: want,
        });
    }
    levels.truncate(want);
    for (i, l) in levels.iter().enumerate() {
        if l.node_count != i {
            return Err(Error::Internal(format!(
                "level {i} at E = {} has {} nodes",
                l.energy, l.node_count
            )));
        }
    }
    Ok(Spectrum { levels, discrepancies })
}
