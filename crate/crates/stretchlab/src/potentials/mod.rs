//! Seeding potentials, the stretching transform and its inverse, and
//! potential reconstruction from a target wavefunction.

mod reverse;
mod segment;
mod stretch;
mod wavefunction;

pub use reverse::{reverse_engineer, SampledPotential};
pub use segment::{PiecewisePotential, Segment, SegmentForm, UnitSystem};
pub use stretch::{collapse, stretch, stretch_potential, stretch_wavefunction, Cut, StretchPlan};
pub use wavefunction::{
    count_nodes, find_stationary_points, Branch, EigenPair, Method, Piece, Representation,
    WaveFunction,
};

use crate::{Error, Result};
use std::f64::consts::PI;

/// The two seeding families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeedingSpec {
    /// Hard walls at ±width/2.
    InfiniteWell { width: f64 },
    /// V = ω²x²/2.
    Harmonic { omega: f64 },
}

impl SeedingSpec {
    pub fn infinite_well(width: f64) -> Result<SeedingSpec> {
        let s = SeedingSpec::InfiniteWell { width };
        s.validate()?;
        Ok(s)
    }

    pub fn harmonic(omega: f64) -> Result<SeedingSpec> {
        let s = SeedingSpec::Harmonic { omega };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SeedingSpec::InfiniteWell { width } if !(width > 0.0 && width.is_finite()) => {
                Err(Error::InvalidParameter(format!("well width must be positive, got {width}")))
            }
            SeedingSpec::Harmonic { omega } if !(omega > 0.0 && omega.is_finite()) => {
                Err(Error::InvalidParameter(format!("frequency must be positive, got {omega}")))
            }
            _ => Ok(()),
        }
    }

    pub fn units(&self) -> UnitSystem {
        match self {
            SeedingSpec::InfiniteWell { .. } => UnitSystem::Well,
            SeedingSpec::Harmonic { .. } => UnitSystem::Harmonic,
        }
    }

    /// E_n of the seed.
    pub fn energy(&self, n: usize) -> f64 {
        match *self {
            SeedingSpec::InfiniteWell { width } => {
                let m = (n + 1) as f64;
                PI * PI * m * m / (2.0 * width * width)
            }
            SeedingSpec::Harmonic { omega } => omega * (n as f64 + 0.5),
        }
    }

    pub fn potential(&self) -> Result<PiecewisePotential> {
        seed_potential(self)
    }

    pub fn eigenpair(&self, n: usize) -> Result<EigenPair> {
        seed_eigenpair(self, n)
    }
}

pub fn seed_potential(spec: &SeedingSpec) -> Result<PiecewisePotential> {
    spec.validate()?;
    let segments = match *spec {
        SeedingSpec::InfiniteWell { width } => vec![
            Segment::new(f64::NEG_INFINITY, -width / 2.0, SegmentForm::HardWall)?,
            Segment::new(-width / 2.0, width / 2.0, SegmentForm::Constant { value: 0.0 })?,
            Segment::new(width / 2.0, f64::INFINITY, SegmentForm::HardWall)?,
        ],
        SeedingSpec::Harmonic { omega } => vec![Segment::new(
            f64::NEG_INFINITY,
            f64::INFINITY,
            SegmentForm::Quadratic {
                center: 0.0,
                half_curvature: omega * omega / 2.0,
            },
        )?],
    };
    PiecewisePotential::new(segments, spec.units())
}

/// Closed-form ψ_n and E_n, signed so the leftmost lobe is positive.
pub fn seed_eigenpair(spec: &SeedingSpec, n: usize) -> Result<EigenPair> {
    spec.validate()?;
    let piece = match *spec {
        SeedingSpec::InfiniteWell { width } => Piece {
            lo: -width / 2.0,
            hi: width / 2.0,
            branch: Branch::Trig {
                cos: 0.0,
                sin: (2.0 / width).sqrt(),
                k: PI * (n + 1) as f64 / width,
                origin: -width / 2.0,
            },
        },
        SeedingSpec::Harmonic { omega } => {
            let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
            Piece {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
                branch: Branch::HermiteGauss {
                    n,
                    xi: omega.sqrt(),
                    origin: 0.0,
                    amplitude: sign * omega.sqrt().sqrt(),
                },
            }
        }
    };
    let wf = WaveFunction::analytic(vec![piece])?;
    Ok(EigenPair::new(spec.energy(n), wf, Method::Analytic))
}
