use super::wavefunction::{Representation, WaveFunction};
use crate::{Error, Result};

/// A potential sampled on a uniform grid; `None` marks points where it is undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPotential {
    pub x0: f64,
    pub step: f64,
    pub values: Vec<Option<f64>>,
}

impl SampledPotential {
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + self.step * i as f64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Defined points as (x, V) pairs.
    pub fn defined(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(move |(i, v)| v.map(|v| (self.x(i), v)))
    }
}

const NODE_TOLERANCE: f64 = 1e-8;

/// V = E + ψ″/(2ψ) from a grid-sampled ψ.
///
/// ψ″ uses the five-point stencil where it fits and the three-point one next
/// to the ends. Endpoints and points with |ψ| < 1e−8·max|ψ| are left undefined.
pub fn reverse_engineer(psi: &WaveFunction, energy: f64) -> Result<SampledPotential> {
    let Representation::GridSampled { x0, step, values } = psi.representation() else {
        return Err(Error::InvalidParameter("a grid-sampled wavefunction is required".into()));
    };
    if !energy.is_finite() {
        return Err(Error::InvalidParameter(format!("energy {energy}")));
    }
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return Err(Error::ZeroWavefunction);
    }
    let n = values.len();
    let h2 = step * step;
    let out = (0..n)
        .map(|i| {
            if i == 0 || i == n - 1 || values[i].abs() < NODE_TOLERANCE * max {
                return None;
            }
            let d2 = if i >= 2 && i + 2 < n {
                (-values[i - 2] + 16.0 * values[i - 1] - 30.0 * values[i] + 16.0 * values[i + 1]
                    - values[i + 2])
                    / (12.0 * h2)
            } else {
                (values[i - 1] - 2.0 * values[i] + values[i + 1]) / h2
            };
            Some(energy + d2 / (2.0 * values[i]))
        })
        .collect();
    Ok(SampledPotential {
        x0: *x0,
        step: *step,
        values: out,
    })
}
