use super::CONFINEMENT_MARGIN;
use crate::potentials::{PiecewisePotential, SegmentForm};
use crate::{Error, Result};

/// Uniform grid `lo + i·h`, `i = 0..n_points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, n_points: usize) -> Result<Grid> {
        if n_points < 3 || !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "grid [{lo}, {hi}] with {n_points} points"
            )));
        }
        Ok(Grid { lo, hi, n_points })
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n_points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.hi
        } else {
            self.lo + self.step() * i as f64
        }
    }

    /// Same interval with every cell halved.
    pub fn refined(&self) -> Grid {
        Grid {
            lo: self.lo,
            hi: self.hi,
            n_points: 2 * self.n_points - 1,
        }
    }

    /// Grid for `v` with roughly `n_points` points.
    ///
    /// Hard walls become the end points. Open ends are pushed out until V
    /// exceeds the `n_max`-th level by a safe margin. The spacing is picked
    /// so that the potential's breakpoints fall on grid nodes when a
    /// commensurate spacing exists within a factor of two of the request.
    pub fn auto(v: &PiecewisePotential, n_max: usize, n_points: usize) -> Result<Grid> {
        let ceiling = level_ceiling(v, n_max)?;
        Grid::for_potential(v, ceiling + CONFINEMENT_MARGIN + 15.0, n_points)
    }

    /// Grid whose open ends reach V ≥ `v_end`.
    pub fn for_potential(v: &PiecewisePotential, v_end: f64, n_points: usize) -> Result<Grid> {
        if n_points < 3 {
            return Err(Error::InvalidParameter("need at least 3 grid points".into()));
        }
        let (slo, shi) = v.support();
        let bps = v.interior_breakpoints();
        let mut anchors: Vec<f64> = bps.clone();
        if slo.is_finite() {
            anchors.insert(0, slo);
        }
        if shi.is_finite() {
            anchors.push(shi);
        }
        let first = anchors.first().copied().unwrap_or(0.0);
        let last = anchors.last().copied().unwrap_or(0.0);
        let lo = if slo.is_finite() { slo } else { reach(v, first, -1.0, v_end)? };
        let hi = if shi.is_finite() { shi } else { reach(v, last, 1.0, v_end)? };
        let total = hi - lo;
        let target = (n_points - 1) as f64;
        let span = last - first;
        if anchors.len() < 2 || span <= 0.0 {
            let h = total / target;
            let pivot = anchors.first().copied().unwrap_or(0.5 * (lo + hi));
            let left = ((pivot - lo) / h).ceil();
            let right = ((hi - pivot) / h).ceil();
            return Grid::new(pivot - left * h, pivot + right * h, (left + right) as usize + 1);
        }
        let m_target = ((span / total) * target).round().max(1.0) as usize;
        let m = aligned_intervals(&anchors, m_target).unwrap_or(m_target);
        let h = span / m as f64;
        let left = if slo.is_finite() { 0.0 } else { ((first - lo) / h).ceil() };
        let right = if shi.is_finite() { 0.0 } else { ((hi - last) / h).ceil() };
        let n = m + left as usize + right as usize + 1;
        let g_lo = if slo.is_finite() { slo } else { first - left * h };
        let g_hi = if shi.is_finite() { shi } else { last + right * h };
        Grid::new(g_lo, g_hi, n)
    }
}

/// Smallest interval count in `[target, 2·target]` putting every anchor on a node.
pub(crate) fn aligned_intervals(anchors: &[f64], target: usize) -> Option<usize> {
    let first = anchors[0];
    let span = anchors[anchors.len() - 1] - first;
    (target..=2 * target).find(|&m| {
        anchors.iter().all(|&a| {
            let t = (a - first) / span * m as f64;
            (t - t.round()).abs() <= 1e-9 * m as f64
        })
    })
}

/// Walk outward from `start` until V ≥ `v_end`.
fn reach(v: &PiecewisePotential, start: f64, dir: f64, v_end: f64) -> Result<f64> {
    let mut step = 0.25;
    let mut x = start;
    for _ in 0..400 {
        if v.eval(x) >= v_end {
            return Ok(x + dir * 0.5);
        }
        x += dir * step;
        step *= 1.05;
    }
    Err(Error::InvalidParameter(format!(
        "potential does not rise to {v_end} towards {}",
        if dir < 0.0 { "-inf" } else { "+inf" }
    )))
}

/// Rough upper estimate for the `n_max`-th level, used to size open boxes.
fn level_ceiling(v: &PiecewisePotential, n_max: usize) -> Result<f64> {
    let (slo, shi) = v.support();
    let vmin = v.minimum();
    if !vmin.is_finite() {
        return Err(Error::InvalidParameter("potential is unbounded below".into()));
    }
    if slo.is_finite() && shi.is_finite() {
        return Ok(vmin);
    }
    let n = (n_max + 1) as f64;
    let mut ceiling = vmin;
    for s in v.segments() {
        match s.form {
            SegmentForm::Quadratic { half_curvature, .. } if half_curvature > 0.0 => {
                let omega = (2.0 * half_curvature).sqrt();
                ceiling = ceiling.max(vmin + 2.0 * omega * n);
            }
            SegmentForm::Constant { value } => ceiling = ceiling.max(value),
            _ => {}
        }
    }
    Ok(ceiling + 2.0 * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{stretch, SeedingSpec, StretchPlan};

    #[test]
    fn stretched_well_grid_is_aligned() {
        let seed = SeedingSpec::infinite_well(1.0).unwrap();
        let v = stretch(&seed, &StretchPlan::central(&seed, 0, 0.4).unwrap()).unwrap();
        let g = Grid::auto(&v, 3, 4001).unwrap();
        assert_eq!((g.lo, g.hi), (-0.7, 0.7));
        assert_eq!(g.n_points, 4005);
        for b in v.interior_breakpoints() {
            let t = (b - g.lo) / g.step();
            assert!((t - t.round()).abs() < 1e-9);
        }
    }

    #[test]
    fn harmonic_box_confines() {
        let seed = SeedingSpec::harmonic(1.0).unwrap();
        let v = seed.potential().unwrap();
        let g = Grid::auto(&v, 5, 4001).unwrap();
        assert!(v.eval(g.lo) - 5.5 >= CONFINEMENT_MARGIN);
        assert!(v.eval(g.hi) - 5.5 >= CONFINEMENT_MARGIN);
        let t = -g.lo / g.step();
        assert!((t - t.round()).abs() < 1e-9);
    }
}
