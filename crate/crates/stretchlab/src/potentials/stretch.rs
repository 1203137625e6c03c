use super::segment::{PiecewisePotential, Segment, SegmentForm};
use super::wavefunction::{Branch, EigenPair, Piece, WaveFunction};
use super::SeedingSpec;
use crate::{Error, Result};

const STATIONARY_TOLERANCE: f64 = 1e-10;
const MERGE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cut {
    pub position: f64,
    pub length: f64,
}

/// Where to cut the seed, how much to insert, and at which energy.
#[derive(Debug, Clone, PartialEq)]
pub struct StretchPlan {
    pub level: usize,
    pub cuts: Vec<Cut>,
    pub plateau_energy: f64,
}

impl StretchPlan {
    /// Plan for level `level` with `(position, length)` cuts; validated against the seed.
    pub fn new(seed: &SeedingSpec, level: usize, cuts: &[(f64, f64)]) -> Result<StretchPlan> {
        let mut cuts: Vec<Cut> = cuts
            .iter()
            .map(|&(position, length)| Cut { position, length })
            .collect();
        cuts.sort_by(|a, b| a.position.total_cmp(&b.position));
        let plan = StretchPlan {
            level,
            cuts,
            plateau_energy: seed.energy(level),
        };
        plan.validate(seed)?;
        Ok(plan)
    }

    /// A single cut at the origin.
    pub fn central(seed: &SeedingSpec, level: usize, length: f64) -> Result<StretchPlan> {
        StretchPlan::new(seed, level, &[(0.0, length)])
    }

    pub fn validate(&self, seed: &SeedingSpec) -> Result<()> {
        seed.validate()?;
        let pair = seed.eigenpair(self.level)?;
        self.validate_against(&pair.wavefunction)
    }

    fn validate_against(&self, psi: &WaveFunction) -> Result<()> {
        if self.cuts.is_empty() {
            return Err(Error::InvalidParameter("a plan needs at least one cut".into()));
        }
        if !self.plateau_energy.is_finite() {
            return Err(Error::InvalidParameter("plateau energy must be finite".into()));
        }
        let dmax = psi.max_abs_derivative();
        let vmax = psi.max_abs();
        let (lo, hi) = psi.domain();
        for (i, c) in self.cuts.iter().enumerate() {
            if !(c.length >= 0.0) || !c.length.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "plateau length must be >= 0, got {}",
                    c.length
                )));
            }
            if i > 0 && self.cuts[i - 1].position >= c.position {
                return Err(Error::InvalidParameter("cut positions must be distinct and sorted".into()));
            }
            if !(c.position > lo && c.position < hi) || psi.value(c.position).abs() <= 1e-8 * vmax {
                return Err(Error::NotStationary {
                    x: c.position,
                    derivative: f64::NAN,
                    tolerance: STATIONARY_TOLERANCE * dmax,
                });
            }
            let d = psi.derivative(c.position).abs();
            if d > STATIONARY_TOLERANCE * dmax {
                return Err(Error::NotStationary {
                    x: c.position,
                    derivative: d,
                    tolerance: STATIONARY_TOLERANCE * dmax,
                });
            }
        }
        Ok(())
    }

    pub fn total_length(&self) -> f64 {
        self.cuts.iter().map(|c| c.length).sum()
    }

    /// A single cut at the origin is re-centered; otherwise the left wall stays put.
    pub fn is_centered(&self) -> bool {
        self.cuts.len() == 1 && self.cuts[0].position == 0.0
    }

    fn offset(&self) -> f64 {
        if self.is_centered() {
            -0.5 * self.cuts[0].length
        } else {
            0.0
        }
    }
}

/// Cut-and-insert on a seed potential, after validating the plan.
pub fn stretch(seed: &SeedingSpec, plan: &StretchPlan) -> Result<PiecewisePotential> {
    plan.validate(seed)?;
    stretch_potential(&seed.potential()?, plan)
}

/// Cut-and-insert on an arbitrary potential; cut positions are not checked.
pub fn stretch_potential(base: &PiecewisePotential, plan: &StretchPlan) -> Result<PiecewisePotential> {
    let mut out: Vec<Segment> = Vec::new();
    let mut emit = |hi: f64, form: SegmentForm| {
        let lo = out.last().map_or(f64::NEG_INFINITY, |s: &Segment| s.hi);
        if hi > lo {
            out.push(Segment { lo, hi, form });
        }
    };
    let mut shift = plan.offset();
    let mut next = 0;
    let plateau = SegmentForm::Constant {
        value: plan.plateau_energy,
    };
    for seg in base.segments() {
        while next < plan.cuts.len() && plan.cuts[next].position < seg.hi {
            let c = plan.cuts[next];
            if c.position >= seg.lo {
                if seg.form.is_wall() {
                    return Err(Error::InvalidParameter(format!("cut at {} lies in a wall", c.position)));
                }
                emit(c.position + shift, seg.form.translated(shift));
                emit(c.position + shift + c.length, plateau);
                shift += c.length;
            }
            next += 1;
        }
        emit(seg.hi + shift, seg.form.translated(shift));
    }
    Ok(PiecewisePotential::new(out, base.units())?.merged())
}

/// Translate the seed branches apart and fill each gap with the constant ψ(x̄).
pub fn stretch_wavefunction(seed_pair: &EigenPair, plan: &StretchPlan) -> Result<EigenPair> {
    let psi = &seed_pair.wavefunction;
    let Some(pieces) = psi.pieces() else {
        return Err(Error::InvalidParameter("stretching needs an analytic wavefunction".into()));
    };
    plan.validate_against(psi)?;
    let mut shift = plan.offset();
    let first_lo = pieces[0].lo + shift;
    let mut out: Vec<Piece> = Vec::new();
    let mut emit = |hi: f64, branch: Branch| {
        let lo = out.last().map_or(first_lo, |p: &Piece| p.hi);
        if hi > lo {
            out.push(Piece { lo, hi, branch });
        }
    };
    let mut next = 0;
    for p in pieces {
        while next < plan.cuts.len() && plan.cuts[next].position < p.hi {
            let c = plan.cuts[next];
            if c.position >= p.lo {
                let level = p.branch.value(c.position);
                emit(c.position + shift, p.branch.translated(shift));
                emit(c.position + shift + c.length, Branch::Constant { value: level });
                shift += c.length;
            }
            next += 1;
        }
        emit(p.hi + shift, p.branch.translated(shift));
    }
    let wf = WaveFunction::analytic(out)?.normalized()?;
    Ok(EigenPair::new(seed_pair.energy, wf, seed_pair.method))
}

/// Remove `length` from the right end of a constant plateau.
///
/// The plateau must be an interior constant region, not one bounded by a
/// hard wall. A plateau centered on the origin is removed symmetrically, mirroring a
/// central stretch.
pub fn collapse(w: &PiecewisePotential, plateau: (f64, f64), length: f64) -> Result<PiecewisePotential> {
    let (lo, hi) = plateau;
    if !(lo < hi) {
        return Err(Error::InvalidParameter(format!("empty plateau [{lo}, {hi}]")));
    }
    let width = hi - lo;
    let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    if !(length > 0.0) || length > width + slack {
        return Err(Error::InvalidParameter(format!(
            "collapse length {length} must lie in (0, {width}]"
        )));
    }
    let full = width - length <= slack;
    let length = if full { width } else { length };
    let run = constant_run(w, 0.5 * (lo + hi)).ok_or(Error::NotPlateau { lo, hi })?;
    if run.0 > lo + slack || run.1 < hi - slack {
        return Err(Error::NotPlateau { lo, hi });
    }
    let cut = if full { lo } else { hi - length };
    let offset = if (lo + hi).abs() <= slack { 0.5 * length } else { 0.0 };
    let mut out: Vec<Segment> = Vec::new();
    let mut emit = |end: f64, form: SegmentForm| {
        let start = out.last().map_or(f64::NEG_INFINITY, |s: &Segment| s.hi);
        if end <= start {
            return;
        }
        match out.last_mut() {
            Some(prev) if prev.form.approx_eq(&form, MERGE_TOLERANCE) => prev.hi = end,
            _ => out.push(Segment { lo: start, hi: end, form }),
        }
    };
    for s in w.segments() {
        if s.lo < cut {
            emit(s.hi.min(cut) + offset, s.form.translated(offset));
        }
        if s.hi > hi {
            emit(s.hi - length + offset, s.form.translated(offset - length));
        }
    }
    Ok(PiecewisePotential::new(out, w.units())?.merged())
}

fn constant_run(w: &PiecewisePotential, x: f64) -> Option<(f64, f64)> {
    let segs = w.segments();
    let i = w.segment_index(x);
    let SegmentForm::Constant { value } = segs[i].form else {
        return None;
    };
    let same = |s: &Segment| s.form == SegmentForm::Constant { value };
    let mut a = i;
    while a > 0 && same(&segs[a - 1]) {
        a -= 1;
    }
    let mut b = i;
    while b + 1 < segs.len() && same(&segs[b + 1]) {
        b += 1;
    }
    let walled = |j: Option<usize>| j.and_then(|j| segs.get(j)).is_some_and(|s| s.form.is_wall());
    if walled(a.checked_sub(1)) || walled(Some(b + 1)) {
        return None;
    }
    Some((segs[a].lo, segs[b].hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn well() -> SeedingSpec {
        SeedingSpec::infinite_well(1.0).unwrap()
    }

    #[test]
    fn central_well_stretch_layout() {
        let plan = StretchPlan::central(&well(), 0, 0.4).unwrap();
        let v = stretch(&well(), &plan).unwrap();
        let s = v.segments();
        assert_eq!(s.len(), 5);
        assert!((s[1].width() - 0.5).abs() < 1e-15);
        assert_eq!(s[2].form, SegmentForm::Constant { value: PI * PI / 2.0 });
        assert!((s[2].width() - 0.4).abs() < 1e-15);
        assert!((s[3].width() - 0.5).abs() < 1e-15);
        assert!((s[2].lo + s[2].hi).abs() < 1e-15);
    }

    #[test]
    fn zero_length_is_identity() {
        for seed in [well(), SeedingSpec::harmonic(1.0).unwrap()] {
            let plan = StretchPlan::central(&seed, 0, 0.0).unwrap();
            assert_eq!(stretch(&seed, &plan).unwrap(), seed.potential().unwrap());
            let pair = seed.eigenpair(0).unwrap();
            let st = stretch_wavefunction(&pair, &plan).unwrap();
            assert_eq!(st.wavefunction, pair.wavefunction);
        }
    }

    #[test]
    fn two_cut_table() {
        let plan = StretchPlan::new(&well(), 1, &[(-0.25, 0.4), (0.25, 0.2)]).unwrap();
        let v = stretch(&well(), &plan).unwrap();
        let e1 = 2.0 * PI * PI;
        let plats = v.plateaus(e1);
        assert_eq!(plats.len(), 2);
        assert!((plats[0].1 - plats[0].0 - 0.4).abs() < 1e-15);
        assert!((plats[1].1 - plats[1].0 - 0.2).abs() < 1e-15);
        assert_eq!(v.support().0, -0.5);
        assert!((v.support().1 - 1.1).abs() < 1e-15);
    }

    #[test]
    fn non_stationary_cut_rejected() {
        assert!(matches!(
            StretchPlan::central(&well(), 1, 0.3),
            Err(Error::NotStationary { .. })
        ));
        assert!(StretchPlan::central(&well(), 0, -0.1).is_err());
        assert!(StretchPlan::new(&well(), 0, &[(0.7, 0.1)]).is_err());
    }

    #[test]
    fn ground_state_plateau_value() {
        let plan = StretchPlan::central(&well(), 0, 0.4).unwrap();
        let st = stretch_wavefunction(&well().eigenpair(0).unwrap(), &plan).unwrap();
        let want = 2f64.sqrt() / 1.8f64.sqrt();
        assert!((st.wavefunction.value(0.1) - want).abs() < 1e-14);
        assert_eq!(st.wavefunction.derivative(0.0), 0.0);
        assert_eq!(st.energy, PI * PI / 2.0);
        assert_eq!(st.node_count, 0);
        assert!((st.wavefunction.norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn collapse_round_trip() {
        let plan = StretchPlan::central(&well(), 0, 0.4).unwrap();
        let v = stretch(&well(), &plan).unwrap();
        let p = v.plateaus(PI * PI / 2.0)[0];
        let back = collapse(&v, p, 0.4).unwrap();
        assert!(back.approx_eq(&well().potential().unwrap(), 1e-12));
        let half = collapse(&v, p, 0.2).unwrap();
        let expect = stretch(&well(), &StretchPlan::central(&well(), 0, 0.2).unwrap()).unwrap();
        assert!(half.approx_eq(&expect, 1e-12));
        assert!(matches!(
            collapse(&well().potential().unwrap(), (-0.1, 0.1), 0.1),
            Err(Error::NotPlateau { .. })
        ));
        assert!(collapse(&v, p, 0.5).is_err());
    }
}
