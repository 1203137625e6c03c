use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    Well,
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentForm {
    HardWall,
    Constant { value: f64 },
    /// `half_curvature · (x − center)²`
    Quadratic { center: f64, half_curvature: f64 },
}

impl SegmentForm {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            SegmentForm::HardWall => f64::INFINITY,
            SegmentForm::Constant { value } => value,
            SegmentForm::Quadratic {
                center,
                half_curvature,
            } => half_curvature * (x - center) * (x - center),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            SegmentForm::Quadratic {
                center,
                half_curvature,
            } => 2.0 * half_curvature * (x - center),
            _ => 0.0,
        }
    }

    pub fn second_derivative(&self) -> f64 {
        match *self {
            SegmentForm::Quadratic { half_curvature, .. } => 2.0 * half_curvature,
            _ => 0.0,
        }
    }

    pub fn is_wall(&self) -> bool {
        matches!(self, SegmentForm::HardWall)
    }

    pub fn translated(&self, dx: f64) -> SegmentForm {
        match *self {
            SegmentForm::Quadratic {
                center,
                half_curvature,
            } => SegmentForm::Quadratic {
                center: center + dx,
                half_curvature,
            },
            other => other,
        }
    }

    /// ∫ₐᵇ V dx.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        match *self {
            SegmentForm::HardWall => f64::INFINITY,
            SegmentForm::Constant { value } => value * (b - a),
            SegmentForm::Quadratic {
                center,
                half_curvature,
            } => half_curvature * ((b - center).powi(3) - (a - center).powi(3)) / 3.0,
        }
    }

    pub fn approx_eq(&self, other: &SegmentForm, tol: f64) -> bool {
        match (*self, *other) {
            (SegmentForm::HardWall, SegmentForm::HardWall) => true,
            (SegmentForm::Constant { value: a }, SegmentForm::Constant { value: b }) => {
                (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
            }
            (
                SegmentForm::Quadratic {
                    center: c1,
                    half_curvature: k1,
                },
                SegmentForm::Quadratic {
                    center: c2,
                    half_curvature: k2,
                },
            ) => (c1 - c2).abs() <= tol * (1.0 + c1.abs()) && (k1 - k2).abs() <= tol * (1.0 + k1.abs()),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub form: SegmentForm,
}

impl Segment {
    pub fn new(lo: f64, hi: f64, form: SegmentForm) -> Result<Segment> {
        if lo.is_nan() || hi.is_nan() || !(lo < hi) {
            return Err(Error::InvalidPotential(format!("segment needs lo < hi, got [{lo}, {hi}]")));
        }
        match form {
            SegmentForm::Constant { value } if !value.is_finite() => {
                return Err(Error::InvalidPotential(format!("non-finite constant {value}")))
            }
            SegmentForm::Quadratic {
                center,
                half_curvature,
            } if !center.is_finite() || !half_curvature.is_finite() => {
                return Err(Error::InvalidPotential("non-finite quadratic coefficients".into()))
            }
            _ => {}
        }
        Ok(Segment { lo, hi, form })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.form.eval(x)
    }
}

/// A potential made of analytic pieces tiling the real line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PotentialDoc", into = "PotentialDoc")]
pub struct PiecewisePotential {
    segments: Vec<Segment>,
    units: UnitSystem,
}

impl PiecewisePotential {
    pub fn new(segments: Vec<Segment>, units: UnitSystem) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidPotential("no segments".into()));
        }
        let n = segments.len();
        if segments[0].lo != f64::NEG_INFINITY || segments[n - 1].hi != f64::INFINITY {
            return Err(Error::InvalidPotential("segments must cover the whole real line".into()));
        }
        for (i, s) in segments.iter().enumerate() {
            Segment::new(s.lo, s.hi, s.form)?;
            if i > 0 && segments[i - 1].hi != s.lo {
                return Err(Error::InvalidPotential(format!(
                    "gap or overlap between {} and {}",
                    segments[i - 1].hi,
                    s.lo
                )));
            }
            if s.form.is_wall() && i != 0 && i != n - 1 {
                return Err(Error::InvalidPotential("hard walls are only allowed at the ends".into()));
            }
        }
        if n == 1 && segments[0].form.is_wall() {
            return Err(Error::InvalidPotential("potential is a wall everywhere".into()));
        }
        Ok(PiecewisePotential { segments, units })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn units(&self) -> UnitSystem {
        self.units
    }

    /// Index of the segment with `lo <= x < hi`.
    pub fn segment_index(&self, x: f64) -> usize {
        let i = self.segments.partition_point(|s| s.hi <= x);
        i.min(self.segments.len() - 1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.segments[self.segment_index(x)].eval(x)
    }

    /// Left and right limits of V at `x`.
    pub fn one_sided(&self, x: f64) -> (SegmentForm, SegmentForm) {
        let right = self.segment_index(x);
        let left = if right > 0 && self.segments[right].lo == x {
            right - 1
        } else {
            right
        };
        (self.segments[left].form, self.segments[right].form)
    }

    /// The region between the hard walls (infinite if an end is open).
    pub fn support(&self) -> (f64, f64) {
        let first = &self.segments[0];
        let last = &self.segments[self.segments.len() - 1];
        let lo = if first.form.is_wall() { first.hi } else { f64::NEG_INFINITY };
        let hi = if last.form.is_wall() { last.lo } else { f64::INFINITY };
        (lo, hi)
    }

    pub fn has_wall_left(&self) -> bool {
        self.segments[0].form.is_wall()
    }

    pub fn has_wall_right(&self) -> bool {
        self.segments[self.segments.len() - 1].form.is_wall()
    }

    /// Finite boundaries strictly inside the support.
    pub fn interior_breakpoints(&self) -> Vec<f64> {
        let (lo, hi) = self.support();
        self.segments
            .iter()
            .skip(1)
            .map(|s| s.lo)
            .filter(|&b| b > lo && b < hi)
            .collect()
    }

    /// ∫ₐᵇ V dx for `a < b` inside the support.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let mut total = 0.0;
        for s in &self.segments {
            let lo = s.lo.max(a);
            let hi = s.hi.min(b);
            if hi > lo {
                total += s.form.integral(lo, hi);
            }
        }
        total
    }

    pub fn is_walls_and_constants(&self) -> bool {
        self.segments
            .iter()
            .all(|s| matches!(s.form, SegmentForm::HardWall | SegmentForm::Constant { .. }))
    }

    /// Smallest value of V over the support.
    pub fn minimum(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| match s.form {
                SegmentForm::HardWall => f64::INFINITY,
                SegmentForm::Constant { value } => value,
                SegmentForm::Quadratic {
                    center,
                    half_curvature,
                } => {
                    if half_curvature < 0.0 {
                        f64::NEG_INFINITY
                    } else if center >= s.lo && center <= s.hi {
                        0.0
                    } else {
                        s.eval(s.lo).min(s.eval(s.hi))
                    }
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn translated(&self, dx: f64) -> PiecewisePotential {
        let segments = self
            .segments
            .iter()
            .map(|s| Segment {
                lo: s.lo + dx,
                hi: s.hi + dx,
                form: s.form.translated(dx),
            })
            .collect();
        PiecewisePotential {
            segments,
            units: self.units,
        }
    }

    /// Merge neighbours that carry identical forms.
    pub fn merged(&self) -> PiecewisePotential {
        let mut out: Vec<Segment> = Vec::with_capacity(self.segments.len());
        for s in &self.segments {
            match out.last_mut() {
                Some(prev) if prev.form == s.form => prev.hi = s.hi,
                _ => out.push(*s),
            }
        }
        PiecewisePotential {
            segments: out,
            units: self.units,
        }
    }

    /// Segment-by-segment comparison with a relative tolerance on boundaries and coefficients.
    pub fn approx_eq(&self, other: &PiecewisePotential, tol: f64) -> bool {
        let close = |a: f64, b: f64| a == b || (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()));
        self.units == other.units
            && self.segments.len() == other.segments.len()
            && self.segments.iter().zip(&other.segments).all(|(a, b)| {
                close(a.lo, b.lo) && close(a.hi, b.hi) && a.form.approx_eq(&b.form, tol)
            })
    }

    /// Maximal intervals on which V is the constant `value`.
    pub fn plateaus(&self, value: f64) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for s in &self.segments {
            if s.form == (SegmentForm::Constant { value }) {
                match out.last_mut() {
                    Some(last) if last.1 == s.lo => last.1 = s.hi,
                    _ => out.push((s.lo, s.hi)),
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("potential serializes")
    }

    pub fn from_json(text: &str) -> Result<PiecewisePotential> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct PotentialDoc {
    #[serde(rename = "unitSystem")]
    unit_system: UnitSystem,
    segments: Vec<SegmentDoc>,
}

#[derive(Serialize, Deserialize)]
struct SegmentDoc {
    lo: Bound,
    hi: Bound,
    form: FormDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum FormDoc {
    Wall,
    Const {
        value: f64,
    },
    Quad {
        center: f64,
        #[serde(rename = "halfCurvature")]
        half_curvature: f64,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Bound {
    Finite(f64),
    Infinite(Infinity),
}

#[derive(Serialize, Deserialize)]
enum Infinity {
    #[serde(rename = "-inf")]
    Negative,
    #[serde(rename = "+inf")]
    Positive,
}

impl From<f64> for Bound {
    fn from(x: f64) -> Bound {
        if x == f64::INFINITY {
            Bound::Infinite(Infinity::Positive)
        } else if x == f64::NEG_INFINITY {
            Bound::Infinite(Infinity::Negative)
        } else {
            Bound::Finite(x)
        }
    }
}

impl From<Bound> for f64 {
    fn from(b: Bound) -> f64 {
        match b {
            Bound::Finite(x) => x,
            Bound::Infinite(Infinity::Positive) => f64::INFINITY,
            Bound::Infinite(Infinity::Negative) => f64::NEG_INFINITY,
        }
    }
}

impl TryFrom<PotentialDoc> for PiecewisePotential {
    type Error = Error;

    fn try_from(doc: PotentialDoc) -> Result<Self> {
        let segments = doc
            .segments
            .into_iter()
            .map(|s| {
                let form = match s.form {
                    FormDoc::Wall => SegmentForm::HardWall,
                    FormDoc::Const { value } => SegmentForm::Constant { value },
                    FormDoc::Quad {
                        center,
                        half_curvature,
                    } => SegmentForm::Quadratic {
                        center,
                        half_curvature,
                    },
                };
                Segment::new(s.lo.into(), s.hi.into(), form)
            })
            .collect::<Result<Vec<_>>>()?;
        PiecewisePotential::new(segments, doc.unit_system)
    }
}

impl From<PiecewisePotential> for PotentialDoc {
    fn from(p: PiecewisePotential) -> PotentialDoc {
        PotentialDoc {
            unit_system: p.units,
            segments: p
                .segments
                .iter()
                .map(|s| SegmentDoc {
                    lo: s.lo.into(),
                    hi: s.hi.into(),
                    form: match s.form {
                        SegmentForm::HardWall => FormDoc::Wall,
                        SegmentForm::Constant { value } => FormDoc::Const { value },
                        SegmentForm::Quadratic {
                            center,
                            half_curvature,
                        } => FormDoc::Quad {
                            center,
                            half_curvature,
                        },
                    },
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn well() -> PiecewisePotential {
        PiecewisePotential::new(
            vec![
                Segment::new(f64::NEG_INFINITY, -0.5, SegmentForm::HardWall).unwrap(),
                Segment::new(-0.5, 0.5, SegmentForm::Constant { value: 0.0 }).unwrap(),
                Segment::new(0.5, f64::INFINITY, SegmentForm::HardWall).unwrap(),
            ],
            UnitSystem::Well,
        )
        .unwrap()
    }

    #[test]
    fn tiling_is_enforced() {
        let gap = PiecewisePotential::new(
            vec![
                Segment::new(f64::NEG_INFINITY, -0.5, SegmentForm::HardWall).unwrap(),
                Segment::new(-0.4, f64::INFINITY, SegmentForm::Constant { value: 0.0 }).unwrap(),
            ],
            UnitSystem::Well,
        );
        assert!(gap.is_err());
        assert!(Segment::new(1.0, 1.0, SegmentForm::HardWall).is_err());
    }

    #[test]
    fn lookup_and_limits() {
        let v = well();
        assert_eq!(v.eval(0.0), 0.0);
        assert_eq!(v.eval(0.7), f64::INFINITY);
        assert_eq!(v.support(), (-0.5, 0.5));
        let (l, r) = v.one_sided(0.5);
        assert_eq!(l, SegmentForm::Constant { value: 0.0 });
        assert_eq!(r, SegmentForm::HardWall);
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let v = PiecewisePotential::new(
            vec![
                Segment::new(f64::NEG_INFINITY, -0.1, SegmentForm::Quadratic { center: 0.1, half_curvature: 0.5 })
                    .unwrap(),
                Segment::new(-0.1, 0.1, SegmentForm::Constant { value: 4.5 }).unwrap(),
                Segment::new(0.1, f64::INFINITY, SegmentForm::Quadratic { center: -0.1, half_curvature: 0.5 })
                    .unwrap(),
            ],
            UnitSystem::Harmonic,
        )
        .unwrap();
        let text = v.to_json();
        assert!(text.contains("\"-inf\"") && text.contains("halfCurvature"));
        assert_eq!(PiecewisePotential::from_json(&text).unwrap(), v);
    }
}
