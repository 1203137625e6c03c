use crate::eigensolver::isolate;
use crate::potentials::{Branch, Piece, PiecewisePotential, SegmentForm, WaveFunction};
use crate::roots::illinois;
use crate::{Error, Result};

use std::f64::consts::PI;

/// Finite constant segments between the two walls.
fn constant_segments(v: &PiecewisePotential) -> Result<Vec<(f64, f64, f64)>> {
    if !v.has_wall_left() || !v.has_wall_right() {
        return Err(Error::Unsupported("transfer matrix needs hard walls at both ends".into()));
    }
    let segs = v.segments();
    segs[1..segs.len() - 1]
        .iter()
        .map(|s| match s.form {
            SegmentForm::Constant { value } => Ok((s.lo, s.hi, value)),
            _ => Err(Error::Unsupported(
                "transfer matrix needs a walls-and-constants potential".into(),
            )),
        })
        .collect()
}

/// (ψ, ψ′) after a width `w` of constant potential `v`.
fn propagate(psi: f64, dpsi: f64, e: f64, v: f64, w: f64) -> (f64, f64) {
    let d = 2.0 * (e - v);
    if d > 0.0 {
        let q = d.sqrt();
        let (s, c) = (q * w).sin_cos();
        (psi * c + dpsi * s / q, -psi * q * s + dpsi * c)
    } else if d < 0.0 {
        let q = (-d).sqrt();
        let (s, c) = ((q * w).sinh(), (q * w).cosh());
        (psi * c + dpsi * s / q, psi * q * s + dpsi * c)
    } else {
        (psi + dpsi * w, dpsi)
    }
}

fn sweep(segs: &[(f64, f64, f64)], e: f64, mut visit: impl FnMut(f64, f64, &(f64, f64, f64))) -> (f64, f64) {
    let (mut psi, mut dpsi) = (0.0, 1.0);
    for s in segs {
        visit(psi, dpsi, s);
        let (p, d) = propagate(psi, dpsi, e, s.2, s.1 - s.0);
        let n = p.hypot(d).max(1e-300);
        psi = p / n;
        dpsi = d / n;
    }
    (psi, dpsi)
}

/// ψ at the right wall for the solution leaving the left wall with unit
/// slope, rescaled so that (ψ, ψ′) is a unit vector. Its zeros are the
/// bound energies.
pub fn transfer_matrix_condition(v: &PiecewisePotential, e: f64) -> Result<f64> {
    let segs = constant_segments(v)?;
    Ok(sweep(&segs, e, |_, _, _| {}).0)
}

/// Zeros of the transfer-matrix solution strictly inside the walls, equal to
/// the number of bound energies below `e`.
pub fn transfer_node_count(v: &PiecewisePotential, e: f64) -> Result<usize> {
    let segs = constant_segments(v)?;
    Ok(count(&segs, e))
}

fn count(segs: &[(f64, f64, f64)], e: f64) -> usize {
    let mut nodes = 0usize;
    let mut tally = |psi: f64, dpsi: f64, s: &(f64, f64, f64)| {
        let w = s.1 - s.0;
        let d = 2.0 * (e - s.2);
        if d > 0.0 {
            let q = d.sqrt();
            let theta = (q * psi).atan2(dpsi);
            nodes += (((theta + q * w) / PI).floor() - (theta / PI).floor()) as usize;
        } else if psi != 0.0 {
            let (end, _) = propagate(psi, dpsi, e, s.2, w);
            if end * psi <= 0.0 {
                nodes += 1;
            }
        }
    };
    sweep(segs, e, &mut tally);
    nodes
}

/// Bound energies `0..=n_max` of a walls-and-constants potential.
pub fn transfer_matrix_levels(v: &PiecewisePotential, n_max: usize) -> Result<Vec<f64>> {
    let segs = constant_segments(v)?;
    let vmin = segs.iter().map(|s| s.2).fold(f64::INFINITY, f64::min);
    let brackets = isolate(|e| count(&segs, e), vmin, None, n_max)?;
    Ok(brackets
        .into_iter()
        .map(|(a, b)| {
            let f = |e| sweep(&segs, e, |_, _, _| {}).0;
            let (fa, fb) = (f(a), f(b));
            if fa * fb <= 0.0 {
                illinois(f, a, fa, b, fb)
            } else if fa.abs() < fb.abs() {
                a
            } else {
                b
            }
        })
        .collect())
}

/// Piecewise-analytic solution at energy `e`, built from the left wall.
///
/// Fails with [`Error::NotARoot`] when ψ at the right wall exceeds 1e−9 of
/// the largest |ψ|.
pub fn assemble_from_transfer(v: &PiecewisePotential, e: f64) -> Result<WaveFunction> {
    let segs = constant_segments(v)?;
    let mut pieces = Vec::with_capacity(segs.len());
    let (mut psi, mut dpsi) = (0.0, 1.0);
    for &(lo, hi, value) in &segs {
        let d = 2.0 * (e - value);
        let branch = if d > 0.0 {
            let q = d.sqrt();
            Branch::Trig {
                cos: psi,
                sin: dpsi / q,
                k: q,
                origin: lo,
            }
        } else if d < 0.0 {
            let q = (-d).sqrt();
            Branch::Hyperbolic {
                cosh: psi,
                sinh: dpsi / q,
                kappa: q,
                origin: lo,
            }
        } else {
            Branch::Linear {
                value: psi,
                slope: dpsi,
                origin: lo,
            }
        };
        pieces.push(Piece { lo, hi, branch });
        (psi, dpsi) = propagate(psi, dpsi, e, value, hi - lo);
    }
    let wf = WaveFunction::analytic(pieces)?;
    let mismatch = psi.abs() / wf.max_abs();
    if !(mismatch <= 1e-9) {
        return Err(Error::NotARoot { energy: e, mismatch });
    }
    wf.normalized().map(|w| w.with_positive_lead())
}
