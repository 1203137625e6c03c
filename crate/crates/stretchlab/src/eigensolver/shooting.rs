use super::{check_levels, Grid, CONFINEMENT_MARGIN};
use crate::potentials::{EigenPair, Method, PiecewisePotential, SegmentForm, WaveFunction};
use crate::roots::{converged, illinois};
use crate::{Error, Result};

/// Potential sampled on a grid, with both one-sided limits at jumps.
pub(crate) struct GridPotential {
    pub lo: f64,
    pub h: f64,
    pub n: usize,
    pub minus: Vec<f64>,
    pub plus: Vec<f64>,
    pub junction: Vec<Option<(SegmentForm, SegmentForm, f64)>>,
}

impl GridPotential {
    pub fn new(v: &PiecewisePotential, grid: &Grid) -> Result<GridPotential> {
        let (slo, shi) = v.support();
        if grid.lo < slo - 1e-12 || grid.hi > shi + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "grid [{}, {}] leaves the support [{slo}, {shi}]",
                grid.lo, grid.hi
            )));
        }
        let n = grid.n_points;
        let h = grid.step();
        let mut minus: Vec<f64> = (0..n).map(|i| v.eval(grid.x(i))).collect();
        minus[0] = v.one_sided(grid.lo).1.eval(grid.lo);
        minus[n - 1] = v.one_sided(grid.hi).0.eval(grid.hi);
        let mut junction = vec![None; n];
        for b in v.interior_breakpoints() {
            if b <= grid.lo || b >= grid.hi {
                continue;
            }
            let t = (b - grid.lo) / h;
            let j = t.round() as usize;
            if (t - t.round()).abs() <= 1e-9 {
                if j == 0 || j + 1 >= n {
                    continue;
                }
                let (l, r) = v.one_sided(b);
                junction[j] = Some((l, r, b));
            } else {
                let a = (grid.x(j) - 0.5 * h).max(grid.lo);
                let c = (grid.x(j) + 0.5 * h).min(grid.hi);
                minus[j] = v.integral(a, c) / (c - a);
            }
        }
        let mut plus = minus.clone();
        for (j, jn) in junction.iter().enumerate() {
            if let Some((l, r, b)) = jn {
                minus[j] = l.eval(*b);
                plus[j] = r.eval(*b);
            }
        }
        if minus.iter().chain(&plus).any(|x| !x.is_finite()) {
            return Err(Error::InvalidPotential("hard wall inside the grid".into()));
        }
        Ok(GridPotential {
            lo: grid.lo,
            h,
            n,
            minus,
            plus,
            junction,
        })
    }

    pub fn minimum(&self) -> f64 {
        self.minus.iter().chain(&self.plus).copied().fold(f64::INFINITY, f64::min)
    }

    /// Value at node `i` as seen from the cell on side `dir` (+1 right, −1 left).
    fn side(&self, i: usize, dir: i64) -> f64 {
        if dir > 0 {
            self.plus[i]
        } else {
            self.minus[i]
        }
    }

    /// Dirichlet solution integrated from one end. `dir` is +1 from the left
    /// and −1 from the right; `stop` is the last node filled.
    fn integrate(&self, e: f64, dir: i64, stop: usize) -> Vec<f64> {
        let n = self.n;
        let h2 = self.h * self.h;
        let mut y = vec![0.0; n];
        let idx = |k: usize| -> usize {
            if dir > 0 {
                k
            } else {
                n - 1 - k
            }
        };
        let steps = if dir > 0 { stop } else { n - 1 - stop };
        y[idx(1)] = 1e-30;
        for k in 1..steps {
            let (p, j, q) = (idx(k - 1), idx(k), idx(k + 1));
            let next = if let Some((l, r, b)) = self.junction[j] {
                let (incoming, outgoing) = if dir > 0 { (l, r) } else { (r, l) };
                taylor_restart(y[p], y[j], b, e, &incoming, &outgoing, dir as f64 * self.h)
            } else {
                let fp = 2.0 * (self.side(p, dir) - e);
                let fj = 2.0 * (self.minus[j] - e);
                let fq = 2.0 * (self.side(q, -dir) - e);
                (2.0 * y[j] * (1.0 + 5.0 * h2 * fj / 12.0) - y[p] * (1.0 - h2 * fp / 12.0))
                    / (1.0 - h2 * fq / 12.0)
            };
            y[q] = next;
            if next.abs() > 1e150 {
                let s = 1.0 / next.abs();
                for k2 in 0..=k + 1 {
                    y[idx(k2)] *= s;
                }
            }
        }
        y
    }

    /// Sign changes of the left-started solution over the whole grid.
    pub fn count(&self, e: f64) -> usize {
        let y = self.integrate(e, 1, self.n - 1);
        sign_changes(&y[1..])
    }

    fn matching_node(&self, e: f64) -> usize {
        let n = self.n;
        let m = (2..n - 2)
            .rev()
            .find(|&i| self.minus[i].max(self.plus[i]) < e)
            .unwrap_or(n / 2);
        m.clamp(2, n - 4)
    }

    /// Scale-free Wronskian of the two one-sided solutions at `m`, `m + 1`.
    fn mismatch(&self, e: f64, m: usize) -> f64 {
        let l = self.integrate(e, 1, m + 1);
        let r = self.integrate(e, -1, m);
        let w = l[m] * r[m + 1] - l[m + 1] * r[m];
        w / (l[m].hypot(l[m + 1]) * r[m].hypot(r[m + 1]))
    }

    fn eigenvector(&self, e: f64, m: usize) -> Vec<f64> {
        let l = self.integrate(e, 1, m + 1);
        let r = self.integrate(e, -1, m);
        let (a, b) = if r[m].abs() >= r[m + 1].abs() {
            (l[m], r[m])
        } else {
            (l[m + 1], r[m + 1])
        };
        let s = a / b;
        let mut y = l;
        for i in m + 1..self.n {
            y[i] = r[i] * s;
        }
        y
    }
}

fn sign_changes(y: &[f64]) -> usize {
    let mut last = 0.0;
    let mut count = 0;
    for &v in y {
        if v != 0.0 {
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v;
        }
    }
    count
}

/// One step across a potential jump at `x`: recover ψ′ from the incoming
/// side, then step out with the Taylor series of the outgoing side.
fn taylor_restart(
    y_prev: f64,
    y: f64,
    x: f64,
    e: f64,
    incoming: &SegmentForm,
    outgoing: &SegmentForm,
    s: f64,
) -> f64 {
    let coeffs = |f: &SegmentForm| {
        let f0 = 2.0 * (f.eval(x) - e);
        let f1 = 2.0 * f.derivative(x);
        let f2 = 2.0 * f.second_derivative();
        [
            f0 / 2.0,
            f1 / 6.0,
            (f2 + f0 * f0) / 24.0,
            4.0 * f0 * f1 / 120.0,
            f0 / 6.0,
            2.0 * f1 / 24.0,
            (3.0 * f2 + f0 * f0) / 120.0,
        ]
    };
    let (s2, s3, s4, s5) = (s * s, s * s * s, s.powi(4), s.powi(5));
    let c = coeffs(incoming);
    let a = y * (1.0 + s2 * c[0] - s3 * c[1] + s4 * c[2] - s5 * c[3]);
    let b = -s - s3 * c[4] + s4 * c[5] - s5 * c[6];
    let dy = (y_prev - a) / b;
    let c = coeffs(outgoing);
    y * (1.0 + s2 * c[0] + s3 * c[1] + s4 * c[2] + s5 * c[3]) + dy * (s + s3 * c[4] + s4 * c[5] + s5 * c[6])
}

/// Number of eigenvalues of the discretized problem below `e`.
pub fn eigenvalue_count(v: &PiecewisePotential, grid: &Grid, e: f64) -> Result<usize> {
    Ok(GridPotential::new(v, grid)?.count(e))
}

/// Levels `0..=n_max` by Numerov shooting.
///
/// Each level is isolated by bisecting on the eigenvalue count, then refined
/// on the matching Wronskian. Eigenvectors are sampled on `grid`, normalized
/// and signed so that the leftmost lobe is positive.
pub fn bound_states(v: &PiecewisePotential, grid: &Grid, n_max: usize) -> Result<Vec<EigenPair>> {
    let gp = GridPotential::new(v, grid)?;
    let brackets = isolate(|e| gp.count(e), gp.minimum(), ceiling(v, grid)?, n_max)?;
    let mut out = Vec::with_capacity(n_max + 1);
    for (a, b) in brackets {
        let m = gp.matching_node(0.5 * (a + b));
        let e = refine(|e| gp.mismatch(e, m), |e| gp.count(e), a, b, out.len());
        let kmax = (2.0 * (e - gp.minimum())).max(0.0).sqrt();
        if kmax * gp.h > 0.5 {
            return Err(Error::GridTooCoarse(format!(
                "k·h = {} at E = {e}",
                kmax * gp.h
            )));
        }
        let m = gp.matching_node(e);
        let wf = WaveFunction::sampled(gp.lo, gp.h, gp.eigenvector(e, m))?
            .normalized()?
            .with_positive_lead();
        out.push(EigenPair::new(e, wf, Method::Shooting));
    }
    check_levels(&out)?;
    Ok(out)
}

/// Highest energy the grid represents faithfully.
pub(crate) fn ceiling(v: &PiecewisePotential, grid: &Grid) -> Result<Option<f64>> {
    let (slo, shi) = v.support();
    let mut limit = f64::INFINITY;
    if !slo.is_finite() || grid.lo > slo + 1e-12 {
        limit = limit.min(v.eval(grid.lo) - CONFINEMENT_MARGIN);
    }
    if !shi.is_finite() || grid.hi < shi - 1e-12 {
        limit = limit.min(v.eval(grid.hi) - CONFINEMENT_MARGIN);
    }
    Ok(limit.is_finite().then_some(limit))
}

/// Brackets `(a, b)` with exactly `k` eigenvalues below `a` and `k + 1` below `b`.
pub(crate) fn isolate(
    count: impl Fn(f64) -> usize,
    vmin: f64,
    limit: Option<f64>,
    n_max: usize,
) -> Result<Vec<(f64, f64)>> {
    let want = n_max + 1;
    let mut probes: Vec<(f64, usize)> = vec![(vmin, 0)];
    let mut span = 1.0;
    loop {
        let mut e = vmin + span;
        if let Some(l) = limit {
            e = e.min(l);
        }
        let c = count(e);
        probes.push((e, c));
        if c >= want {
            break;
        }
        if limit.is_some_and(|l| e >= l) || span > 1e12 {
            return Err(Error::InsufficientBoundStates {
                found: c,
                requested: want,
            });
        }
        span *= 2.0;
    }
    let mut out = Vec::with_capacity(want);
    for k in 0..want {
        loop {
            let a = probes
                .iter()
                .filter(|p| p.1 <= k)
                .max_by(|x, y| x.0.total_cmp(&y.0))
                .copied()
                .unwrap();
            let b = probes
                .iter()
                .filter(|p| p.1 > k)
                .min_by(|x, y| x.0.total_cmp(&y.0))
                .copied()
                .unwrap();
            if a.1 == k && b.1 == k + 1 {
                out.push((a.0, b.0));
                break;
            }
            let mid = 0.5 * (a.0 + b.0);
            if mid <= a.0 || mid >= b.0 {
                return Err(Error::Internal(format!("cannot separate level {k} near {mid}")));
            }
            probes.push((mid, count(mid)));
        }
    }
    Ok(out)
}

/// Zero of `f` inside an isolating bracket; falls back to counting if `f`
/// does not change sign there.
pub(crate) fn refine(f: impl Fn(f64) -> f64, count: impl Fn(f64) -> usize, a: f64, b: f64, k: usize) -> f64 {
    let (fa, fb) = (f(a), f(b));
    if fa * fb <= 0.0 && fa.is_finite() && fb.is_finite() {
        return illinois(f, a, fa, b, fb);
    }
    let (mut a, mut b) = (a, b);
    while !converged(a, b) {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if count(mid) <= k {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}
