use crate::quadrature::integrate;
use crate::specfun::{d_and_derivative, d_value, hermite_function};
use crate::{Error, Result};

/// Closed-form solution on one interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Branch {
    Constant {
        value: f64,
    },
    /// `value + slope·(x − origin)`
    Linear {
        value: f64,
        slope: f64,
        origin: f64,
    },
    /// `cos·cos(k(x − origin)) + sin·sin(k(x − origin))`
    Trig {
        cos: f64,
        sin: f64,
        k: f64,
        origin: f64,
    },
    /// `cosh·cosh(κ(x − origin)) + sinh·sinh(κ(x − origin))`
    Hyperbolic {
        cosh: f64,
        sinh: f64,
        kappa: f64,
        origin: f64,
    },
    /// `amplitude·φ_n(ξ(x − origin))` with φ_n the normalized Hermite function.
    HermiteGauss {
        n: usize,
        xi: f64,
        origin: f64,
        amplitude: f64,
    },
    /// `amplitude·D_ν(scale·(x − origin))`
    Cylinder {
        nu: f64,
        scale: f64,
        origin: f64,
        amplitude: f64,
    },
}

impl Branch {
    pub fn value(&self, x: f64) -> f64 {
        self.value_and_derivative(x).0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.value_and_derivative(x).1
    }

    pub fn value_and_derivative(&self, x: f64) -> (f64, f64) {
        match *self {
            Branch::Constant { value } => (value, 0.0),
            Branch::Linear {
                value,
                slope,
                origin,
            } => (value + slope * (x - origin), slope),
            Branch::Trig { cos, sin, k, origin } => {
                let (s, c) = (k * (x - origin)).sin_cos();
                (cos * c + sin * s, k * (sin * c - cos * s))
            }
            Branch::Hyperbolic {
                cosh,
                sinh,
                kappa,
                origin,
            } => {
                let t = kappa * (x - origin);
                let (ch, sh) = (t.cosh(), t.sinh());
                (cosh * ch + sinh * sh, kappa * (cosh * sh + sinh * ch))
            }
            Branch::HermiteGauss {
                n,
                xi,
                origin,
                amplitude,
            } => {
                let (v, d) = hermite_function(n, xi * (x - origin));
                (amplitude * v, amplitude * xi * d)
            }
            Branch::Cylinder {
                nu,
                scale,
                origin,
                amplitude,
            } => {
                let (v, d) = d_and_derivative(nu, scale * (x - origin));
                (amplitude * v, amplitude * scale * d)
            }
        }
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        match *self {
            Branch::Constant { .. } | Branch::Linear { .. } => 0.0,
            Branch::Trig { k, .. } => -k * k * self.value(x),
            Branch::Hyperbolic { kappa, .. } => kappa * kappa * self.value(x),
            Branch::HermiteGauss { n, xi, origin, .. } => {
                let t = xi * (x - origin);
                xi * xi * (t * t - 2.0 * n as f64 - 1.0) * self.value(x)
            }
            Branch::Cylinder {
                nu,
                scale,
                origin,
                amplitude,
            } => {
                let z = scale * (x - origin);
                amplitude * scale * scale * (0.25 * z * z - nu - 0.5) * d_value(nu, z)
            }
        }
    }

    pub fn scaled(&self, f: f64) -> Branch {
        match *self {
            Branch::Constant { value } => Branch::Constant { value: f * value },
            Branch::Linear {
                value,
                slope,
                origin,
            } => Branch::Linear {
                value: f * value,
                slope: f * slope,
                origin,
            },
            Branch::Trig { cos, sin, k, origin } => Branch::Trig {
                cos: f * cos,
                sin: f * sin,
                k,
                origin,
            },
            Branch::Hyperbolic {
                cosh,
                sinh,
                kappa,
                origin,
            } => Branch::Hyperbolic {
                cosh: f * cosh,
                sinh: f * sinh,
                kappa,
                origin,
            },
            Branch::HermiteGauss {
                n,
                xi,
                origin,
                amplitude,
            } => Branch::HermiteGauss {
                n,
                xi,
                origin,
                amplitude: f * amplitude,
            },
            Branch::Cylinder {
                nu,
                scale,
                origin,
                amplitude,
            } => Branch::Cylinder {
                nu,
                scale,
                origin,
                amplitude: f * amplitude,
            },
        }
    }

    pub fn translated(&self, dx: f64) -> Branch {
        let mut b = *self;
        match &mut b {
            Branch::Constant { .. } => {}
            Branch::Linear { origin, .. }
            | Branch::Trig { origin, .. }
            | Branch::Hyperbolic { origin, .. }
            | Branch::HermiteGauss { origin, .. }
            | Branch::Cylinder { origin, .. } => *origin += dx,
        }
        b
    }

    /// Distance over which the branch changes appreciably.
    fn length_scale(&self) -> f64 {
        match *self {
            Branch::Constant { .. } | Branch::Linear { .. } => f64::INFINITY,
            Branch::Trig { k, .. } => 1.0 / k.abs().max(1e-300),
            Branch::Hyperbolic { kappa, .. } => 1.0 / kappa.abs().max(1e-300),
            Branch::HermiteGauss { n, xi, .. } => 1.0 / (xi * (2.0 * n as f64 + 1.0).sqrt()),
            Branch::Cylinder { nu, scale, .. } => 1.0 / (scale.abs() * (nu.abs() + 1.0).sqrt()),
        }
    }

    /// Finite interval outside which the branch is negligible, for infinite pieces.
    fn decay_window(&self) -> Option<(f64, f64)> {
        match *self {
            Branch::HermiteGauss { n, xi, origin, .. } => {
                let t = (2.0 * n as f64 + 1.0).sqrt() + 9.5;
                Some((origin - t / xi, origin + t / xi))
            }
            Branch::Cylinder {
                nu, scale, origin, ..
            } => {
                let z = 2.0 * (nu.abs() + 1.0).sqrt() + 13.0;
                let a = origin - z / scale.abs();
                let b = origin + z / scale.abs();
                if scale > 0.0 {
                    Some((f64::NEG_INFINITY, b))
                } else {
                    Some((a, f64::INFINITY))
                }
            }
            _ => None,
        }
    }

    fn stationary_points(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = Vec::new();
        match *self {
            Branch::Constant { .. } => {
                out.push(lo);
                out.push(hi);
            }
            Branch::Linear { slope, .. } => {
                if slope == 0.0 {
                    out.push(lo);
                    out.push(hi);
                }
            }
            Branch::Trig { cos, sin, k, origin } => {
                let theta0 = sin.atan2(cos);
                let m_lo = ((k * (lo - origin) - theta0) / std::f64::consts::PI).floor() as i64 - 1;
                let m_hi = ((k * (hi - origin) - theta0) / std::f64::consts::PI).ceil() as i64 + 1;
                for m in m_lo..=m_hi {
                    out.push(origin + (theta0 + m as f64 * std::f64::consts::PI) / k);
                }
            }
            Branch::Hyperbolic {
                cosh,
                sinh,
                kappa,
                origin,
            } => {
                if cosh != 0.0 && (sinh / cosh).abs() < 1.0 {
                    out.push(origin + (-sinh / cosh).atanh() / kappa);
                }
            }
            Branch::HermiteGauss { .. } | Branch::Cylinder { .. } => {
                let (a, b) = match self.decay_window() {
                    Some((wa, wb)) => (lo.max(wa), hi.min(wb)),
                    None => (lo, hi),
                };
                let h = self.length_scale() / 64.0;
                let n = (((b - a) / h).ceil() as usize).max(4);
                let step = (b - a) / n as f64;
                let mut prev_x = a;
                let mut prev = self.derivative(a);
                for i in 1..=n {
                    let x = a + step * i as f64;
                    let d = self.derivative(x);
                    if prev == 0.0 {
                        out.push(prev_x);
                    } else if prev * d < 0.0 {
                        out.push(bisect(|t| self.derivative(t), prev_x, x));
                    }
                    prev = d;
                    prev_x = x;
                }
            }
        }
        let tol = 1e-12 * (1.0 + lo.abs().max(hi.abs()).min(1e6));
        out.retain(|&x| x >= lo - tol && x <= hi + tol);
        out
    }
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    PiecewiseAnalytic(Vec<Piece>),
    /// Values at `x0 + i·step`.
    GridSampled { x0: f64, step: f64, values: Vec<f64> },
}

/// A real wavefunction, zero outside its pieces or grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    representation: Representation,
    node_count: usize,
    norm: f64,
}

const NODE_FLOOR: f64 = 1e-9;

impl WaveFunction {
    pub fn analytic(pieces: Vec<Piece>) -> Result<WaveFunction> {
        if pieces.is_empty() {
            return Err(Error::InvalidParameter("wavefunction without pieces".into()));
        }
        for (i, p) in pieces.iter().enumerate() {
            if !(p.lo < p.hi) {
                return Err(Error::InvalidParameter(format!("empty piece [{}, {}]", p.lo, p.hi)));
            }
            if i > 0 && pieces[i - 1].hi != p.lo {
                return Err(Error::InvalidParameter("pieces must be contiguous".into()));
            }
        }
        let mut merged: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match merged.last_mut() {
                Some(last) if last.branch == p.branch => last.hi = p.hi,
                _ => merged.push(p),
            }
        }
        let mut wf = WaveFunction {
            representation: Representation::PiecewiseAnalytic(merged),
            node_count: 0,
            norm: 0.0,
        };
        wf.refresh()?;
        Ok(wf)
    }

    pub fn sampled(x0: f64, step: f64, values: Vec<f64>) -> Result<WaveFunction> {
        if values.len() < 3 || !(step > 0.0) || !x0.is_finite() {
            return Err(Error::InvalidParameter("grid needs >= 3 points and positive spacing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite sample".into()));
        }
        let mut wf = WaveFunction {
            representation: Representation::GridSampled { x0, step, values },
            node_count: 0,
            norm: 0.0,
        };
        wf.refresh()?;
        Ok(wf)
    }

    fn refresh(&mut self) -> Result<()> {
        self.norm = self.square_integral()?;
        self.node_count = count_sign_changes(&self.profile_samples());
        Ok(())
    }

    pub fn representation(&self) -> &Representation {
        &self.representation
    }

    pub fn pieces(&self) -> Option<&[Piece]> {
        match &self.representation {
            Representation::PiecewiseAnalytic(p) => Some(p),
            _ => None,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// ∫|ψ|².
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self.representation, Representation::PiecewiseAnalytic(_))
    }

    /// Extent of the pieces or grid.
    pub fn domain(&self) -> (f64, f64) {
        match &self.representation {
            Representation::PiecewiseAnalytic(p) => (p[0].lo, p[p.len() - 1].hi),
            Representation::GridSampled { x0, step, values } => {
                (*x0, x0 + step * (values.len() - 1) as f64)
            }
        }
    }

    /// Finite window carrying all of the probability.
    pub fn effective_domain(&self) -> (f64, f64) {
        match &self.representation {
            Representation::PiecewiseAnalytic(p) => {
                let (a, _) = effective_interval(&p[0]);
                let (_, b) = effective_interval(&p[p.len() - 1]);
                (a, b)
            }
            _ => self.domain(),
        }
    }

    fn piece_at(pieces: &[Piece], x: f64) -> Option<&Piece> {
        if x < pieces[0].lo || x > pieces[pieces.len() - 1].hi {
            return None;
        }
        let i = pieces.partition_point(|p| p.hi <= x).min(pieces.len() - 1);
        Some(&pieces[i])
    }

    pub fn value(&self, x: f64) -> f64 {
        match &self.representation {
            Representation::PiecewiseAnalytic(p) => {
                Self::piece_at(p, x).map_or(0.0, |pc| pc.branch.value(x))
            }
            Representation::GridSampled { x0, step, values } => {
                let t = (x - x0) / step;
                if t < 0.0 || t > (values.len() - 1) as f64 {
                    return 0.0;
                }
                let i = (t.floor() as usize).min(values.len() - 2);
                let f = t - i as f64;
                values[i] * (1.0 - f) + values[i + 1] * f
            }
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match &self.representation {
            Representation::PiecewiseAnalytic(p) => {
                Self::piece_at(p, x).map_or(0.0, |pc| pc.branch.derivative(x))
            }
            Representation::GridSampled { x0, step, values } => {
                let t = ((x - x0) / step).round();
                if t < 0.0 || t > (values.len() - 1) as f64 {
                    return 0.0;
                }
                let i = (t as usize).clamp(1, values.len() - 2);
                (values[i + 1] - values[i - 1]) / (2.0 * step)
            }
        }
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        match &self.representation {
            Representation::PiecewiseAnalytic(p) => {
                Self::piece_at(p, x).map_or(0.0, |pc| pc.branch.second_derivative(x))
            }
            Representation::GridSampled { x0, step, values } => {
                let t = ((x - x0) / step).round();
                if t < 0.0 || t > (values.len() - 1) as f64 {
                    return 0.0;
                }
                let i = (t as usize).clamp(1, values.len() - 2);
                (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (step * step)
            }
        }
    }

    fn square_integral(&self) -> Result<f64> {
        match &self.representation {
            Representation::PiecewiseAnalytic(pieces) => {
                let mut total = 0.0;
                for p in pieces {
                    let (a, b) = effective_interval(p);
                    if !a.is_finite() || !b.is_finite() {
                        if p.branch == (Branch::Constant { value: 0.0 }) {
                            continue;
                        }
                        return Err(Error::InvalidParameter("non-normalizable infinite piece".into()));
                    }
                    total += integrate(|x| p.branch.value(x).powi(2), a, b, panels(p, a, b));
                }
                Ok(total)
            }
            Representation::GridSampled { step, values, .. } => {
                let n = values.len();
                let inner: f64 = values[1..n - 1].iter().map(|v| v * v).sum();
                Ok(step * (inner + 0.5 * (values[0].powi(2) + values[n - 1].powi(2))))
            }
        }
    }

    /// Samples used for node counting and plotting, ordered in x.
    fn profile_samples(&self) -> Vec<f64> {
        match &self.representation {
            Representation::GridSampled { values, .. } => values.clone(),
            Representation::PiecewiseAnalytic(pieces) => {
                let mut out = Vec::new();
                for p in pieces {
                    let (a, b) = effective_interval(p);
                    let n = sample_count(p, a, b);
                    for i in 0..=n {
                        out.push(p.branch.value(a + (b - a) * i as f64 / n as f64));
                    }
                }
                out
            }
        }
    }

    pub fn scaled(&self, f: f64) -> WaveFunction {
        let representation = match &self.representation {
            Representation::PiecewiseAnalytic(p) => Representation::PiecewiseAnalytic(
                p.iter()
                    .map(|pc| Piece {
                        lo: pc.lo,
                        hi: pc.hi,
                        branch: pc.branch.scaled(f),
                    })
                    .collect(),
            ),
            Representation::GridSampled { x0, step, values } => Representation::GridSampled {
                x0: *x0,
                step: *step,
                values: values.iter().map(|v| v * f).collect(),
            },
        };
        WaveFunction {
            representation,
            node_count: self.node_count,
            norm: self.norm * f * f,
        }
    }

    /// Rescaled to unit L² norm.
    pub fn normalized(&self) -> Result<WaveFunction> {
        if !(self.norm > 0.0) {
            return Err(Error::ZeroWavefunction);
        }
        if (self.norm - 1.0).abs() <= 4.0 * f64::EPSILON {
            return Ok(self.clone());
        }
        let mut out = self.scaled(1.0 / self.norm.sqrt());
        out.norm = 1.0;
        Ok(out)
    }

    pub fn translated(&self, dx: f64) -> WaveFunction {
        let representation = match &self.representation {
            Representation::PiecewiseAnalytic(p) => Representation::PiecewiseAnalytic(
                p.iter()
                    .map(|pc| Piece {
                        lo: pc.lo + dx,
                        hi: pc.hi + dx,
                        branch: pc.branch.translated(dx),
                    })
                    .collect(),
            ),
            Representation::GridSampled { x0, step, values } => Representation::GridSampled {
                x0: x0 + dx,
                step: *step,
                values: values.clone(),
            },
        };
        WaveFunction {
            representation,
            node_count: self.node_count,
            norm: self.norm,
        }
    }

    /// Flip the overall sign so the first lobe from the left is positive.
    pub fn with_positive_lead(&self) -> WaveFunction {
        let s = self.profile_samples();
        let max = s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let lead = s.iter().find(|v| v.abs() > 1e-3 * max).copied().unwrap_or(1.0);
        if lead < 0.0 {
            self.scaled(-1.0)
        } else {
            self.clone()
        }
    }

    /// Sample on `n` equally spaced points of `[lo, hi]`.
    pub fn sampled_on(&self, lo: f64, hi: f64, n: usize) -> Result<WaveFunction> {
        if n < 3 || !(lo < hi) {
            return Err(Error::InvalidParameter("sampling needs n >= 3 and lo < hi".into()));
        }
        let step = (hi - lo) / (n - 1) as f64;
        let values = (0..n).map(|i| self.value(lo + step * i as f64)).collect();
        WaveFunction::sampled(lo, step, values)
    }

    pub fn max_abs(&self) -> f64 {
        self.profile_samples().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_derivative(&self) -> f64 {
        match &self.representation {
            Representation::PiecewiseAnalytic(pieces) => {
                let mut m = 0.0f64;
                for p in pieces {
                    let (a, b) = effective_interval(p);
                    let n = sample_count(p, a, b);
                    for i in 0..=n {
                        m = m.max(p.branch.derivative(a + (b - a) * i as f64 / n as f64).abs());
                    }
                }
                m
            }
            Representation::GridSampled { step, values, .. } => values
                .windows(3)
                .map(|w| ((w[2] - w[0]) / (2.0 * step)).abs())
                .fold(0.0, f64::max),
        }
    }

    /// Largest relative mismatch of (ψ, ψ′) across the joints between analytic pieces.
    pub fn junction_mismatch(&self) -> f64 {
        let Some(pieces) = self.pieces() else {
            return 0.0;
        };
        let mut worst = 0.0f64;
        for w in pieces.windows(2) {
            let x = w[0].hi;
            let (a, da) = w[0].branch.value_and_derivative(x);
            let (b, db) = w[1].branch.value_and_derivative(x);
            let scale = 1.0 / w[0].branch.length_scale().min(w[1].branch.length_scale()).clamp(1e-6, 1e6);
            let u = (a, da / scale);
            let v = (b, db / scale);
            let nu = (u.0 * u.0 + u.1 * u.1).sqrt();
            let nv = (v.0 * v.0 + v.1 * v.1).sqrt();
            if nu == 0.0 && nv == 0.0 {
                continue;
            }
            let diff = ((u.0 - v.0).powi(2) + (u.1 - v.1).powi(2)).sqrt();
            worst = worst.max(diff / nu.max(nv));
        }
        worst
    }
}

fn effective_interval(p: &Piece) -> (f64, f64) {
    let (mut a, mut b) = (p.lo, p.hi);
    if !a.is_finite() || !b.is_finite() {
        if let Some((wa, wb)) = p.branch.decay_window() {
            if !a.is_finite() {
                a = wa.min(b);
            }
            if !b.is_finite() {
                b = wb.max(a);
            }
        }
    }
    (a, b)
}

fn panels(p: &Piece, a: f64, b: f64) -> usize {
    let ls = p.branch.length_scale();
    if !ls.is_finite() {
        return 1;
    }
    (((b - a) / ls / 2.0).ceil() as usize).clamp(1, 100_000)
}

fn sample_count(p: &Piece, a: f64, b: f64) -> usize {
    let ls = p.branch.length_scale();
    if !ls.is_finite() {
        return 8;
    }
    (((b - a) / ls * 16.0).ceil() as usize).clamp(8, 200_000)
}

fn count_sign_changes(values: &[f64]) -> usize {
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = NODE_FLOOR * max;
    let mut count = 0;
    let mut last = 0.0f64;
    for &v in values {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

/// Strict sign changes, ignoring magnitudes below 1e−9·max|ψ|.
pub fn count_nodes(psi: &WaveFunction) -> usize {
    psi.node_count()
}

/// All interior stationary points of ψ, sorted. Plateaus report their two edges.
pub fn find_stationary_points(psi: &WaveFunction) -> Result<Vec<f64>> {
    let mut pts = match psi.representation() {
        Representation::PiecewiseAnalytic(pieces) => {
            let (slo, shi) = psi.domain();
            let mut pts = Vec::new();
            for p in pieces {
                let (a, b) = effective_interval(p);
                for x in p.branch.stationary_points(a, b) {
                    if x > slo && x < shi {
                        pts.push(x);
                    }
                }
            }
            pts
        }
        Representation::GridSampled { x0, step, values } => {
            let n = values.len();
            let d: Vec<f64> = (1..n - 1).map(|i| (values[i + 1] - values[i - 1]) / (2.0 * step)).collect();
            let dmax = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let floor = 1e-12 * dmax;
            let mut pts = Vec::new();
            let mut prev: Option<(usize, f64)> = None;
            let mut run_start: Option<usize> = None;
            for (j, &v) in d.iter().enumerate() {
                if v.abs() <= floor {
                    if run_start.is_none() {
                        run_start = Some(j);
                    }
                    continue;
                }
                if let Some(s) = run_start.take() {
                    let mid = 0.5 * (s + j - 1) as f64;
                    pts.push(x0 + step * (mid + 1.0));
                    prev = Some((j, v));
                    continue;
                }
                if let Some((pj, pv)) = prev {
                    if (pv > 0.0) != (v > 0.0) {
                        let t = pv / (pv - v);
                        pts.push(x0 + step * (pj as f64 + 1.0 + t * (j - pj) as f64));
                    }
                }
                prev = Some((j, v));
            }
            pts
        }
    };
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + a.abs()));
    if pts.is_empty() {
        return Err(Error::Internal("wavefunction has no interior extremum".into()));
    }
    Ok(pts)
}

/// How an eigenpair was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Shooting,
    MatrixOracle,
    Analytic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub energy: f64,
    pub wavefunction: WaveFunction,
    pub node_count: usize,
    pub method: Method,
}

impl EigenPair {
    pub fn new(energy: f64, wavefunction: WaveFunction, method: Method) -> EigenPair {
        EigenPair {
            energy,
            node_count: wavefunction.node_count(),
            wavefunction,
            method,
        }
    }
}
