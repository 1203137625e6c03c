//! Gamma, Hermite and parabolic cylinder functions.
//!
//! `D_ν(x)` is evaluated by whichever of three routes is accurate at the
//! requested point: the even/odd power series about the origin, the
//! large-argument asymptotic expansion, or a Taylor-series integration of
//! the Weber equation started from the asymptotic region and carried
//! inward. Non-negative integer orders use the Hermite identity.

use crate::{Error, Result};
use std::f64::consts::{PI, SQRT_2};

const NU_LIMIT: f64 = 30.0;
const X_LIMIT: f64 = 40.0;
const EPS: f64 = f64::EPSILON;
const LADDER: [f64; 10] = [8.0, 10.0, 12.0, 15.0, 20.0, 25.0, 30.0, 40.0, 50.0, 60.0];

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Γ(x). Fails at the poles x = 0, −1, −2, …
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("gamma of {x}")));
    }
    if is_pole(x) {
        return Err(Error::GammaPole(x));
    }
    Ok(statrs::function::gamma::gamma(x))
}

/// 1/Γ(x), an entire function: zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_pole(x) {
        return 0.0;
    }
    let g = statrs::function::gamma::gamma(x);
    if g.is_infinite() {
        0.0
    } else {
        1.0 / g
    }
}

/// Physicists' Hermite polynomial H_n(x).
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Normalized Hermite function φ_n(t) = H_n(t) e^{−t²/2} / √(2ⁿ n! √π) and its derivative.
pub fn hermite_function(n: usize, t: f64) -> (f64, f64) {
    let g = (-0.5 * t * t).exp() * PI.powf(-0.25);
    let (mut p0, mut p1) = (0.0, g);
    for k in 0..n {
        let kf = k as f64;
        let p2 = (2.0 / (kf + 1.0)).sqrt() * t * p1 - (kf / (kf + 1.0)).sqrt() * p0;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let next = (2.0 / (nf + 1.0)).sqrt() * t * p1 - (nf / (nf + 1.0)).sqrt() * p0;
    let deriv = (nf / 2.0).sqrt() * p0 - ((nf + 1.0) / 2.0).sqrt() * next;
    (p1, deriv)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderEval {
    pub nu: f64,
    pub x: f64,
    pub value: f64,
    pub est_abs_error: f64,
}

/// D_ν(0) = 2^{ν/2} √π / Γ((1−ν)/2).
pub fn cylinder_d_at_zero(nu: f64) -> f64 {
    2f64.powf(nu / 2.0) * PI.sqrt() * rgamma((1.0 - nu) / 2.0)
}

/// D_ν′(0) = −D_{ν+1}(0).
pub fn cylinder_d_prime_at_zero(nu: f64) -> f64 {
    -cylinder_d_at_zero(nu + 1.0)
}

fn check_envelope(nu: f64, x: f64) -> Result<()> {
    if !nu.is_finite() || !x.is_finite() || nu.abs() > NU_LIMIT || x.abs() > X_LIMIT {
        return Err(Error::OutOfEnvelope(format!(
            "D_nu(x) with nu = {nu}, x = {x}; supported |nu| <= {NU_LIMIT}, |x| <= {X_LIMIT}"
        )));
    }
    Ok(())
}

/// Parabolic cylinder function D_ν(x) with an error estimate.
pub fn cylinder_d(nu: f64, x: f64) -> Result<CylinderEval> {
    check_envelope(nu, x)?;
    Ok(eval(nu, x))
}

/// D_ν′(x) from D_ν′ = (x/2) D_ν − D_{ν+1}.
pub fn cylinder_d_derivative(nu: f64, x: f64) -> Result<f64> {
    check_envelope(nu, x)?;
    Ok(0.5 * x * eval(nu, x).value - eval(nu + 1.0, x).value)
}

pub(crate) fn d_value(nu: f64, x: f64) -> f64 {
    eval(nu, x).value
}

pub(crate) fn d_and_derivative(nu: f64, x: f64) -> (f64, f64) {
    let d = eval(nu, x).value;
    (d, 0.5 * x * d - eval(nu + 1.0, x).value)
}

fn eval(nu: f64, x: f64) -> CylinderEval {
    let done = |value: f64, err: f64| CylinderEval {
        nu,
        x,
        value,
        est_abs_error: err,
    };
    if nu >= 0.0 && nu == nu.round() && nu <= 64.0 {
        let (v, e) = hermite_identity(nu as usize, x);
        return done(v, e);
    }
    if x.abs() <= 2.0 {
        let (v, e) = series(nu, x);
        if e <= 1e-13 * v.abs().max(1e-300) {
            return done(v, e);
        }
    }
    if x > 0.0 {
        if let Some(a) = asymptotic_positive(nu, x) {
            let v = a.scale.exp() * a.s;
            return done(v, a.rel_err * v.abs() + 1e-300);
        }
    } else if x <= -8.0 {
        if let Some((v, e)) = asymptotic_negative(nu, -x) {
            return done(v, e);
        }
    }
    let (v, e) = bridge(nu, x);
    done(v, e)
}

fn hermite_identity(n: usize, x: f64) -> (f64, f64) {
    let t = x / SQRT_2;
    let (mut h0, mut h1) = (1.0, 2.0 * t);
    let (mut a0, mut a1) = (1.0, 2.0 * t.abs());
    if n == 0 {
        h1 = 1.0;
        a1 = 1.0;
    }
    for k in 1..n {
        let kf = 2.0 * k as f64;
        let h2 = 2.0 * t * h1 - kf * h0;
        let a2 = 2.0 * t.abs() * a1 + kf * a0;
        h0 = h1;
        h1 = h2;
        a0 = a1;
        a1 = a2;
    }
    let pref = (-(n as f64) / 2.0 * 2f64.ln() - x * x / 4.0).exp();
    (pref * h1, 4.0 * (n as f64 + 1.0) * EPS * pref * a1)
}

fn kummer(a: f64, b: f64, z: f64) -> (f64, f64) {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    for k in 0..2000 {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * z / (kf + 1.0);
        sum += term;
        abs_sum += term.abs();
        if term.abs() <= EPS * 1e-3 * sum.abs().max(abs_sum * 1e-30) && kf > z {
            break;
        }
        if term == 0.0 {
            break;
        }
    }
    (sum, abs_sum)
}

fn series(nu: f64, x: f64) -> (f64, f64) {
    let z = 0.5 * x * x;
    let g = (-0.25 * x * x).exp();
    let d0 = cylinder_d_at_zero(nu);
    let d1 = cylinder_d_prime_at_zero(nu);
    let (m1, a1) = kummer(-nu / 2.0, 0.5, z);
    let (m2, a2) = kummer((1.0 - nu) / 2.0, 1.5, z);
    let v = g * (d0 * m1 + d1 * x * m2);
    let err = 8.0 * EPS * g * (d0.abs() * a1 + (d1 * x).abs() * a2) + 4.0 * EPS * v.abs();
    (v, err)
}

struct Asymptotic {
    scale: f64,
    s: f64,
    ds: f64,
    rel_err: f64,
}

/// Asymptotic expansion for z > 0: D_ν(z) = exp(scale)·s, D_ν′(z) = exp(scale)·ds.
fn asymptotic_positive(nu: f64, z: f64) -> Option<Asymptotic> {
    let w = 2.0 * z * z;
    let mut t = 1.0;
    let mut s = 1.0;
    let mut ds = 0.0;
    let mut max_t: f64 = 1.0;
    let mut decreasing = false;
    let mut count: f64 = 1.0;
    for k in 0..400 {
        let kf = k as f64;
        let next = -t * (-nu + 2.0 * kf) * (-nu + 2.0 * kf + 1.0) / ((kf + 1.0) * w);
        if next == 0.0 {
            return finish_positive(nu, z, s, ds, 0.0, max_t, count);
        }
        let r = (next / t).abs();
        if r < 1.0 {
            decreasing = true;
        } else if decreasing || next.abs() > 1e12 {
            return None;
        }
        t = next;
        s += t;
        ds += t * (-2.0 * (kf + 1.0) / z);
        max_t = max_t.max(t.abs());
        count += 1.0;
        if t.abs() <= 1e-17 * s.abs() {
            return finish_positive(nu, z, s, ds, t.abs(), max_t, count);
        }
    }
    None
}

fn finish_positive(
    nu: f64,
    z: f64,
    s: f64,
    ds: f64,
    last: f64,
    max_t: f64,
    count: f64,
) -> Option<Asymptotic> {
    if s == 0.0 {
        return None;
    }
    let rel_err = (4.0 * last + 2.0 * EPS * count.sqrt() * max_t) / s.abs() + 2.0 * EPS;
    if rel_err > 2e-14 {
        return None;
    }
    Some(Asymptotic {
        scale: nu * z.ln() - 0.25 * z * z,
        s,
        ds: (nu / z - 0.5 * z) * s + ds,
        rel_err,
    })
}

/// Connection formula for D_ν(−z), z > 0, with both asymptotic series.
fn asymptotic_negative(nu: f64, z: f64) -> Option<(f64, f64)> {
    let pos = asymptotic_positive(nu, z)?;
    let w = 2.0 * z * z;
    let mut t = 1.0;
    let mut s = 1.0;
    let mut max_t: f64 = 1.0;
    let mut decreasing = false;
    let mut last = 0.0;
    let mut converged = false;
    let mut count: f64 = 1.0;
    for k in 0..400 {
        let kf = k as f64;
        let next = t * (nu + 1.0 + 2.0 * kf) * (nu + 2.0 + 2.0 * kf) / ((kf + 1.0) * w);
        if next == 0.0 {
            converged = true;
            break;
        }
        let r = (next / t).abs();
        if r < 1.0 {
            decreasing = true;
        } else if decreasing || next.abs() > 1e12 {
            return None;
        }
        t = next;
        s += t;
        max_t = max_t.max(t.abs());
        count += 1.0;
        if t.abs() <= 1e-17 * s.abs() {
            last = t.abs();
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let rg = rgamma(-nu);
    let rec = (PI * nu).cos() * pos.scale.exp() * pos.s;
    let rec_err = pos.rel_err * rec.abs();
    let dom = if rg == 0.0 {
        0.0
    } else {
        (2.0 * PI).sqrt() * rg * (0.25 * z * z - (nu + 1.0) * z.ln()).exp() * s
    };
    let dom_rel = (4.0 * last + 2.0 * EPS * count.sqrt() * max_t) / s.abs() + 4.0 * EPS;
    if dom_rel > 2e-14 {
        return None;
    }
    let v = rec + dom;
    let err = rec_err + dom_rel * dom.abs() + 4.0 * EPS * v.abs() + 1e-300;
    Some((v, err))
}

/// Integrate y″ = (z²/4 − ν − ½) y inward from the asymptotic region down to `x`.
fn bridge(nu: f64, x: f64) -> (f64, f64) {
    let mut start = None;
    for &z0 in LADDER.iter() {
        if z0 <= x {
            continue;
        }
        if let Some(a) = asymptotic_positive(nu, z0) {
            start = Some((z0, a));
            break;
        }
    }
    let (z0, a) = match start {
        Some(s) => s,
        None => {
            let z0 = x.max(LADDER[LADDER.len() - 1]);
            let a = asymptotic_positive(nu, z0).unwrap_or(Asymptotic {
                scale: nu * z0.ln() - 0.25 * z0 * z0,
                s: 1.0,
                ds: nu / z0 - 0.5 * z0,
                rel_err: 1e-3,
            });
            (z0, a)
        }
    };
    let c = nu + 0.5;
    let mut log_scale = a.scale;
    let mut y = a.s;
    let mut dy = a.ds;
    let mut z = z0;
    let amp = |z: f64, y: f64, dy: f64| {
        let q = (0.25 * z * z - c).abs() + 1.0;
        (y * y + dy * dy / q).sqrt()
    };
    let mut err = a.rel_err * amp(z, y, dy);
    while z > x {
        let q0 = 0.25 * z * z - c;
        let hmax = 1.5 / (q0.abs() + 1.0).sqrt();
        let h = -(z - x).min(hmax);
        let before = amp(z, y, dy);
        let (ny, ndy) = taylor_step(q0, z, y, dy, h);
        y = ny;
        dy = ndy;
        z = if (z + h - x).abs() < 1e-14 { x } else { z + h };
        let after = amp(z, y, dy);
        err = err * (after / before).max(1.0) + 8.0 * EPS * after;
        let m = y.abs().max(dy.abs());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            let f = m.ln();
            log_scale += f;
            y /= m;
            dy /= m;
            err /= m;
        }
    }
    let scale = log_scale.exp();
    let v = y * scale;
    (v, err * scale + 4.0 * EPS * v.abs() + 1e-300)
}

fn taylor_step(q0: f64, z0: f64, y0: f64, dy0: f64, h: f64) -> (f64, f64) {
    let mut c = vec![y0, dy0];
    let mut y = y0 + dy0 * h;
    let mut dy = dy0;
    let mut hp = h;
    let mut quiet = 0;
    for k in 0..400usize {
        let at = |i: isize| if i < 0 { 0.0 } else { c[i as usize] };
        let ki = k as isize;
        let next = (q0 * at(ki) + 0.5 * z0 * at(ki - 1) + 0.25 * at(ki - 2))
            / ((k as f64 + 1.0) * (k as f64 + 2.0));
        c.push(next);
        let dterm = (k as f64 + 2.0) * next * hp;
        hp *= h;
        let term = next * hp;
        y += term;
        dy += dterm;
        if term.abs() <= 1e-18 * y.abs().max(1e-300) && dterm.abs() <= 1e-18 * dy.abs().max(y.abs()) {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (y, dy)
}

/// Value of D_{ε+½}(0)/D_{ε−½}(0) with sign bookkeeping at poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RatioAtZero {
    Finite(f64),
    Pole { sign_below: f64, sign_above: f64 },
}

pub fn cylinder_ratio_at_zero(epsilon: f64) -> RatioAtZero {
    let num_arg = 0.25 - epsilon / 2.0;
    let den_arg = 0.75 - epsilon / 2.0;
    assert!(
        !(is_pole(num_arg) && is_pole(den_arg)),
        "numerator and denominator cannot vanish together"
    );
    if is_pole(den_arg) {
        let m = -den_arg;
        let parity = if (m as i64) % 2 == 0 { 1.0 } else { -1.0 };
        let s = rgamma(num_arg).signum() * parity;
        return RatioAtZero::Pole {
            sign_below: s,
            sign_above: -s,
        };
    }
    RatioAtZero::Finite(SQRT_2 * rgamma(num_arg) / rgamma(den_arg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert!((gamma(0.5).unwrap() - PI.sqrt()).abs() < 1e-13);
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-11);
        assert!((gamma(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-12);
        assert!(matches!(gamma(-2.0), Err(Error::GammaPole(_))));
        assert!(matches!(gamma(0.0), Err(Error::GammaPole(_))));
        assert_eq!(rgamma(-3.0), 0.0);
    }

    #[test]
    fn hermite_values() {
        assert_eq!(hermite(0, 3.7), 1.0);
        assert_eq!(hermite(2, 1.0), 2.0);
        assert_eq!(hermite(4, 0.0), 12.0);
    }

    #[test]
    fn hermite_function_matches_polynomial() {
        for n in 0..8usize {
            let norm = (2f64.powi(n as i32) * (1..=n).product::<usize>() as f64 * PI.sqrt()).sqrt();
            for &t in &[-2.3, -0.4, 0.0, 1.1, 3.0] {
                let (v, d) = hermite_function(n, t);
                let exact = hermite(n, t) * (-t * t / 2.0).exp() / norm;
                let exact_d = (t * hermite(n, t) - hermite(n + 1, t)) * (-t * t / 2.0).exp() / norm;
                assert!((v - exact).abs() < 1e-13, "n={n} t={t}");
                assert!((d - exact_d).abs() < 1e-12, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn d_zero_order() {
        let e = cylinder_d(0.0, 2.0).unwrap();
        assert!((e.value - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(cylinder_d(1.0, 0.0).unwrap().value, 0.0);
    }

    #[test]
    fn envelope_enforced() {
        assert!(cylinder_d(31.0, 0.0).is_err());
        assert!(cylinder_d(0.2, 41.0).is_err());
    }

    #[test]
    fn independent_routes_agree_within_estimates() {
        for &nu in &[-2.7, -0.4, 0.3, 1.7, 3.1, 4.4, 9.6] {
            for i in 0..=16 {
                let x = -2.0 + 0.25 * i as f64;
                let (a, ea) = series(nu, x);
                let (b, eb) = bridge(nu, x);
                assert!((a - b).abs() <= 10.0 * (ea + eb), "nu={nu} x={x} {a} {b} {ea} {eb}");
            }
            for &x in &[9.0, 11.0, 13.0, 18.0] {
                if let Some(p) = asymptotic_positive(nu, x) {
                    let a = p.scale.exp() * p.s;
                    let (b, eb) = bridge(nu, x - 1e-9);
                    let ea = p.rel_err * a.abs();
                    let slope = (p.scale.exp() * p.ds * 1e-9).abs();
                    assert!((a - b).abs() <= 10.0 * (ea + eb) + slope, "nu={nu} x={x}");
                }
            }
        }
    }

    #[test]
    fn ratio_anchor_points() {
        assert_eq!(cylinder_ratio_at_zero(0.5), RatioAtZero::Finite(0.0));
        assert_eq!(cylinder_ratio_at_zero(4.5), RatioAtZero::Finite(0.0));
        match cylinder_ratio_at_zero(1.0) {
            RatioAtZero::Finite(r) => assert!(r < 0.0),
            other => panic!("{other:?}"),
        }
        match cylinder_ratio_at_zero(1.5) {
            RatioAtZero::Pole {
                sign_below,
                sign_above,
            } => {
                let below = match cylinder_ratio_at_zero(1.5 - 1e-9) {
                    RatioAtZero::Finite(r) => r,
                    _ => unreachable!(),
                };
                let above = match cylinder_ratio_at_zero(1.5 + 1e-9) {
                    RatioAtZero::Finite(r) => r,
                    _ => unreachable!(),
                };
                assert_eq!(below.signum(), sign_below);
                assert_eq!(above.signum(), sign_above);
            }
            other => panic!("{other:?}"),
        }
    }
}
