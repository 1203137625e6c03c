use stretchlab::specfun::{
    cylinder_d, cylinder_d_at_zero, cylinder_ratio_at_zero, gamma, hermite, RatioAtZero,
};

/// Independent D_ν: leading asymptotic terms at x0 = 14, then classical RK4 on
/// the Weber equation down to the target point.
fn weber_oracle(nu: f64, x: f64) -> f64 {
    let x0: f64 = 14.0;
    let mut s = 1.0;
    let mut ds = 0.0;
    let mut t = 1.0;
    for k in 0..30 {
        let kf = k as f64;
        t *= -(-nu + 2.0 * kf) * (-nu + 2.0 * kf + 1.0) / ((kf + 1.0) * 2.0 * x0 * x0);
        s += t;
        ds += t * (-2.0 * (kf + 1.0) / x0);
    }
    let pre = x0.powf(nu) * (-x0 * x0 / 4.0).exp();
    let mut y = pre * s;
    let mut dy = pre * ((nu / x0 - x0 / 2.0) * s + ds);
    let f = |z: f64, y: f64| (z * z / 4.0 - nu - 0.5) * y;
    let n = ((x0 - x) / 2e-4).ceil() as usize;
    let h = -(x0 - x) / n as f64;
    let mut z = x0;
    for _ in 0..n {
        let (k1y, k1v) = (dy, f(z, y));
        let (k2y, k2v) = (dy + 0.5 * h * k1v, f(z + 0.5 * h, y + 0.5 * h * k1y));
        let (k3y, k3v) = (dy + 0.5 * h * k2v, f(z + 0.5 * h, y + 0.5 * h * k2y));
        let (k4y, k4v) = (dy + h * k3v, f(z + h, y + h * k3y));
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        z += h;
    }
    y
}

fn d(nu: f64, x: f64) -> f64 {
    cylinder_d(nu, x).unwrap().value
}

#[test]
fn d_half_at_origin_matches_closed_form_and_ode() {
    let closed = 2f64.powf(0.25) * std::f64::consts::PI.sqrt() / gamma(0.25).unwrap();
    assert!((d(0.5, 0.0) - closed).abs() < 1e-14);
    assert!((cylinder_d_at_zero(0.5) - closed).abs() < 1e-14);
    assert!((weber_oracle(0.5, 0.0) - closed).abs() < 1e-9);
}

#[test]
fn agrees_with_ode_oracle_on_lattice() {
    for &nu in &[-2.3, -0.7, 0.5, 1.3, 2.5, 3.7, 4.9, 7.2] {
        for i in 0..=24 {
            let x = -6.0 + 0.5 * i as f64;
            let got = d(nu, x);
            let want = weber_oracle(nu, x);
            let scale = want.abs().max(1e-3 * weber_oracle(nu, 0.0).abs().max(1e-3));
            assert!(
                (got - want).abs() <= 1e-8 * scale,
                "nu={nu} x={x} got={got} want={want}"
            );
        }
    }
}

#[test]
fn hermite_identity_lattice() {
    for n in 0..=8usize {
        for i in 0..=100 {
            let x = -5.0 + 0.1 * i as f64;
            let h = hermite(n, x / std::f64::consts::SQRT_2);
            let want = 2f64.powf(-(n as f64) / 2.0) * (-x * x / 4.0).exp() * h;
            assert!((d(n as f64, x) - want).abs() <= 1e-10 * (1.0 + h.abs()), "n={n} x={x}");
        }
    }
}

#[test]
fn recurrence_consistency() {
    for &nu in &[-1.6, -0.3, 0.4, 1.5, 2.8, 5.25, 9.9] {
        for i in 0..=40 {
            let x = -8.0 + 0.4 * i as f64;
            let (a, b, c) = (d(nu + 1.0, x), d(nu, x), d(nu - 1.0, x));
            let r = a - x * b + nu * c;
            let scale = a.abs() + (x * b).abs() + (nu * c).abs();
            assert!(r.abs() <= 1e-9 * scale, "nu={nu} x={x} r={r} scale={scale}");
        }
    }
}

#[test]
fn weber_residual_by_differences() {
    let h = 1e-3;
    for &nu in &[-0.45, 0.7, 3.3, 6.6] {
        for i in 0..=30 {
            let x = -7.5 + 0.5 * i as f64;
            let (m, c, p) = (cylinder_d(nu, x - h).unwrap(), cylinder_d(nu, x).unwrap(), cylinder_d(nu, x + h).unwrap());
            let second = (p.value - 2.0 * c.value + m.value) / (h * h);
            let r = second + (nu + 0.5 - x * x / 4.0) * c.value;
            let fd = h * h / 12.0 * (x * x / 4.0 + nu.abs() + 1.0).powi(2) * c.value.abs();
            let noise = 4.0 * (m.est_abs_error + c.est_abs_error + p.est_abs_error) / (h * h);
            assert!(r.abs() <= 10.0 * (fd + noise) + 1e-12, "nu={nu} x={x} r={r}");
        }
    }
}

#[test]
fn error_estimates_are_honest_across_routes() {
    for &nu in &[-1.3, 0.25, 1.7, 4.4, 8.6] {
        for i in 0..=60 {
            let x = -6.0 + 0.2 * i as f64;
            let e = cylinder_d(nu, x).unwrap();
            let want = weber_oracle(nu, x);
            let local = weber_oracle(nu, 0.0).abs();
            let oracle_noise = 1e-10 * (want.abs() + local);
            assert!(e.est_abs_error >= 0.0);
            assert!(
                (e.value - want).abs() <= 10.0 * e.est_abs_error + oracle_noise,
                "nu={nu} x={x} err={} est={}",
                (e.value - want).abs(),
                e.est_abs_error
            );
        }
    }
}

#[test]
fn large_argument_and_order_envelope() {
    for &(nu, x) in &[(12.5, 30.0), (-8.2, 35.0), (29.5, 10.0), (-29.5, 5.0), (3.3, -20.0), (0.5, -39.0)] {
        let e = cylinder_d(nu, x).unwrap();
        assert!(e.value.is_finite(), "nu={nu} x={x}");
        assert!(e.est_abs_error <= 1e-6 * e.value.abs().max(1e-300), "nu={nu} x={x} {e:?}");
    }
    let a = d(2.5, 30.0);
    let b = d(3.5, 30.0);
    let c = d(1.5, 30.0);
    assert!((b - 30.0 * a + 2.5 * c).abs() <= 1e-10 * b.abs());
}

#[test]
fn ratio_at_one_matches_series_values() {
    let r = match cylinder_ratio_at_zero(1.0) {
        RatioAtZero::Finite(r) => r,
        other => panic!("{other:?}"),
    };
    let oracle = weber_oracle(1.5, 0.0) / weber_oracle(0.5, 0.0);
    assert!(r < 0.0);
    assert!((r - oracle).abs() <= 1e-8 * oracle.abs(), "{r} vs {oracle}");
}
