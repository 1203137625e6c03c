use std::sync::OnceLock;

const ORDER: usize = 20;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        out
    })
}

/// Composite Gauss-Legendre integral of `f` over `[a, b]` split into `panels` equal parts.
pub(crate) fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let panels = panels.max(1);
    let w = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + w * p as f64;
        let mid = lo + 0.5 * w;
        let mut s = 0.0;
        for &(x, wt) in rule() {
            s += wt * f(mid + 0.5 * w * x);
        }
        total += 0.5 * w * s;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| x.powi(7) - 3.0 * x * x, -1.0, 2.0, 1);
        let exact = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integral() {
        let v = integrate(|x| (x * 10.0).sin().powi(2), 0.0, 3.0, 12);
        let exact = 1.5 - (60f64).sin() / 40.0;
        assert!((v - exact).abs() < 1e-13);
    }
}
