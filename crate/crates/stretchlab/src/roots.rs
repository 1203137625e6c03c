/// Root of `f` in `[a, b]` given values of opposite sign at the ends
/// (Illinois variant of regula falsi with periodic bisection).
pub(crate) fn illinois(f: impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> f64 {
    let (mut a, mut fa, mut b, mut fb) = (a, fa, b, fb);
    if a > b {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    let mut last = 0;
    for it in 0..300 {
        if converged(a, b) {
            break;
        }
        let mut c = if it % 5 == 4 {
            0.5 * (a + b)
        } else {
            (a * fb - b * fa) / (fb - fa)
        };
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let fc = f(c);
        if fc == 0.0 {
            return c;
        }
        if (fc > 0.0) == (fa > 0.0) {
            a = c;
            fa = fc;
            if last == -1 {
                fb *= 0.5;
            }
            last = -1;
        } else {
            b = c;
            fb = fc;
            if last == 1 {
                fa *= 0.5;
            }
            last = 1;
        }
    }
    if fa.abs() < fb.abs() {
        a
    } else {
        b
    }
}

pub(crate) fn converged(a: f64, b: f64) -> bool {
    (b - a).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cosine_root() {
        let r = illinois(f64::cos, 1.0, 1f64.cos(), 2.0, 2f64.cos());
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }
}
