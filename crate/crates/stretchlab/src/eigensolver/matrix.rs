use super::shooting::{ceiling, isolate, GridPotential};
use super::{check_levels, Grid};
use crate::potentials::{EigenPair, Method, PiecewisePotential, WaveFunction};
use crate::{Error, Result};

/// Symmetric tridiagonal −½∂² + V on the interior nodes.
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn new(gp: &GridPotential) -> Tridiagonal {
        let h2 = gp.h * gp.h;
        let diag = (1..gp.n - 1)
            .map(|i| 1.0 / h2 + 0.5 * (gp.minus[i] + gp.plus[i]))
            .collect();
        Tridiagonal {
            diag,
            off: -0.5 / h2,
        }
    }

    /// Eigenvalues below `lambda` (Sturm count).
    fn count(&self, lambda: f64) -> usize {
        let e2 = self.off * self.off;
        let tiny = f64::MIN_POSITIVE.sqrt() * (1.0 + self.off.abs());
        let mut q = 1.0;
        let mut neg = 0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - lambda } else { d - lambda - e2 / q };
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                neg += 1;
            }
        }
        neg
    }

    /// Inverse iteration at `lambda` with a pivoted tridiagonal LU, kept
    /// orthogonal to `cluster` (vectors of nearly degenerate lower levels).
    fn eigenvector(&self, lambda: f64, cluster: &[&[f64]]) -> Vec<f64> {
        let n = self.diag.len();
        let mut d: Vec<f64> = self.diag.iter().map(|&x| x - lambda).collect();
        let mut dl = vec![self.off; n - 1];
        let mut du = vec![self.off; n - 1];
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swap = vec![false; n - 1];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swap[i] = true;
            }
        }
        let floor = f64::EPSILON * (self.off.abs() + lambda.abs());
        for x in d.iter_mut() {
            if x.abs() < floor {
                *x = floor;
            }
        }
        let mut b: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i % 7) as f64)).collect();
        for _ in 0..6 {
            for u in cluster {
                let dot: f64 = u.iter().zip(&b).map(|(a, c)| a * c).sum();
                let uu: f64 = u.iter().map(|a| a * a).sum();
                b.iter_mut().zip(u.iter()).for_each(|(x, a)| *x -= dot / uu * a);
            }
            for i in 0..n - 1 {
                if swap[i] {
                    let t = b[i];
                    b[i] = b[i + 1];
                    b[i + 1] = t - dl[i] * b[i];
                } else {
                    b[i + 1] -= dl[i] * b[i];
                }
            }
            b[n - 1] /= d[n - 1];
            if n > 1 {
                b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
            }
            for i in (0..n.saturating_sub(2)).rev() {
                b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
            }
            let s = b.iter().map(|x| x.abs()).fold(0.0, f64::max);
            b.iter_mut().for_each(|x| *x /= s);
        }
        b
    }
}

fn bisect(t: &Tridiagonal, a: f64, b: f64, k: usize) -> f64 {
    let (mut a, mut b) = (a, b);
    while b - a > 2.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0) {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if t.count(mid) <= k {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Levels `0..=n_max` of the three-point finite-difference Hamiltonian.
///
/// Nodes on a jump take the mean of both sides; a jump between nodes is
/// replaced by the cell average.
pub fn matrix_oracle(v: &PiecewisePotential, grid: &Grid, n_max: usize) -> Result<Vec<EigenPair>> {
    let gp = GridPotential::new(v, grid)?;
    let t = Tridiagonal::new(&gp);
    let brackets = isolate(|e| t.count(e), gp.minimum(), ceiling(v, grid)?, n_max)?;
    let mut out = Vec::with_capacity(n_max + 1);
    let mut vectors: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n_max + 1);
    let close = 1e-6 * t.off.abs();
    for (k, (a, b)) in brackets.into_iter().enumerate() {
        let e = bisect(&t, a, b, k);
        let cluster: Vec<&[f64]> = vectors.iter().filter(|(f, _)| e - f < close).map(|(_, u)| u.as_slice()).collect();
        let u = t.eigenvector(e, &cluster);
        let mut values = vec![0.0];
        values.extend_from_slice(&u);
        vectors.push((e, u));
        values.push(0.0);
        let wf = WaveFunction::sampled(gp.lo, gp.h, values)?
            .normalized()?
            .with_positive_lead();
        out.push(EigenPair::new(e, wf, Method::MatrixOracle));
    }
    check_levels(&out)?;
    Ok(out)
}

/// Richardson combination (4·E(h/2) − E(h))/3 of two oracle solves.
///
/// Wavefunctions come from the finer grid.
pub fn matrix_oracle_extrapolated(v: &PiecewisePotential, grid: &Grid, n_max: usize) -> Result<Vec<EigenPair>> {
    let coarse = matrix_oracle(v, grid, n_max)?;
    let fine = matrix_oracle(v, &grid.refined(), n_max)?;
    if coarse.len() != fine.len() {
        return Err(Error::Internal("level count changed under refinement".into()));
    }
    Ok(fine
        .into_iter()
        .zip(coarse)
        .map(|(f, c)| EigenPair {
            energy: (4.0 * f.energy - c.energy) / 3.0,
            ..f
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::SeedingSpec;
    use std::f64::consts::PI;

    #[test]
    fn free_dispersion_on_unit_well() {
        let v = SeedingSpec::infinite_well(1.0).unwrap().potential().unwrap();
        let grid = Grid::new(-0.5, 0.5, 201).unwrap();
        let h = grid.step();
        let levels = matrix_oracle(&v, &grid, 4).unwrap();
        for (n, p) in levels.iter().enumerate() {
            let want = (1.0 - (PI * (n + 1) as f64 * h).cos()) / (h * h);
            assert!((p.energy - want).abs() < 1e-10 * want, "{n}: {} vs {want}", p.energy);
            assert_eq!(p.node_count, n);
        }
    }
}
