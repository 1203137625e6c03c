//! Bound states of piecewise potentials on a uniform grid.
//!
//! [`bound_states`] shoots with Numerov from both ends and matches at a
//! classical turning point; [`matrix_oracle`] diagonalizes the three-point
//! finite-difference Hamiltonian by Sturm bisection. Levels are isolated by
//! counting eigenvalues below a trial energy, so close doublets are never
//! merged or skipped.

mod grid;
mod matrix;
mod shooting;

pub use crate::potentials::count_nodes;
pub use grid::Grid;
pub use matrix::{matrix_oracle, matrix_oracle_extrapolated};
pub use shooting::{bound_states, eigenvalue_count};
pub(crate) use shooting::isolate;

use crate::potentials::{EigenPair, PiecewisePotential};
use crate::{Error, Result};

/// Default number of grid points across the support.
pub const DEFAULT_POINTS: usize = 4001;

/// Margin V(end) − E_max required at open grid ends.
pub const CONFINEMENT_MARGIN: f64 = 25.0;

/// Shooting solve on an automatically chosen grid of about `n_points` points.
pub fn solve(v: &PiecewisePotential, n_max: usize, n_points: usize) -> Result<Vec<EigenPair>> {
    let grid = Grid::auto(v, n_max, n_points)?;
    bound_states(v, &grid, n_max)
}

/// Richardson-extrapolated matrix oracle on an automatically chosen grid.
pub fn solve_oracle(v: &PiecewisePotential, n_max: usize, n_points: usize) -> Result<Vec<EigenPair>> {
    let grid = Grid::auto(v, n_max, n_points)?;
    matrix_oracle_extrapolated(v, &grid, n_max)
}

pub(crate) fn check_levels(pairs: &[EigenPair]) -> Result<()> {
    for (k, p) in pairs.iter().enumerate() {
        if p.node_count != k {
            return Err(Error::GridTooCoarse(format!(
                "level {k} at E = {} has {} nodes",
                p.energy, p.node_count
            )));
        }
    }
    Ok(())
}
