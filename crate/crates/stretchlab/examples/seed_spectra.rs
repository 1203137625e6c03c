//! Closed-form seed levels next to the shooting and matrix solvers.

use stretchlab::eigensolver;
use stretchlab::{Result, SeedingSpec};

fn main() -> Result<()> {
    for seed in [SeedingSpec::infinite_well(1.0)?, SeedingSpec::harmonic(1.0)?] {
        let v = seed.potential()?;
        let shooting = eigensolver::solve(&v, 4, eigensolver::DEFAULT_POINTS)?;
        let oracle = eigensolver::solve_oracle(&v, 4, eigensolver::DEFAULT_POINTS)?;
        println!("{seed:?}");
        println!("  n  exact              shooting           oracle");
        for n in 0..5 {
            println!("  {n}  {:<18.12} {:<18.12} {:.12}", seed.energy(n), shooting[n].energy, oracle[n].energy);
        }
    }
    Ok(())
}
