//! Serialize a stretched potential, read it back, and solve it by shooting.

use stretchlab::eigensolver;
use stretchlab::potentials::stretch;
use stretchlab::{PiecewisePotential, Result, SeedingSpec, StretchPlan};

fn main() -> Result<()> {
    let seed = SeedingSpec::harmonic(1.0)?;
    let v = stretch(&seed, &StretchPlan::central(&seed, 2, 0.8)?)?;
    let text = v.to_json();
    println!("{text}");
    let back = PiecewisePotential::from_json(&text)?;
    assert_eq!(back, v);
    for p in eigensolver::solve(&back, 3, eigensolver::DEFAULT_POINTS)? {
        println!("E = {:.10} ({} nodes)", p.energy, p.node_count);
    }
    Ok(())
}
