//! Recover a stretched potential from samples of its eigenfunction.

use stretchlab::potentials::{reverse_engineer, stretch, stretch_wavefunction};
use stretchlab::{Result, SeedingSpec, StretchPlan};

fn main() -> Result<()> {
    let seed = SeedingSpec::infinite_well(1.0)?;
    let plan = StretchPlan::central(&seed, 2, 0.7)?;
    let v = stretch(&seed, &plan)?;
    let psi = stretch_wavefunction(&seed.eigenpair(2)?, &plan)?.wavefunction;
    let (lo, hi) = psi.domain();
    let rebuilt = reverse_engineer(&psi.sampled_on(lo, hi, 801)?, plan.plateau_energy)?;
    println!("x          recovered V    true V");
    for (i, (x, val)) in rebuilt.defined().enumerate() {
        if i % 50 == 0 {
            println!("{x:<10.4} {val:<14.6} {:.6}", v.eval(x));
        }
    }
    Ok(())
}
