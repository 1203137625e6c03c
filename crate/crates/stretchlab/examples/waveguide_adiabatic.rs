//! A waveguide whose plateau length ramps smoothly along y: margin and
//! correction size for the adiabatic ansatz.

use stretchlab::twod::*;
use stretchlab::{Result, SeedingSpec};

fn main() -> Result<()> {
    let seed = SeedingSpec::infinite_well(1.0)?;
    let shape = ProfileShape::SmoothStep { l_in: 0.2, l_fin: 0.28, y_in: 0.0, y_fin: 3.0 };
    let profile = WaveguideProfile::new(shape, 1.0, &seed)?;
    println!("moments {:?}, max|L'| = {:.4}", profile.moments, profile.max_slope());
    println!("y     L        margin       |Δ|/|f|    bound");
    for i in 0..=12 {
        let y = -0.75 + 0.375 * i as f64;
        let (l, _, _) = profile.at(y);
        println!(
            "{y:<5.2} {l:<8.5} {:<12.4e} {:<10.3e} {:.3e}",
            adiabaticity_margin(&profile, y)?,
            delta_norm_ratio(&profile, &seed, y)?,
            delta_norm_bound(&profile, y)
        );
    }
    let ratio = adiabaticity_margin(&profile.gentler(), 1.5)? / adiabaticity_margin(&profile, 1.5)?;
    println!("halving the rise multiplies the margin by {ratio:.3}");
    Ok(())
}
