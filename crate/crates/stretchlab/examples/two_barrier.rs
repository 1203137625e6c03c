//! Two plateaus at E₁ inside a unit well, solved by transfer matrix with the
//! closed-form conditions as a cross-check.

use stretchlab::quantization::{solve_levels, Geometry};
use stretchlab::Result;

fn main() -> Result<()> {
    let steps = [0.0, 0.2, 0.4, 0.6, 0.8];
    println!("ground energy over (L1 rows, L2 columns):");
    for &left in &steps {
        let row: Vec<String> = steps
            .iter()
            .map(|&right| {
                solve_levels(&Geometry::TwoBarrierWell { width: 1.0, left, right }, 0)
                    .map(|s| format!("{:9.5}", s.levels[0].energy))
            })
            .collect::<Result<_>>()?;
        println!("  {left:.1}  {}", row.join(" "));
    }
    let s = solve_levels(&Geometry::TwoBarrierWell { width: 1.0, left: 0.4, right: 0.2 }, 3)?;
    println!("\nL1 = 0.4, L2 = 0.2: {:?}", s.energies());
    println!("discrepancies: {:?}", s.discrepancies);
    Ok(())
}
