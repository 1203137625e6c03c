//! Stretching the n = 4 well state: the levels below it pair into doublets.

use stretchlab::quantization::{solve_levels, Geometry, Parity};
use stretchlab::Result;

fn main() -> Result<()> {
    for length in [0.0, 0.5, 1.0, 1.5] {
        let s = solve_levels(&Geometry::CentralWell { width: 1.0, length, level: 4 }, 5)?;
        println!("L = {length}");
        for (n, lv) in s.levels.iter().enumerate() {
            let tag = match lv.parity {
                Some(Parity::Even) => "even",
                Some(Parity::Odd) => "odd",
                None => "stretched",
            };
            println!("  E{n} = {:<20.12} {tag}", lv.energy);
        }
        let e = s.energies();
        println!("  splittings: {:.3e}, {:.3e}", e[1] - e[0], e[3] - e[2]);
    }
    Ok(())
}
