//! Stretch the ground state of a unit well and watch the spectrum move
//! while E₀ stays put.

use stretchlab::quantization::{solve_levels, Geometry};
use stretchlab::Result;

fn main() -> Result<()> {
    println!("L      E0            E1            E2            E3");
    for i in 0..=10 {
        let length = 0.2 * i as f64;
        let s = solve_levels(&Geometry::CentralWell { width: 1.0, length, level: 0 }, 3)?;
        let e = s.energies();
        println!("{length:<6.2} {:<13.8} {:<13.8} {:<13.8} {:.8}", e[0], e[1], e[2], e[3]);
    }
    let s = solve_levels(&Geometry::CentralWell { width: 1.0, length: 0.4, level: 0 }, 0)?;
    let psi = &s.levels[0].wavefunction;
    println!("\nψ₀ on the plateau at L = 0.4:");
    for x in [-0.2, -0.1, 0.0, 0.1, 0.2] {
        println!("  ψ({x:+.1}) = {:.12}  ψ' = {:.1e}", psi.value(x), psi.derivative(x));
    }
    Ok(())
}
