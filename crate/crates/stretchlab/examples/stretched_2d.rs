//! Separable 2D box with both axes stretched: flat centre, unchanged energy.

use stretchlab::twod::stretched_2d_ground;
use stretchlab::Result;

fn main() -> Result<()> {
    let s = stretched_2d_ground(1.0, 1.0, 0.3, 0.5)?;
    let (xe, ye) = s.extent();
    println!("domain [0, {xe}] × [0, {ye}], E = {}", s.energy);
    println!("ψ at the centre {:.12}, gradient {:?}", s.value(0.65, 0.75), s.gradient(0.65, 0.75));
    for n in [51, 101, 201] {
        println!("grid residual on {n}×{n}: {:.3e}", s.grid_residual(n)?);
    }
    Ok(())
}
