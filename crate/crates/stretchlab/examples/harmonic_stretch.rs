//! A plateau at E₄ = 4.5 inserted into the ω = 1 oscillator.

use stretchlab::eigensolver;
use stretchlab::quantization::{solve_levels, Geometry};
use stretchlab::Result;

fn main() -> Result<()> {
    println!("L     E0..E4 (closed form)                              oracle E4");
    for i in 0..=4 {
        let length = 0.5 * i as f64;
        let g = Geometry::CentralHarmonic { omega: 1.0, length, level: 4 };
        let e = solve_levels(&g, 4)?.energies();
        let oracle = eigensolver::solve_oracle(&g.potential()?, 4, eigensolver::DEFAULT_POINTS)?;
        let shown: Vec<String> = e.iter().map(|x| format!("{x:.6}")).collect();
        println!("{length:<5.1} {}   {:.9}", shown.join(" "), oracle[4].energy);
    }
    Ok(())
}
