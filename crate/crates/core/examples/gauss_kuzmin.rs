//! Convergence of iterated uniform samples to the Gauss measure.

use cfx::measure::gauss_kuzmin_experiment;

fn main() -> cfx::Result<()> {
    for depth in [0, 1, 2, 5, 20] {
        let (_, sup) = gauss_kuzmin_experiment(100_000, depth, 100, 42)?;
        let target = if depth == 0 { "x" } else { "log2(1+x)" };
        println!("depth {depth:>2}: sup |F - {target}| = {sup:.4}");
    }
    Ok(())
}
