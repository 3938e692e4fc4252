//! Checks the transfer operator equation for known invariant densities.

use cfx::catalog::{self, FareyConjugated};
use cfx::measure::ruelle_residual;

fn main() -> cfx::Result<()> {
    let (gauss, sheet) = catalog::gauss();
    let phi = sheet.density.expect("gauss density");
    for level in [10, 100, 1000, 10_000] {
        let worst = (0..100)
            .map(|i| ruelle_residual(&gauss, phi, (i as f64 + 0.5) / 100.0, level))
            .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))?;
        println!(
            "gauss, {level:>5} branches: residual {worst:.3e}, tail bound {:.3e}",
            gauss.tail_bound(level)?
        );
    }

    // Lebesgue measure is invariant for the conjugated Farey map
    let map = FareyConjugated::new(false);
    let worst = (0..50)
        .map(|i| ruelle_residual(&map, |_| 1.0, 0.05 + 0.1 * i as f64, 0))
        .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))?;
    println!("{}: residual {worst:.3e}", map.name());
    Ok(())
}
