//! The alpha-continued fraction domain for alpha < 1/2 is not a product set:
//! fibers over different x have different shapes.

use cfx::attractor::fixed_point;
use cfx::catalog;
use cfx::measure::density_profile;

fn main() -> cfx::Result<()> {
    let alpha = 0.4;
    let (nakada, _) = catalog::nakada(alpha)?;
    let (k, report) = fixed_point(&nakada, 1024, 1e-3, 200)?;
    println!(
        "alpha = {alpha}: {} iterations, area {:.6}",
        report.iterations,
        k.mass()
    );

    let interval = nakada.interval();
    for t in [0.05, 0.3, 0.5, 0.7, 0.95] {
        let x = interval.lo + t * interval.length();
        let pieces: Vec<String> = k
            .fiber_at(x)
            .intervals()
            .iter()
            .map(|i| format!("[{:.4}, {:.4}]", i.lo, i.hi))
            .collect();
        println!("K({x:+.3}) = {}", pieces.join(" u "));
    }

    let profile = density_profile(&k, true)?;
    let (lo, hi) = profile
        .phi
        .iter()
        .fold((f64::MAX, f64::MIN), |(l, h), &p| (l.min(p), h.max(p)));
    println!("density ranges over [{lo:.4}, {hi:.4}]");
    Ok(())
}
