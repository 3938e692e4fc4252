//! Computes the natural extension domain of the Gauss map and compares its
//! fibers with `[0, 1/(1+x)]`.

use cfx::attractor::fixed_point;
use cfx::catalog;

fn main() -> cfx::Result<()> {
    let (gauss, sheet) = catalog::gauss();
    let (k, report) = fixed_point(&gauss, 1024, 1e-3, 200)?;
    println!(
        "{} iterations, last step {:.2e}, contraction {}, {} branches",
        report.iterations, report.final_distance, report.k, report.n
    );

    let roof = sheet.fiber.expect("gauss has a closed-form fiber");
    let mut worst = 0.0f64;
    for x in k.midpoints() {
        let hull = k.fiber_at(x).hull().expect("nonempty fiber");
        let (lo, hi) = roof(x);
        worst = worst.max((hull.lo - lo).abs()).max((hull.hi - hi).abs());
    }
    println!("largest fiber error {worst:.2e}");
    println!(
        "area {:.6} (ln 2 = {:.6})",
        k.mass(),
        std::f64::consts::LN_2
    );
    for x in [0.0, 0.25, 0.5, 0.75, 1.0] {
        println!("K({x}) = {:?}", k.fiber_at(x).intervals());
    }
    Ok(())
}
