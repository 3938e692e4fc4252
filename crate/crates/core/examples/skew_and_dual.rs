//! Iterates the Gauss map's planar extension in both coordinate systems.

use cfx::catalog;
use cfx::measure::{dual_orbit, seeded_start, skew_orbit};
use cfx::skew::{skew_step, to_dual, DualPoint, SkewPoint};

fn main() -> cfx::Result<()> {
    let (gauss, _) = catalog::gauss();

    let mut p = SkewPoint::new(std::f64::consts::PI - 3.0, 0.2);
    for _ in 0..5 {
        let (q, digit) = skew_step(&gauss, p)?;
        let v = to_dual(q)?;
        println!(
            "digit {digit}: (x, y) = ({:.6}, {:.6})  (x, v) = ({:.6}, {:.6})",
            q.x, q.y, v.x, v.v
        );
        p = q;
    }

    let x0 = seeded_start(gauss.interval(), 42);
    let skew = skew_orbit(&gauss, SkewPoint::new(x0, 0.0), 100, 20_000)?;
    let dual = dual_orbit(&gauss, DualPoint::new(x0, 0.0), 100, 20_000)?;
    println!("skew bounding box {:?}", skew.bounding_box());
    println!("dual bounding box {:?}", dual.bounding_box());
    let mut counts: Vec<_> = skew.label_counts().into_iter().collect();
    counts.sort_by_key(|c| std::cmp::Reverse(c.1));
    for (digit, count) in counts.iter().take(5) {
        println!("digit {digit}: {count}");
    }
    Ok(())
}
