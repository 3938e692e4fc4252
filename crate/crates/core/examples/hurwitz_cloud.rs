//! Orbit of the complex nearest-integer continued fraction extension.

use cfx::catalog::Hurwitz;
use cfx::measure::{hurwitz_orbit, CloudRows};

fn main() -> cfx::Result<()> {
    let cloud = hurwitz_orbit(Hurwitz.start(42), 100, 20_000)?;
    let CloudRows::Hurwitz(rows) = &cloud.rows else {
        unreachable!()
    };
    let max_z = rows.iter().map(|r| r.z.norm()).fold(0.0, f64::max);
    let max_w = rows.iter().map(|r| r.w.norm()).fold(0.0, f64::max);
    println!(
        "{} points, max |z| = {max_z:.4}, max |w| = {max_w:.4}",
        rows.len()
    );
    println!("{} distinct digits", cloud.label_counts().len());
    let mut counts: Vec<_> = cloud.label_counts().into_iter().collect();
    counts.sort_by_key(|c| std::cmp::Reverse(c.1));
    for (digit, count) in counts.iter().take(8) {
        println!("digit {digit}: {count}");
    }
    Ok(())
}
