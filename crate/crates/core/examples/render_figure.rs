//! Writes a skew orbit of the Gauss map to CSV and renders it as SVG.

use std::path::PathBuf;

use cfx::catalog;
use cfx::io::{cloud_csv, parse_csv, write_bytes};
use cfx::measure::{seeded_start, skew_orbit};
use cfx::skew::SkewPoint;
use cfx::svg::{render, Scatter};

fn main() -> cfx::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let (gauss, _) = catalog::gauss();
    let x0 = seeded_start(gauss.interval(), 7);
    let cloud = skew_orbit(&gauss, SkewPoint::new(x0, 0.0), 100, 5000)?;

    let csv = cloud_csv(&cloud)?;
    let table = parse_csv(std::str::from_utf8(&csv).expect("utf-8"))?;
    let svg = render(&Scatter::from_table(&table, Some("branch"))?);

    write_bytes(&out.join("gauss_orbit.csv"), &csv)?;
    write_bytes(&out.join("gauss_orbit.svg"), svg.as_bytes())?;
    println!("wrote {} points to {}", cloud.len(), out.display());
    Ok(())
}
