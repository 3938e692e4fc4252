//! Builds a system from an explicit JSON branch table and computes its density.

use cfx::attractor::fixed_point;
use cfx::catalog::Builtin;
use cfx::io::SystemSpec;
use cfx::measure::density_profile;

const SPEC: &str = r#"{
  "name": "doubling-inverse",
  "interval": [0, 1],
  "branches": [
    {"matrix": [2, 0, 0, 1], "domain": [0, 0.5], "label": "0"},
    {"matrix": [-1, 1, 1, 0], "domain": [0.5, 1], "label": "1"}
  ]
}"#;

fn main() -> cfx::Result<()> {
    let spec: SystemSpec = serde_json::from_str(SPEC)?;
    let Builtin::Mobius(system, _) = spec.resolve()? else {
        unreachable!()
    };
    let diagnostics = system.validate();
    println!("{} validates: {}", system.name(), diagnostics.passed());

    let (k, report) = fixed_point(&system, 512, 1e-3, 200)?;
    let profile = density_profile(&k, true)?;
    println!("{} iterations, Z = {:.6}", report.iterations, profile.z);
    // the same branches as the chan-add builtin, which shares the Gauss density
    let reference = |x: f64| 1.0 / ((1.0 + x) * std::f64::consts::LN_2);
    println!(
        "sup error against the closed form {:.2e}",
        profile.sup_error(reference)
    );
    Ok(())
}
