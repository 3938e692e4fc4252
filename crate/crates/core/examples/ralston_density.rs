//! Extracts the invariant density of the odd-even map from its attractor.

use cfx::attractor::fixed_point;
use cfx::catalog;
use cfx::measure::density_profile;

fn main() -> cfx::Result<()> {
    let (ralston, sheet) = catalog::ralston();
    let (k, report) = fixed_point(&ralston, 1024, 1e-3, 200)?;
    println!(
        "{} iterations with {} branches",
        report.iterations, report.n
    );

    let profile = density_profile(&k, true)?;
    let reference = sheet.density.expect("ralston density");
    println!("Z = {:.6}", profile.z);
    println!("sup error {:.2e}", profile.sup_error(reference));
    println!("L1 error  {:.2e}", profile.l1_error(reference));
    for i in (0..profile.x.len()).step_by(128) {
        println!(
            "phi({:.4}) = {:.5}  reference {:.5}",
            profile.x[i],
            profile.phi[i],
            reference(profile.x[i])
        );
    }
    Ok(())
}
