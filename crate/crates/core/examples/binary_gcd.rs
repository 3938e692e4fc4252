//! Greatest common divisors computed by iterating a binary continued fraction map.

use cfx::catalog::binary_gcd;

fn main() -> cfx::Result<()> {
    for (p, q) in [
        (12, 18),
        (17, 51),
        (1071, 1462),
        (832_040, 1_346_269),
        (3 << 18, 1 << 20),
    ] {
        println!("gcd({p}, {q}) = {}", binary_gcd(p, q)?);
    }
    Ok(())
}
