//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::f64::consts::LN_2;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use cfx::attractor::{
    fixed_point, hausdorff_distance, image_overlap, invariance_residual, reference_residual,
    surjectivity_defect, AttractorGrid, FiberSet, FixedPointReport,
};
use cfx::catalog::{self, binary_gcd, Hurwitz};
use cfx::cli::{conjugacy_error, jacobian_error};
use cfx::measure::{
    density_profile, gauss_kuzmin_experiment, hurwitz_orbit, marginal_histogram, ruelle_residual,
    skew_orbit, CloudRows,
};
use cfx::mobius::PiecewiseSystem;
use cfx::skew::SkewPoint;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

struct Converged {
    system: PiecewiseSystem,
    grid: AttractorGrid,
    report: FixedPointReport,
    seconds: f64,
}

fn converge(system: PiecewiseSystem) -> Converged {
    let start = Instant::now();
    let (grid, report) = fixed_point(&system, 1024, 1e-3, 200).expect("attractor converges");
    Converged {
        system,
        grid,
        report,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// `max_j d_H(K(x_j), [low(x_j), high(x_j)])`.
fn max_fiber_error(grid: &AttractorGrid, reference: impl Fn(f64) -> (f64, f64)) -> f64 {
    grid.midpoints()
        .zip(grid.fibers())
        .map(|(x, f)| {
            let (lo, hi) = reference(x);
            hausdorff_distance(f, &FiberSet::interval(lo, hi)).unwrap()
        })
        .fold(0.0, f64::max)
}

fn gauss_fiber(x: f64) -> (f64, f64) {
    (0.0, 1.0 / (1.0 + x))
}

fn ralston_constant() -> f64 {
    1.0 / 6f64.ln()
}

fn ralston_fiber(x: f64) -> (f64, f64) {
    if x < 0.5 {
        (1.0 / (x - 1.0), 1.0 / (x + 1.0))
    } else {
        (0.0, 1.0 / x)
    }
}

fn ralston_density(x: f64) -> f64 {
    let c = ralston_constant();
    if x < 0.5 {
        2.0 * c / (1.0 - x * x)
    } else {
        c / x
    }
}

fn midpoints(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (i as f64 + 0.5) / n as f64 * (hi - lo))
        .collect()
}

fn gcd(mut p: u64, mut q: u64) -> u64 {
    while p != 0 {
        (p, q) = (q % p, p);
    }
    q
}

fn cfx(args: &[&str], dir: &Path) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_cfx"))
        .args(args)
        .current_dir(dir)
        .env("CFX_THREADS", "1")
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn criterion_1(gauss: &Converged) -> Outcome {
    let err = max_fiber_error(&gauss.grid, gauss_fiber);
    outcome(
        err <= 5e-3 && gauss.seconds <= 10.0,
        format!(
            "max d_H = {err:.3e} (<= 5e-3), {} iterations, {:.2} s (<= 10 s)",
            gauss.report.iterations, gauss.seconds
        ),
    )
}

fn criterion_2(gauss: &Converged) -> Outcome {
    let profile = density_profile(&gauss.grid, true).unwrap();
    let err = profile.sup_error(|x| 1.0 / (LN_2 * (1.0 + x)));
    let z_err = (profile.z - LN_2).abs();
    outcome(
        err <= 1e-2 && z_err <= 1e-2,
        format!(
            "sup error {err:.3e} (<= 1e-2), Z = {:.6} (0.6931 +- 1e-2)",
            profile.z
        ),
    )
}

fn criterion_3() -> Outcome {
    let (gauss, _) = catalog::gauss();
    let start = Instant::now();
    let xs = midpoints(0.0, 1.0, 100);
    let mut worst: f64 = 0.0;
    let mut telescoping: f64 = 0.0;
    for &x in &xs {
        let r = ruelle_residual(&gauss, |x| 1.0 / (1.0 + x), x, 10_000).unwrap();
        worst = worst.max(r);
        // the omitted tail sums to 1/(N+1+x) exactly
        telescoping = telescoping.max((r - 1.0 / (10_001.0 + x)).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 2e-4 && telescoping <= 1e-12 && secs <= 1.0,
        format!("max residual {worst:.3e} (<= 2e-4), matches tail to {telescoping:.1e}, {secs:.2} s (<= 1 s)"),
    )
}

fn criterion_4(chan: &Converged) -> Outcome {
    let err = max_fiber_error(&chan.grid, |x| (1.0 / (2.0 + x), 1.0 / (1.0 + x)));
    let c = 1.0 / (4.0f64 / 3.0).ln();
    let profile = density_profile(&chan.grid, true).unwrap();
    let dens = profile.sup_error(|x| c / ((1.0 + x) * (2.0 + x)));
    outcome(
        err <= 5e-3 && dens <= 1e-2,
        format!("max d_H = {err:.3e} (<= 5e-3), density sup error {dens:.3e} (<= 1e-2)"),
    )
}

fn criterion_5(chan: &Converged) -> Outcome {
    let err = max_fiber_error(&chan.grid, gauss_fiber);
    outcome(err <= 5e-3, format!("max d_H = {err:.3e} (<= 5e-3)"))
}

fn criterion_6(ralston: &Converged) -> Outcome {
    let err = max_fiber_error(&ralston.grid, ralston_fiber);
    let profile = density_profile(&ralston.grid, true).unwrap();
    let dens = profile.sup_error(ralston_density);
    outcome(
        err <= 1e-2 && dens <= 2e-2 && ralston.seconds <= 60.0,
        format!(
            "max d_H = {err:.3e} (<= 1e-2), density sup error {dens:.3e} (<= 2e-2), {:.2} s (<= 60 s)",
            ralston.seconds
        ),
    )
}

fn criterion_7(dir: &Path) -> Outcome {
    let (farey, _) = catalog::farey();
    let (plus, _) = catalog::farey_plus();
    let xs = midpoints(0.05, 0.95, 100);
    let mut ruelle: f64 = 0.0;
    for &x in &xs {
        ruelle = ruelle.max(ruelle_residual(&farey, |x| 1.0 / x, x, 0).unwrap());
        ruelle = ruelle.max(ruelle_residual(&plus, |x| 1.0 / (x * (1.0 - x)), x, 0).unwrap());
    }
    let inv_farey =
        reference_residual(&farey, 0, &xs, |x| FiberSet::interval(0.0, 1.0 / x)).unwrap();
    let inv_plus = reference_residual(&plus, 0, &xs, |x| {
        FiberSet::interval(1.0 / (x - 1.0), 1.0 / x)
    })
    .unwrap();
    let (code_f, _) = cfx(&["attract", "--system", "farey"], dir);
    let (code_p, _) = cfx(&["attract", "--system", "farey-plus"], dir);
    let inv = inv_farey.max(inv_plus);
    outcome(
        ruelle <= 1e-12 && inv <= 5e-3 && code_f == Some(2) && code_p == Some(2),
        format!(
            "Ruelle {ruelle:.1e} (<= 1e-12), invariance {inv:.1e} (<= 5e-3), attract exit codes {code_f:?} {code_p:?} (2)"
        ),
    )
}

fn attractor_points(system: &PiecewiseSystem, n: usize) -> Vec<SkewPoint> {
    let x0 = system.interval().lo + 0.414214 * system.interval().length();
    let cloud = skew_orbit(system, SkewPoint::new(x0, 0.0), 100, n).unwrap();
    let CloudRows::Planar(rows) = cloud.rows else {
        unreachable!()
    };
    rows.iter().map(|r| SkewPoint::new(r.x, r.y)).collect()
}

fn criterion_8() -> Outcome {
    let systems = [
        catalog::gauss().0,
        catalog::symmetrized_gauss().0,
        catalog::nakada(0.4).unwrap().0,
    ];
    let mut conj: f64 = 0.0;
    let mut jac: f64 = 0.0;
    for s in &systems {
        let pts = attractor_points(s, 10_000);
        conj = conj.max(conjugacy_error(s, &pts).unwrap());
        jac = jac.max(jacobian_error(s, &pts).unwrap());
    }
    outcome(
        conj <= 1e-10 && jac <= 1e-5,
        format!("intertwining {conj:.2e} (<= 1e-10), |det - 1| {jac:.2e} (<= 1e-5)"),
    )
}

fn criterion_9(all: &[(&str, &Converged)]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, c) in all {
        let m = c.grid.mass();
        let overlap = image_overlap(&c.system, &c.grid, c.report.n).unwrap();
        let defect = surjectivity_defect(&c.system, &c.grid, c.report.n).unwrap();
        ok &= overlap <= 1e-3 * m && defect <= 1e-3 * m;
        parts.push(format!("{name} {:.1e}/{:.1e}", overlap / m, defect / m));
    }
    outcome(
        ok,
        format!(
            "overlap/defect relative to m(K) (<= 1e-3): {}",
            parts.join(", ")
        ),
    )
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let n = 100_000;
    let (_, dev20) = gauss_kuzmin_experiment(n, 20, 100, 42).unwrap();
    let (cdf0, _) = gauss_kuzmin_experiment(n, 0, 100, 42).unwrap();
    let dev0 = cdf0
        .points()
        .map(|(x, p)| (p - x).abs())
        .fold(0.0, f64::max);
    // Dvoretzky–Kiefer–Wolfowitz band at confidence 0.999
    let band = ((2.0f64 / 1e-3).ln() / (2.0 * n as f64)).sqrt();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        dev20 <= 0.01 && dev0 <= band && secs <= 5.0,
        format!("depth 20 sup {dev20:.4} (<= 0.01), depth 0 sup {dev0:.4} (<= {band:.4}), {secs:.2} s (<= 5 s)"),
    )
}

fn criterion_11() -> Outcome {
    let (system, _) = catalog::nakada(0.4).unwrap();
    let (grid, report) = match fixed_point(&system, 1024, 1e-3, 200) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("no convergence: {e}")),
    };
    let mass = grid.mass();
    let inv = invariance_residual(&system, &grid, report.n).unwrap();

    let bins = 128;
    let cloud = skew_orbit(&system, SkewPoint::new(0.1234567, 0.0), 1000, 1_000_000).unwrap();
    let hist = marginal_histogram(&cloud, bins).unwrap();
    let profile = density_profile(&grid, true).unwrap();
    let per_bin = grid.n_cells() / bins;
    let l1: f64 = (0..bins)
        .map(|k| {
            let att = profile.phi[k * per_bin..(k + 1) * per_bin]
                .iter()
                .sum::<f64>()
                / per_bin as f64;
            (hist.phi[k] - att).abs() * hist.cell_width()
        })
        .sum();

    let h = grid.cell_width();
    let counts: std::collections::BTreeSet<usize> =
        grid.fibers().iter().map(|f| f.intervals().len()).collect();
    let jump = grid
        .fibers()
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].hull().unwrap(), w[1].hull().unwrap());
            (a.lo - b.lo).abs().max((a.hi - b.hi).abs())
        })
        .fold(0.0, f64::max);
    let non_product = counts.len() >= 2 || jump > 10.0 * h;
    outcome(
        mass > 0.0 && inv <= 5e-3 && l1 <= 3e-2 && non_product,
        format!(
            "m(K) = {mass:.4}, invariance {inv:.1e} (<= 5e-3), marginal L1 {l1:.2e} (<= 3e-2), interval counts {counts:?}, max boundary jump {:.0}h",
            jump / h
        ),
    )
}

fn criterion_12() -> Outcome {
    let cloud = hurwitz_orbit(Hurwitz.start(42), 0, 100_000).unwrap();
    let CloudRows::Hurwitz(rows) = cloud.rows else {
        unreachable!()
    };
    let in_square = rows
        .iter()
        .all(|r| r.z.re.abs() <= 0.5 && r.z.im.abs() <= 0.5);
    let max_w = |n: usize| rows[..n].iter().map(|r| r.w.norm()).fold(0.0, f64::max);
    let (w4, w5) = (max_w(10_000), max_w(100_000));
    let change = (w5 - w4).abs() / w4;
    outcome(
        in_square && change < 0.01,
        format!(
            "z in square: {in_square}, max |w| {w4:.4} -> {w5:.4} ({:.2}% < 1%)",
            100.0 * change
        ),
    )
}

fn criterion_13() -> Outcome {
    let start = Instant::now();
    let mut mismatches = 0;
    for q in 2..=500u64 {
        for p in 1..q {
            if binary_gcd(p, q).unwrap() != gcd(p, q) {
                mismatches += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        mismatches == 0 && secs <= 1.0,
        format!("{mismatches} mismatches over 1 <= p < q <= 500, {secs:.3} s (<= 1 s)"),
    )
}

fn criterion_14(dir: &Path) -> Outcome {
    let runs: &[&[&str]] = &[
        &[
            "orbit",
            "--system",
            "gauss",
            "--points",
            "3000",
            "--out",
            "orbit.csv",
        ],
        &[
            "orbit", "--system", "gauss", "--form", "dual", "--points", "3000", "--out", "dual.csv",
        ],
        &[
            "orbit",
            "--system",
            "hurwitz",
            "--points",
            "3000",
            "--out",
            "hurwitz.csv",
        ],
        &[
            "orbit",
            "--system",
            "farey-conj-signed",
            "--points",
            "3000",
            "--out",
            "conj.csv",
        ],
        &[
            "attract",
            "--system",
            "chan-mult",
            "--grid",
            "256",
            "--tol",
            "2e-3",
            "--out",
            "att.json",
        ],
        &["density", "--input", "att.json", "--out", "density.csv"],
        &["verify", "--system", "gauss", "--check", "conjugacy"],
        &["gauss-kuzmin", "--samples", "20000", "--out", "cdf.csv"],
        &[
            "render",
            "--input",
            "hurwitz.csv",
            "--color",
            "digit",
            "--out",
            "plot.svg",
        ],
    ];
    let mut differing = Vec::new();
    for args in runs {
        let snapshot = |dir: &Path| {
            let (code, stdout) = cfx(args, dir);
            let file = args
                .iter()
                .position(|a| *a == "--out")
                .map(|i| std::fs::read(dir.join(args[i + 1])).unwrap_or_default());
            (code, stdout, file)
        };
        let first = snapshot(dir);
        let second = snapshot(dir);
        if first != second || first.0 != Some(0) {
            differing.push(args[0].to_string());
        }
    }
    outcome(
        differing.is_empty(),
        format!(
            "{} commands run twice; differing or failing: {differing:?}",
            runs.len()
        ),
    )
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let gauss = converge(catalog::gauss().0);
    let chan_mult = converge(catalog::chan_multiplicative().0);
    let chan_add = converge(catalog::chan_additive().0);
    let ralston = converge(catalog::ralston().0);

    let results = [
        ("Gauss attractor", criterion_1(&gauss)),
        ("Gauss density", criterion_2(&gauss)),
        ("Gauss Ruelle identity", criterion_3()),
        ("Chan multiplicative", criterion_4(&chan_mult)),
        ("Chan additive", criterion_5(&chan_add)),
        ("Ralston", criterion_6(&ralston)),
        ("Farey and Farey+", criterion_7(dir.path())),
        ("Conjugacy and Jacobian", criterion_8()),
        (
            "Natural-extension conditions",
            criterion_9(&[
                ("gauss", &gauss),
                ("chan-add", &chan_add),
                ("chan-mult", &chan_mult),
                ("ralston", &ralston),
            ]),
        ),
        ("Gauss-Kuzmin", criterion_10()),
        ("Nakada alpha = 2/5", criterion_11()),
        ("Hurwitz", criterion_12()),
        ("Binary GCD", criterion_13()),
        ("Determinism", criterion_14(dir.path())),
    ];

    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict} {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.passed);
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
