//! `H = (1 + sin φ) r² + a r³`.
//!
//! `a = 1` is stable and `a = -1` unstable. For `a = -1` the zero level
//! `r = 1 + sin φ` is an explicit orbit: started at `φ = -π/2 - μ` with
//! `r = 2sin²(μ/2)`, it climbs from near the origin to `r ≈ 1`. Writes the
//! orbit to `level_orbit.csv` when given `--csv`.

use hamstab::classifier::classify;
use hamstab::families::intro_example;
use hamstab::simulator::{level_orbit, StepControl, LEVEL_ORBIT_HORIZON};
use hamstab::trigpoly::ZeroTolerances;

fn main() {
    let tol = ZeroTolerances::default();
    for a in [1.0, -1.0] {
        let v = classify(&intro_example(a).leading_pair().unwrap(), &tol).unwrap();
        println!("a = {a:+}: {v}");
    }

    let mu = 0.1;
    let t = level_orbit(mu, LEVEL_ORBIT_HORIZON, &StepControl::default()).unwrap();
    let defect = t.samples.iter().map(|s| s.h.abs()).fold(0.0, f64::max);
    println!("level orbit, mu = {mu}");
    println!("  r(0)  = {:.6e}", t.samples[0].r);
    println!("  max r = {:.6}", t.max_r);
    println!("  max |r - (1 + sin φ)| = {defect:.2e} over {} steps", t.accepted);
    for s in t.samples.iter().step_by((t.samples.len() / 8).max(1)) {
        println!("  t = {:>10.3}  r = {:.6e}  φ = {:+.6}", s.t, s.r, s.phi);
    }
    if std::env::args().any(|a| a == "--csv") {
        std::fs::write("level_orbit.csv", t.to_csv()).unwrap();
        println!("wrote level_orbit.csv");
    }
}
