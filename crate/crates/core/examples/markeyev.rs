//! Fourth-order resonance: `H = r²(1 - cos 4φ) + r³(s + κ(1 - cos 4φ))`.
//!
//! Classifies every `(s, κ)` on a small grid, certifies the unstable ones
//! with a Chetaev function and runs the escape sweep as a sanity check.

use hamstab::classifier::{chetaev_certificate, classify, ChetaevOptions};
use hamstab::families::markeyev;
use hamstab::simulator::{default_inits, escape_experiment, StepControl};
use hamstab::trigpoly::ZeroTolerances;

fn main() {
    let tol = ZeroTolerances::default();
    println!("{:>4} {:>5}  {:<20} {:<12} escapes (T = 1e4, eps = 0.1)", "s", "kappa", "verdict", "chetaev");
    for s in [1.0, -1.0] {
        for kappa in [-2.0, 0.0, 2.0] {
            let h = markeyev(s, kappa);
            let pair = h.leading_pair().unwrap();
            let v = classify(&pair, &tol).unwrap();
            let cert = match chetaev_certificate(&pair, &ChetaevOptions::default()) {
                Ok(c) => format!("δ={:.2e}", c.delta),
                Err(_) => "-".into(),
            };
            let inits = default_inits(&pair, 0.1, 16, 8);
            let sweep = escape_experiment(&h, 0.1, &inits, 1e4, &StepControl::escape());
            println!(
                "{s:>4} {kappa:>5}  {:<20} {cert:<12} {}/{} (drift {:.1e})",
                v.to_string(),
                sweep.escapes,
                sweep.total,
                sweep.max_drift_relative
            );
        }
    }
}
