//! Normal-form bookkeeping for a time-periodic series at `ω = 1/4`.
//!
//! Builds `H = ω r + r²(1 + A cos(4φ + t)) + …` from modes, checks the
//! resonance condition, autonomizes and runs the resonance prescreen.

use hamstab::classifier::{classify, prescreen, Prescreen};
use hamstab::normalform::{analyze, nf_residual, Frequency, TimePeriodicSeries};
use hamstab::trigpoly::ZeroTolerances;
use num_complex::Complex64;

fn series(b4: f64) -> TimePeriodicSeries {
    let mut h = TimePeriodicSeries::new();
    h.add(1, 1, 0, Complex64::new(0.25, 0.0));
    h.add(2, 2, 0, Complex64::new(1.0, 0.0));
    h.add_real_pair(4, 0, 1, Complex64::new(b4 / 2.0, 0.0));
    h.add(3, 3, 0, Complex64::new(-1.0, 0.0));
    h
}

fn main() {
    let omega: Frequency = "1/4".parse().unwrap();
    let tol = ZeroTolerances::default();
    for b4 in [0.5, -1.0, 2.0] {
        let h = series(b4);
        let rep = analyze(&h, &omega).unwrap();
        println!("B = {b4:+}: residual {} ({})", rep.residual, rep.module);
        println!("  autonomous: {}", rep.autonomous.as_ref().unwrap());
        let st = rep.resonant.unwrap();
        match prescreen(&st, 4, &tol).unwrap() {
            Prescreen::Decided(v) => println!("  prescreen: {v}"),
            Prescreen::Pair { pair, phase } => {
                println!("  degenerate, phase {:?}; {}", phase, classify(&pair, &tol).unwrap());
            }
        }
    }

    let mut off = series(1.0);
    off.add(3, 0, 0, Complex64::new(0.01, 0.0));
    println!("with a nonresonant r^(3/2) e^(3iφ) mode: residual {:.4}", nf_residual(&off, &omega));
}
