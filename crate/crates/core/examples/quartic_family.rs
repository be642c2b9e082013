//! Zeros of order four: `ψ₀ = 8B cos⁴(kφ)`, `ψ₁ = s`. Decided by the even
//! criterion; the unstable side is certified by a Chetaev function.

use hamstab::classifier::{chetaev_certificate, classify, ChetaevOptions};
use hamstab::families::quartic_family;
use hamstab::trigpoly::ZeroTolerances;

fn main() {
    let tol = ZeroTolerances::default();
    for k in [1, 2] {
        for (b, s) in [(1.0, 1.0), (1.0, -1.0), (-0.5, 1.0), (-0.5, -1.0)] {
            let pair = quartic_family(k, b, s).leading_pair().unwrap();
            let v = classify(&pair, &tol).unwrap();
            let cert = chetaev_certificate(&pair, &ChetaevOptions::default())
                .map(|c| format!("certificate δ = {:.3e}", c.delta))
                .unwrap_or_else(|e| e.to_string());
            println!("k = {k} B = {b:+} s = {s:+}: {:<16} {cert}", v.to_string());
        }
    }
}
