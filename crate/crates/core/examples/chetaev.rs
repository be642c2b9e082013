//! Chetaev function `V = δ r^{2α+γ} - r^{2α} ψ²` on a sector where
//! `ψ = ψ₀ + r^γ ψ₁` is small and decreasing.

use hamstab::classifier::{chetaev_certificate, ChetaevOptions};
use hamstab::families::{intro_example, markeyev, quartic_family};

fn main() {
    let cases = [
        ("markeyev s=-1 kappa=0", markeyev(-1.0, 0.0)),
        ("markeyev s=-1 kappa=2", markeyev(-1.0, 2.0)),
        ("intro a=-1", intro_example(-1.0)),
        ("quartic s=-1", quartic_family(1, 1.0, -1.0)),
        ("markeyev s=+1 (stable)", markeyev(1.0, 0.0)),
    ];
    for a in [0.1, 0.05] {
        let opts = ChetaevOptions { a, ..Default::default() };
        println!("a = {a}, {}x{} samples", opts.angle_samples, opts.radius_samples);
        for (name, h) in &cases {
            match chetaev_certificate(&h.leading_pair().unwrap(), &opts) {
                Ok(c) => println!(
                    "  {name:<24} passed: δ = {:.3e}, min V/(δ r^(2α+γ)) = {:.4}, min -ψ_φ = {:.4}, φ from {:.4} to {:.4}",
                    c.delta, c.min_v_relative, c.min_neg_slope, c.phi_outer, c.phi_inner
                ),
                Err(e) => println!("  {name:<24} {e}"),
            }
        }
    }
}
