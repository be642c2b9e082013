//! Twist coefficient `d²h/dI²` of an autonomous `H₀` on a level curve, from
//! the quadrature formula and from finite differences of the action.

use hamstab::classifier::{twist_check, TwistOptions};
use hamstab::families::{intro_example, markeyev};
use hamstab::hamiltonian::HalfPowerSeries;
use hamstab::trigpoly::TrigPoly;

fn main() {
    let cases = [
        ("r²", HalfPowerSeries::from_terms([(4, TrigPoly::constant(1.0))]).unwrap()),
        ("0.7 r", HalfPowerSeries::rotation(0.7)),
        ("(1 + sin φ) r² + r³", intro_example(1.0)),
        ("r²(1 - cos 4φ) + r³", markeyev(1.0, 0.0)),
    ];
    let opts = TwistOptions::default();
    for (name, h) in &cases {
        println!("{name}");
        for h0 in [1e-6, 1e-4, 1e-2] {
            match twist_check(h, h0, &opts) {
                Ok(t) => println!(
                    "  h0 = {h0:.0e}  I = {:.6e}  λ = {:.8e}  d²h/dI² = {:+.8e}  fd = {:+.8e}  {}",
                    t.action,
                    t.lambda,
                    t.d2h_di2,
                    t.d2h_di2_fd,
                    if t.agrees { "agree" } else { "DISAGREE" }
                ),
                Err(e) => println!("  h0 = {h0:.0e}  {e}"),
            }
        }
    }
}
