//! Escape sweep over every golden family at `T = 1e4`, `ε = 0.1`.
//!
//! Initial radii come from the orders and the size of `ψ₀` only, never from
//! the verdict.

use hamstab::classifier::classify;
use hamstab::families::{cubic_family, intro_example, mansilla_vidal, markeyev, quartic_family};
use hamstab::simulator::{confinement_radius, default_inits, escape_experiment, StepControl};
use hamstab::trigpoly::ZeroTolerances;

fn main() {
    let cases = [
        ("markeyev s=+1", markeyev(1.0, 0.0)),
        ("markeyev s=-1", markeyev(-1.0, 0.0)),
        ("mansilla-vidal q=8 s=+1", mansilla_vidal(8, 1.0, 0.0)),
        ("mansilla-vidal q=8 s=-1", mansilla_vidal(8, -1.0, 0.0)),
        ("intro a=+1", intro_example(1.0)),
        ("intro a=-1", intro_example(-1.0)),
        ("cubic", cubic_family(1, 1.0, 1.0)),
        ("quartic s=-1", quartic_family(1, 1.0, -1.0)),
    ];
    let (eps, horizon) = (0.1, 1e4);
    for (name, h) in &cases {
        let pair = h.leading_pair().unwrap();
        let v = classify(&pair, &ZeroTolerances::default()).unwrap();
        let inits = default_inits(&pair, eps, 16, 8);
        let s = escape_experiment(h, eps, &inits, horizon, &StepControl::escape());
        println!(
            "{name:<24} {:<20} r0 <= {:.4}  escapes {:>3}/{}  first t = {:<10.4e} drift {:.1e}",
            v.to_string(),
            confinement_radius(&pair, eps),
            s.escapes,
            s.total,
            s.first_escape_time.unwrap_or(f64::NAN),
            s.max_drift_relative
        );
    }
}
