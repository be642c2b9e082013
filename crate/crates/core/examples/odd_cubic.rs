//! Zeros of odd multiplicity: `ψ₀ = 4cos³φ = 3cos φ + cos 3φ`, `ψ₁ = cos φ`.
//!
//! At `π/2` the triple zero has `ψ₀''' = -24` and `ψ₁' = -1`, so the product
//! is positive and the origin is unstable. Orbits started in the sector
//! around `π/2` move straight out.

use std::f64::consts::FRAC_PI_2;

use hamstab::classifier::{classify, classify_odd};
use hamstab::families::cubic_family;
use hamstab::hamiltonian::AngleActionState;
use hamstab::simulator::{integrate, StepControl};
use hamstab::trigpoly::ZeroTolerances;

fn main() {
    let tol = ZeroTolerances::default();
    let h = cubic_family(1, 1.0, 1.0);
    let pair = h.leading_pair().unwrap();
    let v = classify(&pair, &tol).unwrap();
    println!("{v}");
    for w in &v.witnesses {
        println!("  φ0 = {:.10}  mult {}  ψ0''' = {:+}  ψ1' = {:+}", w.phi0, w.mult, w.lead, w.psi1_derivative.unwrap());
    }

    let flat = cubic_family(1, 1.0, 0.0);
    let mut p = flat.leading_pair().unwrap();
    p.psi1 = hamstab::trigpoly::TrigPoly::constant(1.0);
    println!("with constant ψ1: {}", classify_odd(&p, &tol).unwrap());

    let ctrl = StepControl { escape_radius: Some(0.1), ..Default::default() };
    let t = integrate(&h, AngleActionState::new(1e-4, FRAC_PI_2 + 0.05), 1e4, &ctrl).unwrap();
    println!("orbit from r = 1e-4 next to π/2: r = 0.1 reached at t = {:.3}", t.escape_time.unwrap_or(f64::NAN));
    for s in &t.samples {
        println!("  t = {:>9.4}  r = {:.4e}  φ - π/2 = {:+.5}", s.t, s.r, s.phi - FRAC_PI_2);
    }
}
