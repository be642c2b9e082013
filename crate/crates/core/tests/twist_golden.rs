use hamstab::classifier::{twist_check, TwistOptions};
use hamstab::families::{intro_example, mansilla_vidal, markeyev, quartic_family};
use hamstab::hamiltonian::HalfPowerSeries;
use hamstab::trigpoly::TrigPoly;

#[test]
fn formula_agrees_with_finite_differences_on_golden_inputs() {
    let cases = [
        ("r^2", HalfPowerSeries::from_terms([(4, TrigPoly::constant(1.0))]).unwrap()),
        ("intro a=1", intro_example(1.0)),
        ("markeyev s=1 k=-2", markeyev(1.0, -2.0)),
        ("markeyev s=1 k=0", markeyev(1.0, 0.0)),
        ("markeyev s=1 k=2", markeyev(1.0, 2.0)),
        ("mv q=6", mansilla_vidal(6, 1.0, 0.0)),
        ("mv q=8", mansilla_vidal(8, 1.0, 0.0)),
        ("mv q=10", mansilla_vidal(10, 1.0, 0.0)),
        ("quartic s=1", quartic_family(1, 1.0, 1.0)),
    ];
    for (name, h) in &cases {
        for h0 in [1e-6, 1e-5, 1e-4] {
            let rep = twist_check(h, h0, &TwistOptions::default()).unwrap();
            assert!(rep.agrees, "{name} at {h0}: {} vs {}", rep.d2h_di2, rep.d2h_di2_fd);
            assert!(rep.lambda > 0.0);
            let rel = (rep.d2h_di2 - rep.d2h_di2_fd).abs() / rep.d2h_di2.abs();
            assert!(rel <= 1e-4, "{name} at {h0}: rel {rel}");
        }
    }
}
