use std::f64::consts::TAU;

use hamstab::hamiltonian::{to_action_angle, to_cartesian, AngleActionState, CartesianState, HalfPowerSeries};
use hamstab::trigpoly::TrigPoly;
use proptest::prelude::*;

fn trig(max_deg: usize) -> impl Strategy<Value = TrigPoly> {
    (0..=max_deg).prop_flat_map(|n| {
        (-3.0f64..3.0, prop::collection::vec(-3.0f64..3.0, n), prop::collection::vec(-3.0f64..3.0, n))
            .prop_map(|(a0, c, s)| TrigPoly::new(a0, &c, &s))
    })
}

fn series() -> impl Strategy<Value = HalfPowerSeries> {
    prop::collection::vec((2u32..=8, trig(5)), 1..5)
        .prop_map(|terms| HalfPowerSeries::from_terms(terms).unwrap())
}

/// Magnitude bound for finite-difference comparisons at radius r.
fn size(h: &HalfPowerSeries, r: f64) -> f64 {
    h.terms().map(|(j, p)| p.l1_norm() * r.powf(j as f64 / 2.0 - 1.0) * j as f64).sum::<f64>().max(1e-300)
}

fn size_phi(h: &HalfPowerSeries, r: f64) -> f64 {
    h.terms().map(|(j, p)| p.derivative_scale(1) * r.powf(j as f64 / 2.0)).sum::<f64>().max(1e-300)
}

/// `∮ r dφ` along the polygon with vertices `v`, using only the library's map.
fn action_loop_integral(v: &[CartesianState]) -> f64 {
    let n = 2000;
    let mut total = 0.0;
    for k in 0..v.len() {
        let (a, b) = (v[k], v[(k + 1) % v.len()]);
        let at = |t: f64| to_action_angle(CartesianState { x: a.x + t * (b.x - a.x), y: a.y + t * (b.y - a.y) });
        let h = 1.0 / n as f64;
        // composite Simpson on r(t) dφ/dt, dφ/dt by central differences of the unwrapped angle
        let dphi = |t: f64| {
            let e = 1e-6;
            let d = at(t + e).phi - at(t - e).phi;
            (d + TAU / 2.0).rem_euclid(TAU) - TAU / 2.0
        };
        let f = |t: f64| at(t).r * dphi(t) / 2e-6;
        let mut s = f(0.0) + f(1.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        total += s * h / 3.0;
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partial_phi_matches_differences(h in series(), r in 1e-3f64..1.0, phi in 0.0f64..TAU) {
        let e = 1e-5;
        let f = |p: f64| h.eval(AngleActionState::new(r, p)).unwrap();
        let fd = (f(phi + e) - f(phi - e)) / (2.0 * e);
        let exact = h.partial_phi(AngleActionState::new(r, phi)).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-6 * size_phi(&h, r), "{fd} vs {exact}");
    }

    #[test]
    fn partial_r_matches_differences(h in series(), r in 1e-3f64..1.0, phi in 0.0f64..TAU) {
        let e = 1e-5 * r;
        let f = |x: f64| h.eval(AngleActionState::new(x, phi)).unwrap();
        let fd = (f(r + e) - f(r - e)) / (2.0 * e);
        let exact = h.partial_r(AngleActionState::new(r, phi)).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-6 * size(&h, r), "{fd} vs {exact}");

        let g = |x: f64| h.partial_r(AngleActionState::new(x, phi)).unwrap();
        let fd2 = (g(r + e) - g(r - e)) / (2.0 * e);
        let exact2 = h.partial_rr(AngleActionState::new(r, phi)).unwrap();
        prop_assert!((fd2 - exact2).abs() <= 1e-6 * size(&h, r) / r, "{fd2} vs {exact2}");
    }

    #[test]
    fn text_roundtrip(h in series()) {
        prop_assert_eq!(HalfPowerSeries::parse(&h.to_text()).unwrap(), h);
    }

    #[test]
    fn action_angle_roundtrip(r in 1e-6f64..10.0, phi in 0.0f64..TAU) {
        let back = to_action_angle(to_cartesian(AngleActionState::new(r, phi)));
        prop_assert!((back.r - r).abs() <= 1e-14 * r.max(1.0));
        prop_assert!(((back.phi - phi + TAU / 2.0).rem_euclid(TAU) - TAU / 2.0).abs() <= 1e-12);
    }

    #[test]
    fn area_is_preserved(
        cx in 0.5f64..2.0, ang in 0.0f64..TAU,
        pts in prop::collection::vec((-0.2f64..0.2, -0.2f64..0.2), 3),
    ) {
        let (sn, cs) = ang.sin_cos();
        let v: Vec<CartesianState> = pts
            .iter()
            .map(|(dx, dy)| CartesianState { x: cx * cs + dx, y: cx * sn + dy })
            .collect();
        let shoelace = 0.5 * ((v[1].x - v[0].x) * (v[2].y - v[0].y) - (v[2].x - v[0].x) * (v[1].y - v[0].y));
        // dx∧dy = dφ∧dr, so the xy area equals ∮ r dφ over the image loop
        let image = action_loop_integral(&v);
        prop_assert!((shoelace - image).abs() <= 1e-8, "{shoelace} vs {image}");
    }
}
