mod common;

use std::f64::consts::TAU;

use common::{angle_dist, Coeffs};
use hamstab::trigpoly::{TrigError, TrigPoly, ZeroTolerances};
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = TrigPoly> {
    (1usize..7).prop_flat_map(|n| {
        (
            -4i32..=4,
            prop::collection::vec(-4i32..=4, n),
            prop::collection::vec(-4i32..=4, n),
        )
            .prop_map(|(a0, c, s)| {
                let c: Vec<f64> = c.into_iter().map(f64::from).collect();
                let s: Vec<f64> = s.into_iter().map(f64::from).collect();
                TrigPoly::new(f64::from(a0), &c, &s)
            })
    })
}

fn small(max: usize) -> impl Strategy<Value = TrigPoly> {
    (1usize..=max).prop_flat_map(|n| {
        (-3i32..=3, prop::collection::vec(-3i32..=3, n), prop::collection::vec(-3i32..=3, n)).prop_map(
            |(a0, c, s)| {
                let c: Vec<f64> = c.into_iter().map(f64::from).collect();
                let s: Vec<f64> = s.into_iter().map(f64::from).collect();
                TrigPoly::new(f64::from(a0), &c, &s)
            },
        )
    })
}

/// `q^m r`, so that multiple zeros are common.
fn with_multiple_zeros() -> impl Strategy<Value = TrigPoly> {
    (small(2), small(2), 2u32..=3).prop_map(|(q, r, m)| {
        let mut p = r;
        for _ in 0..m {
            p = p.multiply(&q);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multiple_zeros_survive_differentiation(p in with_multiple_zeros()) {
        let tol = ZeroTolerances::default();
        let (z, dz) = match (p.find_zeros(&tol), p.derivative().find_zeros(&tol)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Ok(()),
        };
        for a in z.iter().filter(|a| a.mult >= 2) {
            let b = dz.iter().find(|b| angle_dist(b.phi0, a.phi0) < 1e-8);
            prop_assert!(b.is_some(), "{} missing from {:?}", a.phi0, dz);
            prop_assert_eq!(b.unwrap().mult, a.mult - 1);
        }
    }

    #[test]
    fn shifted_zeros_move_with_the_shift(p in poly(), c in 0.0f64..TAU) {
        let tol = ZeroTolerances::default();
        let (z, zs) = match (p.find_zeros(&tol), p.shift(c).find_zeros(&tol)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Ok(()),
        };
        prop_assert_eq!(z.len(), zs.len());
        for a in &z {
            let target = (a.phi0 + c).rem_euclid(TAU);
            let b = zs.iter().min_by(|x, y| {
                angle_dist(x.phi0, target).total_cmp(&angle_dist(y.phi0, target))
            }).unwrap();
            prop_assert!(angle_dist(b.phi0, target) < 1e-10, "{} vs {}", b.phi0, target);
            prop_assert_eq!(a.mult, b.mult);
        }
    }

    #[test]
    fn multiplicities_fit_the_degree(p in poly()) {
        match p.find_zeros(&ZeroTolerances::default()) {
            Ok(z) => {
                let total: u32 = z.iter().map(|z| z.mult).sum();
                prop_assert!(total as usize <= 2 * p.degree());
                for w in z.windows(2) {
                    prop_assert!(w[0].phi0 < w[1].phi0);
                }
                for zi in &z {
                    prop_assert!((0.0..TAU).contains(&zi.phi0));
                    prop_assert!(zi.lead != 0.0);
                }
            }
            Err(TrigError::IllConditioned { .. }) | Err(TrigError::IdenticallyZero) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn derivative_matches_direct_evaluation(p in poly(), m in 0u32..5, x in 0.0f64..TAU) {
        let c = Coeffs::of(&p);
        let want = c.d(m, x);
        let scale = c.scale(m);
        prop_assert!((p.eval_derivative(m, x) - want).abs() <= 1e-12 * scale);
        prop_assert!((p.nth_derivative(m).eval(x) - want).abs() <= 1e-12 * scale);
    }

    #[test]
    fn product_matches_pointwise(p in poly(), q in poly()) {
        let pq = p.multiply(&q);
        let n = p.degree().max(q.degree());
        let nodes = 4 * n + 1;
        for i in 0..nodes {
            let x = TAU * i as f64 / nodes as f64;
            let want = p.eval(x) * q.eval(x);
            prop_assert!((pq.eval(x) - want).abs() <= 1e-12 * p.l1_norm() * q.l1_norm());
        }
    }

    #[test]
    fn lead_is_the_first_nonvanishing_derivative(p in poly()) {
        let Ok(z) = p.find_zeros(&ZeroTolerances::default()) else { return Ok(()) };
        for zi in z {
            let d = p.eval_derivative(zi.mult, zi.phi0);
            prop_assert!((d - zi.lead).abs() <= 1e-6 * p.derivative_scale(zi.mult).max(1.0));
        }
    }
}
