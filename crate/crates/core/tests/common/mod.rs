//! Test-only oracles, independent of the library's root finder.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, TAU};

use hamstab::trigpoly::TrigPoly;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Plain coefficient view so the oracle does its own evaluation.
pub struct Coeffs {
    pub a0: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl Coeffs {
    pub fn of(p: &TrigPoly) -> Self {
        let n = p.degree();
        Self {
            a0: p.a0(),
            cos: (1..=n).map(|k| p.cos_coeff(k)).collect(),
            sin: (1..=n).map(|k| p.sin_coeff(k)).collect(),
        }
    }

    /// m-th derivative by direct differentiation of each term.
    pub fn d(&self, m: u32, x: f64) -> f64 {
        let mut acc = if m == 0 { self.a0 } else { 0.0 };
        for k in 0..self.cos.len() {
            let n = (k + 1) as f64;
            let arg = n * x + m as f64 * FRAC_PI_2;
            acc += n.powi(m as i32) * (self.cos[k] * arg.cos() + self.sin[k] * arg.sin());
        }
        acc
    }

    pub fn scale(&self, m: u32) -> f64 {
        let mut s = if m == 0 { self.a0.abs() } else { 0.0 };
        for k in 0..self.cos.len() {
            s += ((k + 1) as f64).powi(m as i32) * (self.cos[k].abs() + self.sin[k].abs());
        }
        s.max(1e-300)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OracleZero {
    pub phi: f64,
    pub mult: u32,
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn wrap(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    if TAU - w < 1e-12 { 0.0 } else { w }
}

pub fn angle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Dense sampling (`samples` points) plus bisection. Odd-multiplicity zeros
/// come from sign changes of `p`; even ones from sign changes of `p'` where
/// `|p|` is negligible. Candidates closer than 1e-3 are merged, then each is
/// polished on the derivative that has a simple sign change there and its
/// multiplicity read from a derivative chain.
pub fn dense_zeros(p: &TrigPoly, samples: usize) -> Vec<OracleZero> {
    let c = Coeffs::of(p);
    let h = TAU / samples as f64;
    let mut raw: Vec<f64> = Vec::new();
    for i in 0..samples {
        let a = i as f64 * h;
        let b = (i + 1) as f64 * h;
        let (fa, fb) = (c.d(0, a), c.d(0, b));
        if fa == 0.0 {
            raw.push(a);
        } else if fa * fb < 0.0 {
            raw.push(bisect(|x| c.d(0, x), a, b));
        }
        let (ga, gb) = (c.d(1, a), c.d(1, b));
        let e = if ga == 0.0 {
            Some(a)
        } else if ga * gb < 0.0 {
            Some(bisect(|x| c.d(1, x), a, b))
        } else {
            None
        };
        if let Some(e) = e {
            if c.d(0, e).abs() <= 1e-9 * c.scale(0) {
                raw.push(e);
            }
        }
    }
    let mut reps: Vec<f64> = Vec::new();
    for x in raw.into_iter().map(wrap) {
        if !reps.iter().any(|&r| angle_dist(r, x) < 5e-3) {
            reps.push(x);
        }
    }
    let chain = |x: f64| (0..16).find(|&j| c.d(j, x).abs() > 1e-5 * c.scale(j)).unwrap_or(16);
    let mut out: Vec<OracleZero> = Vec::new();
    for x0 in reps {
        // a zero of multiplicity m is a simple sign change of the (m-1)th derivative
        let (mut phi, mut mult, mut polished) = (x0, chain(x0), false);
        let w = 5e-3;
        for k in 0..10 {
            let (a, b) = (x0 - w, x0 + w);
            if c.d(k, a) * c.d(k, b) < 0.0 {
                let t = bisect(|t| c.d(k, t), a, b);
                let m = chain(t);
                if m == k + 1 && (m > mult || (m == mult && !polished)) {
                    phi = t;
                    mult = m;
                    polished = true;
                }
            }
        }
        if mult >= 1 && out.iter().all(|z| angle_dist(z.phi, phi) > 1e-6) {
            out.push(OracleZero { phi: wrap(phi), mult });
        }
    }
    out.sort_by(|a, b| a.phi.total_cmp(&b.phi));
    out
}

/// Random integer-grid trig polynomials of degree 1..=8. About a quarter are
/// products with a squared factor, so repeated zeros occur.
pub fn corpus(count: usize, seed: u64) -> Vec<TrigPoly> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = if rng.random_bool(0.25) {
            let n1 = rng.random_range(1..=2usize);
            let q = random_int_poly(&mut rng, n1, 2);
            let n2 = rng.random_range(0..=(8 - 2 * n1).min(3));
            let r = if n2 == 0 {
                TrigPoly::constant(rng.random_range(1..=3) as f64)
            } else {
                random_int_poly(&mut rng, n2, 3)
            };
            &(&q * &q) * &r
        } else {
            let n = rng.random_range(1..=8usize);
            random_int_poly(&mut rng, n, 4)
        };
        if !p.is_zero() && p.degree() >= 1 {
            out.push(p);
        }
    }
    out
}

fn random_int_poly(rng: &mut StdRng, n: usize, amp: i32) -> TrigPoly {
    loop {
        let a0 = rng.random_range(-amp..=amp) as f64;
        let cos: Vec<f64> = (0..n).map(|_| rng.random_range(-amp..=amp) as f64).collect();
        let sin: Vec<f64> = (0..n).map(|_| rng.random_range(-amp..=amp) as f64).collect();
        let p = TrigPoly::new(a0, &cos, &sin);
        if p.degree() == n {
            return p;
        }
    }
}
