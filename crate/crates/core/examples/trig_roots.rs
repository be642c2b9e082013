//! Zeros of trigonometric polynomials with multiplicities.
//!
//! `cargo run --example trig_roots -- "0 3 0 1"` reads `a0 a1 b1 a2 b2 ...`
//! (cosine and sine coefficients interleaved); without arguments a few
//! built-in polynomials are shown.

use hamstab::trigpoly::{TrigPoly, ZeroTolerances};

fn parse(args: &[String]) -> Option<TrigPoly> {
    let v: Vec<f64> = args.iter().flat_map(|a| a.split_whitespace()).map(|t| t.parse().ok()).collect::<Option<_>>()?;
    let (a0, rest) = v.split_first()?;
    let mut p = TrigPoly::constant(*a0);
    for (n, pair) in rest.chunks(2).enumerate() {
        p.add_term(n + 1, pair[0], pair.get(1).copied().unwrap_or(0.0));
    }
    Some(p)
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let polys = match parse(&args) {
        Some(p) => vec![("input".to_string(), p)],
        None => vec![
            ("1 - cos 4φ".into(), TrigPoly::new(1.0, &[0.0, 0.0, 0.0, -1.0], &[])),
            ("4cos³φ".into(), TrigPoly::new(0.0, &[3.0, 0.0, 1.0], &[])),
            ("1 + sin φ".into(), TrigPoly::new(1.0, &[], &[1.0])),
            ("8cos⁴φ".into(), TrigPoly::new(3.0, &[0.0, 4.0, 0.0, 1.0], &[])),
            ("2 + cos φ".into(), TrigPoly::new(2.0, &[1.0], &[])),
        ],
    };
    let tol = ZeroTolerances::default();
    for (name, p) in polys {
        println!("{name}  =  {p}");
        match p.find_zeros(&tol) {
            Ok(zs) if zs.is_empty() => println!("  no real zeros"),
            Ok(zs) => {
                for z in zs {
                    println!("  φ0 = {:.12}  mult {}  p^(m)(φ0) = {:+.10}", z.phi0, z.mult, z.lead);
                }
            }
            Err(e) => println!("  {e}"),
        }
    }
}
