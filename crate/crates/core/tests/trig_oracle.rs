mod common;

use common::{angle_dist, corpus, dense_zeros};
use hamstab::trigpoly::{find_zeros, TrigError, ZeroTolerances};

#[test]
fn corpus_matches_dense_sampling() {
    let tol = ZeroTolerances::default();
    let polys = corpus(300, 0xbeef);
    let mut ill = 0;
    let mut mismatches = Vec::new();
    for (i, p) in polys.iter().enumerate() {
        let found = match find_zeros(p, &tol) {
            Ok(z) => z,
            Err(TrigError::IllConditioned { .. }) => {
                ill += 1;
                continue;
            }
            Err(e) => panic!("poly {i}: {e}"),
        };
        let oracle = dense_zeros(p, 100_000);
        let ok = found.len() == oracle.len()
            && found.iter().zip(&oracle).all(|(f, o)| angle_dist(f.phi0, o.phi) < 1e-8 && f.mult == o.mult);
        if !ok {
            mismatches.push(format!("poly {i} = {p}\n  found {found:?}\n  oracle {oracle:?}"));
        }
    }
    println!("ill-conditioned: {ill}/{}", polys.len());
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
    assert!((ill as f64) < 0.02 * polys.len() as f64);
}
