//! Even-order resonances `ψ₀ = 1 - cos qφ`, `ψ₁ = s + κ(1 - cos qφ)`: the
//! zeros are double, at `2jπ/q`, with `ψ₀'' = q²`, and the verdict follows
//! the sign of `s`.

use hamstab::classifier::classify;
use hamstab::families::mansilla_vidal;
use hamstab::trigpoly::ZeroTolerances;

fn main() {
    let tol = ZeroTolerances::default();
    for q in [4, 6, 8, 10] {
        let pair = mansilla_vidal(q, 1.0, 0.0).leading_pair().unwrap();
        let zeros = pair.psi0.find_zeros(&tol).unwrap();
        let leads: Vec<String> = zeros.iter().map(|z| format!("{}", z.lead)).collect();
        println!("q = {q:>2}: {} double zeros, leads [{}]", zeros.len(), leads.join(", "));
        for s in [1.0, -1.0] {
            for kappa in [-1.0, 0.5] {
                let v = classify(&mansilla_vidal(q, s, kappa).leading_pair().unwrap(), &tol).unwrap();
                println!("    s = {s:+} kappa = {kappa:+}: {v}");
            }
        }
    }
}
