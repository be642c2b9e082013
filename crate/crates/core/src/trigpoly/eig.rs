//! Eigenvalues of complex upper-Hessenberg matrices by shifted QR.
//!
//! Companion matrices of `z^N p(φ)` are highly structured (for `1 - cos qφ`
//! they are close to cyclic permutations), which stalls plain Francis
//! double-shift iterations. A single-shift complex QR with Wilkinson shifts
//! and periodic exceptional shifts handles them.

#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    let alpha = a / na;
    (na / r, alpha * b.conj() / r)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvalues of an upper-Hessenberg matrix given row-major as `h[i][j]`.
/// Returns `None` if the iteration budget is exhausted.
pub(crate) fn hessenberg_eigenvalues(mut h: Vec<Vec<Complex64>>) -> Option<Vec<Complex64>> {
    let n = h.len();
    let mut eig = Vec::with_capacity(n);
    if n == 0 {
        return Some(eig);
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            eig.push(h[0][0]);
            break;
        }
        // locate the start of the unreduced block ending at `hi`
        let mut lo = hi;
        while lo > 0 {
            let sub = h[lo][lo - 1].norm();
            let diag = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            if sub <= f64::EPSILON * diag.max(f64::MIN_POSITIVE) {
                h[lo][lo - 1] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig.push(h[hi][hi]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > MAX_SWEEPS_PER_EIGENVALUE * n {
            return None;
        }
        let mu = if iter.is_multiple_of(11) {
            // exceptional shift breaks symmetric stalls
            h[hi][hi] + Complex64::new(0.75, 0.4375) * h[hi][hi - 1].norm()
        } else {
            wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };
        for i in lo..=hi {
            h[i][i] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[k][k], h[k + 1][k]);
            for j in k..=hi {
                let x = h[k][j];
                let y = h[k + 1][j];
                h[k][j] = x * c + s * y;
                h[k + 1][j] = -s.conj() * x + y * c;
            }
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = lo + idx;
            let last = (k + 2).min(hi);
            for row in h.iter_mut().take(last + 1).skip(lo) {
                let x = row[k];
                let y = row[k + 1];
                row[k] = x * c + y * s.conj();
                row[k + 1] = -x * s + y * c;
            }
        }
        for i in lo..=hi {
            h[i][i] += mu;
        }
    }
    Some(eig)
}
