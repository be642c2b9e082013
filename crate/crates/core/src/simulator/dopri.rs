//! Dormand–Prince 5(4) step for two-component systems.

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub(crate) type Y = [f64; 2];

fn axpy(y: Y, h: f64, terms: &[(f64, Y)]) -> Y {
    let mut out = y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// One step from `(t, y)` with slope `k1 = f(t, y)`. Returns the fifth-order
/// solution, its slope (first-same-as-last), and the error estimate.
pub(crate) fn step<F: Fn(f64, Y) -> Y>(f: &F, t: f64, y: Y, k1: Y, h: f64) -> (Y, Y, Y) {
    let k2 = f(t + C2 * h, axpy(y, h, &[(A21, k1)]));
    let k3 = f(t + C3 * h, axpy(y, h, &[(A31, k1), (A32, k2)]));
    let k4 = f(t + C4 * h, axpy(y, h, &[(A41, k1), (A42, k2), (A43, k3)]));
    let k5 = f(t + C5 * h, axpy(y, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]));
    let k6 = f(t + h, axpy(y, h, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)]));
    let y5 = axpy(y, h, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]);
    let k7 = f(t + h, y5);
    let err = axpy([0.0, 0.0], h, &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)]);
    (y5, k7, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifth_order_on_rotation() {
        // y'' = -y as a first-order system
        let f = |_t: f64, y: Y| [y[1], -y[0]];
        let mut errs = Vec::new();
        for &h in &[0.1, 0.05] {
            let (mut t, mut y) = (0.0, [1.0, 0.0]);
            let mut k = f(t, y);
            while t < 1.0 - 1e-12 {
                let (y1, k1, _) = step(&f, t, y, k, h);
                y = y1;
                k = k1;
                t += h;
            }
            errs.push((y[0] - 1f64.cos()).abs());
        }
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 4.5, "observed order {order}");
    }
}
