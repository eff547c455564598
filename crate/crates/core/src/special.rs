//! Small special-function helpers.

const BERNOULLI_2J: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Hurwitz zeta `ζ(s, a) = Σ_{k>=0} (a + k)^{-s}` for `s > 1`, `a > 0`,
/// via Euler–Maclaurin summation.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(s > 1.0 && a > 0.0, "hurwitz_zeta needs s > 1 and a > 0");
    const M: usize = 24;
    let mut sum = 0.0;
    for k in 0..M {
        sum += (a + k as f64).powf(-s);
    }
    let x = a + M as f64;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);

    // poch = s (s+1) ... (s+2j-2); fact = (2j)!
    let mut poch = s;
    let mut fact = 2.0;
    let mut xpow = x.powf(-s - 1.0);
    for (j, b) in BERNOULLI_2J.iter().enumerate() {
        let term = b / fact * poch * xpow;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        let tj = 2.0 * (j as f64 + 1.0);
        poch *= (s + tj - 1.0) * (s + tj);
        fact *= (tj + 1.0) * (tj + 2.0);
        xpow /= x * x;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riemann_values() {
        let pi = std::f64::consts::PI;
        assert!((hurwitz_zeta(2.0, 1.0) - pi * pi / 6.0).abs() < 1e-14);
        assert!((hurwitz_zeta(4.0, 1.0) - pi.powi(4) / 90.0).abs() < 1e-14);
        // ζ(2, 1/2) = (2^2 - 1) ζ(2)
        assert!((hurwitz_zeta(2.0, 0.5) - 3.0 * pi * pi / 6.0).abs() < 1e-13);
    }

    #[test]
    fn shift_identity() {
        for &(s, a) in &[(3.0, 1.0), (2.5, 7.0), (5.5, 101.0)] {
            let lhs = hurwitz_zeta(s, a);
            let rhs = a.powf(-s) + hurwitz_zeta(s, a + 1.0);
            assert!((lhs - rhs).abs() < 1e-14 * lhs);
        }
    }
}
