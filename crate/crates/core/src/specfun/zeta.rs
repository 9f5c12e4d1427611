//! Riemann and Hurwitz zeta functions by Euler–Maclaurin summation.

use super::gamma::{ln_gamma, BERNOULLI_EVEN};
use crate::{Complex64, Error, Result};
use std::f64::consts::PI;

/// (2k)! for k = 1..=12.
const FACT_EVEN: [f64; 12] = [
    2.0,
    24.0,
    720.0,
    40320.0,
    3628800.0,
    479001600.0,
    87178291200.0,
    20922789888000.0,
    6402373705728000.0,
    2432902008176640000.0,
    1.1240007277776077e21,
    6.204484017332394e23,
];

/// Euler–Maclaurin for `Σ_{n≥0} (n+a)^{−s}` with `n0` explicit terms and
/// `order` correction terms.
fn euler_maclaurin(s: Complex64, a: f64, n0: usize, order: usize) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..n0 {
        sum += (-(s) * (n as f64 + a).ln()).exp();
    }
    let x = n0 as f64 + a;
    let lx = x.ln();
    let xs = (-s * lx).exp();
    sum += xs * x / (s - 1.0) + xs * 0.5;
    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k−2) · x^{−s−2k+1}
    let mut poch = s; // s(s+1)…(s+2k−2), starting with k=1
    let mut xp = xs / x;
    for k in 0..order.min(12) {
        sum += poch * xp * (BERNOULLI_EVEN[k] / FACT_EVEN[k]);
        let kk = (k + 1) as f64;
        poch *= (s + (2.0 * kk - 1.0)) * (s + 2.0 * kk);
        xp /= x * x;
    }
    sum
}

fn n_terms(s: Complex64) -> usize {
    30 + (s.norm() * 0.5).ceil() as usize
}

/// ζ(s) for `s ≠ 1`.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::pole("zeta has its pole at s = 1"));
    }
    if s.re < -0.5 {
        // ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)
        let one = Complex64::new(1.0, 0.0);
        let z1 = zeta(one - s)?;
        let ln = s * 2f64.ln() + (s - 1.0) * PI.ln() + ln_gamma(one - s);
        return Ok((ln.exp()) * (s * PI * 0.5).sin() * z1);
    }
    Ok(euler_maclaurin(s, 1.0, n_terms(s), 12))
}

/// Hurwitz ζ(s, a) for `0 < a ≤ 1`, `ℜs > −1/2`.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::pole("Hurwitz zeta has its pole at s = 1"));
    }
    if !(a > 0.0) {
        return Err(Error::domain("Hurwitz parameter must be positive"));
    }
    Ok(euler_maclaurin(s, a, n_terms(s), 12))
}
