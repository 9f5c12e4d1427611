//! Complex Gamma function via Stirling's series with upward recurrence and
//! reflection, and the truncated Stirling expansion of `Γ(σ+iy)/Γ(σ−iy)`.

use super::{PrecisionContext};
use crate::{Complex64, Error, Result};
use std::f64::consts::PI;

const LN_2PI_HALF: f64 = 0.918_938_533_204_672_8;

/// B_2, B_4, …, B_24.
pub(crate) const BERNOULLI_EVEN: [f64; 12] = [
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
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

fn stirling(w: Complex64) -> Complex64 {
    let lw = w.ln();
    let mut s = (w - 0.5) * lw - w + LN_2PI_HALF;
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut p = inv;
    for (k, b) in BERNOULLI_EVEN.iter().take(10).enumerate() {
        let k = (k + 1) as f64;
        s += p * (b / (2.0 * k * (2.0 * k - 1.0)));
        p *= inv2;
    }
    s
}

/// `log sin(πz)` without overflow for large `|ℑz|`.
pub(crate) fn ln_sin_pi(z: Complex64) -> Complex64 {
    let w = z * PI;
    let i = Complex64::new(0.0, 1.0);
    if w.im.abs() < 10.0 {
        w.sin().ln()
    } else if w.im > 0.0 {
        -i * w + Complex64::new(-std::f64::consts::LN_2, PI / 2.0) + (1.0 - (2.0 * i * w).exp()).ln()
    } else {
        i * w + Complex64::new(-std::f64::consts::LN_2, -PI / 2.0) + (1.0 - (-2.0 * i * w).exp()).ln()
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos form for moderate `|z|`, `ℜz ≥ 1/2`: fewer rounding steps than
/// shifting up to the Stirling range.
fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        a += *c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (z + 0.5) * t.ln() - t + LN_2PI_HALF + a.ln()
}

/// A logarithm of Γ(z): exact real part, imaginary part correct modulo 2π
/// (continuous and principal on ℜz ≥ 1/2).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(1.0 - z);
    }
    if z.norm() < 20.0 {
        return lanczos(z);
    }
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while w.norm() < 15.0 {
        acc += w.ln();
        w += 1.0;
    }
    stirling(w) - acc
}

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Γ(z) without the pole check (caller guarantees `z` is not a pole).
pub fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re > 0.0 && z.re == z.re.round() && z.re < 171.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < z.re {
            f *= k;
            k += 1.0;
        }
        return Complex64::new(f, 0.0);
    }
    ln_gamma(z).exp()
}

/// Γ(z).
pub fn gamma(z: Complex64, ctx: &PrecisionContext) -> Result<Complex64> {
    let _ = ctx;
    if is_pole(z) {
        return Err(Error::pole(format!("Gamma has a pole at {}", z.re)));
    }
    Ok(gamma_unchecked(z))
}

/// 1/Γ(z), zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_pole(z) {
        return Complex64::new(0.0, 0.0);
    }
    (-ln_gamma(z)).exp()
}

/// Coefficients `c_j`, `j = 1..=order`, of the 1/y expansion of
/// `ℑ log Γ(σ+iy) − (y log y − y + (σ−½)π/2)` for `y > 0`.
fn ratio_phase_coeffs(sigma: f64, order: usize) -> Vec<f64> {
    let mut c = vec![0.0; order + 1];
    let s = sigma;
    // y/2 · log(1 + σ²/y²)
    let mut k = 1;
    while 2 * k - 1 <= order {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        c[2 * k - 1] += 0.5 * sign * s.powi(2 * k as i32) / k as f64;
        k += 1;
    }
    // −(σ−½)·arctan(σ/y)
    let mut k = 0;
    while 2 * k < order {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        c[2 * k + 1] -= (s - 0.5) * sign * s.powi(2 * k as i32 + 1) / (2 * k + 1) as f64;
        k += 1;
    }
    // Stirling tail Σ B_{2k}/(2k(2k−1)) ℑ z^{1−2k}
    for (kk, b) in BERNOULLI_EVEN.iter().enumerate() {
        let k = kk + 1;
        if 2 * k - 1 > order {
            break;
        }
        let base = b / ((2 * k) as f64 * (2 * k - 1) as f64) * if k % 2 == 0 { 1.0 } else { -1.0 };
        let mut binom = 1.0f64;
        for jp in 0..=(order - (2 * k - 1)) {
            if jp > 0 {
                binom *= (2 * k - 2 + jp) as f64 / jp as f64;
            }
            let im = [1.0, 0.0, -1.0, 0.0][jp % 4];
            if im != 0.0 {
                c[2 * k - 1 + jp] += base * s.powi(jp as i32) * binom * im;
            }
        }
    }
    c
}

/// Truncated Stirling expansion of `Γ(σ+iy)/Γ(σ−iy)` with `terms` terms
/// (`terms = 1` is the bare main term `exp(i(2y log|y| − 2y + π(σ−½)sgn y))`).
/// The result is always unimodular: every correction is a real phase.
pub fn gamma_ratio_asympt(sigma: f64, y: f64, terms: usize) -> Result<Complex64> {
    if y.abs() < 10.0 {
        return Err(Error::Regime(format!("|y| = {} < 10", y.abs())));
    }
    if terms == 0 {
        return Err(Error::domain("terms must be at least 1"));
    }
    let ya = y.abs();
    let mut phase = 2.0 * (ya * ya.ln() - ya) + PI * (sigma - 0.5);
    if terms > 1 {
        let c = ratio_phase_coeffs(sigma, terms - 1);
        let w = 1.0 / ya;
        let mut p = w;
        for cj in c.iter().skip(1) {
            phase += 2.0 * cj * p;
            p *= w;
        }
    }
    let v = Complex64::from_polar(1.0, phase);
    Ok(if y > 0.0 { v } else { v.conj() })
}
