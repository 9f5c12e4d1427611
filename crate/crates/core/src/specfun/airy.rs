//! Airy function Ai on the real line.
//!
//! * `−3 ≤ x ≤ 2`: Maclaurin series.
//! * `x > 2`: `Ai(x) = √(x/3)/π · K_{1/3}(ζ)`, `ζ = ⅔x^{3/2}`, with the
//!   positive integral `K_ν(ζ) = ∫₀^∞ e^{−ζ cosh u} cosh(νu) du`.
//! * `−20 ≤ x < −3`: Taylor stepping of `Ai'' = x·Ai` from `x = 0`.
//! * `x < −20`: the large-argument oscillatory expansion.

use super::{PrecisionContext, Scaled};
use crate::oscint::{gauss_legendre, gl_composite};
use crate::{Complex64, Result};
use std::f64::consts::PI;

const AI0: f64 = 0.355_028_053_887_817_2;
const AIP0: f64 = -0.258_819_403_792_806_8;

fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    let (mut f, mut g) = (1.0, x);
    let (mut tf, mut tg) = (1.0, x);
    // derivatives
    let (mut df, mut dg) = (0.0, 1.0);
    let mut k = 1.0;
    loop {
        tf *= x3 / ((3.0 * k - 1.0) * (3.0 * k));
        tg *= x3 / ((3.0 * k) * (3.0 * k + 1.0));
        f += tf;
        g += tg;
        if x != 0.0 {
            df += tf * 3.0 * k / x;
            dg += tg * (3.0 * k + 1.0) / x;
        }
        if tf.abs() < 1e-18 * f.abs().max(1e-300) && tg.abs() < 1e-18 * g.abs().max(1e-300) || k > 200.0 {
            break;
        }
        k += 1.0;
    }
    (AI0 * f + AIP0 * g, AI0 * df + AIP0 * dg)
}

/// `(Ai, Ai')` at `x1 ≤ x0`, stepping from known values at `x0`.
fn taylor_step_to(mut x0: f64, mut y: f64, mut dy: f64, x1: f64) -> (f64, f64) {
    let mut a = [0.0f64; 80];
    while x0 > x1 {
        let h = (x1 - x0).max(-0.25);
        a[0] = y;
        a[1] = dy;
        a[2] = x0 * a[0] / 2.0;
        let (mut v, mut d) = (a[0] + a[1] * h + a[2] * h * h, a[1] + 2.0 * a[2] * h);
        let mut hp = h * h;
        let mut quiet = 0;
        for n in 1..78 {
            a[n + 2] = (x0 * a[n] + a[n - 1]) / ((n + 2) as f64 * (n + 1) as f64);
            d += (n + 2) as f64 * a[n + 2] * hp;
            hp *= h;
            let term = a[n + 2] * hp;
            v += term;
            // every third coefficient can vanish, so wait for a run of small terms
            if term.abs() < 1e-19 * v.abs().max(d.abs()) {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        y = v;
        dy = d;
        x0 += h;
    }
    (y, dy)
}

fn u_coeffs(n: usize) -> Vec<f64> {
    // u_k = Γ(3k+½) / (54^k k! Γ(k+½)),  u_k = u_{k−1}·(6k−5)(6k−3)(6k−1)/((2k−1)·216·k)
    let mut u = vec![1.0];
    for k in 1..n {
        let kf = k as f64;
        let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
    }
    u
}

fn oscillatory_expansion(x: f64) -> f64 {
    let ax = -x;
    let z = 2.0 / 3.0 * ax.powf(1.5);
    let u = u_coeffs(40);
    let (mut p, mut q) = (0.0, 0.0);
    let mut zp = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..u.len() {
        let term = u[k] / zp;
        if term > last {
            break;
        }
        last = term;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term < 1e-18 {
            break;
        }
        zp *= z;
    }
    let th = z - PI / 4.0;
    (th.cos() * p + th.sin() * q) / (PI.sqrt() * ax.powf(0.25))
}

/// `Ai(x)` for `x > 2` as `mant · e^{−ζ}`.
fn decaying(x: f64) -> Scaled {
    let z = 2.0 / 3.0 * x.powf(1.5);
    let upper = 2.0 * (22.5 / z).sqrt().asinh();
    let rule = gauss_legendre(32);
    let mut f = |u: f64| {
        let s = (0.5 * u).sinh();
        Complex64::new((-2.0 * z * s * s).exp() * (u / 3.0).cosh(), 0.0)
    };
    let k = gl_composite(&mut f, 0.0, upper, 4, rule).re;
    Scaled {
        mant: Complex64::new((x / 3.0).sqrt() / PI * k, 0.0),
        log_scale: -z,
    }
    .normalized()
}

/// `Ai(x)`; underflows to 0 for `x ≳ 104`.
pub fn airy_ai(x: f64, ctx: &PrecisionContext) -> Result<f64> {
    let _ = ctx;
    Ok(airy_ai_scaled(x).value().re)
}

/// `Ai(x)` as a scaled real number, usable far into the decay region.
pub fn airy_ai_scaled(x: f64) -> Scaled {
    if x > 2.0 {
        decaying(x)
    } else if x >= -3.0 {
        Scaled::new(Complex64::new(maclaurin(x).0, 0.0))
    } else if x >= -20.0 {
        let (v, _) = taylor_step_to(0.0, AI0, AIP0, x);
        Scaled::new(Complex64::new(v, 0.0))
    } else {
        Scaled::new(Complex64::new(oscillatory_expansion(x), 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::gamma_unchecked;

    fn ai(x: f64) -> f64 {
        airy_ai(x, &PrecisionContext::default()).unwrap()
    }

    #[test]
    fn value_at_zero() {
        let g = gamma_unchecked(Complex64::new(2.0 / 3.0, 0.0)).re;
        assert!((ai(0.0) - 3f64.powf(-2.0 / 3.0) / g).abs() < 1e-15);
    }

    #[test]
    fn tabulated_values() {
        // reference values to 16 digits
        let table = [
            (1.0, 0.135_292_416_312_881_4),
            (-1.0, 0.535_560_883_292_352_1),
            (5.0, 1.083_444_281_360_744_7e-4),
            (-10.0, 0.040_241_238_486_443_19),
            (10.0, 1.104_753_255_289_868_6e-10),
        ];
        for (x, v) in table {
            let got = ai(x);
            assert!((got - v).abs() < 1e-13 * v.abs().max(1e-2), "Ai({x}) = {got}, expected {v}");
        }
    }

    #[test]
    fn branches_agree_at_switch_points() {
        // x = 2: series vs integral; x = −3: series vs stepping; x = −20: stepping vs expansion
        let a = maclaurin(2.0).0;
        let b = decaying(2.0).value().re;
        assert!((a - b).abs() < 1e-14);
        let (c, _) = taylor_step_to(0.0, AI0, AIP0, -3.0);
        assert!((c - maclaurin(-3.0).0).abs() < 1e-13);
        let (d, _) = taylor_step_to(0.0, AI0, AIP0, -20.0);
        assert!((d - oscillatory_expansion(-20.0)).abs() < 1e-12, "{d} vs {}", oscillatory_expansion(-20.0));
    }

    #[test]
    fn ode_residual_at_minus_two() {
        let x = -2.0;
        let h = 1e-3;
        let d2 = |h: f64| (ai(x + h) - 2.0 * ai(x) + ai(x - h)) / (h * h);
        // Richardson extrapolation in h²
        let d = (4.0 * d2(h / 2.0) - d2(h)) / 3.0;
        assert!((d - x * ai(x)).abs() < 1e-8);
    }

    #[test]
    fn positive_and_decreasing_on_positive_axis() {
        let mut prev = ai(0.0);
        let mut x = 0.05;
        while x < 40.0 {
            let s = airy_ai_scaled(x);
            assert!(s.mant.re > 0.0);
            let v = s.abs_ln();
            assert!(v < prev.ln(), "not decreasing at {x}");
            prev = v.exp();
            x += 0.37;
        }
        assert!(airy_ai_scaled(200.0).abs_ln() < -1800.0);
    }
}
