//! Gauss ₂F₁ and the main terms of the two large-parameter families
//!
//! * `₂F₁(1/4+ir(1−α), 3/4+ir(1−α); 1+2ir; z)` (oscillatory, phase `l₁`),
//! * `F₂(r,α,x) = Γ(a)Γ(b)/Γ(1/2)·₂F₁(a, b; 1/2; x)` with
//!   `a = 1/4+ir(1−α)`, `b = 1/4−ir(1+α)` (turning point at `x = 1−α²`).
//!
//! The reference ₂F₁ sums the power series near the origin and continues
//! the solution of the hypergeometric equation along the segment `[0, z]`
//! by local Taylor expansions.  The state is renormalised at every step so
//! the e^{±πr} magnitudes of the second family never overflow.  The same
//! continuation covers `z` near 1 and `ℜz < 0`, so no connection formulas
//! (and no special handling of integer `c − a − b`) are needed.

use super::airy::airy_ai_scaled;
use super::gamma::ln_gamma;
use super::{Asymptotic, OscParams, PrecisionContext, Scaled};
use crate::{Complex64, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn is_nonpos_int(c: Complex64) -> bool {
    c.im == 0.0 && c.re <= 0.0 && c.re == c.re.round()
}

struct SeriesSum {
    f: Complex64,
    df: Complex64,
    max_term: f64,
    converged: bool,
}

fn series(a: Complex64, b: Complex64, c: Complex64, z: Complex64, max_iter: usize) -> SeriesSum {
    let mut term = c64(1.0, 0.0);
    let mut f = term;
    let mut df = c64(0.0, 0.0);
    let mut max_term = 1.0f64;
    let mut converged = false;
    for k in 0..max_iter {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
        df += term * ratio * (kf + 1.0);
        term *= ratio * z;
        f += term;
        max_term = max_term.max(term.norm());
        if term.norm() == 0.0 {
            converged = true;
            break;
        }
        let next = ((a + kf + 1.0) * (b + kf + 1.0) / ((c + kf + 1.0) * (kf + 2.0))).norm() * z.norm();
        if next < 0.9 && term.norm() * (kf + 2.0) <= 1e-17 * (f.norm() + df.norm() * z.norm()) {
            converged = true;
            break;
        }
    }
    SeriesSum {
        f,
        df,
        max_term,
        converged,
    }
}

/// One Taylor step of the hypergeometric equation from `z0` by `h`.
/// Returns `(F(z0+h), F'(z0+h))`, or `None` if the local series has not
/// converged within its term budget.
fn taylor_step(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z0: Complex64,
    f: Complex64,
    d: Complex64,
    h: Complex64,
) -> Option<(Complex64, Complex64)> {
    let ab = a * b;
    let s = a + b + 1.0;
    let a0 = z0 * (1.0 - z0);
    let a1 = 1.0 - 2.0 * z0;
    let b0 = c - s * z0;
    let b1 = -s;
    let (mut gm, mut gn) = (f, d * h);
    let mut val = gm + gn;
    let mut der = gn;
    for n in 0..400 {
        let nf = n as f64;
        let g2 = -((a1 * nf + b0) * (nf + 1.0) * gn * h + (-(nf * (nf - 1.0)) + b1 * nf - ab) * gm * h * h)
            / (a0 * (nf + 2.0) * (nf + 1.0));
        val += g2;
        der += g2 * (nf + 2.0);
        if n >= 3 && (g2.norm() + gn.norm()) * (nf + 3.0) <= 1e-17 * (val.norm() + der.norm()) {
            return Some((val, der / h));
        }
        gm = gn;
        gn = g2;
    }
    None
}

fn local_rate(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> f64 {
    let a0 = z * (1.0 - z);
    let b0 = c - (a + b + 1.0) * z;
    let disc = (b0 * b0 + 4.0 * a0 * a * b).sqrt();
    let l1 = (-b0 + disc) / (2.0 * a0);
    let l2 = (-b0 - disc) / (2.0 * a0);
    l1.norm().max(l2.norm()).max(1.0)
}

fn continue_ode(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    start: Complex64,
    mut f: Complex64,
    mut d: Complex64,
    target: Complex64,
) -> Result<Scaled> {
    let mut z = start;
    let mut log_scale = 0.0;
    for _ in 0..2_000_000 {
        let rem = target - z;
        let remn = rem.norm();
        if remn == 0.0 {
            return Ok(Scaled { mant: f, log_scale }.normalized());
        }
        let dir = rem / remn;
        let radius = z.norm().min((1.0 - z).norm());
        let kappa = local_rate(a, b, c, z);
        let mut hm = remn.min(0.5 * radius).min(2.0 / kappa);
        let (nf, nd) = loop {
            if let Some(v) = taylor_step(a, b, c, z, f, d, dir * hm) {
                break v;
            }
            hm *= 0.5;
            if hm < 1e-300 {
                return Err(Error::Precision("hypergeometric continuation stalled".into()));
            }
        };
        z = if hm == remn { target } else { z + dir * hm };
        let s = nf.norm().max(nd.norm() / kappa);
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Precision("hypergeometric continuation lost the solution".into()));
        }
        f = nf / s;
        d = nd / s;
        log_scale += s.ln();
    }
    Err(Error::Precision("hypergeometric continuation exceeded its step budget".into()))
}

/// ₂F₁(a, b; c; z) as a scaled number, for any `z ∉ (1, ∞)`; at `z = 1`
/// Gauss's sum is used when `ℜ(c−a−b) > 0`.
pub fn gauss_2f1_scaled(a: Complex64, b: Complex64, c: Complex64, z: Complex64, ctx: &PrecisionContext) -> Result<Scaled> {
    let _ = ctx;
    if is_nonpos_int(c) {
        return Err(Error::pole(format!("c = {} is a nonpositive integer", c.re)));
    }
    if z.im == 0.0 && z.re > 1.0 {
        return Err(Error::domain(format!("z = {} lies on the branch cut (1, ∞)", z.re)));
    }
    if z == c64(1.0, 0.0) {
        let e = c - a - b;
        if e.re <= 0.0 {
            return Err(Error::domain("₂F₁ diverges at z = 1 unless Re(c−a−b) > 0"));
        }
        if is_nonpos_int(c - a) || is_nonpos_int(c - b) {
            return Ok(Scaled::zero());
        }
        let ln = ln_gamma(c) + ln_gamma(e) - ln_gamma(c - a) - ln_gamma(c - b);
        return Ok(Scaled::from_log(ln));
    }
    if z.norm() == 0.0 {
        return Ok(Scaled::new(c64(1.0, 0.0)));
    }
    if z.norm() <= 0.5 {
        let s = series(a, b, c, z, 4000);
        if s.converged && s.max_term <= 1e2 * s.f.norm() {
            return Ok(Scaled::new(s.f));
        }
    }
    let rho = 0.5 / 1f64.max((a * b / c).norm()).max(a.norm() + b.norm() + 1.0);
    let z0 = if z.norm() <= rho { z } else { z * (rho / z.norm()) };
    let s = series(a, b, c, z0, 4000);
    if !s.converged {
        return Err(Error::Precision("power series failed to converge at the start point".into()));
    }
    if z0 == z {
        return Ok(Scaled::new(s.f));
    }
    continue_ode(a, b, c, z0, s.f, s.df, z)
}

/// ₂F₁(a, b; c; z); errors if the value leaves the double range.
pub fn gauss_2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64, ctx: &PrecisionContext) -> Result<Complex64> {
    gauss_2f1_scaled(a, b, c, z, ctx)?.try_value()
}

/// `F₂` with spectral parameters `(r, t)` given separately; `r` may be negative.
pub fn f2_eval_rt(r: f64, t: f64, x: f64, ctx: &PrecisionContext) -> Result<Scaled> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::domain(format!("F2 needs 0 <= x < 1, got {x}")));
    }
    let a = c64(0.25, r - t);
    let b = c64(0.25, -r - t);
    let pre = Scaled::from_log(ln_gamma(a) + ln_gamma(b) - 0.5 * PI.ln());
    let f = gauss_2f1_scaled(a, b, c64(0.5, 0.0), c64(x, 0.0), ctx)?;
    Ok(pre.mul(f))
}

/// `F₂(r, α, x)` as a scaled number (its size ranges from `e^{−πr}` to `e^{−παr}`).
pub fn f2_eval_scaled(p: OscParams, x: f64, ctx: &PrecisionContext) -> Result<Scaled> {
    f2_eval_rt(p.r, p.t, x, ctx)
}

/// `F₂(r, α, x)`; underflows to 0 when `πr` exceeds ~700.
pub fn f2_eval(p: OscParams, x: f64, ctx: &PrecisionContext) -> Result<Complex64> {
    Ok(f2_eval_scaled(p, x, ctx)?.value())
}

/// Phase `l₁(α, z)` of the oscillatory family.
pub fn l1_phase(alpha: f64, z: f64) -> f64 {
    let s = (1.0 - (1.0 - alpha * alpha) * z).sqrt();
    LN_2 - alpha * (1.0 + alpha).ln() - (1.0 + s).ln() + alpha * (alpha + s).ln()
}

/// Main term `exp(2ir·l₁(α,z))·(1−(1−α²)z)^{−1/4}` for
/// `₂F₁(1/4+ir(1−α), 3/4+ir(1−α); 1+2ir; z)`.  Its correction
/// coefficients are not available in closed form, so only `n_terms = 1`
/// is evaluated; larger requests carry a warning.
pub fn asympt_2f1_osc(p: OscParams, z: f64, n_terms: usize) -> Result<Asymptotic<Complex64>> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::domain(format!("need 0 < z < 1, got {z}")));
    }
    if n_terms == 0 {
        return Err(Error::domain("n_terms must be at least 1"));
    }
    let amp = (1.0 - (1.0 - p.alpha * p.alpha) * z).powf(-0.25);
    let v = Complex64::from_polar(amp, 2.0 * p.r * l1_phase(p.alpha, z));
    let mut warning = p.regime_warning();
    if n_terms > 1 {
        let w = format!("only the main term is available; {} correction term(s) ignored", n_terms - 1);
        warning = Some(match warning {
            Some(prev) => format!("{prev}; {w}"),
            None => w,
        });
    }
    Ok(Asymptotic { value: v, warning })
}

/// Constant phase `2(T log 2 − t log(1+t/T))` that the window form drops.
pub fn window_constant_phase(big_t: f64, t: f64) -> f64 {
    2.0 * (big_t * LN_2 - t * (1.0 + t / big_t).ln())
}

/// Window rewriting of the oscillatory main term at `r = T + G·y`,
/// expanded around `α₀ = t/T`; equals [`asympt_2f1_osc`] up to the
/// factor `exp(i·window_constant_phase(T, t))` and `O(G²y²/T)`.
pub fn asympt_2f1_window(big_t: f64, g: f64, y: f64, t: f64, z: f64) -> Result<Complex64> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::domain(format!("need 0 < z < 1, got {z}")));
    }
    if !(big_t > 0.0 && t > 0.0 && t < big_t) {
        return Err(Error::domain("need 0 < t < T"));
    }
    let a0 = t / big_t;
    let s = (1.0 - (1.0 - a0 * a0) * z).sqrt();
    let amp = (1.0 - (1.0 - a0 * a0) * z).powf(-0.25);
    let phase = 2.0 * big_t * (-(1.0 + s).ln() + a0 * (a0 + s).ln()) + 2.0 * g * y * (LN_2 - (1.0 + s).ln());
    Ok(Complex64::from_polar(amp, phase))
}

/// Position relative to the turning point `y = 1 − α²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Below,
    Near,
    Above,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TurningPointData {
    pub y: f64,
    pub zeta_hat: f64,
    pub a0: Option<f64>,
    pub a1: Option<f64>,
    pub regime: Regime,
}

/// Below the turning point `𝐚₀ = arctan w − α·arctan(w/α)`, above it
/// `𝐚₁ = α·artanh(w/α) − artanh(w)`, with `w = √(|1−α²−y|/y)`.  Both are
/// `O(w³)`; near `w = 0` they are summed from their power series.
const SERIES_SWITCH: f64 = 0.35;

fn w_of(alpha: f64, y: f64) -> (f64, bool) {
    let u = 1.0 - alpha * alpha - y;
    ((u.abs() / y).sqrt(), u > 0.0)
}

/// `𝐚/w³` from the power series; `below` selects `𝐚₀` or `𝐚₁`.
fn a_over_w3_series(alpha: f64, w: f64, below: bool) -> Option<f64> {
    let q = w / alpha;
    if q >= 0.9 {
        return None;
    }
    let ia2 = 1.0 / (alpha * alpha);
    let (q2, w2) = (q * q, w * w);
    let (mut qp, mut wp) = (1.0, 1.0);
    let mut sum = 0.0;
    for k in 1..600 {
        let sign = if below && k % 2 == 0 { -1.0 } else { 1.0 };
        let term = sign * (ia2 * qp - wp) / (2 * k + 1) as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        qp *= q2;
        wp *= w2;
    }
    Some(sum)
}

fn a_exact(alpha: f64, w: f64, below: bool) -> f64 {
    if below {
        w.atan() - alpha * (w / alpha).atan()
    } else {
        alpha * (w / alpha).atanh() - w.atanh()
    }
}

fn zeta_from_a(alpha: f64, a: f64, below: bool) -> f64 {
    let z = (1.5 * a / alpha).powf(2.0 / 3.0);
    if below {
        -z
    } else {
        z
    }
}

/// `ζ̂(y)` from the closed forms of `𝐚₀`/`𝐚₁`.
pub fn zeta_hat_exact(alpha: f64, y: f64) -> f64 {
    let (w, below) = w_of(alpha, y);
    zeta_from_a(alpha, a_exact(alpha, w, below), below)
}

/// `ζ̂(y)` from the power series around the turning point; `None` where
/// the series is not used (`w ≥ 0.9α`).
pub fn zeta_hat_taylor(alpha: f64, y: f64) -> Option<f64> {
    let (w, below) = w_of(alpha, y);
    let s = a_over_w3_series(alpha, w, below)?;
    Some(if below { -1.0 } else { 1.0 } * w * w * (1.5 * s / alpha).powf(2.0 / 3.0))
}

/// `ζ̂(y)/w²` (positive, smooth through the turning point).
fn zeta_over_w2(alpha: f64, y: f64) -> f64 {
    let (w, below) = w_of(alpha, y);
    let s = if w < SERIES_SWITCH * alpha {
        a_over_w3_series(alpha, w, below).unwrap_or(0.0)
    } else {
        a_exact(alpha, w, below) / (w * w * w)
    };
    (1.5 * s / alpha).powf(2.0 / 3.0)
}

pub fn turning_point_data(p: OscParams, y: f64) -> Result<TurningPointData> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::domain(format!("need 0 < y < 1, got {y}")));
    }
    let alpha = p.alpha;
    let (w, below) = w_of(alpha, y);
    let near = w < SERIES_SWITCH * alpha;
    let a = if near {
        a_over_w3_series(alpha, w, below).unwrap_or(0.0) * w * w * w
    } else {
        a_exact(alpha, w, below)
    };
    let exactly_at = 1.0 - alpha * alpha - y == 0.0;
    let zeta_hat = if near {
        (if below { -1.0 } else { 1.0 }) * w * w * zeta_over_w2(alpha, y)
    } else {
        zeta_from_a(alpha, a, below)
    };
    Ok(TurningPointData {
        y,
        zeta_hat,
        a0: if below || exactly_at { Some(a) } else { None },
        a1: if !below || exactly_at { Some(a) } else { None },
        regime: if near {
            Regime::Near
        } else if below {
            Regime::Below
        } else {
            Regime::Above
        },
    })
}

/// Phase `l₂(α, y)` (including the `−2α log r` term).
pub fn l2_phase(alpha: f64, y: f64, r: f64) -> f64 {
    alpha * (1.0 - y).ln() - 2.0 * alpha * r.ln() + (1.0 - alpha) * (1.0 - alpha).ln()
        - (1.0 + alpha) * (1.0 + alpha).ln()
        + 2.0 * alpha
}

/// Airy-form main term of `F₂(r, α, y)`, uniform in `0 < y < 1`.
pub fn asympt_f2_airy_scaled(p: OscParams, y: f64) -> Result<Asymptotic<Scaled>> {
    let tp = turning_point_data(p, y)?;
    let (r, alpha) = (p.r, p.alpha);
    let ratio = alpha * alpha * zeta_over_w2(alpha, y) / y;
    let lam = 2.0 * r * alpha;
    let ln_amp = 1.5 * LN_2 + PI.ln() - PI * r * alpha - lam.ln() / 3.0 + 0.25 * ratio.ln();
    let pre = Scaled::from_log(c64(ln_amp, r * l2_phase(alpha, y, r)));
    let ai = airy_ai_scaled(-lam.powf(2.0 / 3.0) * tp.zeta_hat);
    Ok(Asymptotic {
        value: pre.mul(ai),
        warning: p.regime_warning(),
    })
}

/// [`asympt_f2_airy_scaled`] as a plain complex number.
pub fn asympt_f2_airy(p: OscParams, y: f64) -> Result<Asymptotic<Complex64>> {
    let a = asympt_f2_airy_scaled(p, y)?;
    Ok(Asymptotic {
        value: a.value.value(),
        warning: a.warning,
    })
}

/// Cosine form of `F₂` above the turning point:
/// `2√π e^{irl₂} e^{−πrα} cos(2r𝐚₁ − π/4) / (√r (y−1+α²)^{1/4})`.
pub fn f2_cosine_form(p: OscParams, y: f64) -> Result<Scaled> {
    let tp = turning_point_data(p, y)?;
    let a1 = tp
        .a1
        .filter(|_| y > 1.0 - p.alpha * p.alpha)
        .ok_or_else(|| Error::Regime("cosine form needs y > 1 − α²".into()))?;
    let v = y - 1.0 + p.alpha * p.alpha;
    let ln_amp = LN_2 + 0.5 * PI.ln() - PI * p.r * p.alpha - 0.5 * p.r.ln() - 0.25 * v.ln();
    let pre = Scaled::from_log(c64(ln_amp, p.r * l2_phase(p.alpha, y, p.r)));
    Ok(pre.scale(c64((2.0 * p.r * a1 - PI / 4.0).cos(), 0.0)))
}

/// Logarithm of the size `e^{−πrα} e^{−2r𝐚₀} / (√r (1−α²−y)^{1/4})` of `F₂`
/// below the turning point.
pub fn f2_decay_log_size(p: OscParams, y: f64) -> Result<f64> {
    let tp = turning_point_data(p, y)?;
    let a0 = tp
        .a0
        .filter(|_| y < 1.0 - p.alpha * p.alpha)
        .ok_or_else(|| Error::Regime("decay form needs y < 1 − α²".into()))?;
    let u = 1.0 - p.alpha * p.alpha - y;
    Ok(-PI * p.r * p.alpha - 2.0 * p.r * a0 - 0.5 * p.r.ln() - 0.25 * u.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    /// Direct power series, used as an independent oracle where it converges
    /// without cancellation.
    fn raw_series(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Complex64 {
        let mut t = c64(1.0, 0.0);
        let mut s = t;
        for k in 0..20000 {
            let k = k as f64;
            t *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
            s += t;
            if t.norm() < 1e-20 * s.norm() && k > 10.0 {
                break;
            }
        }
        s
    }

    #[test]
    fn classical_closed_forms() {
        let one = c64(1.0, 0.0);
        let v = gauss_2f1(one, one, c64(2.0, 0.0), c64(0.5, 0.0), &ctx()).unwrap();
        assert!((v.re - 2.0 * LN_2).abs() < 1e-15);
        assert_eq!(gauss_2f1(c64(0.3, 2.0), one, one, c64(0.0, 0.0), &ctx()).unwrap(), one);
        // −log(1−z)/z at z = 0.95 and z = −3 exercises the continuation
        for z in [0.95, -3.0, 0.999_999] {
            let v = gauss_2f1(one, one, c64(2.0, 0.0), c64(z, 0.0), &ctx()).unwrap();
            let exact = -(1.0 - z).ln() / z;
            assert!((v.re - exact).abs() < 1e-13 * exact.abs(), "z={z}: {v} vs {exact}");
        }
        // (1−z)^{−a}
        let a = c64(0.7, -3.0);
        let z = c64(0.8, 0.4);
        let v = gauss_2f1(a, one, one, z, &ctx()).unwrap();
        let exact = (-a * (1.0 - z).ln()).exp();
        assert!((v - exact).norm() < 1e-13 * exact.norm());
        // Gauss sum at z = 1: ₂F₁(1/2,1/2;2;1) = Γ(2)Γ(1)/Γ(3/2)² = 4/π
        let h = c64(0.5, 0.0);
        let v = gauss_2f1(h, h, c64(2.0, 0.0), one, &ctx()).unwrap();
        assert!((v.re - 4.0 / PI).abs() < 1e-14);
        assert!(gauss_2f1(h, h, c64(-2.0, 0.0), c64(0.2, 0.0), &ctx()).is_err());
        assert!(gauss_2f1(h, h, one, c64(1.5, 0.0), &ctx()).is_err());
        assert!(gauss_2f1(h, h, one, one, &ctx()).is_err());
    }

    #[test]
    fn oscillatory_family_matches_raw_series_at_r_10() {
        let (r, alpha) = (10.0, 0.2);
        let a = c64(0.25, r * (1.0 - alpha));
        let b = c64(0.75, r * (1.0 - alpha));
        let c = c64(1.0, 2.0 * r);
        for z in [0.2, 0.5, 0.8] {
            let z = c64(z, 0.0);
            let v = gauss_2f1(a, b, c, z, &ctx()).unwrap();
            let o = raw_series(a, b, c, z);
            assert!((v - o).norm() < 1e-12 * o.norm(), "z={z}: {v} vs {o}");
        }
    }

    #[test]
    fn continuation_matches_series_inside_disk() {
        // force the continuation path (large parameters) where the raw
        // series is still benign
        let a = c64(0.25, 30.0);
        let b = c64(0.25, -36.0);
        let c = c64(0.5, 0.0);
        let z = c64(0.01, 0.0);
        let v = gauss_2f1_scaled(a, b, c, z, &ctx()).unwrap();
        let o = raw_series(a, b, c, z);
        assert!((v.value() - o).norm() < 1e-12 * o.norm());
    }

    #[test]
    fn f2_composition_and_symmetry() {
        let p = OscParams::new(30.0, 0.2).unwrap();
        let x = 0.3;
        let v = f2_eval_scaled(p, x, &ctx()).unwrap();
        let a = c64(0.25, p.r - p.t);
        let b = c64(0.25, -p.r - p.t);
        let g = Scaled::from_log(ln_gamma(a) + ln_gamma(b) - 0.5 * PI.ln());
        let f = Scaled::new(raw_series(a, b, c64(0.5, 0.0), c64(x, 0.0)));
        let comp = g.mul(f);
        assert!((v.ratio(&comp) - 1.0).norm() < 1e-10);
        let at0 = f2_eval_scaled(p, 0.0, &ctx()).unwrap();
        assert!((at0.ratio(&g) - 1.0).norm() < 1e-15);
        let neg = f2_eval_rt(-p.r, p.t, x, &ctx()).unwrap();
        assert!((neg.ratio(&v) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn osc_main_term_error_halves_with_r() {
        let z = 0.5;
        let err = |r: f64| {
            let p = OscParams::new(r, 0.2).unwrap();
            let m = asympt_2f1_osc(p, z, 1).unwrap().value;
            let a = c64(0.25, r * 0.8);
            let v = gauss_2f1(a, a + 0.5, c64(1.0, 2.0 * r), c64(z, 0.0), &ctx()).unwrap();
            (m / v - 1.0).norm()
        };
        let (e200, e400) = (err(200.0), err(400.0));
        // frozen from a 30-digit evaluation: 9.4758e-5 and 4.7379e-5
        assert!((e200 - 9.4758e-5).abs() < 1e-8, "{e200}");
        assert!((e400 - 4.7379e-5).abs() < 1e-8, "{e400}");
        assert!(e200 < 1.0 / (0.2 * 200.0));
        let p = OscParams::new(200.0, 0.2).unwrap();
        let m = asympt_2f1_osc(p, 0.3, 1).unwrap().value;
        assert!((m.norm() - (1.0 - 0.96 * 0.3f64).powf(-0.25)).abs() < 1e-15);
        assert!(l1_phase(0.2, 0.0).abs() < 1e-15);
        assert!(asympt_2f1_osc(p, 0.3, 3).unwrap().warning.is_some());
    }

    #[test]
    fn airy_form_at_turning_point() {
        let alpha = 0.3;
        let y = 1.0 - alpha * alpha;
        let mut prev = f64::INFINITY;
        for r in [100.0, 200.0, 400.0, 800.0] {
            let p = OscParams::new(r, alpha).unwrap();
            let m = asympt_f2_airy_scaled(p, y).unwrap().value;
            let v = f2_eval_scaled(p, y, &ctx()).unwrap();
            let e = (v.ratio(&m) - 1.0).norm();
            assert!(e < prev / 1.5, "r={r}: {e}");
            prev = e;
        }
        // frozen 30-digit reference at r = 800: relative error 8.93e-6
        assert!((prev - 8.929e-6).abs() < 2e-8, "{prev}");
    }

    #[test]
    fn airy_form_against_reference_off_turning_point() {
        // frozen 30-digit relative errors at r = 400, α = 0.3
        let alpha = 0.3;
        let p = OscParams::new(400.0, alpha).unwrap();
        for (dy, expect) in [(0.05, 3.538_47e-5), (-0.05, 2.812_56e-5)] {
            let y = 1.0 - alpha * alpha + dy;
            let m = asympt_f2_airy_scaled(p, y).unwrap().value;
            let v = f2_eval_scaled(p, y, &ctx()).unwrap();
            let e = (v.ratio(&m) - 1.0).norm();
            assert!((e - expect).abs() < 1e-8, "dy={dy}: {e}");
        }
    }

    #[test]
    fn literal_a0_a1_match_closed_forms() {
        let alpha: f64 = 0.3;
        let y: f64 = 0.5;
        let s = (1.0 - alpha * alpha - y).sqrt();
        let a0 = PI * (1.0 - alpha) / 2.0 - (y.sqrt() / s).atan() + alpha * (alpha * y.sqrt() / s).atan();
        let tp = turning_point_data(OscParams::new(100.0, alpha).unwrap(), y).unwrap();
        assert!((tp.a0.unwrap() - a0).abs() < 1e-15);
        assert_eq!(tp.regime, Regime::Below);
        let y: f64 = 0.97;
        let v = (y - 1.0 + alpha * alpha).sqrt();
        let a1 = alpha * (alpha * y.sqrt() + v).ln() - (y.sqrt() + v).ln() - alpha / 2.0 * (1.0 - y).ln()
            + (1.0 - alpha) / 2.0 * (1.0 - alpha * alpha).ln();
        let tp = turning_point_data(OscParams::new(100.0, alpha).unwrap(), y).unwrap();
        assert!((tp.a1.unwrap() - a1).abs() < 1e-14);
        assert!(tp.a0.is_none());
    }

    #[test]
    fn taylor_forms_near_turning_point() {
        let alpha: f64 = 0.3;
        let p = OscParams::new(100.0, alpha).unwrap();
        let y0 = 1.0 - alpha * alpha;
        for eps in [1e-3, 1e-4] {
            let y = y0 - eps;
            let lead = (1.0 - alpha * alpha) * eps.powf(1.5) / (3.0 * alpha * alpha * y.powf(1.5));
            let a0 = turning_point_data(p, y).unwrap().a0.unwrap();
            assert!((a0 / lead - 1.0).abs() < 3.0 * eps / (alpha * alpha));
            let y = y0 + eps;
            let lead = eps.powf(1.5) / (3.0 * alpha * alpha * (1.0 - alpha * alpha).sqrt());
            let a1 = turning_point_data(p, y).unwrap().a1.unwrap();
            assert!((a1 / lead - 1.0).abs() < 3.0 * eps / (alpha * alpha));
        }
        let below = turning_point_data(p, y0 - 1e-9).unwrap().zeta_hat;
        let above = turning_point_data(p, y0 + 1e-9).unwrap().zeta_hat;
        assert!(below < 0.0 && above > 0.0 && below.abs() < 1e-8 && above < 1e-8);
    }

    #[test]
    fn decay_and_cosine_limits() {
        let alpha = 0.3;
        let p = OscParams::new(400.0, alpha).unwrap();
        // deep below: |main term| / decay size → √π · (1 + O(1/(r a0)))
        let y = 0.5;
        let m = asympt_f2_airy_scaled(p, y).unwrap().value;
        let ratio = (m.abs_ln() - f2_decay_log_size(p, y).unwrap()).exp();
        assert!((ratio / PI.sqrt() - 1.0).abs() < 1e-2, "{ratio}");
        // above: Airy form and cosine form agree up to the first Airy correction
        let y = 1.0 - alpha * alpha + 0.05;
        let m = asympt_f2_airy_scaled(p, y).unwrap().value;
        let c = f2_cosine_form(p, y).unwrap();
        let tp = turning_point_data(p, y).unwrap();
        let zeta_a = 2.0 * p.r * tp.a1.unwrap();
        let v = y - 1.0 + alpha * alpha;
        let amp = Scaled::from_log(c64(LN_2 + 0.5 * PI.ln() - PI * p.r * alpha - 0.5 * p.r.ln() - 0.25 * v.ln(), 0.0));
        let diff = (m.ratio(&amp) - c.ratio(&amp)).norm();
        assert!(diff < 1.0 / zeta_a, "{diff}");
    }
}
