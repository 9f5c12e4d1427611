//! Quadrature for the integrals that show up in the moment and Voronoi
//! formulas: smooth decaying integrands, oscillatory integrands with a known
//! phase, and Mellin-type integrals along vertical lines.
//!
//! All routines are deterministic: panels are summed left to right in a fixed
//! order, independently of how they were refined.

mod rules;

use crate::{Complex64, Error, Result};
use serde::{Deserialize, Serialize};

pub use rules::{gauss_legendre, GaussRule};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Stopping rule shared by the adaptive integrators.
#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
}

impl QuadOptions {
    pub fn new(rel_tol: f64) -> Self {
        QuadOptions {
            rel_tol,
            abs_tol: 0.0,
            max_evals: 2_000_000,
        }
    }
    pub fn with_abs(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
    pub fn with_budget(mut self, max_evals: usize) -> Self {
        self.max_evals = max_evals;
        self
    }
    fn target(&self, value: f64) -> f64 {
        (self.rel_tol * value).max(self.abs_tol)
    }
}

impl From<f64> for QuadOptions {
    fn from(tol: f64) -> Self {
        QuadOptions::new(tol)
    }
}

/// Integration range; either end may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Self {
        Interval { a, b }
    }
    pub fn real_line() -> Self {
        Interval {
            a: f64::NEG_INFINITY,
            b: f64::INFINITY,
        }
    }
}

// ---------------------------------------------------------------------------
// Gauss–Kronrod 7/15

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

fn gk15<F: FnMut(f64) -> Complex64 + ?Sized>(f: &mut F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    let value = k * h;
    let err = ((k - g) * h).norm();
    Panel { a, b, value, err }
}

/// Gauss–Kronrod 7/15 on `[-1, 1]` as `(node, kronrod weight, gauss weight)`;
/// the gauss weight is 0 at the Kronrod-only nodes.
pub fn gk15_nodes() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for j in 0..7 {
        let g = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        out[j] = (-XGK[j], WGK[j], g);
        out[14 - j] = (XGK[j], WGK[j], g);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

fn check_finite(v: Complex64, x: f64) -> Result<()> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("integrand is not finite at x = {x}")))
    }
}

/// Adaptive Gauss–Kronrod over a list of starting panels on a finite range.
pub fn adaptive_panels<F>(f: &mut F, breaks: &[f64], opts: QuadOptions) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Complex64 + ?Sized,
{
    let mut evals = 0usize;
    let bad: std::cell::Cell<Option<f64>> = std::cell::Cell::new(None);
    let mut wrapped = |x: f64| {
        let v = f(x);
        if bad.get().is_none() && !(v.re.is_finite() && v.im.is_finite()) {
            bad.set(Some(x));
        }
        v
    };
    let mut panels: Vec<Panel> = Vec::with_capacity(breaks.len() * 2);
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            panels.push(gk15(&mut wrapped, w[0], w[1]));
            evals += 15;
        }
    }
    loop {
        if let Some(x) = bad.get() {
            return Err(Error::domain(format!("integrand is not finite at x = {x}")));
        }
        let (value, err) = totals(&panels);
        if err <= opts.target(value.norm()) {
            return Ok(QuadratureResult {
                value,
                abs_error_estimate: err,
                evaluations: evals,
            });
        }
        if evals >= opts.max_evals {
            return Err(Error::Budget {
                partial: value,
                error_estimate: err,
                evaluations: evals,
            });
        }
        // split every panel whose error is above its fair share, largest first
        let share = opts.target(value.norm()) / panels.len() as f64;
        let mut next = Vec::with_capacity(panels.len() + 8);
        let mut split_any = false;
        let max_err = panels.iter().fold(0.0f64, |m, p| m.max(p.err));
        for p in panels.iter() {
            if p.err > share && (p.err >= 0.1 * max_err || p.err > 4.0 * share) && p.b - p.a > 1e-13 * (1.0 + p.a.abs()) {
                let m = 0.5 * (p.a + p.b);
                next.push(gk15(&mut wrapped, p.a, m));
                next.push(gk15(&mut wrapped, m, p.b));
                evals += 30;
                split_any = true;
            } else {
                next.push(*p);
            }
        }
        panels = next;
        if !split_any {
            let (value, err) = totals(&panels);
            return Ok(QuadratureResult {
                value,
                abs_error_estimate: err,
                evaluations: evals,
            });
        }
    }
}

fn totals(panels: &[Panel]) -> (Complex64, f64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut e = 0.0;
    for p in panels {
        v += p.value;
        e += p.err;
    }
    (v, e)
}

// ---------------------------------------------------------------------------
// Double-exponential transforms for infinite ranges

fn de_map(kind: u8, a: f64, t: f64) -> (f64, f64) {
    use std::f64::consts::FRAC_PI_2;
    match kind {
        // [a, ∞)
        0 => {
            let e = (FRAC_PI_2 * t.sinh()).exp();
            (a + e, FRAC_PI_2 * t.cosh() * e)
        }
        // (−∞, a]
        1 => {
            let e = (FRAC_PI_2 * t.sinh()).exp();
            (a - e, FRAC_PI_2 * t.cosh() * e)
        }
        // (−∞, ∞)
        _ => {
            let s = FRAC_PI_2 * t.sinh();
            (s.sinh(), FRAC_PI_2 * t.cosh() * s.cosh())
        }
    }
}

fn de_integrate<F>(f: &mut F, kind: u8, a: f64, opts: QuadOptions) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Complex64 + ?Sized,
{
    let tmax = 4.5;
    let mut h = 0.5;
    let mut evals = 0usize;
    let mut eval = |t: f64, evals: &mut usize| -> Result<Complex64> {
        let (x, w) = de_map(kind, a, t);
        if !x.is_finite() || w == 0.0 || !w.is_finite() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        *evals += 1;
        let v = f(x) * w;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else if x.abs() > 1e12 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            check_finite(v, x).map(|_| v)
        }
    };
    let n0 = (tmax / h) as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in -n0..=n0 {
        sum += eval(k as f64 * h, &mut evals)?;
    }
    let mut prev = sum * h;
    for _level in 0..9 {
        h *= 0.5;
        let n = (tmax / h) as i64;
        for k in -n..=n {
            if k.rem_euclid(2) == 1 {
                sum += eval(k as f64 * h, &mut evals)?;
            }
        }
        let cur = sum * h;
        let err = (cur - prev).norm();
        if err <= opts.target(cur.norm()) && _level >= 1 {
            return Ok(QuadratureResult {
                value: cur,
                abs_error_estimate: err,
                evaluations: evals,
            });
        }
        if evals >= opts.max_evals {
            return Err(Error::Budget {
                partial: cur,
                error_estimate: err,
                evaluations: evals,
            });
        }
        prev = cur;
    }
    Err(Error::Budget {
        partial: prev,
        error_estimate: f64::NAN,
        evaluations: evals,
    })
}

/// Integrates a smooth function that decays at any infinite endpoint.
pub fn integrate_decaying<F>(mut f: F, iv: Interval, opts: impl Into<QuadOptions>) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Complex64,
{
    let opts = opts.into();
    if !(iv.a < iv.b) {
        return Err(Error::domain("empty or reversed interval"));
    }
    match (iv.a.is_finite(), iv.b.is_finite()) {
        (true, true) => {
            let n = 8;
            let breaks: Vec<f64> = (0..=n).map(|k| iv.a + (iv.b - iv.a) * k as f64 / n as f64).collect();
            adaptive_panels(&mut f, &breaks, opts)
        }
        (true, false) => de_integrate(&mut f, 0, iv.a, opts),
        (false, true) => de_integrate(&mut f, 1, iv.b, opts),
        (false, false) => de_integrate(&mut f, 2, 0.0, opts),
    }
}

/// Locates a finite cutoff beyond which `|g|` stays below `thresh` relative to
/// its largest seen value, walking outward from `x0` in direction `dir`.
fn find_cutoff<G: FnMut(f64) -> f64>(g: &mut G, x0: f64, dir: f64, thresh: f64) -> f64 {
    let mut peak = g(x0).abs().max(f64::MIN_POSITIVE);
    let mut step = 1.0f64;
    let mut x = x0;
    let mut quiet = 0;
    for _ in 0..200 {
        x += dir * step;
        let v = g(x).abs();
        peak = peak.max(v);
        if v <= thresh * peak {
            quiet += 1;
            if quiet >= 3 {
                return x;
            }
        } else {
            quiet = 0;
        }
        step *= 1.5;
    }
    x
}

/// Panel boundaries on `[a,b]` such that `omega·phase` advances by at most
/// `max_phase` per panel; stationary points become boundaries.
pub fn phase_panels<P: FnMut(f64) -> f64>(phase: &mut P, omega: f64, a: f64, b: f64, stationary: &[f64], max_phase: f64) -> Vec<f64> {
    let mut cuts = vec![a];
    let mut sp: Vec<f64> = stationary.iter().copied().filter(|&s| s > a && s < b).collect();
    sp.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.extend(sp);
    cuts.push(b);
    let mut out = vec![a];
    for w in cuts.windows(2) {
        let (p, q) = (w[0], w[1]);
        let samples = 256;
        let mut acc = 0.0;
        let mut prev = phase(p);
        let mut last_cut = p;
        for k in 1..=samples {
            let x = p + (q - p) * k as f64 / samples as f64;
            let v = phase(x);
            acc += omega * (v - prev).abs();
            prev = v;
            if acc >= max_phase && k < samples {
                out.push(x);
                last_cut = x;
                acc = 0.0;
            }
        }
        let _ = last_cut;
        out.push(q);
    }
    out.dedup();
    out
}

/// Integrates `g(x)·exp(i·omega·phase(x))`; infinite ranges are cut where the
/// amplitude has decayed below `rel_tol·1e-2` of its peak.
pub fn integrate_oscillatory<G, P>(
    mut g: G,
    mut phase: P,
    omega: f64,
    iv: Interval,
    stationary: &[f64],
    opts: impl Into<QuadOptions>,
) -> Result<QuadratureResult>
where
    G: FnMut(f64) -> Complex64,
    P: FnMut(f64) -> f64,
{
    let opts = opts.into();
    if omega <= 0.0 {
        return Err(Error::domain("omega must be positive"));
    }
    let thresh = (opts.rel_tol * 1e-2).max(1e-300);
    let centre = if iv.a.is_finite() && iv.b.is_finite() {
        0.5 * (iv.a + iv.b)
    } else if iv.a.is_finite() {
        iv.a
    } else if iv.b.is_finite() {
        iv.b
    } else {
        0.0
    };
    let mut amp = |x: f64| g(x).norm();
    let a = if iv.a.is_finite() { iv.a } else { find_cutoff(&mut amp, centre, -1.0, thresh) };
    let b = if iv.b.is_finite() { iv.b } else { find_cutoff(&mut amp, centre, 1.0, thresh) };
    let breaks = phase_panels(&mut phase, omega, a, b, stationary, std::f64::consts::PI);
    let mut f = |x: f64| {
        let ph = omega * phase(x);
        g(x) * Complex64::new(ph.cos(), ph.sin())
    };
    adaptive_panels(&mut f, &breaks, opts)
}

/// `(1/2πi) ∫ f(z) dz` over the line `ℜz = a`, upward.
pub fn integrate_vertical_line<F>(mut f: F, a: f64, opts: impl Into<QuadOptions>) -> Result<QuadratureResult>
where
    F: FnMut(Complex64) -> Complex64,
{
    let opts = opts.into();
    let thresh = (opts.rel_tol * 1e-2).max(1e-300);
    let mut amp = |v: f64| f(Complex64::new(a, v)).norm();
    let lo = find_cutoff(&mut amp, 0.0, -1.0, thresh);
    let hi = find_cutoff(&mut amp, 0.0, 1.0, thresh);
    let n = ((hi - lo) / 0.5).ceil().max(4.0) as usize;
    let breaks: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    let mut g = |v: f64| f(Complex64::new(a, v)) / (2.0 * std::f64::consts::PI);
    adaptive_panels(&mut g, &breaks, opts)
}

/// Parameters of the first-derivative-test bound for `∫ g(x) e(f(x)) dx`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BkyParams {
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub r: f64,
    pub v: f64,
    pub p: f64,
    pub y: f64,
    #[serde(rename = "A")]
    pub big_a: u32,
}

/// `(b−a)·X·(1/(RV) + 1/(RP) + Y/(R²P²))^A`.
pub fn bky_estimate(p: &BkyParams) -> Result<f64> {
    if !(p.a < p.b) || p.x <= 0.0 || p.r <= 0.0 || p.v <= 0.0 || p.p <= 0.0 || p.y <= 0.0 || p.big_a == 0 {
        return Err(Error::domain("BKY parameters must be positive with a < b"));
    }
    let base = 1.0 / (p.r * p.v) + 1.0 / (p.r * p.p) + p.y / (p.r * p.r * p.p * p.p);
    Ok((p.b - p.a) * p.x * base.powi(p.big_a as i32))
}

/// Fixed composite Gauss–Legendre rule on equal panels; used inside special
/// function evaluators where an adaptive loop would be too slow.
pub fn gl_composite<F>(f: &mut F, a: f64, b: f64, panels: usize, rule: &GaussRule) -> Complex64
where
    F: FnMut(f64) -> Complex64 + ?Sized,
{
    let mut total = Complex64::new(0.0, 0.0);
    let w = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + w * p as f64;
        let c = lo + 0.5 * w;
        let h = 0.5 * w;
        let mut s = Complex64::new(0.0, 0.0);
        for (x, wt) in rule.nodes.iter().zip(rule.weights.iter()) {
            s += f(c + h * x) * *wt;
        }
        total += s * h;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_on_real_line() {
        let r = integrate_decaying(|x| Complex64::new((-x * x).exp(), 0.0), Interval::real_line(), 1e-13).unwrap();
        assert!((r.value.re - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn shifted_gaussian_exponential_moment() {
        // ∫ exp(−p²y² + qy) dy = √π/p · exp(q²/4p²)
        let (p, q) = (1.0f64, 2.0f64);
        let r = integrate_decaying(|y| Complex64::new((-p * p * y * y + q * y).exp(), 0.0), Interval::real_line(), 1e-13).unwrap();
        let exact = PI.sqrt() / p * (q * q / (4.0 * p * p)).exp();
        assert!((r.value.re - exact).abs() < 1e-12 * exact);
        assert!((exact - PI.sqrt() * 1f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn odd_moment_vanishes() {
        let opts = QuadOptions::new(1e-12).with_abs(1e-15);
        let r = integrate_decaying(|y| Complex64::new(y * (-y * y).exp(), 0.0), Interval::real_line(), opts).unwrap();
        assert!(r.value.norm() < 1e-14);
    }

    #[test]
    fn fourier_transform_of_gaussian() {
        let w = 10.0;
        let opts = QuadOptions::new(1e-12).with_abs(1e-17);
        let r = integrate_oscillatory(|y| Complex64::new((-y * y).exp(), 0.0), |y| y, w, Interval::real_line(), &[], opts).unwrap();
        let exact = PI.sqrt() * (-25.0f64).exp();
        assert!((r.value - Complex64::new(exact, 0.0)).norm() < 1e-15, "{:?}", r);
    }

    #[test]
    fn vertical_line_mellin_inversion() {
        let y: f64 = 2.0;
        let f = |z: Complex64| crate::specfun::gamma::gamma_unchecked(z) * (-z * y.ln()).exp();
        let r = integrate_vertical_line(f, 1.0, 1e-12).unwrap();
        assert!((r.value.re - (-2.0f64).exp()).abs() < 1e-12, "{:?}", r);
        let r2 = integrate_vertical_line(f, 2.0, 1e-12).unwrap();
        assert!((r.value - r2.value).norm() < 1e-12);
    }

    #[test]
    fn bky_examples() {
        let mut p = BkyParams { a: 0.0, b: 1.0, x: 1.0, r: 10.0, v: 1.0, p: 1.0, y: 10.0, big_a: 1 };
        assert!((bky_estimate(&p).unwrap() - 0.3).abs() < 1e-15);
        p.big_a = 2;
        assert!((bky_estimate(&p).unwrap() - 0.09).abs() < 1e-15);
    }

    #[test]
    fn non_oscillatory_inputs_match() {
        let g = |x: f64| Complex64::new(1.0 / (1.0 + x * x), 0.0);
        let a = integrate_oscillatory(g, |x| 0.3 * x, 0.5, Interval::new(-2.0, 3.0), &[], 1e-13).unwrap();
        let b = integrate_decaying(
            |x| g(x) * Complex64::new((0.15 * x).cos(), (0.15 * x).sin()),
            Interval::new(-2.0, 3.0),
            1e-13,
        )
        .unwrap();
        assert!((a.value - b.value).norm() < 1e-12);
    }
}
