//! Archimedean factor, the cutoff functions `V` and the approximate
//! functional equation for `L(sym² u_j, s)`.
//!
//! For any `s` the completed function `Λ(s) = L_∞(s)L(s)` is entire and
//! satisfies `Λ(s) = Λ(1−s)`; with an even `G`, `G(0) = 1`,
//!
//! ```text
//! L(s) = Σ λ(m²) m^{−s} V_s(m) + Σ λ(m²) m^{s−1} Ṽ_s(m),
//! V_s(y) = (1/2πi) ∫_{(a)}  L_∞(s+z)/L_∞(s)   ζ(2s+2z)   G(z) y^{−z} dz/z,
//! Ṽ_s(y) = (1/2πi) ∫_{(a')} L_∞(1−s+z)/L_∞(s) ζ(2−2s+2z) G(z) y^{−z} dz/z.
//! ```
//!
//! At `s = 1/2 − 2it` this is the familiar pair `V(m,−t,t_j)` and
//! `L_∞(1/2+2it)/L_∞(1/2−2it) · V(m,t,t_j)`.

use super::MaassForm;
use crate::oscint::gauss_legendre;
use crate::specfun::{ln_gamma, zeta::zeta};
use crate::{Complex64, Error, PrecisionContext, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `ln L_∞(s, t_j)`, `L_∞ = π^{−3s/2} Γ(s/2) Γ((s+2it_j)/2) Γ((s−2it_j)/2)`.
pub fn ln_l_infinity(s: Complex64, t_j: Complex64) -> Complex64 {
    -1.5 * s * PI.ln() + ln_gamma(s * 0.5) + ln_gamma((s + 2.0 * I * t_j) * 0.5) + ln_gamma((s - 2.0 * I * t_j) * 0.5)
}

fn is_gamma_pole(z: Complex64) -> bool {
    z.im.abs() < 1e-14 && z.re <= 1e-14 && (z.re - z.re.round()).abs() < 1e-14
}

/// `L_∞(s, t_j)`.
pub fn l_infinity(s: Complex64, t_j: f64, ctx: &PrecisionContext) -> Result<Complex64> {
    let _ = ctx;
    let tj = c(t_j);
    for w in [s * 0.5, (s + 2.0 * I * tj) * 0.5, (s - 2.0 * I * tj) * 0.5] {
        if is_gamma_pole(w) {
            return Err(Error::pole(format!("L_∞({s}, {t_j}) has a Gamma pole")));
        }
    }
    Ok(ln_l_infinity(s, tj).exp())
}

/// Analytic conductor `(1+|t|)(1+|t+t_j|)(1+|t−t_j|)` of `L(sym² u_j, 1/2+2it)`.
pub fn conductor(t: f64, t_j: f64) -> f64 {
    (1.0 + t.abs()) * (1.0 + (t + t_j).abs()) * (1.0 + (t - t_j).abs())
}

/// Exact `L_∞(1/2+2it, t_j) / L_∞(1/2−2it, t_j)`.
pub fn linf_ratio(t: f64, t_j: Complex64) -> Complex64 {
    let s = Complex64::new(0.5, 2.0 * t);
    (ln_l_infinity(s, t_j) - ln_l_infinity(s.conj(), t_j)).exp()
}

/// `f(α) = (1+α)log(1+α) − (1−α)log(1−α) − 2α`.
pub fn f_alpha(a: Complex64) -> Complex64 {
    if a.norm() < 1e-3 {
        // −α³/3 − α⁵/10 − α⁷/21
        let a2 = a * a;
        return -a * a2 * (c(1.0 / 3.0) + a2 * (0.1 + a2 / 21.0));
    }
    let one = c(1.0);
    (one + a) * (one + a).ln() - (one - a) * (one - a).ln() - 2.0 * a
}

/// `C(t) exp(2it_j(2α log t_j + f(α)))`, `α = t/t_j`, with
/// `C(t) = π^{−6it} Γ(1/4+it)/Γ(1/4−it)` the factor independent of `t_j`.
pub fn linf_ratio_main(t: f64, t_j: f64) -> Complex64 {
    let a = c(t / t_j);
    let ct = (-6.0 * I * t * PI.ln() + ln_gamma(Complex64::new(0.25, t)) - ln_gamma(Complex64::new(0.25, -t))).exp();
    ct * (2.0 * I * t_j * (a * 2.0 * t_j.ln() + f_alpha(a))).exp()
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LinfRatioReport {
    pub exact: Complex64,
    /// `C(t,T) exp(2iGy log((1+α₀)/(1−α₀)))`.
    pub main: Complex64,
    pub rel_error: f64,
    /// `t G² y² / T²`, the size of the first neglected term.
    pub scale: f64,
}

/// The window form of the gamma-ratio at `t_j = T + Gy`.
pub fn linf_ratio_lemma(t: f64, big_t: f64, big_g: f64, y: f64) -> LinfRatioReport {
    let t_j = big_t + big_g * y;
    let exact = linf_ratio(t, c(t_j));
    let a0 = t / big_t;
    let ct = (-6.0 * I * t * PI.ln() + ln_gamma(Complex64::new(0.25, t)) - ln_gamma(Complex64::new(0.25, -t))).exp();
    let ctt = ct * (I * (4.0 * t * big_t.ln()) + 2.0 * I * big_t * f_alpha(c(a0))).exp();
    let main = ctt * (2.0 * I * big_g * y * ((1.0 + a0) / (1.0 - a0)).ln()).exp();
    LinfRatioReport {
        exact,
        main,
        rel_error: (exact - main).norm() / exact.norm(),
        scale: t * big_g * big_g * y * y / (big_t * big_t),
    }
}

/// `P_n(t, x)`, the product of linear factors vanishing at `−4t²` (for
/// `t ≠ 0`) and at `(1/2 ± 2it + 2j)²`, `j < n`, normalized by `P(0) = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AfePolynomial {
    pub n: usize,
    pub t: f64,
    pub roots: Vec<Complex64>,
}

impl AfePolynomial {
    pub fn new(n: usize, t: f64) -> Self {
        let mut roots = Vec::with_capacity(2 * n + 1);
        if t != 0.0 {
            roots.push(c(-4.0 * t * t));
        }
        for j in 0..n {
            let a = Complex64::new(0.5 + 2.0 * j as f64, 2.0 * t);
            roots.push(a * a);
            roots.push(a.conj() * a.conj());
        }
        AfePolynomial { n, t, roots }
    }
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.roots.iter().fold(c(1.0), |acc, &r| acc * (c(1.0) - x / r))
    }
}

/// Cutoff shape `G(z) = exp(B z²) P_n(t, z²)` and quadrature layout.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AfeConfig {
    /// Gaussian parameter; `B = 1` is the published cutoff.
    pub gauss_b: f64,
    /// Panels per unit length of the vertical line.
    pub density: f64,
}

impl AfeConfig {
    /// `G(z) = e^{z²}·P_n`.
    pub fn unit_gaussian() -> Self {
        AfeConfig { gauss_b: 1.0, density: 2.0 }
    }
    /// `V` decays like `exp(−log²(y/y₀)/(4B))` past the transition
    /// `y₀ ≈ √conductor/π^{3/2}`, so a small `B` keeps the sums short at the
    /// price of larger intermediate values.
    pub fn with_b(gauss_b: f64) -> Self {
        AfeConfig { gauss_b, density: 4.0 }
    }
}

impl Default for AfeConfig {
    fn default() -> Self {
        AfeConfig::with_b(1.0 / 16.0)
    }
}

/// Gaussian parameters tried by [`sym2_l_poly`], widest first.
pub const AUTO_B: [f64; 4] = [0.25, 0.125, 0.0625, 0.03125];

/// A discretized Mellin–Barnes kernel: `V(y) = Σ_k w_k y^{−z_k}`.
#[derive(Clone, Debug)]
pub struct VKernel {
    nodes: Vec<(Complex64, Complex64)>,
}

impl VKernel {
    /// Discretize `(1/2πi)∫_{(a)} f(z) y^{−z} dz`.
    fn build<F: FnMut(Complex64) -> Complex64>(mut f: F, a: f64, cfg: &AfeConfig, vmax: f64) -> Self {
        let rule = gauss_legendre(16);
        let panels = ((2.0 * vmax * cfg.density).ceil() as usize).max(8);
        let h = 2.0 * vmax / panels as f64;
        let mut nodes = Vec::with_capacity(panels * rule.nodes.len());
        for p in 0..panels {
            let lo = -vmax + p as f64 * h;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let v = lo + 0.5 * h * (x + 1.0);
                let z = Complex64::new(a, v);
                nodes.push((z, f(z) * (0.5 * h * w / (2.0 * PI))));
            }
        }
        VKernel { nodes }
    }
    pub fn eval(&self, y: f64) -> Complex64 {
        let ly = y.ln();
        self.nodes.iter().map(|&(z, w)| w * (-z * ly).exp()).sum()
    }
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn vmax_for(cfg: &AfeConfig, p: &AfePolynomial) -> f64 {
    // |e^{Bz²}| = e^{B(a²−v²)} and the e^{−π|v|/4} of Γ((s+z)/2) against v^{2·deg}
    let deg = p.roots.len() as f64;
    let mut v = 4.0f64;
    while cfg.gauss_b * v * v + 0.7 * v - 2.0 * deg * v.ln() < 48.0 {
        v += 0.5;
    }
    v
}

fn g_factor(z: Complex64, p: &AfePolynomial, cfg: &AfeConfig) -> Complex64 {
    (cfg.gauss_b * z * z).exp() * p.eval(z * z)
}

/// Kernel of `V_s` on the line `ℜz = a`.
pub(crate) fn primary_kernel(s: Complex64, t_j: Complex64, p: &AfePolynomial, cfg: &AfeConfig, a: f64) -> VKernel {
    let base = ln_l_infinity(s, t_j);
    let f = |z: Complex64| {
        let zz = zeta(2.0 * s + 2.0 * z).unwrap_or(c(f64::NAN));
        (ln_l_infinity(s + z, t_j) - base).exp() * zz * g_factor(z, p, cfg) / z
    };
    VKernel::build(f, a, cfg, vmax_for(cfg, p))
}

/// Kernel of `Ṽ_s` on the line `ℜz = a'`.
pub(crate) fn dual_kernel(s: Complex64, t_j: Complex64, p: &AfePolynomial, cfg: &AfeConfig, a: f64) -> VKernel {
    let base = ln_l_infinity(s, t_j);
    let one = c(1.0);
    let f = |z: Complex64| {
        let zz = zeta(2.0 * (one - s) + 2.0 * z).unwrap_or(c(f64::NAN));
        (ln_l_infinity(one - s + z, t_j) - base).exp() * zz * g_factor(z, p, cfg) / z
    };
    VKernel::build(f, a, cfg, vmax_for(cfg, p))
}

fn check_v_args(y: f64) -> Result<()> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::domain(format!("V needs y > 0, got {y}")));
    }
    Ok(())
}

/// `V(y, t, t_j)` with an explicit cutoff configuration and contour `ℜz = a`.
pub fn v_weight_line(y: f64, t: f64, t_j: Complex64, p: &AfePolynomial, cfg: &AfeConfig, a: f64) -> Result<Complex64> {
    check_v_args(y)?;
    if !(a > 0.0) {
        return Err(Error::domain("the V contour must lie in ℜz > 0"));
    }
    let s = Complex64::new(0.5, 2.0 * t);
    let v = primary_kernel(s, t_j, p, cfg, a).eval(y);
    if !v.is_finite() {
        return Err(Error::Precision("V kernel produced a non-finite value".into()));
    }
    Ok(v)
}

pub(crate) fn v_weight_cfg(y: f64, t: f64, t_j: Complex64, p: &AfePolynomial, cfg: &AfeConfig, ctx: &PrecisionContext) -> Result<Complex64> {
    let _ = ctx;
    v_weight_line(y, t, t_j, p, cfg, 0.5)
}

/// `V(y, t, t_j)` with the published cutoff `G(t,z) = e^{z²} P_n(t,z²)`.
pub fn v_weight(y: f64, t: f64, t_j: f64, p: &AfePolynomial, ctx: &PrecisionContext) -> Result<Complex64> {
    v_weight_cfg(y, t, c(t_j), p, &AfeConfig::unit_gaussian(), ctx)
}

/// Leading term of the large-`t_j` expansion of `V(y,t,t_j)`: the gamma
/// ratio replaced by `(√(t_j²−t²)/π^{3/2})^z Γ(1/4+it+z/2)/Γ(1/4+it)`.
pub fn v_main_term(y: f64, t: f64, t_j: f64, p: &AfePolynomial) -> Result<Complex64> {
    check_v_args(y)?;
    if !(t_j > t.abs()) {
        return Err(Error::domain("main term needs t_j > |t|"));
    }
    let cfg = AfeConfig::unit_gaussian();
    let scale = ((t_j * t_j - t * t).sqrt() / PI.powf(1.5)).ln();
    Ok(main_kernel(t, scale, p, &cfg, |_| c(1.0)).eval(y))
}

fn main_kernel<F: Fn(Complex64) -> Complex64>(t: f64, ln_scale: f64, p: &AfePolynomial, cfg: &AfeConfig, extra: F) -> VKernel {
    let q = Complex64::new(0.25, t);
    let lq = ln_gamma(q);
    let f = |z: Complex64| {
        let zz = zeta(Complex64::new(1.0, 4.0 * t) + 2.0 * z).unwrap_or(c(f64::NAN));
        let g = (z * ln_scale + ln_gamma(q + z * 0.5) - lq).exp();
        g * (extra(z)) * zz * g_factor(z, p, cfg) / z
    };
    VKernel::build(f, 0.5, cfg, vmax_for(cfg, p))
}

/// The window split of the main term at `t_j = T + G·yy`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct VSplit {
    /// Main term at `t_j = T`.
    pub v_center: Complex64,
    /// Main term at `t_j` minus main term at `T`, computed as one integral
    /// with the factor `((t_j²−t²)/(T²−t²))^{z/2} − 1`.
    pub v_tilde: Complex64,
    /// Full `V(y, t, t_j)`.
    pub full: Complex64,
}

pub fn v_split(y: f64, t: f64, big_t: f64, big_g: f64, yy: f64, p: &AfePolynomial, ctx: &PrecisionContext) -> Result<VSplit> {
    check_v_args(y)?;
    let t_j = big_t + big_g * yy;
    if !(big_t > t.abs()) || !(t_j > t.abs()) {
        return Err(Error::domain("window split needs T, t_j > |t|"));
    }
    let cfg = AfeConfig::unit_gaussian();
    let v_center = v_main_term(y, t, big_t, p)?;
    let scale = ((big_t * big_t - t * t).sqrt() / PI.powf(1.5)).ln();
    let lr = 0.5 * ((t_j * t_j - t * t) / (big_t * big_t - t * t)).ln();
    let v_tilde = main_kernel(t, scale, p, &cfg, |z| {
        // ((t_j²−t²)/(T²−t²))^{z/2} − 1, computed without cancellation
        let w = z * lr;
        if w.norm() < 0.5 {
            let mut term = w;
            let mut sum = w;
            for k in 2..30 {
                term *= w / k as f64;
                sum += term;
            }
            sum
        } else {
            w.exp() - 1.0
        }
    })
    .eval(y);
    let full = v_weight(y, t, t_j, p, ctx)?;
    Ok(VSplit { v_center, v_tilde, full })
}

/// An `L`-value with its bookkeeping.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Sym2Value {
    pub value: Complex64,
    /// Number of `λ(m²)` used.
    pub terms: u64,
    pub truncation_error: f64,
    pub method: Sym2Method,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sym2Method {
    Direct,
    Afe,
}

/// `ζ(2s) Σ_{m ≤ M} λ(m²) m^{−s}` for `ℜs > 1`; `M` defaults to the
/// full coefficient supply.
pub fn sym2_l_direct(form: &MaassForm, s: Complex64, cutoff: Option<u64>) -> Result<Sym2Value> {
    if !(s.re > 1.0) {
        return Err(Error::domain("the Dirichlet series needs ℜs > 1"));
    }
    let supply = form.square_supply();
    let m_max = cutoff.unwrap_or(supply);
    if m_max > supply {
        return Err(Error::Coverage {
            message: format!("direct series wants λ(m²) for m ≤ {m_max}, catalog has {supply}"),
            required_n: Some(m_max),
        });
    }
    let mut sum = c(0.0);
    for m in 1..=m_max {
        sum += (-s * (m as f64).ln()).exp() * form.lambda_square(m).unwrap();
    }
    let z2 = zeta(2.0 * s)?;
    // |λ(m²)| ≤ d(m²) ≤ 3^{ω(m)}·…; the tail is bounded by the divisor-cubed series
    let sig = s.re;
    let mf = m_max as f64;
    let tail = z2.norm() * mf.powf(1.0 - sig) * mf.ln().powi(2) / (sig - 1.0);
    Ok(Sym2Value {
        value: z2 * sum,
        terms: m_max,
        truncation_error: tail,
        method: Sym2Method::Direct,
    })
}

/// `L(sym² u, s)` by the approximate functional equation with an explicit
/// cutoff polynomial and configuration.
pub fn sym2_l_with(form: &MaassForm, s: Complex64, p: &AfePolynomial, cfg: &AfeConfig, ctx: &PrecisionContext) -> Result<Sym2Value> {
    let t_j = c(form.t_j());
    for w in [s * 0.5, (s + 2.0 * I * t_j) * 0.5, (s - 2.0 * I * t_j) * 0.5] {
        if is_gamma_pole(w) {
            return Err(Error::pole(format!("L_∞ has a pole at {s}")));
        }
    }
    // both integrands are analytic right of these lines; stay close to keep e^{Ba²} small
    let a = (0.5 - s.re).max(0.0) + 0.25;
    let ad = (s.re - 0.5).max(0.0) + 0.25;
    let kp = primary_kernel(s, t_j, p, cfg, a);
    let kd = dual_kernel(s, t_j, p, cfg, ad);
    let supply = form.square_supply();
    let eps = ctx.target_rel_error * 1e-2;
    let one = c(1.0);
    let mut sum = c(0.0);
    let mut scale = 0.0f64;
    let mut quiet = 0;
    let mut m = 1u64;
    let conductor_scale = (form.t_j() * form.t_j() * (1.0 + s.im.abs())).sqrt() / PI.powf(1.5);
    loop {
        let lm = (m as f64).ln();
        let v1 = kp.eval(m as f64) * (-s * lm).exp();
        let v2 = kd.eval(m as f64) * ((s - one) * lm).exp();
        let bound = v1.norm() + v2.norm();
        if !bound.is_finite() {
            return Err(Error::Precision("AFE kernel produced a non-finite value".into()));
        }
        if (m as f64) > 2.0 * conductor_scale && bound * (m as f64).powf(0.1) < eps * scale.max(1e-300) {
            quiet += 1;
            if quiet >= 3 {
                return Ok(Sym2Value {
                    value: sum,
                    terms: m - 1,
                    truncation_error: 10.0 * bound,
                    method: Sym2Method::Afe,
                });
            }
        } else {
            quiet = 0;
        }
        if m > supply {
            // keep evaluating the kernels to report the length actually needed
            let mut need = m;
            loop {
                need += 1;
                let ln = (need as f64).ln();
                let b = (kp.eval(need as f64) * (-s * ln).exp()).norm() + (kd.eval(need as f64) * ((s - one) * ln).exp()).norm();
                if (need as f64) > 2.0 * conductor_scale && b < eps * scale.max(1e-300) || need > 100 * supply.max(100) {
                    break;
                }
            }
            return Err(Error::Coverage {
                message: format!(
                    "AFE for t_j = {} at s = {s} needs λ(m²) for m ≤ {need}; catalog supplies {supply}",
                    form.t_j()
                ),
                required_n: Some(need),
            });
        }
        let lam = form.lambda_square(m).unwrap();
        let term = (v1 + v2) * lam;
        sum += term;
        scale = scale.max(sum.norm()).max(term.norm());
        m += 1;
    }
}

/// `L(sym² u, s)`: the Dirichlet series when its tail bound already meets
/// the target, otherwise the approximate functional equation with
/// `P_2(ℑs/2, ·)` and the default cutoff.
pub fn sym2_l(form: &MaassForm, s: Complex64, ctx: &PrecisionContext) -> Result<Sym2Value> {
    if s.re > 1.0 {
        if let Ok(d) = sym2_l_direct(form, s, None) {
            if d.truncation_error <= ctx.target_rel_error * d.value.norm() {
                return Ok(d);
            }
        }
    }
    let p = AfePolynomial::new(2, s.im / 2.0);
    sym2_l_poly(form, s, &p, ctx)
}

/// The AFE with polynomial `p`, choosing the widest Gaussian from
/// [`AUTO_B`] whose cutoff has decayed by the end of the coefficient supply.
pub fn sym2_l_poly(form: &MaassForm, s: Complex64, p: &AfePolynomial, ctx: &PrecisionContext) -> Result<Sym2Value> {
    let t_j = c(form.t_j());
    let m = form.square_supply() as f64;
    let one = c(1.0);
    let a = (0.5 - s.re).max(0.0) + 0.25;
    let ad = (s.re - 0.5).max(0.0) + 0.25;
    let mut chosen = AfeConfig::with_b(AUTO_B[AUTO_B.len() - 1]);
    for b in AUTO_B {
        let cfg = AfeConfig::with_b(b);
        let kp = primary_kernel(s, t_j, p, &cfg, a);
        let kd = dual_kernel(s, t_j, p, &cfg, ad);
        let scale = kp.eval(1.0).norm().max(kd.eval(1.0).norm()).max(1.0);
        let tail = (kp.eval(m) * (-s * m.ln()).exp()).norm() + (kd.eval(m) * ((s - one) * m.ln()).exp()).norm();
        if tail < 1e-15 * scale {
            chosen = cfg;
            break;
        }
    }
    sym2_l_with(form, s, p, &chosen, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn archimedean_factor_basics() {
        let ctx = PrecisionContext::default();
        for (t, tj) in [(1.0, 9.5), (2.5, 20.0), (0.3, 33.0)] {
            let r = linf_ratio(t, c(tj));
            assert!((r.norm() - 1.0).abs() < 1e-13);
            let a = l_infinity(Complex64::new(0.5, 2.0 * t), tj, &ctx).unwrap();
            let b = l_infinity(Complex64::new(0.5, -2.0 * t), tj, &ctx).unwrap();
            assert!((r - a / b).norm() < 1e-12);
        }
        assert_eq!(conductor(2.0, 10.0), 351.0);
        assert!(matches!(l_infinity(c(0.0), 5.0, &ctx), Err(Error::Pole(_))));
        assert!(matches!(l_infinity(c(-2.0), 5.0, &ctx), Err(Error::Pole(_))));
    }

    #[test]
    fn lemma_ratio_main_term() {
        for y in [-1.0, 0.0, 1.0] {
            let rep = linf_ratio_lemma(30.0, 500.0, 10.0, y);
            let bound = 10.0 * (30.0 * 100.0 / 250000.0);
            assert!(rep.rel_error <= bound, "y={y}: {:?}", rep);
        }
        // the t_j-form is accurate up to the neglected Stirling terms
        let e = linf_ratio(3.0, c(200.0));
        assert!((e - linf_ratio_main(3.0, 200.0)).norm() < 1e-2);
        assert!((e - linf_ratio_main(3.0, 200.0)).norm() > (linf_ratio(3.0, c(400.0)) - linf_ratio_main(3.0, 400.0)).norm());
    }

    #[test]
    fn polynomial_roots() {
        for t in [0.0, 1.0, 2.5] {
            for n in [1, 2, 4] {
                let p = AfePolynomial::new(n, t);
                assert_eq!(p.eval(c(0.0)), c(1.0));
                for &r in &p.roots {
                    assert!(p.eval(r).norm() < 1e-12);
                }
                assert_eq!(p.roots.len(), 2 * n + usize::from(t != 0.0));
            }
        }
        assert!(f_alpha(c(1e-4)).re + 1e-12 / 3.0 < 1e-25);
        let a = c(0.3);
        assert!((f_alpha(a) - ((1.3f64) * 1.3f64.ln() - 0.7 * 0.7f64.ln() - 0.6)).norm() < 1e-15);
    }

    #[test]
    fn v_contour_independence_and_resolution() {
        let p = AfePolynomial::new(2, 1.0);
        for cfg in [AfeConfig::unit_gaussian(), AfeConfig::default()] {
            for y in [0.5, 3.0, 40.0] {
                let a = v_weight_line(y, 1.0, c(20.0), &p, &cfg, 0.25).unwrap();
                let b = v_weight_line(y, 1.0, c(20.0), &p, &cfg, 0.5).unwrap();
                assert!((a - b).norm() < 1e-10, "{y}: {a} vs {b}");
                let fine = AfeConfig { density: cfg.density * 2.0, ..cfg };
                let d = v_weight_line(y, 1.0, c(20.0), &p, &fine, 0.5).unwrap();
                assert!((d - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn v_main_term_error_shrinks() {
        let ctx = PrecisionContext::default();
        let p = AfePolynomial::new(2, 0.0);
        let e30 = (v_weight(1.0, 0.0, 30.0, &p, &ctx).unwrap() - v_main_term(1.0, 0.0, 30.0, &p).unwrap()).norm();
        let e60 = (v_weight(1.0, 0.0, 60.0, &p, &ctx).unwrap() - v_main_term(1.0, 0.0, 60.0, &p).unwrap()).norm();
        assert!(e30 * 30.0 < 1.0, "{e30}");
        assert!(e60 < 0.75 * e30, "{e30} {e60}");
    }

    #[test]
    fn window_split_is_exact_for_main_terms() {
        let ctx = PrecisionContext::default();
        let p = AfePolynomial::new(2, 1.0);
        for yy in [-1.0, 0.5, 2.0] {
            let sp = v_split(2.0, 1.0, 40.0, 2.0, yy, &p, &ctx).unwrap();
            let m = v_main_term(2.0, 1.0, 40.0 + 2.0 * yy, &p).unwrap();
            assert!((sp.v_center + sp.v_tilde - m).norm() < 1e-12);
            assert!((sp.full - m).norm() < 0.05);
        }
    }

    /// `Π_p ((1 − p^{−s})(1 − (λ(p)² − 2)p^{−s} + p^{−2s}))^{−1}` over the
    /// stored primes; uses `λ(p)` only.
    fn euler_oracle(f: &MaassForm, s: Complex64) -> Complex64 {
        let n = f.n_max();
        let mut prod = c(1.0);
        for p in (2..=n).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)) {
            let x = (-s * (p as f64).ln()).exp();
            let l = f.lambda(p).unwrap();
            prod /= (1.0 - x) * (1.0 - (l * l - 2.0) * x + x * x);
        }
        prod
    }

    #[test]
    fn afe_matches_euler_product_right_of_the_strip() {
        let ctx = PrecisionContext::default();
        let forms = crate::maass::bundled_catalog().forms;
        for f in forms.iter().take(5) {
            for (s, tol) in [(Complex64::new(3.0, 0.0), 1e-6), (Complex64::new(3.0, 2.0), 1e-6), (Complex64::new(2.0, 0.0), 2e-3)] {
                let afe = sym2_l_poly(f, s, &AfePolynomial::new(2, s.im / 2.0), &ctx).unwrap();
                assert_eq!(afe.method, Sym2Method::Afe);
                let o = euler_oracle(f, s);
                assert!((afe.value - o).norm() <= tol * o.norm(), "t_j {} s {s}: {} vs {o}", f.t_j(), afe.value);
            }
        }
    }

    #[test]
    fn short_supply_is_a_coverage_error_naming_the_length() {
        let ctx = PrecisionContext::default();
        let f = &crate::maass::bundled_catalog().forms[10];
        let mut rec = f.to_record();
        rec.coefficients.retain(|&(n, _)| n <= 12);
        let short = MaassForm::from_record(&rec, 1).unwrap();
        // λ(m²) comes from λ(p) through the Hecke relations
        assert_eq!(short.square_supply(), 12);
        let s = Complex64::new(0.5, 2.0);
        match sym2_l(&short, s, &ctx) {
            Err(Error::Coverage { required_n: Some(n), message }) => {
                assert!(n > 12, "{message}");
                assert!(message.contains(&n.to_string()));
            }
            other => panic!("{other:?}"),
        }
        assert!(sym2_l(f, s, &ctx).is_ok());
        assert!(matches!(sym2_l_direct(f, s, None), Err(Error::Domain(_))));
        assert!(matches!(sym2_l_direct(&short, c(2.0), Some(13)), Err(Error::Coverage { required_n: Some(13), .. })));
    }
}
