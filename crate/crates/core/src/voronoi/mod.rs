//! Voronoi summation for `𝓛_n(1/2+2it)` twisted by `e(an/c)`, `4 | c`.
//!
//! The dual side carries the theta multiplier of the frame, Bessel kernels
//! of order `2it` applied to the test function, and two residue terms from
//! the poles of the underlying half-integral weight Eisenstein series.

use crate::oscint::{adaptive_panels, gauss_legendre, gl_composite, QuadOptions};
use crate::specfun::bessel::{bessel_fg_raw, bessel_k_imag_raw};
use crate::specfun::gamma::gamma_unchecked;
use crate::specfun::zeta::zeta;
use crate::zagier::arith::jacobi;
use crate::zagier::zagier_l;
use crate::{Complex64, Error, PrecisionContext, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[cfg(test)]
mod tests;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `e(x) = exp(2πix)`.
pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x.rem_euclid(1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BumpKind {
    /// Gaussian profile tapered by `(1−u²)^order`.
    GaussianBump,
    /// `(1−u²)^order`.
    CompactPolyBump,
}

/// Bump supported on `(x0, x1)`, written in the local coordinate
/// `u = (2x − x0 − x1)/(x1 − x0) ∈ (−1, 1)`.  The profile is `C^{order−1}`
/// at the ends of the support.  With `reflected` set the function is
/// `x ↦ bump(−x)`, supported on `(−x1, −x0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VoronoiTestFn {
    pub kind: BumpKind,
    pub support: (f64, f64),
    pub order: u32,
    /// Gaussian centre and width in the `u` coordinate.
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
    pub reflected: bool,
}

impl VoronoiTestFn {
    pub fn gaussian_bump(x0: f64, x1: f64) -> Result<Self> {
        Self::new(BumpKind::GaussianBump, x0, x1, 10, 0.0, 0.3)
    }

    pub fn compact_poly_bump(x0: f64, x1: f64, order: u32) -> Result<Self> {
        Self::new(BumpKind::CompactPolyBump, x0, x1, order, 0.0, 1.0)
    }

    pub fn new(kind: BumpKind, x0: f64, x1: f64, order: u32, center: f64, width: f64) -> Result<Self> {
        if !(x0 > 0.0 && x1 > x0 && x1.is_finite()) {
            return Err(Error::domain(format!("support ({x0}, {x1}) must satisfy 0 < x0 < x1")));
        }
        if order < 9 {
            return Err(Error::domain(format!("order {order} gives fewer than 8 continuous derivatives")));
        }
        if !(width > 0.0) || !(center.abs() < 1.0) {
            return Err(Error::domain(format!("need width > 0 and |center| < 1, got {width}, {center}")));
        }
        Ok(VoronoiTestFn {
            kind,
            support: (x0, x1),
            order,
            center,
            width,
            amplitude: 1.0,
            reflected: false,
        })
    }

    pub fn scaled(mut self, amplitude: f64) -> Self {
        self.amplitude *= amplitude;
        self
    }

    pub fn reflected(mut self) -> Self {
        self.reflected = !self.reflected;
        self
    }

    /// Profile on the positive half line, ignoring `reflected`.
    fn profile(&self, x: f64) -> f64 {
        let (x0, x1) = self.support;
        if x <= x0 || x >= x1 {
            return 0.0;
        }
        let u = (2.0 * x - x0 - x1) / (x1 - x0);
        let taper = (1.0 - u * u).powi(self.order as i32);
        self.amplitude
            * match self.kind {
                BumpKind::CompactPolyBump => taper,
                BumpKind::GaussianBump => {
                    let v = (u - self.center) / self.width;
                    taper * (-v * v).exp()
                }
            }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.reflected {
            self.profile(-x)
        } else {
            self.profile(x)
        }
    }

    /// Support of `x ↦ φ(±x)` on the positive half line, if nonempty.
    fn half_support(&self, sign: Sign) -> Option<(f64, f64)> {
        (self.reflected == (sign == Sign::Minus)).then_some(self.support)
    }

}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn f(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// How `d` is chosen from `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DLift {
    /// `d = a^{−1} mod c` in `(0, c)`.
    #[default]
    Reduced,
    /// `d + c` for the reduced `d`; also odd, positive and `ad ≡ 1 (mod 4)`.
    Shifted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaFrame {
    pub c: u64,
    pub a: i64,
    pub d: u64,
}

impl ThetaFrame {
    pub fn new(c: u64, a: i64) -> Result<Self> {
        Self::with_lift(c, a, DLift::Reduced)
    }

    pub fn with_lift(c: u64, a: i64, lift: DLift) -> Result<Self> {
        if c == 0 || !c.is_multiple_of(4) {
            return Err(Error::domain(format!("c = {c} must be a positive multiple of 4")));
        }
        let ar = a.rem_euclid(c as i64) as u64;
        if gcd(ar, c) != 1 {
            return Err(Error::domain(format!("gcd({a}, {c}) != 1")));
        }
        let d = inverse_mod(ar, c);
        let d = match lift {
            DLift::Reduced => d,
            DLift::Shifted => d + c,
        };
        Ok(ThetaFrame { c, a, d })
    }
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(m as i128) as u64
}

/// `ε̄_d (c/d)`.
pub fn theta_multiplier(fr: &ThetaFrame) -> Complex64 {
    let eps_bar = if fr.d % 4 == 1 { c(1.0, 0.0) } else { c(0.0, -1.0) };
    eps_bar * jacobi(fr.c as i64, fr.d) as f64
}

/// `Θ₀(c, n) = Σ_{a mod c, (a,c)=1} ϑ e(−dn/c)`.
pub fn theta_sum(c: u64, n: i64) -> Result<Complex64> {
    let mut s = Complex64::new(0.0, 0.0);
    for a in 1..c {
        if gcd(a, c) != 1 {
            continue;
        }
        let fr = ThetaFrame::new(c, a as i64)?;
        let k = ((fr.d as i128 * n as i128).rem_euclid(c as i128)) as f64;
        s += theta_multiplier(&fr) * e(-k / c as f64);
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelTag {
    PlusPlus,
    MinusMinus,
    MinusPlus,
    PlusMinus,
}

impl KernelTag {
    /// Kernel of `φ̂^{side}(±y)`.
    pub fn for_transform(side: Sign, arg: Sign) -> Self {
        match (arg, side) {
            (Sign::Plus, Sign::Plus) => KernelTag::PlusPlus,
            (Sign::Minus, Sign::Minus) => KernelTag::MinusMinus,
            (Sign::Minus, Sign::Plus) => KernelTag::MinusPlus,
            (Sign::Plus, Sign::Minus) => KernelTag::PlusMinus,
        }
    }

    fn oscillates(self) -> bool {
        matches!(self, KernelTag::PlusPlus | KernelTag::MinusMinus)
    }
}

/// `1/(Γ(1/4 ± it)Γ(3/4 ∓ it))`, upper sign for `(−,+)`.
fn k_kernel_factor(tag: KernelTag, t: f64) -> Complex64 {
    let s = if tag == KernelTag::MinusPlus { 1.0 } else { -1.0 };
    // Γ(w)Γ(1−w) = π/sin(πw) with w = 1/4 + ist
    (c(PI * 0.25, PI * s * t)).sin() / PI
}

/// `Φ^{tag}(z)` at real order `2it`.
pub fn phi_kernel(tag: KernelTag, z: f64, t: f64, ctx: &PrecisionContext) -> Result<Complex64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("kernel argument z = {z} must be positive")));
    }
    let x = 2.0 * z.sqrt();
    let ta = t.abs();
    match tag {
        KernelTag::PlusPlus | KernelTag::MinusMinus => {
            let fg = bessel_fg_raw(ta, x, ctx)?;
            let r = (0.5 * z).sqrt();
            Ok(c(if tag == KernelTag::PlusPlus { r * (fg.f - fg.g) } else { -r * (fg.f + fg.g) }, 0.0))
        }
        KernelTag::MinusPlus | KernelTag::PlusMinus => {
            let k = bessel_k_imag_raw(ta, x, ctx)? * (-PI * ta).exp();
            Ok(k_kernel_factor(tag, t) * (x * k))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformDirection {
    MellinPlus,
    MellinMinus,
    HatPlusPos,
    HatPlusNeg,
    HatMinusPos,
    HatMinusNeg,
}

impl TransformDirection {
    fn side(self) -> Sign {
        match self {
            TransformDirection::MellinPlus | TransformDirection::HatPlusPos | TransformDirection::HatPlusNeg => Sign::Plus,
            _ => Sign::Minus,
        }
    }
}

fn bump_breaks(lo: f64, hi: f64, panels: usize) -> Vec<f64> {
    (0..=panels).map(|k| lo + (hi - lo) * k as f64 / panels as f64).collect()
}

/// `φ^{±}(s) = ∫_0^∞ φ(±x) x^{s−1} dx`.
pub fn mellin(phi: &VoronoiTestFn, sign: Sign, s: Complex64) -> Complex64 {
    let Some((lo, hi)) = phi.half_support(sign) else {
        return Complex64::new(0.0, 0.0);
    };
    let panels = 16 + (((hi / lo).ln() * s.im.abs()) as usize);
    let mut f = |x: f64| phi.profile(x) * (c(x.ln(), 0.0) * (s - 1.0)).exp();
    gl_composite(&mut f, lo, hi, panels, gauss_legendre(30))
}

/// Hat transform `∫_0^∞ φ(±x)/x · Φ(xy) dx` with an error estimate.
pub fn hat_transform(
    phi: &VoronoiTestFn,
    side: Sign,
    arg: Sign,
    y: f64,
    t: f64,
    ctx: &PrecisionContext,
) -> Result<(Complex64, f64)> {
    if !(y > 0.0) {
        return Err(Error::domain(format!("hat transform needs y > 0, got {y}")));
    }
    let Some((lo, hi)) = phi.half_support(side) else {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    };
    if phi.amplitude == 0.0 {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let tag = KernelTag::for_transform(side, arg);
    if !tag.oscillates() && 2.0 * (lo * y).sqrt() > 2.0 * t.abs() + 60.0 {
        // K_{2it}(x) ≤ e^{−x}·√(π/2x)·(1+...) is far below double precision
        let bound = (-2.0 * (lo * y).sqrt()).exp() * (hi / lo).ln() * (lo * y).sqrt();
        return Ok((Complex64::new(0.0, 0.0), bound));
    }
    // phase 2√(xy) changes by at most one radian per panel
    let phase = 2.0 * y.sqrt() * (hi.sqrt() - lo.sqrt());
    let panels = 12 + if tag.oscillates() { phase.ceil() as usize } else { 0 };
    let breaks = bump_breaks(lo, hi, panels);
    let mut err: Option<Error> = None;
    let mut f = |x: f64| match phi_kernel(tag, x * y, t, ctx) {
        Ok(k) => k * (phi.profile(x) / x),
        Err(e) => {
            err.get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    };
    let scale = phi.amplitude.abs() * (hi / lo).ln() * (hi * y).powf(0.25);
    let r = adaptive_panels(&mut f, &breaks, QuadOptions::new(1e-13).with_abs(1e-15 * scale).with_budget(200_000))?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok((r.value, r.abs_error_estimate))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TransformArg {
    Complex(Complex64),
    Real(f64),
}

/// Dispatch over the six transforms: Mellin transforms take a complex `s`,
/// the hat transforms a positive `y`.
pub fn transform_phi(
    phi: &VoronoiTestFn,
    direction: TransformDirection,
    arg: TransformArg,
    t: f64,
    ctx: &PrecisionContext,
) -> Result<Complex64> {
    let side = direction.side();
    match (direction, arg) {
        (TransformDirection::MellinPlus | TransformDirection::MellinMinus, TransformArg::Complex(s)) => {
            Ok(mellin(phi, side, s))
        }
        (TransformDirection::MellinPlus | TransformDirection::MellinMinus, TransformArg::Real(s)) => {
            Ok(mellin(phi, side, c(s, 0.0)))
        }
        (_, TransformArg::Real(y)) => {
            let sgn = match direction {
                TransformDirection::HatPlusPos | TransformDirection::HatMinusPos => Sign::Plus,
                _ => Sign::Minus,
            };
            Ok(hat_transform(phi, side, sgn, y, t, ctx)?.0)
        }
        (_, TransformArg::Complex(z)) => Err(Error::domain(format!("hat transforms take a positive real, got {z}"))),
    }
}

/// The two summands of `𝓡_±(c, t)`.
pub fn residue_parts(phi: &VoronoiTestFn, c_mod: u64, t: f64, sign: Sign) -> Result<(Complex64, Complex64)> {
    if t == 0.0 {
        return Err(Error::pole("residue terms have a pole of ζ(1±4it) at t = 0"));
    }
    let cf = c_mod as f64;
    let it = c(0.0, t);
    let first = (it * (4.0 * 2f64.ln())).exp() * mellin(phi, sign, 0.5 + it) * zeta(1.0 + 4.0 * it)?
        / (c(cf.ln(), 0.0) * (1.0 + 2.0 * it)).exp();
    let q = (2.0 + sign.f()) / 4.0;
    let ratio = gamma_unchecked(q + it) * gamma_unchecked(0.5 - 2.0 * it)
        / (gamma_unchecked(q - it) * gamma_unchecked(0.5 + 2.0 * it));
    let second = (it * (2.0 * PI.ln())).exp() * mellin(phi, sign, 0.5 - it) * zeta(1.0 - 4.0 * it)?
        / (c(cf.ln(), 0.0) * (1.0 - 2.0 * it)).exp()
        * ratio;
    Ok((first, second))
}

pub fn residue_terms(phi: &VoronoiTestFn, c_mod: u64, t: f64, sign: Sign) -> Result<Complex64> {
    let (a, b) = residue_parts(phi, c_mod, t, sign)?;
    Ok(a + b)
}

/// `𝓛_n(1/2+2it)/|n|^{1/2−it}`, zero unless `n ≡ 0, 1 (mod 4)`.
pub fn normalized_l(n: i64, t: f64, ctx: &PrecisionContext) -> Result<Complex64> {
    if n == 0 || !matches!(n.rem_euclid(4), 0 | 1) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let l = zagier_l(n, c(0.5, 2.0 * t), ctx)?;
    let m = n.unsigned_abs() as f64;
    Ok(l * (c(0.5, -t) * -m.ln()).exp())
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Stopping rule for the dual sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VoronoiTruncation {
    /// Terms below `rel_tol · max(|LHS|, largest term)` count as quiet.
    pub rel_tol: f64,
    /// Consecutive quiet terms (with `n ≡ 0, 1 mod 4`) that end the sum.
    pub quiet_terms: usize,
    pub max_n: u64,
}

impl Default for VoronoiTruncation {
    fn default() -> Self {
        VoronoiTruncation {
            rel_tol: 1e-13,
            quiet_terms: 12,
            max_n: 20_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualTerm {
    pub n: i64,
    pub hat: Complex64,
    pub hat_error: f64,
    pub term: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualSum {
    pub value: Complex64,
    /// Sum of `|term|` over the final quiet stretch.
    pub tail_estimate: f64,
    pub quadrature_error: f64,
    pub last_n: u64,
    pub converged: bool,
    pub terms: Vec<DualTerm>,
}

/// `Σ_{±n > 0} φ̂(4π²n/c²) e(−dn/c) 𝓛_n/|n|^{1/2−it}` over one sign of `n`.
fn dual_half(
    phi: &VoronoiTestFn,
    fr: &ThetaFrame,
    side: Sign,
    arg: Sign,
    t: f64,
    scale: f64,
    trunc: &VoronoiTruncation,
    ctx: &PrecisionContext,
) -> Result<DualSum> {
    const BLOCK: u64 = 32;
    let cf = fr.c as f64;
    let mut out = DualSum {
        value: Complex64::new(0.0, 0.0),
        tail_estimate: 0.0,
        quadrature_error: 0.0,
        last_n: 0,
        converged: false,
        terms: Vec::new(),
    };
    let mut peak = scale;
    let mut quiet = 0usize;
    let mut quiet_mass = 0.0;
    let mut start = 1u64;
    while start <= trunc.max_n {
        let end = (start + BLOCK - 1).min(trunc.max_n);
        let block: Vec<Result<Option<DualTerm>>> = (start..=end)
            .into_par_iter()
            .map(|m| {
                let n = arg.f() as i64 * m as i64;
                let l = normalized_l(n, t, ctx)?;
                if l == Complex64::new(0.0, 0.0) {
                    return Ok(None);
                }
                let y = 4.0 * PI * PI * m as f64 / (cf * cf);
                let (hat, hat_error) = hat_transform(phi, side, arg, y, t, ctx)?;
                let k = ((fr.d as i128 * n as i128).rem_euclid(fr.c as i128)) as f64;
                let term = hat * e(-k / cf) * l;
                Ok(Some(DualTerm {
                    n,
                    hat,
                    hat_error: hat_error * l.norm(),
                    term,
                }))
            })
            .collect();
        for r in block {
            let Some(term) = r? else { continue };
            out.value += term.term;
            out.quadrature_error += term.hat_error;
            out.last_n = term.n.unsigned_abs();
            let size = term.term.norm();
            peak = peak.max(size);
            if size <= trunc.rel_tol * peak {
                quiet += 1;
                quiet_mass += size;
            } else {
                quiet = 0;
                quiet_mass = 0.0;
            }
            out.terms.push(term);
            if quiet >= trunc.quiet_terms {
                out.converged = true;
                out.tail_estimate = quiet_mass;
                return Ok(out);
            }
        }
        start = end + 1;
    }
    out.tail_estimate = peak;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoronoiSide {
    PositiveN,
    NegativeN,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LhsTerm {
    pub n: i64,
    pub phi: f64,
    pub term: Complex64,
}

/// Both sides of the Voronoi formula for one frame, sign of `n` and `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VoronoiReport {
    pub c: u64,
    pub a: i64,
    pub d: u64,
    pub side: VoronoiSide,
    pub t: f64,
    pub phi: VoronoiTestFn,
    pub theta: Complex64,
    pub lhs: Complex64,
    pub lhs_terms: Vec<LhsTerm>,
    pub residue: Complex64,
    pub residue_parts: (Complex64, Complex64),
    pub dual_positive: DualSum,
    pub dual_negative: DualSum,
    pub rhs: Complex64,
    pub residual: f64,
    pub relative_residual: f64,
    /// Tail estimates plus quadrature errors of the dual side.
    pub error_estimate: f64,
    pub warning: Option<String>,
}

impl VoronoiReport {
    /// Same report without the per-term lists.
    pub fn summary(&self) -> VoronoiReport {
        let mut r = self.clone();
        r.lhs_terms.clear();
        r.dual_positive.terms.clear();
        r.dual_negative.terms.clear();
        r
    }
}

/// Evaluates both sides of the formula; for `negative_n` the bump is
/// placed on the negative axis (`φ(x) = bump(−x)`) unless it already is.
pub fn verify_voronoi(
    phi: &VoronoiTestFn,
    fr: &ThetaFrame,
    side: VoronoiSide,
    t: f64,
    trunc: &VoronoiTruncation,
    ctx: &PrecisionContext,
) -> Result<VoronoiReport> {
    let sign = match side {
        VoronoiSide::PositiveN => Sign::Plus,
        VoronoiSide::NegativeN => Sign::Minus,
    };
    let phi = if phi.half_support(sign).is_some() { *phi } else { phi.reflected() };
    let cf = fr.c as f64;
    let (lo, hi) = phi.support;
    let mut lhs_terms = Vec::new();
    let mut lhs = Complex64::new(0.0, 0.0);
    for m in (lo.floor() as i64).max(1)..=(hi.ceil() as i64) {
        let w = phi.profile(m as f64);
        if w == 0.0 {
            continue;
        }
        let n = sign.f() as i64 * m;
        let l = normalized_l(n, t, ctx)?;
        if l == Complex64::new(0.0, 0.0) {
            continue;
        }
        let k = ((fr.a as i128 * n as i128).rem_euclid(fr.c as i128)) as f64;
        let term = e(k / cf) * l * w;
        lhs += term;
        lhs_terms.push(LhsTerm { n, phi: w, term });
    }
    let theta = theta_multiplier(fr);
    let pref = theta * e(0.125);
    let rp = residue_parts(&phi, fr.c, t, sign)?;
    let residue = rp.0 + rp.1;
    let scale = lhs.norm().max(residue.norm());
    let (dp, dn) = rayon::join(
        || dual_half(&phi, fr, sign, Sign::Plus, t, scale, trunc, ctx),
        || dual_half(&phi, fr, sign, Sign::Minus, t, scale, trunc, ctx),
    );
    let (dp, dn) = (dp?, dn?);
    let rhs = pref * (2f64.sqrt() * residue + dp.value + dn.value);
    let residual = (lhs - rhs).norm();
    let denom = lhs.norm().max(rhs.norm());
    let relative_residual = if denom > 0.0 { residual / denom } else { residual };
    let error_estimate = dp.tail_estimate + dn.tail_estimate + dp.quadrature_error + dn.quadrature_error;
    let warning = (!dp.converged || !dn.converged).then(|| {
        format!("dual sum is tail-dominated: no quiet stretch before n = {}", trunc.max_n)
    });
    Ok(VoronoiReport {
        c: fr.c,
        a: fr.a,
        d: fr.d,
        side,
        t,
        phi,
        theta,
        lhs,
        lhs_terms,
        residue,
        residue_parts: rp,
        dual_positive: dp,
        dual_negative: dn,
        rhs,
        residual,
        relative_residual,
        error_estimate,
        warning,
    })
}

/// The three test functions of the verification campaign.
pub fn standard_bumps() -> Vec<VoronoiTestFn> {
    let mk = |r: Result<VoronoiTestFn>| r.expect("fixed parameters are valid");
    vec![
        mk(VoronoiTestFn::gaussian_bump(50.0, 100.0)),
        mk(VoronoiTestFn::compact_poly_bump(50.0, 100.0, 12)),
        mk(VoronoiTestFn::new(BumpKind::GaussianBump, 40.0, 120.0, 9, 0.2, 0.25)),
    ]
}
