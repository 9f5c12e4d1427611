//! The exact first moment of `λ_j(m²) L(sym² u_j, ρ)` on `ℜρ = 1/2`:
//! spectral side from a catalog, the arithmetic side `MT + CT + ET + S₁ + S₂`,
//! and the window second moment computed from AFE values.

mod transform;

pub use transform::{lemma_decay_point, RGrid, WINDOW_G};

use crate::maass::{sym2_l, MaassForm, SpectralWeight, WeightConvention};
use crate::specfun::ln_gamma;
use crate::specfun::zeta::zeta;
use crate::zagier::{tau_nu, zagier_l};
use crate::{Complex64, Error, PrecisionContext, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub t: f64,
    pub rho: Complex64,
}

impl CriticalPoint {
    /// `ρ = 1/2 + 2it`.
    pub fn new(t: f64) -> Self {
        CriticalPoint {
            t,
            rho: Complex64::new(0.5, 2.0 * t),
        }
    }
}

/// A value with its truncation/quadrature error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub value: Complex64,
    pub tolerance: f64,
}

impl Component {
    fn new(value: Complex64, tolerance: f64) -> Self {
        Component { value, tolerance }
    }
}

/// One `n` of `S₁` or `S₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub n: u64,
    pub x: f64,
    pub zagier: Complex64,
    pub i_value: Complex64,
    pub term: Complex64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArithmeticSide {
    pub m: u64,
    pub mt: Component,
    pub ct: Component,
    pub et: Component,
    pub s1: Component,
    pub s2: Component,
    pub s1_terms: Vec<SeriesTerm>,
    pub s2_terms: Vec<SeriesTerm>,
    /// Last `n` summed in `S₂`.
    pub s2_cutoff: u64,
    /// `x₀ = T^{1.1}√(1+|t|)` where the `T^{−A}` decay is expected.
    pub decay_point: f64,
}

impl ArithmeticSide {
    pub fn total(&self) -> Complex64 {
        self.mt.value + self.ct.value + self.et.value + self.s1.value + self.s2.value
    }
}

/// How far `S₂` runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct S2Truncation {
    /// Stop once this many consecutive terms are below `rel · scale` (or
    /// below twice their own error estimate).
    pub quiet_terms: u32,
    pub rel: f64,
    /// Sum at least up to this multiple of the automatic cutoff.
    pub stretch: f64,
    pub max_n: u64,
}

impl Default for S2Truncation {
    fn default() -> Self {
        S2Truncation {
            quiet_terms: 4,
            rel: 1e-14,
            stretch: 1.0,
            max_n: 20_000,
        }
    }
}

/// `(2π)^{ρ−1} n^{ρ−1} 𝓛_{n²−4m²}(ρ)`.
fn series_weight(m: u64, n: u64, rho: Complex64, ctx: &PrecisionContext) -> Result<Complex64> {
    let d = (n * n) as i64 - 4 * (m * m) as i64;
    let l = zagier_l(d, rho, ctx)?;
    Ok(((rho - 1.0) * (2.0 * PI * n as f64).ln()).exp() * l)
}

fn series_term(grid: &RGrid, m: u64, n: u64, ctx: &PrecisionContext) -> Result<SeriesTerm> {
    let rho = grid.cp.rho;
    let x = n as f64 / m as f64;
    let d = (n * n) as i64 - 4 * (m * m) as i64;
    let zl = zagier_l(d, rho, ctx)?;
    let pre = ((rho - 1.0) * (2.0 * PI * n as f64).ln()).exp() * zl;
    let iv = grid.i_transform(x, ctx)?;
    Ok(SeriesTerm {
        n,
        x,
        zagier: zl,
        i_value: iv.value,
        term: pre * iv.value,
        tolerance: pre.norm() * iv.abs_error_estimate + 1e-15 * (pre * iv.value).norm(),
    })
}

fn attribute<T>(what: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Domain(s) => Error::Domain(format!("{what}: {s}")),
        Error::Pole(s) => Error::Pole(format!("{what}: {s}")),
        Error::Precision(s) => Error::Precision(format!("{what}: {s}")),
        other => other,
    })
}

/// `MT`, `CT`, `ET`, `S₁`, `S₂` at `(m, ρ, h)`.
pub fn arithmetic_side(m: u64, cp: CriticalPoint, w: &SpectralWeight, ctx: &PrecisionContext) -> Result<ArithmeticSide> {
    let grid = RGrid::new(w, cp, ctx)?;
    arithmetic_side_on(&grid, m, S2Truncation::default(), ctx)
}

pub fn arithmetic_side_on(grid: &RGrid, m: u64, trunc: S2Truncation, ctx: &PrecisionContext) -> Result<ArithmeticSide> {
    if m == 0 {
        return Err(Error::domain("m must be positive"));
    }
    let mt = attribute("MT", main_term(grid, m, ctx))?;
    let ct = attribute("CT", continuous_term(grid, m))?;
    let et = attribute("ET", extra_term(grid, m, ctx))?;
    let (s1, s1_terms) = attribute("S1", s1_series(grid, m, ctx))?;
    let scale = [mt.value, ct.value, et.value, s1.value].iter().map(|v| v.norm()).fold(0.0, f64::max);
    let (s2, s2_terms, s2_cutoff) = attribute("S2", s2_series(grid, m, trunc, scale, ctx))?;
    Ok(ArithmeticSide {
        m,
        mt,
        ct,
        et,
        s1,
        s2,
        s1_terms,
        s2_terms,
        s2_cutoff,
        decay_point: lemma_decay_point(grid.weight.big_t.abs(), grid.cp.t),
    })
}

/// `MT = ζ(2ρ)/(π² m^ρ) ∫ r h tanh(πr) dr + (2π)^{ρ−1} ζ(2ρ−1) I(2,ρ;h) / (2m)^{1−ρ}`.
pub fn main_term(grid: &RGrid, m: u64, ctx: &PrecisionContext) -> Result<Component> {
    let rho = grid.cp.rho;
    let mf = m as f64;
    let tanh: Vec<Complex64> = grid.nodes().iter().map(|&r| c(r * (PI * r).tanh())).collect();
    let j = grid.sum(&tanh);
    let a1 = zeta(2.0 * rho)? / (PI * PI) * (-rho * mf.ln()).exp();
    let i2 = grid.i_transform(2.0, ctx)?;
    let f2 = ((rho - 1.0) * (2.0 * PI).ln()).exp() * zeta(2.0 * rho - 1.0)? * ((rho - 1.0) * (2.0 * mf).ln()).exp();
    Ok(Component::new(
        a1 * j.value + f2 * i2.value,
        a1.norm() * j.abs_error_estimate + f2.norm() * i2.abs_error_estimate,
    ))
}

/// `τ_{ir}(m²) ζ(ρ+2ir) ζ(ρ−2ir) / |ζ(1+2ir)|²`, even in `r`.
pub fn ct_integrand(m: u64, rho: Complex64, r: f64) -> Result<Complex64> {
    let tau = tau_nu(m * m, I * r);
    let z1 = zeta(rho + 2.0 * I * r)?;
    let z2 = zeta(rho - 2.0 * I * r)?;
    let d = zeta(Complex64::new(1.0, 2.0 * r))?.norm_sqr();
    Ok(tau * z1 * z2 / d)
}

/// `CT = −ζ(ρ)/π ∫ (…) h(r) dr`, integrated on `r > 0` and doubled.
pub fn continuous_term(grid: &RGrid, m: u64) -> Result<Component> {
    let rho = grid.cp.rho;
    let f: Vec<Complex64> = grid
        .positive_nodes()
        .par_iter()
        .map(|&r| ct_integrand(m, rho, r))
        .collect::<Result<_>>()?;
    let j = grid.sum_even(&f);
    let pre = -zeta(rho)? / PI;
    Ok(Component::new(pre * j.value, pre.norm() * j.abs_error_estimate))
}

/// `ET`: the `h((1−ρ)/2i)` term plus the `𝓛_{−4m²}(ρ)` integral.
pub fn extra_term(grid: &RGrid, m: u64, ctx: &PrecisionContext) -> Result<Component> {
    let rho = grid.cp.rho;
    let w = &grid.weight;
    let mf = m as f64;
    let h_pt = w.h_eval((1.0 - rho) / (2.0 * I), ctx)?;
    let e1 = -2.0 * zeta(2.0 * rho - 1.0)? / zeta(2.0 - rho)? * tau_nu(m * m, (1.0 - rho) / 2.0) * h_pt;
    let lz = zagier_l(-4 * (m * m) as i64, rho, ctx)?;
    let pre = lz * ((1.0 - rho) * 2f64.ln()).exp() * I / (((1.0 - rho) * (4.0 * PI * mf).ln()).exp() * PI);
    let a = 0.5 - rho / 2.0;
    let f = grid.tabulate(|r| {
        let ir = I * r;
        let lg = ln_gamma(a + ir) - ln_gamma(0.5 + rho / 2.0 + ir);
        Ok(c(r / (PI * r).cosh()) * lg.exp())
    })?;
    let j = grid.sum(&f);
    Ok(Component::new(e1 + pre * j.value, pre.norm() * j.abs_error_estimate + 1e-15 * e1.norm()))
}

/// `S₁`: `n = 1, …, 2m−1`.
pub fn s1_series(grid: &RGrid, m: u64, ctx: &PrecisionContext) -> Result<(Component, Vec<SeriesTerm>)> {
    let terms = (1..2 * m).map(|n| series_term(grid, m, n, ctx)).collect::<Result<Vec<_>>>()?;
    let comp = Component::new(terms.iter().map(|t| t.term).sum(), terms.iter().map(|t| t.tolerance).sum());
    Ok((comp, terms))
}

/// `S₂`: `n ≥ 2m+1` until the terms have decayed for good.  `scale` is the
/// size of the other components; returns the last `n` summed.
pub fn s2_series(grid: &RGrid, m: u64, trunc: S2Truncation, scale: f64, ctx: &PrecisionContext) -> Result<(Component, Vec<SeriesTerm>, u64)> {
    let mut terms: Vec<SeriesTerm> = Vec::new();
    let mut quiet = 0;
    let mut n = 2 * m + 1;
    let mut auto_cut: Option<u64> = None;
    let mut peak = scale;
    loop {
        if n > trunc.max_n {
            return Err(Error::Coverage {
                message: format!("S2 did not decay by n = {}", trunc.max_n),
                required_n: None,
            });
        }
        let term = series_term(grid, m, n, ctx)?;
        peak = peak.max(term.term.norm());
        // a term is spent once it is negligible or lost in its own quadrature noise
        let small = term.term.norm() <= (trunc.rel * peak).max(2.0 * term.tolerance);
        terms.push(term);
        quiet = if small { quiet + 1 } else { 0 };
        if auto_cut.is_none() && quiet >= trunc.quiet_terms {
            auto_cut = Some(n);
        }
        if let Some(cut) = auto_cut {
            if n as f64 >= cut as f64 * trunc.stretch {
                break;
            }
        }
        n += 1;
    }
    let k = terms.len();
    let last = terms[k - 1].term.norm();
    let prev = terms[k.saturating_sub(2)].term.norm().max(1e-300);
    let q = last / prev;
    let tail = if k >= 2 && q < 0.9 { last * q / (1.0 - q) } else { 10.0 * last };
    let comp = Component::new(
        terms.iter().map(|t| t.term).sum(),
        terms.iter().map(|t| t.tolerance).sum::<f64>() + tail,
    );
    Ok((comp, terms, n))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralSide {
    pub value: Complex64,
    /// AFE truncation errors of the summed terms.
    pub tolerance: f64,
    /// Bound for forms beyond the catalog, from the Gaussian decay of `h`.
    pub tail_bound: f64,
    pub forms_used: usize,
    pub catalog_t_max: f64,
}

/// Crude majorant of `α_j |λ_j(m²)| |L(sym² u_j, ρ)|` for forms beyond the
/// catalog: `α ≤ 10`, `|λ(m²)| ≤ d(m²)`, `|L| ≤ 10·(t_j²(1+|ρ|))^{1/2}`.
fn term_majorant(t_j: f64, m: u64, rho: Complex64) -> f64 {
    let d = crate::zagier::arith::divisors(m * m).len() as f64;
    10.0 * d * 10.0 * (t_j * t_j * (1.0 + rho.norm())).sqrt()
}

/// `Σ_{t>t_max} |h(t)| · majorant` with Weyl density `t/6`, summed out to
/// `T + 40G` where the Gaussian is far below double precision.
fn catalog_tail(w: &SpectralWeight, m: u64, rho: Complex64, t_max: f64, ctx: &PrecisionContext) -> Result<f64> {
    let step = w.big_g / 8.0;
    let end = w.big_t.abs() + 40.0 * w.big_g;
    let mut total = 0.0;
    let mut t = t_max;
    while t < end {
        let hv = w.h_eval(c(t + 0.5 * step), ctx)?.norm();
        total += step * (t / 6.0 + 1.0) * hv * term_majorant(t, m, rho);
        t += step;
    }
    Ok(total)
}

/// The catalog sum without the coverage check: `(value, AFE error, forms used)`.
pub fn spectral_sum(
    forms: &[MaassForm],
    m: u64,
    cp: CriticalPoint,
    w: &SpectralWeight,
    conv: WeightConvention,
    ctx: &PrecisionContext,
) -> Result<(Complex64, f64, usize)> {
    // forms whose h is below this cannot matter at double precision
    let negligible = 1e-40;
    let terms: Vec<Option<(Complex64, f64)>> = forms
        .par_iter()
        .map(|f| {
            let hv = w.h_eval(c(f.t_j()), ctx)?;
            if hv.norm() * term_majorant(f.t_j(), m, cp.rho) < negligible {
                return Ok(None);
            }
            let lam = f.lambda_square(m).ok_or_else(|| Error::Coverage {
                message: format!("form t_j = {} has no λ({})", f.t_j(), m * m),
                required_n: Some(m * m),
            })?;
            let l = sym2_l(f, cp.rho, ctx)?;
            let pre = hv * conv.apply(f.weight()) * lam;
            Ok(Some((pre * l.value, pre.norm() * l.truncation_error)))
        })
        .collect::<Result<_>>()?;
    let used: Vec<(Complex64, f64)> = terms.into_iter().flatten().collect();
    Ok((used.iter().map(|t| t.0).sum(), used.iter().map(|t| t.1).sum(), used.len()))
}

/// `Σ_j h(t_j) α_j λ_j(m²) L(sym² u_j, ρ)` over the catalog.
pub fn spectral_side(
    forms: &[MaassForm],
    m: u64,
    cp: CriticalPoint,
    w: &SpectralWeight,
    conv: WeightConvention,
    ctx: &PrecisionContext,
) -> Result<SpectralSide> {
    let t_max = forms.iter().map(|f| f.t_j()).fold(0.0, f64::max);
    let tail_bound = catalog_tail(w, m, cp.rho, t_max, ctx)?;
    let (value, tolerance, forms_used) = spectral_sum(forms, m, cp, w, conv, ctx)?;
    let scale = value.norm().max(1e-300);
    if tail_bound > 1e-8 * scale {
        return Err(Error::Coverage {
            message: format!(
                "catalog stops at t_j = {t_max:.3}; forms beyond it may contribute up to {tail_bound:.2e} (T = {}, G = {})",
                w.big_t, w.big_g
            ),
            required_n: None,
        });
    }
    Ok(SpectralSide {
        value,
        tolerance,
        tail_bound,
        forms_used,
        catalog_t_max: t_max,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub spectral: f64,
    pub mt: f64,
    pub ct: f64,
    pub et: f64,
    pub s1: f64,
    pub s2: f64,
    /// `1e-13 · Σ|component|`, for cancellation in the final difference.
    pub rounding: f64,
    pub combined: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentBreakdown {
    pub m: u64,
    pub t: f64,
    pub weight: SpectralWeight,
    pub convention: WeightConvention,
    pub spectral: Complex64,
    pub mt: Complex64,
    pub ct: Complex64,
    pub et: Complex64,
    pub s1: Complex64,
    pub s2: Complex64,
    pub residual: Complex64,
    pub tolerances: Tolerances,
    pub s2_cutoff: u64,
    pub forms_used: usize,
    pub passed: bool,
}

impl MomentBreakdown {
    fn assemble(w: &SpectralWeight, conv: WeightConvention, t: f64, sp: &SpectralSide, ar: &ArithmeticSide) -> Self {
        let residual = sp.value - (ar.mt.value + ar.ct.value + ar.et.value + ar.s1.value + ar.s2.value);
        let mags = [sp.value, ar.mt.value, ar.ct.value, ar.et.value, ar.s1.value, ar.s2.value];
        let rounding = 1e-13 * mags.iter().map(|v| v.norm()).sum::<f64>();
        let spectral = sp.tolerance + sp.tail_bound;
        let combined = spectral + ar.mt.tolerance + ar.ct.tolerance + ar.et.tolerance + ar.s1.tolerance + ar.s2.tolerance + rounding;
        MomentBreakdown {
            m: ar.m,
            t,
            weight: *w,
            convention: conv,
            spectral: sp.value,
            mt: ar.mt.value,
            ct: ar.ct.value,
            et: ar.et.value,
            s1: ar.s1.value,
            s2: ar.s2.value,
            residual,
            tolerances: Tolerances {
                spectral,
                mt: ar.mt.tolerance,
                ct: ar.ct.tolerance,
                et: ar.et.tolerance,
                s1: ar.s1.tolerance,
                s2: ar.s2.tolerance,
                rounding,
                combined,
            },
            s2_cutoff: ar.s2_cutoff,
            forms_used: sp.forms_used,
            passed: residual.norm() <= combined,
        }
    }

    /// `spectral − (mt + ct + et + s1 + s2)` from the stored fields.
    pub fn recomputed_residual(&self) -> Complex64 {
        self.spectral - (self.mt + self.ct + self.et + self.s1 + self.s2)
    }
}

/// Both sides of the first-moment formula and their difference.
pub fn verify_first_moment(
    forms: &[MaassForm],
    m: u64,
    cp: CriticalPoint,
    w: &SpectralWeight,
    conv: WeightConvention,
    ctx: &PrecisionContext,
) -> Result<MomentBreakdown> {
    let (sp, ar) = rayon::join(|| spectral_side(forms, m, cp, w, conv, ctx), || arithmetic_side(m, cp, w, ctx));
    Ok(MomentBreakdown::assemble(w, conv, cp.t, &sp?, &ar?))
}

/// One window of the second-moment experiment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecondMomentRow {
    pub t: f64,
    #[serde(rename = "T")]
    pub big_t: f64,
    #[serde(rename = "G")]
    pub big_g: f64,
    pub forms: usize,
    /// `Σ_{T<t_j≤T+G} α_j |L(sym² u_j, 1/2+2it)|²`.
    pub sum: f64,
    pub truncation_error: f64,
    /// `sum / (T^{1.1} G)`.
    pub ratio: f64,
}

pub fn second_moment_experiment(forms: &[MaassForm], t: f64, big_t: f64, big_g: f64, ctx: &PrecisionContext) -> Result<SecondMomentRow> {
    if !(big_t > 0.0 && big_g > 0.0) {
        return Err(Error::domain("need T > 0 and G > 0"));
    }
    let t_max = forms.iter().map(|f| f.t_j()).fold(0.0, f64::max);
    if !forms.is_empty() && t_max <= big_t + big_g {
        return Err(Error::Coverage {
            message: format!("catalog stops at t_j = {t_max:.3}, window ends at {}", big_t + big_g),
            required_n: None,
        });
    }
    let s = Complex64::new(0.5, 2.0 * t);
    let window: Vec<&MaassForm> = forms.iter().filter(|f| f.t_j() > big_t && f.t_j() <= big_t + big_g).collect();
    let vals: Vec<(f64, f64)> = window
        .par_iter()
        .map(|f| {
            let l = sym2_l(f, s, ctx)?;
            let a = f.weight();
            Ok((a * l.value.norm_sqr(), a * (2.0 * l.value.norm() * l.truncation_error + l.truncation_error.powi(2))))
        })
        .collect::<Result<_>>()?;
    let sum = vals.iter().fold(0.0, |acc, v| acc + v.0);
    Ok(SecondMomentRow {
        t,
        big_t,
        big_g,
        forms: window.len(),
        sum,
        truncation_error: vals.iter().fold(0.0, |acc, v| acc + v.1),
        ratio: sum / (big_t.powf(1.1) * big_g),
    })
}

/// Rows over a `T` grid at fixed `(t, G)`, plus the largest ratio seen.
pub fn second_moment_table(forms: &[MaassForm], t: f64, big_ts: &[f64], big_g: f64, ctx: &PrecisionContext) -> Result<(Vec<SecondMomentRow>, f64)> {
    let rows = big_ts
        .iter()
        .map(|&bt| second_moment_experiment(forms, t, bt, big_g, ctx))
        .collect::<Result<Vec<_>>>()?;
    let c = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok((rows, c))
}

/// The `(m, n)` summand of `S₁(t)`/`S₂(t)` in the second-moment reduction:
/// `𝓛_{n²−4m²}(ρ) n^{−(1/2−2it)} (I(n/m; H₀) m^{−(1/2−2it)} + I(n/m; H_∞) m^{−(1/2+2it)})`.
pub fn reduction_summand(m: u64, n: u64, i_h0: Complex64, i_hinf: Complex64, t: f64, ctx: &PrecisionContext) -> Result<Complex64> {
    let rho = Complex64::new(0.5, 2.0 * t);
    let d = (n * n) as i64 - 4 * (m * m) as i64;
    let l = zagier_l(d, rho, ctx)?;
    let nf = (n as f64).ln();
    let mf = (m as f64).ln();
    let sm = Complex64::new(0.5, -2.0 * t);
    Ok(l * (-sm * nf).exp() * (i_h0 * (-sm * mf).exp() + i_hinf * (-rho * mf).exp()))
}

/// `(2π)^{ρ−1} n^{ρ−1} 𝓛_{n²−4m²}(ρ)`, the weight of `I(n/m)` in `S₁`/`S₂`.
pub fn s_series_weight(m: u64, n: u64, cp: CriticalPoint, ctx: &PrecisionContext) -> Result<Complex64> {
    series_weight(m, n, cp.rho, ctx)
}

#[cfg(test)]
mod tests;
