//! `I(x, ρ; h)` in its three regimes, and the other `r`-integrals of the
//! first-moment formula, on one fixed Gauss–Kronrod grid over the support of
//! `h`.  The grid carries `h` and the `x`-independent part of each integrand,
//! so a sweep over many `x` only pays for the hypergeometric factor.

use super::CriticalPoint;
use crate::maass::SpectralWeight;
use crate::oscint::{gk15_nodes, QuadratureResult};
use crate::specfun::{asympt_f2_airy_scaled, f2_eval_rt, gauss_2f1_scaled, ln_gamma, OscParams, Scaled};
use crate::{Complex64, Error, PrecisionContext, Result};
use rayon::prelude::*;
use std::f64::consts::{LN_2, PI};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Half-width of the integration window around `±T`, in units of `G`.
pub const WINDOW_G: f64 = 8.0;

/// `ln sin w`, stable for large `|ℑw|` (any branch; only exponentiated).
pub(crate) fn ln_sin(w: Complex64) -> Complex64 {
    if w.im > 15.0 {
        -I * w + (I * 0.5).ln() + (1.0 - (2.0 * I * w).exp()).ln()
    } else if w.im < -15.0 {
        I * w + (-I * 0.5).ln() + (1.0 - (-2.0 * I * w).exp()).ln()
    } else {
        w.sin().ln()
    }
}

pub(crate) fn ln_cos(w: Complex64) -> Complex64 {
    ln_sin(w + PI / 2.0)
}

fn ln_cosh_pi(r: f64) -> f64 {
    let a = PI * r.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// `ln r` for real `r ≠ 0`.
fn ln_real(r: f64) -> Complex64 {
    if r > 0.0 {
        c(r.ln())
    } else {
        Complex64::new((-r).ln(), PI)
    }
}

/// Quadrature grid in `r` plus the cached prefactors of the three `I` regimes.
pub struct RGrid {
    pub cp: CriticalPoint,
    pub weight: SpectralWeight,
    r: Vec<f64>,
    wk: Vec<f64>,
    wg: Vec<f64>,
    h: Vec<Complex64>,
    /// `2L·max|h|` on the omitted middle `|r| < L`.
    skipped: f64,
    ln_geq2: Vec<Complex64>,
    ln_eq2: Option<Vec<Complex64>>,
    ln_lt2: Vec<Complex64>,
}

impl RGrid {
    pub fn new(w: &SpectralWeight, cp: CriticalPoint, ctx: &PrecisionContext) -> Result<Self> {
        let big_t = w.big_t.abs();
        let g = w.big_g;
        let pw = (g / 8.0).min(0.5);
        let outer = big_t + WINDOW_G * g;
        let inner = ((big_t - WINDOW_G * g).max(0.0) / pw).floor() * pw;
        let panels = ((outer - inner) / pw).ceil() as usize;
        let rule = gk15_nodes();
        let mut r = Vec::with_capacity(30 * panels);
        let mut wk = Vec::with_capacity(30 * panels);
        let mut wg = Vec::with_capacity(30 * panels);
        // negative side first, then positive; each panel contributes 15 nodes in order
        for sign in [-1.0, 1.0] {
            for p in 0..panels {
                let (lo, hi) = if sign < 0.0 {
                    let k = panels - 1 - p;
                    (-(inner + pw * (k + 1) as f64), -(inner + pw * k as f64))
                } else {
                    (inner + pw * p as f64, inner + pw * (p + 1) as f64)
                };
                let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
                for &(x, k, gw) in &rule {
                    r.push(mid + half * x);
                    wk.push(k * half);
                    wg.push(gw * half);
                }
            }
        }
        let h: Vec<Complex64> = r
            .par_iter()
            .map(|&x| w.h_eval(c(x), ctx))
            .collect::<Result<Vec<_>>>()?;
        let skipped = if inner > 0.0 {
            let edge = w.h_plain(c(inner)).norm().max(w.h_plain(c(0.0)).norm());
            2.0 * inner * edge
        } else {
            0.0
        };
        let rho = cp.rho;
        let a = 0.5 - rho / 2.0;
        let ln_front = (2.0 - rho) * LN_2 + I.ln() - 1.5 * PI.ln();
        let ln_geq2: Vec<Complex64> = r
            .iter()
            .map(|&x| {
                let ir = I * x;
                ln_front + ln_real(x) - ln_cosh_pi(x) + ln_gamma(a + ir) + ln_gamma(a + 0.5 + ir) - ln_gamma(1.0 + 2.0 * ir)
                    + ln_sin(PI * (rho / 2.0 - ir))
            })
            .collect();
        let ln_eq2 = if cp.t != 0.0 {
            let g0 = ln_gamma(rho - 0.5);
            Some(
                r.iter()
                    .map(|&x| {
                        let ir = I * x;
                        g0 + ln_front + ln_real(x) - ln_cosh_pi(x) + ln_sin(PI * (rho / 2.0 - ir))
                            + ln_gamma(a + ir)
                            + ln_gamma(a + 0.5 + ir)
                            - ln_gamma(rho / 2.0 + ir)
                            - ln_gamma(0.5 + rho / 2.0 + ir)
                    })
                    .collect(),
            )
        } else {
            None
        };
        let ln_lt2_front = c(2.0).ln() + I.ln() - 1.5 * PI.ln();
        let ln_lt2 = r
            .iter()
            .map(|&x| ln_lt2_front + ln_real(x) - ln_cosh_pi(x) + ln_cos(PI * (rho / 2.0 + I * x)))
            .collect();
        Ok(RGrid {
            cp,
            weight: *w,
            r,
            wk,
            wg,
            h,
            skipped,
            ln_geq2,
            ln_eq2,
            ln_lt2,
        })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.r
    }

    /// `h` at the node with index `k`.
    pub fn h_at(&self, k: usize) -> Complex64 {
        self.h[k]
    }

    /// `∫ f(r) h(r) dr` from the values `f(r_k)` at every node.
    pub fn sum(&self, f: &[Complex64]) -> QuadratureResult {
        self.sum_range(f, 0..self.r.len(), 1.0)
    }

    /// `2∫_0^∞ f(r) h(r) dr` for an even integrand; `f` is indexed like the
    /// positive half of the grid.
    pub fn sum_even(&self, f_pos: &[Complex64]) -> QuadratureResult {
        let half = self.r.len() / 2;
        let mut full = vec![Complex64::new(0.0, 0.0); half];
        full.extend_from_slice(f_pos);
        self.sum_range(&full, half..self.r.len(), 2.0)
    }

    /// Nodes with `r > 0`.
    pub fn positive_nodes(&self) -> &[f64] {
        &self.r[self.r.len() / 2..]
    }

    fn sum_range(&self, f: &[Complex64], range: std::ops::Range<usize>, factor: f64) -> QuadratureResult {
        let mut total = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        let mut abs_sum = 0.0;
        let mut fmax = 0.0f64;
        let mut k = range.start;
        while k < range.end {
            let mut kr = Complex64::new(0.0, 0.0);
            let mut gs = Complex64::new(0.0, 0.0);
            for j in k..k + 15 {
                let v = f[j] * self.h[j];
                kr += v * self.wk[j];
                gs += v * self.wg[j];
                abs_sum += (v * self.wk[j]).norm();
                fmax = fmax.max(f[j].norm());
            }
            total += kr;
            err += (kr - gs).norm();
            k += 15;
        }
        let skipped = if factor == 2.0 { 0.5 * self.skipped } else { self.skipped };
        QuadratureResult {
            value: total * factor,
            abs_error_estimate: factor * (err + skipped * fmax + 1e-16 * abs_sum),
            evaluations: range.len(),
        }
    }

    /// Values of an `x`-independent integrand at every node, in parallel.
    pub fn tabulate<F>(&self, f: F) -> Result<Vec<Complex64>>
    where
        F: Fn(f64) -> Result<Complex64> + Sync,
    {
        self.r.par_iter().map(|&x| f(x)).collect()
    }

    /// `∫ f h dr` for node values given as scaled numbers; the result is
    /// relative to `exp(log_scale)`, the largest `|f h|` on the grid.
    pub fn sum_scaled(&self, f: &[Scaled]) -> (QuadratureResult, f64) {
        let prods: Vec<Scaled> = f.iter().zip(&self.h).map(|(v, h)| v.mul(Scaled::new(*h))).collect();
        let top = prods
            .iter()
            .filter(|p| p.mant.norm() > 0.0)
            .map(|p| p.log_scale)
            .fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() {
            return (
                QuadratureResult {
                    value: c(0.0),
                    abs_error_estimate: 0.0,
                    evaluations: f.len(),
                },
                0.0,
            );
        }
        // h is folded into the values, so sum against h ≡ 1
        let rel: Vec<Complex64> = prods.iter().map(|p| p.mant * (p.log_scale - top).exp()).collect();
        let ones = RGrid {
            h: vec![c(1.0); self.h.len()],
            ..self.shallow()
        };
        let mut q = ones.sum(&rel);
        // the skipped middle is bounded through h, which the ones-grid no longer sees
        q.abs_error_estimate += self.skipped * rel.iter().map(|v| v.norm()).fold(0.0, f64::max);
        (q, top)
    }

    fn shallow(&self) -> RGrid {
        RGrid {
            cp: self.cp,
            weight: self.weight,
            r: self.r.clone(),
            wk: self.wk.clone(),
            wg: self.wg.clone(),
            h: Vec::new(),
            skipped: 0.0,
            ln_geq2: Vec::new(),
            ln_eq2: None,
            ln_lt2: Vec::new(),
        }
    }

    fn i_nodes(&self, x: f64, ctx: &PrecisionContext) -> Result<Vec<Scaled>> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::domain(format!("I(x, ρ; h) needs x > 0, got {x}")));
        }
        let rho = self.cp.rho;
        let a = 0.5 - rho / 2.0;
        if x > 2.0 {
            let z = c(4.0 / (x * x));
            let l2x = (2.0 / x).ln();
            self.r
                .par_iter()
                .zip(self.ln_geq2.par_iter())
                .map(|(&r, &lp)| {
                    let ir = I * r;
                    let f = gauss_2f1_scaled(a + ir, a + 0.5 + ir, 1.0 + 2.0 * ir, z, ctx)?;
                    Ok(Scaled::from_log(lp + 2.0 * ir * l2x).mul(f))
                })
                .collect()
        } else if x == 2.0 {
            let ln = self
                .ln_eq2
                .as_ref()
                .ok_or_else(|| Error::pole("I(2, ρ; h) has Γ(ρ − 1/2) with a pole at t = 0"))?;
            Ok(ln.iter().map(|&l| Scaled::from_log(l)).collect())
        } else {
            let y = x * x / 4.0;
            let lx = (1.0 - rho) * x.ln();
            let t = self.cp.t;
            self.r
                .par_iter()
                .zip(self.ln_lt2.par_iter())
                .map(|(&r, &lp)| Ok(Scaled::from_log(lp + lx).mul(f2_eval_rt(r, t, y, ctx)?)))
                .collect()
        }
    }

    /// `I(x, ρ; h)` as `(value / e^L, L)`, immune to under/overflow.
    pub fn i_transform_scaled(&self, x: f64, ctx: &PrecisionContext) -> Result<(QuadratureResult, f64)> {
        Ok(self.sum_scaled(&self.i_nodes(x, ctx)?))
    }

    /// `I(x, ρ; h)`.
    pub fn i_transform(&self, x: f64, ctx: &PrecisionContext) -> Result<QuadratureResult> {
        let (q, l) = self.i_transform_scaled(x, ctx)?;
        let s = l.exp();
        Ok(QuadratureResult {
            value: q.value * s,
            abs_error_estimate: q.abs_error_estimate * s,
            evaluations: q.evaluations,
        })
    }

    /// `I(x, ρ; h)` for `0 < x < 2` with `F₂` replaced by its Airy-form main
    /// term; `F₂` is even in `r`, so both bumps use `|r|`.  Needs `t > 0`.
    /// Returned as `(value / e^L, L)`.
    pub fn i_transform_asympt(&self, x: f64) -> Result<(Complex64, f64)> {
        if !(x > 0.0 && x < 2.0) {
            return Err(Error::domain(format!("the asymptotic path covers 0 < x < 2, got {x}")));
        }
        let t = self.cp.t;
        if !(t > 0.0) {
            return Err(Error::Regime("the Airy form of F₂ needs t > 0".into()));
        }
        let y = x * x / 4.0;
        let lx = (1.0 - self.cp.rho) * x.ln();
        let f: Vec<Scaled> = self
            .r
            .par_iter()
            .zip(self.ln_lt2.par_iter())
            .map(|(&r, &lp)| {
                let p = OscParams::new(r.abs(), t / r.abs())?;
                Ok(Scaled::from_log(lp + lx).mul(asympt_f2_airy_scaled(p, y)?.value))
            })
            .collect::<Result<_>>()?;
        let (q, l) = self.sum_scaled(&f);
        Ok((q.value, l))
    }
}

/// Where `I(x, ρ; h) ≪ T^{−A}` is expected to set in: `x₀ = T^{1.1}√(1+|t|)`.
pub fn lemma_decay_point(big_t: f64, t: f64) -> f64 {
    big_t.powf(1.1) * (1.0 + t.abs()).sqrt()
}
