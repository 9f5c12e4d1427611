//! Special functions: reference evaluators together with the uniform
//! asymptotic main terms they are compared against.
//!
//! Arithmetic is IEEE double throughout.  Values whose magnitude leaves the
//! double range (₂F₁ with spectral parameters in the hundreds, Gamma factors
//! near `e^{−πr}`) are returned as [`Scaled`] numbers, a mantissa times
//! `exp(log_scale)`.

pub mod airy;
pub mod bessel;
pub mod gamma;
pub mod hyper;
pub mod incgamma;
pub mod zeta;

use crate::{Complex64, Error, Result};
use serde::{Deserialize, Serialize};

pub use airy::{airy_ai, airy_ai_scaled};
pub use bessel::{
    bessel_fg, bessel_fg_main_term, bessel_fg_raw, bessel_k_imag, bessel_k_imag_expansion, bessel_k_imag_raw, BesselFG,
};
pub use gamma::{gamma, gamma_ratio_asympt, ln_gamma};
pub use incgamma::upper_incomplete_gamma;
pub use hyper::{
    asympt_2f1_osc, asympt_2f1_window, asympt_f2_airy, asympt_f2_airy_scaled, f2_cosine_form, f2_decay_log_size,
    f2_eval, f2_eval_rt, f2_eval_scaled, gauss_2f1, gauss_2f1_scaled, l1_phase, l2_phase, turning_point_data,
    window_constant_phase, zeta_hat_exact, zeta_hat_taylor, Regime, TurningPointData,
};

/// Accuracy request carried by every evaluator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub working_digits: u32,
    pub target_rel_error: f64,
}

impl PrecisionContext {
    pub fn new(working_digits: u32, target_rel_error: f64) -> Result<Self> {
        if working_digits < 16 {
            return Err(Error::Precision(format!("working_digits = {working_digits} < 16")));
        }
        let floor = 10f64.powi(1 - working_digits as i32);
        if !(target_rel_error >= floor) || !target_rel_error.is_finite() {
            return Err(Error::Precision(format!(
                "target_rel_error {target_rel_error:e} below 10^(1-{working_digits})"
            )));
        }
        if working_digits > 16 && target_rel_error < 1e-15 {
            return Err(Error::Precision(format!(
                "evaluators run in double precision; target {target_rel_error:e} is not attainable"
            )));
        }
        Ok(PrecisionContext {
            working_digits,
            target_rel_error,
        })
    }

    /// Tolerance handed to quadratures nested inside an evaluator.
    pub fn quad_tol(&self) -> f64 {
        (self.target_rel_error * 0.1).max(1e-15)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            working_digits: 16,
            target_rel_error: 1e-13,
        }
    }
}

/// Complex number `mant · exp(log_scale)` with `|mant|` kept near 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scaled {
    pub mant: Complex64,
    pub log_scale: f64,
}

impl Scaled {
    pub fn new(v: Complex64) -> Self {
        Scaled { mant: v, log_scale: 0.0 }.normalized()
    }
    pub fn from_log(ln: Complex64) -> Self {
        Scaled {
            mant: Complex64::from_polar(1.0, ln.im),
            log_scale: ln.re,
        }
    }
    pub fn zero() -> Self {
        Scaled {
            mant: Complex64::new(0.0, 0.0),
            log_scale: 0.0,
        }
    }
    pub fn normalized(self) -> Self {
        let n = self.mant.norm();
        if n == 0.0 || !n.is_finite() {
            return self;
        }
        let l = n.ln();
        Scaled {
            mant: self.mant / n,
            log_scale: self.log_scale + l,
        }
    }
    pub fn mul(self, o: Scaled) -> Scaled {
        Scaled {
            mant: self.mant * o.mant,
            log_scale: self.log_scale + o.log_scale,
        }
        .normalized()
    }
    pub fn div(self, o: Scaled) -> Scaled {
        Scaled {
            mant: self.mant / o.mant,
            log_scale: self.log_scale - o.log_scale,
        }
        .normalized()
    }
    pub fn scale(self, c: Complex64) -> Scaled {
        Scaled {
            mant: self.mant * c,
            log_scale: self.log_scale,
        }
        .normalized()
    }
    pub fn abs_ln(&self) -> f64 {
        self.mant.norm().ln() + self.log_scale
    }
    /// Plain complex value; overflows to ±∞ or underflows to 0 if out of range.
    pub fn value(&self) -> Complex64 {
        self.mant * self.log_scale.exp()
    }
    pub fn try_value(&self) -> Result<Complex64> {
        let v = self.value();
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("value exp({}) overflows double range", self.log_scale)))
        }
    }
    /// `self / other` as a plain complex number (for relative errors).
    pub fn ratio(&self, other: &Scaled) -> Complex64 {
        self.mant / other.mant * (self.log_scale - other.log_scale).exp()
    }
}

/// Spectral parameters of the oscillatory ₂F₁ families: `t = α·r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscParams {
    pub r: f64,
    pub alpha: f64,
    pub t: f64,
}

impl OscParams {
    pub fn new(r: f64, alpha: f64) -> Result<Self> {
        if !(r > 0.0) || !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!("need r > 0 and 0 < alpha < 1, got r={r}, alpha={alpha}")));
        }
        Ok(OscParams { r, alpha, t: alpha * r })
    }
    /// `αr ≥ 10` and `α` away from 0 and 1 on the scale of `r`.
    pub fn regime_warning(&self) -> Option<String> {
        let ar = self.alpha * self.r;
        if ar < 10.0 {
            Some(format!("alpha*r = {ar:.3} < 10"))
        } else if self.alpha > 1.0 - 10.0 / self.r {
            Some(format!("alpha = {} too close to 1 for r = {}", self.alpha, self.r))
        } else {
            None
        }
    }
}

/// Value plus an optional note that the inputs sit outside the regime where
/// the expansion is expected to be accurate.
#[derive(Clone, Debug, PartialEq)]
pub struct Asymptotic<T> {
    pub value: T,
    pub warning: Option<String>,
}
