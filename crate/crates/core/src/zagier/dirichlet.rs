//! `L(s, χ_D)` for primitive quadratic characters.
//!
//! With `q = |D|`, `a = [D < 0]`, `w = (s+a)/2`, `w' = (1−s+a)/2` and
//! `x_n = πn²/q`, rotating the Mellin integral of the theta series by an
//! angle `φ` gives
//!
//! ```text
//! Λ(s) = Σ χ(n) n^a [ x_n^{−w} Γ(w, x_n e^{iφ}) + x_n^{−w'} Γ(w', x_n e^{−iφ}) ]
//! ```
//!
//! (root number 1).  For `|ℑs|` large, `φ → ±π/2` keeps the individual
//! terms of the same size as `Λ(s) ≈ e^{−π|ℑs|/4}`.

use super::arith::{is_fundamental, kronecker};
use crate::specfun::incgamma::upper_incomplete_gamma;
use crate::specfun::{ln_gamma, zeta::zeta};
use crate::{Complex64, Error, PrecisionContext, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// The Kronecker character `χ_D` of a fundamental discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirichletChar {
    d: i64,
}

impl DirichletChar {
    pub fn new(d: i64) -> Result<Self> {
        if !is_fundamental(d) {
            return Err(Error::domain(format!("{d} is not a fundamental discriminant")));
        }
        Ok(DirichletChar { d })
    }
    pub fn discriminant(&self) -> i64 {
        self.d
    }
    pub fn modulus(&self) -> u64 {
        self.d.unsigned_abs()
    }
    pub fn eval(&self, m: i64) -> i32 {
        kronecker(self.d, m)
    }
    /// `χ(−1) = −1`.
    pub fn is_odd(&self) -> bool {
        self.d < 0
    }
}

/// Rotation angle and the matching precision loss exponent.
fn rotation(t: f64) -> (f64, f64) {
    let at = t.abs();
    let delta = if at < 1e-12 { PI / 2.0 } else { (6.0 / at).min(PI / 2.0) };
    (t.signum() * (PI / 2.0 - delta), delta)
}

/// `γ(s) = (q/π)^{(s+a)/2} Γ((s+a)/2)` as a logarithm.
pub(crate) fn ln_gamma_factor(q: f64, a: f64, s: Complex64) -> Complex64 {
    let w = (s + a) * 0.5;
    w * (q / PI).ln() + ln_gamma(w)
}

/// Completed `Λ(s, χ_D)` with the number of terms used.
fn completed(chi: &DirichletChar, s: Complex64) -> Result<(Complex64, usize)> {
    let q = chi.modulus() as f64;
    let a = if chi.is_odd() { 1.0 } else { 0.0 };
    let w = (s + a) * 0.5;
    let wd = (Complex64::new(1.0, 0.0) - s + a) * 0.5;
    let (phi, _) = rotation(s.im);
    let rot = Complex64::from_polar(1.0, phi);
    let cphi = phi.cos();
    let sig_max = w.re.max(wd.re);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut n = 1u64;
    loop {
        let x = PI * (n * n) as f64 / q;
        let xc = x * cphi;
        if xc - (sig_max - 1.0).max(0.0) * x.ln().max(0.0) > 45.0 + 0.5 * (PI / 2.0 - phi.abs()) * s.im.abs() {
            break;
        }
        let c = chi.eval(n as i64);
        if c != 0 {
            let lx = x.ln();
            let g1 = upper_incomplete_gamma(w, rot * x)?;
            let g2 = upper_incomplete_gamma(wd, rot.conj() * x)?;
            let term = (-w * lx).exp() * g1 + (-wd * lx).exp() * g2;
            sum += term * (c as f64) * (n as f64).powf(a);
        }
        n += 1;
        if n > 10_000_000 {
            return Err(Error::Precision("Dirichlet L: term budget exhausted".into()));
        }
    }
    Ok((sum, n as usize))
}

/// `L(s, χ_D)`; `D = 1` gives `ζ(s)`.
pub fn dirichlet_l(chi: &DirichletChar, s: Complex64, ctx: &PrecisionContext) -> Result<Complex64> {
    let _ = ctx;
    if chi.d == 1 {
        return zeta(s);
    }
    let (lam, _) = completed(chi, s)?;
    let q = chi.modulus() as f64;
    let a = if chi.is_odd() { 1.0 } else { 0.0 };
    Ok(lam * (-ln_gamma_factor(q, a, s)).exp())
}

/// The completed function `Λ(s, χ_D)` (for `D ≠ 1`).
pub fn dirichlet_lambda(chi: &DirichletChar, s: Complex64) -> Result<Complex64> {
    if chi.d == 1 {
        return Err(Error::domain("completed zeta is not provided through this entry point"));
    }
    Ok(completed(chi, s)?.0)
}
