//! The test function `h(T,G,N;r)` and its `H₀`, `H_∞` decorations.

use super::afe::{f_alpha, v_weight_cfg, AfeConfig, AfePolynomial};
use crate::{Complex64, Error, PrecisionContext, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralVariant {
    Plain,
    H0,
    Hinf,
}

/// `h(T,G,N;r)`, optionally multiplied by `V(m,∓t,r)` (and the main-term
/// gamma-ratio phase for `H_∞`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralWeight {
    #[serde(rename = "T")]
    pub big_t: f64,
    #[serde(rename = "G")]
    pub big_g: f64,
    #[serde(rename = "N")]
    pub big_n: u32,
    pub variant: SpectralVariant,
    /// Twist parameter of `H₀`/`H_∞`.
    pub t: f64,
    /// The `m` of `V(m, ·, r)` in `H₀`/`H_∞`.
    pub m: u64,
    /// Degree parameter of the polynomial inside `V`.
    pub afe_n: usize,
}

impl SpectralWeight {
    pub fn plain(big_t: f64, big_g: f64, big_n: u32) -> Result<Self> {
        if !(big_t > 0.0) || !(big_g > 0.0) || big_n == 0 {
            return Err(Error::domain("need T > 0, G > 0, N ≥ 1"));
        }
        Ok(SpectralWeight {
            big_t,
            big_g,
            big_n,
            variant: SpectralVariant::Plain,
            t: 0.0,
            m: 1,
            afe_n: 2,
        })
    }

    pub fn decorated(self, variant: SpectralVariant, t: f64, m: u64) -> Self {
        SpectralWeight { variant, t, m, ..self }
    }

    /// The undecorated `h(r)`.
    pub fn h_plain(&self, r: Complex64) -> Complex64 {
        let g2 = self.big_g * self.big_g;
        let e1 = (-(r - self.big_t) * (r - self.big_t) / g2).exp();
        let e2 = (-(r + self.big_t) * (r + self.big_t) / g2).exp();
        q_n(self.big_n, r) * (e1 + e2)
    }

    /// `h(r)` for the selected variant.
    pub fn h_eval(&self, r: Complex64, ctx: &PrecisionContext) -> Result<Complex64> {
        let base = self.h_plain(r);
        match self.variant {
            SpectralVariant::Plain => Ok(base),
            SpectralVariant::H0 | SpectralVariant::Hinf => {
                if base == Complex64::new(0.0, 0.0) {
                    return Ok(base);
                }
                // every factor is even in r; evaluate on the right half-plane
                let rr = if r.re < 0.0 { -r } else { r };
                let p = AfePolynomial::new(self.afe_n, self.t);
                let cfg = AfeConfig::unit_gaussian();
                if self.variant == SpectralVariant::H0 {
                    let v = v_weight_cfg(self.m as f64, -self.t, rr, &p, &cfg, ctx)?;
                    Ok(v * base)
                } else {
                    let v = v_weight_cfg(self.m as f64, self.t, rr, &p, &cfg, ctx)?;
                    Ok(hinf_phase(self.t, rr) * v * base)
                }
            }
        }
    }
}

/// `exp(2ir(2α log r + f(α)))` with `α = t/r`.
pub(crate) fn hinf_phase(t: f64, r: Complex64) -> Complex64 {
    let alpha = Complex64::new(t, 0.0) / r;
    (Complex64::new(0.0, 2.0) * r * (alpha * 2.0 * r.ln() + f_alpha(alpha))).exp()
}

/// `q_N(r) = Π_{k<N} (r² + (k+½)²) / (r² + 100N²)^N`.
pub fn q_n(big_n: u32, r: Complex64) -> Complex64 {
    let r2 = r * r;
    let den = r2 + 100.0 * (big_n as f64).powi(2);
    let mut v = Complex64::new(1.0, 0.0);
    for k in 0..big_n {
        let c = k as f64 + 0.5;
        v *= (r2 + c * c) / den;
    }
    v
}
