//! Zagier L-series `𝓛_n(s) = ζ(2s)/ζ(s) · Σ_q ρ_q(n) q^{−s}`.
//!
//! Two independent routes are provided:
//! * [`zagier_l`]: the factorization `𝓛_n(s) = l^{1/2−s} T_l^{(D)}(s) L(s, χ_D)`
//!   for `n = D l²`, valid everywhere and used on the critical line;
//! * [`zagier_direct`]: the Dirichlet series itself, summed as an Euler
//!   product of local series `Σ_k ρ_{p^k}(n) p^{−ks}` built from square-root
//!   counts alone (no characters), for `ℜs ≥ 3/2`.

pub mod arith;
pub mod dirichlet;

pub use arith::{is_fundamental, jacobi, kronecker, rho_q};
pub use dirichlet::{dirichlet_l, dirichlet_lambda, DirichletChar};

use crate::specfun::zeta::zeta;
use crate::{Complex64, Error, PrecisionContext, Result};
use arith::{divisors, factor, mobius, primes_up_to, rho_local, rho_stable_from};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// `n = D·l²` with `D` a fundamental discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZagierPoint {
    pub n: i64,
    pub d: i64,
    pub l: u64,
}

/// Exponent used for the `(N(1+|t|))^ε` normalization of moment tables.
pub const TABLE_EPSILON: f64 = 0.1;

pub fn decompose(n: i64) -> Result<ZagierPoint> {
    if n == 0 || !matches!(n.rem_euclid(4), 0 | 1) {
        return Err(Error::domain(format!("n = {n} must be nonzero with n ≡ 0, 1 (mod 4)")));
    }
    let mut core: i64 = n.signum();
    let mut k: u64 = 1;
    for (p, e) in factor(n.unsigned_abs()) {
        if e % 2 == 1 {
            core *= p as i64;
        }
        k *= p.pow(e / 2);
    }
    let (d, l) = if core.rem_euclid(4) == 1 { (core, k) } else { (4 * core, k / 2) };
    debug_assert!(is_fundamental(d) && d * (l * l) as i64 == n);
    Ok(ZagierPoint { n, d, l })
}

/// `τ_ν(k) = Σ_{ab=k} (a/b)^ν`.
pub fn tau_nu(k: u64, nu: Complex64) -> Complex64 {
    divisors(k)
        .into_iter()
        .map(|a| (nu * ((a * a) as f64 / k as f64).ln()).exp())
        .sum()
}

/// `T_l^{(D)}(s) = Σ_{l₁l₂=l} χ_D(l₁) μ(l₁) l₁^{−1/2} τ_{s−1/2}(l₂)`.
pub fn t_factor(zp: &ZagierPoint, s: Complex64) -> Complex64 {
    let nu = s - 0.5;
    divisors(zp.l)
        .into_iter()
        .map(|l1| {
            let c = kronecker(zp.d, l1 as i64) * mobius(l1);
            if c == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                tau_nu(zp.l / l1, nu) * (c as f64 / (l1 as f64).sqrt())
            }
        })
        .sum()
}

/// `𝓛_n(s)` through the decomposition `n = D l²`.
pub fn zagier_l(n: i64, s: Complex64, ctx: &PrecisionContext) -> Result<Complex64> {
    let zp = decompose(n)?;
    let chi = DirichletChar::new(zp.d)?;
    let l = dirichlet_l(&chi, s, ctx)?;
    Ok(l_factor(&zp, s) * l)
}

/// `l^{1/2−s} T_l^{(D)}(s)`.
fn l_factor(zp: &ZagierPoint, s: Complex64) -> Complex64 {
    let lpow = ((Complex64::new(0.5, 0.0) - s) * (zp.l as f64).ln()).exp();
    lpow * t_factor(zp, s)
}

/// Truncated Dirichlet-series value with its tail estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectEstimate {
    pub value: Complex64,
    /// heuristic size of the omitted primes `p > prime_bound`
    pub tail_estimate: f64,
    pub prime_bound: u64,
}

fn is_square(n: i64) -> bool {
    if n <= 0 {
        return false;
    }
    let r = (n as f64).sqrt().round() as i64;
    (r - 1..=r + 1).any(|k| k >= 0 && k * k == n)
}

/// `Σ_{k≥0} ρ_{p^k}(n) x^k`, summed exactly (the coefficients are eventually constant).
fn local_series(n: i64, p: u64, x: Complex64) -> Complex64 {
    let kmax = rho_stable_from(n, p);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut xp = Complex64::new(1.0, 0.0);
    for k in 0..kmax {
        sum += xp * rho_local(n, p, k) as f64;
        xp *= x;
    }
    let tail = rho_local(n, p, kmax) as f64;
    sum + xp * tail / (Complex64::new(1.0, 0.0) - x)
}

/// `𝓛_n(s)` from the defining series, refused for `ℜs < 3/2`.
///
/// The series is multiplicative in `q`, so it is summed as a product of
/// local factors over primes `p ≤ prime_bound` (default from the precision
/// target).  For perfect squares `n` the factor `ζ(s)` is split off
/// exactly, leaving a product that is finite.
pub fn zagier_direct(n: i64, s: Complex64, prime_bound: Option<u64>, ctx: &PrecisionContext) -> Result<DirectEstimate> {
    if s.re < 1.5 {
        return Err(Error::domain(format!("direct series needs Re s ≥ 1.5, got {}", s.re)));
    }
    if n == 0 {
        return Err(Error::domain("n must be nonzero"));
    }
    if !matches!(n.rem_euclid(4), 0 | 1) {
        return Ok(DirectEstimate {
            value: Complex64::new(0.0, 0.0),
            tail_estimate: 0.0,
            prime_bound: 0,
        });
    }
    let sigma = s.re;
    let floor = 2 * n.unsigned_abs() + 10;
    let bound = prime_bound.unwrap_or_else(|| {
        // 4 P^{1/2−σ} / log P ≤ target
        let target = ctx.target_rel_error.max(1e-15);
        let p = (target / 4.0).powf(1.0 / (0.5 - sigma));
        p.clamp(1e3, 2e6) as u64
    });
    let bound = bound.max(floor);
    let square = is_square(n);
    let mut prod = Complex64::new(1.0, 0.0);
    for &p in primes_up_to(bound).iter() {
        let x = (-s * (p as f64).ln()).exp();
        // local factor of 𝓛_n(s): F_p(x) · (1 − x)/(1 − x²)
        let mut e = local_series(n, p, x) / (Complex64::new(1.0, 0.0) + x);
        if square {
            e *= Complex64::new(1.0, 0.0) - x;
        }
        prod *= e;
    }
    let (value, tail) = if square {
        (prod * zeta(s)?, 1e-15 * prod.norm())
    } else {
        let pb = bound as f64;
        (prod, prod.norm() * 4.0 * pb.powf(0.5 - sigma) / pb.ln())
    };
    Ok(DirectEstimate {
        value,
        tail_estimate: tail,
        prime_bound: bound,
    })
}

/// One row of the mean-square table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    #[serde(rename = "N")]
    pub n_max: u64,
    pub moment: f64,
    pub ratio: f64,
    pub t: f64,
    pub epsilon: f64,
}

/// `Σ_{1≤n≤N} |𝓛_n(1/2+2it)|²` for each `N`, with the ratio to `N (N(1+|t|))^{0.1}`.
pub fn second_moment_table(n_list: &[u64], t: f64, ctx: &PrecisionContext) -> Result<Vec<MomentRow>> {
    if n_list.is_empty() {
        return Ok(Vec::new());
    }
    if n_list.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::domain("N list must be ascending"));
    }
    let top = *n_list.last().unwrap_or(&0);
    let s = Complex64::new(0.5, 2.0 * t);
    let points: Vec<ZagierPoint> = (1..=top as i64)
        .filter(|n| matches!(n % 4, 0 | 1))
        .map(decompose)
        .collect::<Result<_>>()?;
    let mut ds: Vec<i64> = points.iter().map(|p| p.d).collect();
    ds.sort_unstable();
    ds.dedup();
    let lvals: Vec<(i64, Complex64)> = ds
        .par_iter()
        .map(|&d| Ok((d, dirichlet_l(&DirichletChar::new(d)?, s, ctx)?)))
        .collect::<Result<_>>()?;
    let lmap: BTreeMap<i64, Complex64> = lvals.into_iter().collect();
    let terms: Vec<(u64, f64)> = points
        .par_iter()
        .map(|zp| (zp.n as u64, (l_factor(zp, s) * lmap[&zp.d]).norm_sqr()))
        .collect();
    let mut rows = Vec::with_capacity(n_list.len());
    let mut acc = 0.0;
    let mut idx = 0;
    for &big_n in n_list {
        while idx < terms.len() && terms[idx].0 <= big_n {
            acc += terms[idx].1;
            idx += 1;
        }
        let nf = big_n as f64;
        let norm = nf * (nf * (1.0 + t.abs())).powf(TABLE_EPSILON);
        rows.push(MomentRow {
            n_max: big_n,
            moment: acc,
            ratio: if norm > 0.0 { acc / norm } else { 0.0 },
            t,
            epsilon: TABLE_EPSILON,
        });
    }
    Ok(rows)
}

/// CSV with header `N,moment,ratio,t,epsilon`.
pub fn write_moment_csv<W: std::io::Write>(rows: &[MomentRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    }
    if rows.is_empty() {
        w.write_record(["N", "moment", "ratio", "t", "epsilon"])
            .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    }
    w.flush()?;
    Ok(())
}
