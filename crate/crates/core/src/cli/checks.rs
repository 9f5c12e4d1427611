//! One function per check family.  Each returns a [`Report`] whose rows are
//! the individual comparisons; the acceptance test and the CLI share them.

use super::report::Report;
use crate::maass::{sym2_l_poly, v_weight_line, AfeConfig, AfePolynomial};
use crate::maass::{MaassForm, SpectralWeight, WeightConvention};
use crate::moment::{second_moment_table as window_table, verify_first_moment, CriticalPoint};
use crate::specfun::bessel::{bessel_fg, bessel_k_imag, bessel_k_imag_expansion};
use crate::specfun::{airy_ai, asympt_2f1_osc, asympt_f2_airy_scaled, f2_eval_scaled, gauss_2f1, OscParams};
use crate::voronoi::{verify_voronoi, ThetaFrame, VoronoiSide, VoronoiTestFn, VoronoiTruncation};
use crate::zagier::{second_moment_table, zagier_direct, zagier_l};
use crate::{Complex64, PrecisionContext, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use std::f64::consts::PI;

/// Decay checks pass when the error shrinks by at least this factor.
pub const DECAY_FACTOR: f64 = 1.5;

#[derive(Serialize)]
struct ZagierRow {
    n: i64,
    decomposition: Complex64,
    direct: Complex64,
    rel_error: f64,
    direct_tail: f64,
}

/// `|zagier_direct(n,2) − zagier_l(n,2)| / |zagier_l(n,2)|` for `0 < |n| ≤ nmax`.
pub fn zagier_decomp(nmax: i64, tol: f64, ctx: &PrecisionContext) -> Result<Report> {
    let s = Complex64::new(2.0, 0.0);
    let ns: Vec<i64> = (-nmax..=nmax).filter(|n| *n != 0 && matches!(n.rem_euclid(4), 0 | 1)).collect();
    let rows: Vec<ZagierRow> = ns
        .par_iter()
        .map(|&n| {
            let l = zagier_l(n, s, ctx)?;
            let d = zagier_direct(n, s, None, ctx)?;
            Ok(ZagierRow {
                n,
                decomposition: l,
                direct: d.value,
                rel_error: (d.value - l).norm() / l.norm(),
                direct_tail: d.tail_estimate / l.norm(),
            })
        })
        .collect::<Result<_>>()?;
    let mut rep = Report::new("zagier-decomp", json!({ "nmax": nmax, "s": 2.0 }));
    rep.judge(tol, rows.iter().map(|r| r.rel_error));
    for r in &rows {
        rep.push_row(r)?;
    }
    Ok(rep)
}

#[derive(Serialize)]
struct VoronoiRow {
    bump: usize,
    c: u64,
    a: i64,
    d: u64,
    t: f64,
    side: VoronoiSide,
    lhs: Complex64,
    rhs: Complex64,
    relative_residual: f64,
    error_estimate: f64,
    dual_terms: (u64, u64),
    warning: Option<String>,
}

/// Both signs of `n` for every bump, frame and `t`.
pub fn voronoi(frames: &[(u64, i64)], ts: &[f64], bumps: &[VoronoiTestFn], tol: f64, ctx: &PrecisionContext) -> Result<Report> {
    let mut jobs = Vec::new();
    for (b, phi) in bumps.iter().enumerate() {
        for &(c, a) in frames {
            let fr = ThetaFrame::new(c, a)?;
            for &t in ts {
                for side in [VoronoiSide::PositiveN, VoronoiSide::NegativeN] {
                    jobs.push((b, *phi, fr, t, side));
                }
            }
        }
    }
    let trunc = VoronoiTruncation::default();
    let rows: Vec<VoronoiRow> = jobs
        .par_iter()
        .map(|(b, phi, fr, t, side)| {
            let r = verify_voronoi(phi, fr, *side, *t, &trunc, ctx)?;
            Ok(VoronoiRow {
                bump: *b,
                c: r.c,
                a: r.a,
                d: r.d,
                t: r.t,
                side: r.side,
                lhs: r.lhs,
                rhs: r.rhs,
                relative_residual: r.relative_residual,
                error_estimate: r.error_estimate,
                dual_terms: (r.dual_positive.last_n, r.dual_negative.last_n),
                warning: r.warning,
            })
        })
        .collect::<Result<_>>()?;
    let mut rep = Report::new("voronoi", json!({ "frames": frames, "t": ts, "bumps": bumps, "truncation": trunc }));
    rep.judge(tol, rows.iter().map(|r| r.relative_residual));
    for r in &rows {
        if let Some(w) = &r.warning {
            rep.notes.push(format!("bump {} c={} a={} t={}: {w}", r.bump, r.c, r.a, r.t));
        }
        rep.push_row(r)?;
    }
    Ok(rep)
}

#[derive(Serialize)]
struct MomentRow {
    m: u64,
    convention: WeightConvention,
    spectral: Complex64,
    arithmetic: Complex64,
    residual: f64,
    tolerance: f64,
    /// `|residual| / tolerance`.
    normalized: f64,
    passed: bool,
    forms_used: usize,
    s2_cutoff: u64,
}

/// The exact first-moment formula at each `m`, with the half-weight
/// convention as a negative control that must fail.
#[allow(clippy::too_many_arguments)]
pub fn first_moment(
    forms: &[MaassForm],
    ms: &[u64],
    t: f64,
    big_t: f64,
    big_g: f64,
    big_n: u32,
    control: bool,
    ctx: &PrecisionContext,
) -> Result<Report> {
    let w = SpectralWeight::plain(big_t, big_g, big_n)?;
    let cp = CriticalPoint::new(t);
    let mut convs = vec![WeightConvention::Harmonic];
    if control {
        convs.push(WeightConvention::HalfHarmonic);
    }
    let mut rep = Report::new(
        "first-moment",
        json!({ "m": ms, "t": t, "T": big_t, "G": big_g, "N": big_n, "forms": forms.len(),
                "catalog_t_max": forms.iter().map(|f| f.t_j()).fold(0.0, f64::max) }),
    );
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for &m in ms {
        for &conv in &convs {
            let b = verify_first_moment(forms, m, cp, &w, conv, ctx)?;
            let arithmetic = b.mt + b.ct + b.et + b.s1 + b.s2;
            let normalized = b.residual.norm() / b.tolerances.combined;
            let row = MomentRow {
                m,
                convention: conv,
                spectral: b.spectral,
                arithmetic,
                residual: b.residual.norm(),
                tolerance: b.tolerances.combined,
                normalized,
                passed: b.passed,
                forms_used: b.forms_used,
                s2_cutoff: b.s2_cutoff,
            };
            if conv == WeightConvention::Harmonic {
                ok &= b.passed;
                worst = worst.max(normalized);
            } else if b.passed {
                ok = false;
                rep.notes.push(format!("negative control ({conv:?}) at m = {m} did not fail"));
            }
            rep.push_row(&row)?;
        }
    }
    rep.tolerance = Some(1.0);
    rep.worst_residual = Some(worst);
    rep.passed = Some(ok);
    Ok(rep)
}

#[derive(Serialize)]
struct DecayRow {
    check: &'static str,
    parameter: &'static str,
    low: f64,
    high: f64,
    error_low: f64,
    error_high: f64,
    /// `error_high / error_low`.
    ratio: f64,
}

fn decay_report(family: &str, params: serde_json::Value, rows: Vec<DecayRow>) -> Result<Report> {
    let mut rep = Report::new(family, params);
    rep.judge(1.0 / DECAY_FACTOR, rows.iter().map(|r| r.ratio));
    for r in &rows {
        rep.push_row(r)?;
    }
    Ok(rep)
}

/// Relative errors of the oscillatory ₂F₁ main term (r = 200 → 400) and of
/// the Airy form at the turning point (r = 400 → 800).
pub fn asympt_2f1(ctx: &PrecisionContext) -> Result<Report> {
    let osc = |r: f64| -> Result<f64> {
        let (z, alpha) = (0.5, 0.2);
        let m = asympt_2f1_osc(OscParams::new(r, alpha)?, z, 1)?.value;
        let a = Complex64::new(0.25, r * (1.0 - alpha));
        let v = gauss_2f1(a, a + 0.5, Complex64::new(1.0, 2.0 * r), Complex64::new(z, 0.0), ctx)?;
        Ok((m / v - 1.0).norm())
    };
    let airy = |r: f64| -> Result<f64> {
        let alpha = 0.3;
        let p = OscParams::new(r, alpha)?;
        let y = 1.0 - alpha * alpha;
        let m = asympt_f2_airy_scaled(p, y)?.value;
        let v = f2_eval_scaled(p, y, ctx)?;
        Ok((v.ratio(&m) - 1.0).norm())
    };
    let (o1, o2) = (osc(200.0)?, osc(400.0)?);
    let (a1, a2) = (airy(400.0)?, airy(800.0)?);
    decay_report(
        "asympt-2f1",
        json!({ "oscillatory": { "z": 0.5, "alpha": 0.2, "r": [200, 400] },
                "turning_point": { "alpha": 0.3, "y": 0.91, "r": [400, 800] } }),
        vec![
            DecayRow { check: "oscillatory main term", parameter: "r", low: 200.0, high: 400.0, error_low: o1, error_high: o2, ratio: o2 / o1 },
            DecayRow { check: "airy form at turning point", parameter: "r", low: 400.0, high: 800.0, error_low: a1, error_high: a2, ratio: a2 / a1 },
        ],
    )
}

/// Error of the one-term uniform K expansion at z = 0.5, t = 20 → 40.
pub fn asympt_bessel(ctx: &PrecisionContext) -> Result<Report> {
    let z = 0.5;
    let err = |t: f64| -> Result<f64> {
        let r = bessel_k_imag(t, z, ctx)?;
        let e = bessel_k_imag_expansion(t, z, 1)?;
        Ok((e - r).abs() / (PI / t).sqrt())
    };
    let (e1, e2) = (err(20.0)?, err(40.0)?);
    decay_report(
        "asympt-bessel",
        json!({ "z": z, "t": [20, 40], "terms": 1 }),
        vec![DecayRow { check: "uniform K expansion", parameter: "t", low: 20.0, high: 40.0, error_low: e1, error_high: e2, ratio: e2 / e1 }],
    )
}

#[derive(Serialize)]
struct OdeRow {
    equation: &'static str,
    t: f64,
    z: f64,
    residual: f64,
}

/// `ω''` by Richardson-extrapolated central differences.
fn second_derivative(f: &dyn Fn(f64) -> Result<f64>, z: f64, h: f64) -> Result<(f64, f64)> {
    let f0 = f(z)?;
    let d = |h: f64| -> Result<(f64, f64)> {
        let (p, m) = (f(z + h)?, f(z - h)?);
        Ok(((p - 2.0 * f0 + m) / (h * h), p.abs().max(m.abs())))
    };
    let (d1, s1) = d(h)?;
    let (d2, s2) = d(h / 2.0)?;
    let (d3, s3) = d(h / 4.0)?;
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    Ok(((16.0 * r2 - r1) / 15.0, f0.abs().max(s1).max(s2).max(s3)))
}

/// Residuals of the F/G, K and Airy equations at seeded random points,
/// normalized by `|Q|·max|ω|` over the stencil so that they are relative.
pub fn ode_residuals(seed: u64, points: usize, tol: f64, ctx: &PrecisionContext) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for _ in 0..points {
        let (t, z): (f64, f64) = (rng.gen_range(1.0..20.0), rng.gen_range(0.3..3.0));
        let q = -(1.0 + 16.0 * t * t * (1.0 + z * z)) / (4.0 * z * z);
        let k = q.abs().sqrt();
        for (name, pick) in [("F", 0usize), ("G", 1)] {
            let w = |z: f64| -> Result<f64> {
                let v = bessel_fg(t, z, ctx)?;
                Ok(if pick == 0 { v.f } else { v.g } * z.sqrt())
            };
            let (d2, amp) = second_derivative(&w, z, 0.1 / k)?;
            rows.push(OdeRow { equation: name, t, z, residual: (d2 - q * w(z)?).abs() / (q.abs() * amp) });
        }
    }
    for _ in 0..points {
        let (t, z): (f64, f64) = (rng.gen_range(1.0..20.0), rng.gen_range(0.2..2.0));
        let q = (16.0 * t * t * (z * z - 1.0) - 1.0) / (4.0 * z * z);
        let w = |z: f64| -> Result<f64> { Ok(bessel_k_imag(t, z, ctx)? * z.sqrt()) };
        let scale = q.abs().max(4.0 * t * t);
        let (d2, amp) = second_derivative(&w, z, 0.1 / scale.sqrt())?;
        rows.push(OdeRow { equation: "K", t, z, residual: (d2 - q * w(z)?).abs() / (scale * amp) });
    }
    for _ in 0..points {
        let x: f64 = rng.gen_range(-10.0..5.0);
        let f = |x: f64| airy_ai(x, ctx);
        let scale = x.abs().max(1.0);
        let (d2, amp) = second_derivative(&f, x, 0.1 / scale.sqrt())?;
        rows.push(OdeRow { equation: "Airy", t: 0.0, z: x, residual: (d2 - x * f(x)?).abs() / (scale * amp) });
    }
    let mut rep = Report::new("ode-residuals", json!({ "seed": seed, "points": points }));
    rep.judge(tol, rows.iter().map(|r| r.residual));
    for r in &rows {
        rep.push_row(r)?;
    }
    Ok(rep)
}

#[derive(Serialize)]
struct AfeRow {
    check: &'static str,
    t_j: f64,
    detail: String,
    residual: f64,
    tolerance: f64,
}

/// Two AFE polynomial degrees on the first `n_forms` forms, and contour
/// independence of `V`.  Residuals are reported as `residual / tolerance`.
pub fn afe_selfcheck(forms: &[MaassForm], n_forms: usize, t: f64, degree_tol: f64, contour_tol: f64, ctx: &PrecisionContext) -> Result<Report> {
    let s = Complex64::new(0.5, 2.0 * t);
    let (p2, p4) = (AfePolynomial::new(2, t), AfePolynomial::new(4, t));
    let chosen: Vec<&MaassForm> = forms.iter().take(n_forms).collect();
    let mut rows: Vec<AfeRow> = chosen
        .par_iter()
        .map(|f| {
            let a = sym2_l_poly(f, s, &p2, ctx)?.value;
            let b = sym2_l_poly(f, s, &p4, ctx)?.value;
            Ok(AfeRow {
                check: "degree",
                t_j: f.t_j(),
                detail: format!("P_2: {a}, P_4: {b}"),
                residual: (a - b).norm() / a.norm().max(b.norm()),
                tolerance: degree_tol,
            })
        })
        .collect::<Result<_>>()?;
    for f in &chosen {
        let tj = Complex64::new(f.t_j(), 0.0);
        for cfg in [AfeConfig::unit_gaussian(), AfeConfig::default()] {
            for y in [0.5, 3.0, 40.0] {
                let a = v_weight_line(y, t, tj, &p2, &cfg, 0.25)?;
                let b = v_weight_line(y, t, tj, &p2, &cfg, 0.5)?;
                rows.push(AfeRow {
                    check: "contour",
                    t_j: f.t_j(),
                    detail: format!("B = {}, y = {y}", cfg.gauss_b),
                    residual: (a - b).norm(),
                    tolerance: contour_tol,
                });
            }
        }
    }
    let mut rep = Report::new("afe-selfcheck", json!({ "forms": chosen.len(), "t": t, "degrees": [2, 4] }));
    rep.judge(1.0, rows.iter().map(|r| r.residual / r.tolerance));
    for r in &rows {
        rep.push_row(r)?;
    }
    Ok(rep)
}

/// `Σ_{n≤N}|𝓛_n(1/2+2it)|²` against `N(N(1+|t|))^{0.1}`.  A column passes
/// when its largest ratio is at most `max_growth` times its smallest.
pub fn large_sieve(ns: &[u64], ts: &[f64], max_growth: f64, ctx: &PrecisionContext) -> Result<Report> {
    let mut rep = Report::new("large-sieve", json!({ "N": ns, "t": ts, "max_growth": max_growth }));
    let mut growth = Vec::new();
    let mut constant: f64 = 0.0;
    for &t in ts {
        let rows = second_moment_table(ns, t, ctx)?;
        let hi = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
        let lo = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
        constant = constant.max(hi);
        growth.push(hi / lo);
        rep.notes.push(format!("t = {t}: ratios in [{lo:.4}, {hi:.4}], spread {:.3}", hi / lo));
        for r in &rows {
            rep.push_row(r)?;
        }
    }
    rep.notes.push(format!("recorded constant: {constant:.4}"));
    rep.judge(max_growth, growth);
    Ok(rep)
}

/// Window sums of `α_j|L(sym² u_j, 1/2+2it)|²` against `T^{1.1}G`; an
/// experiment without a bound, so `passed` only records finiteness.  A
/// window without forms contributes a zero row.
pub fn second_moment(forms: &[MaassForm], big_ts: &[f64], big_g: f64, t: f64, ctx: &PrecisionContext) -> Result<Report> {
    let (rows, c) = window_table(forms, t, big_ts, big_g, ctx)?;
    let mut rep = Report::new("second-moment", json!({ "T": big_ts, "G": big_g, "t": t }));
    rep.passed = Some(rows.iter().all(|r| r.ratio.is_finite() && r.sum.is_finite()));
    rep.notes.push(format!("largest ratio: {c:.6}"));
    for r in &rows {
        rep.push_row(r)?;
    }
    Ok(rep)
}
