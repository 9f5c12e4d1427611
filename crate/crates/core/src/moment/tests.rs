use super::*;
use crate::maass::{bundled_catalog, q_n, SpectralVariant};
use crate::oscint::{adaptive_panels, integrate_decaying, Interval, QuadOptions};
use crate::specfun::gauss_2f1;
use rand::{Rng, SeedableRng};
use std::sync::OnceLock;

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn w12() -> SpectralWeight {
    SpectralWeight::plain(12.0, 2.0, 4).unwrap()
}

fn grid12(t: f64) -> &'static RGrid {
    static G: OnceLock<RGrid> = OnceLock::new();
    assert_eq!(t, 1.0);
    G.get_or_init(|| RGrid::new(&w12(), CriticalPoint::new(1.0), &ctx()).unwrap())
}

/// `I(x)` integrand without `h`, written out from the definitions with
/// plain complex arithmetic (fine for `|r| ≲ 60`).
fn i_integrand(x: f64, rho: Complex64, r: f64) -> Complex64 {
    let ir = I * r;
    let a = 0.5 - rho / 2.0;
    let g = |z: Complex64| crate::specfun::gamma::gamma_unchecked(z);
    let pi15 = PI.powf(1.5);
    let ctx = ctx();
    if x > 2.0 {
        (2.0f64.ln() * (2.0 - rho)).exp() * I / pi15 * r / (PI * r).cosh()
            * ((2.0 / x).ln() * 2.0 * ir).exp()
            * g(a + ir)
            * g(a + 0.5 + ir)
            / g(1.0 + 2.0 * ir)
            * (PI * (rho / 2.0 - ir)).sin()
            * gauss_2f1(a + ir, a + 0.5 + ir, 1.0 + 2.0 * ir, c(4.0 / (x * x)), &ctx).unwrap()
    } else if x == 2.0 {
        g(rho - 0.5) * (2.0f64.ln() * (2.0 - rho)).exp() * I / pi15 * r / (PI * r).cosh() * (PI * (rho / 2.0 - ir)).sin()
            * g(a + ir)
            * g(a + 0.5 + ir)
            / (g(rho / 2.0 + ir) * g(0.5 + rho / 2.0 + ir))
    } else {
        2.0 * I / pi15 * r / (PI * r).cosh() * (x.ln() * (1.0 - rho)).exp() * g(a + ir) * g(a - ir) / PI.sqrt()
            * (PI * (rho / 2.0 + ir)).cos()
            * gauss_2f1(a + ir, a - ir, c(0.5), c(x * x / 4.0), &ctx).unwrap()
    }
}

/// Adaptive quadrature of `i_integrand · h` over `[−T−8G, T+8G]`.
fn i_adaptive(x: f64, w: &SpectralWeight, rho: Complex64) -> Complex64 {
    let r_max = w.big_t + 8.0 * w.big_g;
    let breaks: Vec<f64> = (0..=64).map(|k| -r_max + 2.0 * r_max * k as f64 / 64.0).collect();
    let mut f = |r: f64| i_integrand(x, rho, r) * w.h_plain(c(r));
    adaptive_panels(&mut f, &breaks, QuadOptions::new(1e-12).with_abs(1e-18)).unwrap().value
}

#[test]
fn grid_matches_adaptive_quadrature_in_all_regimes() {
    let g = grid12(1.0);
    let rho = g.cp.rho;
    for x in [0.7, 1.5, 2.0, 2.5, 4.0] {
        let a = g.i_transform(x, &ctx()).unwrap();
        let b = i_adaptive(x, &w12(), rho);
        assert!((a.value - b).norm() <= 1e-10 * b.norm() + 1e-17, "x={x}: {} vs {b}", a.value);
    }
}

#[test]
fn dual_path_below_two() {
    let ctx = ctx();
    let w = SpectralWeight::plain(400.0, 10.0, 4).unwrap();
    let g = RGrid::new(&w, CriticalPoint::new(3.0), &ctx).unwrap();
    let (exact, le) = g.i_transform_scaled(1.0, &ctx).unwrap();
    let (asym, la) = g.i_transform_asympt(1.0).unwrap();
    let rel = (asym * (la - le).exp() / exact.value - 1.0).norm();
    // main term of a uniform expansion in 1/r
    assert!(rel < 1.0 / 400.0, "relative gap {rel:e}");
    assert!(exact.abs_error_estimate < 1e-6 * exact.value.norm());
}

#[test]
fn large_x_is_negligible() {
    let g = grid12(1.0);
    let x0 = 10.0 * lemma_decay_point(12.0, 1.0);
    for x in [x0, 2.0 * x0] {
        let v = g.i_transform(x, &ctx()).unwrap();
        assert!(v.value.norm() <= 1e-10, "x={x}: {}", v.value);
    }
}

#[test]
fn narrow_window_is_a_midpoint_rule() {
    let ctx = ctx();
    let (big_t, big_g) = (50.0, 0.05);
    let w = SpectralWeight::plain(big_t, big_g, 4).unwrap();
    let cp = CriticalPoint::new(1.0);
    let g = RGrid::new(&w, cp, &ctx).unwrap();
    for x in [1.0, 3.0] {
        let v = g.i_transform(x, &ctx).unwrap().value;
        let q = q_n(4, c(big_t));
        let mid = big_g * PI.sqrt() * q * (i_integrand(x, cp.rho, big_t) + i_integrand(x, cp.rho, -big_t));
        assert!((v - mid).norm() <= 0.1 * mid.norm(), "x={x}: {v} vs {mid}");
    }
}

#[test]
fn bracketing_across_two() {
    let g = grid12(1.0);
    let ctx = ctx();
    let at = |x: f64| g.i_transform(x, &ctx).unwrap().value;
    let i2 = at(2.0);
    let e = 1e-3;
    let (p1, p2) = (at(2.0 + e), at(2.0 + 2.0 * e));
    let (m1, m2) = (at(2.0 - e), at(2.0 - 2.0 * e));
    let slope = ((p2 - p1).norm() / e).max((m1 - m2).norm() / e);
    assert!((p1 - i2).norm() <= 10.0 * slope * e);
    assert!((m1 - i2).norm() <= 10.0 * slope * e);
}

/// Near `x = 2` the ₂F₁ has `c − a − b = ρ − 1/2`, so `I(x)` carries a term
/// `Γ(1/2−ρ) (1 − z)^{ρ−1/2} J(x)` that keeps oscillating as `x → 2`.  Removing
/// it must leave a remainder converging to the `x = 2` formula.
#[test]
fn x_equals_two_is_the_regular_part() {
    let g = grid12(1.0);
    let ctx = ctx();
    let w = w12();
    let rho = g.cp.rho;
    let pi15 = PI.powf(1.5);
    let g_sing = crate::specfun::gamma::gamma_unchecked(0.5 - rho);
    let r_max = w.big_t + 8.0 * w.big_g;
    let breaks: Vec<f64> = (0..=64).map(|k| -r_max + 2.0 * r_max * k as f64 / 64.0).collect();
    let i2 = g.i_transform(2.0, &ctx).unwrap().value;
    for e in [1e-3, 1e-4, 1e-5, 1e-6] {
        let xp = 2.0 + e;
        let mut jp = |r: f64| {
            let ir = I * r;
            (2.0f64.ln() * (2.0 - rho)).exp() * I / pi15 * r / (PI * r).cosh()
                * ((2.0f64 / xp).ln() * 2.0 * ir).exp()
                * (PI * (rho / 2.0 - ir)).sin()
                * w.h_plain(c(r))
        };
        let j = adaptive_panels(&mut jp, &breaks, QuadOptions::new(1e-13)).unwrap().value;
        let sing = g_sing * c(1.0 - 4.0 / (xp * xp)).powc(rho - 0.5) * j;
        let reg = g.i_transform(xp, &ctx).unwrap().value - sing;

        let xm = 2.0 - e;
        let mut jm = |r: f64| {
            2.0 * I / pi15 * r / (PI * r).cosh() * (xm.ln() * (1.0 - rho)).exp() * (PI * (rho / 2.0 + I * r)).cos() * w.h_plain(c(r))
        };
        let j = adaptive_panels(&mut jm, &breaks, QuadOptions::new(1e-13)).unwrap().value;
        let sing_m = g_sing * c(1.0 - xm * xm / 4.0).powc(rho - 0.5) * j;
        let reg_m = g.i_transform(xm, &ctx).unwrap().value - sing_m;

        let gap = (reg - i2).norm().max((reg_m - i2).norm());
        // linear convergence; the next term oscillates like ε^{1+2it}
        assert!(gap <= 250.0 * e * i2.norm(), "e={e}: gap {gap:e}");
    }
}

#[test]
fn main_term_by_substitution() {
    let g = grid12(1.0);
    let ctx = ctx();
    let w = w12();
    let rho = g.cp.rho;
    let j = integrate_decaying(|r| c(r * (PI * r).tanh()) * w.h_plain(c(r)), Interval::real_line(), 1e-13).unwrap().value;
    let i2 = i_adaptive(2.0, &w, rho);
    for m in [1u64, 2, 3] {
        let mf = m as f64;
        let direct = zeta(2.0 * rho).unwrap() / (PI * PI) * (-rho * mf.ln()).exp() * j
            + c(2.0 * PI).powc(rho - 1.0) * zeta(2.0 * rho - 1.0).unwrap() * i2 / c(2.0 * mf).powc(1.0 - rho);
        let mt = main_term(g, m, &ctx).unwrap();
        assert!((mt.value - direct).norm() <= 1e-11 * direct.norm(), "m={m}");
    }
}

#[test]
fn ct_integrand_is_even() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let m = rng.gen_range(1..5u64);
        let r = rng.gen_range(0.05..30.0);
        let rho = CriticalPoint::new(rng.gen_range(0.5..3.0)).rho;
        let a = ct_integrand(m, rho, r).unwrap();
        let b = ct_integrand(m, rho, -r).unwrap();
        assert!((a - b).norm() <= 1e-13 * a.norm(), "m={m} r={r}");
    }
}

#[test]
fn s2_tail_survives_doubling() {
    let g = grid12(1.0);
    let ctx = ctx();
    let (s2, _, cut) = s2_series(g, 1, S2Truncation::default(), 1e-3, &ctx).unwrap();
    let long = S2Truncation {
        stretch: 2.0,
        ..S2Truncation::default()
    };
    let (s2b, _, cut_b) = s2_series(g, 1, long, 1e-3, &ctx).unwrap();
    assert!(cut_b >= 2 * cut - 1);
    assert!((s2.value - s2b.value).norm() <= 1e-8 * s2.value.norm());
    assert!((s2.value - s2b.value).norm() <= s2.tolerance);
}

#[test]
fn even_reflection_changes_nothing() {
    let ctx = ctx();
    let w = w12();
    let refl = SpectralWeight { big_t: -w.big_t, ..w };
    for r in [0.3, 11.0, 14.5] {
        assert_eq!(w.h_plain(c(r)), refl.h_plain(c(-r)));
    }
    let cp = CriticalPoint::new(1.0);
    let ga = grid12(1.0);
    let gb = RGrid::new(&refl, cp, &ctx).unwrap();
    for m in [1u64, 2] {
        let pairs = [
            (main_term(ga, m, &ctx).unwrap(), main_term(&gb, m, &ctx).unwrap()),
            (continuous_term(ga, m).unwrap(), continuous_term(&gb, m).unwrap()),
            (extra_term(ga, m, &ctx).unwrap(), extra_term(&gb, m, &ctx).unwrap()),
            (s1_series(ga, m, &ctx).unwrap().0, s1_series(&gb, m, &ctx).unwrap().0),
        ];
        for (a, b) in pairs {
            assert!((a.value - b.value).norm() <= 1e-14 * a.value.norm().max(1e-300), "{a:?} vs {b:?}");
        }
    }
}

#[test]
fn decorated_series_match_the_reduction() {
    let ctx = ctx();
    let (m, t) = (2u64, 1.0);
    let cp = CriticalPoint::new(t);
    let base = w12();
    let g0 = RGrid::new(&base.decorated(SpectralVariant::H0, t, m), cp, &ctx).unwrap();
    let gi = RGrid::new(&base.decorated(SpectralVariant::Hinf, t, m), cp, &ctx).unwrap();
    let (_, s1_0) = s1_series(&g0, m, &ctx).unwrap();
    let (_, s1_i) = s1_series(&gi, m, &ctx).unwrap();
    let mut pairs: Vec<(SeriesTerm, SeriesTerm)> = s1_0.into_iter().zip(s1_i).collect();
    for n in 2 * m + 1..=2 * m + 3 {
        pairs.push((series_term(&g0, m, n, &ctx).unwrap(), series_term(&gi, m, n, &ctx).unwrap()));
    }
    let rho = cp.rho;
    let mf = (m as f64).ln();
    for (a, b) in pairs {
        // I values recomputed on fresh grids
        let i0 = g0.i_transform(a.x, &ctx).unwrap().value;
        let ii = gi.i_transform(b.x, &ctx).unwrap().value;
        let reduced = reduction_summand(m, a.n, i0, ii, t, &ctx).unwrap();
        let from_moment = c(2.0 * PI).powc(1.0 - rho)
            * (a.term * (-(rho.conj()) * mf).exp() + b.term * (-rho * mf).exp());
        assert!((reduced - from_moment).norm() <= 1e-8 * reduced.norm().max(1e-300), "n={}", a.n);
        assert!(i0.norm() > 0.0 && ii.norm() > 0.0);
    }
}

fn catalog() -> &'static [MaassForm] {
    static C: OnceLock<Vec<MaassForm>> = OnceLock::new();
    C.get_or_init(|| bundled_catalog().forms)
}

#[test]
fn first_moment_closes_and_wrong_weights_do_not() {
    let ctx = ctx();
    let w = w12();
    let cp = CriticalPoint::new(1.0);
    let ar = arithmetic_side(1, cp, &w, &ctx).unwrap();
    let sp = spectral_side(catalog(), 1, cp, &w, WeightConvention::Harmonic, &ctx).unwrap();
    let b = MomentBreakdown::assemble(&w, WeightConvention::Harmonic, 1.0, &sp, &ar);
    assert!(b.passed, "{b:?}");
    assert_eq!(b.recomputed_residual(), b.residual);
    assert!(b.residual.norm() < 1e-12 * b.spectral.norm());
    for conv in [WeightConvention::HalfHarmonic, WeightConvention::Unweighted] {
        let sp = spectral_side(catalog(), 1, cp, &w, conv, &ctx).unwrap();
        let bad = MomentBreakdown::assemble(&w, conv, 1.0, &sp, &ar);
        assert!(!bad.passed && bad.residual.norm() > 1e3 * bad.tolerances.combined);
    }
}

#[test]
fn spectral_sum_of_one_form() {
    let ctx = ctx();
    let w = w12();
    let cp = CriticalPoint::new(1.0);
    let f = &catalog()[3];
    for m in [1u64, 3] {
        let (v, _, used) = spectral_sum(std::slice::from_ref(f), m, cp, &w, WeightConvention::Harmonic, &ctx).unwrap();
        let l = sym2_l(f, cp.rho, &ctx).unwrap().value;
        let direct = w.h_plain(c(f.t_j())) * f.weight() * f.lambda_square(m).unwrap() * l;
        assert_eq!(used, 1);
        assert!((v - direct).norm() <= 1e-15 * direct.norm());
    }
}

#[test]
fn far_forms_are_negligible() {
    let ctx = ctx();
    let (big_t, big_g) = (12.0, 2.0);
    let w = w12();
    let cp = CriticalPoint::new(1.0);
    let (total, _, _) = spectral_sum(catalog(), 1, cp, &w, WeightConvention::Harmonic, &ctx).unwrap();
    for width in [10.0 * big_g * f64::ln(big_t), 7.0 * big_g] {
        let far: Vec<MaassForm> = catalog().iter().filter(|f| (f.t_j() - big_t).abs() > width).cloned().collect();
        let (v, _, _) = spectral_sum(&far, 1, cp, &w, WeightConvention::Harmonic, &ctx).unwrap();
        assert!(v.norm() <= 1e-12 * total.norm(), "width {width}: {v}");
    }
}

#[test]
fn short_catalog_is_a_coverage_error() {
    let ctx = ctx();
    let short: Vec<MaassForm> = catalog().iter().filter(|f| f.t_j() < 20.0).cloned().collect();
    let r = spectral_side(&short, 1, CriticalPoint::new(1.0), &w12(), WeightConvention::Harmonic, &ctx);
    assert!(matches!(r, Err(Error::Coverage { .. })), "{r:?}");
}

#[test]
fn second_moment_windows() {
    let ctx = ctx();
    let empty = second_moment_experiment(catalog(), 2.0, 10.0, 0.1, &ctx).unwrap();
    assert_eq!((empty.forms, empty.sum), (0, 0.0));
    let row = second_moment_experiment(catalog(), 2.0, 12.0, 2.0, &ctx).unwrap();
    // forms 12.173, 13.780 fall in (12, 14]
    assert_eq!(row.forms, 2);
    let direct: f64 = catalog()
        .iter()
        .filter(|f| f.t_j() > 12.0 && f.t_j() <= 14.0)
        .map(|f| f.weight() * sym2_l(f, Complex64::new(0.5, 4.0), &ctx).unwrap().value.norm_sqr())
        .sum();
    assert!((row.sum - direct).abs() <= 1e-14 * direct);
    assert!((row.ratio - direct / (12f64.powf(1.1) * 2.0)).abs() <= 1e-14 * row.ratio);
}
