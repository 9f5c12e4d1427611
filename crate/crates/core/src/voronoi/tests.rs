use super::*;
use crate::oscint::{adaptive_panels, QuadOptions};
use proptest::prelude::*;

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn bump() -> VoronoiTestFn {
    VoronoiTestFn::gaussian_bump(50.0, 100.0).unwrap()
}

/// Jacobi symbol from the factorisation of `n` and Euler's criterion.
fn jacobi_oracle(a: i64, n: u64) -> i32 {
    let mut out = 1;
    let mut m = n;
    let mut p = 3;
    while m > 1 {
        while m.is_multiple_of(p) {
            m /= p;
            let r = a.rem_euclid(p as i64) as u64;
            let mut acc = 1u64;
            for _ in 0..(p - 1) / 2 {
                acc = acc * r % p;
            }
            out *= match acc {
                0 => 0,
                1 => 1,
                _ => -1,
            };
        }
        p += 2;
    }
    out
}

fn theta_oracle(c: u64, n: i64) -> Complex64 {
    // a ↦ d is a bijection of the unit classes, so sum over d directly
    let mut s = Complex64::new(0.0, 0.0);
    for d in (1..c).step_by(2) {
        if (1..=d).filter(|k| d % k == 0 && c.is_multiple_of(*k)).count() != 1 {
            continue;
        }
        let eps_bar = if d % 4 == 1 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, -1.0) };
        let ang = -2.0 * PI * (d as f64) * (n as f64) / c as f64;
        s += eps_bar * jacobi_oracle(c as i64, d) as f64 * Complex64::from_polar(1.0, ang);
    }
    s
}

#[test]
fn theta_multiplier_examples() {
    let fr = ThetaFrame::new(4, 1).unwrap();
    assert_eq!(fr.d, 1);
    assert_eq!(theta_multiplier(&fr), Complex64::new(1.0, 0.0));
    let fr = ThetaFrame::new(8, 3).unwrap();
    assert_eq!((fr.a * fr.d as i64) % 8, 1);
    assert!(ThetaFrame::new(6, 1).is_err());
    assert!(ThetaFrame::new(8, 2).is_err());
}

#[test]
fn theta_sum_at_four() {
    let v = theta_sum(4, 0).unwrap();
    assert!((v - Complex64::new(1.0, -1.0)).norm() < 1e-15, "{v}");
}

#[test]
fn theta_sum_matches_enumeration() {
    for c in (4..=64).step_by(4) {
        let totient = (1..c).filter(|a| gcd(*a, c) == 1).count() as f64;
        for n in -32i64..=32 {
            let v = theta_sum(c, n).unwrap();
            assert!((v - theta_oracle(c, n)).norm() < 1e-12, "c={c} n={n}");
            assert!(v.norm() <= totient + 1e-12);
            assert!((v - theta_sum(c, n + c as i64).unwrap()).norm() < 1e-12);
        }
    }
}

#[test]
fn shifted_lift_gives_the_same_multiplier() {
    for c in (4..=96u64).step_by(4) {
        for a in 1..c as i64 {
            if gcd(a as u64, c) != 1 {
                continue;
            }
            let r = ThetaFrame::new(c, a).unwrap();
            let s = ThetaFrame::with_lift(c, a, DLift::Shifted).unwrap();
            assert_eq!(s.d, r.d + c);
            assert_eq!(theta_multiplier(&r), theta_multiplier(&s), "c={c} a={a}");
        }
    }
}

#[test]
fn kernel_combinations() {
    for &t in &[0.5, 1.0, 2.5] {
        for &z in &[0.01f64, 0.3, 2.0, 17.0, 400.0] {
            let pp = phi_kernel(KernelTag::PlusPlus, z, t, &ctx()).unwrap();
            let mm = phi_kernel(KernelTag::MinusMinus, z, t, &ctx()).unwrap();
            let fg = bessel_fg_raw(t, 2.0 * z.sqrt(), &ctx()).unwrap();
            let r = (2.0 * z).sqrt();
            assert!((pp - mm - r * fg.f).norm() <= 1e-14 * r);
            assert!((pp + mm + r * fg.g).norm() <= 1e-14 * r);
            assert_eq!(pp.im, 0.0);
            let mp = phi_kernel(KernelTag::MinusPlus, z, t, &ctx()).unwrap();
            let pm = phi_kernel(KernelTag::PlusMinus, z, t, &ctx()).unwrap();
            assert!((pm - mp.conj()).norm() <= 1e-15 * mp.norm());
        }
    }
}

/// `K_ν(x) = π(I_{−ν}(x) − I_ν(x))/(2 sin νπ)` from the power series.
fn k_series(t: f64, x: f64) -> Complex64 {
    let nu = Complex64::new(0.0, 2.0 * t);
    let i_series = |nu: Complex64| {
        let mut term = (Complex64::new((x / 2.0).ln(), 0.0) * nu).exp() / gamma_unchecked(nu + 1.0);
        let mut s = term;
        for k in 1..80 {
            term = term * (x * x / 4.0) / (k as f64 * (nu + k as f64));
            s += term;
        }
        s
    };
    (i_series(-nu) - i_series(nu)) * PI / (2.0 * (nu * PI).sin())
}

#[test]
fn k_kernel_small_argument() {
    for &t in &[1.0, 2.5] {
        let fac = 1.0 / (gamma_unchecked(Complex64::new(0.25, t)) * gamma_unchecked(Complex64::new(0.75, -t)));
        for &z in &[1e-4f64, 0.01, 0.2, 1.0] {
            let x = 2.0 * z.sqrt();
            let want = fac * 2.0 * z.sqrt() * k_series(t, x);
            let got = phi_kernel(KernelTag::MinusPlus, z, t, &ctx()).unwrap();
            assert!((got - want).norm() <= 1e-11 * want.norm(), "t={t} z={z} {got} {want}");
        }
    }
}

#[test]
fn mellin_by_log_substitution() {
    let phi = bump();
    let s = Complex64::new(0.5, 1.0);
    let got = transform_phi(&phi, TransformDirection::MellinPlus, TransformArg::Complex(s), 1.0, &ctx()).unwrap();
    // x = e^v: ∫ φ(e^v) e^{vs} dv
    let mut f = |v: f64| phi.eval(v.exp()) * (s * v).exp();
    let (a, b) = (50f64.ln(), 100f64.ln());
    let want = adaptive_panels(&mut f, &[a, 0.5 * (a + b), b], QuadOptions::new(1e-14)).unwrap().value;
    assert!((got - want).norm() <= 1e-10 * want.norm(), "{got} {want}");
}

#[test]
fn empty_half_line_transforms_vanish() {
    let phi = bump();
    let z = Complex64::new(0.0, 0.0);
    let m = transform_phi(&phi, TransformDirection::MellinMinus, TransformArg::Complex(Complex64::new(0.5, 1.0)), 1.0, &ctx());
    assert_eq!(m.unwrap(), z);
    for dir in [TransformDirection::HatMinusPos, TransformDirection::HatMinusNeg] {
        assert_eq!(transform_phi(&phi, dir, TransformArg::Real(3.0), 1.0, &ctx()).unwrap(), z);
    }
    let r = phi.reflected();
    assert_eq!(r.eval(-75.0), phi.eval(75.0));
    assert_eq!(transform_phi(&r, TransformDirection::HatPlusPos, TransformArg::Real(3.0), 1.0, &ctx()).unwrap(), z);
    assert!(transform_phi(&r, TransformDirection::HatMinusPos, TransformArg::Real(3.0), 1.0, &ctx()).unwrap().norm() > 0.0);
}

#[test]
fn hat_transform_decays() {
    let phi = bump();
    let y = |n: f64| 4.0 * PI * PI * n / 16.0;
    let early = transform_phi(&phi, TransformDirection::HatPlusPos, TransformArg::Real(y(1.0)), 1.0, &ctx()).unwrap();
    assert!(early.norm() > 1e-3);
    for n in [200.0, 300.0, 500.0] {
        let v = transform_phi(&phi, TransformDirection::HatPlusPos, TransformArg::Real(y(n)), 1.0, &ctx()).unwrap();
        assert!(v.norm() <= 1e-12, "n={n}: {v}");
    }
    let k = transform_phi(&phi, TransformDirection::HatPlusNeg, TransformArg::Real(y(1.0)), 1.0, &ctx()).unwrap();
    assert!(k.norm() < 1e-8);
}

#[test]
fn residue_assembly_and_reflection() {
    let phi = bump();
    let (a, b) = residue_parts(&phi, 4, 1.0, Sign::Plus).unwrap();
    assert_eq!(residue_terms(&phi, 4, 1.0, Sign::Plus).unwrap(), a + b);
    for sign in [Sign::Plus, Sign::Minus] {
        let q = if sign == Sign::Minus { phi.reflected() } else { phi };
        let r = residue_terms(&q, 8, 2.5, sign).unwrap();
        let m = residue_terms(&q, 8, -2.5, sign).unwrap();
        assert!((r.conj() - m).norm() <= 1e-13 * r.norm());
    }
    assert!(matches!(residue_terms(&phi, 4, 0.0, Sign::Plus), Err(Error::Pole(_))));
}

#[test]
fn gaussian_example_both_sides() {
    let fr = ThetaFrame::new(4, 1).unwrap();
    for side in [VoronoiSide::PositiveN, VoronoiSide::NegativeN] {
        let r = verify_voronoi(&bump(), &fr, side, 1.0, &VoronoiTruncation::default(), &ctx()).unwrap();
        assert!(r.residual <= 1e-8, "{side:?}: {}", r.residual);
        assert!(r.warning.is_none());
        assert!(!r.lhs_terms.is_empty());
        assert!(r.residual <= 10.0 * r.error_estimate + 1e-12 * r.lhs.norm());
    }
}

#[test]
fn zero_function_gives_zero() {
    let phi = bump().scaled(0.0);
    let fr = ThetaFrame::new(8, 3).unwrap();
    let r = verify_voronoi(&phi, &fr, VoronoiSide::PositiveN, 1.0, &VoronoiTruncation::default(), &ctx()).unwrap();
    assert_eq!(r.lhs, Complex64::new(0.0, 0.0));
    assert_eq!(r.rhs, Complex64::new(0.0, 0.0));
}

#[test]
fn shifting_a_by_c_changes_nothing() {
    let t = VoronoiTruncation::default();
    let a = verify_voronoi(&bump(), &ThetaFrame::new(8, 3).unwrap(), VoronoiSide::PositiveN, 2.5, &t, &ctx()).unwrap();
    let b = verify_voronoi(&bump(), &ThetaFrame::new(8, 11).unwrap(), VoronoiSide::PositiveN, 2.5, &t, &ctx()).unwrap();
    assert_eq!(a.d, b.d);
    let mut b2 = b.clone();
    b2.a = a.a;
    assert_eq!(a, b2);
}

#[test]
fn residual_shrinks_with_the_budget() {
    let fr = ThetaFrame::new(4, 3).unwrap();
    let mut prev = f64::INFINITY;
    for max_n in [10, 40, 80, 20_000] {
        let t = VoronoiTruncation { max_n, ..Default::default() };
        let r = verify_voronoi(&bump(), &fr, VoronoiSide::PositiveN, 1.0, &t, &ctx()).unwrap();
        assert!(r.residual < prev, "max_n={max_n}: {} vs {prev}", r.residual);
        assert_eq!(r.warning.is_some(), max_n < 20_000);
        prev = r.residual;
    }
    assert!(prev < 1e-12);
}

#[test]
fn wrong_multiplier_or_missing_residue_fails() {
    let fr = ThetaFrame::new(8, 3).unwrap();
    let r = verify_voronoi(&bump(), &fr, VoronoiSide::PositiveN, 1.0, &VoronoiTruncation::default(), &ctx()).unwrap();
    let dual = r.dual_positive.value + r.dual_negative.value;
    let eighth = e(0.125);
    let conj_theta = r.theta.conj() * eighth * (2f64.sqrt() * r.residue + dual);
    let no_residue = r.theta * eighth * dual;
    for wrong in [conj_theta, no_residue] {
        assert!((wrong - r.lhs).norm() > 1e-3 * r.lhs.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn frames_are_consistent(k in 1u64..64, a in -500i64..500) {
        let c = 4 * k;
        prop_assume!(gcd(a.rem_euclid(c as i64) as u64, c) == 1);
        let fr = ThetaFrame::new(c, a).unwrap();
        prop_assert!(fr.d > 0 && fr.d < c && fr.d % 2 == 1);
        prop_assert_eq!((a as i128 * fr.d as i128).rem_euclid(c as i128), 1);
        prop_assert!((theta_multiplier(&fr).norm() - 1.0).abs() < 1e-15);
        prop_assert_eq!(jacobi(c as i64, fr.d), jacobi_oracle(c as i64, fr.d));
    }

    #[test]
    fn bump_is_compact_and_nonnegative(x in -10.0f64..200.0) {
        let phi = bump();
        let v = phi.eval(x);
        prop_assert!(v >= 0.0);
        if !(x > 50.0 && x < 100.0) {
            prop_assert_eq!(v, 0.0);
        }
    }
}
