//! Hejhal's method for even and odd Maass cusp forms on SL₂(ℤ).
//!
//! `search` scans `r` for sign changes of the residual of the dropped
//! first equation, refines each root and writes raw Fourier coefficients;
//! `catalog` attaches harmonic weights and writes the bundled JSONL file.

use clap::{Parser, Subcommand};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::{BufRead, Write};
use sym2mom::specfun::bessel_k_imag_raw;
use sym2mom::PrecisionContext;

#[derive(Parser)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Locate eigenvalues and compute `λ(n)` for `n ≤ n_max`.
    Search {
        #[arg(long, default_value_t = 9.0)]
        r_min: f64,
        #[arg(long, default_value_t = 32.0)]
        r_max: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, default_value_t = 500)]
        n_max: usize,
        #[arg(long)]
        out: std::path::PathBuf,
    },
    /// Attach the weights `2/L(1, sym² u)` and write the catalog.
    Catalog {
        #[arg(long)]
        raw: std::path::PathBuf,
        #[arg(long)]
        out: std::path::PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn cs(self, x: f64) -> f64 {
        match self {
            Parity::Even => x.cos(),
            Parity::Odd => x.sin(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawForm {
    r: f64,
    parity: Parity,
    hecke_defect: f64,
    y_stability: f64,
    coefficients: Vec<f64>,
}

/// `e^{πr/2} K_{ir}(x)`.
fn kt(r: f64, x: f64) -> f64 {
    bessel_k_imag_raw(r / 2.0, x, &PrecisionContext::default()).expect("K evaluation")
}

/// Pull `x + iY` back into the standard fundamental domain.
fn pullback(mut x: f64, mut y: f64) -> (f64, f64) {
    loop {
        x -= x.round();
        let n2 = x * x + y * y;
        if n2 >= 1.0 - 1e-15 {
            return (x, y);
        }
        x = -x / n2;
        y /= n2;
    }
}

struct Grid {
    y: f64,
    xs: Vec<f64>,
    pulled: Vec<(f64, f64)>,
}

impl Grid {
    fn new(y: f64, q: usize) -> Self {
        let xs: Vec<f64> = (1..=q).map(|m| (m as f64 - 0.5) / (2.0 * q as f64)).collect();
        let pulled = xs.iter().map(|&x| pullback(x, y)).collect();
        Grid { y, xs, pulled }
    }
}

fn truncation(r: f64, y: f64) -> usize {
    ((r + 45.0) / (2.0 * PI * y)).ceil() as usize
}

/// `V_{nl}` for `1 ≤ n, l ≤ m`.
fn hejhal_matrix(r: f64, parity: Parity, grid: &Grid, m: usize) -> DMatrix<f64> {
    let q = grid.xs.len();
    let mut w = DMatrix::<f64>::zeros(q, m);
    for (i, &(xs, ys)) in grid.pulled.iter().enumerate() {
        let sy = ys.sqrt();
        for l in 1..=m {
            let lf = l as f64;
            w[(i, l - 1)] = sy * kt(r, 2.0 * PI * lf * ys) * parity.cs(2.0 * PI * lf * xs);
        }
    }
    let mut v = DMatrix::<f64>::zeros(m, m);
    for n in 1..=m {
        let cs: Vec<f64> = grid.xs.iter().map(|&x| parity.cs(2.0 * PI * n as f64 * x)).collect();
        for l in 1..=m {
            let mut s = 0.0;
            for i in 0..q {
                s += w[(i, l - 1)] * cs[i];
            }
            v[(n - 1, l - 1)] = 2.0 * s / q as f64;
        }
        v[(n - 1, n - 1)] -= grid.y.sqrt() * kt(r, 2.0 * PI * n as f64 * grid.y);
    }
    v
}

/// Solve with `c(1) = 1` from equations `2..m`; returns the coefficients
/// and the residual of the first equation.
fn solve(r: f64, parity: Parity, y: f64) -> (Vec<f64>, f64) {
    let m = truncation(r, y);
    let grid = Grid::new(y, m + 12);
    let v = hejhal_matrix(r, parity, &grid, m);
    let a = v.view((1, 1), (m - 1, m - 1)).into_owned();
    let b = -v.view((1, 0), (m - 1, 1)).column(0).into_owned();
    let sol = a.lu().solve(&b).unwrap_or_else(|| DVector::from_element(m - 1, f64::NAN));
    let mut c = vec![1.0];
    c.extend(sol.iter().copied());
    let resid = (0..m).map(|l| v[(0, l)] * c[l]).sum::<f64>();
    (c, resid)
}

const Y0: f64 = 0.80;
const Y1: f64 = 0.72;

fn residual(r: f64, parity: Parity) -> f64 {
    solve(r, parity, Y0).1
}

/// Illinois regula falsi on a bracketing interval.
fn refine(mut a: f64, mut b: f64, parity: Parity) -> f64 {
    let mut fa = residual(a, parity);
    let mut fb = residual(b, parity);
    let mut side = 0;
    for _ in 0..80 {
        let c = (a * fb - b * fa) / (fb - fa);
        if (b - a).abs() < 1e-14 * c.abs() {
            return c;
        }
        let fc = residual(c, parity);
        if fc == 0.0 {
            return c;
        }
        if (fc > 0.0) == (fb > 0.0) {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    (a * fb - b * fa) / (fb - fa)
}

fn hecke_defect(c: &[f64]) -> f64 {
    let d1 = (c[1] * c[2] - c[5]).abs();
    let d2 = (c[1] * c[1] - 1.0 - c[3]).abs();
    d1.max(d2)
}

/// Largest `|c(m)c(n) − Σ_{d|(m,n)} c(mn/d²)|` over the stored range.
fn hecke_full(c: &[f64]) -> f64 {
    let n = c.len();
    let mut worst = 0.0f64;
    for a in 2..=n {
        for b in a..=n / a {
            let g = gcd(a, b);
            let s: f64 = (1..=g).filter(|d| g.is_multiple_of(*d)).map(|d| c[a * b / (d * d) - 1]).sum();
            worst = worst.max((c[a - 1] * c[b - 1] - s).abs());
        }
    }
    worst
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `c(n)` for `1 ≤ n ≤ n_max` from the first-stage coefficients, using for
/// each `n` the height among a geometric ladder that maximizes `|K(2πnY)|`.
fn coefficients(r: f64, parity: Parity, c0: &[f64], n_max: usize) -> Vec<f64> {
    let m0 = c0.len();
    let y_min = (r / (2.0 * PI * n_max as f64)) * 0.6;
    let mut ladder = vec![];
    let mut y = Y0;
    while y > y_min {
        ladder.push(y);
        y *= 0.8;
    }
    ladder.push(y_min);
    let mut best = vec![(0usize, 0.0f64); n_max + 1];
    for (j, &y) in ladder.iter().enumerate() {
        for n in 1..=n_max {
            let k = (y.sqrt() * kt(r, 2.0 * PI * n as f64 * y)).abs();
            if k > best[n].1 {
                best[n] = (j, k);
            }
        }
    }
    let mut out = vec![0.0; n_max];
    out[0] = 1.0;
    for (j, &y) in ladder.iter().enumerate() {
        let ns: Vec<usize> = (2..=n_max).filter(|&n| best[n].0 == j).collect();
        if ns.is_empty() {
            continue;
        }
        let top = *ns.iter().max().unwrap();
        let q = top + truncation(r, y) + 12;
        let grid = Grid::new(y, q);
        let u: Vec<f64> = grid
            .pulled
            .iter()
            .map(|&(xs, ys)| {
                let sy = ys.sqrt();
                (1..=m0)
                    .map(|l| {
                        let lf = l as f64;
                        c0[l - 1] * sy * kt(r, 2.0 * PI * lf * ys) * parity.cs(2.0 * PI * lf * xs)
                    })
                    .sum::<f64>()
            })
            .collect();
        for n in ns {
            let s: f64 = grid.xs.iter().zip(&u).map(|(&x, &uv)| uv * parity.cs(2.0 * PI * n as f64 * x)).sum();
            let k = y.sqrt() * kt(r, 2.0 * PI * n as f64 * y);
            out[n - 1] = 2.0 * s / (q as f64 * k);
        }
    }
    out
}

fn search(r_min: f64, r_max: f64, step: f64, n_max: usize) -> Vec<RawForm> {
    let steps = ((r_max - r_min) / step).ceil() as usize;
    let grid: Vec<f64> = (0..=steps).map(|i| r_min + i as f64 * step).collect();
    let mut forms = vec![];
    for parity in [Parity::Even, Parity::Odd] {
        let e: Vec<f64> = grid.par_iter().map(|&r| residual(r, parity)).collect();
        let brackets: Vec<(f64, f64)> = (1..grid.len())
            .filter(|&i| e[i - 1].is_finite() && e[i].is_finite() && (e[i - 1] > 0.0) != (e[i] > 0.0))
            .map(|i| (grid[i - 1], grid[i]))
            .collect();
        let found: Vec<Option<RawForm>> = brackets
            .par_iter()
            .map(|&(a, b)| {
                let r = refine(a, b, parity);
                let (c0, _) = solve(r, parity, Y0);
                let (c1, _) = solve(r, parity, Y1);
                let defect = hecke_defect(&c0);
                let stab = (1..6).map(|i| (c0[i] - c1[i]).abs()).fold(0.0, f64::max);
                if defect > 1e-6 || stab > 1e-6 {
                    eprintln!("reject {parity:?} r={r:.10}: hecke {defect:.1e}, Y-drift {stab:.1e}");
                    return None;
                }
                let coefficients = coefficients(r, parity, &c0, n_max);
                let full = hecke_full(&coefficients);
                eprintln!("found {parity:?} r={r:.12}: hecke {defect:.1e}, Y-drift {stab:.1e}, full hecke {full:.1e}");
                Some(RawForm { r, parity, hecke_defect: defect, y_stability: stab, coefficients })
            })
            .collect();
        forms.extend(found.into_iter().flatten());
    }
    forms.sort_by(|a, b| a.r.partial_cmp(&b.r).unwrap());
    forms
}

fn main() {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Search { r_min, r_max, step, n_max, out } => {
            let forms = search(r_min, r_max, step, n_max);
            let mut f = std::io::BufWriter::new(std::fs::File::create(out).expect("create output"));
            for form in &forms {
                writeln!(f, "{}", serde_json::to_string(form).unwrap()).unwrap();
            }
            eprintln!("{} forms", forms.len());
        }
        Cmd::Catalog { raw, out } => {
            let f = std::io::BufReader::new(std::fs::File::open(raw).expect("open raw file"));
            let forms: Vec<RawForm> = f.lines().map(|l| serde_json::from_str(&l.unwrap()).unwrap()).collect();
            catalog(&forms, &out);
        }
    }
}

/// Weyl's law for SL₂(ℤ) cusp forms: `N(R) ≈ R²/12 − (2R/π) log(R/(e√(π/2))) − 131/144`.
fn weyl(r: f64) -> f64 {
    let e = std::f64::consts::E;
    r * r / 12.0 - 2.0 * r / PI * (r / (e * (PI / 2.0).sqrt())).ln() - 131.0 / 144.0
}

fn catalog(forms: &[RawForm], out: &std::path::Path) {
    use sym2mom::maass::{write_records, AfePolynomial, MaassForm, MaassRecord, Parity as P};
    use sym2mom::Complex64;
    let ctx = PrecisionContext::default();
    let built: Vec<MaassForm> = forms
        .par_iter()
        .map(|f| {
            let rec = MaassRecord {
                t_j: f.r,
                parity: if f.parity == Parity::Even { P::Even } else { P::Odd },
                weight: 1.0,
                coefficients: f.coefficients.iter().enumerate().map(|(i, &v)| (i as u64 + 1, v)).collect(),
                source: format!(
                    "hejhal level 1; Hecke defect {:.1e}; height drift {:.1e}",
                    f.hecke_defect, f.y_stability
                ),
            };
            let form = MaassForm::from_record(&rec, 0).expect("generated record validates");
            // α = |ρ(1)|²/cosh(πt) = 2/L(1, sym² u) for L²-normalized u
            let p = AfePolynomial::new(0, 0.0);
            let l1 = sym2mom::maass::sym2_l_poly(&form, Complex64::new(1.0, 0.0), &p, &ctx).expect("L(1, sym²)");
            eprintln!("t = {:.10}: L(1, sym²) = {:.12} ({} terms)", f.r, l1.value.re, l1.terms);
            form.with_weight(2.0 / l1.value.re).unwrap()
        })
        .collect();
    std::fs::write(out, write_records(&built)).expect("write catalog");
    for &r in &[10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0] {
        let n = forms.iter().filter(|f| f.r <= r).count();
        eprintln!("N({r}) = {n}, Weyl {:.1}", weyl(r));
    }
}
