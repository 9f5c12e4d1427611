//! Level-one Maass cusp forms: catalog records, validation, the remote
//! catalog client, symmetric-square L-values and the spectral test
//! functions used by the moment formula.
//!
//! Record format (one JSON object per line):
//!
//! ```text
//! {"t_j": 9.53369526135355, "parity": "odd", "weight": 1.27,
//!  "coefficients": [[1, 1.0], [2, -1.068333551], ...], "source": "..."}
//! ```
//!
//! `coefficients` must list `λ(n)` for every `n = 1..n_max` (any order).
//! `weight` is the harmonic weight `|ρ(1)|²/cosh(π t_j)` of the
//! L²-normalized form.

mod afe;
mod client;
mod spectral;

pub use afe::{
    conductor, sym2_l_poly, v_weight_line, AfeConfig, Sym2Method, AUTO_B, l_infinity, ln_l_infinity, linf_ratio, linf_ratio_lemma, linf_ratio_main, sym2_l, sym2_l_direct,
    sym2_l_with, v_main_term, v_split, v_weight, AfePolynomial, LinfRatioReport, Sym2Value, VKernel, VSplit,
};
pub use client::{CatalogClient, CatalogQuery, ClientConfig, FetchReport};
pub use spectral::{q_n, SpectralVariant, SpectralWeight};

use crate::zagier::arith::{factor, primes_up_to};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::BufRead;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// The on-disk / on-wire form of a catalog entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaassRecord {
    pub t_j: f64,
    pub parity: Parity,
    pub weight: f64,
    pub coefficients: Vec<(u64, f64)>,
    pub source: String,
}

/// How catalog weights are turned into the `α_j` of the spectral sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightConvention {
    /// `α_j = |ρ_j(1)|²/cosh(π t_j)` as stored.
    Harmonic,
    /// Half the stored weight (the coefficient normalization that folds
    /// `±n` together).
    HalfHarmonic,
    /// `α_j = 1`.
    Unweighted,
}

impl WeightConvention {
    pub const ALL: [WeightConvention; 3] = [WeightConvention::Harmonic, WeightConvention::HalfHarmonic, WeightConvention::Unweighted];

    pub fn apply(self, stored: f64) -> f64 {
        match self {
            WeightConvention::Harmonic => stored,
            WeightConvention::HalfHarmonic => 0.5 * stored,
            WeightConvention::Unweighted => 1.0,
        }
    }
}

impl std::str::FromStr for WeightConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "harmonic" => Ok(WeightConvention::Harmonic),
            "half-harmonic" => Ok(WeightConvention::HalfHarmonic),
            "unweighted" => Ok(WeightConvention::Unweighted),
            _ => Err(Error::domain(format!("unknown weight convention {s:?}"))),
        }
    }
}

/// Relative tolerance of the Hecke check on stored coefficients.
pub const HECKE_TOL: f64 = 1e-8;

/// A validated Hecke–Maass cusp form.
#[derive(Clone, Debug, PartialEq)]
pub struct MaassForm {
    t_j: f64,
    parity: Parity,
    weight: f64,
    /// `λ(n)` at index `n − 1`.
    hecke: Vec<f64>,
    /// `λ(m²)` at index `m − 1`, for `m ≤ n_max`.
    squares: Vec<f64>,
    source: String,
}

impl MaassForm {
    pub fn t_j(&self) -> f64 {
        self.t_j
    }
    pub fn parity(&self) -> Parity {
        self.parity
    }
    pub fn weight(&self) -> f64 {
        self.weight
    }
    pub fn source(&self) -> &str {
        &self.source
    }
    pub fn n_max(&self) -> u64 {
        self.hecke.len() as u64
    }
    /// `λ(n)` for `1 ≤ n ≤ n_max`.
    pub fn lambda(&self, n: u64) -> Option<f64> {
        if n == 0 {
            return None;
        }
        self.hecke.get(n as usize - 1).copied()
    }
    /// `λ(m²)` for `m ≤ n_max`, from the prime coefficients.
    pub fn lambda_square(&self, m: u64) -> Option<f64> {
        if m == 0 {
            return None;
        }
        self.squares.get(m as usize - 1).copied()
    }
    pub fn square_supply(&self) -> u64 {
        self.squares.len() as u64
    }

    /// A copy with a different weight; used for synthetic checks and for
    /// catalog generation.
    pub fn with_weight(&self, weight: f64) -> Result<MaassForm> {
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(Error::domain("weight must be positive"));
        }
        let mut f = self.clone();
        f.weight = weight;
        Ok(f)
    }

    pub fn to_record(&self) -> MaassRecord {
        MaassRecord {
            t_j: self.t_j,
            parity: self.parity,
            weight: self.weight,
            coefficients: self.hecke.iter().enumerate().map(|(i, &v)| (i as u64 + 1, v)).collect(),
            source: self.source.clone(),
        }
    }

    /// Validate a record; `index` only labels the error.
    pub fn from_record(rec: &MaassRecord, index: usize) -> Result<MaassForm> {
        let bad = |reason: String| Error::Record { index, reason };
        if !(rec.t_j > 0.0) || !rec.t_j.is_finite() {
            return Err(bad(format!("t_j must be positive, got {}", rec.t_j)));
        }
        if !(rec.weight > 0.0) || !rec.weight.is_finite() {
            return Err(bad(format!("weight must be positive, got {}", rec.weight)));
        }
        let n_max = rec.coefficients.iter().map(|&(n, _)| n).max().unwrap_or(0);
        if n_max == 0 || n_max > 10_000_000 {
            return Err(bad("coefficient list is empty or out of range".into()));
        }
        let mut hecke = vec![f64::NAN; n_max as usize];
        for &(n, v) in &rec.coefficients {
            if n == 0 {
                return Err(bad("coefficient index 0".into()));
            }
            if !v.is_finite() {
                return Err(bad(format!("λ({n}) is not finite")));
            }
            let slot = &mut hecke[n as usize - 1];
            if !slot.is_nan() {
                return Err(bad(format!("λ({n}) listed twice")));
            }
            *slot = v;
        }
        if let Some(i) = hecke.iter().position(|v| v.is_nan()) {
            return Err(bad(format!("λ({}) missing; coefficients must be contiguous", i + 1)));
        }
        if (hecke[0] - 1.0).abs() > HECKE_TOL {
            return Err(bad(format!("λ(1) = {} ≠ 1", hecke[0])));
        }
        if let Some((m, n, lhs, rhs)) = hecke_violation(&hecke) {
            return Err(bad(format!("Hecke relation violated: λ({m})λ({n}) = {lhs} but Σ λ(mn/d²) = {rhs}")));
        }
        let squares = squares_from_primes(&hecke);
        Ok(MaassForm {
            t_j: rec.t_j,
            parity: rec.parity,
            weight: rec.weight,
            hecke,
            squares,
            source: rec.source.clone(),
        })
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// First `(m, n)` with `mn ≤ n_max` where the Hecke relation fails.
fn hecke_violation(h: &[f64]) -> Option<(u64, u64, f64, f64)> {
    let n_max = h.len() as u64;
    for m in 2..=n_max {
        if m * m > n_max {
            break;
        }
        for n in m..=n_max / m {
            let g = gcd(m, n);
            let rhs: f64 = (1..=g).filter(|d| g.is_multiple_of(*d)).map(|d| h[(m * n / (d * d)) as usize - 1]).sum();
            let lhs = h[m as usize - 1] * h[n as usize - 1];
            if (lhs - rhs).abs() > HECKE_TOL * (1.0 + lhs.abs()) {
                return Some((m, n, lhs, rhs));
            }
        }
    }
    None
}

/// `λ(m²)` for `m ≤ n_max` by multiplicativity and
/// `λ(p^{k+1}) = λ(p)λ(p^k) − λ(p^{k−1})`.
fn squares_from_primes(h: &[f64]) -> Vec<f64> {
    let n_max = h.len() as u64;
    let primes = primes_up_to(n_max);
    // λ(p^{2e}) tables for each prime, indexed by e
    let mut pp: std::collections::HashMap<u64, Vec<f64>> = std::collections::HashMap::new();
    for &p in primes.iter() {
        let lp = h[p as usize - 1];
        let mut emax = 0;
        let mut q = 1u64;
        while q <= n_max / p {
            q *= p;
            emax += 1;
        }
        let mut pow = vec![1.0, lp];
        for k in 2..=2 * emax {
            pow.push(lp * pow[k - 1] - pow[k - 2]);
        }
        pp.insert(p, (0..=emax).map(|e| pow[2 * e]).collect());
    }
    (1..=n_max)
        .map(|m| factor(m).iter().map(|&(p, e)| pp[&p][e as usize]).product())
        .collect()
}

/// Outcome of loading a catalog source: accepted forms and rejected
/// records with their diagnostics.
#[derive(Debug, Default)]
pub struct LoadReport {
    pub forms: Vec<MaassForm>,
    pub rejected: Vec<(usize, String)>,
    /// SHA-256 of the raw source bytes.
    pub digest: String,
}

/// Parse line-delimited records; blank lines are skipped.
pub fn parse_records(text: &str) -> LoadReport {
    let mut rep = LoadReport {
        digest: hex::encode(Sha256::digest(text.as_bytes())),
        ..Default::default()
    };
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let rec: MaassRecord = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(e) => {
                rep.rejected.push((i + 1, format!("malformed record: {e}")));
                continue;
            }
        };
        match MaassForm::from_record(&rec, i + 1) {
            Ok(f) => rep.forms.push(f),
            Err(Error::Record { reason, .. }) => rep.rejected.push((i + 1, reason)),
            Err(e) => rep.rejected.push((i + 1, e.to_string())),
        }
    }
    rep.forms.sort_by(|a, b| a.t_j.total_cmp(&b.t_j));
    rep
}

/// Load a local catalog file.
pub fn load_forms_file(path: &Path) -> Result<LoadReport> {
    let mut text = String::new();
    let f = std::fs::File::open(path)?;
    for line in std::io::BufReader::new(f).lines() {
        text.push_str(&line?);
        text.push('\n');
    }
    Ok(parse_records(&text))
}

/// Where forms come from.
pub enum FormSource<'a> {
    File(&'a Path),
    Remote(&'a CatalogClient, CatalogQuery),
}

/// Load forms from a file or through the catalog client.
pub fn load_forms(source: FormSource<'_>) -> Result<LoadReport> {
    match source {
        FormSource::File(p) => load_forms_file(p),
        FormSource::Remote(client, q) => client.fetch(&q).map(|(rep, _)| rep),
    }
}

/// The catalog shipped with the crate (`data/maass_level1.jsonl`).
pub fn bundled_catalog() -> LoadReport {
    parse_records(include_str!("../../data/maass_level1.jsonl"))
}

/// Serialize forms as catalog lines.
pub fn write_records(forms: &[MaassForm]) -> String {
    let mut s = String::new();
    for f in forms {
        s.push_str(&serde_json::to_string(&f.to_record()).expect("records serialize"));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Hecke eigenvalues of a toy multiplicative system with `λ(p) = 2cos θ_p`.
    pub(crate) fn toy_record(t_j: f64, n_max: u64) -> MaassRecord {
        let primes = primes_up_to(n_max);
        let mut lp = std::collections::HashMap::new();
        for (i, &p) in primes.iter().enumerate() {
            lp.insert(p, 2.0 * (0.7 + 1.3 * i as f64).cos());
        }
        let coeff = |n: u64| -> f64 {
            factor(n)
                .iter()
                .map(|&(p, e)| {
                    let (mut a, mut b) = (1.0, lp[&p]);
                    for _ in 1..e {
                        let c = lp[&p] * b - a;
                        a = b;
                        b = c;
                    }
                    if e == 0 {
                        1.0
                    } else {
                        b
                    }
                })
                .product()
        };
        MaassRecord {
            t_j,
            parity: Parity::Even,
            weight: 1.0,
            coefficients: (1..=n_max).map(|n| (n, coeff(n))).collect(),
            source: "toy".into(),
        }
    }

    #[test]
    fn round_trip_three_forms() {
        let recs: Vec<MaassRecord> = [5.0, 6.0, 7.0].iter().map(|&t| toy_record(t, 60)).collect();
        let text: String = recs.iter().map(|r| serde_json::to_string(r).unwrap() + "\n").collect();
        let rep = parse_records(&text);
        assert_eq!(rep.forms.len(), 3, "{:?}", rep.rejected);
        for f in &rep.forms {
            assert_eq!(f.lambda(1), Some(1.0));
        }
        assert_eq!(parse_records(&write_records(&rep.forms)).forms, rep.forms);
    }

    #[test]
    fn hecke_violation_is_rejected() {
        let mut rec = toy_record(5.0, 30);
        rec.coefficients[5].1 += 1e-3; // λ(6)
        let text = serde_json::to_string(&rec).unwrap();
        let rep = parse_records(&text);
        assert!(rep.forms.is_empty());
        assert!(rep.rejected[0].1.contains("Hecke relation violated: λ(2)λ(3)"), "{:?}", rep.rejected);
    }

    #[test]
    fn other_rejections() {
        let mut rec = toy_record(5.0, 10);
        rec.weight = 0.0;
        assert!(MaassForm::from_record(&rec, 1).is_err());
        let mut rec = toy_record(5.0, 10);
        rec.coefficients.remove(3);
        assert!(MaassForm::from_record(&rec, 1).is_err());
        let rep = parse_records("{not json}\n");
        assert_eq!(rep.rejected.len(), 1);
    }

    #[test]
    fn squares_match_direct_entries() {
        let f = MaassForm::from_record(&toy_record(5.0, 200), 0).unwrap();
        for m in 1..=14u64 {
            let direct = f.lambda(m * m).unwrap();
            assert!((direct - f.lambda_square(m).unwrap()).abs() < 1e-12);
        }
        assert_eq!(f.square_supply(), 200);
    }

    #[test]
    fn bundled_catalog_is_valid() {
        let rep = bundled_catalog();
        assert!(rep.rejected.is_empty(), "{:?}", rep.rejected);
        assert!(rep.forms.len() > 30);
        let first = &rep.forms[0];
        assert!((first.t_j() - 9.533_695_261_353_557).abs() < 1e-9);
        assert_eq!(first.parity(), Parity::Odd);
        for f in &rep.forms {
            for m in 1..=(f.n_max() as f64).sqrt() as u64 {
                assert!((f.lambda(m * m).unwrap() - f.lambda_square(m).unwrap()).abs() < 1e-8);
            }
        }
    }
}
