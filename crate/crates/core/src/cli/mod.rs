//! Command-line front end.
//!
//! Exit codes: 0 all checks passed, 1 a check exceeded its tolerance (or a
//! numerical evaluation failed), 2 usage error, 3 environment (files,
//! network, cache, schema).

pub mod checks;
pub mod report;

use crate::maass::{CatalogClient, CatalogQuery, ClientConfig};
use crate::maass::{bundled_catalog, load_forms_file, MaassForm};
use crate::voronoi::standard_bumps;
use crate::{Error, PrecisionContext, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use report::{merge, read_report, write_rows_csv, Report};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ENV: i32 = 3;

pub const DEFAULT_CATALOG_URL: &str = "http://127.0.0.1:8080";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "sym2mom", version, about = "Verifiers for symmetric-square moments, Zagier L-series and Voronoi summation")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Working precision in decimal digits.
    #[arg(long, global = true, default_value_t = 16)]
    pub prec: u32,
    /// Override the family's default tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Catalog cache directory [default: .sym2mom-cache].
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Never touch the network; fail if the cache cannot answer.
    #[arg(long, global = true)]
    pub offline: bool,
    /// Local catalog file; the bundled catalog is used when neither this nor
    /// `--catalog-url` is given.
    #[arg(long, global = true)]
    pub maass_file: Option<PathBuf>,
    /// Remote catalog base URL [default: http://127.0.0.1:8080].
    #[arg(long, global = true)]
    pub catalog_url: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Identity checks with pass/fail verdicts.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Experiments and tables.
    #[command(subcommand)]
    Table(TableCmd),
    /// Populate the catalog cache.
    #[command(subcommand)]
    Fetch(FetchCmd),
    #[command(subcommand)]
    /// Merge report files into per-family summaries.
    Report(ReportCmd),
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Decomposition route against the direct series at s = 2.
    ZagierDecomp {
        #[arg(long, default_value_t = 500)]
        nmax: i64,
    },
    /// Both sides of the Voronoi formula for every (c, a) pair with gcd 1.
    Voronoi {
        #[arg(long, num_args = 1.., default_values_t = [4u64])]
        c: Vec<u64>,
        #[arg(long, num_args = 1.., default_values_t = [1i64])]
        a: Vec<i64>,
        #[arg(long, num_args = 1.., default_values_t = [1.0])]
        t: Vec<f64>,
    },
    /// The exact first-moment formula with a negative control.
    FirstMoment {
        #[arg(long, num_args = 1.., default_values_t = [1u64, 2])]
        m: Vec<u64>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long = "T", default_value_t = 12.0)]
        big_t: f64,
        #[arg(long = "G", default_value_t = 2.0)]
        big_g: f64,
        #[arg(long = "N", default_value_t = 4)]
        big_n: u32,
        #[arg(long)]
        no_control: bool,
    },
    /// Error decay of the ₂F₁ asymptotics.
    #[command(name = "asympt-2f1")]
    Asympt2f1,
    /// Error decay of the K expansion and ODE residuals at random points.
    AsymptBessel {
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// AFE degree independence and V contour independence.
    AfeSelfcheck {
        #[arg(long, default_value_t = 5)]
        forms: usize,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum TableCmd {
    LargeSieve {
        #[arg(long = "N", num_args = 1.., default_values_t = [100u64, 200, 400, 800, 1600, 3200])]
        n: Vec<u64>,
        #[arg(long, num_args = 1.., default_values_t = [0.0, 5.0])]
        t: Vec<f64>,
        #[arg(long, default_value_t = 2.0)]
        max_growth: f64,
    },
    SecondMoment {
        #[arg(long = "T", num_args = 1.., default_values_t = [10.0, 15.0, 20.0])]
        big_t: Vec<f64>,
        #[arg(long = "G", default_value_t = 2.0)]
        big_g: f64,
        #[arg(long, default_value_t = 2.0)]
        t: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum FetchCmd {
    Maass {
        #[arg(long, default_value_t = 0.0)]
        t_min: f64,
        #[arg(long, default_value_t = 40.0)]
        t_max: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum ReportCmd {
    /// Worst case per check family over several report files.
    Merge {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Fetch { .. } | Error::Parse { .. } | Error::Schema(_) | Error::Json(_) | Error::Coverage { .. } => EXIT_ENV,
        Error::Precision(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

impl CommonArgs {
    fn ctx(&self) -> Result<PrecisionContext> {
        PrecisionContext::new(self.prec, 1e-13)
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn cache_dir(&self) -> PathBuf {
        self.cache_dir.clone().unwrap_or_else(|| PathBuf::from(".sym2mom-cache"))
    }

    fn client(&self) -> CatalogClient {
        let url = self.catalog_url.clone().unwrap_or_else(|| DEFAULT_CATALOG_URL.to_string());
        let mut cfg = ClientConfig::new(url, self.cache_dir());
        cfg.offline = self.offline;
        CatalogClient::new(cfg)
    }

    fn forms(&self) -> Result<Vec<MaassForm>> {
        let rep = if let Some(p) = &self.maass_file {
            load_forms_file(p)?
        } else if self.catalog_url.is_some() {
            self.client().fetch(&CatalogQuery { t_min: 0.0, t_max: 40.0 })?.0
        } else {
            bundled_catalog()
        };
        for (line, why) in &rep.rejected {
            eprintln!("catalog line {line} rejected: {why}");
        }
        Ok(rep.forms)
    }
}

fn emit(rep: &Report, common: &CommonArgs) -> Result<()> {
    let mut rep = rep.clone();
    rep.stamp();
    let mut buf = Vec::new();
    match common.format {
        Format::Json => rep.write_json(&mut buf)?,
        Format::Csv => rep.write_csv(&mut buf)?,
    }
    match &common.out {
        Some(p) => std::fs::write(p, buf)?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

fn verdict(rep: &Report) -> i32 {
    if rep.passed == Some(false) {
        EXIT_FAIL
    } else {
        EXIT_PASS
    }
}

/// Runs one parsed command and returns the exit code.
pub fn run(cli: Cli) -> i32 {
    match run_inner(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn run_inner(cli: Cli) -> Result<i32> {
    let common = cli.common;
    if let Some(tol) = common.tol {
        if !(tol > 0.0) {
            eprintln!("error: --tol must be positive, got {tol}");
            return Ok(EXIT_USAGE);
        }
    }
    let ctx = match common.ctx() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(EXIT_USAGE);
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    pool.install(|| dispatch(cli.command, &common, &ctx))
}

fn dispatch(cmd: Command, common: &CommonArgs, ctx: &PrecisionContext) -> Result<i32> {
    let rep = match cmd {
        Command::Verify(v) => match v {
            VerifyCmd::ZagierDecomp { nmax } => checks::zagier_decomp(nmax, common.tol(1e-8), ctx)?,
            VerifyCmd::Voronoi { c, a, t } => {
                let frames: Vec<(u64, i64)> = c
                    .iter()
                    .flat_map(|&c| a.iter().map(move |&a| (c, a)))
                    .filter(|&(c, a)| c % 4 == 0 && c > 0 && gcd(a.rem_euclid(c as i64) as u64, c) == 1)
                    .collect();
                if frames.is_empty() {
                    eprintln!("error: no (c, a) pair with 4 | c and gcd(a, c) = 1");
                    return Ok(EXIT_USAGE);
                }
                checks::voronoi(&frames, &t, &standard_bumps(), common.tol(1e-8), ctx)?
            }
            VerifyCmd::FirstMoment { m, t, big_t, big_g, big_n, no_control } => {
                checks::first_moment(&common.forms()?, &m, t, big_t, big_g, big_n, !no_control, ctx)?
            }
            VerifyCmd::Asympt2f1 => checks::asympt_2f1(ctx)?,
            VerifyCmd::AsymptBessel { points } => {
                let decay = checks::asympt_bessel(ctx)?;
                let ode = checks::ode_residuals(common.seed, points, common.tol(1e-6), ctx)?;
                let mut rep = Report::new("asympt-bessel", serde_json::json!({ "decay": decay.parameters, "ode": ode.parameters }));
                rep.rows = decay.rows.into_iter().chain(ode.rows).collect();
                rep.notes = vec![
                    format!("decay ratio {:.4} (must be ≤ {:.4})", decay.worst_residual.unwrap_or(f64::NAN), 1.0 / checks::DECAY_FACTOR),
                    format!("worst ODE residual {:.3e} (tolerance {:.1e})", ode.worst_residual.unwrap_or(f64::NAN), ode.tolerance.unwrap_or(f64::NAN)),
                ];
                rep.passed = Some(decay.passed == Some(true) && ode.passed == Some(true));
                rep
            }
            VerifyCmd::AfeSelfcheck { forms, t } => {
                checks::afe_selfcheck(&common.forms()?, forms, t, common.tol(1e-6), 1e-10, ctx)?
            }
        },
        Command::Table(tc) => match tc {
            TableCmd::LargeSieve { n, t, max_growth } => {
                let mut n = n;
                n.sort_unstable();
                checks::large_sieve(&n, &t, max_growth, ctx)?
            }
            TableCmd::SecondMoment { big_t, big_g, t } => checks::second_moment(&common.forms()?, &big_t, big_g, t, ctx)?,
        },
        Command::Fetch(FetchCmd::Maass { t_min, t_max }) => {
            if !(t_min >= 0.0 && t_max > t_min) {
                eprintln!("error: need 0 <= t_min < t_max");
                return Ok(EXIT_USAGE);
            }
            let client = common.client();
            let (load, fr) = client.fetch(&CatalogQuery { t_min, t_max })?;
            println!("{} fetched, {} cached", fr.fetched, fr.cached);
            if !load.rejected.is_empty() {
                eprintln!("{} record(s) rejected", load.rejected.len());
            }
            return Ok(EXIT_PASS);
        }
        Command::Report(ReportCmd::Merge { paths }) => {
            let reports = paths.iter().map(|p| read_report(p)).collect::<Result<Vec<_>>>()?;
            let rows = merge(&reports);
            let mut buf = Vec::new();
            match common.format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut buf, &rows)?;
                    buf.push(b'\n');
                }
                Format::Csv => {
                    let vals = rows.iter().map(serde_json::to_value).collect::<std::result::Result<Vec<_>, _>>()?;
                    write_rows_csv(&vals, &mut buf)?;
                }
            }
            match &common.out {
                Some(p) => std::fs::write(p, buf)?,
                None => std::io::stdout().write_all(&buf)?,
            }
            return Ok(if rows.iter().any(|r| r.passed == Some(false)) { EXIT_FAIL } else { EXIT_PASS });
        }
    };
    emit(&rep, common)?;
    Ok(verdict(&rep))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Parses `args` and runs; clap usage errors map to exit code 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            code
        }
    }
}
