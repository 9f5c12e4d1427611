//! C ABI over the sym2mom evaluators.
//!
//! Every function returns an [`S2mStatus`]; results go through out pointers.
//! On failure the message is kept per thread and read back with
//! [`s2m_last_error`].  Precision contexts and form catalogs are opaque
//! handles owned by the caller and released with their `_free` function.
//! Panics are caught at the boundary and reported as `S2M_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use sym2mom::maass::{self, MaassForm, SpectralWeight, WeightConvention};
use sym2mom::moment::{self, CriticalPoint};
use sym2mom::voronoi::{theta_multiplier, ThetaFrame};
use sym2mom::{specfun, zagier, Complex64, Error, PrecisionContext};

/// Return code of every fallible call; `Ok` is zero.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum S2mStatus {
    Ok = 0,
    NullArgument = 1,
    Domain = 2,
    Pole = 3,
    Regime = 4,
    Precision = 5,
    Budget = 6,
    Coverage = 7,
    Io = 8,
    Parse = 9,
    IndexOutOfRange = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct S2mComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for S2mComplex {
    fn from(z: Complex64) -> Self {
        S2mComplex { re: z.re, im: z.im }
    }
}

impl From<S2mComplex> for Complex64 {
    fn from(z: S2mComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Components of the first-moment identity.  `passed` is
/// `residual_abs <= tolerance`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct S2mMomentResult {
    pub spectral: S2mComplex,
    pub main_term: S2mComplex,
    pub continuous: S2mComplex,
    pub extra: S2mComplex,
    pub s1: S2mComplex,
    pub s2: S2mComplex,
    pub residual_abs: f64,
    pub tolerance: f64,
    pub forms_used: usize,
    pub passed: bool,
}

/// Opaque precision context.
pub struct S2mContext {
    inner: PrecisionContext,
}

/// Opaque list of Maass forms sorted by `t_j`.
pub struct S2mCatalog {
    forms: Vec<MaassForm>,
    rejected: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut v = e.borrow_mut();
        v.clear();
        v.extend(msg.bytes().filter(|&b| b != 0));
    });
}

fn status_of(e: &Error) -> S2mStatus {
    match e {
        Error::Pole(_) => S2mStatus::Pole,
        Error::Domain(_) => S2mStatus::Domain,
        Error::Regime(_) => S2mStatus::Regime,
        Error::Precision(_) => S2mStatus::Precision,
        Error::Budget { .. } => S2mStatus::Budget,
        Error::Coverage { .. } => S2mStatus::Coverage,
        Error::Io(_) | Error::Fetch { .. } => S2mStatus::Io,
        Error::Parse { .. } | Error::Record { .. } | Error::Schema(_) | Error::Json(_) => S2mStatus::Parse,
    }
}

fn guard(f: impl FnOnce() -> Result<(), S2mStatus>) -> S2mStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => S2mStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("panic: {msg}"));
            S2mStatus::Panic
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, S2mStatus>;
}

impl<T> OrStatus<T> for sym2mom::Result<T> {
    fn or_status(self) -> Result<T, S2mStatus> {
        self.map_err(|e| {
            set_error(&e.to_string());
            status_of(&e)
        })
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, S2mStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null argument");
        S2mStatus::NullArgument
    })
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), S2mStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(S2mStatus::NullArgument);
    }
    out.write(v);
    Ok(())
}

unsafe fn write_box<T>(out: *mut *mut T, v: T) -> Result<(), S2mStatus> {
    if out.is_null() {
        return write(out, std::ptr::null_mut());
    }
    write(out, Box::into_raw(Box::new(v)))
}

fn form(cat: &S2mCatalog, index: usize) -> Result<&MaassForm, S2mStatus> {
    cat.forms.get(index).ok_or_else(|| {
        set_error(&format!("form index {index} out of range (catalog has {})", cat.forms.len()));
        S2mStatus::IndexOutOfRange
    })
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes) and returns the full message length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn s2m_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn s2m_context_new(working_digits: u32, target_rel_error: f64, out: *mut *mut S2mContext) -> S2mStatus {
    guard(|| {
        let inner = PrecisionContext::new(working_digits, target_rel_error).or_status()?;
        write_box(out, S2mContext { inner })
    })
}

/// # Safety
/// `ctx` must be null or come from [`s2m_context_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn s2m_context_free(ctx: *mut S2mContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// The catalog bundled with the library.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn s2m_catalog_bundled(out: *mut *mut S2mCatalog) -> S2mStatus {
    guard(|| {
        let rep = maass::bundled_catalog();
        write_box(
            out,
            S2mCatalog {
                forms: rep.forms,
                rejected: rep.rejected.len(),
            },
        )
    })
}

/// Loads a line-delimited catalog file.  Malformed records are skipped and
/// counted; see [`s2m_catalog_rejected`].
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn s2m_catalog_open(path: *const c_char, out: *mut *mut S2mCatalog) -> S2mStatus {
    guard(|| {
        if path.is_null() {
            set_error("null path");
            return Err(S2mStatus::NullArgument);
        }
        let p = CStr::from_ptr(path).to_str().map_err(|_| {
            set_error("path is not UTF-8");
            S2mStatus::Domain
        })?;
        let rep = maass::load_forms_file(Path::new(p)).or_status()?;
        write_box(
            out,
            S2mCatalog {
                forms: rep.forms,
                rejected: rep.rejected.len(),
            },
        )
    })
}

/// # Safety
/// `cat` must be null or come from a catalog constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn s2m_catalog_free(cat: *mut S2mCatalog) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

/// Number of forms; 0 for a null handle.
///
/// # Safety
/// `cat` must be null or a live catalog handle.
#[no_mangle]
pub unsafe extern "C" fn s2m_catalog_len(cat: *const S2mCatalog) -> usize {
    cat.as_ref().map_or(0, |c| c.forms.len())
}

/// # Safety
/// `cat` must be null or a live catalog handle.
#[no_mangle]
pub unsafe extern "C" fn s2m_catalog_rejected(cat: *const S2mCatalog) -> usize {
    cat.as_ref().map_or(0, |c| c.rejected)
}

/// Spectral parameter and harmonic weight of form `index`.
///
/// # Safety
/// `cat` must be a live handle; `t_j` and `weight` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn s2m_catalog_form(cat: *const S2mCatalog, index: usize, t_j: *mut f64, weight: *mut f64) -> S2mStatus {
    guard(|| {
        let f = form(deref(cat)?, index)?;
        write(t_j, f.t_j())?;
        write(weight, f.weight())
    })
}

/// Hecke eigenvalue `λ(n)`; coverage error past the stored range.
///
/// # Safety
/// `cat` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn s2m_catalog_lambda(cat: *const S2mCatalog, index: usize, n: u64, out: *mut f64) -> S2mStatus {
    guard(|| {
        let f = form(deref(cat)?, index)?;
        let v = f.lambda(n).ok_or_else(|| {
            set_error(&format!("coverage: λ({n}) not stored (n_max = {})", f.n_max()));
            S2mStatus::Coverage
        })?;
        write(out, v)
    })
}

/// `L(sym² u_j, s)` for form `index`.
///
/// # Safety
/// Handles must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn s2m_sym2_l(
    ctx: *const S2mContext,
    cat: *const S2mCatalog,
    index: usize,
    s: S2mComplex,
    out: *mut S2mComplex,
) -> S2mStatus {
    guard(|| {
        let ctx = &deref(ctx)?.inner;
        let f = form(deref(cat)?, index)?;
        let v = maass::sym2_l(f, s.into(), ctx).or_status()?;
        write(out, v.value.into())
    })
}

/// Zagier L-series `L_n(s)`.
///
/// # Safety
/// `ctx` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn s2m_zagier_l(ctx: *const S2mContext, n: i64, s: S2mComplex, out: *mut S2mComplex) -> S2mStatus {
    guard(|| {
        let ctx = &deref(ctx)?.inner;
        write(out, zagier::zagier_l(n, s.into(), ctx).or_status()?.into())
    })
}

/// Gauss hypergeometric `₂F₁(a, b; c; z)`.
///
/// # Safety
/// `ctx` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn s2m_gauss_2f1(
    ctx: *const S2mContext,
    a: S2mComplex,
    b: S2mComplex,
    c: S2mComplex,
    z: S2mComplex,
    out: *mut S2mComplex,
) -> S2mStatus {
    guard(|| {
        let ctx = &deref(ctx)?.inner;
        let v = specfun::gauss_2f1(a.into(), b.into(), c.into(), z.into(), ctx).or_status()?;
        write(out, v.into())
    })
}

/// `K_{it}(z)` for real `t`, `z > 0`.
///
/// # Safety
/// `ctx` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn s2m_bessel_k_imag(ctx: *const S2mContext, t: f64, z: f64, out: *mut f64) -> S2mStatus {
    guard(|| {
        let ctx = &deref(ctx)?.inner;
        write(out, specfun::bessel_k_imag(t, z, ctx).or_status()?)
    })
}

/// The real pair `F_{it}(z)`, `G_{it}(z)`.
///
/// # Safety
/// `ctx` must be live; `f` and `g` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn s2m_bessel_fg(ctx: *const S2mContext, t: f64, z: f64, f: *mut f64, g: *mut f64) -> S2mStatus {
    guard(|| {
        let ctx = &deref(ctx)?.inner;
        let v = specfun::bessel_fg(t, z, ctx).or_status()?;
        write(f, v.f)?;
        write(g, v.g)
    })
}

/// # Safety
/// `ctx` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn s2m_airy_ai(ctx: *const S2mContext, x: f64, out: *mut f64) -> S2mStatus {
    guard(|| {
        let ctx = &deref(ctx)?.inner;
        write(out, specfun::airy_ai(x, ctx).or_status()?)
    })
}

/// Theta multiplier for `c ≡ 0 (mod 4)` and `gcd(a, c) = 1`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn s2m_theta_multiplier(c: u64, a: i64, out: *mut S2mComplex) -> S2mStatus {
    guard(|| {
        let fr = ThetaFrame::new(c, a).or_status()?;
        write(out, theta_multiplier(&fr).into())
    })
}

/// Both sides of the first-moment identity with harmonic weights `α_j`.
///
/// # Safety
/// Handles must be live; `out` must be valid for writes.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn s2m_first_moment(
    ctx: *const S2mContext,
    cat: *const S2mCatalog,
    m: u64,
    t: f64,
    big_t: f64,
    big_g: f64,
    big_n: u32,
    out: *mut S2mMomentResult,
) -> S2mStatus {
    guard(|| {
        let ctx = &deref(ctx)?.inner;
        let cat = deref(cat)?;
        let w = SpectralWeight::plain(big_t, big_g, big_n).or_status()?;
        let b = moment::verify_first_moment(&cat.forms, m, CriticalPoint::new(t), &w, WeightConvention::Harmonic, ctx)
            .or_status()?;
        write(
            out,
            S2mMomentResult {
                spectral: b.spectral.into(),
                main_term: b.mt.into(),
                continuous: b.ct.into(),
                extra: b.et.into(),
                s1: b.s1.into(),
                s2: b.s2.into(),
                residual_abs: b.residual.norm(),
                tolerance: b.tolerances.combined,
                forms_used: b.forms_used,
                passed: b.passed,
            },
        )
    })
}
