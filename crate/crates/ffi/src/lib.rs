//! C interface to `bmt-core`.
//!
//! Results are returned as NUL-terminated JSON strings owned by the library;
//! release them with [`bmt_string_free`]. Every call returns a [`BmtStatus`]
//! and, on failure, records a message readable through [`bmt_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bmt_core::char_groups::{enumerate_ggamma, enumerate_gi, order_gi};
use bmt_core::cli::{verify, FlavorChoice, RunConfig};
use bmt_core::gl2_types::{SemistableFlavor, TameInertialTypeGL2, TameInertialTypePGL2};
use bmt_core::serre_weights::{enumerate_s, enumerate_sigma};
use bmt_core::weight_lattice::{GLWeight, SLWeight};
use bmt_core::{BmtError, Engine};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BmtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ArithmeticFault = 3,
    VerificationFailed = 4,
    Panic = 5,
}

pub const BMT_FLAVOR_CRYSTALLINE: u32 = 0;
pub const BMT_FLAVOR_SEMISTABLE: u32 = 1;
/// Both flavors; accepted by [`bmt_verify`] only.
pub const BMT_FLAVOR_BOTH: u32 = 2;

pub const BMT_ALPHA_DIRECT: u32 = 0;
pub const BMT_ALPHA_VIA_GL: u32 = 1;

pub const BMT_ENUM_WEIGHTS: u32 = 0;
pub const BMT_ENUM_SL_WEIGHTS: u32 = 1;
pub const BMT_ENUM_TYPES: u32 = 2;
pub const BMT_ENUM_PGL_TYPES: u32 = 3;
pub const BMT_ENUM_CHARS: u32 = 4;
pub const BMT_ENUM_GAMMA_CHARS: u32 = 5;

/// Opaque multiplicity engine for one prime.
pub struct BmtEngine {
    inner: Engine,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(BmtStatus, String);

impl From<BmtError> for Failure {
    fn from(e: BmtError) -> Self {
        let status = if e.is_usage() { BmtStatus::InvalidArgument } else { BmtStatus::ArithmeticFault };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(BmtStatus::InvalidArgument, msg.into())
}

/// Runs `f`, converting errors and panics into a status and the last-error message.
fn guard(f: impl FnOnce() -> Result<BmtStatus, Failure>) -> BmtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => {
            if status == BmtStatus::Ok {
                set_error("");
            }
            status
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("panic: {msg}"));
            BmtStatus::Panic
        }
    }
}

unsafe fn engine_ref<'a>(engine: *const BmtEngine) -> Result<&'a Engine, Failure> {
    // SAFETY: the caller passes a pointer from bmt_engine_new that has not been freed
    unsafe { engine.as_ref() }.map(|e| &e.inner).ok_or(Failure(BmtStatus::NullPointer, "engine is null".into()))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(BmtStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: non-null and NUL-terminated by contract
    unsafe { CStr::from_ptr(s) }.to_str().map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn write_json(out: *mut *mut c_char, value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string(value).map_err(|e| invalid(e.to_string()))?;
    let c = CString::new(text).map_err(|e| invalid(e.to_string()))?;
    // SAFETY: checked non-null by the caller
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(BmtStatus::NullPointer, "output pointer is null".into()));
    }
    Ok(())
}

fn flavor(code: u32) -> Result<SemistableFlavor, Failure> {
    match code {
        BMT_FLAVOR_CRYSTALLINE => Ok(SemistableFlavor::Crystalline),
        BMT_FLAVOR_SEMISTABLE => Ok(SemistableFlavor::Semistable),
        _ => Err(invalid(format!("unknown flavor {code}"))),
    }
}

/// Creates an engine for the odd prime `p`. `bound` is the largest
/// `l1 - l2` the engine will be asked about; 0 selects the default `2p`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn bmt_engine_new(p: u64, bound: u64, out: *mut *mut BmtEngine) -> BmtStatus {
    guard(|| {
        check_out(out)?;
        let bound = if bound == 0 { p.saturating_mul(2) } else { bound };
        let inner = Engine::for_bound(p, bound)?;
        // SAFETY: checked non-null
        unsafe { *out = Box::into_raw(Box::new(BmtEngine { inner })) };
        Ok(BmtStatus::Ok)
    })
}

/// Releases an engine. Passing null is a no-op.
///
/// # Safety
/// `engine` must come from [`bmt_engine_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bmt_engine_free(engine: *mut BmtEngine) {
    if !engine.is_null() {
        // SAFETY: ownership returns from the caller
        drop(unsafe { Box::from_raw(engine) });
    }
}

/// The prime of an engine, or 0 for null.
///
/// # Safety
/// `engine` must be null or a live engine.
#[no_mangle]
pub unsafe extern "C" fn bmt_engine_prime(engine: *const BmtEngine) -> u64 {
    // SAFETY: as documented
    unsafe { engine.as_ref() }.map_or(0, |e| e.inner.p())
}

/// The table `a_{l,t}` for `l = (l1, l2)` and a type descriptor such as
/// `"ps:0,1"`, `"cusp:1"`, `"scalar:0"` or its JSON form.
///
/// # Safety
/// `engine` must be a live engine, `type_desc` a NUL-terminated string and
/// `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn bmt_a_table(
    engine: *const BmtEngine,
    l1: i64,
    l2: i64,
    type_desc: *const c_char,
    flavor_code: u32,
    out_json: *mut *mut c_char,
) -> BmtStatus {
    guard(|| {
        check_out(out_json)?;
        let engine = unsafe { engine_ref(engine)? };
        let t = TameInertialTypeGL2::parse(unsafe { read_str(type_desc, "type")? }, engine.p())?;
        let table = engine.a_table(&GLWeight::new(vec![l1, l2])?, &t, flavor(flavor_code)?)?;
        unsafe { write_json(out_json, &table)? };
        Ok(BmtStatus::Ok)
    })
}

/// The table `alpha_{lambda,tau}` for `lambda = (c, 0)` and `tau` the class of
/// the given type, computed directly or through `GL_2`.
///
/// # Safety
/// As for [`bmt_a_table`].
#[no_mangle]
pub unsafe extern "C" fn bmt_alpha_table(
    engine: *const BmtEngine,
    c: i64,
    type_desc: *const c_char,
    flavor_code: u32,
    method: u32,
    out_json: *mut *mut c_char,
) -> BmtStatus {
    guard(|| {
        check_out(out_json)?;
        let engine = unsafe { engine_ref(engine)? };
        let t = TameInertialTypeGL2::parse(unsafe { read_str(type_desc, "type")? }, engine.p())?;
        let tau = TameInertialTypePGL2::from_gl(&t);
        let lambda = SLWeight::from_any(&[c, 0])?;
        let flavor = flavor(flavor_code)?;
        let table = match method {
            BMT_ALPHA_DIRECT => engine.alpha_table_direct(&lambda, &tau, flavor)?,
            BMT_ALPHA_VIA_GL => engine.alpha_table_via_gl(&lambda, &tau, flavor)?,
            _ => return Err(invalid(format!("unknown method {method}"))),
        };
        unsafe { write_json(out_json, &table)? };
        Ok(BmtStatus::Ok)
    })
}

/// Runs the integrality checks for one `(l, t)`. The report is written even
/// when a check fails, in which case the status is `VerificationFailed`.
///
/// # Safety
/// As for [`bmt_a_table`].
#[no_mangle]
pub unsafe extern "C" fn bmt_verify_integred(
    engine: *const BmtEngine,
    l1: i64,
    l2: i64,
    type_desc: *const c_char,
    flavor_code: u32,
    out_json: *mut *mut c_char,
) -> BmtStatus {
    guard(|| {
        check_out(out_json)?;
        let engine = unsafe { engine_ref(engine)? };
        let t = TameInertialTypeGL2::parse(unsafe { read_str(type_desc, "type")? }, engine.p())?;
        let report = engine.verify_integred(&GLWeight::new(vec![l1, l2])?, &t, flavor(flavor_code)?);
        unsafe { write_json(out_json, &report)? };
        Ok(if report.passed { BmtStatus::Ok } else { BmtStatus::VerificationFailed })
    })
}

/// The verification sweep over `primes[0..n_primes]` with `l1 - l2 <= bound`
/// (0 selects `2p`) and `bases` random cycle bases per item.
///
/// # Safety
/// `primes` must point to `n_primes` values and `out_json` be writable.
#[no_mangle]
pub unsafe extern "C" fn bmt_verify(
    primes: *const u64,
    n_primes: usize,
    bound: u64,
    flavor_code: u32,
    seed: u64,
    bases: u64,
    out_json: *mut *mut c_char,
) -> BmtStatus {
    guard(|| {
        check_out(out_json)?;
        if primes.is_null() && n_primes > 0 {
            return Err(Failure(BmtStatus::NullPointer, "primes is null".into()));
        }
        let primes = if n_primes == 0 { Vec::new() } else { unsafe { std::slice::from_raw_parts(primes, n_primes) }.to_vec() };
        let flavor = match flavor_code {
            BMT_FLAVOR_CRYSTALLINE => FlavorChoice::Cr,
            BMT_FLAVOR_SEMISTABLE => FlavorChoice::St,
            BMT_FLAVOR_BOTH => FlavorChoice::Both,
            _ => return Err(invalid(format!("unknown flavor {flavor_code}"))),
        };
        let cfg = RunConfig {
            primes,
            weight_bound: (bound > 0).then_some(bound),
            flavor,
            seed,
            bases,
            ..RunConfig::default()
        };
        let report = verify(&cfg)?;
        unsafe { write_json(out_json, &report)? };
        Ok(if report.passed { BmtStatus::Ok } else { BmtStatus::VerificationFailed })
    })
}

/// Enumerates weights, types or characters (`BMT_ENUM_*`) for rank `n` and
/// field size `q`.
///
/// # Safety
/// `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bmt_enumerate(kind: u32, n: u64, q: u64, out_json: *mut *mut c_char) -> BmtStatus {
    guard(|| {
        check_out(out_json)?;
        let need_gl2 = || -> Result<(), Failure> {
            if n != 2 {
                return Err(invalid("types exist for n = 2 only"));
            }
            Ok(())
        };
        unsafe {
            match kind {
                BMT_ENUM_WEIGHTS => write_json(out_json, &enumerate_s(n as usize, q)?)?,
                BMT_ENUM_SL_WEIGHTS => write_json(out_json, &enumerate_sigma(n as usize, q)?)?,
                BMT_ENUM_TYPES => {
                    need_gl2()?;
                    write_json(out_json, &TameInertialTypeGL2::all(q)?)?
                }
                BMT_ENUM_PGL_TYPES => {
                    need_gl2()?;
                    write_json(out_json, &TameInertialTypePGL2::all(q)?)?
                }
                BMT_ENUM_CHARS => write_json(out_json, &enumerate_gi(n, q)?)?,
                BMT_ENUM_GAMMA_CHARS => write_json(out_json, &enumerate_ggamma(n, q)?)?,
                _ => return Err(invalid(format!("unknown enumeration {kind}"))),
            }
        }
        Ok(BmtStatus::Ok)
    })
}

/// `#G_I = gcd(n, q - 1)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bmt_order_gi(n: u64, q: u64, out: *mut u64) -> BmtStatus {
    guard(|| {
        check_out(out)?;
        let v = order_gi(n, q)?;
        // SAFETY: checked non-null
        unsafe { *out = v };
        Ok(BmtStatus::Ok)
    })
}

/// Frees a string returned by this library. Passing null is a no-op.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bmt_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by CString::into_raw
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn bmt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn bmt_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version"),
    };
    VERSION.as_ptr()
}
