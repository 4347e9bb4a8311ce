//! C ABI for `dualmod`.
//!
//! Objects are opaque handles created by `dm_instance_from_*` and
//! `dm_decompose` and released with the matching `dm_*_free`. Every fallible call returns a
//! [`DmStatus`]; on failure `dm_last_error_message` describes the problem
//! for the calling thread. Strings returned by the library must be released
//! with `dm_string_free`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dualmod::instance::verify_dual_modularity;
use dualmod::solver::{solve, SolverConfig, Variant};
use dualmod::{
    density_decomposition, io, limits, rational, DensityDecomposition, DivergenceKind, DualModularInstance, Error,
};

/// Result of every fallible call. The nonzero codes below 4 match the
/// command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DmStatus {
    Ok = 0,
    /// Unreadable input or a schema error.
    InvalidInput = 1,
    /// The instance violates a structural requirement.
    Structural = 2,
    /// A value is outside the domain of the operation.
    Domain = 3,
    NullPointer = 4,
    /// An index argument is out of range.
    OutOfRange = 5,
    /// Internal failure; please report it.
    Panic = 6,
}

/// A validated instance.
pub struct DmInstance {
    inner: DualModularInstance,
}

/// The density decomposition of an instance.
pub struct DmDecomposition {
    inner: DensityDecomposition,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> DmStatus {
    match e.exit_code() {
        1 => DmStatus::InvalidInput,
        2 => DmStatus::Structural,
        _ => DmStatus::Domain,
    }
}

fn fail(status: DmStatus, msg: impl Into<String>) -> DmStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), DmStatus>) -> DmStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DmStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(DmStatus::Panic, "internal panic"),
    }
}

fn lib(e: Error) -> DmStatus {
    fail(status_of(&e), e.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, DmStatus> {
    if p.is_null() {
        return Err(fail(DmStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(DmStatus::InvalidInput, format!("{name} is not valid UTF-8")))
}

unsafe fn obj<'a, T>(p: *const T, name: &str) -> Result<&'a T, DmStatus> {
    p.as_ref()
        .ok_or_else(|| fail(DmStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, DmStatus> {
    p.as_mut()
        .ok_or_else(|| fail(DmStatus::NullPointer, format!("{name} is null")))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn dm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an instance from JSON text.
#[no_mangle]
pub unsafe extern "C" fn dm_instance_from_json(json: *const c_char, result: *mut *mut DmInstance) -> DmStatus {
    guard(|| {
        let slot = out(result, "result")?;
        *slot = ptr::null_mut();
        let text = str_arg(json, "json")?;
        let inner = io::instance_from_str(text).map_err(lib)?;
        *slot = Box::into_raw(Box::new(DmInstance { inner }));
        Ok(())
    })
}

/// Reads an instance from a JSON file.
#[no_mangle]
pub unsafe extern "C" fn dm_instance_from_file(path: *const c_char, result: *mut *mut DmInstance) -> DmStatus {
    guard(|| {
        let slot = out(result, "result")?;
        *slot = ptr::null_mut();
        let path = str_arg(path, "path")?;
        let inner = io::read_instance(path).map_err(lib)?;
        *slot = Box::into_raw(Box::new(DmInstance { inner }));
        Ok(())
    })
}

/// Serializes an instance back to JSON; free the result with `dm_string_free`.
#[no_mangle]
pub unsafe extern "C" fn dm_instance_to_json(inst: *const DmInstance, result: *mut *mut c_char) -> DmStatus {
    guard(|| {
        let slot = out(result, "result")?;
        *slot = ptr::null_mut();
        let inst = obj(inst, "inst")?;
        *slot = to_c_string(io::instance_to_string(&inst.inner));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dm_instance_free(inst: *mut DmInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of elements, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn dm_instance_size(inst: *const DmInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.n())
}

/// Sets `*is_dual_modular` to 1 when `f` is monotone supermodular and `g`
/// strictly monotone submodular, else 0.
#[no_mangle]
pub unsafe extern "C" fn dm_instance_verify(inst: *const DmInstance, is_dual_modular: *mut i32) -> DmStatus {
    guard(|| {
        let slot = out(is_dual_modular, "is_dual_modular")?;
        let inst = obj(inst, "inst")?;
        let report = verify_dual_modularity(&inst.inner, limits::VERIFY).map_err(lib)?;
        *slot = report.is_dual_modular() as i32;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dm_decompose(inst: *const DmInstance, result: *mut *mut DmDecomposition) -> DmStatus {
    guard(|| {
        let slot = out(result, "result")?;
        *slot = ptr::null_mut();
        let inst = obj(inst, "inst")?;
        let inner = density_decomposition(&inst.inner, limits::DECOMPOSE).map_err(lib)?;
        *slot = Box::into_raw(Box::new(DmDecomposition { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dm_decomposition_free(dec: *mut DmDecomposition) {
    if !dec.is_null() {
        drop(Box::from_raw(dec));
    }
}

/// Number of parts, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn dm_decomposition_num_parts(dec: *const DmDecomposition) -> usize {
    dec.as_ref().map_or(0, |d| d.inner.len())
}

/// Part `index` as a bit mask over element indices.
#[no_mangle]
pub unsafe extern "C" fn dm_decomposition_part(dec: *const DmDecomposition, index: usize, mask: *mut u64) -> DmStatus {
    guard(|| {
        let slot = out(mask, "mask")?;
        let dec = obj(dec, "dec")?;
        let part = dec
            .inner
            .parts
            .get(index)
            .ok_or_else(|| fail(DmStatus::OutOfRange, format!("part {index} out of range")))?;
        *slot = *part;
        Ok(())
    })
}

/// Density of part `index` as the nearest double.
#[no_mangle]
pub unsafe extern "C" fn dm_decomposition_density(
    dec: *const DmDecomposition,
    index: usize,
    density: *mut f64,
) -> DmStatus {
    guard(|| {
        let slot = out(density, "density")?;
        let dec = obj(dec, "dec")?;
        let d = dec
            .inner
            .densities
            .get(index)
            .ok_or_else(|| fail(DmStatus::OutOfRange, format!("part {index} out of range")))?;
        *slot = rational::to_f64(d);
        Ok(())
    })
}

/// Exact density of part `index` as `"p/q"`; free with `dm_string_free`.
#[no_mangle]
pub unsafe extern "C" fn dm_decomposition_density_string(
    dec: *const DmDecomposition,
    index: usize,
    result: *mut *mut c_char,
) -> DmStatus {
    guard(|| {
        let slot = out(result, "result")?;
        *slot = ptr::null_mut();
        let dec = obj(dec, "dec")?;
        let d = dec
            .inner
            .densities
            .get(index)
            .ok_or_else(|| fail(DmStatus::OutOfRange, format!("part {index} out of range")))?;
        *slot = to_c_string(rational::format(d));
        Ok(())
    })
}

/// Copies the per-element density vector into `rho[0..len]`; `len` must be
/// the instance size.
#[no_mangle]
pub unsafe extern "C" fn dm_decomposition_density_vector(
    dec: *const DmDecomposition,
    rho: *mut f64,
    len: usize,
) -> DmStatus {
    guard(|| {
        let dec = obj(dec, "dec")?;
        if rho.is_null() {
            return Err(fail(DmStatus::NullPointer, "rho is null"));
        }
        let v = &dec.inner.density_vector;
        if len != v.len() {
            return Err(fail(
                DmStatus::OutOfRange,
                format!("buffer length {len}, expected {}", v.len()),
            ));
        }
        let buf = std::slice::from_raw_parts_mut(rho, len);
        for (b, r) in buf.iter_mut().zip(v) {
            *b = rational::to_f64(r);
        }
        Ok(())
    })
}

/// Runs `iterations` solver steps and writes the final induced densities
/// to `rho[0..len]`. `kind` is `"quadratic"`, `"kl"`, `"eg"` or
/// `"hs:<gamma>"`; `variant` is `"fw"` or `"greedypp"`. A null `phi` is
/// allowed.
#[no_mangle]
pub unsafe extern "C" fn dm_solve(
    inst: *const DmInstance,
    kind: *const c_char,
    variant: *const c_char,
    iterations: usize,
    rho: *mut f64,
    len: usize,
    phi: *mut f64,
) -> DmStatus {
    guard(|| {
        let inst = obj(inst, "inst")?;
        let kind: DivergenceKind = str_arg(kind, "kind")?.parse().map_err(lib)?;
        let variant: Variant = str_arg(variant, "variant")?.parse().map_err(lib)?;
        if rho.is_null() {
            return Err(fail(DmStatus::NullPointer, "rho is null"));
        }
        if len != inst.inner.n() {
            return Err(fail(
                DmStatus::OutOfRange,
                format!("buffer length {len}, expected {}", inst.inner.n()),
            ));
        }
        let cfg = SolverConfig {
            variant,
            ..SolverConfig::new(iterations, kind)
        };
        let trace = solve(&inst.inner, &cfg).map_err(lib)?;
        std::slice::from_raw_parts_mut(rho, len).copy_from_slice(&trace.final_rho);
        if let Some(p) = phi.as_mut() {
            *p = trace.final_phi();
        }
        Ok(())
    })
}
