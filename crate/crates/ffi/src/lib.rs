//! C ABI over `lsq_stability`.
//!
//! Every function returns an [`LsqStatus`]. On failure a description is
//! stored per thread and can be read with [`lsq_last_error_message`]. The
//! basis is exposed as an opaque handle that must be released with
//! [`lsq_basis_free`]. Panics are caught at the boundary and reported as
//! [`LsqStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lsq_stability::{
    b_exact, condition_number, least_squares_fit, sample_iid, witness_lower_bound, Error, JacobiParams,
    OrthonormalBasis, SampleSet, WitnessCase,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LsqStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Contract = 3,
    RankDeficient = 4,
    BufferTooSmall = 5,
    Config = 6,
    Io = 7,
    Internal = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LsqWitnessCase {
    /// Large-λ regime: an explicit polynomial certifies growth.
    I = 1,
    /// Small-λ regime: the bound is 1.
    II = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsqWitness {
    pub case_: LsqWitnessCase,
    /// Number of order statistics used in the product (0 in case II).
    pub k: usize,
    pub lambda: f64,
    pub bound: f64,
    pub event_holds: bool,
}

/// Opaque handle to an orthonormal Jacobi basis.
pub struct LsqBasis {
    inner: OrthonormalBasis,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: LsqStatus, msg: &str) -> LsqStatus {
    set_error(msg);
    status
}

fn from_error(err: Error) -> LsqStatus {
    let status = match err.code() {
        "domain" => LsqStatus::Domain,
        "contract" => LsqStatus::Contract,
        "rank" => LsqStatus::RankDeficient,
        "config" => LsqStatus::Config,
        "io" => LsqStatus::Io,
        _ => LsqStatus::Internal,
    };
    fail(status, &err.to_string())
}

fn guarded<F>(body: F) -> LsqStatus
where
    F: FnOnce() -> Result<(), LsqStatus>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            LsqStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(LsqStatus::Panic, "panic inside lsq_stability"),
    }
}

/// # Safety
/// `ptr` must be null or point to `len` readable `f64`s.
unsafe fn slice_in<'a>(ptr: *const f64, len: usize) -> Result<&'a [f64], LsqStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(fail(LsqStatus::NullPointer, "input buffer is null"));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

/// # Safety
/// `ptr` must be null or point to `len` writable `f64`s.
unsafe fn slice_out<'a>(ptr: *mut f64, len: usize, needed: usize) -> Result<&'a mut [f64], LsqStatus> {
    if len < needed {
        return Err(fail(
            LsqStatus::BufferTooSmall,
            &format!("output buffer holds {len} values, {needed} needed"),
        ));
    }
    if needed == 0 {
        return Ok(&mut []);
    }
    if ptr.is_null() {
        return Err(fail(LsqStatus::NullPointer, "output buffer is null"));
    }
    Ok(std::slice::from_raw_parts_mut(ptr, needed))
}

/// # Safety
/// `basis` must be null or a live handle from [`lsq_basis_new`].
unsafe fn basis_ref<'a>(basis: *const LsqBasis) -> Result<&'a LsqBasis, LsqStatus> {
    basis.as_ref().ok_or_else(|| fail(LsqStatus::NullPointer, "basis handle is null"))
}

/// # Safety
/// `out` must be null or writable.
unsafe fn write<T>(out: *mut T, value: T) -> Result<(), LsqStatus> {
    if out.is_null() {
        return Err(fail(LsqStatus::NullPointer, "output pointer is null"));
    }
    out.write(value);
    Ok(())
}

fn samples(points: &[f64]) -> Result<SampleSet, LsqStatus> {
    SampleSet::from_points(points.to_vec()).map_err(from_error)
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn lsq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates the degree-`degree` orthonormal basis for exponents `(alpha, beta)`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn lsq_basis_new(alpha: f64, beta: f64, degree: usize, out: *mut *mut LsqBasis) -> LsqStatus {
    guarded(|| {
        let params = JacobiParams::new(alpha, beta).map_err(from_error)?;
        let handle = Box::new(LsqBasis {
            inner: OrthonormalBasis::new(params, degree),
        });
        if out.is_null() {
            return Err(fail(LsqStatus::NullPointer, "output pointer is null"));
        }
        *out = Box::into_raw(handle);
        Ok(())
    })
}

/// Releases a handle from [`lsq_basis_new`]. Null is ignored.
///
/// # Safety
/// `basis` must be null or a live handle; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lsq_basis_free(basis: *mut LsqBasis) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

/// Writes `L_0(x), ..., L_m(x)` into `out` (length at least `m + 1`).
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn lsq_basis_eval(basis: *const LsqBasis, x: f64, out: *mut f64, len: usize) -> LsqStatus {
    guarded(|| {
        let b = basis_ref(basis)?;
        let values = b.inner.eval(x).map_err(from_error)?;
        slice_out(out, len, values.len())?.copy_from_slice(&values);
        Ok(())
    })
}

/// `K = sup_x Σ_j L_j(x)²`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsq_basis_christoffel_k(basis: *const LsqBasis, out: *mut f64) -> LsqStatus {
    guarded(|| write(out, basis_ref(basis)?.inner.christoffel_k()))
}

/// Condition number of least squares on the given points. `clamped` (may be
/// null) reports whether the smallest Gram eigenvalue hit the 1e-13 floor.
///
/// # Safety
/// `points` must hold `n` doubles; `kappa` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsq_condition_number(
    basis: *const LsqBasis,
    points: *const f64,
    n: usize,
    kappa: *mut f64,
    clamped: *mut bool,
) -> LsqStatus {
    guarded(|| {
        let b = basis_ref(basis)?;
        let s = samples(slice_in(points, n)?)?;
        let (k, c) = condition_number(&b.inner, &s).map_err(from_error)?;
        write(kappa, k)?;
        if !clamped.is_null() {
            *clamped = c;
        }
        Ok(())
    })
}

/// Least-squares coefficients in the orthonormal basis for `values` at `points`.
///
/// # Safety
/// `points` and `values` must hold `n` doubles; `coeffs` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lsq_least_squares_fit(
    basis: *const LsqBasis,
    points: *const f64,
    values: *const f64,
    n: usize,
    coeffs: *mut f64,
    len: usize,
) -> LsqStatus {
    guarded(|| {
        let b = basis_ref(basis)?;
        let s = samples(slice_in(points, n)?)?;
        let u = least_squares_fit(&b.inner, &s, slice_in(values, n)?).map_err(from_error)?;
        slice_out(coeffs, len, u.len())?.copy_from_slice(&u);
        Ok(())
    })
}

/// Fills `out[0..n]` with i.i.d. draws from the Jacobi probability measure.
///
/// # Safety
/// `out` must hold `n` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn lsq_sample_iid(alpha: f64, beta: f64, seed: u64, out: *mut f64, n: usize) -> LsqStatus {
    guarded(|| {
        let params = JacobiParams::new(alpha, beta).map_err(from_error)?;
        let s = sample_iid(&params, n, seed);
        slice_out(out, n, n)?.copy_from_slice(s.points());
        Ok(())
    })
}

/// `sup_{deg p <= m} ||p||_∞ / max_i |p(x_i)|` by linear programming.
///
/// # Safety
/// `points` must hold `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsq_b_exact(
    points: *const f64,
    n: usize,
    m: usize,
    grid: usize,
    out: *mut f64,
) -> LsqStatus {
    guarded(|| {
        let s = samples(slice_in(points, n)?)?;
        write(out, b_exact(&s, m, grid).map_err(from_error)?)
    })
}

/// Witness lower bound for degree `m` on the given points (sorted internally).
///
/// # Safety
/// `points` must hold `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsq_witness_lower_bound(
    alpha: f64,
    beta: f64,
    points: *const f64,
    n: usize,
    m: usize,
    big_c: f64,
    out: *mut LsqWitness,
) -> LsqStatus {
    guarded(|| {
        let params = JacobiParams::new(alpha, beta).map_err(from_error)?;
        let s = samples(slice_in(points, n)?)?.sorted();
        let w = witness_lower_bound(&s, m, &params, big_c).map_err(from_error)?;
        write(
            out,
            LsqWitness {
                case_: match w.case {
                    WitnessCase::I => LsqWitnessCase::I,
                    WitnessCase::II => LsqWitnessCase::II,
                },
                k: w.k,
                lambda: w.lambda,
                bound: w.bound,
                event_holds: w.event_holds,
            },
        )
    })
}
