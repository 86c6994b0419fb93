//! C interface to `rumin-core`: grids, Rumin forms on ℍ¹ and the primitive solver.
//!
//! Objects cross the boundary as opaque handles owned by the caller and released with the
//! matching `*_free`. Every fallible call returns a [`RuminStatus`]; the message of the last
//! failure on the calling thread is available through [`rumin_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rumin_core::grid::{norm, Boundary, GridComplex, GridRuminForm, GridSpec};
use rumin_core::harness::sample_exact_form;
use rumin_core::solver::primitive::{solve_primitive, Method, SolveOptions};
use rumin_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuminStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotClosed = 3,
    NoConvergence = 4,
    Io = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuminMethod {
    Homotopy = 0,
    Laplacian = 1,
}

/// Uniform grid on a box centred at the origin.
pub struct RuminGrid(GridSpec);

/// Rumin form with grid coefficients, component-major.
pub struct RuminForm(GridRuminForm);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct RuminSolveReport {
    /// `‖d_cφ − ω‖ / ‖ω‖` in `L⁴`.
    pub residual_lq: f64,
    /// Same in `L²`, the natural exponent for degree 2.
    pub residual_lq_half: f64,
    pub closedness: f64,
    pub iterations: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RuminStatus {
    match e {
        Error::NotClosed { .. } => RuminStatus::NotClosed,
        Error::NoConvergence { .. } => RuminStatus::NoConvergence,
        Error::Io(_) | Error::Json(_) => RuminStatus::Io,
        _ => RuminStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and panics.
fn guard<F: FnOnce() -> Result<(), (RuminStatus, String)>>(f: F) -> RuminStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RuminStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            RuminStatus::Internal
        }
    }
}

fn core<T>(r: rumin_core::Result<T>) -> Result<T, (RuminStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (RuminStatus, String) {
    (RuminStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (RuminStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message of the last failure on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn rumin_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Grid on `[-a_x, a_x]² × [-a_t, a_t]` with `points` samples per axis.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn rumin_grid_cube(a_x: f64, a_t: f64, points: usize, out: *mut *mut RuminGrid) -> RuminStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, RuminGrid(core(GridSpec::cube(a_x, a_t, points))?));
        Ok(())
    })
}

/// Number of grid points.
///
/// # Safety
/// `grid` must be null or a handle from [`rumin_grid_cube`].
#[no_mangle]
pub unsafe extern "C" fn rumin_grid_len(grid: *const RuminGrid) -> usize {
    grid.as_ref().map_or(0, |g| g.0.len())
}

/// # Safety
/// `grid` must be null or a handle from [`rumin_grid_cube`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rumin_grid_free(grid: *mut RuminGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Number of components of a Rumin form of degree `degree` on ℍ¹, or 0 above degree 3.
#[no_mangle]
pub extern "C" fn rumin_form_components(degree: usize) -> usize {
    match degree {
        0 | 3 => 1,
        1 | 2 => 2,
        _ => 0,
    }
}

/// Form of degree `degree` from `len = components · grid points` samples, component-major.
///
/// # Safety
/// `grid` must be a valid handle, `data` must point to `len` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rumin_form_new(grid: *const RuminGrid, degree: usize, data: *const f64, len: usize, out: *mut *mut RuminForm) -> RuminStatus {
    guard(|| {
        let spec = &deref(grid, "grid")?.0;
        if data.is_null() || out.is_null() {
            return Err(null("data or out"));
        }
        let k = rumin_form_components(degree);
        if k == 0 || len != k * spec.len() {
            return Err((RuminStatus::InvalidArgument, format!("degree {degree} needs {} samples, got {len}", k * spec.len())));
        }
        let samples = std::slice::from_raw_parts(data, len);
        put(out, RuminForm(GridRuminForm::from_flat(spec, degree, samples)));
        Ok(())
    })
}

/// Seeded exact form `ω = d_cψ` of degree `degree` (1 to 3), `ψ` a smooth compactly supported form.
///
/// # Safety
/// `grid` must be a valid handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rumin_form_sample_exact(grid: *const RuminGrid, seed: u64, degree: usize, out: *mut *mut RuminForm) -> RuminStatus {
    guard(|| {
        let spec = &deref(grid, "grid")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let (_, omega) = core(sample_exact_form(seed, degree, spec))?;
        put(out, RuminForm(omega));
        Ok(())
    })
}

/// # Safety
/// `form` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rumin_form_degree(form: *const RuminForm) -> usize {
    form.as_ref().map_or(0, |f| f.0.degree)
}

/// Total number of samples, `components · grid points`.
///
/// # Safety
/// `form` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rumin_form_len(form: *const RuminForm) -> usize {
    form.as_ref().map_or(0, |f| f.0.coeffs.iter().map(|c| c.len()).sum())
}

/// Copies the samples into `buf`, which must hold at least [`rumin_form_len`] doubles.
///
/// # Safety
/// `form` must be a live handle and `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn rumin_form_copy(form: *const RuminForm, buf: *mut f64, len: usize) -> RuminStatus {
    guard(|| {
        let f = deref(form, "form")?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let flat = f.0.flatten();
        if len < flat.len() {
            return Err((RuminStatus::InvalidArgument, format!("buffer holds {len} values, {} needed", flat.len())));
        }
        std::slice::from_raw_parts_mut(buf, flat.len()).copy_from_slice(&flat);
        Ok(())
    })
}

/// `‖form‖_p` over the whole grid, `p ≥ 1`; `p = INFINITY` gives the maximum norm.
///
/// # Safety
/// `form` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rumin_form_norm(form: *const RuminForm, p: f64, out: *mut f64) -> RuminStatus {
    guard(|| {
        let f = deref(form, "form")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = core(norm(&f.0, p, None))?;
        Ok(())
    })
}

/// Discrete `d_c` with one-sided closures at the boundary.
///
/// # Safety
/// `form` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rumin_form_dc(form: *const RuminForm, out: *mut *mut RuminForm) -> RuminStatus {
    guard(|| {
        let f = deref(form, "form")?;
        if out.is_null() {
            return Err(null("out"));
        }
        if f.0.degree >= 3 {
            return Err((RuminStatus::InvalidArgument, "d_c of a top-degree form".into()));
        }
        let gc = core(GridComplex::get())?;
        put(out, RuminForm(core(gc.d_c(&f.0, Boundary::OneSided))?));
        Ok(())
    })
}

/// # Safety
/// `form` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rumin_form_free(form: *mut RuminForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Solves `d_cφ = ω` for a closed `omega` with default tolerances. `report` may be null.
///
/// # Safety
/// `omega` must be a live handle, `phi` writable and `report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn rumin_solve(omega: *const RuminForm, method: RuminMethod, phi: *mut *mut RuminForm, report: *mut RuminSolveReport) -> RuminStatus {
    guard(|| {
        let w = deref(omega, "omega")?;
        if phi.is_null() {
            return Err(null("phi"));
        }
        let m = match method {
            RuminMethod::Homotopy => Method::Homotopy,
            RuminMethod::Laplacian => Method::Laplacian,
        };
        let (p, rep) = core(solve_primitive(&w.0, &SolveOptions::with_method(m)))?;
        if !report.is_null() {
            *report = RuminSolveReport { residual_lq: rep.residual_lq, residual_lq_half: rep.residual_lq_half, closedness: rep.closedness, iterations: rep.iterations };
        }
        put(phi, RuminForm(p));
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    #[test]
    fn round_trip_and_errors() {
        unsafe {
            let mut g = ptr::null_mut();
            assert_eq!(rumin_grid_cube(2.0, 1.0, 9, &mut g), RuminStatus::Ok);
            assert_eq!(rumin_grid_len(g), 729);
            let data: Vec<f64> = (0..2 * 729).map(|i| i as f64).collect();
            let mut f = ptr::null_mut();
            assert_eq!(rumin_form_new(g, 1, data.as_ptr(), data.len(), &mut f), RuminStatus::Ok);
            let mut back = vec![0.0; rumin_form_len(f)];
            assert_eq!(rumin_form_copy(f, back.as_mut_ptr(), back.len()), RuminStatus::Ok);
            assert_eq!(back, data);
            let mut bad = ptr::null_mut();
            assert_eq!(rumin_form_new(g, 1, data.as_ptr(), 5, &mut bad), RuminStatus::InvalidArgument);
            assert!(bad.is_null());
            assert!(!rumin_last_error().is_null());
            let msg = CStr::from_ptr(rumin_last_error()).to_str().unwrap();
            assert!(msg.contains("needs 1458"), "{msg}");
            assert_eq!(rumin_form_norm(ptr::null(), 2.0, &mut 0.0), RuminStatus::NullPointer);
            let mut bad_grid = ptr::null_mut();
            assert_eq!(rumin_grid_cube(-1.0, 1.0, 9, &mut bad_grid), RuminStatus::InvalidArgument);
            assert!(bad_grid.is_null());
            rumin_form_free(f);
            rumin_grid_free(g);
        }
    }

    #[test]
    fn solves_sampled_exact_form() {
        unsafe {
            let mut g = ptr::null_mut();
            assert_eq!(rumin_grid_cube(2.0, 1.0, 33, &mut g), RuminStatus::Ok);
            let mut w = ptr::null_mut();
            assert_eq!(rumin_form_sample_exact(g, 5, 3, &mut w), RuminStatus::Ok);
            let mut phi = ptr::null_mut();
            let mut rep = RuminSolveReport::default();
            assert_eq!(rumin_solve(w, RuminMethod::Homotopy, &mut phi, &mut rep), RuminStatus::Ok, "{:?}", CStr::from_ptr(rumin_last_error()));
            assert_eq!(rumin_form_degree(phi), 2);
            assert!(rep.residual_lq < 0.2, "{rep:?}");
            let mut d = ptr::null_mut();
            assert_eq!(rumin_form_dc(phi, &mut d), RuminStatus::Ok);
            assert_eq!(rumin_form_degree(d), 3);
            for f in [w, phi, d] {
                rumin_form_free(f);
            }
            rumin_grid_free(g);
        }
    }
}
