//! C ABI for `qrepeater`.
//!
//! Every fallible function returns a [`QrStatus`]. On failure the detail
//! message can be read with [`qr_last_error_message`] on the same thread.
//! Objects are opaque handles released with their `_free` function.
//!
//! Levels and stage-one labels are passed as plain integers
//! (`QR_LEVEL_*`, `QR_LABEL_*`) so that out-of-range values from C are
//! reported instead of being undefined behaviour.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use qrepeater::protocol::closed_form::{stage_one_coefficients, stage_two_coefficients};
use qrepeater::{Error, FinalPair, Level, ModelParams, StageOneLabel, SwapCase};

pub const QR_LEVEL_G: u32 = 0;
pub const QR_LEVEL_E: u32 = 1;
pub const QR_LEVEL_F: u32 = 2;

pub const QR_LABEL_PSI: u32 = 0;
pub const QR_LABEL_PSI_P: u32 = 1;
pub const QR_LABEL_PSI_PP: u32 = 2;
pub const QR_LABEL_PSI_PPP: u32 = 3;

/// Number of stage-one coefficients written by [`qr_stage_one_coefficients`].
pub const QR_STAGE_ONE_LEN: usize = 13;
/// Number of stage-two coefficients written by [`qr_stage_two_coefficients`].
pub const QR_STAGE_TWO_LEN: usize = 6;
/// Number of two-atom amplitudes written by [`qr_final_pair_amplitudes`].
pub const QR_PAIR_LEN: usize = 9;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ZeroNorm = 3,
    DegenerateDenominator = 4,
    ConvergenceFailure = 5,
    NotNormalized = 6,
    Capacity = 7,
    Panic = 8,
    Other = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QrComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for QrComplex {
    fn from(z: Complex64) -> Self {
        QrComplex { re: z.re, im: z.im }
    }
}

impl From<QrComplex> for Complex64 {
    fn from(z: QrComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Opaque model parameters (couplings, detunings, dissipations).
pub struct QrParams(ModelParams);

/// Opaque result of a full protocol run.
pub struct QrFinalPair(FinalPair);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> QrStatus {
    match err {
        Error::Capacity { .. } => QrStatus::Capacity,
        Error::ZeroNorm { .. } => QrStatus::ZeroNorm,
        Error::DegenerateDenominator { .. } => QrStatus::DegenerateDenominator,
        Error::ConvergenceFailure(_) => QrStatus::ConvergenceFailure,
        Error::NotNormalized { .. } => QrStatus::NotNormalized,
        Error::InvalidArgument(_) => QrStatus::InvalidArgument,
        _ => QrStatus::Other,
    }
}

struct Fail(QrStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(QrStatus::NullPointer, format!("{what} is null"))
}

fn bad(msg: impl Into<String>) -> Fail {
    Fail(QrStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QrStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside qrepeater".into());
            QrStatus::Panic
        }
    }
}

fn level(v: u32) -> Result<Level, Fail> {
    Level::from_index(v as usize).ok_or_else(|| bad(format!("level {v} is not one of 0, 1, 2")))
}

fn label(v: u32) -> Result<StageOneLabel, Fail> {
    StageOneLabel::ALL.get(v as usize).copied().ok_or_else(|| bad(format!("label {v} is not one of 0..=3")))
}

unsafe fn params_ref<'a>(p: *const QrParams) -> Result<&'a ModelParams, Fail> {
    p.as_ref().map(|p| &p.0).ok_or_else(|| null("params"))
}

unsafe fn pair_ref<'a>(p: *const QrFinalPair) -> Result<&'a FinalPair, Fail> {
    p.as_ref().map(|p| &p.0).ok_or_else(|| null("final pair"))
}

unsafe fn write_slice(out: *mut QrComplex, values: &[Complex64]) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    for (i, z) in values.iter().enumerate() {
        *out.add(i) = (*z).into();
    }
    Ok(())
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = value;
    Ok(())
}

/// Static description of a status code. Unknown codes get a generic text.
/// Never null.
#[no_mangle]
pub extern "C" fn qr_status_message(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null pointer",
        2 => c"invalid argument",
        3 => c"zero-norm outcome",
        4 => c"degenerate rate denominator",
        5 => c"matrix exponential failed",
        6 => c"state not normalized",
        7 => c"register too large",
        8 => c"internal panic",
        9 => c"error",
        _ => c"unknown status",
    };
    s.as_ptr()
}

/// Detail message of the last failure on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a NUL-terminated string.
#[no_mangle]
pub extern "C" fn qr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Create a parameter handle. Release it with [`qr_params_free`].
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_params_new(
    g1: f64,
    g2: f64,
    detuning_a: f64,
    detuning_b: f64,
    dissipation_a: f64,
    dissipation_b: f64,
    out: *mut *mut QrParams,
) -> QrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let p = ModelParams::new(g1, g2, detuning_a, detuning_b, dissipation_a, dissipation_b)?;
        *out = Box::into_raw(Box::new(QrParams(p)));
        Ok(())
    })
}

/// # Safety
/// `params` must be null or a handle from [`qr_params_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qr_params_free(params: *mut QrParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// The two effective complex rates.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn qr_params_rates(
    params: *const QrParams,
    rate_a: *mut QrComplex,
    rate_b: *mut QrComplex,
) -> QrStatus {
    guard(|| {
        let (a, b) = params_ref(params)?.rates()?;
        write(rate_a, a.value().into())?;
        write(rate_b, b.value().into())
    })
}

/// Write the 13 stage-one coefficients at time `t` into `out`.
///
/// # Safety
/// `out` must hold [`QR_STAGE_ONE_LEN`] elements.
#[no_mangle]
pub unsafe extern "C" fn qr_stage_one_coefficients(params: *const QrParams, t: f64, out: *mut QrComplex) -> QrStatus {
    guard(|| {
        let c = stage_one_coefficients(params_ref(params)?, t)?;
        write_slice(out, &c.0)
    })
}

/// Write the 6 stage-two coefficients of case `case_index` (1..=8).
///
/// # Safety
/// `out` must hold [`QR_STAGE_TWO_LEN`] elements.
#[no_mangle]
pub unsafe extern "C" fn qr_stage_two_coefficients(
    params: *const QrParams,
    case_index: u8,
    t: f64,
    tau: f64,
    out: *mut QrComplex,
) -> QrStatus {
    guard(|| {
        let c = stage_two_coefficients(case_index, params_ref(params)?, t, tau)?;
        write_slice(out, &c)
    })
}

/// Stage-one labels of numbered case `case_index` (1..=8).
///
/// # Safety
/// `left` and `right` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qr_case_labels(case_index: u8, left: *mut u32, right: *mut u32) -> QrStatus {
    guard(|| {
        let case = SwapCase::numbered(case_index)?;
        let pos = |l: StageOneLabel| StageOneLabel::ALL.iter().position(|x| *x == l).unwrap() as u32;
        write(left, pos(case.left))?;
        write(right, pos(case.right))
    })
}

/// Run both stages for the case made of stage-one labels `left` and
/// `right`, post-selecting the middle atoms on (`outcome_a`, `outcome_b`).
/// Release the result with [`qr_final_pair_free`].
///
/// # Safety
/// `params` must be a live handle and `out` valid for writing one pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn qr_run_protocol(
    params: *const QrParams,
    left: u32,
    right: u32,
    outcome_a: u32,
    outcome_b: u32,
    t: f64,
    tau: f64,
    out: *mut *mut QrFinalPair,
) -> QrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let p = params_ref(params)?;
        let case = SwapCase::new(label(left)?, label(right)?);
        let fp = qrepeater::run_protocol(p, t, tau, case, (level(outcome_a)?, level(outcome_b)?))?;
        *out = Box::into_raw(Box::new(QrFinalPair(fp)));
        Ok(())
    })
}

/// # Safety
/// `pair` must be null or a handle from [`qr_run_protocol`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qr_final_pair_free(pair: *mut QrFinalPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Negativity of the final pair.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn qr_final_pair_negativity(pair: *const QrFinalPair, out: *mut f64) -> QrStatus {
    guard(|| write(out, pair_ref(pair)?.negativity))
}

/// Weight of the selected outcome relative to all stage-two branches.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn qr_final_pair_success_probability(pair: *const QrFinalPair, out: *mut f64) -> QrStatus {
    guard(|| write(out, pair_ref(pair)?.success_probability))
}

/// Weight of the selected outcome including the stage-one post-selection.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn qr_final_pair_absolute_probability(pair: *const QrFinalPair, out: *mut f64) -> QrStatus {
    guard(|| write(out, pair_ref(pair)?.absolute_probability))
}

/// Normalized two-atom amplitudes, index `3*x + y` for levels x, y.
///
/// # Safety
/// `out` must hold [`QR_PAIR_LEN`] elements.
#[no_mangle]
pub unsafe extern "C" fn qr_final_pair_amplitudes(pair: *const QrFinalPair, out: *mut QrComplex) -> QrStatus {
    guard(|| write_slice(out, pair_ref(pair)?.state.amplitudes()))
}

/// Negativity of `a|xy> + b|yx>` for distinct x, y.
///
/// # Safety
/// `out` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn qr_negativity_sector(a: QrComplex, b: QrComplex, out: *mut f64) -> QrStatus {
    guard(|| write(out, qrepeater::measures::negativity_sector(a.into(), b.into())?))
}
