use std::ffi::CStr;
use std::ptr;

use num_complex::Complex64;
use qrepeater::protocol::closed_form::stage_one_coefficients;
use qrepeater::{Level, ModelParams, SwapCase};
use qrepeater_ffi::*;

fn params() -> *mut QrParams {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { qr_params_new(1.0, 2.0, 2.0, 2.0, 4.0, 2.0, &mut p) }, QrStatus::Ok);
    assert!(!p.is_null());
    p
}

fn last_error() -> String {
    let m = qr_last_error_message();
    assert!(!m.is_null());
    unsafe { CStr::from_ptr(m) }.to_string_lossy().into_owned()
}

#[test]
fn rates_match_core() {
    let p = params();
    let (mut a, mut b) = (QrComplex::default(), QrComplex::default());
    assert_eq!(unsafe { qr_params_rates(p, &mut a, &mut b) }, QrStatus::Ok);
    let (ra, rb) = ModelParams::new(1.0, 2.0, 2.0, 2.0, 4.0, 2.0).unwrap().rates().unwrap();
    assert_eq!(Complex64::from(a), ra.value());
    assert_eq!(Complex64::from(b), rb.value());
    unsafe { qr_params_free(p) };
}

#[test]
fn stage_one_matches_core() {
    let p = params();
    let mut buf = [QrComplex::default(); QR_STAGE_ONE_LEN];
    assert_eq!(unsafe { qr_stage_one_coefficients(p, 1.3, buf.as_mut_ptr()) }, QrStatus::Ok);
    let want = stage_one_coefficients(&ModelParams::new(1.0, 2.0, 2.0, 2.0, 4.0, 2.0).unwrap(), 1.3).unwrap();
    for (x, y) in buf.iter().zip(want.0) {
        assert_eq!(Complex64::from(*x), y);
    }
    unsafe { qr_params_free(p) };
}

#[test]
fn run_protocol_matches_core() {
    let p = params();
    let mut buf = [QrComplex::default(); QR_STAGE_TWO_LEN];
    assert_eq!(unsafe { qr_stage_two_coefficients(p, 1, 2.0, 5.0, buf.as_mut_ptr()) }, QrStatus::Ok);

    let (mut left, mut right) = (0u32, 0u32);
    assert_eq!(unsafe { qr_case_labels(1, &mut left, &mut right) }, QrStatus::Ok);
    let mut fp = ptr::null_mut();
    let status = unsafe { qr_run_protocol(p, left, right, QR_LEVEL_E, QR_LEVEL_G, 2.0, 5.0, &mut fp) };
    assert_eq!(status, QrStatus::Ok);

    let core = qrepeater::run_protocol(
        &ModelParams::new(1.0, 2.0, 2.0, 2.0, 4.0, 2.0).unwrap(),
        2.0,
        5.0,
        SwapCase::numbered(1).unwrap(),
        (Level::E, Level::G),
    )
    .unwrap();
    let (mut n, mut s, mut a) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(qr_final_pair_negativity(fp, &mut n), QrStatus::Ok);
        assert_eq!(qr_final_pair_success_probability(fp, &mut s), QrStatus::Ok);
        assert_eq!(qr_final_pair_absolute_probability(fp, &mut a), QrStatus::Ok);
    }
    assert_eq!((n, s, a), (core.negativity, core.success_probability, core.absolute_probability));

    let mut amps = [QrComplex::default(); QR_PAIR_LEN];
    assert_eq!(unsafe { qr_final_pair_amplitudes(fp, amps.as_mut_ptr()) }, QrStatus::Ok);
    let (x, y) = core.sector_amplitudes().unwrap();
    let mut sector = 0.0;
    assert_eq!(unsafe { qr_negativity_sector(x.into(), y.into(), &mut sector) }, QrStatus::Ok);
    assert!((sector - n).abs() < 1e-12);
    let norm: f64 = amps.iter().map(|z| z.re * z.re + z.im * z.im).sum();
    assert!((norm - 1.0).abs() < 1e-12);

    unsafe {
        qr_final_pair_free(fp);
        qr_params_free(p);
    }
}

#[test]
fn failures_report_codes_and_messages() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { qr_params_new(1.0, 1.0, 0.0, 1.0, 0.0, 0.0, &mut p) }, QrStatus::DegenerateDenominator);
    assert!(p.is_null());
    assert!(last_error().contains("denominator"));

    let p = params();
    let mut fp = ptr::null_mut();
    let status = unsafe { qr_run_protocol(p, 0, 0, 7, QR_LEVEL_G, 1.0, 1.0, &mut fp) };
    assert_eq!(status, QrStatus::InvalidArgument);
    assert!(fp.is_null());

    let status = unsafe { qr_run_protocol(p, QR_LABEL_PSI, QR_LABEL_PSI_PP, QR_LEVEL_G, QR_LEVEL_G, 1.0, 2.0, &mut fp) };
    assert_eq!(status, QrStatus::ZeroNorm);

    assert_eq!(unsafe { qr_stage_two_coefficients(p, 9, 1.0, 1.0, ptr::null_mut()) }, QrStatus::InvalidArgument);
    assert_eq!(unsafe { qr_stage_one_coefficients(p, 1.0, ptr::null_mut()) }, QrStatus::NullPointer);
    assert_eq!(unsafe { qr_stage_one_coefficients(ptr::null(), 1.0, ptr::null_mut()) }, QrStatus::NullPointer);
    let mut x = 0.0;
    assert_eq!(unsafe { qr_final_pair_negativity(ptr::null(), &mut x) }, QrStatus::NullPointer);
    assert_eq!(unsafe { qr_negativity_sector(QrComplex::default(), QrComplex::default(), &mut x) }, QrStatus::ZeroNorm);

    unsafe {
        qr_params_free(p);
        qr_params_free(ptr::null_mut());
        qr_final_pair_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_manifest() {
    let v = unsafe { CStr::from_ptr(qr_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
