//! Closed-form amplitudes of the swapping protocol.
//!
//! These are written out term by term, independently of the propagator
//! pipeline in the parent module, so the two routes can be checked against
//! each other. `tau` here is the protocol clock: the second interaction
//! starts at `t` and is read out at `tau`, i.e. it lasts `tau - t`.

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64 as C64;

use crate::effective::ModelParams;
use crate::error::{invalid, Error, Result};
use crate::qutrit::ZERO_NORM_EPSILON;

const I: C64 = C64::new(0.0, 1.0);

fn cis(phase: f64) -> C64 {
    C64::from_polar(1.0, phase)
}

fn csin(z: C64) -> C64 {
    ((I * z).exp() - (-I * z).exp()) / (2.0 * I)
}

fn ccos(z: C64) -> C64 {
    ((I * z).exp() + (-I * z).exp()) / 2.0
}

/// The thirteen stage-one amplitudes `A1..A13` of the four-atom state
/// on the kets returned by [`stage_one_kets`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageOneCoefficients(pub [C64; 13]);

impl StageOneCoefficients {
    /// 1-based access matching the usual `A_k` numbering.
    pub fn a(&self, k: usize) -> C64 {
        self.0[k - 1]
    }
}

/// Kets carrying `A1..A13`, atoms ordered (1, 2, 3, 4).
pub fn stage_one_kets() -> [&'static str; 13] {
    [
        "gggg", "gege", "ggee", "ggff", "eegg", "egeg", "eeee", "eeff", "efef", "ffgg", "fefe", "ffee", "ffff",
    ]
}

pub fn stage_one_coefficients(params: &ModelParams, t: f64) -> Result<StageOneCoefficients> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid("stage-one time must be finite and nonnegative"));
    }
    let (l1, l2) = params.rates()?;
    let (l1, l2) = (l1.value(), l2.value());
    let p = (-I * (l1 + l2) * t).exp();
    let half = cis(-FRAC_PI_2);
    let quarter = cis(-FRAC_PI_4);

    let a1 = half / 3.0;
    let a2 = -half / 3.0 * p * csin(l1 * t);
    let a3 = -I * half / 3.0 * p * ccos(l1 * t);
    let a4 = -I * quarter / 3.0;
    let a7 = -half / 3.0 * (-2.0 * I * (l1 + l2) * t).exp();
    let a8 = -quarter / 3.0 * p * ccos(l2 * t);
    let a9 = I * quarter / 3.0 * p * csin(l2 * t);
    let a13 = C64::new(-1.0 / 3.0, 0.0);
    Ok(StageOneCoefficients([a1, a2, a3, a4, a3, a2, a7, a8, a9, a4, a9, a8, a13]))
}

/// Kets of the six stage-two coefficients `B^k_1..B^k_6`, atoms (1, 4, 5, 8).
pub fn stage_two_kets(case_index: u8) -> Result<[&'static str; 6]> {
    Ok(match case_index {
        1 => ["gege", "ggee", "eegg", "egeg", "egge", "geeg"],
        2 | 3 => ["gege", "ggee", "geeg", "egge", "eegg", "egeg"],
        4 => ["gege", "ggee", "eegg", "egeg", "geeg", "egge"],
        5 => ["eeff", "efef", "ffee", "fefe", "effe", "feef"],
        6 | 7 => ["efef", "eeff", "effe", "feef", "fefe", "ffee"],
        8 => ["efef", "eeff", "fefe", "ffee", "effe", "feef"],
        _ => return Err(invalid(format!("case index {case_index} is not in 1..=8"))),
    })
}

fn normalizer(x: C64, y: C64) -> Result<f64> {
    let n = x.norm_sqr() + y.norm_sqr();
    if !(n.sqrt() >= ZERO_NORM_EPSILON) {
        return Err(Error::ZeroNorm { norm: n.sqrt(), epsilon: ZERO_NORM_EPSILON });
    }
    Ok(n)
}

/// `B^k_1..B^k_6` for case `k` at stage-one time `t` and readout time `tau`.
pub fn stage_two_coefficients(case_index: u8, params: &ModelParams, t: f64, tau: f64) -> Result<[C64; 6]> {
    if !tau.is_finite() {
        return Err(invalid("tau must be finite"));
    }
    let a = stage_one_coefficients(params, t)?;
    let (l1, l2) = params.rates()?;
    let (l1, l2) = (l1.value(), l2.value());
    let e = |z: C64| z.exp();

    let p = e(-I * (l1 + l2) * tau);
    let dd = e(-2.0 * I * (l1 + l2) * (tau - t));
    let plus_a = e(I * l1 * tau) * e(I * l2 * t) + e(-I * l1 * tau) * e(2.0 * I * l1 * t) * e(I * l2 * t);
    let minus_a = e(I * l1 * tau) * e(I * l2 * t) - e(-I * l1 * tau) * e(2.0 * I * l1 * t) * e(I * l2 * t);
    let plus_b = e(I * l2 * tau) * e(I * l1 * t) + e(-I * l2 * tau) * e(I * l1 * t) * e(2.0 * I * l2 * t);
    let minus_b = e(I * l2 * tau) * e(I * l1 * t) - e(-I * l2 * tau) * e(I * l1 * t) * e(2.0 * I * l2 * t);

    let b = match case_index {
        1 => {
            let n = normalizer(a.a(2), a.a(5))?;
            let (a2, a5) = (a.a(2), a.a(5));
            [
                a2 * a2 / 2.0 / n * p * plus_a,
                -(a2 * a2 / 2.0) / n * p * minus_a,
                -(a5 * a5 / 2.0) / n * p * minus_a,
                a5 * a5 / 2.0 / n * p * plus_a,
                a2 * a5 / n,
                a2 * a5 / n * dd,
            ]
        }
        2 | 3 => {
            let n1 = normalizer(a.a(2), a.a(5))?;
            let n2 = normalizer(a.a(3), a.a(6))?;
            let s = n1.sqrt() * n2.sqrt();
            let m = 2.0 * s;
            let (a2, a3, a5, a6) = (a.a(2), a.a(3), a.a(5), a.a(6));
            let (third, fourth) = if case_index == 2 {
                (a2 * a6 / s * dd, a3 * a5 / s)
            } else {
                (a3 * a5 / s * dd, a2 * a6 / s)
            };
            [
                a2 * a3 * p / m * plus_a,
                -(a2 * a3 * p) / m * minus_a,
                third,
                fourth,
                -(a5 * a6 * p) / m * minus_a,
                a5 * a6 * p / m * plus_a,
            ]
        }
        4 => {
            let n = normalizer(a.a(3), a.a(6))?;
            let (a3, a6) = (a.a(3), a.a(6));
            [
                a3 * a3 / 2.0 / n * p * plus_a,
                -(a3 * a3 / 2.0) / n * p * minus_a,
                -(a6 * a6 / 2.0) / n * p * minus_a,
                a6 * a6 / 2.0 / n * p * plus_a,
                a3 * a6 / n * dd,
                a3 * a6 / n,
            ]
        }
        5 => {
            let n = normalizer(a.a(8), a.a(11))?;
            let (a8, a11) = (a.a(8), a.a(11));
            [
                -(a8 * a8 / 2.0) / n * p * minus_b,
                a8 * a8 / 2.0 / n * p * plus_b,
                -(a11 * a11 / 2.0) / n * p * minus_b,
                a11 * a11 / 2.0 / n * p * plus_b,
                a8 * a11 / n,
                a8 * a11 / n * dd,
            ]
        }
        6 | 7 => {
            let n1 = normalizer(a.a(8), a.a(11))?;
            let n2 = normalizer(a.a(9), a.a(12))?;
            let s = n1.sqrt() * n2.sqrt();
            let m = 2.0 * s;
            let (a8, a9, a11, a12) = (a.a(8), a.a(9), a.a(11), a.a(12));
            let (third, fourth) = if case_index == 6 {
                (a8 * a12 / s, a9 * a11 / s * dd)
            } else {
                (a9 * a11 / s, a8 * a12 / s * dd)
            };
            [
                a8 * a9 * p / m * plus_b,
                -(a8 * a9 * p) / m * minus_b,
                third,
                fourth,
                a11 * a12 * p / m * plus_b,
                -(a11 * a12 * p) / m * minus_b,
            ]
        }
        8 => {
            let n = normalizer(a.a(9), a.a(12))?;
            let (a9, a12) = (a.a(9), a.a(12));
            [
                a9 * a9 / 2.0 / n * p * plus_b,
                -(a9 * a9 / 2.0) / n * p * minus_b,
                a12 * a12 / 2.0 / n * p * plus_b,
                -(a12 * a12 / 2.0) / n * p * minus_b,
                a9 * a12 / n,
                a9 * a12 / n * dd,
            ]
        }
        _ => return Err(invalid(format!("case index {case_index} is not in 1..=8"))),
    };
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(delta: f64, gamma: f64) -> ModelParams {
        ModelParams::new(1.0, 2.0, delta, 2.0, gamma, 0.0).unwrap()
    }

    #[test]
    fn constant_amplitudes() {
        let p = params(2.0, 4.0);
        for t in [0.0, 0.7, 5.0] {
            let a = stage_one_coefficients(&p, t).unwrap();
            assert!((a.a(1) - C64::new(0.0, -1.0 / 3.0)).norm() < 1e-15);
            let a4 = -I * cis(-FRAC_PI_4) / 3.0;
            assert!((a.a(4) - a4).norm() < 1e-15);
            assert_eq!(a.a(4), a.a(10));
            assert_eq!(a.a(13), C64::new(-1.0 / 3.0, 0.0));
        }
    }

    #[test]
    fn quarter_turn_empties_a3() {
        let p = params(6.0, 0.0);
        let l1 = p.rate_a().unwrap().value().re;
        let a = stage_one_coefficients(&p, FRAC_PI_2 / l1).unwrap();
        assert!((a.a(2).norm() - 1.0 / 3.0).abs() < 1e-14);
        assert!(a.a(3).norm() < 1e-14);
    }

    #[test]
    fn initial_amplitudes_are_bell_products() {
        let a = stage_one_coefficients(&params(2.0, 4.0), 0.0).unwrap();
        assert_eq!(a.a(2), C64::new(0.0, 0.0));
        // A5(0) = -(i/3) e^{-iπ/2} = -1/3
        assert!((a.a(5) - C64::new(-1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = params(2.0, 4.0);
        assert!(stage_one_coefficients(&p, -1.0).is_err());
        assert!(stage_two_coefficients(0, &p, 1.0, 1.0).is_err());
        assert!(stage_two_coefficients(9, &p, 1.0, 1.0).is_err());
        assert!(stage_two_kets(9).is_err());
        // every stage-one branch pairs a sine with a cosine, so no normalizer vanishes at t = 0
        for k in 1..=8 {
            assert!(stage_two_coefficients(k, &p, 0.0, 1.0).is_ok());
        }
        assert!(matches!(normalizer(C64::new(0.0, 0.0), C64::new(1e-13, 0.0)), Err(Error::ZeroNorm { .. })));
    }
}
