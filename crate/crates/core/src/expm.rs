//! Dense complex matrix exponential.
//!
//! Scaling and squaring with a diagonal Padé core (degrees 3, 5, 7, 9, 13),
//! following Higham, "The scaling and squaring method for the matrix
//! exponential revisited" (2005). Used as the independent check on the
//! closed-form pair propagator and to evolve the full cavity model, whose
//! generator is non-Hermitian and may be defective, so no eigendecomposition
//! is involved.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};

/// Largest dimension accepted (five qutrits).
pub const MAX_DIM: usize = 243;

const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
];
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn norm1(m: &DMatrix<C64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scaled(m: &DMatrix<C64>, s: f64) -> DMatrix<C64> {
    m * C64::new(s, 0.0)
}

/// `exp(scale * m)`.
pub fn matrix_exponential(m: &DMatrix<C64>, scale: C64) -> Result<DMatrix<C64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(invalid("matrix exponential needs a square matrix"));
    }
    if n > MAX_DIM {
        return Err(invalid(format!("dimension {n} exceeds {MAX_DIM}")));
    }
    if !scale.re.is_finite() || !scale.im.is_finite() || m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(invalid("matrix exponential input must be finite"));
    }
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let a = m * scale;
    let nrm = norm1(&a);

    let result = if let Some(&(deg, _)) = THETA.iter().find(|(_, th)| nrm <= *th) {
        pade_low(&a, deg)?
    } else {
        let s = if nrm > THETA_13 { (nrm / THETA_13).log2().ceil().max(0.0) as i32 } else { 0 };
        let a_s = scaled(&a, 2f64.powi(-s));
        let mut r = pade13(&a_s)?;
        for _ in 0..s {
            r = &r * &r;
        }
        r
    };

    if result.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::ConvergenceFailure("non-finite entries in exp(A)".into()));
    }
    Ok(result)
}

fn identity(n: usize) -> DMatrix<C64> {
    DMatrix::identity(n, n)
}

fn pade_low(a: &DMatrix<C64>, deg: usize) -> Result<DMatrix<C64>> {
    let b: &[f64] = match deg {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        9 => &B9,
        _ => unreachable!("unsupported Padé degree"),
    };
    let n = a.nrows();
    let id = identity(n);
    let a2 = a * a;
    // powers a^0, a^2, a^4, ...
    let mut pows = vec![id.clone(), a2.clone()];
    while pows.len() <= deg / 2 {
        let next = pows.last().unwrap() * &a2;
        pows.push(next);
    }
    let mut u = DMatrix::<C64>::zeros(n, n);
    let mut v = DMatrix::<C64>::zeros(n, n);
    for k in 0..=deg / 2 {
        u += scaled(&pows[k], b[2 * k + 1]);
        v += scaled(&pows[k], b[2 * k]);
    }
    let u = a * u;
    solve(&v - &u, &v + &u)
}

fn pade13(a: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let b = &B13;
    let n = a.nrows();
    let id = identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let u_inner = scaled(&a6, b[13]) + scaled(&a4, b[11]) + scaled(&a2, b[9]);
    let u = a
        * (&a6 * u_inner
            + scaled(&a6, b[7])
            + scaled(&a4, b[5])
            + scaled(&a2, b[3])
            + scaled(&id, b[1]));
    let v_inner = scaled(&a6, b[12]) + scaled(&a4, b[10]) + scaled(&a2, b[8]);
    let v = &a6 * v_inner + scaled(&a6, b[6]) + scaled(&a4, b[4]) + scaled(&a2, b[2]) + scaled(&id, b[0]);
    solve(&v - &u, &v + &u)
}

fn solve(q: DMatrix<C64>, p: DMatrix<C64>) -> Result<DMatrix<C64>> {
    q.lu()
        .solve(&p)
        .ok_or_else(|| Error::ConvergenceFailure("singular Padé denominator".into()))
}
