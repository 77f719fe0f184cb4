//! Pure states of registers of three-level atoms.
//!
//! Basis convention (`gef-msd`): level `g`, `e`, `f` map to digits 0, 1, 2
//! and the first atom of a register is the most significant base-3 digit.
//! A ket such as `|gege⟩` therefore reads left to right and sits at index
//! `0*27 + 1*9 + 0*3 + 1 = 10`.
//!
//! Registers are allowed to be unnormalized; every branch of the swapping
//! protocol is carried around unnormalized until it is reported.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Name of the basis convention, echoed in every serialized output.
pub const CONVENTION: &str = "gef-msd";

/// Default largest register the crate will build.
pub const MAX_ATOMS: usize = 8;

/// Norm below which a state is treated as a vanished branch.
pub const ZERO_NORM_EPSILON: f64 = 1e-12;

/// One of the three levels of a Λ-type atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    G,
    E,
    F,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::G, Level::E, Level::F];

    pub fn index(self) -> usize {
        match self {
            Level::G => 0,
            Level::E => 1,
            Level::F => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Level> {
        Level::ALL.get(i).copied()
    }

    pub fn from_char(c: char) -> Option<Level> {
        match c {
            'g' | 'G' => Some(Level::G),
            'e' | 'E' => Some(Level::E),
            'f' | 'F' => Some(Level::F),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Level::G => 'g',
            Level::E => 'e',
            Level::F => 'f',
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Parse a ket label like `"gege"` into levels.
pub fn parse_ket(label: &str) -> Result<Vec<Level>> {
    label
        .chars()
        .map(|c| Level::from_char(c).ok_or_else(|| invalid(format!("bad level `{c}` in `{label}`"))))
        .collect()
}

pub fn ket_label(levels: &[Level]) -> String {
    levels.iter().map(|l| l.as_char()).collect()
}

fn pow3(n: usize) -> usize {
    3usize.pow(n as u32)
}

/// Pure (possibly unnormalized) state of `num_atoms` three-level atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct QutritRegister {
    num_atoms: usize,
    amplitudes: Vec<C64>,
}

impl QutritRegister {
    pub fn zeros(num_atoms: usize) -> Result<Self> {
        check_atoms(num_atoms, MAX_ATOMS)?;
        Ok(Self { num_atoms, amplitudes: vec![C64::new(0.0, 0.0); pow3(num_atoms)] })
    }

    pub fn from_amplitudes(num_atoms: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_atoms(num_atoms, MAX_ATOMS)?;
        if amplitudes.len() != pow3(num_atoms) {
            return Err(invalid(format!(
                "expected {} amplitudes for {num_atoms} atoms, got {}",
                pow3(num_atoms),
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(invalid("amplitudes must be finite"));
        }
        Ok(Self { num_atoms, amplitudes })
    }

    /// Single basis ket with unit amplitude.
    pub fn basis(levels: &[Level]) -> Result<Self> {
        let mut r = Self::zeros(levels.len())?;
        let idx = r.index_of(levels);
        r.amplitudes[idx] = C64::new(1.0, 0.0);
        Ok(r)
    }

    /// Superposition given as `(ket label, amplitude)` pairs, e.g. `("ge", a)`.
    pub fn from_terms(num_atoms: usize, terms: &[(&str, C64)]) -> Result<Self> {
        let mut r = Self::zeros(num_atoms)?;
        for (label, amp) in terms {
            let levels = parse_ket(label)?;
            if levels.len() != num_atoms {
                return Err(invalid(format!("ket `{label}` does not have {num_atoms} atoms")));
            }
            let idx = r.index_of(&levels);
            r.amplitudes[idx] += *amp;
        }
        Ok(r)
    }

    pub fn num_atoms(&self) -> usize {
        self.num_atoms
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn index_of(&self, levels: &[Level]) -> usize {
        debug_assert_eq!(levels.len(), self.num_atoms);
        levels.iter().fold(0, |acc, l| acc * 3 + l.index())
    }

    pub fn levels_of(&self, index: usize) -> Vec<Level> {
        index_to_levels(index, self.num_atoms)
    }

    pub fn amplitude(&self, levels: &[Level]) -> C64 {
        self.amplitudes[self.index_of(levels)]
    }

    /// Amplitude by ket label; panics on a malformed label.
    pub fn amp(&self, label: &str) -> C64 {
        let levels = parse_ket(label).expect("valid ket label");
        self.amplitude(&levels)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            num_atoms: self.num_atoms,
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// Nonzero entries as `(levels, amplitude)` in index order.
    pub fn support(&self) -> Vec<(Vec<Level>, C64)> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(i, a)| (self.levels_of(i), *a))
            .collect()
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// Permute atoms: atom `k` of the result is atom `order[k]` of `self`.
    pub fn reorder(&self, order: &[usize]) -> Result<Self> {
        check_positions(order, self.num_atoms)?;
        if order.len() != self.num_atoms {
            return Err(invalid("reorder needs a full permutation"));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let lv = self.levels_of(i);
            let permuted: Vec<Level> = order.iter().map(|&k| lv[k]).collect();
            out[levels_to_index(&permuted)] = *a;
        }
        Ok(Self { num_atoms: self.num_atoms, amplitudes: out })
    }

    pub fn to_dump(&self) -> StateDump {
        StateDump {
            num_atoms: self.num_atoms,
            convention: CONVENTION.to_string(),
            amplitudes: self.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn from_dump(dump: &StateDump) -> Result<Self> {
        if dump.convention != CONVENTION {
            return Err(invalid(format!("unsupported basis convention `{}`", dump.convention)));
        }
        Self::from_amplitudes(
            dump.num_atoms,
            dump.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect(),
        )
    }
}

/// JSON form of a register: `[re, im]` pairs plus the basis convention.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDump {
    pub num_atoms: usize,
    pub convention: String,
    pub amplitudes: Vec<[f64; 2]>,
}

pub(crate) fn index_to_levels(mut index: usize, num_atoms: usize) -> Vec<Level> {
    let mut out = vec![Level::G; num_atoms];
    for slot in out.iter_mut().rev() {
        *slot = Level::ALL[index % 3];
        index /= 3;
    }
    out
}

pub(crate) fn levels_to_index(levels: &[Level]) -> usize {
    levels.iter().fold(0, |acc, l| acc * 3 + l.index())
}

fn check_atoms(num_atoms: usize, max: usize) -> Result<()> {
    if num_atoms == 0 {
        return Err(invalid("a register needs at least one atom"));
    }
    if num_atoms > max {
        return Err(Error::Capacity { atoms: num_atoms, max });
    }
    Ok(())
}

fn check_positions(positions: &[usize], num_atoms: usize) -> Result<()> {
    for (k, &p) in positions.iter().enumerate() {
        if p >= num_atoms {
            return Err(invalid(format!("atom position {p} out of range for {num_atoms} atoms")));
        }
        if positions[..k].contains(&p) {
            return Err(invalid(format!("atom position {p} repeated")));
        }
    }
    Ok(())
}

/// `a ⊗ b`, with the atoms of `a` first.
pub fn tensor_product(a: &QutritRegister, b: &QutritRegister) -> Result<QutritRegister> {
    tensor_product_with_capacity(a, b, MAX_ATOMS)
}

pub fn tensor_product_with_capacity(
    a: &QutritRegister,
    b: &QutritRegister,
    max_atoms: usize,
) -> Result<QutritRegister> {
    let n = a.num_atoms + b.num_atoms;
    if n > max_atoms {
        return Err(Error::Capacity { atoms: n, max: max_atoms });
    }
    let amplitudes = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    Ok(QutritRegister { num_atoms: n, amplitudes })
}

/// Project atoms at `positions` onto `levels`.
///
/// Returns the unnormalized residual on the remaining atoms (original order
/// kept) and its squared norm. A vanishing residual is a valid result.
pub fn project_levels(
    state: &QutritRegister,
    positions: &[usize],
    levels: &[Level],
) -> Result<(QutritRegister, f64)> {
    if positions.len() != levels.len() {
        return Err(invalid("positions and levels differ in length"));
    }
    if positions.is_empty() {
        return Err(invalid("no atoms to project"));
    }
    check_positions(positions, state.num_atoms)?;
    if positions.len() >= state.num_atoms {
        return Err(invalid("projection must leave at least one atom"));
    }
    let rest: Vec<usize> = (0..state.num_atoms).filter(|p| !positions.contains(p)).collect();
    let mut residual = QutritRegister::zeros(rest.len())?;
    for (i, amp) in state.amplitudes.iter().enumerate() {
        let lv = state.levels_of(i);
        if positions.iter().zip(levels).all(|(&p, &l)| lv[p] == l) {
            let rest_levels: Vec<Level> = rest.iter().map(|&p| lv[p]).collect();
            residual.amplitudes[levels_to_index(&rest_levels)] = *amp;
        }
    }
    let weight = residual.norm_sqr();
    Ok((residual, weight))
}

/// Inverse of [`project_levels`]: re-insert measured atoms with fixed levels.
pub fn embed_levels(
    residual: &QutritRegister,
    positions: &[usize],
    levels: &[Level],
) -> Result<QutritRegister> {
    if positions.len() != levels.len() {
        return Err(invalid("positions and levels differ in length"));
    }
    let n = residual.num_atoms + positions.len();
    check_atoms(n, MAX_ATOMS)?;
    check_positions(positions, n)?;
    let rest: Vec<usize> = (0..n).filter(|p| !positions.contains(p)).collect();
    let mut out = QutritRegister::zeros(n)?;
    for (i, amp) in residual.amplitudes.iter().enumerate() {
        let rl = residual.levels_of(i);
        let mut full = vec![Level::G; n];
        for (&p, &l) in positions.iter().zip(levels) {
            full[p] = l;
        }
        for (&p, &l) in rest.iter().zip(&rl) {
            full[p] = l;
        }
        out.amplitudes[levels_to_index(&full)] = *amp;
    }
    Ok(out)
}

pub fn normalize(state: &QutritRegister) -> Result<(QutritRegister, f64)> {
    normalize_with(state, ZERO_NORM_EPSILON)
}

pub fn normalize_with(state: &QutritRegister, epsilon: f64) -> Result<(QutritRegister, f64)> {
    let norm = state.norm();
    if !(norm >= epsilon) {
        return Err(Error::ZeroNorm { norm, epsilon });
    }
    Ok((state.scaled(C64::new(1.0 / norm, 0.0)), norm))
}

/// Density matrix on a subset of atoms of a register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_atoms: usize,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// `|ψ⟩⟨ψ|` of the whole register.
    pub fn projector(state: &QutritRegister) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Self { num_atoms: state.num_atoms, matrix: &v * v.adjoint() }
    }

    /// Wrap a matrix, checking shape and hermiticity to 1e-12.
    pub fn from_matrix(num_atoms: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = pow3(num_atoms);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(invalid(format!("expected a {dim}x{dim} matrix")));
        }
        let dm = Self { num_atoms, matrix };
        if !dm.is_hermitian(1e-12) {
            return Err(invalid("density matrix is not Hermitian"));
        }
        Ok(dm)
    }

    pub fn num_atoms(&self) -> usize {
        self.num_atoms
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm() <= tol))
    }
}

/// Reduced density matrix of the atoms in `keep`, ordered as given.
///
/// The trace equals the squared norm of `state`.
pub fn reduced_density(state: &QutritRegister, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(invalid("keep must name at least one atom"));
    }
    check_positions(keep, state.num_atoms)?;
    if state.norm_sqr() == 0.0 {
        return Err(Error::ZeroNorm { norm: 0.0, epsilon: 0.0 });
    }
    let traced: Vec<usize> = (0..state.num_atoms).filter(|p| !keep.contains(p)).collect();
    let kd = pow3(keep.len());
    let td = pow3(traced.len());
    // psi[k][t] as a kd x td matrix, rho = psi psi^dagger
    let mut psi = DMatrix::<C64>::zeros(kd, td);
    for (i, amp) in state.amplitudes.iter().enumerate() {
        let lv = state.levels_of(i);
        let ki = keep.iter().fold(0, |acc, &p| acc * 3 + lv[p].index());
        let ti = traced.iter().fold(0, |acc, &p| acc * 3 + lv[p].index());
        psi[(ki, ti)] = *amp;
    }
    let mut rho = &psi * psi.adjoint();
    // exact hermitian symmetrization of roundoff
    for i in 0..kd {
        rho[(i, i)].im = 0.0;
        for j in (i + 1)..kd {
            let avg = (rho[(i, j)] + rho[(j, i)].conj()) * 0.5;
            rho[(i, j)] = avg;
            rho[(j, i)] = avg.conj();
        }
    }
    Ok(DensityMatrix { num_atoms: keep.len(), matrix: rho })
}
