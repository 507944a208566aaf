//! Pauli words and real-coefficient Pauli operators.
//!
//! A word is one letter from {I, X, Y, Z} per qubit; qubit 0 is the least
//! significant bit of a basis-state index. Hermitian observables are stored
//! as real linear combinations of words (`PauliOperator`); the complex-valued
//! `PauliSum` exists for construction algebra (ladder-operator products) and
//! is collapsed into real form once a Hermitian or anti-Hermitian result is
//! assembled. Coefficients with magnitude below [`COEFF_PRUNE`] are dropped
//! after every arithmetic step.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::dense::DenseHermitian;
use crate::error::{Error, Result};

/// Coefficients at or below this magnitude are pruned after arithmetic.
pub const COEFF_PRUNE: f64 = 1e-14;

/// Largest register the dense conversion paths accept (2^12 = 4096 rows).
pub const MAX_DENSE_QUBITS: usize = 12;

/// Largest register a word may span (masks are kept in a `u64`).
pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Product of two letters: returns the resulting letter and the phase as
    /// a power of `i` (0..=3), i.e. `a * b = i^phase * product`.
    fn mul(self, other: Pauli) -> (Pauli, u8) {
        use Pauli::*;
        match (self, other) {
            (I, p) => (p, 0),
            (p, I) => (p, 0),
            (X, X) | (Y, Y) | (Z, Z) => (I, 0),
            (X, Y) => (Z, 1),
            (Y, X) => (Z, 3),
            (Y, Z) => (X, 1),
            (Z, Y) => (X, 3),
            (Z, X) => (Y, 1),
            (X, Z) => (Y, 3),
        }
    }

    /// One-letter symbol.
    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Complex unit `i` raised to `power mod 4`.
fn i_power(power: u8) -> Complex64 {
    match power % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Bit masks describing how a word acts on basis states.
#[derive(Debug, Clone, Copy)]
pub(crate) struct WordAction {
    /// Bits flipped by the word (X and Y positions).
    pub flip: u64,
    /// Bits contributing a sign when set in the source index (Y and Z).
    pub sign: u64,
    /// Number of Y letters, modulo 4 (global `i^y` factor).
    pub y_power: u8,
}

impl WordAction {
    /// Phase picked up when the word maps `|index⟩` to `|index ^ flip⟩`.
    #[inline]
    pub fn phase(&self, index: u64) -> Complex64 {
        let sign_flips = (index & self.sign).count_ones() as u8;
        i_power(self.y_power.wrapping_add(2 * sign_flips))
    }
}

/// A tensor product of single-qubit Pauli letters, one per qubit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliWord {
    letters: Vec<Pauli>,
}

impl PauliWord {
    /// The identity word on `qubit_count` qubits.
    pub fn identity(qubit_count: usize) -> Result<Self> {
        Self::from_letters(vec![Pauli::I; qubit_count])
    }

    /// A word with a single non-identity letter.
    pub fn single(qubit_count: usize, qubit: usize, letter: Pauli) -> Result<Self> {
        if qubit >= qubit_count {
            return Err(Error::Validation(format!(
                "qubit {qubit} out of range for a {qubit_count}-qubit word"
            )));
        }
        let mut letters = vec![Pauli::I; qubit_count];
        letters[qubit] = letter;
        Self::from_letters(letters)
    }

    /// Builds a word from one letter per qubit (qubit 0 first).
    pub fn from_letters(letters: Vec<Pauli>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Validation("a Pauli word needs at least one qubit".into()));
        }
        if letters.len() > MAX_QUBITS {
            return Err(Error::SizeLimit(format!(
                "word length {} exceeds the {MAX_QUBITS}-qubit cap",
                letters.len()
            )));
        }
        Ok(Self { letters })
    }

    /// Number of qubits the word spans.
    pub fn qubit_count(&self) -> usize {
        self.letters.len()
    }

    /// Letters, qubit 0 first.
    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Letter at `qubit`.
    pub fn letter(&self, qubit: usize) -> Pauli {
        self.letters[qubit]
    }

    /// True when every letter is the identity.
    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Masks and phase data for basis-state application.
    pub(crate) fn action(&self) -> WordAction {
        let mut flip = 0_u64;
        let mut sign = 0_u64;
        let mut y_count = 0_u32;
        for (q, &p) in self.letters.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => flip |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    sign |= 1 << q;
                    y_count += 1;
                }
                Pauli::Z => sign |= 1 << q,
            }
        }
        WordAction { flip, sign, y_power: (y_count % 4) as u8 }
    }

    /// Word product: `self * other = i^phase * word`.
    pub fn mul(&self, other: &PauliWord) -> Result<(PauliWord, u8)> {
        if self.qubit_count() != other.qubit_count() {
            return Err(Error::QubitMismatch {
                left: self.qubit_count(),
                right: other.qubit_count(),
            });
        }
        let mut phase = 0_u8;
        let mut letters = Vec::with_capacity(self.letters.len());
        for (&a, &b) in self.letters.iter().zip(&other.letters) {
            let (p, ph) = a.mul(b);
            letters.push(p);
            phase = (phase + ph) % 4;
        }
        Ok((PauliWord { letters }, phase))
    }

    /// True when the two words commute (they either commute or anticommute).
    pub fn commutes_with(&self, other: &PauliWord) -> Result<bool> {
        if self.qubit_count() != other.qubit_count() {
            return Err(Error::QubitMismatch {
                left: self.qubit_count(),
                right: other.qubit_count(),
            });
        }
        let mut anticommuting_positions = 0_usize;
        for (&a, &b) in self.letters.iter().zip(&other.letters) {
            if a != Pauli::I && b != Pauli::I && a != b {
                anticommuting_positions += 1;
            }
        }
        Ok(anticommuting_positions % 2 == 0)
    }
}

impl fmt::Display for PauliWord {
    /// Renders qubit 0 leftmost, e.g. `XIZY` puts X on qubit 0 and Y on qubit 3.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &p in &self.letters {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

/// A Hermitian operator as a real linear combination of Pauli words.
///
/// Terms are kept in a `BTreeMap` so iteration (and therefore every reduction
/// over terms) has a fixed deterministic order.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliOperator {
    qubit_count: usize,
    terms: BTreeMap<PauliWord, f64>,
}

impl PauliOperator {
    /// The zero operator on `qubit_count` qubits.
    pub fn zero(qubit_count: usize) -> Result<Self> {
        if qubit_count == 0 || qubit_count > MAX_QUBITS {
            return Err(Error::Validation(format!(
                "qubit count {qubit_count} out of the supported 1..={MAX_QUBITS} range"
            )));
        }
        Ok(Self { qubit_count, terms: BTreeMap::new() })
    }

    /// `coefficient * identity`.
    pub fn scalar(qubit_count: usize, coefficient: f64) -> Result<Self> {
        let mut op = Self::zero(qubit_count)?;
        op.add_term(PauliWord::identity(qubit_count)?, coefficient)?;
        Ok(op)
    }

    /// Builds an operator from `(word, coefficient)` pairs, merging duplicates.
    pub fn from_terms(
        qubit_count: usize,
        terms: impl IntoIterator<Item = (PauliWord, f64)>,
    ) -> Result<Self> {
        let mut op = Self::zero(qubit_count)?;
        for (word, coeff) in terms {
            op.add_term(word, coeff)?;
        }
        Ok(op)
    }

    /// Number of qubits.
    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterates `(word, coefficient)` in deterministic (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&PauliWord, f64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    /// Coefficient of `word` (zero when absent).
    pub fn coefficient(&self, word: &PauliWord) -> f64 {
        self.terms.get(word).copied().unwrap_or(0.0)
    }

    /// Adds `coefficient * word`, merging and pruning.
    pub fn add_term(&mut self, word: PauliWord, coefficient: f64) -> Result<()> {
        if word.qubit_count() != self.qubit_count {
            return Err(Error::QubitMismatch {
                left: self.qubit_count,
                right: word.qubit_count(),
            });
        }
        if !coefficient.is_finite() {
            return Err(Error::Validation("non-finite coefficient".into()));
        }
        let entry = self.terms.entry(word.clone()).or_insert(0.0);
        *entry += coefficient;
        if entry.abs() <= COEFF_PRUNE {
            self.terms.remove(&word);
        }
        Ok(())
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &PauliOperator, factor: f64) -> Result<PauliOperator> {
        if other.qubit_count != self.qubit_count {
            return Err(Error::QubitMismatch { left: self.qubit_count, right: other.qubit_count });
        }
        let mut out = self.clone();
        for (word, coeff) in other.terms() {
            out.add_term(word.clone(), factor * coeff)?;
        }
        Ok(out)
    }

    /// `factor * self`.
    pub fn scaled(&self, factor: f64) -> PauliOperator {
        let mut out = Self { qubit_count: self.qubit_count, terms: BTreeMap::new() };
        for (word, coeff) in self.terms() {
            let c = factor * coeff;
            if c.abs() > COEFF_PRUNE {
                out.terms.insert(word.clone(), c);
            }
        }
        out
    }

    /// Sum of absolute coefficients (an upper bound on the spectral radius of
    /// the traceless part plus the identity offset).
    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Expands the operator into a dense Hermitian matrix (<= 12 qubits).
    pub fn to_dense(&self) -> Result<DenseHermitian> {
        if self.qubit_count > MAX_DENSE_QUBITS {
            return Err(Error::SizeLimit(format!(
                "dense expansion refused beyond {MAX_DENSE_QUBITS} qubits (got {})",
                self.qubit_count
            )));
        }
        let dim = 1usize << self.qubit_count;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (word, coeff) in self.terms() {
            let action = word.action();
            for col in 0..dim {
                let row = col ^ (action.flip as usize);
                data[row * dim + col] += coeff * action.phase(col as u64);
            }
        }
        DenseHermitian::new(dim, data)
    }

    /// Projects a dense Hermitian matrix onto the Pauli basis.
    ///
    /// Coefficients are `Tr(P H) / 2^M`, necessarily real for Hermitian input;
    /// a residual imaginary part above `1e-12` of the matrix scale is an
    /// error. The reconstruction is exact up to pruning.
    pub fn from_dense(matrix: &DenseHermitian) -> Result<PauliOperator> {
        let dim = matrix.dim();
        if !dim.is_power_of_two() {
            return Err(Error::Validation(format!(
                "dense dimension {dim} is not a power of two"
            )));
        }
        let qubit_count = dim.trailing_zeros() as usize;
        if qubit_count == 0 || qubit_count > MAX_DENSE_QUBITS {
            return Err(Error::SizeLimit(format!(
                "Pauli projection supports 1..={MAX_DENSE_QUBITS} qubits (got {qubit_count})"
            )));
        }
        let scale = matrix.frobenius_norm().max(1.0);
        let mut op = PauliOperator::zero(qubit_count)?;
        let mut letters = vec![Pauli::I; qubit_count];
        let alphabet = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        // Odometer over all 4^M words.
        let word_total = 1usize << (2 * qubit_count);
        for code in 0..word_total {
            let mut rest = code;
            for letter in letters.iter_mut() {
                *letter = alphabet[rest & 3];
                rest >>= 2;
            }
            let word = PauliWord::from_letters(letters.clone())?;
            let action = word.action();
            let mut trace = Complex64::new(0.0, 0.0);
            for j in 0..dim {
                let col = j ^ (action.flip as usize);
                trace += action.phase(j as u64) * matrix.entry(j, col);
            }
            let coeff = trace / dim as f64;
            if coeff.im.abs() > 1e-12 * scale {
                return Err(Error::NotHermitian { deviation: coeff.im.abs() });
            }
            if coeff.re.abs() > COEFF_PRUNE {
                op.add_term(word, coeff.re)?;
            }
        }
        Ok(op)
    }
}

/// A complex linear combination of Pauli words (construction algebra).
///
/// Used while multiplying Jordan-Wigner ladder factors; the end product is
/// collapsed via [`PauliSum::into_hermitian`] (real coefficients) or
/// [`PauliSum::into_rotation_coefficients`] (anti-Hermitian combinations).
#[derive(Debug, Clone)]
pub struct PauliSum {
    qubit_count: usize,
    terms: BTreeMap<PauliWord, Complex64>,
}

impl PauliSum {
    /// The zero sum on `qubit_count` qubits.
    pub fn zero(qubit_count: usize) -> Result<Self> {
        if qubit_count == 0 || qubit_count > MAX_QUBITS {
            return Err(Error::Validation(format!(
                "qubit count {qubit_count} out of the supported 1..={MAX_QUBITS} range"
            )));
        }
        Ok(Self { qubit_count, terms: BTreeMap::new() })
    }

    /// `coefficient * identity`.
    pub fn scalar(qubit_count: usize, coefficient: Complex64) -> Result<Self> {
        let mut s = Self::zero(qubit_count)?;
        s.add_term(PauliWord::identity(qubit_count)?, coefficient)?;
        Ok(s)
    }

    /// Number of qubits.
    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterates `(word, coefficient)` in deterministic order.
    pub fn terms(&self) -> impl Iterator<Item = (&PauliWord, Complex64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    /// Adds `coefficient * word`, merging and pruning.
    pub fn add_term(&mut self, word: PauliWord, coefficient: Complex64) -> Result<()> {
        if word.qubit_count() != self.qubit_count {
            return Err(Error::QubitMismatch {
                left: self.qubit_count,
                right: word.qubit_count(),
            });
        }
        let entry = self.terms.entry(word.clone()).or_insert(Complex64::new(0.0, 0.0));
        *entry += coefficient;
        if entry.norm() <= COEFF_PRUNE {
            self.terms.remove(&word);
        }
        Ok(())
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &PauliSum, factor: Complex64) -> Result<PauliSum> {
        if other.qubit_count != self.qubit_count {
            return Err(Error::QubitMismatch { left: self.qubit_count, right: other.qubit_count });
        }
        let mut out = self.clone();
        for (word, coeff) in other.terms() {
            out.add_term(word.clone(), factor * coeff)?;
        }
        Ok(out)
    }

    /// Operator product, expanding word-by-word with `i`-power phases.
    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        if other.qubit_count != self.qubit_count {
            return Err(Error::QubitMismatch { left: self.qubit_count, right: other.qubit_count });
        }
        let mut out = PauliSum::zero(self.qubit_count)?;
        for (wa, ca) in self.terms() {
            for (wb, cb) in other.terms() {
                let (word, phase) = wa.mul(wb)?;
                out.add_term(word, ca * cb * i_power(phase))?;
            }
        }
        Ok(out)
    }

    /// Collapses a Hermitian sum into real coefficients.
    ///
    /// Residual imaginary parts above `1e-12` of the coefficient scale mean
    /// the sum was not Hermitian and are rejected.
    pub fn into_hermitian(self) -> Result<PauliOperator> {
        let scale = self.terms.values().map(|c| c.norm()).fold(1.0_f64, f64::max);
        let mut op = PauliOperator::zero(self.qubit_count)?;
        for (word, coeff) in self.terms {
            if coeff.im.abs() > 1e-12 * scale {
                return Err(Error::NotHermitian { deviation: coeff.im.abs() });
            }
            if coeff.re.abs() > COEFF_PRUNE {
                op.add_term(word, coeff.re)?;
            }
        }
        Ok(op)
    }

    /// Collapses an anti-Hermitian sum `A = -i * sum_w c_w P_w` into the real
    /// rotation coefficients `c_w`.
    ///
    /// Every coefficient of an anti-Hermitian Pauli combination is purely
    /// imaginary; residual real parts above `1e-12` of scale are rejected.
    /// The returned pairs feed rotation gates `exp(theta * A)` applied word by
    /// word as `exp(-i * theta * c_w * P_w)`.
    pub fn into_rotation_coefficients(self) -> Result<Vec<(PauliWord, f64)>> {
        let scale = self.terms.values().map(|c| c.norm()).fold(1.0_f64, f64::max);
        let mut out = Vec::with_capacity(self.terms.len());
        for (word, coeff) in self.terms {
            if coeff.re.abs() > 1e-12 * scale {
                return Err(Error::Validation(format!(
                    "sum is not anti-Hermitian: word {word} has real part {:.3e}",
                    coeff.re
                )));
            }
            let c = -coeff.im;
            if c.abs() > COEFF_PRUNE {
                out.push((word, c));
            }
        }
        Ok(out)
    }

    /// Expands into a dense row-major complex matrix (<= 12 qubits).
    pub fn to_dense(&self) -> Result<Vec<Complex64>> {
        if self.qubit_count > MAX_DENSE_QUBITS {
            return Err(Error::SizeLimit(format!(
                "dense expansion refused beyond {MAX_DENSE_QUBITS} qubits (got {})",
                self.qubit_count
            )));
        }
        let dim = 1usize << self.qubit_count;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (word, coeff) in self.terms() {
            let action = word.action();
            for col in 0..dim {
                let row = col ^ (action.flip as usize);
                data[row * dim + col] += coeff * action.phase(col as u64);
            }
        }
        Ok(data)
    }
}
