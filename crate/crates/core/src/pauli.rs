//! n-qubit Pauli group in symplectic binary form.
//!
//! An operator is stored as a pair of packed bit vectors `(x, z)` plus a phase
//! exponent `k` and represents `i^k · σ(x_1, z_1) ⊗ … ⊗ σ(x_n, z_n)` where
//! `σ(0,0) = I`, `σ(1,0) = X`, `σ(0,1) = Z` and `σ(1,1) = Y = i·X·Z`.
//!
//! Qubit indices in the public constructors and in all text forms are 1-based;
//! accessors taking a `usize` position (`letter_at`, `set_letter`) are 0-based.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::error::{QecError, Result};

/// Non-identity single-qubit Pauli, ordered `X < Y < Z` for tie-breaking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    #[inline]
    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Option<Letter> {
        match (x, z) {
            (false, false) => None,
            (true, false) => Some(Letter::X),
            (true, true) => Some(Letter::Y),
            (false, true) => Some(Letter::Z),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    fn from_char(c: char) -> Option<Option<Letter>> {
        match c {
            'I' => Some(None),
            'X' => Some(Some(Letter::X)),
            'Y' => Some(Some(Letter::Y)),
            'Z' => Some(Some(Letter::Z)),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(QecError::ZeroQubits);
        }
        Ok(Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            phase: 0,
        })
    }

    /// Builds an operator from 1-based `(qubit, letter)` terms with phase +1.
    pub fn from_support(n: usize, terms: &[(usize, Letter)]) -> Result<Self> {
        let mut p = Self::identity(n)?;
        let mut seen = vec![false; n];
        for &(index, letter) in terms {
            if index == 0 || index > n {
                return Err(QecError::IndexOutOfRange { index, n });
            }
            if seen[index - 1] {
                return Err(QecError::DuplicateIndex(index));
            }
            seen[index - 1] = true;
            p.set_letter(index - 1, Some(letter));
        }
        Ok(p)
    }

    /// Same letter on every listed 1-based qubit, e.g. `uniform(9, Letter::Z, &[1, 2])`.
    pub fn uniform(n: usize, letter: Letter, qubits: &[usize]) -> Result<Self> {
        let terms: Vec<_> = qubits.iter().map(|&q| (q, letter)).collect();
        Self::from_support(n, &terms)
    }

    pub fn from_bits(x: BitVec, z: BitVec, phase_exp: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(QecError::SizeMismatch {
                expected: x.len(),
                actual: z.len(),
            });
        }
        if x.is_empty() {
            return Err(QecError::ZeroQubits);
        }
        Ok(Self {
            x,
            z,
            phase: phase_exp % 4,
        })
    }

    /// Uniformly random Pauli (phase +1) over all `4^n` letter patterns.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut p = Self::identity(n.max(1)).expect("n >= 1");
        for q in 0..n {
            let (x, z) = (rng.random::<bool>(), rng.random::<bool>());
            p.x.set(q, x);
            p.z.set(q, z);
        }
        p
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    #[inline]
    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    /// Global phase exponent `k` of `i^k`, in `0..4`.
    #[inline]
    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase_exp: u8) -> Self {
        self.phase = phase_exp % 4;
        self
    }

    /// Letter on 0-based qubit `q`, `None` for identity.
    #[inline]
    pub fn letter_at(&self, q: usize) -> Option<Letter> {
        Letter::from_bits(self.x.get(q), self.z.get(q))
    }

    /// Overwrites the letter on 0-based qubit `q` without touching the phase.
    pub fn set_letter(&mut self, q: usize, letter: Option<Letter>) {
        let (x, z) = letter.map_or((false, false), Letter::bits);
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Non-identity sites as 1-based `(qubit, letter)` in ascending order.
    pub fn support(&self) -> Vec<(usize, Letter)> {
        (0..self.num_qubits())
            .filter_map(|q| self.letter_at(q).map(|l| (q + 1, l)))
            .collect()
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.num_qubits() != other.num_qubits() {
            return Err(QecError::SizeMismatch {
                expected: self.num_qubits(),
                actual: other.num_qubits(),
            });
        }
        Ok(())
    }

    /// Exact matrix product `self · other`, including the global phase.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.mul_assign_unchecked(other);
        out
    }

    /// `self ← self · other` for equal-size operators.
    pub(crate) fn mul_assign_unchecked(&mut self, other: &Self) {
        // Per site, XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i.
        let mut plus = 0u32;
        let mut minus = 0u32;
        for (((&x1, &z1), &x2), &z2) in self
            .x
            .words()
            .iter()
            .zip(self.z.words())
            .zip(other.x.words())
            .zip(other.z.words())
        {
            let (px, py, pz) = (x1 & !z1, x1 & z1, !x1 & z1);
            let (qx, qy, qz) = (x2 & !z2, x2 & z2, !x2 & z2);
            plus += ((px & qy) | (py & qz) | (pz & qx)).count_ones();
            minus += ((py & qx) | (pz & qy) | (px & qz)).count_ones();
        }
        let phase = self.phase as u32 + other.phase as u32 + plus + 3 * minus;
        self.phase = (phase % 4) as u8;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Commutation test via the symplectic inner product; phases are ignored.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_size(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        let mut acc = 0u64;
        for (((&x1, &z1), &x2), &z2) in self
            .x
            .words()
            .iter()
            .zip(self.z.words())
            .zip(other.x.words())
            .zip(other.z.words())
        {
            acc ^= (x1 & z2) ^ (z1 & x2);
        }
        acc.count_ones() % 2 == 0
    }

    /// Symplectic vector `(x | z)` of length `2n`.
    pub fn symplectic(&self) -> BitVec {
        let n = self.num_qubits();
        let mut v = BitVec::zeros(2 * n);
        for q in self.x.ones() {
            v.set(q, true);
        }
        for q in self.z.ones() {
            v.set(n + q, true);
        }
        v
    }

    /// Operator with every X and Z exchanged (Hadamard conjugation up to phase).
    pub fn swap_xz(&self) -> Self {
        Self {
            x: self.z.clone(),
            z: self.x.clone(),
            phase: self.phase,
        }
    }

    /// Dense form without the phase token, e.g. `"IXIY"`.
    pub fn letters(&self) -> String {
        (0..self.num_qubits())
            .map(|q| self.letter_at(q).map_or('I', Letter::as_char))
            .collect()
    }

    /// Sparse form with 1-based indices, e.g. `"X2 Y4"`; identity is `"I"`.
    pub fn to_sparse_string(&self) -> String {
        let body = self
            .support()
            .iter()
            .map(|(q, l)| format!("{}{}", l.as_char(), q))
            .collect::<Vec<_>>()
            .join(" ");
        let body = if body.is_empty() { "I".to_string() } else { body };
        match phase_token(self.phase) {
            "" => body,
            t => format!("{t}{body}"),
        }
    }

    /// Parses the dense form, with an optional leading `+`, `-`, `+i` or `-i`.
    pub fn parse(text: &str) -> Result<Self> {
        let err = |reason: &str| QecError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let (phase, body) = split_phase(text.trim());
        let body = body.trim();
        if body.is_empty() {
            return Err(err("empty operator"));
        }
        let mut p = Self::identity(body.chars().count())?;
        for (q, c) in body.chars().enumerate() {
            let letter = Letter::from_char(c).ok_or_else(|| err(&format!("unknown letter {c:?}")))?;
            p.set_letter(q, letter);
        }
        Ok(p.with_phase(phase))
    }

    /// Parses the sparse form `"X1 Z3 Y5"` on `n` qubits. `"I"` or `""` is the identity.
    pub fn parse_sparse(text: &str, n: usize) -> Result<Self> {
        let err = |reason: String| QecError::Parse {
            text: text.to_string(),
            reason,
        };
        let (phase, body) = split_phase(text.trim());
        let mut terms = Vec::new();
        for token in body.split_whitespace() {
            if token == "I" {
                continue;
            }
            let mut chars = token.chars();
            let head = chars.next().expect("split_whitespace yields non-empty tokens");
            let letter = match Letter::from_char(head) {
                Some(Some(l)) => l,
                _ => return Err(err(format!("unknown letter in {token:?}"))),
            };
            let index: usize = chars
                .as_str()
                .trim_start_matches('_')
                .parse()
                .map_err(|_| err(format!("bad index in {token:?}")))?;
            terms.push((index, letter));
        }
        Ok(Self::from_support(n, &terms)?.with_phase(phase))
    }

    /// Dense `2^n × 2^n` matrix, qubit 1 most significant. Intended for small `n`.
    pub fn to_matrix(&self) -> Vec<Vec<Complex64>> {
        let n = self.num_qubits();
        let dim = 1usize << n;
        let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for col in 0..dim {
            let (row, amp) = self.apply_to_basis(col);
            m[row][col] = amp;
        }
        m
    }

    /// Image of basis state `|b⟩` (qubit 1 most significant): `P|b⟩ = amp·|row⟩`.
    pub fn apply_to_basis(&self, b: usize) -> (usize, Complex64) {
        let n = self.num_qubits();
        let mut row = b;
        let mut k = self.phase as u32;
        let mut sign = false;
        for q in 0..n {
            let bit_pos = n - 1 - q;
            let bit = (b >> bit_pos) & 1 == 1;
            let (x, z) = (self.x.get(q), self.z.get(q));
            if z && bit {
                sign = !sign;
            }
            if x {
                row ^= 1 << bit_pos;
            }
            if x && z {
                k += 1;
            }
        }
        if sign {
            k += 2;
        }
        (row, i_pow(k))
    }
}

pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn phase_token(phase: u8) -> &'static str {
    match phase % 4 {
        0 => "",
        1 => "+i",
        2 => "-",
        _ => "-i",
    }
}

fn split_phase(text: &str) -> (u8, &str) {
    for (token, phase) in [("+i", 1u8), ("-i", 3), ("+", 0), ("-", 2)] {
        if let Some(rest) = text.strip_prefix(token) {
            return (phase, rest);
        }
    }
    (0, text)
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", phase_token(self.phase), self.letters())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = QecError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Iterates every Pauli of exactly weight `w` over the given letters, in
/// lexicographic order of the support list `[(qubit, letter), …]`
/// (qubit index first, then `X < Y < Z`).
pub struct WeightEnumerator {
    n: usize,
    letters: Vec<Letter>,
    positions: Vec<usize>,
    letter_idx: Vec<usize>,
    done: bool,
}

impl WeightEnumerator {
    pub fn new(n: usize, w: usize, letters: &[Letter]) -> Self {
        let mut letters = letters.to_vec();
        letters.sort();
        letters.dedup();
        let done = n == 0 || w > n || (w > 0 && letters.is_empty());
        Self {
            n,
            letters,
            positions: (0..w).collect(),
            letter_idx: vec![0; w],
            done,
        }
    }

    fn advance(&mut self) {
        let w = self.positions.len();
        let nl = self.letters.len();
        for j in (0..w).rev() {
            if self.letter_idx[j] + 1 < nl {
                self.letter_idx[j] += 1;
            } else if self.positions[j] + (w - j) < self.n {
                self.letter_idx[j] = 0;
                self.positions[j] += 1;
            } else {
                continue;
            }
            for t in j + 1..w {
                self.positions[t] = self.positions[t - 1] + 1;
                self.letter_idx[t] = 0;
            }
            return;
        }
        self.done = true;
    }
}

impl Iterator for WeightEnumerator {
    type Item = PauliOperator;

    fn next(&mut self) -> Option<PauliOperator> {
        if self.done {
            return None;
        }
        let mut p = PauliOperator::identity(self.n).expect("n >= 1");
        for (&q, &li) in self.positions.iter().zip(&self.letter_idx) {
            p.set_letter(q, Some(self.letters[li]));
        }
        self.advance();
        Some(p)
    }
}

/// All Paulis of weight `0..=max_weight` ordered by weight, then lexicographically.
pub fn enumerate_up_to(
    n: usize,
    max_weight: usize,
    letters: &[Letter],
) -> impl Iterator<Item = PauliOperator> + '_ {
    (0..=max_weight.min(n)).flat_map(move |w| WeightEnumerator::new(n, w, letters))
}

/// Coefficients of a 2×2 matrix in the `{I, X, Y, Z}` basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliCoefficients {
    pub alpha_i: Complex64,
    pub alpha_x: Complex64,
    pub alpha_y: Complex64,
    pub alpha_z: Complex64,
}

impl PauliCoefficients {
    /// Coefficient on `X·Z` when `Y` is replaced by `XZ`; since `Y = i·XZ` this is `i·α_Y`.
    pub fn alpha_xz(&self) -> Complex64 {
        Complex64::i() * self.alpha_y
    }

    pub fn reconstruct(&self) -> [[Complex64; 2]; 2] {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (coef, m) in [
            (self.alpha_i, pauli_matrix(None)),
            (self.alpha_x, pauli_matrix(Some(Letter::X))),
            (self.alpha_y, pauli_matrix(Some(Letter::Y))),
            (self.alpha_z, pauli_matrix(Some(Letter::Z))),
        ] {
            for r in 0..2 {
                for c in 0..2 {
                    out[r][c] += coef * m[r][c];
                }
            }
        }
        out
    }
}

/// Single-qubit Pauli matrices; `None` is the identity.
pub fn pauli_matrix(letter: Option<Letter>) -> [[Complex64; 2]; 2] {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    match letter {
        None => [[one, o], [o, one]],
        Some(Letter::X) => [[o, one], [one, o]],
        Some(Letter::Y) => [[o, -i], [i, o]],
        Some(Letter::Z) => [[one, o], [o, -one]],
    }
}

/// Expands `u` as `α_I·I + α_X·X + α_Y·Y + α_Z·Z` with `α_P = tr(P†·U)/2`.
pub fn decompose_unitary(u: &[[Complex64; 2]; 2]) -> PauliCoefficients {
    let coef = |letter: Option<Letter>| {
        let p = pauli_matrix(letter);
        let mut tr = Complex64::new(0.0, 0.0);
        for r in 0..2 {
            for c in 0..2 {
                tr += p[c][r].conj() * u[c][r];
            }
        }
        tr / 2.0
    };
    PauliCoefficients {
        alpha_i: coef(None),
        alpha_x: coef(Some(Letter::X)),
        alpha_y: coef(Some(Letter::Y)),
        alpha_z: coef(Some(Letter::Z)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::*;

    fn p(text: &str) -> PauliOperator {
        PauliOperator::parse(text).unwrap()
    }

    #[test]
    fn identity_and_errors() {
        let id = PauliOperator::identity(3).unwrap();
        assert_eq!(id.to_string(), "III");
        assert_eq!(id.phase_exp(), 0);
        assert_eq!(PauliOperator::identity(5).unwrap().weight(), 0);
        assert_eq!(PauliOperator::identity(0), Err(QecError::ZeroQubits));
        assert!(id.commutes(&p("XYZ")).unwrap());
    }

    #[test]
    fn from_support_checks_indices() {
        let op = PauliOperator::from_support(4, &[(2, X), (4, Y)]).unwrap();
        assert_eq!(op.to_string(), "IXIY");
        assert_eq!(op.support(), vec![(2, X), (4, Y)]);
        assert_eq!(
            PauliOperator::from_support(2, &[]).unwrap(),
            PauliOperator::identity(2).unwrap()
        );
        assert_eq!(
            PauliOperator::from_support(3, &[(1, X), (1, Z)]),
            Err(QecError::DuplicateIndex(1))
        );
        assert_eq!(
            PauliOperator::from_support(3, &[(4, X)]),
            Err(QecError::IndexOutOfRange { index: 4, n: 3 })
        );
        assert!(PauliOperator::from_support(3, &[(0, X)]).is_err());
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let xz = p("X").multiply(&p("Z")).unwrap();
        assert_eq!(xz.letters(), "Y");
        assert_eq!(xz.phase_exp(), 3);
        let zx = p("Z").multiply(&p("X")).unwrap();
        assert_eq!(zx.phase_exp(), 1);
    }

    #[test]
    fn stabilizer_product() {
        let prod = p("ZZI").multiply(&p("IZZ")).unwrap();
        assert_eq!(prod, p("ZIZ"));
        assert!(p("X").multiply(&p("X")).unwrap().is_identity());
        assert!(p("XY").multiply(&p("X")).is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(p("ZZ").commutes(&p("XX")).unwrap());
        let a = PauliOperator::from_support(7, &[(1, X), (2, Z), (3, Z), (5, Z), (7, X)]).unwrap();
        let b = PauliOperator::from_support(7, &[(1, X), (2, X), (5, X), (7, Z)]).unwrap();
        assert!(!a.commutes(&b).unwrap());
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("-iY").commutes(&p("Y")).unwrap());
    }

    #[test]
    fn weight_and_support() {
        assert_eq!(p("XIX").weight(), 2);
        assert_eq!(PauliOperator::identity(9).unwrap().weight(), 0);
    }

    #[test]
    fn text_forms() {
        assert_eq!(
            p("IXIY"),
            PauliOperator::from_support(4, &[(2, X), (4, Y)]).unwrap()
        );
        assert_eq!(
            PauliOperator::from_support(3, &[(1, Z), (2, Z)]).unwrap().to_string(),
            "ZZI"
        );
        assert_eq!(PauliOperator::parse_sparse("X1 X2 X3", 3).unwrap(), p("XXX"));
        assert_eq!(p("-iXZ").to_string(), "-iXZ");
        assert_eq!(p("+XZ").to_string(), "XZ");
        assert_eq!(p("-IIZ").to_sparse_string(), "-Z3");
        assert_eq!(PauliOperator::parse_sparse("I", 2).unwrap().to_sparse_string(), "I");
        assert!(PauliOperator::parse("XQ").is_err());
        assert!(PauliOperator::parse_sparse("X0", 2).is_err());
        assert!(PauliOperator::parse_sparse("Xa", 2).is_err());
        assert!(PauliOperator::parse_sparse("W1", 2).is_err());
    }

    #[test]
    fn decompose_examples() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let c = decompose_unitary(&[[one, zero], [zero, one]]);
        assert!((c.alpha_i - one).norm() < 1e-15);
        assert!(c.alpha_x.norm() + c.alpha_y.norm() + c.alpha_z.norm() < 1e-15);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = [[one * s, one * s], [one * s, -one * s]];
        let c = decompose_unitary(&h);
        assert!(c.alpha_i.norm() < 1e-15);
        assert!((c.alpha_x - one * s).norm() < 1e-15);
        assert!(c.alpha_y.norm() < 1e-15);
        assert!((c.alpha_z - one * s).norm() < 1e-15);

        let c = decompose_unitary(&pauli_matrix(Some(X)));
        assert!((c.alpha_x - one).norm() < 1e-15);
        assert!(c.alpha_i.norm() < 1e-15);
    }

    #[test]
    fn alpha_xz_relation() {
        let c = decompose_unitary(&pauli_matrix(Some(Y)));
        assert!((c.alpha_y - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((c.alpha_xz() - Complex64::i()).norm() < 1e-15);
    }

    #[test]
    fn enumerator_is_tuple_lexicographic() {
        let all: Vec<String> = WeightEnumerator::new(3, 2, &Letter::ALL)
            .map(|p| p.to_sparse_string())
            .collect();
        assert_eq!(all.len(), 27);
        assert_eq!(&all[..4], &["X1 X2", "X1 Y2", "X1 Z2", "X1 X3"]);
        assert_eq!(all[6], "Y1 X2");
        assert_eq!(all.last().unwrap(), "Z2 Z3");
        let xs: Vec<String> = enumerate_up_to(3, 3, &[X]).map(|p| p.to_string()).collect();
        assert_eq!(xs, ["III", "XII", "IXI", "IIX", "XXI", "XIX", "IXX", "XXX"]);
        assert_eq!(WeightEnumerator::new(2, 3, &[X]).count(), 0);
        assert_eq!(WeightEnumerator::new(2, 0, &[X]).count(), 1);
    }
}
