//! Dense state-vector simulator used as an independent circuit-level oracle.
//!
//! Basis states are labelled with qubit 1 as the leftmost (most significant)
//! bit, so `|01⟩` on two qubits is amplitude index 1. Gate APIs take 0-based
//! qubit positions.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;

use crate::code::{StabilizerCode, Syndrome};
use crate::error::{QecError, Result};
use crate::library;
use crate::pauli::{Letter, PauliOperator, WeightEnumerator};

/// Largest register (data plus one ancilla) the simulator will allocate.
pub const MAX_QUBITS: usize = 20;

pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
    /// Applies `pauli` to qubits `0..pauli.num_qubits()` when `control` is 1.
    ControlledPauli { control: usize, pauli: PauliOperator },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub outcome: u8,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

pub fn hadamard() -> Matrix2 {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

/// `exp(-i·angle·σ/2)` for `σ ∈ {X, Y, Z}`.
pub fn rotation(axis: Letter, angle: f64) -> Matrix2 {
    let c = Complex64::new((angle / 2.0).cos(), 0.0);
    let s = (angle / 2.0).sin();
    let i = Complex64::i();
    match axis {
        Letter::X => [[c, -i * s], [-i * s, c]],
        Letter::Y => [[c, Complex64::new(-s, 0.0)], [Complex64::new(s, 0.0), c]],
        Letter::Z => [[c - i * s, ZERO], [ZERO, c + i * s]],
    }
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(QecError::ZeroQubits);
        }
        if n > MAX_QUBITS {
            return Err(QecError::Config(format!(
                "{n} qubits exceeds the simulator cap of {MAX_QUBITS}"
            )));
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Ok(Self { n, amps })
    }

    /// Computational basis state from a bit string such as `"01"`.
    pub fn basis_state(n: usize, bits: &str) -> Result<Self> {
        if bits.chars().count() != n {
            return Err(QecError::SizeMismatch {
                expected: n,
                actual: bits.chars().count(),
            });
        }
        let mut index = 0usize;
        for c in bits.chars() {
            index <<= 1;
            match c {
                '0' => {}
                '1' => index |= 1,
                _ => {
                    return Err(QecError::Parse {
                        text: bits.to_string(),
                        reason: format!("basis character {c:?}"),
                    })
                }
            }
        }
        let mut s = Self::zero(n)?;
        s.amps[0] = ZERO;
        s.amps[index] = ONE;
        Ok(s)
    }

    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn from_bloch(angles: BlochAngles) -> Self {
        let a = Complex64::new((angles.theta / 2.0).cos(), 0.0);
        let b = Complex64::from_polar((angles.theta / 2.0).sin(), angles.phi);
        Self {
            n: 1,
            amps: vec![a, b],
        }
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n {
            return Err(QecError::SizeMismatch {
                expected: 1 << n,
                actual: amps.len(),
            });
        }
        Ok(Self { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, bits: &str) -> Complex64 {
        let index = usize::from_str_radix(bits, 2).expect("binary label");
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn normalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            for a in &mut self.amps {
                *a /= norm;
            }
        }
    }

    pub fn scale(&mut self, factor: Complex64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    /// `self + other` without renormalizing.
    pub fn add(&self, other: &StateVector) -> Result<StateVector> {
        self.check_size(other)?;
        Ok(StateVector {
            n: self.n,
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
        })
    }

    fn check_size(&self, other: &StateVector) -> Result<()> {
        if self.n != other.n {
            return Err(QecError::SizeMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        Ok(())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(QecError::IndexOutOfRange {
                index: q + 1,
                n: self.n,
            });
        }
        Ok(())
    }

    #[inline]
    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_size(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Arbitrary 2×2 matrix on qubit `q`.
    pub fn apply_single(&mut self, q: usize, m: &Matrix2) -> Result<()> {
        self.check_qubit(q)?;
        let mask = self.mask(q);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | mask]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | mask] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    /// Applies an n-qubit Pauli (including its phase) to the whole register.
    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(QecError::SizeMismatch {
                expected: self.n,
                actual: p.num_qubits(),
            });
        }
        let mut out = vec![ZERO; self.amps.len()];
        for (b, &a) in self.amps.iter().enumerate() {
            if a != ZERO {
                let (row, factor) = p.apply_to_basis(b);
                out[row] += factor * a;
            }
        }
        self.amps = out;
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        match gate {
            Gate::H(q) => self.apply_single(*q, &hadamard()),
            Gate::X(q) => self.apply_single(*q, &crate::pauli::pauli_matrix(Some(Letter::X))),
            Gate::Y(q) => self.apply_single(*q, &crate::pauli::pauli_matrix(Some(Letter::Y))),
            Gate::Z(q) => self.apply_single(*q, &crate::pauli::pauli_matrix(Some(Letter::Z))),
            Gate::Cnot { control, target } => {
                self.check_qubit(*control)?;
                self.check_qubit(*target)?;
                if control == target {
                    return Err(QecError::IndexClash(*control));
                }
                let (cm, tm) = (self.mask(*control), self.mask(*target));
                for i in 0..self.amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
                Ok(())
            }
            Gate::ControlledPauli { control, pauli } => {
                self.check_qubit(*control)?;
                let width = pauli.num_qubits();
                if width > self.n {
                    return Err(QecError::SizeMismatch {
                        expected: self.n,
                        actual: width,
                    });
                }
                if *control < width && pauli.letter_at(*control).is_some() {
                    return Err(QecError::IndexClash(*control));
                }
                let cm = self.mask(*control);
                let shift = self.n - width;
                let low = (1usize << shift) - 1;
                let mut out: Vec<Complex64> = self
                    .amps
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| if i & cm == 0 { a } else { ZERO })
                    .collect();
                for (i, &a) in self.amps.iter().enumerate() {
                    if i & cm == 0 || a == ZERO {
                        continue;
                    }
                    let (row, factor) = pauli.apply_to_basis(i >> shift);
                    out[(row << shift) | (i & low)] += factor * a;
                }
                self.amps = out;
                Ok(())
            }
        }
    }

    pub fn outcome_probability(&self, q: usize, outcome: u8) -> Result<f64> {
        self.check_qubit(q)?;
        let mask = self.mask(q);
        let want = outcome != 0;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i & mask != 0) == want)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    fn collapse(&mut self, q: usize, outcome: u8, probability: f64) {
        let mask = self.mask(q);
        let want = outcome != 0;
        let scale = 1.0 / probability.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & mask != 0) == want {
                *a *= scale;
            } else {
                *a = ZERO;
            }
        }
    }

    /// Computational-basis measurement of qubit `q` with a random outcome.
    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<Measurement> {
        let p1 = self.outcome_probability(q, 1)?;
        let outcome = u8::from(rng.random::<f64>() < p1);
        let probability = if outcome == 1 { p1 } else { 1.0 - p1 };
        self.collapse(q, outcome, probability);
        Ok(Measurement { outcome, probability })
    }

    /// Post-selects qubit `q` on `outcome`; fails if its probability is below 1e-12.
    pub fn measure_forced(&mut self, q: usize, outcome: u8) -> Result<Measurement> {
        let probability = self.outcome_probability(q, outcome)?;
        if probability < 1e-12 {
            return Err(QecError::ImpossibleOutcome { outcome, probability });
        }
        self.collapse(q, outcome, probability);
        Ok(Measurement { outcome, probability })
    }

    /// `self ⊗ |0⟩`, the new qubit last.
    pub fn with_ancilla(&self) -> Result<StateVector> {
        if self.n + 1 > MAX_QUBITS {
            return Err(QecError::Config(format!(
                "{} qubits exceeds the simulator cap of {MAX_QUBITS}",
                self.n + 1
            )));
        }
        let mut amps = vec![ZERO; self.amps.len() * 2];
        for (i, &a) in self.amps.iter().enumerate() {
            amps[i << 1] = a;
        }
        Ok(StateVector { n: self.n + 1, amps })
    }

    /// Drops the last qubit, which must already be in the definite state `outcome`.
    fn discard_last(&self, outcome: u8) -> StateVector {
        let bit = usize::from(outcome);
        StateVector {
            n: self.n - 1,
            amps: (0..self.amps.len() / 2).map(|i| self.amps[(i << 1) | bit]).collect(),
        }
    }

    /// Debug dump: one `index,real,imag` line per amplitude.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,real,imag\n");
        for (i, a) in self.amps.iter().enumerate() {
            let _ = writeln!(out, "{i},{:e},{:e}", a.re, a.im);
        }
        out
    }
}

pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// How an ancilla outcome is chosen during extraction.
pub enum Outcomes<'a, R: Rng + ?Sized> {
    Sample(&'a mut R),
    /// Post-select every generator on the given outcome bits.
    Forced(&'a [u8]),
}

/// Measures one generator with a fresh ancilla via H, controlled-P, H.
fn measure_generator<R: Rng + ?Sized>(
    state: &StateVector,
    generator: &PauliOperator,
    outcomes: &mut Outcomes<'_, R>,
    index: usize,
) -> Result<(Measurement, StateVector)> {
    let n = state.num_qubits();
    let mut full = state.with_ancilla()?;
    full.apply_gate(&Gate::H(n))?;
    full.apply_gate(&Gate::ControlledPauli {
        control: n,
        pauli: generator.clone(),
    })?;
    full.apply_gate(&Gate::H(n))?;
    let m = match outcomes {
        Outcomes::Sample(rng) => full.measure(n, *rng)?,
        Outcomes::Forced(bits) => full.measure_forced(n, bits[index])?,
    };
    Ok((m, full.discard_last(m.outcome)))
}

/// Sequential ancilla-mediated syndrome extraction; returns the outcomes and the
/// post-measurement data state.
pub fn extract_syndrome<R: Rng + ?Sized>(
    code: &StabilizerCode,
    state: &StateVector,
    mut outcomes: Outcomes<'_, R>,
) -> Result<(Syndrome, StateVector)> {
    if state.num_qubits() != code.n() {
        return Err(QecError::SizeMismatch {
            expected: code.n(),
            actual: state.num_qubits(),
        });
    }
    if let Outcomes::Forced(bits) = &outcomes {
        if bits.len() != code.m() {
            return Err(QecError::SyndromeLength {
                expected: code.m(),
                actual: bits.len(),
            });
        }
    }
    let mut current = state.clone();
    let mut syndrome = Syndrome::zeros(code.m());
    for (i, g) in code.generators().iter().enumerate() {
        let (m, next) = measure_generator(&current, g, &mut outcomes, i)?;
        syndrome.set(i, m.outcome == 1);
        current = next;
    }
    Ok((syndrome, current))
}

/// Minimum-weight, then lexicographic, Pauli anticommuting with `target` and
/// commuting with every operator in `fixed`, searched over `letters`.
fn find_correction(
    n: usize,
    target: &PauliOperator,
    fixed: &[PauliOperator],
    letters: &[Letter],
) -> Option<PauliOperator> {
    (1..=n).find_map(|w| {
        WeightEnumerator::new(n, w, letters).find(|c| {
            !c.commutes_unchecked(target) && fixed.iter().all(|f| f.commutes_unchecked(c))
        })
    })
}

/// Prepares `|0…0⟩_L` from `|0⟩^⊗n`: measures each generator, then each `Z̄_i`,
/// and corrects every `-1` outcome.
///
/// Generator corrections are searched among Z-type Paulis first, which fix
/// `|0…0⟩`; a `-1` on `Z̄_i` is corrected with `X̄_i`. The result is the joint
/// `+1` eigenstate of all generators and all `Z̄_i`.
pub fn encode_by_projection<R: Rng + ?Sized>(code: &StabilizerCode, rng: &mut R) -> Result<StateVector> {
    let n = code.n();
    let mut state = StateVector::zero(n)?;
    let gens = code.generators();
    for (i, g) in gens.iter().enumerate() {
        let mut outcomes = Outcomes::Sample(&mut *rng);
        let (m, next) = measure_generator(&state, g, &mut outcomes, i)?;
        state = next;
        if m.outcome == 1 {
            let fixed = &gens[..i];
            let correction = find_correction(n, g, fixed, &[Letter::Z])
                .or_else(|| find_correction(n, g, fixed, &Letter::ALL))
                .ok_or(QecError::CorrectionSearch(i + 1))?;
            state.apply_pauli(&correction)?;
        }
    }
    for (i, l) in code.logicals().iter().enumerate() {
        let mut outcomes = Outcomes::Sample(&mut *rng);
        let (m, next) = measure_generator(&state, &l.z, &mut outcomes, i)?;
        state = next;
        if m.outcome == 1 {
            state.apply_pauli(&l.x)?;
        }
    }
    Ok(state)
}

/// Logical basis state `|b_1 … b_k⟩_L`: `X̄_i` applied to `|0…0⟩_L` for each set bit.
pub fn logical_basis_state<R: Rng + ?Sized>(
    code: &StabilizerCode,
    bits: &[bool],
    rng: &mut R,
) -> Result<StateVector> {
    if bits.len() != code.logicals().len() {
        return Err(QecError::SizeMismatch {
            expected: code.logicals().len(),
            actual: bits.len(),
        });
    }
    let mut state = encode_by_projection(code, rng)?;
    for (l, &b) in code.logicals().iter().zip(bits) {
        if b {
            state.apply_pauli(&l.x)?;
        }
    }
    Ok(state)
}

/// `α|0⟩_L + β|1⟩_L` for a single-logical-qubit code.
pub fn encode_logical<R: Rng + ?Sized>(
    code: &StabilizerCode,
    alpha: Complex64,
    beta: Complex64,
    rng: &mut R,
) -> Result<StateVector> {
    let mut zero = logical_basis_state(code, &[false], rng)?;
    let mut one = logical_basis_state(code, &[true], rng)?;
    zero.scale(alpha);
    one.scale(beta);
    let mut state = zero.add(&one)?;
    state.normalize();
    Ok(state)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentCollapse {
    pub p_syndrome_zero: f64,
    pub p_syndrome_one: f64,
    /// Weight of the `X̄|ψ⟩_L` component after post-selecting syndrome 0.
    pub p_logical: f64,
}

/// Two-qubit code under the coherent channel `(√(1-p)·I + √p·X)^⊗2` on `|0⟩_L`,
/// post-selected on the trivial syndrome.
pub fn coherent_error_collapse(p_x: f64) -> Result<CoherentCollapse> {
    if !(0.0..=1.0).contains(&p_x) {
        return Err(QecError::Probability(p_x));
    }
    let code = library::two_qubit();
    let logical_zero = StateVector::basis_state(2, "00")?;
    let alpha_i = Complex64::new((1.0 - p_x).sqrt(), 0.0);
    let alpha_x = Complex64::new(p_x.sqrt(), 0.0);
    let channel = [[alpha_i, alpha_x], [alpha_x, alpha_i]];
    let mut state = logical_zero.clone();
    state.apply_single(0, &channel)?;
    state.apply_single(1, &channel)?;

    let p_one = {
        let mut probe = state.with_ancilla()?;
        probe.apply_gate(&Gate::H(2))?;
        probe.apply_gate(&Gate::ControlledPauli {
            control: 2,
            pauli: code.generators()[0].clone(),
        })?;
        probe.apply_gate(&Gate::H(2))?;
        probe.outcome_probability(2, 1)?
    };
    let (_, collapsed) = extract_syndrome::<rand::rngs::ThreadRng>(&code, &state, Outcomes::Forced(&[0]))?;
    let mut flipped = logical_zero;
    flipped.apply_pauli(&code.logicals()[0].x)?;
    Ok(CoherentCollapse {
        p_syndrome_zero: 1.0 - p_one,
        p_syndrome_one: p_one,
        p_logical: fidelity(&flipped, &collapsed)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-10;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < TOL
    }

    #[test]
    fn bloch_poles_and_basis() {
        let s = StateVector::from_bloch(BlochAngles { theta: 0.0, phi: 1.3 });
        assert!(close(s.amplitudes()[0], ONE));
        let s = StateVector::from_bloch(BlochAngles {
            theta: std::f64::consts::PI,
            phi: 0.0,
        });
        assert!(close(s.amplitudes()[1], ONE));
        let b = StateVector::basis_state(2, "01").unwrap();
        assert!(close(b.amplitudes()[1], ONE));
        assert!(StateVector::basis_state(2, "011").is_err());
        assert!(StateVector::basis_state(2, "0a").is_err());
    }

    #[test]
    fn hadamard_and_xz() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert!(close(s.amplitudes()[0], h) && close(s.amplitudes()[1], h));

        let (a, b) = (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        let mut s = StateVector::from_amplitudes(1, vec![a, b]).unwrap();
        s.apply_gate(&Gate::Z(0)).unwrap();
        s.apply_gate(&Gate::X(0)).unwrap();
        assert!(close(s.amplitudes()[0], -b) && close(s.amplitudes()[1], a));
    }

    #[test]
    fn cnot_truth_table() {
        let mut s = StateVector::basis_state(2, "10").unwrap();
        s.apply_gate(&Gate::Cnot { control: 0, target: 1 }).unwrap();
        assert!(close(s.amplitude("11"), ONE));
        assert_eq!(
            s.apply_gate(&Gate::Cnot { control: 1, target: 1 }),
            Err(QecError::IndexClash(1))
        );
    }

    #[test]
    fn x2_on_00() {
        let mut s = StateVector::basis_state(2, "00").unwrap();
        s.apply_pauli(&PauliOperator::parse("IX").unwrap()).unwrap();
        assert!(close(s.amplitude("01"), ONE));
    }

    #[test]
    fn measurement_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = StateVector::zero(1).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        let m = s.measure(0, &mut rng).unwrap();
        assert!((m.probability - 0.5).abs() < TOL);
        assert!((s.norm_sqr() - 1.0).abs() < TOL);

        let mut one = StateVector::basis_state(1, "1").unwrap();
        let m = one.measure(0, &mut rng).unwrap();
        assert_eq!(m.outcome, 1);
        assert!((m.probability - 1.0).abs() < TOL);
        assert!(matches!(
            one.measure_forced(0, 0),
            Err(QecError::ImpossibleOutcome { .. })
        ));
    }

    #[test]
    fn controlled_pauli_rejects_clash() {
        let mut s = StateVector::zero(3).unwrap();
        let p = PauliOperator::parse("XX").unwrap();
        assert_eq!(
            s.apply_gate(&Gate::ControlledPauli { control: 1, pauli: p }),
            Err(QecError::IndexClash(1))
        );
    }

    #[test]
    fn four_qubit_projection_ancilla_is_fair_coin() {
        // After H–CP–H for X1X2X3X4 on |0000⟩ both outcomes have probability 1/2.
        let code = library::four_two_two();
        let mut s = StateVector::zero(4).unwrap().with_ancilla().unwrap();
        s.apply_gate(&Gate::H(4)).unwrap();
        s.apply_gate(&Gate::ControlledPauli {
            control: 4,
            pauli: code.generators()[1].clone(),
        })
        .unwrap();
        s.apply_gate(&Gate::H(4)).unwrap();
        assert!((s.outcome_probability(4, 0).unwrap() - 0.5).abs() < TOL);
        assert!((s.outcome_probability(4, 1).unwrap() - 0.5).abs() < TOL);
    }

    #[test]
    fn encodings() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = encode_by_projection(&library::four_two_two(), &mut rng).unwrap();
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert!(close(s.amplitude("0000"), h) && close(s.amplitude("1111"), h));

        let s = encode_by_projection(&library::two_qubit(), &mut rng).unwrap();
        assert!(close(s.amplitude("00"), ONE));
    }

    #[test]
    fn extraction_on_codeword_is_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let code = library::three_qubit_bitflip();
        let psi = encode_logical(&code, Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), &mut rng).unwrap();
        let (s, after) = extract_syndrome(&code, &psi, Outcomes::Sample(&mut rng)).unwrap();
        assert!(s.is_trivial());
        assert!((fidelity(&psi, &after).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn two_qubit_x1_flags_and_preserves() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let code = library::two_qubit();
        let mut psi = encode_logical(&code, Complex64::new(0.8, 0.0), Complex64::new(0.6, 0.0), &mut rng).unwrap();
        psi.apply_pauli(&PauliOperator::parse("XI").unwrap()).unwrap();
        let (s, after) = extract_syndrome(&code, &psi, Outcomes::Sample(&mut rng)).unwrap();
        assert_eq!(s.to_string(), "1");
        assert!((fidelity(&psi, &after).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn coherent_collapse_values() {
        let c = coherent_error_collapse(0.0).unwrap();
        assert!(c.p_logical.abs() < 1e-12);
        let c = coherent_error_collapse(0.1).unwrap();
        assert!((c.p_logical - 0.01 / 0.82).abs() < 1e-12);
        assert!((c.p_syndrome_zero - 0.82).abs() < 1e-12);
        assert!((c.p_syndrome_one - 0.18).abs() < 1e-12);
        assert!(coherent_error_collapse(1.5).is_err());
        let small = coherent_error_collapse(1e-4).unwrap();
        assert!((small.p_logical / 1e-8 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn fidelity_examples() {
        let zero = StateVector::basis_state(1, "0").unwrap();
        let one = StateVector::basis_state(1, "1").unwrap();
        let mut plus = zero.clone();
        plus.apply_gate(&Gate::H(0)).unwrap();
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < TOL);
        assert!(fidelity(&zero, &one).unwrap().abs() < TOL);
        assert!((fidelity(&plus, &zero).unwrap() - 0.5).abs() < TOL);
        assert!(fidelity(&zero, &StateVector::zero(2).unwrap()).is_err());
    }

    #[test]
    fn rotations_are_unitary_and_decompose() {
        for axis in Letter::ALL {
            let m = rotation(axis, 0.37);
            let c = crate::pauli::decompose_unitary(&m);
            let back = c.reconstruct();
            for r in 0..2 {
                for col in 0..2 {
                    assert!((back[r][col] - m[r][col]).norm() < 1e-12);
                }
            }
            let mut s = StateVector::from_bloch(BlochAngles { theta: 1.0, phi: 0.4 });
            s.apply_single(0, &m).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn csv_dump_has_header() {
        let s = StateVector::zero(1).unwrap();
        assert!(s.to_csv().starts_with("index,real,imag\n0,1e0,0e0"));
    }
}
