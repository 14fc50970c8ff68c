//! The `[[n, k, d]]` stabilizer-code abstraction.
//!
//! A code is an ordered generator list (whose order fixes the syndrome bit
//! order), `k` logical `(X̄, Z̄)` pairs and an optional declared distance.
//! Construction only checks operator sizes; [`StabilizerCode::validate`]
//! reports every structural property that fails.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::error::{QecError, Result};
use crate::gf2::Gf2Basis;
use crate::library::SurfaceLayout;
use crate::pauli::{Letter, PauliOperator, WeightEnumerator};

/// Measurement outcomes, bit `i` for generator `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome(BitVec);

impl Syndrome {
    pub fn zeros(m: usize) -> Self {
        Self(BitVec::zeros(m))
    }

    pub fn from_bits(bits: BitVec) -> Self {
        Self(bits)
    }

    pub fn bits(&self) -> &BitVec {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_zero()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0.get(i)
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.0.set(i, value)
    }

    pub fn xor(&self, other: &Syndrome) -> Syndrome {
        let mut out = self.clone();
        out.0.xor_assign(&other.0);
        out
    }

    /// Defect positions (0-based generator indices).
    pub fn flagged(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Syndrome({})", self.0)
    }
}

impl FromStr for Syndrome {
    type Err = QecError;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.trim().chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(QecError::Parse {
                        text: s.to_string(),
                        reason: format!("syndrome character {c:?}"),
                    })
                }
            }
        }
        Ok(Self(BitVec::from_bools(bits)))
    }
}

/// Logical X̄ and Z̄ for one encoded qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalPair {
    pub x: PauliOperator,
    pub z: PauliOperator,
}

/// Outcome of a correction cycle given the residual `R·E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidualClass {
    Success,
    /// Per logical qubit, the logical Pauli applied (`None` = identity).
    LogicalFailure(Vec<Option<Letter>>),
}

impl ResidualClass {
    pub fn is_success(&self) -> bool {
        matches!(self, ResidualClass::Success)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "value")]
pub enum DistanceResult {
    Found(usize),
    /// No undetectable logical operator of weight `<= max_weight`.
    GreaterThan(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    GeneratorCount { expected: usize, actual: usize },
    LogicalCount { expected: usize, actual: usize },
    GeneratorsAnticommute(usize, usize),
    DependentGenerators { rank: usize, count: usize },
    LogicalAnticommutesWithGenerator { logical: String, generator: usize },
    LogicalPairCommutes(usize),
    LogicalCrossAnticommute { a: String, b: String },
    LogicalInStabilizer(String),
    DistanceMismatch { declared: usize, found: DistanceResult },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::GeneratorCount { expected, actual } => {
                write!(f, "expected m = n - k = {expected} generators, found {actual}")
            }
            Violation::LogicalCount { expected, actual } => {
                write!(f, "expected {expected} logical pairs, found {actual}")
            }
            Violation::GeneratorsAnticommute(i, j) => {
                write!(f, "generators {} and {} anticommute", i + 1, j + 1)
            }
            Violation::DependentGenerators { rank, count } => write!(
                f,
                "generators are dependent: rank {rank} < {count} (not a minimal set)"
            ),
            Violation::LogicalAnticommutesWithGenerator { logical, generator } => {
                write!(f, "{logical} anticommutes with generator {}", generator + 1)
            }
            Violation::LogicalPairCommutes(i) => {
                write!(f, "X{} and Z{} commute", i + 1, i + 1)
            }
            Violation::LogicalCrossAnticommute { a, b } => {
                write!(f, "{a} anticommutes with {b}")
            }
            Violation::LogicalInStabilizer(l) => write!(f, "{l} lies in the stabilizer group"),
            Violation::DistanceMismatch { declared, found } => match found {
                DistanceResult::Found(d) => {
                    write!(f, "declared distance {declared} but search found {d}")
                }
                DistanceResult::GreaterThan(w) => {
                    write!(f, "declared distance {declared} but none found up to weight {w}")
                }
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub code: String,
    pub n: usize,
    pub k: usize,
    pub violations: Vec<Violation>,
    /// `None` when the exhaustive search would exceed the validation budget.
    pub distance_checked: Option<DistanceResult>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid, n={}, k={}", self.n, self.k)?;
            match self.distance_checked {
                Some(DistanceResult::Found(d)) => write!(f, ", d={d}"),
                Some(DistanceResult::GreaterThan(w)) => write!(f, ", d>{w}"),
                None => Ok(()),
            }
        } else {
            write!(f, "invalid:")?;
            for v in &self.violations {
                write!(f, "\n  - {v}")?;
            }
            Ok(())
        }
    }
}

/// Number of candidates the validator may enumerate when confirming a declared distance.
const VALIDATION_DISTANCE_BUDGET: u128 = 5_000_000;

#[derive(Clone, Debug)]
pub struct StabilizerCode {
    name: String,
    n: usize,
    k: usize,
    generators: Vec<PauliOperator>,
    logicals: Vec<LogicalPair>,
    declared_distance: Option<usize>,
    layout: Option<SurfaceLayout>,
    span: Gf2Basis,
}

impl StabilizerCode {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        k: usize,
        generators: Vec<PauliOperator>,
        logicals: Vec<LogicalPair>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(QecError::ZeroQubits);
        }
        if k > n {
            return Err(QecError::InvalidCode(format!("k = {k} exceeds n = {n}")));
        }
        let sizes = generators
            .iter()
            .chain(logicals.iter().flat_map(|l| [&l.x, &l.z]))
            .map(PauliOperator::num_qubits);
        for actual in sizes {
            if actual != n {
                return Err(QecError::SizeMismatch { expected: n, actual });
            }
        }
        let mut span = Gf2Basis::new();
        for g in &generators {
            span.insert(&g.symplectic());
        }
        Ok(Self {
            name: name.into(),
            n,
            k,
            generators,
            logicals,
            declared_distance: None,
            layout: None,
            span,
        })
    }

    pub fn with_distance(mut self, d: usize) -> Self {
        self.declared_distance = Some(d);
        self
    }

    pub fn with_layout(mut self, layout: SurfaceLayout) -> Self {
        self.layout = Some(layout);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of generators (syndrome length).
    pub fn m(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn logicals(&self) -> &[LogicalPair] {
        &self.logicals
    }

    pub fn declared_distance(&self) -> Option<usize> {
        self.declared_distance
    }

    pub fn layout(&self) -> Option<&SurfaceLayout> {
        self.layout.as_ref()
    }

    fn check_size(&self, p: &PauliOperator) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(QecError::SizeMismatch {
                expected: self.n,
                actual: p.num_qubits(),
            });
        }
        Ok(())
    }

    /// Bit `i` is 1 iff `error` anticommutes with generator `i`.
    pub fn syndrome(&self, error: &PauliOperator) -> Result<Syndrome> {
        self.check_size(error)?;
        Ok(self.syndrome_unchecked(error))
    }

    pub(crate) fn syndrome_unchecked(&self, error: &PauliOperator) -> Syndrome {
        let mut s = Syndrome::zeros(self.m());
        for (i, g) in self.generators.iter().enumerate() {
            if !g.commutes_unchecked(error) {
                s.set(i, true);
            }
        }
        s
    }

    /// Symplectic-span membership; global phase is ignored.
    pub fn in_stabilizer_group(&self, p: &PauliOperator) -> Result<bool> {
        self.check_size(p)?;
        Ok(self.span.contains(&p.symplectic()))
    }

    /// Classifies a zero-syndrome residual `R·E`.
    pub fn residual_class(&self, residual: &PauliOperator) -> Result<ResidualClass> {
        self.check_size(residual)?;
        let s = self.syndrome_unchecked(residual);
        if !s.is_trivial() {
            return Err(QecError::NonzeroSyndrome(s.to_string()));
        }
        Ok(self.residual_class_unchecked(residual))
    }

    pub(crate) fn residual_class_unchecked(&self, residual: &PauliOperator) -> ResidualClass {
        if self.span.contains(&residual.symplectic()) {
            return ResidualClass::Success;
        }
        let classes = self
            .logicals
            .iter()
            .map(|l| {
                let has_x = !residual.commutes_unchecked(&l.z);
                let has_z = !residual.commutes_unchecked(&l.x);
                Letter::from_bits(has_x, has_z)
            })
            .collect();
        ResidualClass::LogicalFailure(classes)
    }

    fn is_undetected_logical(&self, p: &PauliOperator) -> bool {
        self.generators.iter().all(|g| g.commutes_unchecked(p)) && !self.span.contains(&p.symplectic())
    }

    /// Smallest weight of an undetectable non-stabilizer Pauli, by exhaustive search.
    pub fn distance(&self, max_weight: usize) -> DistanceResult {
        self.distance_over(&Letter::ALL, max_weight)
    }

    /// As [`distance`](Self::distance) but only over errors built from `letters`.
    pub fn distance_over(&self, letters: &[Letter], max_weight: usize) -> DistanceResult {
        let max_weight = max_weight.min(self.n);
        for w in 1..=max_weight {
            if WeightEnumerator::new(self.n, w, letters).any(|p| self.is_undetected_logical(&p)) {
                return DistanceResult::Found(w);
            }
        }
        DistanceResult::GreaterThan(max_weight)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let m = self.m();
        if m != self.n - self.k {
            violations.push(Violation::GeneratorCount {
                expected: self.n - self.k,
                actual: m,
            });
        }
        if self.logicals.len() != self.k {
            violations.push(Violation::LogicalCount {
                expected: self.k,
                actual: self.logicals.len(),
            });
        }
        for i in 0..m {
            for j in i + 1..m {
                if !self.generators[i].commutes_unchecked(&self.generators[j]) {
                    violations.push(Violation::GeneratorsAnticommute(i, j));
                }
            }
        }
        if self.span.rank() < m {
            violations.push(Violation::DependentGenerators {
                rank: self.span.rank(),
                count: m,
            });
        }

        let named: Vec<(String, usize, bool, &PauliOperator)> = self
            .logicals
            .iter()
            .enumerate()
            .flat_map(|(i, l)| {
                [
                    (format!("X{}", i + 1), i, true, &l.x),
                    (format!("Z{}", i + 1), i, false, &l.z),
                ]
            })
            .collect();
        for (label, _, _, op) in &named {
            for (g, gen) in self.generators.iter().enumerate() {
                if !op.commutes_unchecked(gen) {
                    violations.push(Violation::LogicalAnticommutesWithGenerator {
                        logical: label.clone(),
                        generator: g,
                    });
                }
            }
            if self.span.contains(&op.symplectic()) {
                violations.push(Violation::LogicalInStabilizer(label.clone()));
            }
        }
        for (i, l) in self.logicals.iter().enumerate() {
            if l.x.commutes_unchecked(&l.z) {
                violations.push(Violation::LogicalPairCommutes(i));
            }
        }
        for (a, (la, ia, _, opa)) in named.iter().enumerate() {
            for (lb, ib, _, opb) in named.iter().skip(a + 1) {
                if ia != ib && !opa.commutes_unchecked(opb) {
                    violations.push(Violation::LogicalCrossAnticommute {
                        a: la.clone(),
                        b: lb.clone(),
                    });
                }
            }
        }

        let mut distance_checked = None;
        if let Some(d) = self.declared_distance {
            if search_cost(self.n, d) <= VALIDATION_DISTANCE_BUDGET {
                let found = self.distance(d);
                if found != DistanceResult::Found(d) {
                    violations.push(Violation::DistanceMismatch { declared: d, found });
                }
                distance_checked = Some(found);
            }
        }

        ValidationReport {
            code: self.name.clone(),
            n: self.n,
            k: self.k,
            violations,
            distance_checked,
        }
    }

    pub fn to_spec(&self) -> CodeSpec {
        CodeSpec {
            name: self.name.clone(),
            n: self.n,
            k: self.k,
            generators: self.generators.iter().map(|g| g.to_sparse_string()).collect(),
            logicals: self
                .logicals
                .iter()
                .map(|l| LogicalSpec {
                    x: l.x.to_sparse_string(),
                    z: l.z.to_sparse_string(),
                })
                .collect(),
            distance: self.declared_distance,
        }
    }

    pub fn from_spec(spec: &CodeSpec) -> Result<Self> {
        let parse = |s: &String| PauliOperator::parse_sparse(s, spec.n);
        let generators = spec.generators.iter().map(parse).collect::<Result<Vec<_>>>()?;
        let logicals = spec
            .logicals
            .iter()
            .map(|l| {
                Ok(LogicalPair {
                    x: parse(&l.x)?,
                    z: parse(&l.z)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let code = Self::new(spec.name.clone(), spec.n, spec.k, generators, logicals)?;
        Ok(match spec.distance {
            Some(d) => code.with_distance(d),
            None => code,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("code spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CodeSpec = serde_json::from_str(text).map_err(|e| QecError::Serde(e.to_string()))?;
        Self::from_spec(&spec)
    }
}

/// Number of weight-`<= d` candidates an exhaustive distance search visits.
pub fn search_cost(n: usize, d: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    let mut pow3 = 1u128;
    for w in 1..=d.min(n) {
        binom = binom * (n - w + 1) as u128 / w as u128;
        pow3 *= 3;
        total += binom * pow3;
    }
    total
}

/// `t = floor((d - 1) / 2)`, the number of arbitrary errors a distance-`d` code corrects.
pub fn correctable_weight(d: usize) -> usize {
    d.saturating_sub(1) / 2
}

/// Serialized form: operators in sparse 1-based text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub generators: Vec<String>,
    pub logicals: Vec<LogicalSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalSpec {
    pub x: String,
    pub z: String,
}
