//! Built-in codes: repetition codes, `[[4,2,2]]`, Shor's nine-qubit code,
//! the four-cycle and planar surface codes of any distance.

use serde::{Deserialize, Serialize};

use crate::code::{LogicalPair, StabilizerCode};
use crate::error::{QecError, Result};
use crate::pauli::{Letter, PauliOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckKind {
    X,
    Z,
}

impl CheckKind {
    pub fn letter(self) -> Letter {
        match self {
            CheckKind::X => Letter::X,
            CheckKind::Z => Letter::Z,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AncillaRecord {
    /// 1-based ancilla label, equal to the generator position.
    pub id: usize,
    pub kind: CheckKind,
    pub coord: (usize, usize),
    /// 1-based data-qubit indices.
    pub support: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boundary {
    pub label: String,
    /// Type of the checks that terminate on this boundary.
    pub kind: CheckKind,
    /// 1-based data-qubit indices lying on it.
    pub data: Vec<usize>,
}

/// Geometry of a planar surface code on a `(2λ-1) × (2λ-1)` grid.
///
/// Sites with even `row + col` hold data qubits, odd sites hold ancillas.
/// Ancillas on even rows measure X-checks, on odd rows Z-checks. Both data
/// and ancillas are numbered row-major, so for λ = 2 the generators come out
/// as `X1X2X3, Z1Z3Z4, Z2Z3Z5, X3X4X5`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceLayout {
    pub lambda: usize,
    /// Coordinate of data qubit `q` (0-based position, 1-based label `q + 1`).
    pub data_coords: Vec<(usize, usize)>,
    /// In generator order.
    pub ancillas: Vec<AncillaRecord>,
    pub boundaries: Vec<Boundary>,
}

impl SurfaceLayout {
    pub fn new(lambda: usize) -> Result<Self> {
        if lambda < 2 {
            return Err(QecError::SurfaceTooSmall(lambda));
        }
        let side = 2 * lambda - 1;
        let mut index = vec![vec![None; side]; side];
        let mut data_coords = Vec::new();
        for (r, row) in index.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                if (r + c) % 2 == 0 {
                    data_coords.push((r, c));
                    *cell = Some(data_coords.len());
                }
            }
        }
        let mut ancillas = Vec::new();
        for r in 0..side {
            for c in 0..side {
                if (r + c) % 2 == 0 {
                    continue;
                }
                let mut support: Vec<usize> = [
                    (r.wrapping_sub(1), c),
                    (r + 1, c),
                    (r, c.wrapping_sub(1)),
                    (r, c + 1),
                ]
                .into_iter()
                .filter(|&(rr, cc)| rr < side && cc < side)
                .filter_map(|(rr, cc)| index[rr][cc])
                .collect();
                support.sort_unstable();
                ancillas.push(AncillaRecord {
                    id: ancillas.len() + 1,
                    kind: if r % 2 == 0 { CheckKind::X } else { CheckKind::Z },
                    coord: (r, c),
                    support,
                });
            }
        }
        let on = |pred: &dyn Fn(usize, usize) -> bool| -> Vec<usize> {
            data_coords
                .iter()
                .enumerate()
                .filter(|(_, &(r, c))| pred(r, c))
                .map(|(q, _)| q + 1)
                .collect()
        };
        let last = side - 1;
        let boundaries = vec![
            Boundary {
                label: "top".into(),
                kind: CheckKind::X,
                data: on(&|r, _| r == 0),
            },
            Boundary {
                label: "bottom".into(),
                kind: CheckKind::X,
                data: on(&|r, _| r == last),
            },
            Boundary {
                label: "left".into(),
                kind: CheckKind::Z,
                data: on(&|_, c| c == 0),
            },
            Boundary {
                label: "right".into(),
                kind: CheckKind::Z,
                data: on(&|_, c| c == last),
            },
        ];
        Ok(Self {
            lambda,
            data_coords,
            ancillas,
            boundaries,
        })
    }

    pub fn num_data(&self) -> usize {
        self.data_coords.len()
    }

    pub fn boundary(&self, label: &str) -> Option<&Boundary> {
        self.boundaries.iter().find(|b| b.label == label)
    }
}

fn op(n: usize, letter: Letter, qubits: &[usize]) -> PauliOperator {
    PauliOperator::uniform(n, letter, qubits).expect("built-in operators are in range")
}

fn build(name: &str, n: usize, k: usize, gens: Vec<PauliOperator>, logicals: Vec<LogicalPair>) -> StabilizerCode {
    StabilizerCode::new(name, n, k, gens, logicals).expect("built-in code is well-formed")
}

/// `[[2,1,1]]` bit-flip detection code, `S = <Z1Z2>`.
pub fn two_qubit() -> StabilizerCode {
    build(
        "two_qubit",
        2,
        1,
        vec![op(2, Letter::Z, &[1, 2])],
        vec![LogicalPair {
            x: op(2, Letter::X, &[1, 2]),
            z: op(2, Letter::Z, &[1]),
        }],
    )
    .with_distance(1)
}

pub fn three_qubit_bitflip() -> StabilizerCode {
    build(
        "three_qubit_bitflip",
        3,
        1,
        vec![op(3, Letter::Z, &[1, 2]), op(3, Letter::Z, &[2, 3])],
        vec![LogicalPair {
            x: op(3, Letter::X, &[1, 2, 3]),
            z: op(3, Letter::Z, &[1]),
        }],
    )
    .with_distance(1)
}

/// Hadamard conjugate of the bit-flip code: `S = <X1X2, X2X3>`, codewords `|+++>`, `|--->`.
pub fn three_qubit_phaseflip() -> StabilizerCode {
    let bf = three_qubit_bitflip();
    build(
        "three_qubit_phaseflip",
        3,
        1,
        bf.generators().iter().map(PauliOperator::swap_xz).collect(),
        bf.logicals()
            .iter()
            .map(|l| LogicalPair {
                x: l.x.swap_xz(),
                z: l.z.swap_xz(),
            })
            .collect(),
    )
    .with_distance(1)
}

/// `[[4,2,2]]` with the Z-check first so that X-errors read `10` and Z-errors `01`.
pub fn four_two_two() -> StabilizerCode {
    build(
        "four_two_two",
        4,
        2,
        vec![op(4, Letter::Z, &[1, 2, 3, 4]), op(4, Letter::X, &[1, 2, 3, 4])],
        vec![
            LogicalPair {
                x: op(4, Letter::X, &[1, 3]),
                z: op(4, Letter::Z, &[1, 4]),
            },
            LogicalPair {
                x: op(4, Letter::X, &[2, 3]),
                z: op(4, Letter::Z, &[2, 4]),
            },
        ],
    )
    .with_distance(2)
}

/// Maps a Pauli on the outer code's qubits to one on the concatenated register.
fn lift(outer_op: &PauliOperator, inner: &StabilizerCode) -> Result<PauliOperator> {
    let ni = inner.n();
    let n = outer_op.num_qubits() * ni;
    let logical = &inner.logicals()[0];
    let mut out = PauliOperator::identity(n)?.with_phase(outer_op.phase_exp());
    for (block, letter) in outer_op.support() {
        let block_op = match letter {
            Letter::X => logical.x.clone(),
            Letter::Z => logical.z.clone(),
            // Y = i·X·Z
            Letter::Y => {
                let xz = logical.x.multiply(&logical.z)?;
                let phase = xz.phase_exp() + 1;
                xz.with_phase(phase)
            }
        };
        out = out.multiply(&embed(&block_op, n, (block - 1) * ni)?)?;
    }
    Ok(out)
}

fn embed(p: &PauliOperator, n: usize, offset: usize) -> Result<PauliOperator> {
    let mut out = PauliOperator::identity(n)?.with_phase(p.phase_exp());
    for q in 0..p.num_qubits() {
        out.set_letter(offset + q, p.letter_at(q));
    }
    Ok(out)
}

/// Concatenates an outer code with a single-logical-qubit inner code: inner
/// generators on each block first, then outer generators with each letter
/// replaced by the inner block's logical operator.
pub fn concatenate(outer: &StabilizerCode, inner: &StabilizerCode, name: &str) -> Result<StabilizerCode> {
    if inner.k() != 1 || inner.logicals().len() != 1 {
        return Err(QecError::InvalidCode(format!(
            "inner code {} must encode exactly one qubit",
            inner.name()
        )));
    }
    let n = outer.n() * inner.n();
    let mut gens = Vec::new();
    for block in 0..outer.n() {
        for g in inner.generators() {
            gens.push(embed(g, n, block * inner.n())?);
        }
    }
    for g in outer.generators() {
        gens.push(lift(g, inner)?);
    }
    let logicals = outer
        .logicals()
        .iter()
        .map(|l| {
            Ok(LogicalPair {
                x: lift(&l.x, inner)?,
                z: lift(&l.z, inner)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    StabilizerCode::new(name, n, outer.k(), gens, logicals)
}

/// Shor's `[[9,1,3]]` code: the phase-flip code concatenated with the bit-flip code.
///
/// With codewords `|0>_9 = (|000>+|111>)^⊗3 / √8`, the lifted logicals are
/// `X̄ = Z1Z4Z7` and `Z̄ = X1X2X3`.
pub fn shor_nine() -> StabilizerCode {
    concatenate(&three_qubit_phaseflip(), &three_qubit_bitflip(), "shor_nine")
        .expect("repetition codes concatenate")
        .with_distance(3)
}

/// Two data qubits, `S = <X1X2, Z1Z2>`, no logical qubit.
pub fn four_cycle() -> StabilizerCode {
    build(
        "four_cycle",
        2,
        0,
        vec![op(2, Letter::X, &[1, 2]), op(2, Letter::Z, &[1, 2])],
        vec![],
    )
}

/// Planar surface code `[[λ² + (λ-1)², 1, λ]]`.
pub fn surface_code(lambda: usize) -> Result<StabilizerCode> {
    let layout = SurfaceLayout::new(lambda)?;
    let n = layout.num_data();
    let gens = layout
        .ancillas
        .iter()
        .map(|a| op(n, a.kind.letter(), &a.support))
        .collect();
    let left = &layout.boundary("left").expect("left boundary").data;
    let top = &layout.boundary("top").expect("top boundary").data;
    let logical = LogicalPair {
        x: op(n, Letter::X, left),
        z: op(n, Letter::Z, top),
    };
    Ok(StabilizerCode::new(format!("surface_d{lambda}"), n, 1, gens, vec![logical])?
        .with_distance(lambda)
        .with_layout(layout))
}

/// Names accepted by [`by_name`]; `surface_d{λ}` works for any λ ≥ 2.
pub const BUILTIN_NAMES: [&str; 8] = [
    "two_qubit",
    "three_qubit_bitflip",
    "three_qubit_phaseflip",
    "four_two_two",
    "shor_nine",
    "four_cycle",
    "surface_d2",
    "surface_d3",
];

pub fn by_name(name: &str) -> Result<StabilizerCode> {
    match name {
        "two_qubit" => Ok(two_qubit()),
        "three_qubit_bitflip" => Ok(three_qubit_bitflip()),
        "three_qubit_phaseflip" => Ok(three_qubit_phaseflip()),
        "four_two_two" => Ok(four_two_two()),
        "shor_nine" => Ok(shor_nine()),
        "four_cycle" => Ok(four_cycle()),
        other => match other.strip_prefix("surface_d").map(str::parse::<usize>) {
            Some(Ok(lambda)) => surface_code(lambda),
            _ => Err(QecError::UnknownCode(other.to_string())),
        },
    }
}

/// Every fixed-name code in [`BUILTIN_NAMES`].
pub fn all_builtin() -> Vec<StabilizerCode> {
    BUILTIN_NAMES
        .iter()
        .map(|n| by_name(n).expect("builtin name resolves"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sparse(code: &StabilizerCode) -> Vec<String> {
        code.generators().iter().map(|g| g.to_sparse_string()).collect()
    }

    #[test]
    fn shor_generators_in_written_order() {
        assert_eq!(
            sparse(&shor_nine()),
            [
                "Z1 Z2",
                "Z2 Z3",
                "Z4 Z5",
                "Z5 Z6",
                "Z7 Z8",
                "Z8 Z9",
                "X1 X2 X3 X4 X5 X6",
                "X4 X5 X6 X7 X8 X9"
            ]
        );
        let code = shor_nine();
        let l = &code.logicals()[0];
        assert_eq!(l.x.to_sparse_string(), "Z1 Z4 Z7");
        assert_eq!(l.z.to_sparse_string(), "X1 X2 X3");
    }

    #[test]
    fn surface_two_matches_figure() {
        let code = surface_code(2).unwrap();
        assert_eq!(code.n(), 5);
        assert_eq!(sparse(&code), ["X1 X2 X3", "Z1 Z3 Z4", "Z2 Z3 Z5", "X3 X4 X5"]);
        let l = &code.logicals()[0];
        assert_eq!(l.x.to_sparse_string(), "X1 X4");
        assert_eq!(l.z.to_sparse_string(), "Z1 Z2");
    }

    #[test]
    fn surface_three_logicals() {
        let code = surface_code(3).unwrap();
        assert_eq!(code.n(), 13);
        let l = &code.logicals()[0];
        assert_eq!(l.x.to_sparse_string(), "X1 X6 X11");
        assert_eq!(l.z.to_sparse_string(), "Z1 Z2 Z3");
    }

    #[test]
    fn surface_counts() {
        for lambda in 2..=7 {
            let code = surface_code(lambda).unwrap();
            assert_eq!(code.n(), lambda * lambda + (lambda - 1) * (lambda - 1));
            assert_eq!(code.m(), 2 * lambda * (lambda - 1));
            let layout = code.layout().unwrap();
            for a in &layout.ancillas {
                assert!((2..=4).contains(&a.support.len()));
            }
        }
        assert_eq!(surface_code(5).unwrap().n(), 41);
        assert_eq!(surface_code(1).unwrap_err(), QecError::SurfaceTooSmall(1));
    }

    #[test]
    fn surface_checks_overlap_evenly() {
        for lambda in 2..=5 {
            let layout = SurfaceLayout::new(lambda).unwrap();
            for a in &layout.ancillas {
                for b in &layout.ancillas {
                    if a.kind == b.kind {
                        continue;
                    }
                    let overlap = a.support.iter().filter(|q| b.support.contains(q)).count();
                    assert!(overlap == 0 || overlap == 2, "{a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn phaseflip_is_dual() {
        assert_eq!(sparse(&three_qubit_phaseflip()), ["X1 X2", "X2 X3"]);
    }

    #[test]
    fn registry() {
        assert_eq!(by_name("surface_d4").unwrap().n(), 25);
        assert!(matches!(by_name("steane"), Err(QecError::UnknownCode(_))));
        assert!(by_name("surface_dx").is_err());
        assert!(by_name("surface_d1").is_err());
        assert_eq!(all_builtin().len(), BUILTIN_NAMES.len());
    }

    #[test]
    fn concatenate_requires_single_logical_inner() {
        assert!(concatenate(&three_qubit_bitflip(), &four_two_two(), "x").is_err());
    }
}
