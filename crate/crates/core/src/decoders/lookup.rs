//! Exhaustive minimum-weight lookup tables.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::code::{StabilizerCode, Syndrome};
use crate::error::{QecError, Result};
use crate::pauli::{enumerate_up_to, Letter, PauliOperator};

/// Largest generator count for which a table is built.
pub const MAX_LOOKUP_GENERATORS: usize = 20;

#[derive(Clone, Debug)]
pub struct LookupTable {
    code_name: String,
    n: usize,
    m: usize,
    max_weight: usize,
    entries: BTreeMap<Syndrome, PauliOperator>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LookupResult {
    pub recovery: PauliOperator,
    /// False when the syndrome was never produced during the build.
    pub matched: bool,
}

#[derive(Serialize)]
struct TableExport<'a> {
    code: &'a str,
    max_weight: usize,
    entries: BTreeMap<String, String>,
}

/// Enumerates Paulis by weight then `(qubit, letter)` order and keeps the
/// first error seen for each syndrome.
pub fn build_lookup(code: &StabilizerCode, max_weight: usize) -> Result<LookupTable> {
    let m = code.m();
    if m > MAX_LOOKUP_GENERATORS {
        return Err(QecError::LookupTooLarge(m));
    }
    let n = code.n();
    let target = 1usize << m;
    let mut entries = BTreeMap::new();
    for e in enumerate_up_to(n, max_weight.min(n), &Letter::ALL) {
        entries.entry(code.syndrome_unchecked(&e)).or_insert(e);
        if entries.len() == target {
            break;
        }
    }
    Ok(LookupTable {
        code_name: code.name().to_string(),
        n,
        m,
        max_weight,
        entries,
    })
}

impl LookupTable {
    pub fn code_name(&self) -> &str {
        &self.code_name
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.entries.len() == 1 << self.m
    }

    pub fn get(&self, s: &Syndrome) -> Option<&PauliOperator> {
        self.entries.get(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Syndrome, &PauliOperator)> {
        self.entries.iter()
    }

    /// `{"code", "max_weight", "entries": {"0101": "X2 Z3", …}}`.
    pub fn to_json(&self) -> String {
        let export = TableExport {
            code: &self.code_name,
            max_weight: self.max_weight,
            entries: self
                .entries
                .iter()
                .map(|(s, r)| (s.to_string(), r.to_sparse_string()))
                .collect(),
        };
        serde_json::to_string_pretty(&export).expect("table serializes")
    }
}

pub fn lookup_decode(table: &LookupTable, s: &Syndrome) -> Result<LookupResult> {
    if s.len() != table.m {
        return Err(QecError::SyndromeLength {
            expected: table.m,
            actual: s.len(),
        });
    }
    Ok(match table.entries.get(s) {
        Some(r) => LookupResult {
            recovery: r.clone(),
            matched: true,
        },
        None => LookupResult {
            recovery: PauliOperator::identity(table.n)?,
            matched: false,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    fn decode(table: &LookupTable, s: &str) -> String {
        lookup_decode(table, &s.parse().unwrap()).unwrap().recovery.to_sparse_string()
    }

    #[test]
    fn three_qubit_rows() {
        let t = build_lookup(&library::three_qubit_bitflip(), 3).unwrap();
        assert_eq!(decode(&t, "00"), "I");
        assert_eq!(decode(&t, "10"), "X1");
        assert_eq!(decode(&t, "11"), "X2");
        assert_eq!(decode(&t, "01"), "X3");
        assert!(t.is_complete());
    }

    #[test]
    fn shor_ties_pick_first_qubit() {
        let t = build_lookup(&library::shor_nine(), 3).unwrap();
        assert_eq!(decode(&t, "00000010"), "Z1");
    }

    #[test]
    fn four_two_two_x_row() {
        let t = build_lookup(&library::four_two_two(), 2).unwrap();
        assert_eq!(decode(&t, "10"), "X1");
        assert_eq!(decode(&t, "00"), "I");
    }

    #[test]
    fn misses_and_bad_lengths() {
        let t = build_lookup(&library::three_qubit_bitflip(), 0).unwrap();
        let r = lookup_decode(&t, &"10".parse().unwrap()).unwrap();
        assert!(!r.matched && r.recovery.is_identity());
        assert!(matches!(
            lookup_decode(&t, &"1".parse().unwrap()),
            Err(QecError::SyndromeLength { .. })
        ));
    }

    #[test]
    fn guard_on_generator_count() {
        let big = library::surface_code(5).unwrap();
        assert_eq!(build_lookup(&big, 2).unwrap_err(), QecError::LookupTooLarge(40));
    }

    #[test]
    fn json_export() {
        let t = build_lookup(&library::three_qubit_bitflip(), 1).unwrap();
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["entries"]["01"], "X3");
        assert_eq!(v["code"], "three_qubit_bitflip");
    }
}
