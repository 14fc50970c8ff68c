//! Syndrome decoders behind one interface.

mod lookup;
mod mwpm;

use std::fmt;
use std::str::FromStr;

pub use lookup::{build_lookup, lookup_decode, LookupResult, LookupTable, MAX_LOOKUP_GENERATORS};
pub use mwpm::{
    mwpm_decode, MatchingProblem, MatchingSolution, MatchingSolver, MwpmDecoder, DEFAULT_EXACT_CAP,
};

use crate::code::{StabilizerCode, Syndrome};
use crate::error::{QecError, Result};
use crate::pauli::PauliOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    Lookup,
    Mwpm,
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Lookup => "lookup",
            Self::Mwpm => "mwpm",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = QecError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lookup" => Ok(Self::Lookup),
            "mwpm" => Ok(Self::Mwpm),
            other => Err(QecError::Config(format!("unknown decoder {other:?} (expected lookup or mwpm)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Decoder {
    Lookup(LookupTable),
    Mwpm(MwpmDecoder),
}

impl Decoder {
    /// Lookup tables enumerate up to weight `n`, stopping once every syndrome is seen.
    pub fn build(kind: DecoderKind, code: &StabilizerCode) -> Result<Self> {
        match kind {
            DecoderKind::Lookup => Ok(Self::Lookup(build_lookup(code, code.n())?)),
            DecoderKind::Mwpm => Ok(Self::Mwpm(MwpmDecoder::new(code)?)),
        }
    }

    pub fn kind(&self) -> DecoderKind {
        match self {
            Self::Lookup(_) => DecoderKind::Lookup,
            Self::Mwpm(_) => DecoderKind::Mwpm,
        }
    }

    /// A recovery whose syndrome equals `s`; a lookup miss is an error.
    pub fn decode(&self, s: &Syndrome) -> Result<PauliOperator> {
        match self {
            Self::Lookup(table) => {
                let r = lookup_decode(table, s)?;
                if r.matched {
                    Ok(r.recovery)
                } else {
                    Err(QecError::UnmatchedSyndrome(s.to_string()))
                }
            }
            Self::Mwpm(m) => m.decode(s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::pauli::{enumerate_up_to, Letter};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small_codes() -> Vec<StabilizerCode> {
        library::all_builtin().into_iter().filter(|c| c.n() <= 13).collect()
    }

    #[test]
    fn recovery_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for code in small_codes() {
            let dec = Decoder::build(DecoderKind::Lookup, &code).unwrap();
            for _ in 0..1000 {
                let mut s = Syndrome::zeros(code.m());
                for i in 0..code.m() {
                    s.set(i, rng.random_bool(0.5));
                }
                let r = dec.decode(&s).unwrap();
                assert_eq!(code.syndrome(&r).unwrap(), s, "{}", code.name());
            }
        }
    }

    #[test]
    fn lookup_is_minimum_weight() {
        for code in small_codes().into_iter().filter(|c| c.n() <= 9) {
            let dec = Decoder::build(DecoderKind::Lookup, &code).unwrap();
            for e in enumerate_up_to(code.n(), 3, &Letter::ALL) {
                let r = dec.decode(&code.syndrome(&e).unwrap()).unwrap();
                assert!(r.weight() <= e.weight(), "{} {e}", code.name());
            }
        }
    }

    #[test]
    fn correctable_errors_are_corrected() {
        for code in small_codes() {
            let Some(d) = code.declared_distance() else { continue };
            let t = crate::code::correctable_weight(d);
            let mut decoders = vec![Decoder::build(DecoderKind::Lookup, &code).unwrap()];
            if code.layout().is_some() {
                decoders.push(Decoder::build(DecoderKind::Mwpm, &code).unwrap());
            }
            for dec in &decoders {
                for e in enumerate_up_to(code.n(), t, &Letter::ALL) {
                    let r = dec.decode(&code.syndrome(&e).unwrap()).unwrap();
                    let residual = r.multiply(&e).unwrap();
                    assert!(code.residual_class(&residual).unwrap().is_success(), "{} {e}", code.name());
                }
            }
        }
    }

    #[test]
    fn decoder_names_parse() {
        assert_eq!("mwpm".parse::<DecoderKind>().unwrap(), DecoderKind::Mwpm);
        assert!("bp".parse::<DecoderKind>().is_err());
    }

    #[test]
    fn unmatched_lookup_is_an_error() {
        let code = library::three_qubit_bitflip();
        let dec = Decoder::Lookup(build_lookup(&code, 0).unwrap());
        assert_eq!(
            dec.decode(&"11".parse().unwrap()).unwrap_err(),
            QecError::UnmatchedSyndrome("11".into())
        );
    }
}
