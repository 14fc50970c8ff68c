//! Stabilizer-code simulation: Pauli algebra, a code library, a state-vector
//! oracle, code-capacity noise, decoders and Monte Carlo estimation.

pub mod bits;
pub mod code;
pub mod decoders;
pub mod error;
pub mod gf2;
pub mod library;
pub mod montecarlo;
pub mod noise;
pub mod pauli;
pub mod statevector;

pub use code::{DistanceResult, LogicalPair, ResidualClass, StabilizerCode, Syndrome, ValidationReport};
pub use error::{QecError, Result};
pub use noise::NoiseModel;
pub use pauli::{Letter, PauliOperator};
