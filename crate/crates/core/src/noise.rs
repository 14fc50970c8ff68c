//! Code-capacity Pauli channels: every data qubit errs independently, syndrome
//! extraction is ideal.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QecError, Result};
use crate::pauli::{Letter, PauliOperator};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseModel {
    IidX { p: f64 },
    /// Independent X and Z flips; a Y appears when both fire.
    IidXz { px: f64, pz: f64 },
    /// X, Y, Z each with probability p/3.
    Depolarizing { p: f64 },
}

fn check(p: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(QecError::Probability(p))
    }
}

impl NoiseModel {
    pub fn iid_x(p: f64) -> Result<Self> {
        Ok(Self::IidX { p: check(p)? })
    }

    pub fn iid_xz(px: f64, pz: f64) -> Result<Self> {
        Ok(Self::IidXz {
            px: check(px)?,
            pz: check(pz)?,
        })
    }

    pub fn depolarizing(p: f64) -> Result<Self> {
        Ok(Self::Depolarizing { p: check(p)? })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::IidX { .. } => "iid_x",
            Self::IidXz { .. } => "iid_xz",
            Self::Depolarizing { .. } => "depolarizing",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::IidX { p } | Self::Depolarizing { p } => check(p).map(drop),
            Self::IidXz { px, pz } => check(px).and(check(pz)).map(drop),
        }
    }

    /// Same kind with every rate replaced by `p`.
    pub fn with_rate(&self, p: f64) -> Result<Self> {
        match self {
            Self::IidX { .. } => Self::iid_x(p),
            Self::IidXz { .. } => Self::iid_xz(p, p),
            Self::Depolarizing { .. } => Self::depolarizing(p),
        }
    }

    /// Probability that a single qubit is hit by a non-identity Pauli.
    pub fn qubit_error_probability(&self) -> f64 {
        match *self {
            Self::IidX { p } | Self::Depolarizing { p } => p,
            Self::IidXz { px, pz } => 1.0 - (1.0 - px) * (1.0 - pz),
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Letter> {
        match *self {
            Self::IidX { p } => (rng.random::<f64>() < p).then_some(Letter::X),
            Self::IidXz { px, pz } => {
                let x = rng.random::<f64>() < px;
                let z = rng.random::<f64>() < pz;
                Letter::from_bits(x, z)
            }
            Self::Depolarizing { p } => {
                let u = rng.random::<f64>();
                if u >= p {
                    None
                } else if u < p / 3.0 {
                    Some(Letter::X)
                } else if u < 2.0 * p / 3.0 {
                    Some(Letter::Y)
                } else {
                    Some(Letter::Z)
                }
            }
        }
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::IidX { p } => write!(f, "iid_x(p={p})"),
            Self::IidXz { px, pz } => write!(f, "iid_xz(px={px}, pz={pz})"),
            Self::Depolarizing { p } => write!(f, "depolarizing(p={p})"),
        }
    }
}

/// Draws one error on `n` qubits, qubit 1 first.
pub fn sample<R: Rng + ?Sized>(model: &NoiseModel, n: usize, rng: &mut R) -> Result<PauliOperator> {
    let mut e = PauliOperator::identity(n)?;
    for q in 0..n {
        if let Some(letter) = model.draw(rng) {
            e.set_letter(q, Some(letter));
        }
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightDistribution {
    pub mean_weight: f64,
    /// `P(weight = w)` for `w = 0..=min(3, n)`.
    pub weight_probabilities: Vec<f64>,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn error_probabilities(model: &NoiseModel, n: usize) -> Result<WeightDistribution> {
    if n > 30 {
        return Err(QecError::Config(format!("exact weight tail limited to n <= 30, got {n}")));
    }
    model.validate()?;
    let q = model.qubit_error_probability();
    let weight_probabilities = (0..=n.min(3))
        .map(|w| binomial(n, w) * q.powi(w as i32) * (1.0 - q).powi((n - w) as i32))
        .collect();
    Ok(WeightDistribution {
        mean_weight: n as f64 * q,
        weight_probabilities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let zero = NoiseModel::iid_x(0.0).unwrap();
        let one = NoiseModel::iid_x(1.0).unwrap();
        for _ in 0..50 {
            assert!(sample(&zero, 3, &mut rng).unwrap().is_identity());
            assert_eq!(sample(&one, 3, &mut rng).unwrap().to_string(), "XXX");
        }
    }

    #[test]
    fn rejects_bad_rates() {
        assert_eq!(NoiseModel::iid_x(1.5), Err(QecError::Probability(1.5)));
        assert!(NoiseModel::iid_xz(0.1, -0.1).is_err());
        assert!(NoiseModel::depolarizing(f64::NAN).is_err());
    }

    #[test]
    fn binomial_weights() {
        let two = error_probabilities(&NoiseModel::iid_x(0.1).unwrap(), 2).unwrap();
        for (got, want) in two.weight_probabilities.iter().zip([0.81, 0.18, 0.01]) {
            assert!((got - want).abs() < 1e-12);
        }
        let three = error_probabilities(&NoiseModel::iid_x(0.1).unwrap(), 3).unwrap();
        assert!((three.weight_probabilities[0] - 0.729).abs() < 1e-12);
        assert!((three.weight_probabilities[2] - 0.027).abs() < 1e-12);
        assert!((three.mean_weight - 0.3).abs() < 1e-12);
        let none = error_probabilities(&NoiseModel::iid_x(0.0).unwrap(), 4).unwrap();
        assert_eq!(none.weight_probabilities[0], 1.0);
    }

    #[test]
    fn sampled_weights_match_binomial() {
        let model = NoiseModel::iid_x(0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 200_000;
        let mut counts = [0usize; 3];
        for _ in 0..draws {
            counts[sample(&model, 2, &mut rng).unwrap().weight()] += 1;
        }
        for (c, p) in counts.iter().zip([0.81, 0.18, 0.01]) {
            let sigma = (p * (1.0 - p) / draws as f64).sqrt();
            assert!((*c as f64 / draws as f64 - p).abs() < 5.0 * sigma);
        }
    }

    #[test]
    fn depolarizing_letters_are_balanced() {
        let model = NoiseModel::depolarizing(0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let draws = 300_000;
        let mut counts = [0usize; 3];
        for _ in 0..draws {
            if let Some(l) = sample(&model, 1, &mut rng).unwrap().letter_at(0) {
                counts[l as usize] += 1;
            }
        }
        for c in counts {
            let sigma = (0.1 * 0.9 / draws as f64).sqrt();
            assert!((c as f64 / draws as f64 - 0.1).abs() < 5.0 * sigma);
        }
    }

    #[test]
    fn reproducible() {
        let model = NoiseModel::iid_xz(0.2, 0.3).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..20).map(|_| sample(&model, 5, &mut rng).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(draw(4), draw(4));
    }
}
