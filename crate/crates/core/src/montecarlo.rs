//! Code-capacity error-correction cycles and logical-error-rate estimation.
//!
//! Each trial draws its randomness from a ChaCha stream selected by the trial
//! index, seeded from the point seed, so estimates do not depend on how rayon
//! schedules trials.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{ResidualClass, StabilizerCode, Syndrome};
use crate::decoders::Decoder;
use crate::error::{QecError, Result};
use crate::library;
use crate::noise::{self, NoiseModel};
use crate::pauli::PauliOperator;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959964;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleMode {
    /// Decode and apply a recovery every trial.
    #[default]
    Correct,
    /// Discard trials with a nonzero syndrome; classify the rest as they are.
    PostSelect,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CycleStatus {
    Success,
    LogicalFailure,
    Discarded,
    DecoderFailure(QecError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleOutcome {
    pub error: PauliOperator,
    pub syndrome: Syndrome,
    pub recovery: Option<PauliOperator>,
    pub residual: Option<ResidualClass>,
    pub status: CycleStatus,
}

impl CycleOutcome {
    pub fn is_success(&self) -> bool {
        self.status == CycleStatus::Success
    }
}

/// Runs one cycle against a given error.
pub fn cycle_with_error(
    code: &StabilizerCode,
    decoder: &Decoder,
    error: PauliOperator,
    mode: CycleMode,
) -> Result<CycleOutcome> {
    let syndrome = code.syndrome(&error)?;
    let recovery = match mode {
        CycleMode::PostSelect if !syndrome.is_trivial() => {
            return Ok(CycleOutcome {
                error,
                syndrome,
                recovery: None,
                residual: None,
                status: CycleStatus::Discarded,
            })
        }
        CycleMode::PostSelect => PauliOperator::identity(code.n())?,
        CycleMode::Correct => match decoder.decode(&syndrome) {
            Ok(r) => r,
            Err(e) => {
                return Ok(CycleOutcome {
                    error,
                    syndrome,
                    recovery: None,
                    residual: None,
                    status: CycleStatus::DecoderFailure(e),
                })
            }
        },
    };
    let residual = code.residual_class(&recovery.multiply(&error)?)?;
    let status = if residual.is_success() {
        CycleStatus::Success
    } else {
        CycleStatus::LogicalFailure
    };
    Ok(CycleOutcome {
        error,
        syndrome,
        recovery: Some(recovery),
        residual: Some(residual),
        status,
    })
}

/// Samples an error from `noise` and runs one cycle.
pub fn run_cycle<R: Rng + ?Sized>(
    code: &StabilizerCode,
    decoder: &Decoder,
    noise: &NoiseModel,
    mode: CycleMode,
    rng: &mut R,
) -> Result<CycleOutcome> {
    let error = noise::sample(noise, code.n(), rng)?;
    cycle_with_error(code, decoder, error, mode)
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for sub-run `index` of `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix(seed ^ mix(index))
}

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Wilson score interval.
pub fn wilson_interval(failures: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // The interval always contains p; the min/max only absorbs rounding.
    ((centre - half).min(p).max(0.0), (centre + half).max(p).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointEstimate {
    /// Physical error rate of the point.
    pub p: f64,
    /// Trials that were classified (excludes discarded ones).
    pub trials: u64,
    pub failures: u64,
    pub p_l: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    pub discarded: u64,
    /// Decoder errors; also counted in `failures`.
    pub decoder_failures: u64,
}

impl PointEstimate {
    /// Wilson half-width divided by the 95% quantile.
    pub fn sigma(&self) -> f64 {
        (self.ci_high - self.ci_low) / (2.0 * Z95)
    }
}

#[derive(Default, Clone, Copy)]
struct Tally {
    failures: u64,
    discarded: u64,
    decoder_failures: u64,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            failures: self.failures + other.failures,
            discarded: self.discarded + other.discarded,
            decoder_failures: self.decoder_failures + other.decoder_failures,
        }
    }
}

/// Estimates `p_L` from `trials` independent cycles. `p` is only recorded.
pub fn estimate_logical_rate(
    code: &StabilizerCode,
    decoder: &Decoder,
    noise: &NoiseModel,
    trials: u64,
    seed: u64,
    mode: CycleMode,
    p: f64,
) -> Result<PointEstimate> {
    if trials == 0 {
        return Err(QecError::Config("trials must be at least 1".into()));
    }
    noise.validate()?;
    let tally = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Tally> {
            let outcome = run_cycle(code, decoder, noise, mode, &mut trial_rng(seed, t))?;
            Ok(match outcome.status {
                CycleStatus::Success => Tally::default(),
                CycleStatus::LogicalFailure => Tally {
                    failures: 1,
                    ..Tally::default()
                },
                CycleStatus::Discarded => Tally {
                    discarded: 1,
                    ..Tally::default()
                },
                CycleStatus::DecoderFailure(_) => Tally {
                    failures: 1,
                    decoder_failures: 1,
                    ..Tally::default()
                },
            })
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    let accepted = trials - tally.discarded;
    let p_l = if accepted == 0 {
        0.0
    } else {
        tally.failures as f64 / accepted as f64
    };
    let (ci_low, ci_high) = wilson_interval(tally.failures, accepted, Z95);
    Ok(PointEstimate {
        p,
        trials: accepted,
        failures: tally.failures,
        p_l,
        ci_low,
        ci_high,
        seed,
        discarded: tally.discarded,
        decoder_failures: tally.decoder_failures,
    })
}

/// `steps` rates from `start` to `end` inclusive, evenly spaced in `p` or in `log p`.
pub fn p_grid(start: f64, end: f64, steps: usize, log: bool) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(QecError::Config("steps must be at least 1".into()));
    }
    for p in [start, end] {
        if !(0.0..=1.0).contains(&p) {
            return Err(QecError::Probability(p));
        }
    }
    if end < start {
        return Err(QecError::Config(format!("p-end {end} is below p-start {start}")));
    }
    if log && start <= 0.0 {
        return Err(QecError::Config("log grid needs p-start > 0".into()));
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            let t = i as f64 / last;
            if log {
                (start.ln() + t * (end.ln() - start.ln())).exp()
            } else {
                start + t * (end - start)
            }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationReport {
    pub code: String,
    pub decoder: String,
    pub noise: String,
    pub mode: CycleMode,
    pub seed: u64,
    pub points: Vec<PointEstimate>,
    pub wall_time_s: f64,
    pub version: String,
}

pub const CSV_HEADER: &str = "p,trials,failures,p_L,ci_low,ci_high";

pub fn version_string() -> String {
    format!("qec-core-v{}", env!("CARGO_PKG_VERSION"))
}

impl SimulationReport {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{CSV_HEADER}\n");
        for pt in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                pt.p, pt.trials, pt.failures, pt.p_l, pt.ci_low, pt.ci_high
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn check_grid(ps: &[f64]) -> Result<()> {
    if ps.is_empty() {
        return Err(QecError::Config("empty p list".into()));
    }
    for &p in ps {
        if !(0.0..=1.0).contains(&p) {
            return Err(QecError::Probability(p));
        }
    }
    if ps.windows(2).any(|w| w[1] <= w[0]) {
        return Err(QecError::Config("p values must be strictly increasing".into()));
    }
    Ok(())
}

/// One estimate per rate, with `noise` re-parameterized by [`NoiseModel::with_rate`].
/// Point `i` uses seed `derive_seed(seed, i)`.
pub fn sweep(
    code: &StabilizerCode,
    decoder: &Decoder,
    noise: &NoiseModel,
    ps: &[f64],
    trials: u64,
    seed: u64,
    mode: CycleMode,
) -> Result<SimulationReport> {
    check_grid(ps)?;
    let start = Instant::now();
    let points = ps
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let model = noise.with_rate(p)?;
            estimate_logical_rate(code, decoder, &model, trials, derive_seed(seed, i as u64), mode, p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimulationReport {
        code: code.name().to_string(),
        decoder: decoder.kind().name().to_string(),
        noise: noise.name().to_string(),
        mode,
        seed,
        points,
        wall_time_s: start.elapsed().as_secs_f64(),
        version: version_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub lambda_small: usize,
    pub lambda_large: usize,
    pub p: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdScan {
    pub curves: Vec<(usize, SimulationReport)>,
    pub crossings: Vec<Crossing>,
    pub threshold: f64,
    pub sigma: f64,
}

impl ThresholdScan {
    /// One CSV block per distance with a leading `lambda` column.
    pub fn to_csv(&self) -> String {
        let mut out = format!("lambda,{CSV_HEADER}\n");
        for (lambda, report) in &self.curves {
            for line in report.to_csv().lines().skip(1) {
                let _ = writeln!(out, "{lambda},{line}");
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scan serializes")
    }
}

/// `ln p_L` and its standard error, flooring zero counts at half a failure.
fn log_rate(pt: &PointEstimate) -> (f64, f64) {
    let n = pt.trials.max(1) as f64;
    let f = (pt.failures as f64).max(0.5);
    let p = f / n;
    (p.ln(), ((1.0 - p).max(0.0) / f).sqrt())
}

/// Where `ln p_L(small) - ln p_L(large)` first changes sign from positive,
/// by linear interpolation in `p`.
pub fn crossing(small: &SimulationReport, large: &SimulationReport) -> Option<(f64, f64)> {
    let deltas: Vec<(f64, f64)> = small
        .points
        .iter()
        .zip(&large.points)
        .map(|(a, b)| {
            let (la, sa) = log_rate(a);
            let (lb, sb) = log_rate(b);
            (la - lb, sa.hypot(sb))
        })
        .collect();
    let ps: Vec<f64> = small.points.iter().map(|pt| pt.p).collect();
    (0..deltas.len().saturating_sub(1)).find_map(|i| {
        let ((d0, s0), (d1, s1)) = (deltas[i], deltas[i + 1]);
        if !(d0 > 0.0 && d1 <= 0.0) {
            return None;
        }
        let h = ps[i + 1] - ps[i];
        let span = d0 - d1;
        let p = ps[i] + h * d0 / span;
        let dp_d0 = h * -d1 / (span * span);
        let dp_d1 = h * d0 / (span * span);
        Some((p, (dp_d0 * s0).hypot(dp_d1 * s1)))
    })
}

/// Surface codes of each `λ` under `iid_xz(p, p)` with MWPM; a trial fails on
/// any logical error.
pub fn threshold_scan(lambdas: &[usize], ps: &[f64], trials: u64, seed: u64) -> Result<ThresholdScan> {
    let mut lambdas = lambdas.to_vec();
    lambdas.sort_unstable();
    lambdas.dedup();
    if lambdas.len() < 2 {
        return Err(QecError::Config("threshold scan needs at least two distances".into()));
    }
    check_grid(ps)?;
    let noise = NoiseModel::iid_xz(ps[0], ps[0])?;
    let mut curves = Vec::new();
    for &lambda in &lambdas {
        let code = library::surface_code(lambda)?;
        let decoder = Decoder::build(crate::decoders::DecoderKind::Mwpm, &code)?;
        let report = sweep(
            &code,
            &decoder,
            &noise,
            ps,
            trials,
            derive_seed(seed, lambda as u64),
            CycleMode::Correct,
        )?;
        curves.push((lambda, report));
    }
    let mut crossings = Vec::new();
    for a in 0..curves.len() {
        for b in a + 1..curves.len() {
            let (la, ra) = &curves[a];
            let (lb, rb) = &curves[b];
            let (p, sigma) = crossing(ra, rb).ok_or(QecError::NoCrossing(*la, *lb))?;
            crossings.push(Crossing {
                lambda_small: *la,
                lambda_large: *lb,
                p,
                sigma,
            });
        }
    }
    let count = crossings.len() as f64;
    let threshold = crossings.iter().map(|c| c.p).sum::<f64>() / count;
    let sigma = crossings.iter().map(|c| c.sigma * c.sigma).sum::<f64>().sqrt() / count;
    Ok(ThresholdScan {
        curves,
        crossings,
        threshold,
        sigma,
    })
}
