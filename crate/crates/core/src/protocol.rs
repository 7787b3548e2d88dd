//! Pauli-frame simulation of purity testing and of one-time-pad quantum
//! authentication.
//!
//! The adversary is a fixed Pauli error `e` acting on the `n` transmitted
//! qubits. Against such an adversary the purity test reduces to a syndrome
//! comparison, and authentication fails exactly when `e` commutes with the
//! chosen code without lying in its stabilizer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pauli::{PauliError, PauliVector};
use crate::planner::ceil_log2;
use crate::rational::{self, Rational};
use crate::sptc::{self, Mode, Packed, Sptc, SptcError, StabilizerCode};

/// Every report carries this, since arbitrary (non-Pauli) attacks are not simulated.
pub const SCOPE: &str = "pauli-adversary";

const BATCH: u64 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error(transparent)]
    Sptc(#[from] SptcError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("{key} has {got} bits, expected {expected}")]
    KeyLength {
        key: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("code index {k} out of range for {c} codes")]
    KeyIndex { k: usize, c: usize },
    #[error("message has {got} qubits but the codes encode {expected}")]
    MessageSize { expected: usize, got: usize },
}

/// Result of one round of the purity test with code `chosen_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PtpOutcome {
    pub accepted: bool,
    /// Accepted although `e` acts nontrivially on the code space.
    pub corrupted_given_accept: bool,
    pub chosen_k: usize,
    pub syndrome: Vec<bool>,
}

/// Syndrome difference between the two halves of `n` EPR pairs after `e`
/// hits one half: bit `i` is the form of generator `i` with `e`.
pub fn ptp_syndrome(code: &StabilizerCode, e: &PauliVector) -> Result<Vec<bool>, ProtocolError> {
    Ok(code.syndrome(e)?)
}

/// The purity test with a given code index.
pub fn ptp_outcome(sptc: &Sptc, k: usize, e: &PauliVector) -> Result<PtpOutcome, ProtocolError> {
    let code = sptc.codes().get(k).ok_or(ProtocolError::KeyIndex { k, c: sptc.len() })?;
    let syndrome = ptp_syndrome(code, e)?;
    let accepted = syndrome.iter().all(|b| !b);
    let corrupted_given_accept = accepted && !code.in_stabilizer(e)?;
    Ok(PtpOutcome {
        accepted,
        corrupted_given_accept,
        chosen_k: k,
        syndrome,
    })
}

/// The purity test with `k` drawn uniformly from a generator seeded by `seed`.
pub fn ptp_run(sptc: &Sptc, e: &PauliVector, seed: u64) -> Result<PtpOutcome, ProtocolError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(0..sptc.len());
    ptp_outcome(sptc, k, e)
}

/// Exact `Pr_k[accept]`; 1 for the identity.
pub fn ptp_acceptance_exact(sptc: &Sptc, e: &PauliVector) -> Result<Rational, ProtocolError> {
    if e.is_identity() && e.n() == sptc.n() {
        return Ok(rational::from_int(1));
    }
    Ok(sptc.undetected_fraction(e, Mode::Strong)?)
}

/// Exact `Pr_k[accept and corrupted]`.
pub fn ptp_soundness_exact(sptc: &Sptc, e: &PauliVector) -> Result<Rational, ProtocolError> {
    Ok(sptc.undetected_fraction(e, Mode::Weak)?)
}

/// Secret key of one authenticated block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QasKeys {
    /// One-time pad: a Pauli on the `m` message qubits (`2m` bits).
    pub pad: PauliVector,
    /// Index of the code.
    pub k: usize,
    /// Syndrome the encoded block is prepared in.
    pub y: Vec<bool>,
}

impl QasKeys {
    pub fn zero(sptc: &Sptc, k: usize) -> Self {
        Self {
            pad: PauliVector::identity(sptc.m()),
            k,
            y: vec![false; sptc.s()],
        }
    }

    pub fn random<R: Rng>(rng: &mut R, sptc: &Sptc) -> Self {
        let pad = sptc::random_pauli(rng, sptc.m());
        let k = rng.random_range(0..sptc.len());
        let y = (0..sptc.s()).map(|_| rng.random::<bool>()).collect();
        Self { pad, k, y }
    }

    pub fn validate(&self, sptc: &Sptc) -> Result<(), ProtocolError> {
        if self.pad.n() != sptc.m() {
            return Err(ProtocolError::KeyLength {
                key: "pad",
                expected: 2 * sptc.m(),
                got: 2 * self.pad.n(),
            });
        }
        if self.k >= sptc.len() {
            return Err(ProtocolError::KeyIndex {
                k: self.k,
                c: sptc.len(),
            });
        }
        if self.y.len() != sptc.s() {
            return Err(ProtocolError::KeyLength {
                key: "syndrome",
                expected: sptc.s(),
                got: self.y.len(),
            });
        }
        Ok(())
    }
}

/// Key bits per block: pad, code index and syndrome.
pub fn qas_key_bits(sptc: &Sptc) -> usize {
    2 * sptc.m() + ceil_log2(sptc.len() as u128) as usize + sptc.s()
}

/// One authenticated block in the Pauli frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QasSession {
    pub keys: QasKeys,
    pub adversary: PauliVector,
    /// Syndrome Bob measures.
    pub measured: Vec<bool>,
    pub outcome: PtpOutcome,
    pub message_altered: bool,
}

/// Alice pads the `m`-qubit message with `keys.pad`, encodes it in code
/// `keys.k` and shifts it into syndrome `keys.y`; the channel applies `e`;
/// Bob measures the syndrome `y'` and accepts iff `y' = y`, then undoes the
/// shift and the encoded pad.
pub fn qas_run(sptc: &Sptc, keys: &QasKeys, e: &PauliVector, message_m: usize) -> Result<QasSession, ProtocolError> {
    if message_m != sptc.m() {
        return Err(ProtocolError::MessageSize {
            expected: sptc.m(),
            got: message_m,
        });
    }
    keys.validate(sptc)?;
    if e.n() != sptc.n() {
        return Err(PauliError::SizeMismatch(sptc.n(), e.n()).into());
    }
    let code = &sptc.codes()[keys.k];
    let shift = code.syndrome_shift(&keys.y)?;
    let pad = code.encode_logical(&keys.pad)?;
    let sent = shift.compose(&pad)?;
    let received = sent.compose(e)?;
    let measured = code.syndrome(&received)?;
    let accepted = measured == keys.y;
    let residual = received.compose(&sent)?;
    let altered = accepted && !code.in_stabilizer(&residual)?;
    let syndrome = measured.iter().zip(&keys.y).map(|(a, b)| a ^ b).collect();
    Ok(QasSession {
        keys: keys.clone(),
        adversary: e.clone(),
        measured,
        outcome: PtpOutcome {
            accepted,
            corrupted_given_accept: altered,
            chosen_k: keys.k,
            syndrome,
        },
        message_altered: altered,
    })
}

/// `(accepted, message_altered)` of [`qas_run`] without building the
/// session record; codes on at most 64 qubits use packed words.
pub fn qas_outcome(sptc: &Sptc, keys: &QasKeys, e: &PauliVector) -> Result<(bool, bool), ProtocolError> {
    keys.validate(sptc)?;
    if e.n() != sptc.n() {
        return Err(PauliError::SizeMismatch(sptc.n(), e.n()).into());
    }
    let code = &sptc.codes()[keys.k];
    let Some(p) = code.packed() else {
        let run = qas_run(sptc, keys, e, sptc.m())?;
        return Ok((run.outcome.accepted, run.message_altered));
    };
    let m = sptc.m();
    let mut sent = 0u128;
    for (d, _) in p.destabilizers.iter().zip(&keys.y).filter(|(_, &y)| y) {
        sent ^= d;
    }
    for q in 0..m {
        if keys.pad.x_bit(q) {
            sent ^= p.logicals[q];
        }
        if keys.pad.z_bit(q) {
            sent ^= p.logicals[m + q];
        }
    }
    let received = sent ^ Packed::pack(e);
    let accepted = p
        .gens
        .iter()
        .zip(&keys.y)
        .all(|(&g, &y)| Packed::form(g, received) == y);
    let altered = accepted && !p.in_span(received ^ sent);
    Ok((accepted, altered))
}

/// Exact `Pr_k[accept and altered]` over a uniformly random code index.
pub fn qas_forgery_probability(sptc: &Sptc, e: &PauliVector) -> Result<Rational, ProtocolError> {
    if e.is_identity() {
        return Err(SptcError::ZeroError.into());
    }
    let mut forged = 0u128;
    for k in 0..sptc.len() {
        if qas_run(sptc, &QasKeys::zero(sptc, k), e, sptc.m())?.message_altered {
            forged += 1;
        }
    }
    Ok(rational::ratio(forged, sptc.len() as u128))
}

/// Counts from seeded Monte-Carlo trials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonteCarloCounts {
    pub trials: u64,
    pub accepted: u64,
    pub altered: u64,
}

impl MonteCarloCounts {
    fn merge(self, other: Self) -> Self {
        Self {
            trials: self.trials + other.trials,
            accepted: self.accepted + other.accepted,
            altered: self.altered + other.altered,
        }
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.trials as f64
    }

    pub fn altered_rate(&self) -> f64 {
        self.altered as f64 / self.trials as f64
    }
}

fn batched<F>(trials: u64, seed: u64, workers: Option<usize>, one: F) -> MonteCarloCounts
where
    F: Fn(&mut ChaCha8Rng) -> (bool, bool) + Sync,
{
    let batches = trials.div_ceil(BATCH);
    let zero = || MonteCarloCounts {
        trials: 0,
        accepted: 0,
        altered: 0,
    };
    sptc::run_with_workers(workers, || {
        (0..batches)
            .into_par_iter()
            .map(|b| {
                let mut rng = ChaCha8Rng::seed_from_u64(sptc::batch_seed(seed, b));
                let take = BATCH.min(trials - b * BATCH);
                let mut counts = zero();
                for _ in 0..take {
                    let (acc, alt) = one(&mut rng);
                    counts.trials += 1;
                    counts.accepted += acc as u64;
                    counts.altered += alt as u64;
                }
                counts
            })
            .reduce(zero, MonteCarloCounts::merge)
    })
}

/// Repeated purity tests against the fixed error `e`.
pub fn ptp_monte_carlo(
    sptc: &Sptc,
    e: &PauliVector,
    trials: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<MonteCarloCounts, ProtocolError> {
    ptp_outcome(sptc, 0, e)?;
    Ok(batched(trials, seed, workers, |rng| {
        let k = rng.random_range(0..sptc.len());
        let out = ptp_outcome(sptc, k, e).expect("checked above");
        (out.accepted, out.corrupted_given_accept)
    }))
}

/// Repeated authentication sessions with fresh random keys.
pub fn qas_monte_carlo(
    sptc: &Sptc,
    e: &PauliVector,
    sessions: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<MonteCarloCounts, ProtocolError> {
    qas_run(sptc, &QasKeys::zero(sptc, 0), e, sptc.m())?;
    Ok(batched(sessions, seed, workers, |rng| {
        let keys = QasKeys::random(rng, sptc);
        qas_outcome(sptc, &keys, e).expect("checked above")
    }))
}

/// `|rate - p| <= 3 sqrt(p(1-p)/trials)`.
pub fn within_three_sigma(counts: &MonteCarloCounts, p: f64, rate: f64) -> bool {
    let sigma = (p * (1.0 - p) / counts.trials as f64).sqrt();
    (rate - p).abs() <= 3.0 * sigma + f64::EPSILON
}

/// Per-error line of a [`SimulationReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorResult {
    pub error: String,
    pub pauli: String,
    pub acceptance: String,
    pub forgery: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accepted: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub altered: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_3_sigma: Option<bool>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub sptc: String,
    pub protocol: String,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub results: Vec<ErrorResult>,
    pub bound: String,
    pub holds: bool,
    pub scope: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Protocol {
    Ptp,
    Qas,
}

/// Exact probabilities for each error, plus Monte-Carlo counts when
/// `trials` is given.
pub fn simulate(
    sptc: &Sptc,
    reference: &str,
    protocol: Protocol,
    errors: &[PauliVector],
    trials: Option<(u64, u64)>,
    workers: Option<usize>,
) -> Result<SimulationReport, ProtocolError> {
    let bound = sptc.eps_bound().clone();
    let mut results = Vec::with_capacity(errors.len());
    for e in errors {
        let acceptance = ptp_acceptance_exact(sptc, e)?;
        let forgery = if e.is_identity() {
            rational::from_int(0)
        } else {
            match protocol {
                Protocol::Ptp => ptp_soundness_exact(sptc, e)?,
                Protocol::Qas => qas_forgery_probability(sptc, e)?,
            }
        };
        let mut line = ErrorResult {
            error: e.to_hex_pair(),
            pauli: e.to_string(),
            acceptance: rational::to_string(&acceptance),
            forgery: rational::to_string(&forgery),
            accepted: None,
            altered: None,
            within_3_sigma: None,
            holds: forgery <= bound,
        };
        if let Some((n, seed)) = trials {
            let counts = match protocol {
                Protocol::Ptp => ptp_monte_carlo(sptc, e, n, seed, workers)?,
                Protocol::Qas => qas_monte_carlo(sptc, e, n, seed, workers)?,
            };
            let p = rational::to_f64(&acceptance);
            line.within_3_sigma = Some(within_three_sigma(&counts, p, counts.acceptance_rate()));
            line.accepted = Some(counts.accepted);
            line.altered = Some(counts.altered);
        }
        results.push(line);
    }
    Ok(SimulationReport {
        sptc: reference.to_string(),
        protocol: match protocol {
            Protocol::Ptp => "ptp",
            Protocol::Qas => "qas",
        }
        .into(),
        mode: if trials.is_some() { "montecarlo" } else { "exact" }.into(),
        trials: trials.map(|t| t.0),
        seed: trials.map(|t| t.1),
        holds: results.iter().all(|r| r.holds),
        results,
        bound: rational::to_string(&bound),
        scope: SCOPE.into(),
    })
}

/// All `4^len` bit patterns of a pad on `len` qubits, for exhaustive checks.
pub fn all_pads(len: usize) -> impl Iterator<Item = PauliVector> {
    (0..1u128 << (2 * len)).map(move |i| PauliVector::from_index(len, i))
}

/// All `2^len` syndromes.
pub fn all_syndromes(len: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u64 << len).map(move |y| (0..len).map(|i| y >> i & 1 == 1).collect())
}
