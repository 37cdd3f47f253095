use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

/// Normalization tolerance for channel weights.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// Pauli channel `ρ ↦ Σ_k w_k P_k ρ P_k†`. Operators are compared up to phase.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliChannel {
    terms: Vec<(f64, PauliString)>,
}

impl PauliChannel {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let space = terms.first().map(|(_, p)| p.label_space());
        for (w, p) in &terms {
            if !(0.0..=1.0 + WEIGHT_TOLERANCE).contains(w) {
                return Err(Error::InvalidProbability(*w));
            }
            if Some(p.label_space()) != space {
                return Err(Error::LabelSpaceMismatch {
                    left: space.unwrap_or(0),
                    right: p.label_space(),
                });
            }
        }
        let total: f64 = terms.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::NotNormalized(total));
        }
        Ok(PauliChannel { terms }.merged())
    }

    pub fn identity(label_space: usize) -> Self {
        PauliChannel {
            terms: vec![(1.0, PauliString::identity(label_space))],
        }
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn label_space(&self) -> usize {
        self.terms[0].1.label_space()
    }

    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|(w, _)| w).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.terms.iter().all(|(w, p)| p.is_identity() || *w == 0.0)
    }

    /// Weight of the term equal to `p` up to phase, 0 if absent.
    pub fn weight_of(&self, p: &PauliString) -> f64 {
        self.terms
            .iter()
            .filter(|(_, q)| q.eq_projective(p))
            .map(|(w, _)| w)
            .sum()
    }

    /// Combines terms with projectively equal operators; ordered by `(x, z)`.
    pub fn merged(self) -> Self {
        let mut terms: Vec<(f64, PauliString)> = self
            .terms
            .into_iter()
            .filter(|(w, _)| *w > 0.0)
            .map(|(w, p)| (w, p.hermitian()))
            .collect();
        terms.sort_by(|a, b| (a.1.x_bits(), a.1.z_bits()).cmp(&(b.1.x_bits(), b.1.z_bits())));
        let mut out: Vec<(f64, PauliString)> = Vec::with_capacity(terms.len());
        for (w, p) in terms {
            match out.last_mut() {
                Some((acc, q)) if q.eq_projective(&p) => *acc += w,
                _ => out.push((w, p)),
            }
        }
        PauliChannel { terms: out }
    }

    pub(crate) fn from_terms_unchecked(terms: Vec<(f64, PauliString)>) -> Self {
        PauliChannel { terms }
    }

    /// Sequential composition of two channels.
    pub fn compose(&self, other: &PauliChannel) -> Result<PauliChannel> {
        if self.label_space() != other.label_space() {
            return Err(Error::LabelSpaceMismatch {
                left: self.label_space(),
                right: other.label_space(),
            });
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (w1, p1) in &self.terms {
            for (w2, p2) in &other.terms {
                terms.push((w1 * w2, p1.multiply(p2)?));
            }
        }
        Ok(PauliChannel { terms }.merged())
    }
}

/// `𝒟_v`: identity with weight `1 - 3p/4`, each of X, Y, Z with `p/4`.
pub fn depolarizing_channel(label_space: usize, v: usize, p: f64) -> Result<PauliChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let mut terms = vec![(1.0 - 3.0 * p / 4.0, PauliString::identity(label_space))];
    if p > 0.0 {
        for letter in [Pauli::X, Pauli::Y, Pauli::Z] {
            terms.push((p / 4.0, PauliString::single(label_space, v, letter)));
        }
    }
    Ok(PauliChannel::from_terms_unchecked(terms).merged())
}

/// Memory dephasing probability `q(t) = (1 - e^{-t/T})/2`.
pub fn dephasing_probability(t: f64, dephasing_time: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidTime(format!("exposure {t} s is negative")));
    }
    if !(dephasing_time > 0.0) {
        return Err(Error::InvalidTime(format!("dephasing time {dephasing_time} s is not positive")));
    }
    if dephasing_time.is_infinite() {
        return Ok(0.0);
    }
    Ok(-(-t / dephasing_time).exp_m1() / 2.0)
}

/// `𝒵_v`: identity with weight `1 - q`, Z with `q`.
pub fn dephasing_channel(label_space: usize, v: usize, q: f64) -> Result<PauliChannel> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidProbability(q));
    }
    let mut terms = vec![(1.0 - q, PauliString::identity(label_space))];
    if q > 0.0 {
        terms.push((q, PauliString::single(label_space, v, Pauli::Z)));
    }
    Ok(PauliChannel::from_terms_unchecked(terms).merged())
}

/// Noise parameters of one qubit: depolarizing strength, memory dephasing
/// time and how long the qubit sits in memory (both in seconds).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitNoise {
    pub depolarizing: f64,
    pub dephasing_time: f64,
    pub exposure: f64,
}

impl QubitNoise {
    pub fn noiseless() -> Self {
        QubitNoise {
            depolarizing: 0.0,
            dephasing_time: f64::INFINITY,
            exposure: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.depolarizing) {
            return Err(Error::InvalidProbability(self.depolarizing));
        }
        dephasing_probability(self.exposure, self.dephasing_time).map(|_| ())
    }
}

/// Per-qubit noise of a resource state.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseAssignment {
    pub qubits: BTreeMap<usize, QubitNoise>,
}

impl NoiseAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: usize, noise: QubitNoise) -> Result<()> {
        noise.validate()?;
        self.qubits.insert(v, noise);
        Ok(())
    }

    pub fn get(&self, v: usize) -> Option<&QubitNoise> {
        self.qubits.get(&v)
    }

    /// Depolarizing and dephasing channels, one per qubit and kind; identity
    /// channels are left out.
    pub fn channels(&self, label_space: usize) -> Result<Vec<PauliChannel>> {
        let mut out = Vec::with_capacity(2 * self.qubits.len());
        for (&v, n) in &self.qubits {
            n.validate()?;
            if v >= label_space {
                return Err(Error::UnknownVertex(v));
            }
            if n.depolarizing > 0.0 {
                out.push(depolarizing_channel(label_space, v, n.depolarizing)?);
            }
            let q = dephasing_probability(n.exposure, n.dephasing_time)?;
            if q > 0.0 {
                out.push(dephasing_channel(label_space, v, q)?);
            }
        }
        Ok(out)
    }
}
