use crate::dense::{eigenvector, DensityMatrix, StateVector};
use crate::error::{Error, Result};
use crate::graph::GraphState;
use crate::pattern::Strategy;

use super::channel::PauliChannel;

/// Largest resource state the dense reference accepts.
pub const ORACLE_LIMIT: usize = 8;

/// Dense density-matrix reference: the noisy resource state is built once
/// and every strategy is applied branch by branch.
#[derive(Clone, Debug)]
pub struct DenseOracle {
    graph: GraphState,
    rho: DensityMatrix,
}

impl DenseOracle {
    pub fn new(g0: &GraphState, channels: &[PauliChannel]) -> Result<Self> {
        if g0.vertex_count() > ORACLE_LIMIT {
            return Err(Error::OracleTooLarge {
                qubits: g0.vertex_count(),
                limit: ORACLE_LIMIT,
            });
        }
        let mut rho = DensityMatrix::from_pure(&StateVector::graph_state(g0));
        for ch in channels {
            if ch.label_space() != g0.label_space() {
                return Err(Error::LabelSpaceMismatch {
                    left: ch.label_space(),
                    right: g0.label_space(),
                });
            }
            if ch.terms().iter().any(|(_, p)| !p.support().is_subset(g0.vertex_set())) {
                return Err(Error::SupportLeak);
            }
            if !ch.is_identity() {
                rho.apply_pauli_mixture(ch.terms());
            }
        }
        Ok(DenseOracle { graph: g0.clone(), rho })
    }

    /// State averaged over all outcomes after the strategy, each branch
    /// corrected with its own outcome-dependent operator.
    pub fn final_state(&self, strategy: &Strategy) -> Result<DensityMatrix> {
        let graphs = strategy.graph_sequence(&self.graph)?;
        let mut rho = self.rho.clone();
        for (step, g) in strategy.steps.iter().zip(&graphs) {
            let pair = g.correction_operators_resolved(step.vertex, step.basis, step.special);
            let mut sum: Option<DensityMatrix> = None;
            for (plus, u) in [(true, &pair.u_plus), (false, &pair.u_minus)] {
                let mut branch = rho.project_out(step.vertex, eigenvector(step.basis, plus));
                for gate in u {
                    branch.apply_gate(&gate.inverse());
                }
                match sum.as_mut() {
                    Some(s) => s.add_assign(&branch),
                    None => sum = Some(branch),
                }
            }
            rho = sum.expect("two branches");
        }
        Ok(rho)
    }

    /// `⟨G_t|ρ|G_t⟩` for the averaged post-strategy state.
    pub fn fidelity(&self, strategy: &Strategy, target: &GraphState) -> Result<f64> {
        let rho = self.final_state(strategy)?;
        let psi = StateVector::graph_state(target);
        if psi.labels != rho.labels {
            return Err(Error::InvalidStrategy(
                "target vertices differ from the qubits left by the strategy".into(),
            ));
        }
        Ok(rho.expectation(&psi))
    }
}

/// One-off dense evaluation of a noisy strategy.
pub fn dense_oracle_fidelity(
    g0: &GraphState,
    channels: &[PauliChannel],
    strategy: &Strategy,
    target: &GraphState,
) -> Result<f64> {
    DenseOracle::new(g0, channels)?.fidelity(strategy, target)
}
