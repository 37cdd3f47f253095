use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::graph::GraphState;
use crate::pattern::Strategy;
use crate::pauli::{CliffordGate, Pauli, PauliString};

use super::channel::PauliChannel;

#[derive(Clone, Debug)]
struct CompiledStep {
    vertex: usize,
    basis: Pauli,
    byproduct: PauliString,
    u_plus: Vec<CliffordGate>,
}

/// A strategy evaluated once on its initial graph, ready to push any number
/// of Pauli operators through it.
#[derive(Clone, Debug)]
pub struct CompiledStrategy {
    initial: BitSet,
    steps: Vec<CompiledStep>,
    final_graph: GraphState,
}

impl CompiledStrategy {
    pub fn new(strategy: &Strategy, g0: &GraphState) -> Result<Self> {
        let graphs = strategy.graph_sequence(g0)?;
        let steps = strategy
            .steps
            .iter()
            .zip(&graphs)
            .map(|(s, g)| CompiledStep {
                vertex: s.vertex,
                basis: s.basis.pauli(),
                byproduct: g.byproduct_resolved(s.vertex, s.basis, s.special),
                u_plus: g.correction_operators_resolved(s.vertex, s.basis, s.special).u_plus,
            })
            .collect();
        Ok(CompiledStrategy {
            initial: g0.vertex_set().clone(),
            steps,
            final_graph: graphs.into_iter().last().expect("sequence holds the final graph"),
        })
    }

    pub fn final_graph(&self) -> &GraphState {
        &self.final_graph
    }

    /// Image of a Pauli error on the initial state, up to phase.
    ///
    /// At each measurement the component on the measured qubit is dropped;
    /// if it anticommutes with the measured observable it flips the outcome,
    /// which leaves the byproduct behind. The rest is then pulled through the
    /// `+` correction.
    pub fn propagate_op(&self, op: &PauliString) -> Result<PauliString> {
        if op.label_space() != self.initial.len() {
            return Err(Error::LabelSpaceMismatch {
                left: op.label_space(),
                right: self.initial.len(),
            });
        }
        if !op.support().is_subset(&self.initial) {
            return Err(Error::SupportLeak);
        }
        let mut op = op.clone();
        for step in &self.steps {
            let letter = op.take(step.vertex);
            if !commutes(letter, step.basis) {
                op.mul_assign_right(&step.byproduct);
            }
            for gate in &step.u_plus {
                op.conjugate_in_place(gate);
            }
        }
        debug_assert!(op.support().is_subset(self.final_graph.vertex_set()));
        Ok(op)
    }

    pub fn propagate(&self, channel: &PauliChannel) -> Result<PauliChannel> {
        let terms = channel
            .terms()
            .iter()
            .map(|(w, p)| Ok((*w, self.propagate_op(p)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliChannel::from_terms_unchecked(terms).merged())
    }
}

fn commutes(a: Pauli, b: Pauli) -> bool {
    a == Pauli::I || b == Pauli::I || a == b
}

/// Pushes a channel on the initial state through a strategy.
pub fn propagate_channel(channel: &PauliChannel, strategy: &Strategy, g0: &GraphState) -> Result<PauliChannel> {
    CompiledStrategy::new(strategy, g0)?.propagate(channel)
}
