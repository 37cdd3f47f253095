//! Noisy stabilizer formalism: Pauli channels on the initial resource state
//! are carried through a manipulation strategy one at a time and combined
//! only on the small target graph.

mod channel;
mod fidelity;
mod oracle;
mod propagate;

pub use channel::{
    dephasing_channel, dephasing_probability, depolarizing_channel, NoiseAssignment, PauliChannel, QubitNoise,
    WEIGHT_TOLERANCE,
};
pub use fidelity::assemble_fidelity;
pub use oracle::{dense_oracle_fidelity, DenseOracle, ORACLE_LIMIT};
pub use propagate::{propagate_channel, CompiledStrategy};
