//! One faulty memory in a seven-node chain: fidelity against its dephasing
//! time for each qubit position.

use ebqn::experiments::{sweep_memory, AsymmetrySweep};

fn main() -> ebqn::error::Result<()> {
    let sweep = AsymmetrySweep {
        values: vec![1e-4, 1e-3, 1e-2, 1e-1],
        ..AsymmetrySweep::memory_default()
    };
    for r in sweep_memory(&sweep)? {
        println!("{:7} qubit {} T={:>6} ms F={:.6}", r.protocol, r.faulty_qubit, r.t_ms, r.fidelity);
    }
    Ok(())
}
