//! One shifted node in a five-node chain: fidelity against its distance to
//! the previous node.

use ebqn::experiments::{sweep_position, AsymmetrySweep};

fn main() -> ebqn::error::Result<()> {
    let sweep = AsymmetrySweep {
        values: vec![5e3, 15e3, 25e3],
        ..AsymmetrySweep::position_default()
    };
    for r in sweep_position(&sweep)? {
        println!("{:7} qubit {} d={:>4} km F={:.9}", r.protocol, r.shifted_qubit, r.d_km, r.fidelity);
    }
    Ok(())
}
