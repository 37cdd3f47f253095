//! Cross-checks the stabilizer propagation against the dense density-matrix
//! reference on every pattern of a noisy six-qubit request.

use ebqn::network::Protocol;
use ebqn::scenario::NetworkScenario;

fn main() -> ebqn::error::Result<()> {
    for protocol in Protocol::ALL {
        let prep = NetworkScenario::symmetric_chain(6, 15e3, 0.02, 5e-3, protocol)?.prepare()?;
        let oracle = prep.dense_oracle()?;
        let mut worst: f64 = 0.0;
        for p in prep.patterns()? {
            let fast = prep.fidelity(&p)?;
            let dense = prep.dense_fidelity(&oracle, &p)?;
            worst = worst.max((fast - dense).abs());
            println!("{protocol:7} {} F={fast:.12} dense={dense:.12}", prep.pattern_string(&p));
        }
        println!("{protocol}: max difference {worst:.2e}");
    }
    Ok(())
}
