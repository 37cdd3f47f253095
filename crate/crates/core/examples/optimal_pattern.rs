//! Exhaustive pattern search on symmetric chains in both noise regimes.

use ebqn::experiments::{dephasing_candidate, depolarizing_candidate, symmetric_point};
use ebqn::network::Protocol;
use ebqn::pattern::DEFAULT_SEARCH_CAP;

fn main() -> ebqn::error::Result<()> {
    for (p, t) in [(0.05, 0.1), (0.001, 0.002)] {
        for n in [6, 7, 8] {
            for protocol in Protocol::ALL {
                let row = symmetric_point(n, p, t, protocol, 15e3, DEFAULT_SEARCH_CAP)?;
                println!(
                    "p={p} T={}ms N={n} {protocol:7} best {} F={:.6} ({}) candidates {} / {}",
                    t * 1e3,
                    row.best_pattern,
                    row.best_f,
                    row.regime,
                    depolarizing_candidate(n),
                    dephasing_candidate(protocol, n),
                );
            }
        }
    }
    Ok(())
}
