//! Propagates depolarizing and dephasing noise through a chain-to-Bell-pair
//! strategy and reads off the fidelity.

use ebqn::graph::GraphState;
use ebqn::nsf::{assemble_fidelity, dephasing_channel, depolarizing_channel, CompiledStrategy};
use ebqn::pattern::Strategy;
use ebqn::pauli::Basis;

fn main() -> ebqn::error::Result<()> {
    let n = 6;
    let g0 = GraphState::chain(n);
    let steps: Vec<(usize, Basis)> = (1..n - 1).map(|v| (v, Basis::X)).collect();
    let strategy = Strategy::with_default_specials(&g0, &steps)?;
    let compiled = CompiledStrategy::new(&strategy, &g0)?;
    println!("target graph: {:?}", compiled.final_graph().edges());

    let mut channels = Vec::new();
    for v in 0..n {
        channels.push(depolarizing_channel(n, v, 0.01)?);
        channels.push(dephasing_channel(n, v, 0.002)?);
    }
    let out = channels.iter().map(|c| compiled.propagate(c)).collect::<ebqn::error::Result<Vec<_>>>()?;
    for (v, c) in out.iter().enumerate().step_by(2).map(|(i, c)| (i / 2, c)) {
        let terms: Vec<String> = c.terms().iter().map(|(w, p)| format!("{w:.4}·{p}")).collect();
        println!("depolarizing on {v} becomes {}", terms.join(" + "));
    }
    println!("F = {:.9}", assemble_fidelity(&out, compiled.final_graph())?);
    Ok(())
}
