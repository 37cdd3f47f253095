//! Local complementation and Pauli measurements on a five-qubit chain.

use ebqn::graph::GraphState;
use ebqn::pauli::Basis;

fn main() -> ebqn::error::Result<()> {
    let g = GraphState::chain(5);
    println!("chain:            {:?}", g.edges());
    println!("LC at 2:          {:?}", g.local_complement(2)?.edges());
    for basis in Basis::ALL {
        let m = g.measure_update(2, basis, None)?;
        println!("measure 2 in {basis}:  {:?}", m.edges());
    }
    // x on every inner qubit contracts the chain to a Bell pair
    let mut bell = g.clone();
    for v in 1..4 {
        bell = bell.measure_update(v, Basis::X, None)?;
    }
    println!("all-x on 1..=3:   {:?}", bell.edges());
    println!("byproduct of y on 2: {}", g.byproduct_operator(2, Basis::Y, None)?);
    Ok(())
}
