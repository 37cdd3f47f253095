//! Translates a measurement pattern into strategies with different
//! measurement orders and back.

use ebqn::graph::GraphState;
use ebqn::pattern::{pattern_to_strategy, strategy_to_pattern, MeasurementPattern};

fn main() -> ebqn::error::Result<()> {
    let g0 = GraphState::chain(7);
    let inner: Vec<usize> = (1..6).collect();
    let pattern = MeasurementPattern::from_chain_string("xyyyx", &inner)?;
    for order in [vec![1, 2, 3, 4, 5], vec![5, 4, 3, 2, 1], vec![3, 1, 5, 2, 4]] {
        let s = pattern_to_strategy(&pattern, &g0, Some(&order))?;
        let steps: Vec<String> = s.steps.iter().map(|st| format!("{}{}", st.basis, st.vertex)).collect();
        let back = strategy_to_pattern(&s, &g0)?;
        println!("order {order:?}: strategy {} -> pattern {}", steps.join(" "), back.to_chain_string(&inner)?);
    }
    Ok(())
}
