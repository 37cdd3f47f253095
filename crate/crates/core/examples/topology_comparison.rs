//! Custom against basic placement of the chain on a small random network.

use ebqn::experiments::TopologyComparison;

fn main() -> ebqn::error::Result<()> {
    let cmp = TopologyComparison {
        nodes: 40,
        hop_cap: Some(8),
        seed: 1,
        ..TopologyComparison::default()
    };
    let out = cmp.run()?;
    println!("protocol topology hops mean_F  std_F  pairs usable%");
    for r in &out.hops {
        println!(
            "{:8} {:8} {:4} {:.4} {:.4} {:5} {:6.1}",
            r.protocol.name(),
            r.topology.name(),
            r.hops,
            r.mean_f,
            r.std_f,
            r.n_pairs,
            r.usable_pct
        );
    }
    Ok(())
}
