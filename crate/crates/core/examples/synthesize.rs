// SPDX-License-Identifier: Apache-2.0

//! Synthesize a benchmark into a staged TLG network and dump it as JSON.
//!
//! `cargo run --example synthesize [-- c432]`

use mtl::{benchmarks, synthesize};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "c17".into());
    let netlist = benchmarks::load(&name).ok_or("unknown benchmark")?;
    let network = synthesize(&netlist, 2)?;
    let s = network.stats();
    eprintln!("{name}: {} logic gates, {} buffers, {} stages", s.logic_gates, s.buffers, s.stages);
    for (k, stage) in network.stages.iter().enumerate().take(3) {
        for g in stage {
            eprintln!("  stage {k}: {} = TLG({:?}, w={:?}, b={})", g.id, g.fanins, g.weights, g.bias);
        }
    }
    print!("{}", network.to_json());
    Ok(())
}
