// SPDX-License-Identifier: Apache-2.0

//! Stream vectors through the cycle-accurate pipeline and show when each
//! result appears.

use mtl::analogsim::{random_vectors, simulate};
use mtl::{benchmarks, synthesize, DeviceParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "c17".into());
    let netlist = benchmarks::load(&name).ok_or("unknown benchmark")?;
    let network = synthesize(&netlist, 2)?;
    let stream = random_vectors(netlist.inputs().len(), 8, 7);
    let run = simulate(&network, &stream, &DeviceParams::default(), None)?;
    println!("{name}: {} stages, {} vectors done after {} cycles", network.num_stages(), stream.len(), run.state.cycle);
    for (t, (v, out)) in stream.iter().zip(&run.outputs).enumerate() {
        let expect = netlist.eval(v)?;
        println!(
            "in @{t:>2}  out @{:>2}  {}  {}",
            run.output_cycles[t],
            out.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>(),
            if *out == expect { "ok" } else { "MISMATCH" }
        );
    }
    Ok(())
}
