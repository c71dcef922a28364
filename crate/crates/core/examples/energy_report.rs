// SPDX-License-Identifier: Apache-2.0

//! Energy, delay and EDP of every bundled benchmark next to the CMOS-LUT
//! baseline.
//!
//! `cargo run --release --example energy_report`

use mtl::analogsim::random_vectors;
use mtl::interconnect::route;
use mtl::report::{format_table, network_report};
use mtl::{benchmarks, synthesize, DeviceParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = DeviceParams::default();
    let mut rows = Vec::new();
    for name in ["c17"].into_iter().chain(benchmarks::TABLE_BENCHMARKS) {
        let netlist = benchmarks::load(name).expect("bundled");
        let network = synthesize(&netlist, 2)?;
        let routing = route(&network, &p)?;
        let vectors = random_vectors(netlist.inputs().len(), 1000, 0);
        let r = network_report(&netlist, &network, &routing, &p, &vectors)?;
        eprintln!(
            "{name}: {} logic + {} buffers, {:.3} fJ/gate ({:.3} summation), wires {:.2}%",
            r.logic_gates,
            r.buffers,
            r.energy_per_gate * 1e15,
            r.summation_energy_per_gate * 1e15,
            r.interconnect_share * 100.0
        );
        rows.push((r, benchmarks::baseline_for(name)));
    }
    print!("{}", format_table(&rows));
    Ok(())
}
