// SPDX-License-Identifier: Apache-2.0

//! Yield and worst-case margin under resistance variation.
//!
//! `cargo run --release --example monte_carlo [-- c432 200]`

use mtl::analogsim::{monte_carlo, random_vectors};
use mtl::{benchmarks, synthesize, DeviceParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "c17".into());
    let trials: usize = args.next().map_or(Ok(50), |s| s.parse())?;
    let netlist = benchmarks::load(&name).ok_or("unknown benchmark")?;
    let network = synthesize(&netlist, 2)?;
    let vectors = random_vectors(netlist.inputs().len(), 64, 0);
    println!("{:>6} {:>7} {:>9} {:>8}", "sigma", "yield", "margin", "events");
    for sigma in [0.0, 0.02, 0.05, 0.10, 0.15] {
        let p = DeviceParams {
            sigma_r: sigma,
            ..DeviceParams::default()
        };
        let r = monte_carlo(&netlist, &network, &p, trials, &vectors, 0, None)?;
        println!("{sigma:>6.2} {:>7.3} {:>9.4} {:>8}", r.yield_fraction, r.min_margin_ratio, r.under_threshold_events);
    }
    Ok(())
}
