// SPDX-License-Identifier: Apache-2.0

//! Parse a netlist, list it in evaluation order and print its truth table.
//!
//! `cargo run --example parse_bench [-- path/to/file.bench]`

use mtl::benchmarks;
use mtl::netlist::{parse_bench_named, Netlist};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let netlist: Netlist = match std::env::args().nth(1) {
        Some(path) => parse_bench_named(&std::fs::read_to_string(&path)?, None)?,
        None => benchmarks::load("c17").expect("bundled"),
    };
    println!(
        "{}: {} inputs, {} outputs, {} gates",
        netlist.name(),
        netlist.inputs().len(),
        netlist.outputs().len(),
        netlist.gates().len()
    );
    for g in netlist.topo_order() {
        println!("  {} = {}({})", g.id, g.func, g.fanins.join(", "));
    }
    if netlist.inputs().len() <= 6 {
        println!("{} | {}", netlist.inputs().join(" "), netlist.outputs().join(" "));
        let n = netlist.inputs().len();
        for v in 0..1u32 << n {
            let bits: Vec<bool> = (0..n).map(|i| v >> (n - 1 - i) & 1 == 1).collect();
            let out = netlist.eval(&bits)?;
            let fmt = |b: &[bool]| b.iter().map(|&x| if x { "1" } else { "0" }).collect::<Vec<_>>().join(" ");
            println!("{} | {}", fmt(&bits), fmt(&out));
        }
    }
    Ok(())
}
