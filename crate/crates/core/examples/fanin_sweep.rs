// SPDX-License-Identifier: Apache-2.0

//! Gate count against the fan-in bound. Fan-in 3 and 4 are logical-only.

use mtl::benchmarks;
use mtl::cli::sweep_fanin;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:<8} {:>8} {:>8} {:>8}", "bench", "k=2", "k=3", "k=4");
    for name in ["c17"].into_iter().chain(benchmarks::TABLE_BENCHMARKS) {
        let rows = sweep_fanin(&benchmarks::load(name).expect("bundled"))?;
        let counts: Vec<String> = rows.iter().map(|r| format!("{:>8}", r.logic_gates)).collect();
        println!("{name:<8} {}", counts.join(" "));
    }
    Ok(())
}
