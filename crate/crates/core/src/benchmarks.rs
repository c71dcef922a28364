// SPDX-License-Identifier: Apache-2.0

//! Bundled ISCAS-85 netlists and the CMOS-LUT baseline table.

use crate::netlist::{parse_bench_named, Netlist};
use crate::report::BaselineEntry;

const C17: &str = include_str!("../data/bench/c17.bench");
const C432: &str = include_str!("../data/bench/c432.bench");
const C499: &str = include_str!("../data/bench/c499.bench");
const C880: &str = include_str!("../data/bench/c880.bench");
const C1355: &str = include_str!("../data/bench/c1355.bench");
const C1908: &str = include_str!("../data/bench/c1908.bench");

/// Raw baseline table as shipped (JSON array of [`BaselineEntry`]).
pub const BASELINE_JSON: &str = include_str!("../data/baseline.json");

/// Benchmarks that appear in the baseline table.
pub const TABLE_BENCHMARKS: [&str; 5] = ["c432", "c499", "c880", "c1355", "c1908"];

/// Bench text of a bundled benchmark.
pub fn bench_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "c17" => C17,
        "c432" => C432,
        "c499" => C499,
        "c880" => C880,
        "c1355" => C1355,
        "c1908" => C1908,
        _ => return None,
    })
}

/// Parses a bundled benchmark.
pub fn load(name: &str) -> Option<Netlist> {
    bench_text(name).map(|t| parse_bench_named(t, Some(name)).expect("bundled benchmark parses"))
}

pub fn baseline() -> Vec<BaselineEntry> {
    serde_json::from_str(BASELINE_JSON).expect("bundled baseline table parses")
}

pub fn baseline_for(name: &str) -> Option<BaselineEntry> {
    baseline().into_iter().find(|e| e.benchmark == name)
}
