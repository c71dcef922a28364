// SPDX-License-Identifier: Apache-2.0

//! Synthesis and simulation of pipelined magnetic threshold logic (MTL).
//!
//! The flow takes an ISCAS-85 `.bench` netlist through
//!
//! 1. [`netlist`]: parsing, validation and a reference Boolean evaluator,
//! 2. [`tlgsynth`]: fan-in decomposition, threshold-gate mapping and
//!    pipelining with buffer insertion,
//! 3. [`device`]: MTJ weight conductances, current summation, domain-wall
//!    switch thresholding and divider readout,
//! 4. [`analogsim`]: cycle-accurate pipelined simulation, equivalence
//!    checking and Monte Carlo margin/yield analysis,
//! 5. [`interconnect`]: crossbar routing between stages and its energy,
//! 6. [`report`]: energy/delay accounting and comparison with the CMOS-LUT
//!    baseline numbers.
//!
//! ```
//! use mtl::{netlist, tlgsynth};
//!
//! let n = netlist::parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = XOR(a, b)\n").unwrap();
//! let net = tlgsynth::synthesize(&n, 2).unwrap();
//! assert_eq!(net.stats().logic_gates, 3);
//! assert_eq!(net.eval(&[true, false]).unwrap(), [true]);
//! ```

pub mod analogsim;
pub mod benchmarks;
pub mod cli;
pub mod config;
pub mod device;
pub mod interconnect;
pub mod json;
pub mod netlist;
pub mod report;
pub mod tlgsynth;

pub use device::DeviceParams;
pub use netlist::{parse_bench, Netlist};
pub use tlgsynth::{synthesize, TlgNetwork};
