// SPDX-License-Identifier: Apache-2.0

//! Threshold-logic synthesis: fan-in decomposition, gate-to-TLG mapping and
//! pipelining into strictly staged networks.
//!
//! A threshold logic gate outputs 1 iff `sum(w_i * x_i) + b > 0`. Networks
//! built for device mapping use fan-in 2, weights in {+2, -2} and an odd
//! bias in {-3, -1, +1, +3}, so the weighted sum is odd and never zero.

mod decompose;
mod map;
mod network;
mod pipeline;

pub use decompose::decompose;
pub use map::{map_logical, map_tlg};
pub use network::{FlatGate, FlatNetwork, OutputPort, SynthStats, TlgGraph, TlgNetwork};
pub use pipeline::pipeline;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netlist::Netlist;

/// Input weights allowed in device-mappable gates.
pub const MTL_WEIGHTS: [i32; 2] = [2, -2];
/// Bias levels allowed in device-mappable gates.
pub const MTL_BIASES: [i32; 4] = [-3, -1, 1, 3];
/// Fan-in bound of device-mappable networks.
pub const MTL_FANIN: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("unsupported fan-in bound {0} (expected 2, 3 or 4)")]
    UnsupportedFanin(usize),
    #[error("gate `{gate}` has fan-in {count}, bound is {max}")]
    FaninExceeded { gate: String, count: usize, max: usize },
    #[error("gate `{gate}`: weighted sum is zero")]
    ZeroSum { gate: String },
    #[error("malformed network: {0}")]
    Structure(String),
    #[error("input vector has {got} bits, network has {expected} inputs")]
    WidthMismatch { expected: usize, got: usize },
    #[error("network json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Logic,
    Buffer,
}

/// Whether a network can be realized on the device model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mapping {
    /// Fan-in 2, {+-2} weights, odd bias in [-3, 3].
    Mtl,
    /// Unit-weight gates of wider fan-in, for gate-count comparison only.
    LogicalOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TlgGate {
    pub id: String,
    pub fanins: Vec<String>,
    pub weights: Vec<i32>,
    pub bias: i32,
    pub role: Role,
}

impl TlgGate {
    pub fn new(id: impl Into<String>, fanins: Vec<String>, weights: Vec<i32>, bias: i32, role: Role) -> Self {
        TlgGate {
            id: id.into(),
            fanins,
            weights,
            bias,
            role,
        }
    }

    /// A buffer TLG `[+2] / b = -1`.
    pub fn buffer(id: impl Into<String>, src: impl Into<String>) -> Self {
        TlgGate::new(id, vec![src.into()], vec![2], -1, Role::Buffer)
    }

    pub fn weighted_sum(&self, inputs: &[bool]) -> i32 {
        weighted_sum(&self.weights, self.bias, inputs.iter().copied())
    }

    /// True when weights and bias are in the device alphabet.
    pub fn is_mtl_mappable(&self) -> bool {
        self.fanins.len() <= MTL_FANIN
            && self.weights.iter().all(|w| MTL_WEIGHTS.contains(w))
            && MTL_BIASES.contains(&self.bias)
    }
}

pub(crate) fn weighted_sum(weights: &[i32], bias: i32, inputs: impl Iterator<Item = bool>) -> i32 {
    weights
        .iter()
        .zip(inputs)
        .map(|(w, x)| if x { *w } else { 0 })
        .sum::<i32>()
        + bias
}

/// Logical evaluation of one gate: 1 iff the weighted sum is positive.
/// In [`Mapping::Mtl`] a zero sum means a corrupt weight assignment.
pub fn tlg_eval(gate: &TlgGate, inputs: &[bool], mapping: Mapping) -> Result<bool, SynthError> {
    if inputs.len() != gate.fanins.len() {
        return Err(SynthError::WidthMismatch {
            expected: gate.fanins.len(),
            got: inputs.len(),
        });
    }
    let sum = gate.weighted_sum(inputs);
    if sum == 0 && mapping == Mapping::Mtl {
        return Err(SynthError::ZeroSum {
            gate: gate.id.clone(),
        });
    }
    Ok(sum > 0)
}

/// decompose -> map -> pipeline. Fan-in 2 yields a device-mappable network;
/// fan-in 3 and 4 yield logical-only networks for gate-count comparison.
pub fn synthesize(netlist: &Netlist, max_fanin: usize) -> Result<TlgNetwork, SynthError> {
    if !(2..=4).contains(&max_fanin) {
        return Err(SynthError::UnsupportedFanin(max_fanin));
    }
    let narrow = decompose(netlist, max_fanin);
    let graph = if max_fanin == MTL_FANIN {
        map_tlg(&narrow)?
    } else {
        map_logical(&narrow, max_fanin)?
    };
    Ok(pipeline(&graph))
}
