// SPDX-License-Identifier: Apache-2.0

//! Resistive-crossbar interconnect between pipeline stages.
//!
//! At each stage boundary the producers (primary inputs for stage 0, the
//! previous stage's gates otherwise) drive crossbar rows and every consumer
//! input exposes a `+` and a `-` rail column. A logical fanout programs one
//! ON crosspoint per rail, so it becomes two routed nets.
//!
//! Placement is declaration order. Producer `p` owns rows `2p` (+) and
//! `2p + 1` (-); consumer input `m` owns columns `2m` and `2m + 1`. The
//! driver of row `r` sits at grid position `r` and the receiver of column
//! `c` at position `c`, so a net spans `|r - c| + 1` pitches. With the
//! default pitch `max_length / max(rows, cols)` no net exceeds
//! `max_length`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::device::DeviceParams;
use crate::tlgsynth::{SynthError, TlgNetwork};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InterconnectError {
    #[error("network is not device-mappable")]
    NotMappable,
    #[error("stage crossing without buffer: {0}")]
    StageCrossing(String),
    #[error("{} net(s) exceed the maximum length: {}", .0.len(), .0.join(", "))]
    MaxLength(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rail {
    /// Driven to `+dV`, feeds the consumer's `G+` device.
    Plus,
    /// Driven to `-dV`, feeds `G-`.
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutedNet {
    /// Index of the consumer stage.
    pub boundary: usize,
    pub producer: String,
    pub consumer: String,
    /// Fanin slot of the consumer.
    pub input: usize,
    pub rail: Rail,
    pub row: usize,
    pub col: usize,
    pub length: f64,
    pub resistance: f64,
    pub capacitance: f64,
    pub crosspoints: usize,
}

impl RoutedNet {
    pub fn label(&self) -> String {
        let r = match self.rail {
            Rail::Plus => '+',
            Rail::Minus => '-',
        };
        format!("{}->{}[{}]{}", self.producer, self.consumer, self.input, r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPlan {
    pub stage: usize,
    /// Producer per row pair (row `2p` is +, `2p + 1` is -).
    pub producers: Vec<String>,
    /// `(consumer, fanin slot)` per column pair.
    pub consumers: Vec<(String, usize)>,
    pub rows: usize,
    pub cols: usize,
    pub pitch: f64,
    /// Programmed (row, col) crosspoints.
    pub programmed: Vec<(usize, usize)>,
    pub off_crosspoints: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossbarPlan {
    pub boundaries: Vec<BoundaryPlan>,
}

impl CrossbarPlan {
    pub fn off_crosspoints(&self) -> usize {
        self.boundaries.iter().map(|b| b.off_crosspoints).sum()
    }

    /// Static sneak-path power through OFF crosspoints,
    /// `count * (2 dV)^2 / r_off`. Reported only; not part of headline energy.
    pub fn sneak_power(&self, params: &DeviceParams) -> f64 {
        self.off_crosspoints() as f64 * (2.0 * params.delta_v).powi(2) / params.r_off
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Routing {
    pub plan: CrossbarPlan,
    pub nets: Vec<RoutedNet>,
}

/// Places and routes every stage boundary of a staged network.
pub fn route(network: &TlgNetwork, params: &DeviceParams) -> Result<Routing, InterconnectError> {
    if !network.is_mappable() {
        return Err(InterconnectError::NotMappable);
    }
    if let Err(e) = network.validate() {
        return Err(match e {
            SynthError::Structure(m) => InterconnectError::StageCrossing(m),
            _ => InterconnectError::NotMappable,
        });
    }

    let mut boundaries = Vec::with_capacity(network.num_stages());
    let mut nets = Vec::new();
    let mut too_long = Vec::new();
    for (k, stage) in network.stages.iter().enumerate() {
        let sources: Vec<&String> = if k == 0 {
            network.inputs.iter().collect()
        } else {
            network.stages[k - 1].iter().map(|g| &g.id).collect()
        };
        let consumers: Vec<(String, usize)> = stage
            .iter()
            .flat_map(|g| (0..g.fanins.len()).map(move |i| (g.id.clone(), i)))
            .collect();
        let used: std::collections::HashSet<&str> =
            stage.iter().flat_map(|g| g.fanins.iter().map(String::as_str)).collect();
        let producers: Vec<String> = sources
            .into_iter()
            .filter(|p| used.contains(p.as_str()))
            .cloned()
            .collect();
        let row_of: HashMap<&str, usize> = producers.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();

        let rows = 2 * producers.len();
        let cols = 2 * consumers.len();
        let pitch = if params.pitch > 0.0 {
            params.pitch
        } else {
            params.max_length / rows.max(cols) as f64
        };
        let mut programmed = Vec::with_capacity(cols);
        let mut m = 0;
        for g in stage {
            for (slot, f) in g.fanins.iter().enumerate() {
                let p = *row_of
                    .get(f.as_str())
                    .ok_or_else(|| InterconnectError::StageCrossing(format!("`{}` reads `{f}`", g.id)))?;
                for (rail, row, col) in [(Rail::Plus, 2 * p, 2 * m), (Rail::Minus, 2 * p + 1, 2 * m + 1)] {
                    let length = (row.abs_diff(col) + 1) as f64 * pitch;
                    let share = length / params.max_length;
                    let net = RoutedNet {
                        boundary: k,
                        producer: f.clone(),
                        consumer: g.id.clone(),
                        input: slot,
                        rail,
                        row,
                        col,
                        length,
                        resistance: params.r_wire * share + params.r_on,
                        capacitance: params.c_wire * share,
                        crosspoints: 1,
                    };
                    // relative tolerance for pitch * count round-off
                    if length > params.max_length * (1.0 + 1e-9) {
                        too_long.push(net.label());
                    }
                    programmed.push((row, col));
                    nets.push(net);
                }
                m += 1;
            }
        }
        boundaries.push(BoundaryPlan {
            stage: k,
            producers,
            consumers,
            rows,
            cols,
            pitch,
            off_crosspoints: rows * cols - programmed.len(),
            programmed,
        });
    }
    if !too_long.is_empty() {
        return Err(InterconnectError::MaxLength(too_long));
    }
    Ok(Routing {
        plan: CrossbarPlan { boundaries },
        nets,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub net: String,
    pub resistance: f64,
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub passed: bool,
    /// `0.1 * r_p`.
    pub bound: f64,
    pub worst_net: Option<String>,
    pub worst_resistance: f64,
    /// `bound - worst_resistance`.
    pub slack: f64,
    /// Worst `R_path / r_p`.
    pub max_droop_fraction: f64,
    pub violations: Vec<Violation>,
}

/// Path resistance must stay within 10% of the weight MTJ resistance so the
/// next stage still sees about `+-dV`.
pub fn check_constraints(nets: &[RoutedNet], params: &DeviceParams) -> ConstraintReport {
    let bound = 0.1 * params.r_p;
    let worst = nets.iter().max_by(|a, b| a.resistance.total_cmp(&b.resistance));
    let worst_resistance = worst.map_or(0.0, |n| n.resistance);
    let violations: Vec<Violation> = nets
        .iter()
        .filter(|n| n.resistance > bound)
        .map(|n| Violation {
            net: n.label(),
            resistance: n.resistance,
            excess: n.resistance - bound,
        })
        .collect();
    ConstraintReport {
        passed: violations.is_empty(),
        bound,
        worst_net: worst.map(RoutedNet::label),
        worst_resistance,
        slack: bound - worst_resistance,
        max_droop_fraction: worst_resistance / params.r_p,
        violations,
    }
}

/// Dynamic interconnect energy over `cycles`. Each logical fanout (one rail
/// pair, counted on its `+` net) dissipates `activity * C * dV^2` per cycle.
pub fn interconnect_energy(nets: &[RoutedNet], params: &DeviceParams, cycles: u64) -> f64 {
    let per_cycle: f64 = nets
        .iter()
        .filter(|n| n.rail == Rail::Plus)
        .map(|n| params.activity * n.capacitance * params.delta_v.powi(2))
        .sum();
    per_cycle * cycles as f64
}
