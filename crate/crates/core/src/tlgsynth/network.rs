// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{tlg_eval, weighted_sum, Mapping, Role, SynthError, TlgGate, MTL_FANIN};

/// A declared output and the signal that drives it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputPort {
    pub name: String,
    pub driver: String,
}

/// Unstaged TLG graph; gates are in dependency order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TlgGraph {
    pub name: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<OutputPort>,
    pub gates: Vec<TlgGate>,
    pub mapping: Mapping,
    pub max_fanin: usize,
}

/// Strictly staged TLG network. Stage `k` gates read only stage `k - 1`
/// outputs; stage 0 reads primary inputs; outputs come from the last stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TlgNetwork {
    pub name: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<OutputPort>,
    pub stages: Vec<Vec<TlgGate>>,
    /// Producer (input or gate) -> consumer gates, in stage order.
    pub fanout: BTreeMap<String, Vec<String>>,
    pub mapping: Mapping,
    pub max_fanin: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthStats {
    pub logic_gates: usize,
    pub buffers: usize,
    pub stages: usize,
}

/// Index-resolved gate. Signal indices address `[inputs.., gates..]` with
/// gates in stage order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatGate {
    pub fanins: Vec<usize>,
    pub weights: Vec<i32>,
    pub bias: i32,
    pub stage: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatNetwork {
    pub num_inputs: usize,
    pub gates: Vec<FlatGate>,
    /// `stage_starts[k]..stage_starts[k + 1]` are the gates of stage `k`.
    pub stage_starts: Vec<usize>,
    pub outputs: Vec<usize>,
}

impl FlatNetwork {
    pub fn num_stages(&self) -> usize {
        self.stage_starts.len() - 1
    }

    pub fn num_signals(&self) -> usize {
        self.num_inputs + self.gates.len()
    }

    /// Logical value of every signal for one input vector, or `None` on a
    /// width mismatch. Zero sums evaluate to 0.
    pub fn signal_values(&self, input: &[bool]) -> Option<Vec<bool>> {
        if input.len() != self.num_inputs {
            return None;
        }
        let mut values = Vec::with_capacity(self.num_signals());
        values.extend_from_slice(input);
        for g in &self.gates {
            let sum = weighted_sum(&g.weights, g.bias, g.fanins.iter().map(|&f| values[f]));
            values.push(sum > 0);
        }
        Some(values)
    }
}

impl TlgNetwork {
    pub fn num_stages(&self) -> usize {
        self.stages.len()
    }

    pub fn gates(&self) -> impl Iterator<Item = &TlgGate> {
        self.stages.iter().flatten()
    }

    pub fn gate_count(&self) -> usize {
        self.stages.iter().map(Vec::len).sum()
    }

    pub fn stats(&self) -> SynthStats {
        let buffers = self.gates().filter(|g| g.role == Role::Buffer).count();
        SynthStats {
            logic_gates: self.gate_count() - buffers,
            buffers,
            stages: self.num_stages(),
        }
    }

    pub fn is_mappable(&self) -> bool {
        self.mapping == Mapping::Mtl
    }

    /// Structural check of every network invariant: unique names, weight
    /// arity, fan-in bound, device alphabet (when mappable), strict stage
    /// discipline and final-stage outputs.
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::Structure(m));
        let mut stage_of: HashMap<&str, isize> = HashMap::new();
        for i in &self.inputs {
            if stage_of.insert(i, -1).is_some() {
                return bad(format!("duplicate signal `{i}`"));
            }
        }
        for (k, stage) in self.stages.iter().enumerate() {
            if stage.is_empty() {
                return bad(format!("stage {k} is empty"));
            }
            for g in stage {
                if stage_of.insert(&g.id, k as isize).is_some() {
                    return bad(format!("duplicate signal `{}`", g.id));
                }
            }
        }
        for (k, stage) in self.stages.iter().enumerate() {
            for g in stage {
                if g.fanins.is_empty() || g.weights.len() != g.fanins.len() {
                    return bad(format!("gate `{}` has mismatched weights", g.id));
                }
                if g.fanins.len() > self.max_fanin {
                    return Err(SynthError::FaninExceeded {
                        gate: g.id.clone(),
                        count: g.fanins.len(),
                        max: self.max_fanin,
                    });
                }
                if self.mapping == Mapping::Mtl && !g.is_mtl_mappable() {
                    return bad(format!("gate `{}` is outside the device alphabet", g.id));
                }
                for f in &g.fanins {
                    match stage_of.get(f.as_str()) {
                        None => return bad(format!("gate `{}` reads undefined `{f}`", g.id)),
                        Some(&s) if s != k as isize - 1 => {
                            return bad(format!(
                                "gate `{}` at stage {k} reads `{f}` from stage {s}",
                                g.id
                            ))
                        }
                        _ => {}
                    }
                }
            }
        }
        let last = self.stages.len() as isize - 1;
        for o in &self.outputs {
            match stage_of.get(o.driver.as_str()) {
                None => return bad(format!("output `{}` has undefined driver", o.name)),
                Some(&s) if s != last => {
                    return bad(format!("output `{}` is driven from stage {s}, not {last}", o.name))
                }
                _ => {}
            }
        }
        if self.mapping == Mapping::Mtl && self.max_fanin != MTL_FANIN {
            return bad("mappable network must have fan-in bound 2".into());
        }
        Ok(())
    }

    /// Resolves names to indices. Assumes [`validate`](Self::validate) passed.
    pub fn flatten(&self) -> FlatNetwork {
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, n) in self.inputs.iter().enumerate() {
            index.insert(n, i);
        }
        let mut next = self.inputs.len();
        let mut stage_starts = vec![0];
        for stage in &self.stages {
            for g in stage {
                index.insert(&g.id, next);
                next += 1;
            }
            stage_starts.push(next - self.inputs.len());
        }
        let gates = self
            .stages
            .iter()
            .enumerate()
            .flat_map(|(k, stage)| stage.iter().map(move |g| (k, g)))
            .map(|(k, g)| FlatGate {
                fanins: g.fanins.iter().map(|f| index[f.as_str()]).collect(),
                weights: g.weights.clone(),
                bias: g.bias,
                stage: k,
            })
            .collect();
        FlatNetwork {
            num_inputs: self.inputs.len(),
            gates,
            stage_starts,
            outputs: self.outputs.iter().map(|o| index[o.driver.as_str()]).collect(),
        }
    }

    /// Stage-synchronous composition of [`tlg_eval`]; returns outputs in
    /// declared order. Zero sums are rejected for mappable networks.
    pub fn eval(&self, input: &[bool]) -> Result<Vec<bool>, SynthError> {
        if input.len() != self.inputs.len() {
            return Err(SynthError::WidthMismatch {
                expected: self.inputs.len(),
                got: input.len(),
            });
        }
        let mut values: HashMap<&str, bool> =
            self.inputs.iter().map(String::as_str).zip(input.iter().copied()).collect();
        let mut scratch = Vec::with_capacity(self.max_fanin);
        for g in self.gates() {
            scratch.clear();
            scratch.extend(g.fanins.iter().map(|f| values[f.as_str()]));
            let v = tlg_eval(g, &scratch, self.mapping)?;
            values.insert(&g.id, v);
        }
        Ok(self.outputs.iter().map(|o| values[o.driver.as_str()]).collect())
    }

    pub fn to_json(&self) -> String {
        crate::json::to_sorted_string(self)
    }

    /// Parses and validates a serialized network.
    pub fn from_json(text: &str) -> Result<Self, SynthError> {
        let net: TlgNetwork =
            serde_json::from_str(text).map_err(|e| SynthError::Json(e.to_string()))?;
        net.validate()?;
        Ok(net)
    }

    /// Recomputes the fanout table from the stage lists.
    pub(crate) fn rebuild_fanout(&mut self) {
        let mut fanout: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for i in &self.inputs {
            fanout.insert(i.clone(), Vec::new());
        }
        for g in self.stages.iter().flatten() {
            fanout.entry(g.id.clone()).or_default();
        }
        for g in self.stages.iter().flatten() {
            for f in &g.fanins {
                fanout.get_mut(f).unwrap().push(g.id.clone());
            }
        }
        self.fanout = fanout;
    }
}
