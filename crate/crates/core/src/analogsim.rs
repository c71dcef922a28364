// SPDX-License-Identifier: Apache-2.0

//! Cycle-accurate simulation of a staged TLG network on the device model.
//!
//! Every cycle each stage computes `I_sum` from the latches of the previous
//! stage (stage 0 from the applied input vector), pulses its domain-wall
//! switches and latches the sensed divider output. A vector applied in
//! cycle `t` is readable at the start of cycle `t + S` for an `S`-stage
//! network, and `n` vectors drain in `n + S` cycles. A switch that sees less
//! than `i_c` keeps its previous state.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::device::{
    dws_apply, mc_sample, sense, sum_current, weight_to_conductance, ConductancePair, DeviceError, DeviceParams,
    DwsState, Polarity, VariationSample,
};
use crate::netlist::{Netlist, NetlistError};
use crate::tlgsynth::{FlatNetwork, TlgNetwork, MTL_BIASES, MTL_WEIGHTS};

/// Largest input count accepted for exhaustive checking.
pub const MAX_EXHAUSTIVE_INPUTS: usize = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("network is not device-mappable")]
    NotMappable,
    #[error("input vector has {got} bits, network has {expected} inputs")]
    WidthMismatch { expected: usize, got: usize },
    #[error("interface mismatch: {0}")]
    Interface(String),
    #[error("exhaustive check over {0} inputs exceeds the limit of {MAX_EXHAUSTIVE_INPUTS}")]
    TooManyInputs(usize),
    #[error("input stream is empty")]
    EmptyStream,
    #[error("variation sample does not match the network")]
    VariationShape,
    #[error(transparent)]
    Device(#[from] DeviceError),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

/// A switch that received less than `i_c` while processing an applied vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnderThresholdEvent {
    /// Gate index in stage order (see [`TlgNetwork::flatten`]).
    pub gate: usize,
    pub cycle: u64,
    pub current: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub dws: Vec<DwsState>,
    /// Latched output bit per gate, in stage order.
    pub latches: Vec<bool>,
    stage_starts: Vec<usize>,
    pub cycle: u64,
    pub events: Vec<UnderThresholdEvent>,
}

impl SimState {
    pub fn stage_latches(&self, stage: usize) -> &[bool] {
        &self.latches[self.stage_starts[stage]..self.stage_starts[stage + 1]]
    }
}

#[derive(Debug, Clone, Copy)]
struct GateDevices {
    inputs: [ConductancePair; 2],
    bias: ConductancePair,
}

/// Number of MTJ/DWS weight devices per gate: two per input plus two bias.
pub fn devices_per_gate(flat: &FlatNetwork) -> Vec<usize> {
    flat.gates.iter().map(|g| 2 * g.fanins.len() + 2).collect()
}

/// Stepwise pipelined simulator.
pub struct PipelineSim {
    flat: FlatNetwork,
    params: DeviceParams,
    devices: Vec<GateDevices>,
    signals: Vec<bool>,
    next: Vec<bool>,
    /// Vector tag held by each stage's latches.
    tags: Vec<Option<u64>>,
    next_tag: u64,
    min_current: Vec<f64>,
    state: SimState,
    sensed: [bool; 2],
}

impl PipelineSim {
    pub fn new(network: &TlgNetwork, params: &DeviceParams, variation: Option<&VariationSample>) -> Result<Self, SimError> {
        if !network.is_mappable() {
            return Err(SimError::NotMappable);
        }
        let flat = network.flatten();
        if let Some(v) = variation {
            let ok = v.factors.len() == flat.gates.len()
                && v.factors.iter().zip(devices_per_gate(&flat)).all(|(f, n)| f.len() == n);
            if !ok {
                return Err(SimError::VariationShape);
            }
        }
        let mut devices = Vec::with_capacity(flat.gates.len());
        for (i, g) in flat.gates.iter().enumerate() {
            let mappable = g.fanins.len() <= 2
                && g.weights.iter().all(|w| MTL_WEIGHTS.contains(w))
                && MTL_BIASES.contains(&g.bias);
            if !mappable {
                return Err(SimError::NotMappable);
            }
            let mut pairs = [weight_to_conductance(2, params)?; 2];
            for (slot, &w) in g.weights.iter().enumerate() {
                pairs[slot] = weight_to_conductance(w, params)?;
            }
            let mut bias = weight_to_conductance(g.bias, params)?;
            if let Some(v) = variation {
                let f = &v.factors[i];
                for (slot, pair) in pairs.iter_mut().enumerate().take(g.fanins.len()) {
                    *pair = pair.with_resistance_factors(f[2 * slot], f[2 * slot + 1]);
                }
                let n = f.len();
                bias = bias.with_resistance_factors(f[n - 2], f[n - 1]);
            }
            devices.push(GateDevices { inputs: pairs, bias });
        }
        let n = flat.gates.len();
        let up = DwsState { polarity: Polarity::Up };
        let down = DwsState { polarity: Polarity::Down };
        let sensed = [sense(down, params), sense(up, params)];
        let state = SimState {
            dws: vec![down; n],
            latches: vec![sensed[0]; n],
            stage_starts: flat.stage_starts.clone(),
            cycle: 0,
            events: Vec::new(),
        };
        Ok(PipelineSim {
            signals: {
                let mut s = vec![false; flat.num_signals()];
                s[flat.num_inputs..].fill(sensed[0]);
                s
            },
            next: vec![false; n],
            tags: vec![None; flat.num_stages()],
            next_tag: 0,
            min_current: vec![f64::INFINITY; n],
            devices,
            params: *params,
            flat,
            state,
            sensed,
        })
    }

    pub fn num_stages(&self) -> usize {
        self.flat.num_stages()
    }

    pub fn state(&self) -> &SimState {
        &self.state
    }

    pub fn into_state(self) -> SimState {
        self.state
    }

    /// Per-gate minimum `|I_sum|` over evaluations of applied vectors.
    pub fn min_currents(&self) -> &[f64] {
        &self.min_current
    }

    /// Runs one clock cycle. Outputs are read at the start of the cycle and
    /// returned with the tag (0-based index) of the vector they belong to;
    /// then every stage evaluates. `None` applies a bubble (the last input
    /// is held and results are untagged).
    pub fn step(&mut self, input: Option<&[bool]>) -> Result<Option<(u64, Vec<bool>)>, SimError> {
        let ni = self.flat.num_inputs;
        if let Some(x) = input {
            if x.len() != ni {
                return Err(SimError::WidthMismatch {
                    expected: ni,
                    got: x.len(),
                });
            }
            self.signals[..ni].copy_from_slice(x);
        }
        let in_tag = input.map(|_| {
            self.next_tag += 1;
            self.next_tag - 1
        });

        let stages = self.flat.num_stages();
        if stages == 0 {
            let out = in_tag.map(|t| (t, self.read_outputs()));
            self.state.cycle += 1;
            return Ok(out);
        }
        let out = self.tags[stages - 1].map(|t| (t, self.read_outputs()));

        let p = self.params;
        let cycle = self.state.cycle;
        for (gi, g) in self.flat.gates.iter().enumerate() {
            let dev = &self.devices[gi];
            let mut branches = [(dev.inputs[0], false), (dev.inputs[1], false)];
            for (slot, &f) in g.fanins.iter().enumerate() {
                branches[slot].1 = self.signals[f];
            }
            let i_sum = sum_current(&branches[..g.fanins.len()], &dev.bias, &p);
            let upd = dws_apply(self.state.dws[gi], i_sum, &p);
            self.state.dws[gi] = upd.state;
            self.next[gi] = self.sensed[(upd.state.polarity == Polarity::Up) as usize];

            let tag = if g.stage == 0 { in_tag } else { self.tags[g.stage - 1] };
            if tag.is_some() {
                let mag = i_sum.abs();
                if mag < self.min_current[gi] {
                    self.min_current[gi] = mag;
                }
                if upd.under_threshold {
                    self.state.events.push(UnderThresholdEvent {
                        gate: gi,
                        cycle,
                        current: i_sum,
                    });
                }
            }
        }
        self.signals[ni..].copy_from_slice(&self.next);
        self.state.latches.copy_from_slice(&self.next);
        self.tags.rotate_right(1);
        self.tags[0] = in_tag;
        self.state.cycle += 1;
        Ok(out)
    }

    fn read_outputs(&self) -> Vec<bool> {
        self.flat.outputs.iter().map(|&s| self.signals[s]).collect()
    }

    /// Streams `vectors` through the pipeline and drains it.
    pub fn run(&mut self, vectors: &[Vec<bool>]) -> Result<Vec<Vec<bool>>, SimError> {
        let mut outputs = Vec::with_capacity(vectors.len());
        for v in vectors {
            if let Some((_, o)) = self.step(Some(v))? {
                outputs.push(o);
            }
        }
        while outputs.len() < vectors.len() {
            if let Some((_, o)) = self.step(None)? {
                outputs.push(o);
            }
        }
        Ok(outputs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimRun {
    /// One output vector per input vector, in order.
    pub outputs: Vec<Vec<bool>>,
    /// Cycle at which each output was read.
    pub output_cycles: Vec<u64>,
    pub state: SimState,
}

/// Simulates a whole input stream; see the module docs for timing.
pub fn simulate(
    network: &TlgNetwork,
    stream: &[Vec<bool>],
    params: &DeviceParams,
    variation: Option<&VariationSample>,
) -> Result<SimRun, SimError> {
    if stream.is_empty() {
        return Err(SimError::EmptyStream);
    }
    let mut sim = PipelineSim::new(network, params, variation)?;
    let mut outputs = Vec::with_capacity(stream.len());
    let mut output_cycles = Vec::with_capacity(stream.len());
    let mut feed = stream.iter();
    while outputs.len() < stream.len() {
        let cycle = sim.state.cycle;
        let input = feed.next().map(Vec::as_slice);
        if let Some((_, o)) = sim.step(input)? {
            outputs.push(o);
            output_cycles.push(cycle);
        }
    }
    Ok(SimRun {
        outputs,
        output_cycles,
        state: sim.into_state(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum CheckMode {
    Exhaustive,
    Random { vectors: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub vectors_tested: usize,
    pub mismatches: usize,
    /// First failing input vector as a 0/1 string.
    pub first_mismatch: Option<String>,
}

/// Test vectors for a check mode over `inputs` bits. Exhaustive order is
/// counting order with the first input as the most significant bit.
pub fn check_vectors(inputs: usize, mode: CheckMode) -> Result<Vec<Vec<bool>>, SimError> {
    match mode {
        CheckMode::Exhaustive => {
            if inputs > MAX_EXHAUSTIVE_INPUTS {
                return Err(SimError::TooManyInputs(inputs));
            }
            Ok((0..1u64 << inputs)
                .map(|v| (0..inputs).map(|i| v >> (inputs - 1 - i) & 1 == 1).collect())
                .collect())
        }
        CheckMode::Random { vectors, seed } => Ok(random_vectors(inputs, vectors, seed)),
    }
}

/// Seeded uniform random vectors.
pub fn random_vectors(inputs: usize, count: usize, seed: u64) -> Vec<Vec<bool>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..inputs).map(|_| rng.random::<bool>()).collect())
        .collect()
}

fn check_interface(netlist: &Netlist, network: &TlgNetwork) -> Result<(), SimError> {
    if netlist.inputs() != network.inputs.as_slice() {
        return Err(SimError::Interface(format!(
            "netlist has {} inputs, network has {}",
            netlist.inputs().len(),
            network.inputs.len()
        )));
    }
    let outs: Vec<&str> = network.outputs.iter().map(|o| o.name.as_str()).collect();
    if netlist.outputs().iter().map(String::as_str).ne(outs.iter().copied()) {
        return Err(SimError::Interface(format!(
            "netlist has {} outputs, network has {}",
            netlist.outputs().len(),
            outs.len()
        )));
    }
    Ok(())
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Runs the vectors through the simulated pipeline at nominal parameters and
/// compares every output with the reference evaluator.
pub fn equivalence_check(
    netlist: &Netlist,
    network: &TlgNetwork,
    mode: CheckMode,
    params: &DeviceParams,
) -> Result<EquivalenceReport, SimError> {
    check_interface(netlist, network)?;
    let vectors = check_vectors(netlist.inputs().len(), mode)?;
    let mut sim = PipelineSim::new(network, params, None)?;
    let got = sim.run(&vectors)?;
    let mut mismatches = 0;
    let mut first_mismatch = None;
    for (v, out) in vectors.iter().zip(&got) {
        if netlist.eval(v)? != *out {
            mismatches += 1;
            first_mismatch.get_or_insert_with(|| bits(v));
        }
    }
    Ok(EquivalenceReport {
        vectors_tested: vectors.len(),
        mismatches,
        first_mismatch,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    pub trials: usize,
    pub vectors_per_trial: usize,
    pub sigma_r: f64,
    /// Minimum `|I_sum|` per gate over all trials and applied vectors.
    pub per_gate_min_current: BTreeMap<String, f64>,
    pub min_current: f64,
    /// `min_current / i_c`.
    pub min_margin_ratio: f64,
    /// Trials with at least one wrong output.
    pub failure_count: usize,
    pub under_threshold_events: usize,
    /// Fraction of trials with zero functional errors.
    #[serde(rename = "yield")]
    pub yield_fraction: f64,
}

struct TrialResult {
    failed: bool,
    events: usize,
    min_current: Vec<f64>,
}

/// Static process-variation Monte Carlo. Trial `t` samples device factors
/// with seed `seed + t`, so results do not depend on execution order or on
/// `jobs` (worker threads; `None` uses the global pool).
pub fn monte_carlo(
    netlist: &Netlist,
    network: &TlgNetwork,
    params: &DeviceParams,
    trials: usize,
    vectors: &[Vec<bool>],
    seed: u64,
    jobs: Option<usize>,
) -> Result<MarginReport, SimError> {
    check_interface(netlist, network)?;
    if vectors.is_empty() {
        return Err(SimError::EmptyStream);
    }
    let trials = trials.max(1);
    let expected = vectors
        .iter()
        .map(|v| netlist.eval(v))
        .collect::<Result<Vec<_>, _>>()?;
    let flat = network.flatten();
    let counts = devices_per_gate(&flat);

    let run = |t: usize| -> Result<TrialResult, SimError> {
        let sample = mc_sample(params, &counts, seed.wrapping_add(t as u64))?;
        let mut sim = PipelineSim::new(network, params, Some(&sample))?;
        let got = sim.run(vectors)?;
        Ok(TrialResult {
            failed: got != expected,
            events: sim.state().events.len(),
            min_current: sim.min_currents().to_vec(),
        })
    };
    let results: Vec<TrialResult> = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(|| (0..trials).into_par_iter().map(run).collect::<Result<_, _>>())?,
        None => (0..trials).into_par_iter().map(run).collect::<Result<_, _>>()?,
    };

    let mut per_gate = vec![f64::INFINITY; flat.gates.len()];
    for r in &results {
        for (m, c) in per_gate.iter_mut().zip(&r.min_current) {
            *m = m.min(*c);
        }
    }
    let min_current = per_gate.iter().copied().fold(f64::INFINITY, f64::min);
    let failure_count = results.iter().filter(|r| r.failed).count();
    let names = network.gates().map(|g| g.id.clone());
    Ok(MarginReport {
        trials,
        vectors_per_trial: vectors.len(),
        sigma_r: params.sigma_r,
        per_gate_min_current: names.zip(per_gate).collect(),
        min_current,
        min_margin_ratio: min_current / params.i_c,
        failure_count,
        under_threshold_events: results.iter().map(|r| r.events).sum(),
        yield_fraction: 1.0 - failure_count as f64 / trials as f64,
    })
}

/// Reads a stream file: one vector of `0`/`1` characters per line; blank
/// lines and `#` comments are skipped.
pub fn parse_vectors(text: &str, width: usize) -> Result<Vec<Vec<bool>>, SimError> {
    text.lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            let v: Option<Vec<bool>> = l
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Some(false),
                    '1' => Some(true),
                    _ => None,
                })
                .collect();
            match v {
                Some(v) if v.len() == width => Ok(v),
                Some(v) => Err(SimError::WidthMismatch {
                    expected: width,
                    got: v.len(),
                }),
                None => Err(SimError::Interface(format!("bad vector line `{l}`"))),
            }
        })
        .collect()
}

/// Renders vectors in the stream-file format.
pub fn format_vectors(vectors: &[Vec<bool>]) -> String {
    vectors.iter().map(|v| bits(v) + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;
    use crate::tlgsynth::synthesize;

    fn net(text: &str) -> (Netlist, TlgNetwork) {
        let n = parse_bench(text).unwrap();
        let t = synthesize(&n, 2).unwrap();
        (n, t)
    }

    #[test]
    fn buffer_delays_by_one_cycle() {
        let (_, t) = net("INPUT(a)\nOUTPUT(y)\ny = BUF(a)\n");
        let stream = vec![vec![true], vec![false], vec![true]];
        let run = simulate(&t, &stream, &DeviceParams::default(), None).unwrap();
        assert_eq!(run.outputs, stream);
        assert_eq!(run.output_cycles, [1, 2, 3]);
        assert_eq!(run.state.cycle, 4);
    }

    #[test]
    fn zero_bias_difference_holds_state() {
        let (_, t) = net("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n");
        let p = DeviceParams::default();
        // bias pair (-3) = (G_ap, G_ap + 3u): scale the minus device's
        // resistance so both conduct G_ap
        let gap_plus_3u = crate::device::bias_levels(&p)[3];
        let mut v = VariationSample::nominal(&[6]);
        v.factors[0][5] = gap_plus_3u / p.g_ap();
        let stream = vec![vec![true, true], vec![false, false]];
        let run = simulate(&t, &stream, &p, Some(&v)).unwrap();
        assert_eq!(run.outputs, [vec![true], vec![true]]);
        assert_eq!(run.state.events.len(), 1);
        assert_eq!(run.state.events[0].cycle, 1);
        assert!(run.state.events[0].current.abs() < 1e-18);
    }

    #[test]
    fn rejects_bad_inputs() {
        let (_, t) = net("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n");
        let p = DeviceParams::default();
        assert_eq!(simulate(&t, &[], &p, None).unwrap_err(), SimError::EmptyStream);
        assert!(matches!(
            simulate(&t, &[vec![true, false]], &p, None),
            Err(SimError::WidthMismatch { expected: 1, got: 2 })
        ));
        let n = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(y)\ny = AND(a, b, c)\n").unwrap();
        let wide = synthesize(&n, 3).unwrap();
        assert_eq!(simulate(&wide, &[vec![true; 3]], &p, None).unwrap_err(), SimError::NotMappable);
    }

    #[test]
    fn exhaustive_limit() {
        assert_eq!(check_vectors(25, CheckMode::Exhaustive).unwrap_err(), SimError::TooManyInputs(25));
        let v = check_vectors(2, CheckMode::Exhaustive).unwrap();
        assert_eq!(v, [vec![false, false], vec![false, true], vec![true, false], vec![true, true]]);
    }

    #[test]
    fn interface_mismatch() {
        let (_, t) = net("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n");
        let other = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n").unwrap();
        assert!(matches!(
            equivalence_check(&other, &t, CheckMode::Exhaustive, &DeviceParams::default()),
            Err(SimError::Interface(_))
        ));
    }

    #[test]
    fn passthrough_is_equivalent() {
        let (n, t) = net("INPUT(a)\nINPUT(b)\nOUTPUT(b)\nOUTPUT(a)\n");
        let r = equivalence_check(&n, &t, CheckMode::Exhaustive, &DeviceParams::default()).unwrap();
        assert_eq!((r.vectors_tested, r.mismatches), (4, 0));
    }

    #[test]
    fn vector_files() {
        let v = parse_vectors("# header\n01\n1 1\n\n", 2).unwrap();
        assert_eq!(v, [vec![false, true], vec![true, true]]);
        assert_eq!(format_vectors(&v), "01\n11\n");
        assert!(parse_vectors("012\n", 3).is_err());
        assert!(matches!(parse_vectors("0\n", 2), Err(SimError::WidthMismatch { .. })));
    }
}
