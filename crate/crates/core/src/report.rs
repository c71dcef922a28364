// SPDX-License-Identifier: Apache-2.0

//! Energy, delay and EDP accounting, and comparison with the 4-input
//! CMOS-LUT FPGA baseline.
//!
//! Per gate and cycle the summation path dissipates
//! `dV^2 * (G+ + G-) * t_sw` in every active branch (the bias branch is
//! always active), and the read divider dissipates `p_div * t_clk`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::device::{weight_to_conductance, DeviceParams};
use crate::interconnect::{interconnect_energy, Rail, Routing};
use crate::netlist::Netlist;
use crate::tlgsynth::TlgNetwork;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error("no input vectors supplied")]
    EmptyVectors,
    #[error("network is not device-mappable")]
    NotMappable,
    #[error("input vector has {got} bits, network has {expected} inputs")]
    WidthMismatch { expected: usize, got: usize },
    #[error("baseline entry `{0}` has a non-positive value")]
    InvalidBaseline(String),
}

/// Average energy per cycle of every gate, in stage order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateEnergy {
    pub summation: Vec<f64>,
    pub divider: f64,
}

impl GateEnergy {
    pub fn total(&self, gate: usize) -> f64 {
        self.summation[gate] + self.divider
    }

    pub fn mean_summation(&self) -> f64 {
        if self.summation.is_empty() {
            return 0.0;
        }
        self.summation.iter().sum::<f64>() / self.summation.len() as f64
    }

    pub fn mean_total(&self) -> f64 {
        self.mean_summation() + self.divider
    }
}

/// Per-gate energy averaged over `vectors`; gate inputs take the values
/// the network computes for each vector.
pub fn gate_energy(network: &TlgNetwork, params: &DeviceParams, vectors: &[Vec<bool>]) -> Result<GateEnergy, ReportError> {
    if vectors.is_empty() {
        return Err(ReportError::EmptyVectors);
    }
    if !network.is_mappable() {
        return Err(ReportError::NotMappable);
    }
    let flat = network.flatten();
    let branch = |w: i32| -> Result<f64, ReportError> {
        let pair = weight_to_conductance(w, params).map_err(|_| ReportError::NotMappable)?;
        Ok(params.delta_v.powi(2) * (pair.g_plus + pair.g_minus) * params.t_sw)
    };
    let costs = flat
        .gates
        .iter()
        .map(|g| {
            let inputs = g.weights.iter().map(|&w| branch(w)).collect::<Result<Vec<_>, _>>()?;
            Ok((inputs, branch(g.bias)?))
        })
        .collect::<Result<Vec<_>, ReportError>>()?;

    let mut acc = vec![0.0; flat.gates.len()];
    for v in vectors {
        let values = flat.signal_values(v).ok_or(ReportError::WidthMismatch {
            expected: flat.num_inputs,
            got: v.len(),
        })?;
        for (gi, g) in flat.gates.iter().enumerate() {
            let (inputs, bias) = &costs[gi];
            let active: f64 = g
                .fanins
                .iter()
                .zip(inputs)
                .filter(|(&f, _)| values[f])
                .map(|(_, e)| e)
                .sum();
            acc[gi] += active + bias;
        }
    }
    let n = vectors.len() as f64;
    Ok(GateEnergy {
        summation: acc.into_iter().map(|e| e / n).collect(),
        divider: params.p_div * params.t_clk,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub benchmark: String,
    pub logic_gates: usize,
    pub buffers: usize,
    pub gate_count: usize,
    pub stages: usize,
    pub fanouts: usize,
    /// Mean over gates, per computation.
    pub summation_energy_per_gate: f64,
    pub divider_energy_per_gate: f64,
    pub energy_per_gate: f64,
    /// Network totals per computation; they sum to `total_energy`.
    pub summation_energy: f64,
    pub divider_energy: f64,
    pub interconnect_energy: f64,
    pub total_energy: f64,
    pub interconnect_share: f64,
    /// `stages * t_clk`.
    pub latency: f64,
    /// `t_clk`: one result per cycle.
    pub throughput_period: f64,
    /// `total_energy * throughput_period`.
    pub energy_delay_product: f64,
    /// OFF-crosspoint leakage estimate, excluded from `total_energy`.
    pub sneak_power: f64,
}

/// Energy per computation of a routed network.
pub fn network_report(
    netlist: &Netlist,
    network: &TlgNetwork,
    routing: &Routing,
    params: &DeviceParams,
    vectors: &[Vec<bool>],
) -> Result<EnergyReport, ReportError> {
    let ge = gate_energy(network, params, vectors)?;
    let stats = network.stats();
    let gate_count = network.gate_count();
    let summation_energy: f64 = ge.summation.iter().sum();
    let divider_energy = ge.divider * gate_count as f64;
    let interconnect = interconnect_energy(&routing.nets, params, 1);
    let total = summation_energy + divider_energy + interconnect;
    Ok(EnergyReport {
        benchmark: netlist.name().to_owned(),
        logic_gates: stats.logic_gates,
        buffers: stats.buffers,
        gate_count,
        stages: stats.stages,
        fanouts: routing.nets.iter().filter(|n| n.rail == Rail::Plus).count(),
        summation_energy_per_gate: ge.mean_summation(),
        divider_energy_per_gate: ge.divider,
        energy_per_gate: ge.mean_total(),
        summation_energy,
        divider_energy,
        interconnect_energy: interconnect,
        total_energy: total,
        interconnect_share: if total > 0.0 { interconnect / total } else { 0.0 },
        latency: stats.stages as f64 * params.t_clk,
        throughput_period: params.t_clk,
        energy_delay_product: total * params.t_clk,
        sneak_power: routing.plan.sneak_power(params),
    })
}

/// One row of the CMOS-LUT comparison table. Delays in ns, energies in fJ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineEntry {
    pub benchmark: String,
    #[serde(default)]
    pub inputs: Option<usize>,
    #[serde(default)]
    pub outputs: Option<usize>,
    pub lut_delay_ns: f64,
    pub lut_energy_fj: f64,
    pub mtl_delay_ns: f64,
    pub mtl_energy_fj: f64,
    /// Reduction percentages as printed in the source table.
    #[serde(default)]
    pub reported_energy_reduction_pct: Option<f64>,
    #[serde(default)]
    pub reported_edp_reduction_pct: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub energy_reduction_pct: f64,
    pub edp_reduction_pct: f64,
}

/// Percent reduction of energy and energy-delay product relative to the
/// LUT columns of `baseline`.
pub fn compare_baseline(mtl_energy_fj: f64, mtl_delay_ns: f64, baseline: &BaselineEntry) -> Result<Comparison, ReportError> {
    let vals = [baseline.lut_delay_ns, baseline.lut_energy_fj, mtl_energy_fj, mtl_delay_ns];
    if vals.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(ReportError::InvalidBaseline(baseline.benchmark.clone()));
    }
    Ok(Comparison {
        energy_reduction_pct: 100.0 * (1.0 - mtl_energy_fj / baseline.lut_energy_fj),
        edp_reduction_pct: 100.0
            * (1.0 - mtl_energy_fj * mtl_delay_ns / (baseline.lut_energy_fj * baseline.lut_delay_ns)),
    })
}

impl BaselineEntry {
    /// Comparison using the entry's own MTL columns.
    pub fn table_comparison(&self) -> Result<Comparison, ReportError> {
        compare_baseline(self.mtl_energy_fj, self.mtl_delay_ns, self)
    }
}

/// Aligned text table with the baseline's columns plus our gate counts.
pub fn format_table(rows: &[(EnergyReport, Option<BaselineEntry>)]) -> String {
    let mut s = format!(
        "{:<10} {:>7} {:>7} {:>8} {:>8} {:>8} {:>8} {:>11} {:>10} {:>8} {:>8}\n",
        "benchmark", "#input", "#output", "#gates", "#stages", "LUT ns", "MTL ns", "LUT fJ", "MTL fJ", "%energy", "%EDP"
    );
    for (r, base) in rows {
        let mtl_fj = r.total_energy * 1e15;
        let mtl_ns = r.throughput_period * 1e9;
        let dash = || "-".to_string();
        let (ins, outs, lut_ns, lut_fj, e, edp) = match base {
            Some(b) => {
                let c = compare_baseline(mtl_fj, mtl_ns, b).ok();
                (
                    b.inputs.map_or_else(dash, |v| v.to_string()),
                    b.outputs.map_or_else(dash, |v| v.to_string()),
                    format!("{:.2}", b.lut_delay_ns),
                    format!("{:.2}", b.lut_energy_fj),
                    c.map_or_else(dash, |c| format!("{:.2}", c.energy_reduction_pct)),
                    c.map_or_else(dash, |c| format!("{:.2}", c.edp_reduction_pct)),
                )
            }
            None => (dash(), dash(), dash(), dash(), dash(), dash()),
        };
        s.push_str(&format!(
            "{:<10} {:>7} {:>7} {:>8} {:>8} {:>8} {:>8.2} {:>11} {:>10.1} {:>8} {:>8}\n",
            r.benchmark, ins, outs, r.gate_count, r.stages, lut_ns, mtl_ns, lut_fj, mtl_fj, e, edp
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;
    use crate::tlgsynth::synthesize;
    use approx::assert_relative_eq;

    fn entry(lut_e: f64, lut_d: f64) -> BaselineEntry {
        BaselineEntry {
            benchmark: "x".into(),
            inputs: None,
            outputs: None,
            lut_delay_ns: lut_d,
            lut_energy_fj: lut_e,
            mtl_delay_ns: 2.0,
            mtl_energy_fj: 510.0,
            reported_energy_reduction_pct: None,
            reported_edp_reduction_pct: None,
        }
    }

    #[test]
    fn baseline_examples() {
        let c = compare_baseline(510.0, 2.0, &entry(17362.56, 10.1)).unwrap();
        assert_relative_eq!(c.energy_reduction_pct, 97.0627, epsilon = 1e-4);
        assert_relative_eq!(c.edp_reduction_pct, 99.4184, epsilon = 1e-4);
        let c = compare_baseline(1350.0, 2.0, &entry(56930.13, 11.55)).unwrap();
        assert!((c.energy_reduction_pct - 97.63).abs() < 0.01);
        assert!((c.edp_reduction_pct - 99.59).abs() < 0.01);
        let c = compare_baseline(100.0, 3.0, &entry(100.0, 3.0)).unwrap();
        assert_eq!((c.energy_reduction_pct, c.edp_reduction_pct), (0.0, 0.0));
        assert!(compare_baseline(1.0, 1.0, &entry(0.0, 3.0)).is_err());
        assert!(compare_baseline(1.0, 1.0, &entry(10.0, -3.0)).is_err());
    }

    #[test]
    fn empty_vectors_rejected() {
        let n = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n").unwrap();
        let t = synthesize(&n, 2).unwrap();
        assert_eq!(gate_energy(&t, &DeviceParams::default(), &[]), Err(ReportError::EmptyVectors));
    }

    #[test]
    fn zero_signalling_means_zero_summation() {
        let n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n").unwrap();
        let t = synthesize(&n, 2).unwrap();
        let p = DeviceParams {
            delta_v: 0.0,
            ..DeviceParams::default()
        };
        let e = gate_energy(&t, &p, &[vec![true, true], vec![false, true]]).unwrap();
        assert_eq!(e.summation, [0.0]);
        assert_relative_eq!(e.divider, 0.6e-15, max_relative = 1e-12);
    }
}
