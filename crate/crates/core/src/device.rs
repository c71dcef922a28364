// SPDX-License-Identifier: Apache-2.0

//! Electrical model of a magnetic threshold logic gate.
//!
//! Each input weight is a pair of MTJ conductances `(G+, G-)` driven by
//! `+dV` and `-dV` when the input is high; the bias is a pair of 2-bit
//! (4-level) domain-wall devices tied to fixed `+dV` / `-dV`. The net current
//! into the thresholding domain-wall switch (DWS) is
//!
//! ```text
//! I_sum = dV * ( sum_i in_i * (G_i+ - G_i-) + (G_b+ - G_b-) )
//! ```
//!
//! and the switch's free domain follows the sign of `I_sum` whenever
//! `|I_sum| >= i_c`. The result is read through a voltage divider against a
//! reference MTJ of `2 * r_p`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeviceError {
    #[error("weight {0} is outside the device alphabet (+-2 inputs, +-1/+-3 bias)")]
    WeightOutOfAlphabet(i32),
    #[error("sigma_r must be non-negative, got {0}")]
    NegativeSigma(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },
}

/// Electrical constants, SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    /// Input signalling level dV.
    pub delta_v: f64,
    /// Parallel resistance of the weight MTJs.
    pub r_p: f64,
    /// Tunnel magnetoresistance ratio (R_ap - R_p) / R_p.
    pub tmr: f64,
    /// DWS switching threshold current.
    pub i_c: f64,
    /// DWS switching time at threshold.
    pub t_sw: f64,
    /// Pipeline clock period.
    pub t_clk: f64,
    /// Readout supply.
    pub vdd: f64,
    /// Average divider power while reading.
    pub p_div: f64,
    /// Capacitance of a maximum-length net.
    pub c_wire: f64,
    /// Resistance of a maximum-length net.
    pub r_wire: f64,
    pub r_on: f64,
    pub r_off: f64,
    /// Relative MTJ resistance spread (std / mean).
    pub sigma_r: f64,
    /// Correlation of device variations within one gate.
    pub rho: f64,
    /// Per-net transition probability per cycle.
    pub activity: f64,
    /// Maximum interconnect length.
    pub max_length: f64,
    /// Crossbar pitch; 0 selects `max_length / max(rows, cols)`.
    pub pitch: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        DeviceParams {
            delta_v: 50e-3,
            r_p: 12e3,
            tmr: 3.0,
            i_c: 1.4e-6,
            t_sw: 1e-9,
            t_clk: 2e-9,
            vdd: 1.0,
            p_div: 0.3e-6,
            c_wire: 10e-15,
            r_wire: 100.0,
            r_on: 200.0,
            r_off: 1e6,
            sigma_r: 0.0,
            rho: 0.9,
            activity: 0.8,
            max_length: 50e-6,
            pitch: 0.0,
        }
    }
}

impl DeviceParams {
    /// Conductance of a parallel-state MTJ.
    pub fn g_p(&self) -> f64 {
        1.0 / self.r_p
    }

    /// Conductance of an anti-parallel-state MTJ.
    pub fn g_ap(&self) -> f64 {
        1.0 / (self.r_p * (1.0 + self.tmr))
    }

    /// One weight unit of conductance difference, `(G_p - G_ap) / 2`.
    pub fn unit_conductance(&self) -> f64 {
        (self.g_p() - self.g_ap()) / 2.0
    }

    /// `dV * u_g`: the smallest net current any mapped gate produces.
    pub fn unit_current(&self) -> f64 {
        self.delta_v * self.unit_conductance()
    }

    /// Reference resistance of the read divider.
    pub fn r_ref(&self) -> f64 {
        2.0 * self.r_p
    }

    pub fn validate(&self) -> Result<(), DeviceError> {
        let positive: [(&'static str, f64); 9] = [
            ("r_p", self.r_p),
            ("tmr", self.tmr),
            ("i_c", self.i_c),
            ("t_sw", self.t_sw),
            ("t_clk", self.t_clk),
            ("vdd", self.vdd),
            ("r_on", self.r_on),
            ("r_off", self.r_off),
            ("max_length", self.max_length),
        ];
        let non_negative: [(&'static str, f64); 6] = [
            ("delta_v", self.delta_v),
            ("p_div", self.p_div),
            ("c_wire", self.c_wire),
            ("r_wire", self.r_wire),
            ("sigma_r", self.sigma_r),
            ("pitch", self.pitch),
        ];
        let invalid = |name, reason: &str| DeviceError::InvalidParam {
            name,
            reason: reason.to_owned(),
        };
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, "must be positive"));
            }
        }
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(name, "must be non-negative"));
            }
        }
        if self.r_on >= self.r_off {
            return Err(invalid("r_on", "must be below r_off"));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(invalid("rho", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.activity) {
            return Err(invalid("activity", "must lie in [0, 1]"));
        }
        if self.t_sw > self.t_clk / 2.0 {
            return Err(invalid("t_sw", "must fit in the write phase (t_clk / 2)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviceKind {
    /// Two 1-bit MTJs realizing an input weight.
    OneBitPair,
    /// Two 2-bit (4-level) domain-wall devices realizing the bias.
    TwoBitBias,
}

/// `(G+, G-)` realizing one signed weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConductancePair {
    pub g_plus: f64,
    pub g_minus: f64,
    pub kind: DeviceKind,
}

impl ConductancePair {
    pub fn difference(&self) -> f64 {
        self.g_plus - self.g_minus
    }

    /// Same pair with each device's resistance scaled by its factor.
    pub fn with_resistance_factors(&self, plus: f64, minus: f64) -> Self {
        ConductancePair {
            g_plus: self.g_plus / plus,
            g_minus: self.g_minus / minus,
            kind: self.kind,
        }
    }
}

/// The four conductance levels of a 2-bit bias device:
/// `G_ap + k * u_g` for `k = 0..=3`.
pub fn bias_levels(params: &DeviceParams) -> [f64; 4] {
    let (g, u) = (params.g_ap(), params.unit_conductance());
    [g, g + u, g + 2.0 * u, g + 3.0 * u]
}

/// Programs a weight (+-2) or bias (+-1, +-3) onto device conductances.
pub fn weight_to_conductance(w: i32, params: &DeviceParams) -> Result<ConductancePair, DeviceError> {
    let (gp, gap) = (params.g_p(), params.g_ap());
    let lv = bias_levels(params);
    let (g_plus, g_minus, kind) = match w {
        2 => (gp, gap, DeviceKind::OneBitPair),
        -2 => (gap, gp, DeviceKind::OneBitPair),
        3 => (lv[3], lv[0], DeviceKind::TwoBitBias),
        1 => (lv[2], lv[1], DeviceKind::TwoBitBias),
        -1 => (lv[1], lv[2], DeviceKind::TwoBitBias),
        -3 => (lv[0], lv[3], DeviceKind::TwoBitBias),
        _ => return Err(DeviceError::WeightOutOfAlphabet(w)),
    };
    Ok(ConductancePair {
        g_plus,
        g_minus,
        kind,
    })
}

/// Net current into the DWS input node. Bias is always active.
pub fn sum_current(inputs: &[(ConductancePair, bool)], bias: &ConductancePair, params: &DeviceParams) -> f64 {
    let g: f64 = inputs
        .iter()
        .filter(|(_, active)| *active)
        .map(|(p, _)| p.difference())
        .sum();
    params.delta_v * (g + bias.difference())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    /// Output logic 1; free domain anti-parallel to the reference layer.
    Up,
    /// Output logic 0; parallel.
    Down,
}

impl Polarity {
    pub fn of(current: f64) -> Self {
        if current > 0.0 {
            Polarity::Up
        } else {
            Polarity::Down
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Polarity::Up => 1,
            Polarity::Down => -1,
        }
    }
}

/// Free-domain state of a thresholding domain-wall switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DwsState {
    pub polarity: Polarity,
}

impl Default for DwsState {
    fn default() -> Self {
        DwsState {
            polarity: Polarity::Down,
        }
    }
}

impl DwsState {
    pub fn read_resistance(&self, params: &DeviceParams) -> f64 {
        match self.polarity {
            Polarity::Up => params.r_p * (1.0 + params.tmr),
            Polarity::Down => params.r_p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DwsUpdate {
    pub state: DwsState,
    pub switched: bool,
    /// `|I_sum| < i_c`: the domain did not move and the old state is kept.
    pub under_threshold: bool,
}

/// Applies one write-phase current pulse.
pub fn dws_apply(state: DwsState, i_sum: f64, params: &DeviceParams) -> DwsUpdate {
    if i_sum.abs() < params.i_c {
        return DwsUpdate {
            state,
            switched: false,
            under_threshold: true,
        };
    }
    let polarity = Polarity::of(i_sum);
    DwsUpdate {
        state: DwsState { polarity },
        switched: polarity != state.polarity,
        under_threshold: false,
    }
}

/// Divider output `vdd * R_dws / (R_dws + 2 r_p)`.
pub fn read_divider(state: DwsState, params: &DeviceParams) -> f64 {
    let r = state.read_resistance(params);
    params.vdd * r / (r + params.r_ref())
}

/// Logic level sensed from the divider by an ideal inverter at `vdd / 2`.
pub fn sense(state: DwsState, params: &DeviceParams) -> bool {
    read_divider(state, params) > params.vdd / 2.0
}

/// Per-gate, per-device multiplicative resistance factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationSample {
    pub factors: Vec<Vec<f64>>,
}

impl VariationSample {
    pub fn nominal(devices_per_gate: &[usize]) -> Self {
        VariationSample {
            factors: devices_per_gate.iter().map(|&n| vec![1.0; n]).collect(),
        }
    }
}

/// Truncation of the standard normal draws, in standard deviations.
pub const TRUNCATION: f64 = 4.0;
/// Floor on sampled resistance factors; resistance stays positive at
/// large sigma.
pub const MIN_FACTOR: f64 = 0.01;

fn truncated_normal(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let z: f64 = rng.sample(StandardNormal);
        if z.abs() <= TRUNCATION {
            return z;
        }
    }
}

/// Draws resistance factors `1 + sigma_r * x` with
/// `x = sqrt(rho) * z_gate + sqrt(1 - rho) * z_device`, so devices in one
/// gate share a component with correlation `rho`.
pub fn mc_sample(params: &DeviceParams, devices_per_gate: &[usize], seed: u64) -> Result<VariationSample, DeviceError> {
    if params.sigma_r < 0.0 || params.sigma_r.is_nan() {
        return Err(DeviceError::NegativeSigma(params.sigma_r));
    }
    if params.sigma_r == 0.0 {
        return Ok(VariationSample::nominal(devices_per_gate));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (shared, own) = (params.rho.sqrt(), (1.0 - params.rho).sqrt());
    let factors = devices_per_gate
        .iter()
        .map(|&n| {
            let zg = truncated_normal(&mut rng);
            (0..n)
                .map(|_| {
                    let x = (shared * zg + own * truncated_normal(&mut rng)).clamp(-TRUNCATION, TRUNCATION);
                    (1.0 + params.sigma_r * x).max(MIN_FACTOR)
                })
                .collect()
        })
        .collect();
    Ok(VariationSample { factors })
}
