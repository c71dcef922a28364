// SPDX-License-Identifier: Apache-2.0

use std::collections::HashSet;

use super::decompose::fresh;
use super::{Mapping, OutputPort, Role, SynthError, TlgGate, TlgGraph, MTL_FANIN};
use crate::netlist::{GateFn, Netlist};

/// `(weight, bias)` of a threshold realization of a linearly separable
/// function with `n` inputs.
type Realization = fn(GateFn, usize) -> (i32, i32);

// Device alphabet: weights +-2, odd bias in [-3, 3]. The weighted sum is
// odd, so it is never zero and the smallest |sum| is 1.
fn mtl_realization(func: GateFn, n: usize) -> (i32, i32) {
    debug_assert!(n <= MTL_FANIN);
    match (func, n) {
        (GateFn::And, 2) => (2, -3),
        (GateFn::Or, 2) => (2, -1),
        (GateFn::Nand, 2) => (-2, 3),
        (GateFn::Nor, 2) => (-2, 1),
        (GateFn::Not, 1) => (-2, 1),
        (GateFn::Buf, 1) => (2, -1),
        _ => unreachable!("{func} with {n} inputs has no device realization"),
    }
}

// Unit weights; used only for the wider fan-in comparison networks.
fn unit_realization(func: GateFn, n: usize) -> (i32, i32) {
    let n = n as i32;
    match func {
        GateFn::And => (1, -(n - 1)),
        GateFn::Or => (1, 0),
        GateFn::Nand => (-1, n),
        GateFn::Nor => (-1, 1),
        GateFn::Not => (-1, 1),
        GateFn::Buf => (1, 0),
        _ => unreachable!("{func} is not a threshold function"),
    }
}

/// Maps a fan-in <= 2 netlist onto device-mappable TLGs.
///
/// | gate | weights   | bias |
/// |------|-----------|------|
/// | AND  | [+2, +2]  | -3   |
/// | OR   | [+2, +2]  | -1   |
/// | NAND | [-2, -2]  | +3   |
/// | NOR  | [-2, -2]  | +1   |
/// | NOT  | [-2]      | +1   |
/// | BUF  | [+2]      | -1   |
///
/// `XOR(a, b)` expands to `AND(OR(a, b), NAND(a, b))`; XNOR is that
/// expansion followed by a NOT gate.
pub fn map_tlg(netlist: &Netlist) -> Result<TlgGraph, SynthError> {
    map_with(netlist, MTL_FANIN, Mapping::Mtl, mtl_realization)
}

/// Maps a fan-in <= `max_fanin` netlist onto unit-weight TLGs. The result
/// is flagged [`Mapping::LogicalOnly`].
pub fn map_logical(netlist: &Netlist, max_fanin: usize) -> Result<TlgGraph, SynthError> {
    map_with(netlist, max_fanin, Mapping::LogicalOnly, unit_realization)
}

fn map_with(
    netlist: &Netlist,
    max_fanin: usize,
    mapping: Mapping,
    realize: Realization,
) -> Result<TlgGraph, SynthError> {
    let mut names: HashSet<String> = netlist
        .inputs()
        .iter()
        .chain(netlist.gates().iter().map(|g| &g.id))
        .cloned()
        .collect();
    let mut gates = Vec::with_capacity(netlist.gates().len());
    let mut emit = |id: String, func: GateFn, fanins: Vec<String>| {
        let (w, b) = realize(func, fanins.len());
        let weights = vec![w; fanins.len()];
        gates.push(TlgGate::new(id, fanins, weights, b, Role::Logic));
    };

    for gate in netlist.topo_order() {
        let n = gate.fanins.len();
        let limit = if gate.func.base().0 == GateFn::Xor { 2 } else { max_fanin };
        if n > limit {
            return Err(SynthError::FaninExceeded {
                gate: gate.id.clone(),
                count: n,
                max: limit,
            });
        }
        // single-input forms of multi-input functions
        let func = match (gate.func.base(), n) {
            ((_, false), 1) => GateFn::Buf,
            ((_, true), 1) => GateFn::Not,
            _ => gate.func,
        };
        match func {
            GateFn::Xor | GateFn::Xnor => {
                let or = fresh(&mut names, &gate.id, "or");
                let nand = fresh(&mut names, &gate.id, "nand");
                emit(or.clone(), GateFn::Or, gate.fanins.clone());
                emit(nand.clone(), GateFn::Nand, gate.fanins.clone());
                if func == GateFn::Xor {
                    emit(gate.id.clone(), GateFn::And, vec![or, nand]);
                } else {
                    let xor = fresh(&mut names, &gate.id, "xor");
                    emit(xor.clone(), GateFn::And, vec![or, nand]);
                    emit(gate.id.clone(), GateFn::Not, vec![xor]);
                }
            }
            f => emit(gate.id.clone(), f, gate.fanins.clone()),
        }
    }

    Ok(TlgGraph {
        name: netlist.name().to_owned(),
        inputs: netlist.inputs().to_vec(),
        outputs: netlist
            .outputs()
            .iter()
            .map(|o| OutputPort {
                name: o.clone(),
                driver: o.clone(),
            })
            .collect(),
        gates,
        mapping,
        max_fanin,
    })
}
