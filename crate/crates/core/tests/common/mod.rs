// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use mtl::netlist::{Gate, GateFn, Netlist};
use proptest::prelude::*;

pub const FUNCS: [GateFn; 8] = [
    GateFn::And,
    GateFn::Nand,
    GateFn::Or,
    GateFn::Nor,
    GateFn::Xor,
    GateFn::Xnor,
    GateFn::Not,
    GateFn::Buf,
];

/// c17 outputs (N22, N23) for vector index v, N1 as the most significant bit.
pub const C17_GOLDEN: [&str; 32] = [
    "00", "01", "00", "01", "00", "01", "00", "00", "11", "11", "11", "11", "11", "11", "00", "00",
    "00", "01", "00", "01", "10", "11", "10", "10", "11", "11", "11", "11", "11", "11", "10", "10",
];

pub fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn vector(index: u32, width: usize) -> Vec<bool> {
    (0..width).map(|i| index >> (width - 1 - i) & 1 == 1).collect()
}

/// Random valid netlists with mixed arities, reconvergence and gates that
/// reach no output.
pub fn arb_netlist() -> impl Strategy<Value = Netlist> {
    (1usize..6, 1usize..14).prop_flat_map(|(ni, ng)| {
        let gates = (0..ng)
            .map(|j| {
                let avail = ni + j;
                (0usize..FUNCS.len(), proptest::collection::vec(0..avail, 1..6))
            })
            .collect::<Vec<_>>();
        (Just(ni), gates, proptest::collection::vec(any::<bool>(), ng))
    })
    .prop_map(|(ni, gates, mark)| {
        let inputs: Vec<String> = (0..ni).map(|i| format!("i{i}")).collect();
        let name = |k: usize| if k < ni { format!("i{k}") } else { format!("g{}", k - ni) };
        let gates: Vec<Gate> = gates
            .into_iter()
            .enumerate()
            .map(|(j, (f, mut picks))| {
                let func = FUNCS[f];
                if func.is_unary() {
                    picks.truncate(1);
                } else if picks.len() == 1 {
                    picks.push(picks[0]);
                }
                Gate {
                    id: format!("g{j}"),
                    func,
                    fanins: picks.into_iter().map(name).collect(),
                }
            })
            .collect();
        let last = gates.len() - 1;
        let mut outputs: Vec<String> = mark
            .iter()
            .enumerate()
            .filter(|&(j, &m)| m && j != last)
            .map(|(j, _)| format!("g{j}"))
            .collect();
        outputs.push(format!("g{last}"));
        Netlist::new("rand", inputs, outputs, gates).expect("generated netlist is valid")
    })
}
