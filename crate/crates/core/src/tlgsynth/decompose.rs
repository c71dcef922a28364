// SPDX-License-Identifier: Apache-2.0

use std::collections::{HashSet, VecDeque};

use crate::netlist::{Gate, GateFn, Netlist};

/// Restricts every gate to at most `max_fanin` inputs.
///
/// Wide AND/OR gates become balanced trees of the same function; NAND/NOR
/// become AND/OR trees with the inversion kept at the root. XOR/XNOR always
/// become binary parity trees, because the threshold expansion of XOR is
/// only defined for two inputs. Single-input AND/OR/XOR collapse to BUF and
/// their inverting forms to NOT.
///
/// Trees are built k-ary-Huffman style over equal weights: the first merge
/// takes `((n - 2) mod (k - 1)) + 2` operands, later merges take `k`. This
/// gives the minimum gate count `ceil((n - 1) / (k - 1))` at minimum depth.
pub fn decompose(netlist: &Netlist, max_fanin: usize) -> Netlist {
    assert!(max_fanin >= 2, "fan-in bound must be at least 2");
    let mut names: HashSet<String> = netlist
        .inputs()
        .iter()
        .chain(netlist.gates().iter().map(|g| &g.id))
        .cloned()
        .collect();
    let mut out = Vec::with_capacity(netlist.gates().len());

    for gate in netlist.gates() {
        let n = gate.fanins.len();
        let (base, invert) = gate.func.base();
        if n == 1 {
            let func = if invert { GateFn::Not } else { GateFn::Buf };
            out.push(Gate {
                id: gate.id.clone(),
                func,
                fanins: gate.fanins.clone(),
            });
            continue;
        }
        let k = if base == GateFn::Xor { 2 } else { max_fanin };
        if n <= k {
            out.push(gate.clone());
            continue;
        }

        let mut queue: VecDeque<(String, usize)> =
            gate.fanins.iter().cloned().zip(0..).collect();
        let mut first = ((n - 2) % (k - 1)) + 2;
        while queue.len() > k {
            let take = std::mem::replace(&mut first, k);
            let mut group: Vec<(String, usize)> = queue.drain(..take).collect();
            group.sort_by_key(|(_, pos)| *pos);
            let pos = group[0].1;
            let id = fresh(&mut names, &gate.id, "t");
            out.push(Gate {
                id: id.clone(),
                func: base,
                fanins: group.into_iter().map(|(s, _)| s).collect(),
            });
            queue.push_back((id, pos));
        }
        let mut root: Vec<(String, usize)> = queue.into_iter().collect();
        root.sort_by_key(|(_, pos)| *pos);
        out.push(Gate {
            id: gate.id.clone(),
            func: gate.func,
            fanins: root.into_iter().map(|(s, _)| s).collect(),
        });
    }

    Netlist::new(
        netlist.name(),
        netlist.inputs().to_vec(),
        netlist.outputs().to_vec(),
        out,
    )
    .expect("decomposition preserves netlist validity")
}

pub(crate) fn fresh(names: &mut HashSet<String>, base: &str, tag: &str) -> String {
    (0..)
        .map(|i| format!("{base}${tag}{i}"))
        .find(|c| !names.contains(c))
        .inspect(|c| {
            names.insert(c.clone());
        })
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;

    fn exhaustive_equal(a: &Netlist, b: &Netlist) -> bool {
        let k = a.inputs().len();
        (0..1u32 << k).all(|v| {
            let x: Vec<bool> = (0..k).map(|i| v >> i & 1 == 1).collect();
            a.eval(&x).unwrap() == b.eval(&x).unwrap()
        })
    }

    #[test]
    fn and4_becomes_three_and2() {
        let n = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\nOUTPUT(y)\ny = AND(a, b, c, d)\n").unwrap();
        let d = decompose(&n, 2);
        assert_eq!(d.gates().len(), 3);
        assert!(d.gates().iter().all(|g| g.func == GateFn::And && g.fanins.len() == 2));
        assert!(exhaustive_equal(&n, &d));
    }

    #[test]
    fn nand2_unchanged() {
        let n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)\n").unwrap();
        assert_eq!(decompose(&n, 2), n);
    }

    #[test]
    fn nor3_is_or_then_nor() {
        let n = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(y)\ny = NOR(a, b, c)\n").unwrap();
        let d = decompose(&n, 2);
        let g = d.gates();
        assert_eq!(g.len(), 2);
        assert_eq!((g[0].func, g[0].fanins.clone()), (GateFn::Or, vec!["a".into(), "b".into()]));
        assert_eq!((g[1].func, g[1].fanins.clone()), (GateFn::Nor, vec![g[0].id.clone(), "c".into()]));
        assert!(exhaustive_equal(&n, &d));
    }

    #[test]
    fn gate_counts_are_minimal_and_non_increasing_in_k() {
        for n in 2..=16usize {
            let ins: Vec<String> = (0..n).map(|i| format!("i{i}")).collect();
            let text: String = ins.iter().map(|a| format!("INPUT({a})\n")).collect::<String>()
                + &format!("OUTPUT(y)\ny = NAND({})\n", ins.join(", "));
            let net = parse_bench(&text).unwrap();
            let mut prev = usize::MAX;
            for k in 2..=4 {
                let count = decompose(&net, k).gates().len();
                assert_eq!(count, (n - 1).div_ceil(k - 1), "n={n} k={k}");
                assert!(count <= prev);
                prev = count;
            }
        }
    }

    #[test]
    fn tree_depth_is_logarithmic() {
        let ins: Vec<String> = (0..9).map(|i| format!("i{i}")).collect();
        let text: String = ins.iter().map(|a| format!("INPUT({a})\n")).collect::<String>()
            + &format!("OUTPUT(y)\ny = OR({})\n", ins.join(", "));
        let d = decompose(&parse_bench(&text).unwrap(), 2);
        let mut depth = std::collections::HashMap::new();
        for g in d.topo_order() {
            let lvl = g.fanins.iter().map(|f| depth.get(f).copied().unwrap_or(0)).max().unwrap() + 1;
            depth.insert(g.id.clone(), lvl);
        }
        assert_eq!(depth["y"], 4);
    }

    #[test]
    fn wide_xor_is_binary_parity() {
        let n = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\nINPUT(e)\nOUTPUT(y)\ny = XNOR(a, b, c, d, e)\n").unwrap();
        for k in 2..=4 {
            let d = decompose(&n, k);
            assert!(d.gates().iter().all(|g| g.fanins.len() == 2));
            assert!(exhaustive_equal(&n, &d));
        }
    }

    #[test]
    fn single_input_gates_collapse() {
        let n = parse_bench("INPUT(a)\nOUTPUT(y)\nOUTPUT(z)\ny = NAND(a)\nz = XOR(a)\n").unwrap();
        let d = decompose(&n, 2);
        assert_eq!(d.gates()[0].func, GateFn::Not);
        assert_eq!(d.gates()[1].func, GateFn::Buf);
        assert!(exhaustive_equal(&n, &d));
    }
}
