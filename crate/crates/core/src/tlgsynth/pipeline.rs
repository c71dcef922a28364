// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, HashMap, HashSet};

use super::{OutputPort, TlgGate, TlgGraph, TlgNetwork};

/// Assigns every gate to a pipeline stage and inserts buffer TLGs so that
/// each gate reads only the previous stage and every output leaves the last
/// stage.
///
/// Gates are scheduled as soon as possible (stage = 1 + deepest fanin,
/// primary inputs at stage -1). A producer needed
/// later than the next stage gets one buffer chain; all consumers at the same
/// stage share the chain element of that stage.
pub fn pipeline(graph: &TlgGraph) -> TlgNetwork {
    let mut stage_of: HashMap<&str, isize> = HashMap::new();
    for i in &graph.inputs {
        stage_of.insert(i, -1);
    }
    let mut gate_stage = Vec::with_capacity(graph.gates.len());
    for g in &graph.gates {
        let s = g.fanins.iter().map(|f| stage_of[f.as_str()]).max().unwrap_or(-1) + 1;
        stage_of.insert(&g.id, s);
        gate_stage.push(s as usize);
    }
    let depth = gate_stage.iter().map(|s| s + 1).max().unwrap_or(0);

    // latest stage at which each producer must be visible
    let mut need: HashMap<&str, isize> = HashMap::new();
    for (g, &s) in graph.gates.iter().zip(&gate_stage) {
        for f in &g.fanins {
            let e = need.entry(f.as_str()).or_insert(isize::MIN);
            *e = (*e).max(s as isize - 1);
        }
    }
    if depth > 0 {
        for o in &graph.outputs {
            let e = need.entry(o.driver.as_str()).or_insert(isize::MIN);
            *e = (*e).max(depth as isize - 1);
        }
    }

    let mut names: HashSet<String> = graph
        .inputs
        .iter()
        .chain(graph.gates.iter().map(|g| &g.id))
        .cloned()
        .collect();
    let mut buffers: Vec<Vec<TlgGate>> = vec![Vec::new(); depth];
    let mut copies: HashMap<(&str, isize), String> = HashMap::new();
    let producers = graph
        .inputs
        .iter()
        .map(String::as_str)
        .chain(graph.gates.iter().map(|g| g.id.as_str()));
    for p in producers {
        let from = stage_of[p];
        copies.insert((p, from), p.to_owned());
        let Some(&to) = need.get(p) else { continue };
        let mut prev = p.to_owned();
        for k in from + 1..=to {
            let id = unique(&mut names, format!("{p}$s{k}"));
            buffers[k as usize].push(TlgGate::buffer(id.clone(), prev));
            copies.insert((p, k), id.clone());
            prev = id;
        }
    }

    let mut stages: Vec<Vec<TlgGate>> = vec![Vec::new(); depth];
    for (g, &s) in graph.gates.iter().zip(&gate_stage) {
        let mut gate = g.clone();
        for f in gate.fanins.iter_mut() {
            *f = copies[&(f.as_str(), s as isize - 1)].clone();
        }
        stages[s].push(gate);
    }
    for (stage, bufs) in stages.iter_mut().zip(buffers) {
        stage.extend(bufs);
    }

    let outputs = graph
        .outputs
        .iter()
        .map(|o| OutputPort {
            name: o.name.clone(),
            driver: if depth == 0 {
                o.driver.clone()
            } else {
                copies[&(o.driver.as_str(), depth as isize - 1)].clone()
            },
        })
        .collect();

    let mut net = TlgNetwork {
        name: graph.name.clone(),
        inputs: graph.inputs.clone(),
        outputs,
        stages,
        fanout: BTreeMap::new(),
        mapping: graph.mapping,
        max_fanin: graph.max_fanin,
    };
    net.rebuild_fanout();
    net
}

fn unique(names: &mut HashSet<String>, candidate: String) -> String {
    let id = if names.contains(&candidate) {
        (0..)
            .map(|i| format!("{candidate}_{i}"))
            .find(|c| !names.contains(c))
            .unwrap()
    } else {
        candidate
    };
    names.insert(id.clone());
    id
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;
    use crate::tlgsynth::{map_tlg, Role};

    fn staged(text: &str) -> TlgNetwork {
        let net = pipeline(&map_tlg(&parse_bench(text).unwrap()).unwrap());
        net.validate().unwrap();
        net
    }

    #[test]
    fn diamond_gets_one_buffer() {
        let net = staged("INPUT(a)\nOUTPUT(g2)\ng1 = NOT(a)\ng2 = AND(g1, a)\n");
        assert_eq!(net.num_stages(), 2);
        assert_eq!(net.stats().buffers, 1);
        let buf = net.gates().find(|g| g.role == Role::Buffer).unwrap();
        assert_eq!(buf.fanins, ["a"]);
        assert!(net.stages[0].contains(buf));
    }

    #[test]
    fn aligned_chain_needs_no_buffers() {
        let net = staged("INPUT(a)\nOUTPUT(g2)\ng1 = NOT(a)\ng2 = NOT(g1)\n");
        assert_eq!(net.stats().buffers, 0);
        assert_eq!(net.num_stages(), 2);
    }

    #[test]
    fn consumers_share_a_chain() {
        // a feeds stage 2 and stage 3 gates: chain a -> s0 -> s1 -> s2, 3 buffers
        let net = staged(
            "INPUT(a)\nINPUT(b)\nOUTPUT(y)\n\
             g0 = NOT(b)\ng1 = NOT(g0)\ng2 = AND(g1, a)\ng3 = OR(g2, a)\ny = BUF(g3)\n",
        );
        assert_eq!(net.stats().buffers, 3);
        assert_eq!(net.fanout["a"].len(), 1);
    }

    #[test]
    fn early_outputs_are_aligned() {
        let net = staged("INPUT(a)\nOUTPUT(x)\nOUTPUT(y)\nOUTPUT(a)\nx = NOT(a)\ny = NOT(x)\n");
        assert_eq!(net.num_stages(), 2);
        // x needs one buffer, a needs two
        assert_eq!(net.stats().buffers, 3);
        for o in &net.outputs {
            assert!(net.stages[1].iter().any(|g| g.id == o.driver));
        }
    }

    #[test]
    fn passthrough_has_no_stages() {
        let net = staged("INPUT(a)\nOUTPUT(a)\n");
        assert_eq!(net.num_stages(), 0);
        assert_eq!(net.outputs[0].driver, "a");
        assert_eq!(net.eval(&[true]).unwrap(), [true]);
    }
}
