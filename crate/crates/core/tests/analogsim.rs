// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{arb_netlist, bits, C17_GOLDEN};
use mtl::analogsim::{
    check_vectors, equivalence_check, format_vectors, monte_carlo, parse_vectors, random_vectors,
    simulate, CheckMode, PipelineSim, SimError,
};
use mtl::netlist::parse_bench;
use mtl::tlgsynth::Role;
use mtl::{benchmarks, synthesize, DeviceParams};
use proptest::prelude::*;

fn nominal() -> DeviceParams {
    DeviceParams::default()
}

#[test]
fn c17_stream_matches_golden() {
    let n = benchmarks::load("c17").unwrap();
    let net = synthesize(&n, 2).unwrap();
    let stream = check_vectors(5, CheckMode::Exhaustive).unwrap();
    let run = simulate(&net, &stream, &nominal(), None).unwrap();
    let got: Vec<String> = run.outputs.iter().map(|o| bits(o)).collect();
    assert_eq!(got, C17_GOLDEN);
    let s = net.num_stages() as u64;
    assert_eq!(run.output_cycles, (0..32).map(|t| t + s).collect::<Vec<_>>());
    assert_eq!(run.state.cycle, 32 + s);
    assert!(run.state.events.is_empty());
}

#[test]
fn latency_for_every_depth() {
    // a NOT chain of length S has depth S and no buffers
    for s in 1..=12u64 {
        let mut text = String::from("INPUT(a)\nOUTPUT(y)\n");
        let mut prev = "a".to_string();
        for k in 0..s {
            let id = if k + 1 == s { "y".to_string() } else { format!("n{k}") };
            text.push_str(&format!("{id} = NOT({prev})\n"));
            prev = id;
        }
        let n = parse_bench(&text).unwrap();
        let net = synthesize(&n, 2).unwrap();
        assert_eq!(net.num_stages() as u64, s);
        let stream = random_vectors(1, 9, s);
        let run = simulate(&net, &stream, &nominal(), None).unwrap();
        assert_eq!(run.output_cycles, (0..9).map(|t| t + s).collect::<Vec<_>>());
        assert_eq!(run.state.cycle, 9 + s);
        for (v, o) in stream.iter().zip(&run.outputs) {
            assert_eq!(o[0], v[0] ^ (s % 2 == 1));
        }
    }
}

#[test]
fn step_by_step_timing() {
    let n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = XOR(a, b)\n").unwrap();
    let net = synthesize(&n, 2).unwrap();
    let mut sim = PipelineSim::new(&net, &nominal(), None).unwrap();
    assert_eq!(sim.num_stages(), 2);
    assert_eq!(sim.step(Some(&[true, false])).unwrap(), None);
    assert_eq!(sim.step(Some(&[true, true])).unwrap(), None);
    assert_eq!(sim.step(None).unwrap(), Some((0, vec![true])));
    assert_eq!(sim.step(None).unwrap(), Some((1, vec![false])));
    assert_eq!(sim.step(None).unwrap(), None);
}

#[test]
fn mutated_network_is_caught() {
    let n = benchmarks::load("c17").unwrap();
    let mut net = synthesize(&n, 2).unwrap();
    let g = net.stages[1].iter_mut().find(|g| g.role == Role::Logic).unwrap();
    g.bias = 1; // NAND now computes NOR
    let r = equivalence_check(&n, &net, CheckMode::Exhaustive, &nominal()).unwrap();
    assert!(r.mismatches > 0);
    assert!(r.first_mismatch.is_some());
}

#[test]
fn raised_threshold_breaks_equivalence() {
    let n = benchmarks::load("c17").unwrap();
    let net = synthesize(&n, 2).unwrap();
    let p = DeviceParams {
        i_c: 2e-6,
        ..nominal()
    };
    let r = equivalence_check(&n, &net, CheckMode::Exhaustive, &p).unwrap();
    assert!(r.mismatches > 0);
    let run = simulate(&net, &random_vectors(5, 4, 0), &p, None).unwrap();
    assert!(!run.state.events.is_empty());
    assert!(run.state.events.iter().all(|e| e.current.abs() < p.i_c));
}

#[test]
fn logical_only_networks_rejected() {
    let n = benchmarks::load("c17").unwrap();
    let net = synthesize(&n, 3).unwrap();
    assert!(matches!(PipelineSim::new(&net, &nominal(), None), Err(SimError::NotMappable)));
}

#[test]
fn interface_mismatch_rejected() {
    let c17 = benchmarks::load("c17").unwrap();
    let other = synthesize(&benchmarks::load("c432").unwrap(), 2).unwrap();
    assert!(matches!(
        equivalence_check(&c17, &other, CheckMode::Exhaustive, &nominal()),
        Err(SimError::Interface(_))
    ));
    let net = synthesize(&c17, 2).unwrap();
    assert!(matches!(simulate(&net, &[vec![true; 3]], &nominal(), None), Err(SimError::WidthMismatch { .. })));
}

#[test]
fn benchmarks_are_equivalent_on_random_vectors() {
    for name in ["c432", "c880"] {
        let n = benchmarks::load(name).unwrap();
        let net = synthesize(&n, 2).unwrap();
        let r = equivalence_check(&n, &net, CheckMode::Random { vectors: 2000, seed: 9 }, &nominal()).unwrap();
        assert_eq!((r.vectors_tested, r.mismatches), (2000, 0), "{name}");
    }
}

#[test]
fn monte_carlo_nominal_and_jobs_independence() {
    let n = benchmarks::load("c17").unwrap();
    let net = synthesize(&n, 2).unwrap();
    let v = random_vectors(5, 32, 1);
    let r = monte_carlo(&n, &net, &nominal(), 4, &v, 0, None).unwrap();
    assert_eq!(r.yield_fraction, 1.0);
    assert_eq!(r.failure_count, 0);
    assert!((r.min_current - 1.5625e-6).abs() < 1e-15);
    assert!((r.min_margin_ratio - 1.5625 / 1.4).abs() < 1e-9);
    assert_eq!(r.per_gate_min_current.len(), net.gate_count());

    let p = DeviceParams {
        sigma_r: 0.05,
        ..nominal()
    };
    let one = monte_carlo(&n, &net, &p, 24, &v, 7, Some(1)).unwrap();
    let four = monte_carlo(&n, &net, &p, 24, &v, 7, Some(4)).unwrap();
    let global = monte_carlo(&n, &net, &p, 24, &v, 7, None).unwrap();
    assert_eq!(one, four);
    assert_eq!(one, global);
    assert!(one.min_margin_ratio < r.min_margin_ratio);
    let json = serde_json::to_value(&one).unwrap();
    assert!(json.get("yield").is_some());
}

#[test]
fn vector_files() {
    let v = parse_vectors("# header\n0101\n1 1 0 0\n\n", 4).unwrap();
    assert_eq!(v, [vec![false, true, false, true], vec![true, true, false, false]]);
    assert_eq!(format_vectors(&v), "0101\n1100\n");
    assert!(parse_vectors("010\n", 4).is_err());
    assert!(parse_vectors("01x1\n", 4).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simulation_matches_reference(n in arb_netlist()) {
        let net = synthesize(&n, 2).unwrap();
        let r = equivalence_check(&n, &net, CheckMode::Exhaustive, &nominal()).unwrap();
        prop_assert_eq!(r.mismatches, 0);
        let stream = check_vectors(n.inputs().len(), CheckMode::Exhaustive).unwrap();
        let run = simulate(&net, &stream, &nominal(), None).unwrap();
        prop_assert_eq!(run.state.cycle, (stream.len() + net.num_stages()) as u64);
    }
}
