// SPDX-License-Identifier: Apache-2.0

//! Conductance ladder and summed currents of the six mapped gate types.

use mtl::device::{
    bias_levels, dws_apply, read_divider, sum_current, weight_to_conductance, DwsState,
};
use mtl::DeviceParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = DeviceParams::default();
    println!("G_p = {:.3} uS, G_ap = {:.3} uS, u_g = {:.3} uS", p.g_p() * 1e6, p.g_ap() * 1e6, p.unit_conductance() * 1e6);
    println!("unit current {:.4} uA vs i_c {:.4} uA", p.unit_current() * 1e6, p.i_c * 1e6);
    let levels: Vec<String> = bias_levels(&p).iter().map(|g| format!("{:.3}", g * 1e6)).collect();
    println!("bias ladder (uS): {}", levels.join(" "));

    let gates: [(&str, &[i32], i32); 6] = [
        ("AND", &[2, 2], -3),
        ("OR", &[2, 2], -1),
        ("NAND", &[-2, -2], 3),
        ("NOR", &[-2, -2], 1),
        ("NOT", &[-2], 1),
        ("BUF", &[2], -1),
    ];
    for (name, weights, bias) in gates {
        let pairs = weights
            .iter()
            .map(|&w| weight_to_conductance(w, &p))
            .collect::<Result<Vec<_>, _>>()?;
        let b = weight_to_conductance(bias, &p)?;
        print!("{name:>4}:");
        for v in 0..1u32 << weights.len() {
            let active: Vec<_> = pairs
                .iter()
                .enumerate()
                .map(|(i, &c)| (c, v >> (weights.len() - 1 - i) & 1 == 1))
                .collect();
            let i = sum_current(&active, &b, &p);
            let next = dws_apply(DwsState::default(), i, &p).state;
            print!("  {v:0w$b} -> {:+.4} uA ({:.3} V)", i * 1e6, read_divider(next, &p), w = weights.len());
        }
        println!();
    }
    Ok(())
}
