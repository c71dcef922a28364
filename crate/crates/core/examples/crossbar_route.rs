// SPDX-License-Identifier: Apache-2.0

//! Route the inter-stage crossbars and check the wire resistance bound.

use mtl::interconnect::{check_constraints, interconnect_energy, route};
use mtl::{benchmarks, synthesize, DeviceParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "c17".into());
    let p = DeviceParams::default();
    let network = synthesize(&benchmarks::load(&name).ok_or("unknown benchmark")?, 2)?;
    let routing = route(&network, &p)?;
    for b in routing.plan.boundaries.iter().take(4) {
        println!(
            "boundary {}: {}x{} crossbar, pitch {:.2} um, {} programmed, {} off",
            b.stage,
            b.rows,
            b.cols,
            b.pitch * 1e6,
            b.programmed.len(),
            b.off_crosspoints
        );
    }
    let c = check_constraints(&routing.nets, &p);
    println!(
        "{} nets, worst {:.1} Ohm ({}), bound {:.0} Ohm, {}",
        routing.nets.len(),
        c.worst_resistance,
        c.worst_net.as_deref().unwrap_or("-"),
        c.bound,
        if c.passed { "pass" } else { "FAIL" }
    );
    println!(
        "wire energy per cycle {:.3} fJ, sneak power {:.3} nW",
        interconnect_energy(&routing.nets, &p, 1) * 1e15,
        routing.plan.sneak_power(&p) * 1e9
    );
    Ok(())
}
