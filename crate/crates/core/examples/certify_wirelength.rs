//! Distance sum, congestion sum, closed form and lower bound for a host.
//!
//! Usage: `cargo run --example certify_wirelength -- [descriptor]`

use mpembed::labeling::{host_labeling, HostAlgo};
use mpembed::product::ProductSpec;
use mpembed::wirelength::{certify, formula_hypothesis_holds};

fn main() -> mpembed::Result<()> {
    let desc = std::env::args().nth(1).unwrap_or_else(|| "P1,P2,C2".to_string());
    let spec = ProductSpec::parse(&desc, false)?;
    println!("host {} ({} vertices)", spec.pretty(), spec.vertex_count());
    println!(" p  distance  congestion  formula     bound  certified");
    for p in 1..spec.r() {
        let Some(h) = host_labeling(&spec, p, HostAlgo::Solver)? else {
            println!("{p:>2}  no balanced labeling");
            continue;
        };
        let rep = certify(&spec, p, &h.labeling)?;
        println!(
            "{p:>2} {:>9} {:>11} {:>8} {:>9}  {}{}",
            rep.wl_distance,
            rep.wl_congestion,
            rep.wl_formula.unwrap(),
            rep.lower_bound.unwrap(),
            rep.certified(),
            if formula_hypothesis_holds(&spec, p) {
                ""
            } else {
                "  (p exceeds r - r_i for a path)"
            }
        );
    }
    Ok(())
}
