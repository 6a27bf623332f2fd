//! The three host constructions side by side, each with its balance report.
//!
//! Usage: `cargo run --example host_labelings -- [descriptor] [p]`

use mpembed::cli::render_labeling_blocks;
use mpembed::labeling::{host_labeling, HostAlgo};
use mpembed::product::ProductSpec;

fn main() -> mpembed::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let spec = ProductSpec::parse(args.first().map_or("P1,P1,P1,P1", String::as_str), true)?;
    let p: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(2);

    for algo in [HostAlgo::RotationLiteral, HostAlgo::Rotation, HostAlgo::Solver] {
        println!("== {algo} on {} with p = {p}", spec.pretty());
        let Some(h) = host_labeling(&spec, p, algo)? else {
            println!("no balanced labeling exists\n");
            continue;
        };
        print!("{}", render_labeling_blocks(&h.labeling));
        if h.report.passed() {
            println!("balanced on all {} cuts", h.report.cuts.len());
        }
        for c in h.report.offending() {
            println!(
                "unbalanced: dim {} cut {} (side of {}), spreads {} and {}",
                c.dim, c.id, c.side_a_size, c.spread_a, c.spread_b
            );
        }
        if let Some(s) = h.strategy {
            println!("solver strategy: {s:?}");
        }
        println!();
    }
    Ok(())
}
