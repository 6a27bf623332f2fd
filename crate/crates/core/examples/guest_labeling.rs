//! Round-robin labeling of the guest: label l sits in part (l - 1) mod 2^p.
//!
//! Usage: `cargo run --example guest_labeling -- [p] [r]`

use mpembed::labeling::guest_labeling;
use mpembed::multipartite::{degree, MultipartiteSpec};

fn main() -> mpembed::Result<()> {
    let args: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (p, r) = (args.first().copied().unwrap_or(2), args.get(1).copied().unwrap_or(5));
    let spec = MultipartiteSpec::new(p, r)?;
    let lab = guest_labeling(spec);
    println!(
        "{} parts of {} vertices, degree {}, {} edges",
        spec.num_parts(),
        spec.part_size(),
        degree(&spec),
        lab.graph().edge_count()
    );
    for (i, part) in lab.parts().iter().enumerate() {
        let labels: Vec<String> = part.iter().map(ToString::to_string).collect();
        println!("part {:>2}: {}", i + 1, labels.join(" "));
    }
    // every prefix 1..m is spread evenly over the parts
    for m in [3, spec.vertex_count() / 2, spec.vertex_count() - 1] {
        println!("labels 1..{m}: part counts {:?}", lab.counts_of(1..=m).counts());
    }
    Ok(())
}
