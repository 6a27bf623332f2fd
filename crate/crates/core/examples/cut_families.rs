//! Path and cycle cuts of a small cylinder, and the routes that cross them.

use mpembed::labeling::Labeling;
use mpembed::product::{build_cut_family, crossing_cuts, route, ProductSpec};

fn main() -> mpembed::Result<()> {
    let spec = ProductSpec::parse("P1,C2", true)?;
    let family = build_cut_family(&spec);
    let labeling = Labeling::mixed_radix(spec.shape());
    family.verify_partition(&labeling.host_graph())?;

    for c in family.cuts() {
        let edges: Vec<String> = c.edges().iter().map(|e| format!("{}-{}", e.u, e.v)).collect();
        println!(
            "{:?} dim {} cut {}: edges [{}], sides {:?} | {:?}",
            c.kind,
            c.dim,
            c.id,
            edges.join(" "),
            c.side_a(),
            c.side_b()
        );
    }
    for (u, v) in [(1, 5), (1, 6), (2, 7), (3, 8)] {
        println!(
            "route {u} -> {v}: {:?}, separated by {:?}",
            route(&labeling, u, v)?,
            crossing_cuts(&family, &labeling, u, v)?
        );
    }
    Ok(())
}
