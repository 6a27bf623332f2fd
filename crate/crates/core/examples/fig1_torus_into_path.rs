//! Row-major embedding of the 3x3 torus into a 9-vertex path.

use mpembed::graphs::{cartesian_product, make_cycle, make_path};
use mpembed::product::{CutFamily, Dimension, FactorKind, ProductShape};
use mpembed::wirelength::{edge_congestions, evaluate, Embedding, ShortestPathRouter};

fn main() -> mpembed::Result<()> {
    let c3 = make_cycle(3)?;
    let torus = cartesian_product(&[c3.clone(), c3])?;
    let path = make_path(9)?;
    let router = ShortestPathRouter::new(&path)?;
    let emb = Embedding::identity(&torus, &path, &router)?;
    let cuts = CutFamily::new(ProductShape::new(vec![Dimension {
        kind: FactorKind::Path,
        len: 9,
    }])?)?;
    let report = evaluate(&emb, &cuts)?;

    println!("cut after   congestion");
    for c in &report.per_cut {
        println!("{:>9}   {:>10}", c.id, c.congestion);
    }
    let mut per_edge: Vec<_> = edge_congestions(&emb).into_iter().collect();
    per_edge.sort();
    println!(
        "host edge loads: {:?}",
        per_edge.iter().map(|(_, c)| c).collect::<Vec<_>>()
    );
    println!(
        "WL {} (by cuts {}), dilation {}, max edge congestion {}",
        report.wl_distance, report.wl_congestion, report.dilation, report.max_edge_congestion
    );
    Ok(())
}
