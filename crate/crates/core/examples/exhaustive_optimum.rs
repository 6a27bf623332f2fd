//! Minimum wirelength over all 8! maps into Q3, next to the closed form.

use mpembed::graphs::make_complete_multipartite;
use mpembed::oracle::min_wl_bruteforce;
use mpembed::product::ProductSpec;
use mpembed::wirelength::{lower_bound, wl_formula};

fn main() -> mpembed::Result<()> {
    let spec = ProductSpec::parse("P1,P1,P1", false)?;
    let q3 = spec.shape().graph();
    for (parts, p) in [(2usize, 1u32), (4, 2)] {
        let guest = make_complete_multipartite(&vec![8 / parts; parts])?;
        let best = min_wl_bruteforce(&guest, &q3)?;
        println!(
            "{parts} parts of {}: exhaustive {}, closed form {}, bound {}; witness {:?}",
            8 / parts,
            best.wirelength,
            wl_formula(&spec, p)?,
            lower_bound(&spec, p)?,
            best.witness
        );
    }
    Ok(())
}
