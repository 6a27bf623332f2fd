//! Closed form against the cut lower bound across small hosts.

use mpembed::product::ProductSpec;
use mpembed::wirelength::{formula_hypothesis_holds, lower_bound, wl_formula};

fn main() -> mpembed::Result<()> {
    println!("{:<12} {:>2} {:>10} {:>10}  note", "host", "p", "formula", "bound");
    for desc in [
        "P1,P1,P1",
        "C2,C2,C2",
        "P1,P1,C2",
        "P1,P1,P2",
        "P1,P2,P3",
        "C2,C2,C3,C3",
    ] {
        let spec = ProductSpec::parse(desc, false)?;
        for p in 1..spec.r() {
            let (f, b) = (wl_formula(&spec, p)?, lower_bound(&spec, p)?);
            let note = match (f == b, formula_hypothesis_holds(&spec, p)) {
                (true, _) => "",
                (false, false) => "below the bound: some path cut side is not a multiple of 2^p",
                (false, true) => "UNEXPECTED",
            };
            println!("{:<12} {p:>2} {f:>10} {b:>10}  {note}", spec.to_string());
        }
    }
    Ok(())
}
