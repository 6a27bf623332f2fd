//! Class-assignment search on hosts where rotation is not enough.

use std::time::Instant;

use mpembed::labeling::{host_labeling_rotation, host_labeling_solver, verify_balance, SolverOutcome};
use mpembed::product::{build_cut_family, ProductSpec};

fn main() -> mpembed::Result<()> {
    for (desc, p) in [
        ("P1,P1,P1", 2),
        ("P1,P1,P1,P1", 2),
        ("P1,P1,P1,P1", 3),
        ("P2,C2,C2", 5),
        ("P1,P1,P6", 7),
    ] {
        let spec = ProductSpec::parse(desc, false)?;
        let family = build_cut_family(&spec);
        let rotation = verify_balance(&family, &host_labeling_rotation(&spec), p)?.passed();
        let start = Instant::now();
        let outcome = host_labeling_solver(&spec, p)?;
        let elapsed = start.elapsed();
        match outcome {
            SolverOutcome::Found { labeling, strategy } => {
                let ok = verify_balance(&family, &labeling, p)?.passed();
                println!(
                    "{:<14} p={p}: rotation {}, solver {strategy:?} in {elapsed:.1?}, balanced {ok}",
                    spec.pretty(),
                    if rotation { "balanced" } else { "unbalanced" },
                );
            }
            SolverOutcome::Infeasible { reason } => println!("{:<14} p={p}: infeasible ({reason})", spec.pretty()),
        }
    }
    Ok(())
}
