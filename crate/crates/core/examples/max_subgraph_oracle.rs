//! Largest induced edge count of equal-part multipartite graphs: closed form
//! against exhaustive enumeration.

use mpembed::graphs::make_complete_multipartite;
use mpembed::multipartite::{balanced_counts, ig_formula};
use mpembed::oracle::{ig_bruteforce, theta_bruteforce};

fn main() -> mpembed::Result<()> {
    for (parts, size) in [(2, 4), (4, 2), (3, 4), (2, 8)] {
        let g = make_complete_multipartite(&vec![size; parts])?;
        let deg = g.regular_degree().unwrap() as u64;
        println!("{parts} parts of {size} (degree {deg})");
        println!("   k  I(k)  exhaustive  theta(k)  counts");
        for k in 0..=parts * size {
            let (formula, brute, theta) = (
                ig_formula(parts, size, k)?,
                ig_bruteforce(&g, k)?,
                theta_bruteforce(&g, k)?,
            );
            assert_eq!(formula, brute);
            assert_eq!(2 * brute + theta, deg * k as u64);
            println!(
                "{k:>4} {formula:>5} {brute:>11} {theta:>9}  {:?}",
                balanced_counts(parts, size, k)?.counts()
            );
        }
        println!();
    }
    Ok(())
}
