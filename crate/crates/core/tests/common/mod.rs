#![allow(dead_code)]

use mpembed::product::{FactorKind, FactorSpec, ProductSpec};

/// Every host with `n` factors in `n_range` and `r` in `r_range`, sizes
/// nondecreasing, in every path/cycle pattern. Specs with fewer than three
/// factors are relaxed.
pub fn specs(n_range: std::ops::RangeInclusive<usize>, r_range: std::ops::RangeInclusive<u32>) -> Vec<ProductSpec> {
    let mut out = Vec::new();
    for n in n_range {
        let mut current = Vec::new();
        grow(n, 1, *r_range.end(), &mut current, &mut |factors: &[FactorSpec]| {
            let r: u32 = factors.iter().map(|f| f.log_size).sum();
            if r_range.contains(&r) {
                let spec = if n < 3 {
                    ProductSpec::relaxed(factors.to_vec())
                } else {
                    ProductSpec::new(factors.to_vec())
                };
                out.push(spec.unwrap());
            }
        });
    }
    out
}

fn grow(n: usize, min_log: u32, budget: u32, current: &mut Vec<FactorSpec>, emit: &mut dyn FnMut(&[FactorSpec])) {
    if current.len() == n {
        emit(current);
        return;
    }
    let left = (n - current.len()) as u32;
    for k in min_log..=budget {
        if k * left > budget {
            break;
        }
        for kind in [FactorKind::Path, FactorKind::Cycle] {
            if kind == FactorKind::Cycle && k < 2 {
                continue;
            }
            current.push(FactorSpec { kind, log_size: k });
            grow(n, k, budget - k, current, emit);
            current.pop();
        }
    }
}

pub fn spec(desc: &str) -> ProductSpec {
    ProductSpec::parse(desc, true).unwrap()
}
