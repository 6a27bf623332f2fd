//! Guest-side combinatorics for complete multipartite graphs with equal parts.
//!
//! A vertex subset of `K_{s,..,s}` is described up to symmetry by how many
//! vertices it takes from each part, so internal-edge counts and optimality
//! only depend on that count vector.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{self, Graph};

/// `K_{2^{r-p}, .., 2^{r-p}}` with `2^p` parts and `2^r` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MultipartiteSpec {
    p: u32,
    r: u32,
}

impl MultipartiteSpec {
    pub fn new(p: u32, r: u32) -> Result<Self> {
        if p < 1 {
            return Err(Error::InvalidParameter("p must be at least 1".into()));
        }
        if r <= p {
            return Err(Error::InvalidParameter(format!(
                "need r > p so every part has at least 2 vertices (p = {p}, r = {r})"
            )));
        }
        if r >= usize::BITS - 1 {
            return Err(Error::InvalidParameter(format!("r = {r} is too large")));
        }
        Ok(MultipartiteSpec { p, r })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn num_parts(&self) -> usize {
        1 << self.p
    }

    pub fn part_size(&self) -> usize {
        1 << (self.r - self.p)
    }

    pub fn vertex_count(&self) -> usize {
        1 << self.r
    }

    /// The guest with parts grouped consecutively (part 1 = labels `1..=2^{r-p}`).
    pub fn grouped_graph(&self) -> Graph {
        graphs::make_complete_multipartite(&vec![self.part_size(); self.num_parts()])
            .expect("spec guarantees at least two nonempty parts")
    }
}

/// Common degree `2^{r-p} (2^p - 1)`.
pub fn degree(spec: &MultipartiteSpec) -> u64 {
    (spec.part_size() * (spec.num_parts() - 1)) as u64
}

/// How many vertices a subset takes from each part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PartCounts(Vec<usize>);

impl PartCounts {
    /// Validates against a guest with `num_parts` parts of `part_size`.
    pub fn new(num_parts: usize, part_size: usize, counts: Vec<usize>) -> Result<Self> {
        if counts.len() != num_parts {
            return Err(Error::InvalidParameter(format!(
                "expected {num_parts} part counts, got {}",
                counts.len()
            )));
        }
        if let Some(&c) = counts.iter().find(|&&c| c > part_size) {
            return Err(Error::InvalidParameter(format!(
                "part count {c} exceeds part size {part_size}"
            )));
        }
        Ok(PartCounts(counts))
    }

    pub fn for_spec(spec: &MultipartiteSpec, counts: Vec<usize>) -> Result<Self> {
        Self::new(spec.num_parts(), spec.part_size(), counts)
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// `max - min` over the parts.
    pub fn spread(&self) -> usize {
        let max = self.0.iter().copied().max().unwrap_or(0);
        let min = self.0.iter().copied().min().unwrap_or(0);
        max - min
    }
}

/// Guest edges inside any vertex set with these part counts: `(m^2 - Σ c_t^2) / 2`.
pub fn internal_edges(counts: &PartCounts) -> u64 {
    let m = counts.total() as u64;
    let squares: u64 = counts.0.iter().map(|&c| (c * c) as u64).sum();
    (m * m - squares) / 2
}

/// The most balanced composition of `k` (counts differ by at most one),
/// larger counts first.
pub fn balanced_counts(num_parts: usize, part_size: usize, k: usize) -> Result<PartCounts> {
    check_subset_args(num_parts, part_size, k)?;
    let (q, extra) = (k / num_parts, k % num_parts);
    let counts = (0..num_parts).map(|t| q + usize::from(t < extra)).collect();
    PartCounts::new(num_parts, part_size, counts)
}

fn check_subset_args(num_parts: usize, part_size: usize, k: usize) -> Result<()> {
    if num_parts < 2 || part_size < 1 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 parts of positive size, got {num_parts} x {part_size}"
        )));
    }
    if k > num_parts * part_size {
        return Err(Error::InvalidParameter(format!(
            "k = {k} exceeds the {} vertices of the guest",
            num_parts * part_size
        )));
    }
    Ok(())
}

/// `I_G(k)` for `K_{s,..,s}`: the maximum number of edges induced by `k` vertices.
/// Evaluated as the internal-edge count of the balanced composition.
pub fn ig_formula(num_parts: usize, part_size: usize, k: usize) -> Result<u64> {
    Ok(internal_edges(&balanced_counts(num_parts, part_size, k)?))
}

/// The same quantity through the three-branch closed form, kept as an
/// independent cross-check of [`ig_formula`].
pub fn ig_piecewise(num_parts: usize, part_size: usize, k: usize) -> Result<u64> {
    check_subset_args(num_parts, part_size, k)?;
    let p = num_parts as u64;
    let k = k as u64;
    if k < p {
        return Ok(k * k.saturating_sub(1) / 2);
    }
    if k.is_multiple_of(p) {
        let q = k / p;
        return Ok(q * q * p * (p - 1) / 2);
    }
    // k = (q - 1) p + j with 1 <= j <= p - 1
    let q = k / p + 1;
    let j = k % p;
    Ok((q - 1) * (q - 1) * p * (p - 1) / 2 + j * (q - 1) * (p - 1) + j * (j - 1) / 2)
}

/// A subset is optimal when it induces `I_G(|M|)` edges, i.e. its counts are balanced.
pub fn is_optimal_set(spec: &MultipartiteSpec, counts: &PartCounts) -> bool {
    let best = ig_formula(spec.num_parts(), spec.part_size(), counts.total())
        .expect("validated counts never exceed the guest");
    internal_edges(counts) == best
}
