//! Guest and host labelings.
//!
//! The identity embedding `f(x) = x` sends guest label `ℓ` to the host vertex
//! carrying label `ℓ`. Guest parts are label residues mod `2^p`, so whether a
//! host labeling is optimal depends only on how those residue classes are
//! spread over each cut side (the balance contract checked by
//! [`verify_balance`]).

mod solver;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use solver::{
    host_labeling_solver, labeling_from_classes, linear_class_search, solve_with, vertex_class_search, SolverConfig,
    SolverOutcome, SolverStrategy, VertexSearch,
};

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::multipartite::{MultipartiteSpec, PartCounts};
use crate::product::{Coord, CutFamily, ProductShape, ProductSpec};

/// Round-robin partite labeling: label `ℓ` lies in part `((ℓ - 1) mod 2^p) + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GuestLabeling {
    spec: MultipartiteSpec,
}

pub fn guest_labeling(spec: MultipartiteSpec) -> GuestLabeling {
    GuestLabeling { spec }
}

impl GuestLabeling {
    pub fn spec(&self) -> &MultipartiteSpec {
        &self.spec
    }

    /// 1-based part of a 1-based label.
    pub fn part_of(&self, label: usize) -> usize {
        (label - 1) % self.spec.num_parts() + 1
    }

    /// Labels of each part, ascending.
    pub fn parts(&self) -> Vec<Vec<usize>> {
        let parts = self.spec.num_parts();
        (1..=parts)
            .map(|first| (first..=self.spec.vertex_count()).step_by(parts).collect())
            .collect()
    }

    /// The guest graph with vertices named by this labeling.
    pub fn graph(&self) -> Graph {
        let n = self.spec.vertex_count();
        let parts = self.spec.num_parts();
        let edges = (1..=n).flat_map(|u| (u + 1..=n).filter(move |v| (v - u) % parts != 0).map(move |v| (u, v)));
        Graph::from_edges(n, edges.collect::<Vec<_>>()).expect("well-formed multipartite edges")
    }

    /// Part counts of a set of labels.
    pub fn counts_of(&self, labels: impl IntoIterator<Item = usize>) -> PartCounts {
        let mut counts = vec![0; self.spec.num_parts()];
        for l in labels {
            counts[self.part_of(l) - 1] += 1;
        }
        PartCounts::for_spec(&self.spec, counts).expect("labels are distinct and in range")
    }
}

/// Bijection between host labels `1..=N` and product coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    shape: ProductShape,
    label_of_index: Vec<usize>,
    index_of_label: Vec<usize>,
}

impl Labeling {
    /// `label_of_index[i]` is the label of the vertex with mixed-radix index `i`.
    pub fn from_labels(shape: ProductShape, label_of_index: Vec<usize>) -> Result<Self> {
        let n = shape.vertex_count();
        if label_of_index.len() != n {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {n} host vertices",
                label_of_index.len()
            )));
        }
        let mut index_of_label = vec![usize::MAX; n];
        for (i, &l) in label_of_index.iter().enumerate() {
            if l == 0 || l > n || index_of_label[l - 1] != usize::MAX {
                return Err(Error::InvalidParameter(format!(
                    "label {l} is repeated or out of range"
                )));
            }
            index_of_label[l - 1] = i;
        }
        Ok(Labeling {
            shape,
            label_of_index,
            index_of_label,
        })
    }

    /// Plain mixed-radix order, first dimension fastest.
    pub fn mixed_radix(shape: ProductShape) -> Self {
        let n = shape.vertex_count();
        Labeling {
            shape,
            label_of_index: (1..=n).collect(),
            index_of_label: (0..n).collect(),
        }
    }

    /// Row-major order of the displayed tables: last dimension fastest.
    pub fn row_major(shape: ProductShape) -> Self {
        let dims = shape.dims().to_vec();
        let labels = (0..shape.vertex_count())
            .map(|i| {
                let c = shape.coord(i);
                1 + c.0.iter().zip(&dims).fold(0, |acc, (&x, d)| acc * d.len + x)
            })
            .collect();
        Self::from_labels(shape, labels).expect("row-major order is a bijection")
    }

    pub fn shape(&self) -> &ProductShape {
        &self.shape
    }

    pub fn vertex_count(&self) -> usize {
        self.label_of_index.len()
    }

    pub fn label_of_index(&self, index: usize) -> usize {
        self.label_of_index[index]
    }

    pub fn index_of_label(&self, label: usize) -> usize {
        self.index_of_label[label - 1]
    }

    pub fn labels(&self) -> &[usize] {
        &self.label_of_index
    }

    pub fn coord_of(&self, label: usize) -> Result<Coord> {
        if label == 0 || label > self.vertex_count() {
            return Err(Error::VertexOutOfRange {
                vertex: label,
                count: self.vertex_count(),
            });
        }
        Ok(self.shape.coord(self.index_of_label(label)))
    }

    pub fn label_of(&self, c: &Coord) -> Result<usize> {
        Ok(self.label_of_index[self.shape.index(c)?])
    }

    /// Host graph whose vertex ids are the labels.
    pub fn host_graph(&self) -> Graph {
        self.shape
            .graph()
            .relabel(&self.label_of_index)
            .expect("labeling is a bijection")
    }
}

/// Which host labeling construction to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HostAlgo {
    /// Rotation across the outermost copies only, as the reference listing does.
    RotationLiteral,
    /// Rotation at every nesting level.
    Rotation,
    /// Rotation seed, then search for a balanced class assignment.
    Solver,
}

impl FromStr for HostAlgo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rotation-literal" => Ok(HostAlgo::RotationLiteral),
            "rotation" => Ok(HostAlgo::Rotation),
            "solver" => Ok(HostAlgo::Solver),
            _ => Err(Error::Parse(format!(
                "unknown algorithm `{s}` (expected rotation-literal, rotation or solver)"
            ))),
        }
    }
}

impl fmt::Display for HostAlgo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HostAlgo::RotationLiteral => "rotation-literal",
            HostAlgo::Rotation => "rotation",
            HostAlgo::Solver => "solver",
        })
    }
}

/// Copy-and-rotate labeling: the `k`-dimensional labeling stacks `len_k`
/// offset copies of the `(k-1)`-dimensional one, copy `i` (0-based) rotated by
/// `i` rows along dimension 1. Unrolled, the row of `x` within its column is
/// `(x_1 + x_2 + .. + x_n) mod len_1`.
pub fn host_labeling_rotation(spec: &ProductSpec) -> Labeling {
    rotation_labeling(spec.shape(), |c| c.0[1..].iter().sum())
}

/// The reference listing's variant: dimensions 1..3 form the base block and
/// only the copies along the outermost dimension (`n >= 4`) are rotated.
pub fn host_labeling_rotation_literal(spec: &ProductSpec) -> Labeling {
    let n = spec.n();
    rotation_labeling(spec.shape(), move |c| if n >= 4 { c.0[n - 1] } else { 0 })
}

fn rotation_labeling(shape: ProductShape, shift: impl Fn(&Coord) -> usize) -> Labeling {
    let len1 = shape.dims()[0].len;
    let labels = (0..shape.vertex_count())
        .map(|i| {
            let c = shape.coord(i);
            let row = (c.0[0] + shift(&c)) % len1;
            1 + row + (i / len1) * len1
        })
        .collect();
    Labeling::from_labels(shape, labels).expect("rotation permutes rows within each column")
}

/// Class spreads of one cut.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutBalance {
    pub dim: usize,
    pub id: usize,
    pub side_a_size: usize,
    pub spread_a: usize,
    pub spread_b: usize,
}

impl CutBalance {
    pub fn balanced(&self) -> bool {
        self.spread_a <= 1 && self.spread_b <= 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceReport {
    pub p: u32,
    pub cuts: Vec<CutBalance>,
}

impl BalanceReport {
    pub fn passed(&self) -> bool {
        self.cuts.iter().all(CutBalance::balanced)
    }

    pub fn offending(&self) -> impl Iterator<Item = &CutBalance> {
        self.cuts.iter().filter(|c| !c.balanced())
    }
}

/// Checks the balance contract: on every side of every cut, the counts of
/// label classes `(ℓ - 1) mod 2^p` differ by at most one.
///
/// `family` must use mixed-radix ids over the labeling's shape.
pub fn verify_balance(family: &CutFamily, labeling: &Labeling, p: u32) -> Result<BalanceReport> {
    let n = labeling.vertex_count();
    if family.shape() != labeling.shape() {
        return Err(Error::InvalidParameter(
            "cut family and labeling use different hosts".into(),
        ));
    }
    if p >= usize::BITS || (1usize << p) >= n || !n.is_multiple_of(1usize << p) {
        return Err(Error::InvalidParameter(format!(
            "2^{p} classes do not evenly split {n} host vertices"
        )));
    }
    let classes = 1usize << p;
    let spread = |side: &[usize]| {
        let mut counts = vec![0usize; classes];
        for &id in side {
            counts[(labeling.label_of_index(id - 1) - 1) % classes] += 1;
        }
        counts.iter().max().unwrap() - counts.iter().min().unwrap()
    };
    let cuts = family
        .cuts()
        .iter()
        .map(|c| CutBalance {
            dim: c.dim,
            id: c.id,
            side_a_size: c.side_a().len(),
            spread_a: spread(c.side_a()),
            spread_b: spread(c.side_b()),
        })
        .collect();
    Ok(BalanceReport { p, cuts })
}

/// A host labeling together with its balance report.
#[derive(Debug, Clone)]
pub struct HostLabeling {
    pub labeling: Labeling,
    pub report: BalanceReport,
    pub algo: HostAlgo,
    /// Set when the solver ran.
    pub strategy: Option<SolverStrategy>,
}

/// Runs the chosen construction and verifies the result.
///
/// `Ok(None)` means the solver proved (or gave up proving) that no balanced
/// labeling exists; that is a finding about the instance, not a usage error.
pub fn host_labeling(spec: &ProductSpec, p: u32, algo: HostAlgo) -> Result<Option<HostLabeling>> {
    let family = crate::product::build_cut_family(spec);
    let (labeling, strategy) = match algo {
        HostAlgo::RotationLiteral => (host_labeling_rotation_literal(spec), None),
        HostAlgo::Rotation => (host_labeling_rotation(spec), None),
        HostAlgo::Solver => match host_labeling_solver(spec, p)? {
            SolverOutcome::Found { labeling, strategy } => (labeling, Some(strategy)),
            SolverOutcome::Infeasible { reason } => {
                log::warn!("no balanced labeling for {spec} with p = {p}: {reason}");
                return Ok(None);
            }
        },
    };
    let report = verify_balance(&family, &labeling, p)?;
    Ok(Some(HostLabeling {
        labeling,
        report,
        algo,
        strategy,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipartite::is_optimal_set;
    use crate::product::build_cut_family;

    fn spec(s: &str) -> ProductSpec {
        ProductSpec::parse(s, true).unwrap()
    }

    fn columns(lab: &Labeling) -> Vec<Vec<usize>> {
        let len1 = lab.shape().dims()[0].len;
        lab.labels().chunks(len1).map(<[usize]>::to_vec).collect()
    }

    #[test]
    fn guest_examples() {
        let g = guest_labeling(MultipartiteSpec::new(1, 3).unwrap());
        assert_eq!(g.parts(), vec![vec![1, 3, 5, 7], vec![2, 4, 6, 8]]);
        let g = guest_labeling(MultipartiteSpec::new(3, 8).unwrap());
        let first = &g.parts()[0];
        assert_eq!(first.len(), 32);
        assert_eq!(&first[..3], &[1, 9, 17]);
        assert_eq!(first.last(), Some(&249));
        let g = guest_labeling(MultipartiteSpec::new(2, 3).unwrap());
        assert_eq!(g.parts(), vec![vec![1, 5], vec![2, 6], vec![3, 7], vec![4, 8]]);
    }

    #[test]
    fn guest_graph_matches_grouped_construction() {
        let s = MultipartiteSpec::new(2, 4).unwrap();
        let g = guest_labeling(s).graph();
        assert_eq!(g.edge_count(), s.grouped_graph().edge_count());
        assert_eq!(g.regular_degree(), s.grouped_graph().regular_degree());
        assert!(!g.has_edge(1, 5) && g.has_edge(1, 2));
    }

    #[test]
    fn guest_prefixes_are_optimal() {
        for r in 2..=10 {
            for p in 1..r {
                let s = MultipartiteSpec::new(p, r).unwrap();
                let g = guest_labeling(s);
                for m in 0..=s.vertex_count() {
                    assert!(is_optimal_set(&s, &g.counts_of(1..=m)), "p {p} r {r} m {m}");
                }
            }
        }
    }

    #[test]
    fn rotation_examples() {
        let lab = host_labeling_rotation(&spec("P1,P2"));
        assert_eq!(columns(&lab), vec![vec![1, 2], vec![4, 3], vec![5, 6], vec![8, 7]]);

        let q3 = host_labeling_rotation(&spec("P1,P1,P1"));
        // layer x3 = 1 as rows: (6, 7) over (5, 8)
        assert_eq!(columns(&q3)[2..], [vec![6, 5], vec![7, 8]]);
    }

    #[test]
    fn rotation_balance_examples() {
        let s = spec("P1,P2");
        let fam = build_cut_family(&s);
        assert!(verify_balance(&fam, &host_labeling_rotation(&s), 1).unwrap().passed());
        let q3 = spec("P1,P1,P1");
        let report = verify_balance(&build_cut_family(&q3), &host_labeling_rotation(&q3), 1).unwrap();
        assert!(report.passed());

        let q4 = spec("P1,P1,P1,P1");
        let lab = host_labeling_rotation(&q4);
        let fam = build_cut_family(&q4);
        let report = verify_balance(&fam, &lab, 2).unwrap();
        let bad: Vec<_> = report.offending().collect();
        assert_eq!(bad.len(), 1);
        assert_eq!((bad[0].dim, bad[0].spread_a), (2, 4));
        let mut side: Vec<usize> = fam.cuts()[1]
            .side_a()
            .iter()
            .map(|&id| lab.label_of_index(id - 1))
            .collect();
        side.sort_unstable();
        assert_eq!(side, vec![1, 2, 5, 6, 9, 10, 13, 14]);
    }

    #[test]
    fn row_major_fails_a_column_cut() {
        let s = spec("P1,P2");
        let lab = Labeling::row_major(s.shape());
        assert_eq!(columns(&lab)[0], vec![1, 5]);
        let report = verify_balance(&build_cut_family(&s), &lab, 1).unwrap();
        assert!(!report.passed());
        assert!(report.offending().any(|c| c.dim == 2 && c.id == 1));
    }

    #[test]
    fn literal_rotation_only_turns_outer_copies() {
        let q3 = spec("P1,P1,P1");
        let lab = host_labeling_rotation_literal(&q3);
        assert_eq!(lab, Labeling::mixed_radix(q3.shape()));
        let q4 = spec("P1,P1,P1,P1");
        let lab = host_labeling_rotation_literal(&q4);
        assert_eq!(columns(&lab)[4], vec![10, 9]);
        assert_eq!(columns(&lab)[1], vec![3, 4]);
    }

    #[test]
    fn labelings_are_bijections() {
        for d in ["P1,P2", "P1,P1,P1", "C2,C2,P3", "P1,P1,P1,P1", "C2,C3"] {
            let s = spec(d);
            for lab in [
                host_labeling_rotation(&s),
                host_labeling_rotation_literal(&s),
                Labeling::row_major(s.shape()),
            ] {
                let mut seen = lab.labels().to_vec();
                seen.sort_unstable();
                assert_eq!(seen, (1..=s.vertex_count()).collect::<Vec<_>>());
                for l in 1..=s.vertex_count() {
                    assert_eq!(lab.label_of(&lab.coord_of(l).unwrap()).unwrap(), l);
                }
            }
        }
    }

    #[test]
    fn label_one_sits_at_origin() {
        let s = spec("P1,P2");
        assert_eq!(host_labeling_rotation(&s).coord_of(1).unwrap(), Coord(vec![0, 0]));
        // label 3 is second row, second column
        assert_eq!(host_labeling_rotation(&s).coord_of(3).unwrap(), Coord(vec![1, 1]));
        assert!(host_labeling_rotation(&s).coord_of(9).is_err());
    }

    #[test]
    fn from_labels_rejects_non_bijections() {
        let shape = spec("P1,P1").shape();
        assert!(Labeling::from_labels(shape.clone(), vec![1, 1, 2, 3]).is_err());
        assert!(Labeling::from_labels(shape.clone(), vec![1, 2, 3]).is_err());
        assert!(Labeling::from_labels(shape, vec![1, 2, 3, 5]).is_err());
    }

    #[test]
    fn verify_balance_rejects_bad_class_counts() {
        let s = spec("P1,P1,P1");
        let fam = build_cut_family(&s);
        let lab = host_labeling_rotation(&s);
        assert!(verify_balance(&fam, &lab, 3).is_err());
        let other = spec("P1,P2");
        assert!(verify_balance(&build_cut_family(&other), &lab, 1).is_err());
    }

    #[test]
    fn host_algo_parses() {
        for a in [HostAlgo::RotationLiteral, HostAlgo::Rotation, HostAlgo::Solver] {
            assert_eq!(a.to_string().parse::<HostAlgo>().unwrap(), a);
        }
        assert!("greedy".parse::<HostAlgo>().is_err());
    }
}
