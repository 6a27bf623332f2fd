//! Search for a host class assignment that satisfies the balance contract.
//!
//! The wirelength of the identity embedding only depends on which residue
//! class each host vertex carries, so the search runs over class assignments
//! and turns the winner into labels afterwards.
//!
//! Two searches are tried after the rotation seed:
//!
//! 1. Linear assignments. Each coordinate bit gets a column vector in
//!    `GF(2)^p` and a vertex's class is the XOR of the columns of its set bits.
//!    For such maps the balance contract reduces to rank and span conditions
//!    per dimension, and columns are chosen in canonical (echelon) form so
//!    that assignments equal up to renaming classes are visited once.
//! 2. Vertex-by-vertex backtracking with per-side count bounds, most
//!    constrained cut first, seeded with the rotation classes. Bounded by a
//!    node budget.
//!
//! Whatever is found is re-checked with `verify_balance` before it is returned.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::labeling::{host_labeling_rotation, verify_balance, Labeling};
use crate::product::{build_cut_family, CutFamily, FactorKind, ProductShape, ProductSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverStrategy {
    /// The rotation labeling was already balanced.
    Seed,
    Linear,
    VertexSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub linear_node_budget: u64,
    pub vertex_node_budget: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            linear_node_budget: 2_000_000,
            vertex_node_budget: 20_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub enum SolverOutcome {
    Found {
        labeling: Labeling,
        strategy: SolverStrategy,
    },
    Infeasible {
        reason: String,
    },
}

pub fn host_labeling_solver(spec: &ProductSpec, p: u32) -> Result<SolverOutcome> {
    solve_with(spec, p, SolverConfig::default())
}

pub fn solve_with(spec: &ProductSpec, p: u32, config: SolverConfig) -> Result<SolverOutcome> {
    if p < 1 || p >= spec.r() {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= p < r = {}, got p = {p}",
            spec.r()
        )));
    }
    let family = build_cut_family(spec);
    let seed = host_labeling_rotation(spec);
    if verify_balance(&family, &seed, p)?.passed() {
        return Ok(SolverOutcome::Found {
            labeling: seed,
            strategy: SolverStrategy::Seed,
        });
    }
    let shape = spec.shape();

    if let Some(classes) = linear_class_search(spec, p, config.linear_node_budget) {
        let labeling = labeling_from_classes(&shape, &classes, p)?;
        if verify_balance(&family, &labeling, p)?.passed() {
            return Ok(SolverOutcome::Found {
                labeling,
                strategy: SolverStrategy::Linear,
            });
        }
        log::error!("linear assignment for {spec}, p = {p} failed re-verification");
    }

    let mask = (1u32 << p) - 1;
    let seed_classes: Vec<u32> = seed.labels().iter().map(|&l| (l as u32 - 1) & mask).collect();
    match vertex_class_search(&family, p, &seed_classes, config.vertex_node_budget) {
        VertexSearch::Found(classes) => {
            let labeling = labeling_from_classes(&shape, &classes, p)?;
            if verify_balance(&family, &labeling, p)?.passed() {
                Ok(SolverOutcome::Found {
                    labeling,
                    strategy: SolverStrategy::VertexSearch,
                })
            } else {
                Ok(SolverOutcome::Infeasible {
                    reason: "vertex search result failed re-verification".into(),
                })
            }
        }
        VertexSearch::Infeasible => Ok(SolverOutcome::Infeasible {
            reason: "exhaustive vertex search found no balanced assignment".into(),
        }),
        VertexSearch::BudgetExhausted => Ok(SolverOutcome::Infeasible {
            reason: format!("vertex search budget of {} nodes exhausted", config.vertex_node_budget),
        }),
    }
}

/// Labels from classes: within class `c`, vertices in mixed-radix order get
/// `c + 1, c + 1 + 2^p, c + 1 + 2 * 2^p, ...`.
pub fn labeling_from_classes(shape: &ProductShape, classes: &[u32], p: u32) -> Result<Labeling> {
    let n = shape.vertex_count();
    let k = 1usize << p;
    if classes.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{} classes for {n} vertices",
            classes.len()
        )));
    }
    let mut next = vec![0usize; k];
    let mut labels = Vec::with_capacity(n);
    for &c in classes {
        let c = c as usize;
        if c >= k {
            return Err(Error::InvalidParameter(format!("class {c} out of range")));
        }
        labels.push(c + 1 + next[c] * k);
        next[c] += 1;
    }
    if next.iter().any(|&used| used != n / k) {
        return Err(Error::InvalidParameter("classes are not equally sized".into()));
    }
    Labeling::from_labels(shape.clone(), labels)
}

fn rank(vectors: impl IntoIterator<Item = u32>) -> u32 {
    // xor basis indexed by leading bit
    let mut basis = [0u32; 32];
    let mut rank = 0;
    for mut v in vectors {
        while v != 0 {
            let top = 31 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    rank
}

#[derive(Debug)]
enum Condition {
    /// The listed columns must have rank `p`.
    FullRank(Vec<usize>),
    /// Column `col` must lie in the span of `within`.
    InSpan { col: usize, within: Vec<usize> },
}

/// Searches linear class maps. Returns one class per mixed-radix index.
pub fn linear_class_search(spec: &ProductSpec, p: u32, node_budget: u64) -> Option<Vec<u32>> {
    let r = spec.r();
    // column ids: dimension i owns bits first[i] .. first[i] + r_i, low bit first
    let mut first = Vec::new();
    let mut acc = 0;
    for f in spec.factors() {
        first.push(acc);
        acc += f.log_size as usize;
    }
    let bits_of = |i: usize| first[i]..first[i] + spec.factors()[i].log_size as usize;
    let others = |i: usize| (0..spec.n()).filter(move |&k| k != i).flat_map(bits_of);

    let mut conditions = Vec::new();
    for (i, f) in spec.factors().iter().enumerate() {
        match f.kind {
            FactorKind::Path => {
                // aligned blocks of 2^t positions must hold every class equally
                let t = p.saturating_sub(r - f.log_size) as usize;
                let cols = others(i).chain(bits_of(i).take(t)).collect();
                conditions.push(Condition::FullRank(cols));
            }
            FactorKind::Cycle => {
                let top = bits_of(i).end - 1;
                let cols = others(i).chain(bits_of(i).filter(|&b| b != top)).collect();
                conditions.push(Condition::FullRank(cols));
                conditions.push(Condition::InSpan {
                    col: top,
                    within: others(i).collect(),
                });
            }
        }
    }

    let mut search = LinearSearch {
        p,
        conditions,
        columns: vec![None; r as usize],
        nodes: 0,
        budget: node_budget,
    };
    if !search.extend(0, 0) {
        return None;
    }
    let cols: Vec<u32> = search.columns.iter().map(|c| c.unwrap()).collect();
    let shape = spec.shape();
    let classes = (0..shape.vertex_count())
        .map(|index| {
            let c = shape.coord(index);
            c.0.iter()
                .enumerate()
                .flat_map(|(i, &x)| bits_of(i).enumerate().filter(move |(b, _)| x >> b & 1 == 1))
                .fold(0, |acc, (_, col)| acc ^ cols[col])
        })
        .collect();
    Some(classes)
}

struct LinearSearch {
    p: u32,
    conditions: Vec<Condition>,
    columns: Vec<Option<u32>>,
    nodes: u64,
    budget: u64,
}

impl LinearSearch {
    fn consistent(&self) -> bool {
        self.conditions.iter().all(|cond| match cond {
            Condition::FullRank(cols) => {
                let assigned = cols.iter().filter_map(|&c| self.columns[c]);
                let open = cols.iter().filter(|&&c| self.columns[c].is_none()).count() as u32;
                rank(assigned) + open >= self.p
            }
            Condition::InSpan { col, within } => {
                let (Some(v), true) = (self.columns[*col], within.iter().all(|&c| self.columns[c].is_some())) else {
                    return true;
                };
                let span: Vec<u32> = within.iter().map(|&c| self.columns[c].unwrap()).collect();
                rank(span.iter().copied()) == rank(span.iter().copied().chain([v]))
            }
        })
    }

    // Columns are filled left to right; `dim` is the rank of the columns so far,
    // which in canonical form span exactly the low `dim` coordinate bits.
    fn extend(&mut self, next: usize, dim: u32) -> bool {
        if next == self.columns.len() {
            return dim == self.p;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let fresh = (dim < self.p).then(|| 1u32 << dim);
        let candidates = fresh.into_iter().chain(0..(1u32 << dim));
        for value in candidates {
            self.columns[next] = Some(value);
            let new_dim = if Some(value) == fresh { dim + 1 } else { dim };
            if self.consistent() && self.extend(next + 1, new_dim) {
                return true;
            }
        }
        self.columns[next] = None;
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexSearch {
    Found(Vec<u32>),
    Infeasible,
    BudgetExhausted,
}

struct Side {
    size: usize,
    floor: usize,
    /// Classes allowed to reach `floor + 1`.
    extra: usize,
    counts: Vec<usize>,
    at_ceiling: usize,
    /// Σ max(0, floor - count).
    deficit: usize,
    open: usize,
}

/// Backtracking over per-vertex classes (indexed by mixed-radix index).
///
/// Vertices are visited cut by cut, smallest side first. Each vertex tries the
/// classes already in use (its seed class first) and one unused class, since
/// unused classes are interchangeable.
pub fn vertex_class_search(family: &CutFamily, p: u32, seed: &[u32], node_budget: u64) -> VertexSearch {
    let n = family.shape().vertex_count();
    let k = 1usize << p;
    let mut sides: Vec<Side> = Vec::new();
    let mut member: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut add_side = |ids: &mut dyn Iterator<Item = usize>, sides: &mut Vec<Side>| {
        let s = sides.len();
        let mut size = 0;
        for id in ids {
            member[id - 1].push(s);
            size += 1;
        }
        let floor = size / k;
        sides.push(Side {
            size,
            floor,
            extra: size % k,
            counts: vec![0; k],
            at_ceiling: 0,
            deficit: floor * k,
            open: size,
        });
    };
    add_side(&mut (1..=n), &mut sides);
    for cut in family.cuts() {
        add_side(&mut cut.side_a().iter().copied(), &mut sides);
        add_side(&mut cut.side_b().iter().copied(), &mut sides);
    }

    let mut order_of_sides: Vec<usize> = (1..sides.len()).collect();
    order_of_sides.sort_by_key(|&s| (sides[s].size, s));
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in order_of_sides {
        for v in 0..n {
            if !placed[v] && member[v].contains(&s) {
                placed[v] = true;
                order.push(v);
            }
        }
    }
    order.extend((0..n).filter(|&v| !placed[v]));

    let mut state = VertexState {
        k,
        sides,
        member,
        order,
        seed,
        classes: vec![u32::MAX; n],
        used: vec![0; k],
        nodes: 0,
        budget: node_budget,
    };
    match state.assign(0) {
        Some(true) => VertexSearch::Found(state.classes),
        Some(false) => VertexSearch::Infeasible,
        None => VertexSearch::BudgetExhausted,
    }
}

struct VertexState<'a> {
    k: usize,
    sides: Vec<Side>,
    member: Vec<Vec<usize>>,
    order: Vec<usize>,
    seed: &'a [u32],
    classes: Vec<u32>,
    used: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl VertexState<'_> {
    fn fits(&self, v: usize, c: usize) -> bool {
        self.member[v].iter().all(|&s| {
            let side = &self.sides[s];
            let now = side.counts[c] + 1;
            if now > side.floor + usize::from(side.extra > 0) {
                return false;
            }
            if now == side.floor + 1 && side.at_ceiling + 1 > side.extra {
                return false;
            }
            let deficit = side.deficit - usize::from(now <= side.floor);
            deficit < side.open
        })
    }

    fn apply(&mut self, v: usize, c: usize, undo: bool) {
        for &s in &self.member[v] {
            let side = &mut self.sides[s];
            if undo {
                if side.counts[c] == side.floor + 1 {
                    side.at_ceiling -= 1;
                }
                if side.counts[c] <= side.floor {
                    side.deficit += 1;
                }
                side.counts[c] -= 1;
                side.open += 1;
            } else {
                side.counts[c] += 1;
                if side.counts[c] <= side.floor {
                    side.deficit -= 1;
                }
                if side.counts[c] == side.floor + 1 {
                    side.at_ceiling += 1;
                }
                side.open -= 1;
            }
        }
        if undo {
            self.used[c] -= 1;
            self.classes[v] = u32::MAX;
        } else {
            self.used[c] += 1;
            self.classes[v] = c as u32;
        }
    }

    /// `Some(true)` found, `Some(false)` exhausted, `None` out of budget.
    fn assign(&mut self, depth: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let v = self.order[depth];
        let seed = self.seed.get(v).map(|&c| c as usize).filter(|&c| c < self.k);
        let mut candidates: Vec<usize> = Vec::with_capacity(self.k);
        if let Some(c) = seed.filter(|&c| self.used[c] > 0) {
            candidates.push(c);
        }
        candidates.extend((0..self.k).filter(|&c| self.used[c] > 0 && Some(c) != seed));
        let unused = seed
            .filter(|&c| self.used[c] == 0)
            .or_else(|| (0..self.k).find(|&c| self.used[c] == 0));
        candidates.extend(unused);

        for c in candidates {
            if !self.fits(v, c) {
                continue;
            }
            self.apply(v, c, false);
            match self.assign(depth + 1) {
                Some(false) => {}
                other => return other,
            }
            self.apply(v, c, true);
        }
        Some(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::verify_balance;

    fn spec(s: &str) -> ProductSpec {
        ProductSpec::parse(s, true).unwrap()
    }

    #[test]
    fn rank_basics() {
        assert_eq!(rank([0b01, 0b10, 0b11]), 2);
        assert_eq!(rank([0, 0]), 0);
        assert_eq!(rank([0b100, 0b110, 0b011]), 3);
    }

    #[test]
    fn q3_with_four_classes_needs_search() {
        let s = spec("P1,P1,P1");
        let SolverOutcome::Found { labeling, strategy } = host_labeling_solver(&s, 2).unwrap() else {
            panic!("Q3 with p = 2 is feasible");
        };
        assert_ne!(strategy, SolverStrategy::Seed);
        assert!(verify_balance(&build_cut_family(&s), &labeling, 2).unwrap().passed());
    }

    // Every face of Q3 must hold one vertex per class, which forces each class
    // to be an antipodal pair.
    #[test]
    fn q3_solution_pairs_antipodes() {
        let s = spec("P1,P1,P1");
        let SolverOutcome::Found { labeling, .. } = host_labeling_solver(&s, 2).unwrap() else {
            panic!()
        };
        for l in 1..=8 {
            let a = labeling.coord_of(l).unwrap();
            let partner = if l <= 4 { l + 4 } else { l - 4 };
            let b = labeling.coord_of(partner).unwrap();
            assert!(a.0.iter().zip(&b.0).all(|(x, y)| x != y), "{l} and {partner}");
        }
    }

    #[test]
    fn solver_keeps_balanced_seed() {
        for (d, p) in [("P1,P2", 1), ("P1,P1,P1", 1), ("C2,C2,C2", 1)] {
            let s = spec(d);
            let SolverOutcome::Found { labeling, strategy } = host_labeling_solver(&s, p).unwrap() else {
                panic!()
            };
            assert_eq!(strategy, SolverStrategy::Seed);
            assert_eq!(labeling, host_labeling_rotation(&s));
        }
    }

    #[test]
    fn vertex_search_alone_balances_small_hosts() {
        for (d, p) in [("P1,P1,P1", 2), ("P1,P1,P1,P1", 2), ("P1,P1,C2", 2), ("P1,P1,P2", 3)] {
            let s = spec(d);
            let fam = build_cut_family(&s);
            let VertexSearch::Found(classes) = vertex_class_search(&fam, p, &[], 1_000_000) else {
                panic!("{d} p = {p}");
            };
            let lab = labeling_from_classes(&s.shape(), &classes, p).unwrap();
            assert!(verify_balance(&fam, &lab, p).unwrap().passed(), "{d} p = {p}");
        }
    }

    #[test]
    fn vertex_search_stops_at_budget() {
        let s = spec("P1,P1,P1,P1");
        let fam = build_cut_family(&s);
        assert_eq!(vertex_class_search(&fam, 2, &[], 1), VertexSearch::BudgetExhausted);
    }

    #[test]
    fn linear_search_handles_tori_and_tight_paths() {
        for (d, p) in [("C2,C2,C2", 5), ("P1,P1,P6", 7), ("P2,C2,C4", 7), ("C2", 1)] {
            let s = spec(d);
            let classes = linear_class_search(&s, p, 1_000_000).unwrap_or_else(|| panic!("{d}"));
            let lab = labeling_from_classes(&s.shape(), &classes, p).unwrap();
            assert!(
                verify_balance(&build_cut_family(&s), &lab, p).unwrap().passed(),
                "{d} p = {p}"
            );
        }
    }

    #[test]
    fn labeling_from_classes_validates() {
        let shape = spec("P1,P1").shape();
        assert!(labeling_from_classes(&shape, &[0, 0, 0, 1], 1).is_err());
        assert!(labeling_from_classes(&shape, &[0, 1, 2, 1], 1).is_err());
        let lab = labeling_from_classes(&shape, &[0, 1, 1, 0], 1).unwrap();
        assert_eq!(lab.labels(), &[1, 2, 4, 3]);
    }

    #[test]
    fn invalid_p_is_rejected() {
        assert!(host_labeling_solver(&spec("P1,P1,P1"), 3).is_err());
        assert!(host_labeling_solver(&spec("P1,P1,P1"), 0).is_err());
    }
}
