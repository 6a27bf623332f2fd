//! Brute-force ground truth for small graphs.
//!
//! Nothing here shares code with the closed forms it is used to check: subset
//! extremes come from enumerating vertex bitmasks, and the minimum wirelength
//! from enumerating bijections with BFS distances.

use crate::error::{Error, Result};
use crate::graphs::{self, Graph};

pub const SUBSET_CEILING: usize = 24;
pub const PERMUTATION_CEILING: usize = 8;

/// Largest graphs the exhaustive searches accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub subset_ceiling: usize,
    pub permutation_ceiling: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            subset_ceiling: SUBSET_CEILING,
            permutation_ceiling: PERMUTATION_CEILING,
        }
    }
}

impl OracleLimits {
    /// Raises both ceilings; anything above the defaults may take very long.
    pub fn with_ceiling(ceiling: usize) -> Self {
        if ceiling > SUBSET_CEILING {
            log::warn!("oracle ceiling {ceiling} is above the default; searches may take very long");
        }
        OracleLimits {
            subset_ceiling: ceiling.clamp(SUBSET_CEILING, 63),
            permutation_ceiling: ceiling.max(PERMUTATION_CEILING),
        }
    }
}

fn masks(g: &Graph) -> Vec<u64> {
    g.vertices()
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << (w - 1)))
        .collect()
}

fn check_subset_size(g: &Graph, k: usize, limits: &OracleLimits) -> Result<()> {
    let n = g.vertex_count();
    if n > limits.subset_ceiling.min(63) {
        return Err(Error::CeilingExceeded {
            what: "subset enumeration",
            size: n,
            ceiling: limits.subset_ceiling,
        });
    }
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds {n} vertices")));
    }
    Ok(())
}

/// Visits every `k`-subset of `0..n` as a bitmask (Gosper's hack).
fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(u64)) {
    if k == 0 {
        visit(0);
        return;
    }
    let mut set: u64 = (1 << k) - 1;
    let limit: u64 = 1 << n;
    while set < limit {
        visit(set);
        let c = set & set.wrapping_neg();
        let r = set + c;
        set = (((r ^ set) >> 2) / c) | r;
    }
}

fn internal(adj: &[u64], set: u64) -> u64 {
    let mut twice = 0;
    let mut rest = set;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        twice += (adj[i] & set).count_ones() as u64;
        rest &= rest - 1;
    }
    twice / 2
}

fn boundary(adj: &[u64], set: u64) -> u64 {
    let mut out = 0;
    let mut rest = set;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        out += (adj[i] & !set).count_ones() as u64;
        rest &= rest - 1;
    }
    out
}

/// `I_G(k)`: most edges induced by any `k` vertices.
pub fn ig_bruteforce(g: &Graph, k: usize) -> Result<u64> {
    ig_bruteforce_with(g, k, &OracleLimits::default())
}

pub fn ig_bruteforce_with(g: &Graph, k: usize, limits: &OracleLimits) -> Result<u64> {
    check_subset_size(g, k, limits)?;
    let adj = masks(g);
    let mut best = 0;
    for_each_subset(g.vertex_count(), k, |s| best = best.max(internal(&adj, s)));
    Ok(best)
}

/// `θ_G(k)`: fewest edges leaving any `k` vertices.
pub fn theta_bruteforce(g: &Graph, k: usize) -> Result<u64> {
    theta_bruteforce_with(g, k, &OracleLimits::default())
}

pub fn theta_bruteforce_with(g: &Graph, k: usize, limits: &OracleLimits) -> Result<u64> {
    check_subset_size(g, k, limits)?;
    let adj = masks(g);
    let mut best = u64::MAX;
    for_each_subset(g.vertex_count(), k, |s| best = best.min(boundary(&adj, s)));
    Ok(best)
}

/// For a regular graph, checks that the complement of every optimal `k`-set
/// is an optimal `(n - k)`-set.
pub fn complement_optimality_check(g: &Graph, k: usize) -> Result<bool> {
    if g.regular_degree().is_none() {
        return Err(Error::InvalidParameter(
            "complement optimality needs a regular graph".into(),
        ));
    }
    let limits = OracleLimits::default();
    check_subset_size(g, k, &limits)?;
    let n = g.vertex_count();
    let adj = masks(g);
    let best_k = ig_bruteforce_with(g, k, &limits)?;
    let best_rest = ig_bruteforce_with(g, n - k, &limits)?;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut holds = true;
    for_each_subset(n, k, |s| {
        if internal(&adj, s) == best_k && internal(&adj, all & !s) != best_rest {
            holds = false;
        }
    });
    Ok(holds)
}

/// Exact minimum wirelength with one optimal map (`witness[v - 1]` = host
/// vertex of guest vertex `v`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinWirelength {
    pub wirelength: u64,
    pub witness: Vec<usize>,
}

/// Minimum `Σ dist_H(f(u), f(v))` over all bijections `f`, by branch and bound
/// over partial maps.
pub fn min_wl_bruteforce(guest: &Graph, host: &Graph) -> Result<MinWirelength> {
    min_wl_bruteforce_with(guest, host, &OracleLimits::default())
}

pub fn min_wl_bruteforce_with(guest: &Graph, host: &Graph, limits: &OracleLimits) -> Result<MinWirelength> {
    let n = guest.vertex_count();
    if host.vertex_count() != n {
        return Err(Error::InvalidParameter(format!(
            "guest has {n} vertices but host has {}",
            host.vertex_count()
        )));
    }
    if n > limits.permutation_ceiling {
        return Err(Error::CeilingExceeded {
            what: "permutation search",
            size: n,
            ceiling: limits.permutation_ceiling,
        });
    }
    let dist = graphs::all_pairs_distances(host)?;
    // earlier[v] = guest neighbors of v placed before it
    let earlier: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            guest
                .neighbors(v + 1)
                .iter()
                .map(|w| w - 1)
                .filter(|&w| w < v)
                .collect()
        })
        .collect();
    let mut search = Permutations {
        dist,
        earlier,
        edges_left: guest.edge_count() as u64,
        map: vec![usize::MAX; n],
        used: vec![false; n],
        best: u64::MAX,
        witness: Vec::new(),
    };
    search.extend(0, 0);
    Ok(MinWirelength {
        wirelength: search.best,
        witness: search.witness.iter().map(|h| h + 1).collect(),
    })
}

struct Permutations {
    dist: Vec<Vec<usize>>,
    earlier: Vec<Vec<usize>>,
    edges_left: u64,
    map: Vec<usize>,
    used: Vec<bool>,
    best: u64,
    witness: Vec<usize>,
}

impl Permutations {
    fn extend(&mut self, v: usize, cost: u64) {
        if v == self.map.len() {
            if cost < self.best {
                self.best = cost;
                self.witness = self.map.clone();
            }
            return;
        }
        let placed_edges = self.earlier[v].len() as u64;
        for h in 0..self.map.len() {
            if self.used[h] {
                continue;
            }
            let added: u64 = self.earlier[v].iter().map(|&w| self.dist[h][self.map[w]] as u64).sum();
            // every edge still unplaced costs at least 1
            let remaining = self.edges_left - placed_edges;
            if cost + added + remaining >= self.best {
                continue;
            }
            self.used[h] = true;
            self.map[v] = h;
            self.edges_left -= placed_edges;
            self.extend(v + 1, cost + added);
            self.edges_left += placed_edges;
            self.used[h] = false;
        }
        self.map[v] = usize::MAX;
    }
}
