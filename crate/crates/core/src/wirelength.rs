//! Embedding evaluation and the closed forms for the minimum wirelength.
//!
//! The same total is reached three ways:
//!
//! * distance sum: `Σ_{uv ∈ E(G)} |P_f(uv)|` over the routed paths,
//! * congestion sum: `Σ_S EC_f(S)` over a cut family partitioning `E(H)`,
//!   where each `EC_f(S)` is read off the cut's side as
//!   `Σ_{v ∈ M} deg_G(v) - 2 |E(G[M])|`,
//! * the closed form [`wl_formula`].
//!
//! [`lower_bound`] replaces each cut's congestion with the least value any
//! embedding can reach on it, which turns equality with an achieved
//! wirelength into an optimality certificate.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{self, Edge, Graph};
use crate::labeling::{guest_labeling, Labeling};
use crate::multipartite::{self, MultipartiteSpec};
use crate::product::{build_cut_family, CutFamily, DimensionOrderRouter, FactorKind, ProductSpec};

/// Chooses the host path for each guest edge.
pub trait Router {
    /// Host vertices from `u` to `v`, both included.
    fn route(&self, u: usize, v: usize) -> Vec<usize>;

    fn distance(&self, u: usize, v: usize) -> usize {
        self.route(u, v).len() - 1
    }
}

/// Shortest paths in an arbitrary connected host. Ties go to the
/// smallest-numbered next vertex.
#[derive(Debug, Clone)]
pub struct ShortestPathRouter<'a> {
    host: &'a Graph,
    dist: Vec<Vec<usize>>,
}

impl<'a> ShortestPathRouter<'a> {
    pub fn new(host: &'a Graph) -> Result<Self> {
        Ok(ShortestPathRouter {
            host,
            dist: graphs::all_pairs_distances(host)?,
        })
    }
}

impl Router for ShortestPathRouter<'_> {
    fn route(&self, u: usize, v: usize) -> Vec<usize> {
        let mut path = vec![u];
        let mut cur = u;
        while cur != v {
            let want = self.dist[cur - 1][v - 1] - 1;
            cur = *self
                .host
                .neighbors(cur)
                .iter()
                .find(|&&w| self.dist[w - 1][v - 1] == want)
                .expect("a neighbor one step closer exists");
            path.push(cur);
        }
        path
    }

    fn distance(&self, u: usize, v: usize) -> usize {
        self.dist[u - 1][v - 1]
    }
}

/// An injective vertex map from guest to host plus a routing rule.
pub struct Embedding<'a> {
    guest: &'a Graph,
    host: &'a Graph,
    map: Vec<usize>,
    router: &'a dyn Router,
}

impl<'a> Embedding<'a> {
    /// `map[v - 1]` is the host vertex of guest vertex `v`.
    pub fn new(guest: &'a Graph, host: &'a Graph, map: Vec<usize>, router: &'a dyn Router) -> Result<Self> {
        if map.len() != guest.vertex_count() {
            return Err(Error::InvalidEmbedding(format!(
                "map has {} entries for {} guest vertices",
                map.len(),
                guest.vertex_count()
            )));
        }
        let mut hit = vec![false; host.vertex_count()];
        for &h in &map {
            if !host.contains(h) {
                return Err(Error::VertexOutOfRange {
                    vertex: h,
                    count: host.vertex_count(),
                });
            }
            if std::mem::replace(&mut hit[h - 1], true) {
                return Err(Error::InvalidEmbedding(format!("host vertex {h} is used twice")));
            }
        }
        Ok(Embedding {
            guest,
            host,
            map,
            router,
        })
    }

    /// `f(x) = x`.
    pub fn identity(guest: &'a Graph, host: &'a Graph, router: &'a dyn Router) -> Result<Self> {
        Self::new(guest, host, guest.vertices().collect(), router)
    }

    pub fn guest(&self) -> &Graph {
        self.guest
    }

    pub fn host(&self) -> &Graph {
        self.host
    }

    pub fn image(&self, v: usize) -> usize {
        self.map[v - 1]
    }

    fn routed_edges(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.guest
            .edges()
            .map(|e| self.router.route(self.image(e.u), self.image(e.v)))
    }
}

/// `Σ` routed path lengths over guest edges.
pub fn wirelength_by_distance(emb: &Embedding) -> u64 {
    emb.guest
        .edges()
        .map(|e| emb.router.distance(emb.image(e.u), emb.image(e.v)) as u64)
        .sum()
}

/// Per-cut congestion values in family order, and their total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongestionSum {
    pub per_cut: Vec<u64>,
    pub total: u64,
}

/// Sums `EC_f(S) = Σ_{v ∈ M} deg_G(v) - 2 |E(G[M])|` over a cut family whose
/// vertex ids are host vertices; `M` is the preimage of side A.
pub fn wirelength_by_congestion(emb: &Embedding, family: &CutFamily) -> Result<CongestionSum> {
    family.verify_partition(emb.host)?;
    let n = emb.guest.vertex_count();
    let mut preimage = vec![None; emb.host.vertex_count()];
    for v in emb.guest.vertices() {
        preimage[emb.image(v) - 1] = Some(v);
    }
    let adjacency: Vec<FixedBitSet> = emb
        .guest
        .vertices()
        .map(|v| {
            let mut set = FixedBitSet::with_capacity(n);
            emb.guest.neighbors(v).iter().for_each(|&w| set.insert(w - 1));
            set
        })
        .collect();

    let mut per_cut = Vec::with_capacity(family.len());
    let mut inside = FixedBitSet::with_capacity(n);
    for cut in family.cuts() {
        inside.clear();
        cut.side_a()
            .iter()
            .filter_map(|&h| preimage[h - 1])
            .for_each(|v| inside.insert(v - 1));
        let degree_sum: u64 = inside.ones().map(|i| emb.guest.degree(i + 1) as u64).sum();
        let twice_internal: u64 = inside
            .ones()
            .map(|i| adjacency[i].intersection_count(&inside) as u64)
            .sum();
        per_cut.push(degree_sum - twice_internal);
    }
    let total = per_cut.iter().sum();
    Ok(CongestionSum { per_cut, total })
}

/// Longest routed path.
pub fn dilation(emb: &Embedding) -> u64 {
    emb.routed_edges().map(|p| p.len() as u64 - 1).max().unwrap_or(0)
}

/// How many routed paths use each host edge.
pub fn edge_congestions(emb: &Embedding) -> HashMap<Edge, u64> {
    let mut load = HashMap::new();
    for path in emb.routed_edges() {
        for w in path.windows(2) {
            *load.entry(Edge::new(w[0], w[1])).or_insert(0) += 1;
        }
    }
    load
}

pub fn max_edge_congestion(emb: &Embedding) -> u64 {
    edge_congestions(emb).into_values().max().unwrap_or(0)
}

fn check_theorem_args(spec: &ProductSpec, p: u32) -> Result<MultipartiteSpec> {
    spec.check_theorem_mode()?;
    MultipartiteSpec::new(p, spec.r())
}

fn pow2(exp: u32) -> Result<u128> {
    1u128
        .checked_shl(exp)
        .filter(|_| exp < 127)
        .ok_or(Error::Overflow("power of two"))
}

fn mul(a: u128, b: u128) -> Result<u128> {
    a.checked_mul(b).ok_or(Error::Overflow("wirelength formula"))
}

/// Closed-form minimum wirelength of `K_{2^{r-p}, .., 2^{r-p}}` into the host:
///
/// `Σ_{path i} 2^{2r - r_i - p} (2^p - 1) (2^{2 r_i} - 1) / 6 + Σ_{cycle j} 2^{2r + r_j - p - 3} (2^p - 1)`.
///
/// Exact integer arithmetic; the division by 6 is exact.
pub fn wl_formula(spec: &ProductSpec, p: u32) -> Result<u128> {
    check_theorem_args(spec, p)?;
    let r = spec.r();
    let classes_less_one = pow2(p)? - 1;
    let mut total = 0u128;
    for f in spec.factors() {
        let term = match f.kind {
            FactorKind::Path => {
                let numerator = mul(
                    mul(pow2(2 * r - f.log_size - p)?, classes_less_one)?,
                    pow2(2 * f.log_size)? - 1,
                )?;
                assert_eq!(numerator % 6, 0, "path term must be divisible by 6");
                numerator / 6
            }
            FactorKind::Cycle => mul(pow2(2 * r + f.log_size - p - 3)?, classes_less_one)?,
        };
        total = total.checked_add(term).ok_or(Error::Overflow("wirelength formula"))?;
    }
    Ok(total)
}

/// Predicted congestion of one cut: `2^{2r - 2r_i - p} (2^p - 1) (2^{r_i} - j) j`
/// for path cut `S_i^j`, `2^{2r - p - 2} (2^p - 1)` for cycle cut `T_i^j`.
///
/// `dim` and `j` are 1-based. The path value is a fraction when `2^p` does not
/// divide the side size `2^{r - r_i} j`.
pub fn ec_cut_formula(spec: &ProductSpec, p: u32, dim: usize, j: usize) -> Result<Ratio<u128>> {
    check_theorem_args(spec, p)?;
    let r = spec.r();
    let f = dim
        .checked_sub(1)
        .and_then(|i| spec.factors().get(i))
        .ok_or_else(|| Error::InvalidParameter(format!("dimension {dim} out of range")))?;
    let classes_less_one = pow2(p)? - 1;
    let len = f.len();
    match f.kind {
        FactorKind::Path => {
            if j < 1 || j >= len {
                return Err(Error::InvalidParameter(format!("path cut index {j} out of 1..{len}")));
            }
            let body = mul(classes_less_one, ((len - j) * j) as u128)?;
            // exponent 2r - 2r_i - p may be negative
            let exp = 2 * r as i64 - 2 * f.log_size as i64 - p as i64;
            Ok(if exp >= 0 {
                Ratio::from_integer(mul(body, pow2(exp as u32)?)?)
            } else {
                Ratio::new(body, pow2((-exp) as u32)?)
            })
        }
        FactorKind::Cycle => {
            if j < 1 || j > len / 2 {
                return Err(Error::InvalidParameter(format!(
                    "cycle cut index {j} out of 1..={}",
                    len / 2
                )));
            }
            Ok(Ratio::from_integer(mul(pow2(2 * r - p - 2)?, classes_less_one)?))
        }
    }
}

/// Least congestion any bijective embedding can put on a cut whose side has
/// `m` vertices: `m deg - 2 I_G(m)`.
pub fn cut_minimum(guest: &MultipartiteSpec, m: usize) -> Result<u128> {
    let ig = multipartite::ig_formula(guest.num_parts(), guest.part_size(), m)? as u128;
    Ok(m as u128 * multipartite::degree(guest) as u128 - 2 * ig)
}

/// `Σ_S (|M_S| deg - 2 I_G(|M_S|))` over the cut family: no embedding of the
/// guest into the host has smaller wirelength.
pub fn lower_bound(spec: &ProductSpec, p: u32) -> Result<u128> {
    let guest = check_theorem_args(spec, p)?;
    let r = spec.r();
    let mut total = 0u128;
    for f in spec.factors() {
        match f.kind {
            FactorKind::Path => {
                let slice = 1usize << (r - f.log_size);
                for j in 1..f.len() {
                    total += cut_minimum(&guest, slice * j)?;
                }
            }
            FactorKind::Cycle => {
                total += (f.len() / 2) as u128 * cut_minimum(&guest, 1 << (r - 1))?;
            }
        }
    }
    Ok(total)
}

/// Whether every path-cut side size `2^{r - r_i} j` is a multiple of `2^p`,
/// i.e. `p <= r - r_i` for every path factor. Exactly then the per-cut
/// formulas give whole numbers and [`wl_formula`] equals [`lower_bound`].
pub fn formula_hypothesis_holds(spec: &ProductSpec, p: u32) -> bool {
    let r = spec.r();
    spec.factors()
        .iter()
        .filter(|f| f.kind == FactorKind::Path)
        .all(|f| p <= r - f.log_size)
}

/// One row of the per-cut table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutReport {
    pub dim: usize,
    pub id: usize,
    pub kind: FactorKind,
    pub side_size: usize,
    pub congestion: u64,
    /// Predicted congestion, rendered exactly (`a` or `a/b`).
    pub predicted: Option<String>,
    pub minimum: Option<u128>,
    /// Congestion equals the cut minimum.
    pub optimal: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WirelengthReport {
    pub wl_distance: u64,
    pub wl_congestion: u64,
    pub wl_formula: Option<u128>,
    pub lower_bound: Option<u128>,
    pub dilation: u64,
    pub max_edge_congestion: u64,
    pub per_cut: Vec<CutReport>,
}

impl WirelengthReport {
    /// All four totals are present and equal.
    pub fn certified(&self) -> bool {
        let wl = self.wl_distance as u128;
        self.wl_distance == self.wl_congestion && self.wl_formula == Some(wl) && self.lower_bound == Some(wl)
    }
}

/// Evaluates an embedding against a cut family given in host vertex ids.
/// Formula fields stay empty.
pub fn evaluate(emb: &Embedding, family: &CutFamily) -> Result<WirelengthReport> {
    let congestion = wirelength_by_congestion(emb, family)?;
    let per_cut = family
        .cuts()
        .iter()
        .zip(&congestion.per_cut)
        .map(|(c, &ec)| CutReport {
            dim: c.dim,
            id: c.id,
            kind: c.kind,
            side_size: c.side_a().len(),
            congestion: ec,
            predicted: None,
            minimum: None,
            optimal: None,
        })
        .collect();
    Ok(WirelengthReport {
        wl_distance: wirelength_by_distance(emb),
        wl_congestion: congestion.total,
        wl_formula: None,
        lower_bound: None,
        dilation: dilation(emb),
        max_edge_congestion: max_edge_congestion(emb),
        per_cut,
    })
}

fn render_ratio(x: &Ratio<u128>) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Full report for the identity embedding of the round-robin guest into the
/// labeled host, with dimension-order routing.
pub fn certify(spec: &ProductSpec, p: u32, labeling: &Labeling) -> Result<WirelengthReport> {
    let guest_spec = check_theorem_args(spec, p)?;
    if labeling.shape() != &spec.shape() {
        return Err(Error::InvalidParameter("labeling does not match the host spec".into()));
    }
    let guest = guest_labeling(guest_spec).graph();
    let host = labeling.host_graph();
    let router = DimensionOrderRouter::new(labeling);
    let emb = Embedding::identity(&guest, &host, &router)?;
    let family = build_cut_family(spec).relabel(labeling);
    let mut report = evaluate(&emb, &family)?;
    for row in &mut report.per_cut {
        let minimum = cut_minimum(&guest_spec, row.side_size)?;
        row.predicted = Some(render_ratio(&ec_cut_formula(spec, p, row.dim, row.id)?));
        row.minimum = Some(minimum);
        row.optimal = Some(row.congestion as u128 == minimum);
    }
    report.wl_formula = Some(wl_formula(spec, p)?);
    report.lower_bound = Some(lower_bound(spec, p)?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{cartesian_product, make_cycle, make_path};
    use crate::labeling::host_labeling_rotation;
    use crate::product::{Dimension, ProductShape};

    fn spec(s: &str) -> ProductSpec {
        ProductSpec::parse(s, true).unwrap()
    }

    fn fig1() -> (Graph, Graph) {
        let c3 = make_cycle(3).unwrap();
        (cartesian_product(&[c3.clone(), c3]).unwrap(), make_path(9).unwrap())
    }

    #[test]
    fn fig1_metrics() {
        let (torus, path) = fig1();
        let router = ShortestPathRouter::new(&path).unwrap();
        let emb = Embedding::identity(&torus, &path, &router).unwrap();
        assert_eq!(wirelength_by_distance(&emb), 48);
        assert_eq!(dilation(&emb), 6);
        assert_eq!(max_edge_congestion(&emb), 8);
        assert_eq!(edge_congestions(&emb)[&Edge::new(4, 5)], 8);

        let shape = ProductShape::new(vec![Dimension {
            kind: FactorKind::Path,
            len: 9,
        }])
        .unwrap();
        let family = CutFamily::new(shape).unwrap();
        let sum = wirelength_by_congestion(&emb, &family).unwrap();
        assert_eq!(sum.per_cut, vec![4, 6, 6, 8, 8, 6, 6, 4]);
        assert_eq!(sum.total, 48);
    }

    #[test]
    fn self_embedding_is_tight() {
        let g = cartesian_product(&[make_path(2).unwrap(), make_cycle(4).unwrap()]).unwrap();
        let router = ShortestPathRouter::new(&g).unwrap();
        let emb = Embedding::identity(&g, &g, &router).unwrap();
        assert_eq!(wirelength_by_distance(&emb), g.edge_count() as u64);
        assert_eq!(dilation(&emb), 1);
        assert_eq!(max_edge_congestion(&emb), 1);
    }

    #[test]
    fn embedding_validation() {
        let (torus, path) = fig1();
        let router = ShortestPathRouter::new(&path).unwrap();
        assert!(Embedding::new(&torus, &path, vec![1; 9], &router).is_err());
        assert!(Embedding::new(&torus, &path, (1..=8).collect(), &router).is_err());
        assert!(Embedding::new(&torus, &path, (2..=10).collect(), &router).is_err());
    }

    #[test]
    fn congestion_rejects_foreign_cut_family() {
        let (torus, path) = fig1();
        let router = ShortestPathRouter::new(&path).unwrap();
        let emb = Embedding::identity(&torus, &path, &router).unwrap();
        let wrong = CutFamily::new(spec("P1,P1,P1").shape()).unwrap();
        assert!(wirelength_by_congestion(&emb, &wrong).is_err());
    }

    #[test]
    fn k44_into_q3() {
        let s = spec("P1,P1,P1");
        let report = certify(&s, 1, &host_labeling_rotation(&s)).unwrap();
        assert_eq!(report.wl_distance, 24);
        assert_eq!(
            report.per_cut.iter().map(|c| c.congestion).collect::<Vec<_>>(),
            vec![8, 8, 8]
        );
        assert!(report.certified());
    }

    #[test]
    fn formula_examples() {
        assert_eq!(wl_formula(&spec("P1,P1,P1"), 1).unwrap(), 24);
        assert_eq!(wl_formula(&spec("C2,C2,C2"), 1).unwrap(), 3072);
        assert_eq!(wl_formula(&spec("C2,P1,P1"), 1).unwrap(), 128);
        assert!(wl_formula(&spec("P1,P1,P1"), 3).is_err());
        assert!(wl_formula(&spec("P1,P1,P1"), 0).is_err());
        assert!(wl_formula(&"P1,P2".parse().unwrap(), 1).is_err());
    }

    #[test]
    fn per_cut_formula_examples() {
        let int = |x: u128| Ratio::from_integer(x);
        assert_eq!(ec_cut_formula(&spec("P1,P1,P1"), 1, 2, 1).unwrap(), int(8));
        assert_eq!(ec_cut_formula(&spec("P1,P1,C2"), 1, 3, 1).unwrap(), int(32));
        assert_eq!(ec_cut_formula(&spec("P1,P1,P2"), 1, 3, 2).unwrap(), int(32));
        assert_eq!(ec_cut_formula(&spec("P1,P1,P2"), 3, 3, 1).unwrap(), int(42));
        assert_eq!(ec_cut_formula(&spec("P1,P1,P4"), 5, 3, 1).unwrap(), Ratio::new(465, 2));
        assert!(ec_cut_formula(&spec("P1,P1,P1"), 1, 4, 1).is_err());
        assert!(ec_cut_formula(&spec("P1,P1,P1"), 1, 1, 2).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound(&spec("P1,P2"), 1).unwrap(), 28);
        assert_eq!(lower_bound(&spec("P1,P1,P1"), 1).unwrap(), 24);
        assert_eq!(lower_bound(&spec("P1,P1,P1"), 2).unwrap(), 36);
    }

    #[test]
    fn formula_below_bound_without_hypothesis() {
        let s = spec("P1,P1,P2");
        assert!(formula_hypothesis_holds(&s, 2));
        assert!(!formula_hypothesis_holds(&s, 3));
        assert_eq!(wl_formula(&s, 3).unwrap(), 252);
        assert_eq!(lower_bound(&s, 3).unwrap(), 256);
    }

    #[test]
    fn doubling_a_path_raises_the_formula() {
        for (small, big) in [
            ("P1,P1,P1", "P1,P1,P2"),
            ("P1,P2,C2", "P2,P2,C2"),
            ("C2,P2,P2", "C2,P2,P3"),
        ] {
            let (a, b) = (spec(small), spec(big));
            for p in 1..a.r() {
                assert!(
                    wl_formula(&b, p).unwrap() > wl_formula(&a, p).unwrap(),
                    "{small} -> {big}, p {p}"
                );
            }
        }
    }
}
