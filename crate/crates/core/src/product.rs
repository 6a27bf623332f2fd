//! Host-side structure: product descriptors, coordinates, the edge-cut
//! family that partitions the host, and dimension-order routing.
//!
//! Positions along a dimension are 0-based. Mixed-radix vertex ids put the
//! first dimension fastest: `id = 1 + x_1 + n_1 x_2 + n_1 n_2 x_3 + ...`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{self, Edge, Graph};
use crate::labeling::Labeling;
use crate::wirelength::Router;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FactorKind {
    Path,
    Cycle,
}

impl FactorKind {
    fn letter(self) -> char {
        match self {
            FactorKind::Path => 'P',
            FactorKind::Cycle => 'C',
        }
    }
}

/// One factor of a theorem-mode host: a path or cycle on `2^log_size` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FactorSpec {
    pub kind: FactorKind,
    pub log_size: u32,
}

impl FactorSpec {
    pub fn path(log_size: u32) -> Self {
        FactorSpec {
            kind: FactorKind::Path,
            log_size,
        }
    }

    pub fn cycle(log_size: u32) -> Self {
        FactorSpec {
            kind: FactorKind::Cycle,
            log_size,
        }
    }

    pub fn len(&self) -> usize {
        1 << self.log_size
    }

    fn validate(&self) -> std::result::Result<(), String> {
        match self.kind {
            FactorKind::Path if self.log_size < 1 => Err("path factors need log size >= 1".into()),
            FactorKind::Cycle if self.log_size < 2 => Err("cycle factors need log size >= 2".into()),
            _ if self.log_size > 24 => Err(format!("log size {} is too large", self.log_size)),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FactorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.letter(), self.log_size)
    }
}

/// Ordered factor list of a host built from power-of-two paths and cycles.
///
/// Sizes are nondecreasing. A relaxed spec may have been reordered to get
/// there and may have fewer than three factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ProductSpec {
    factors: Vec<FactorSpec>,
    relaxed: bool,
}

impl ProductSpec {
    /// Strict constructor: sizes must already be nondecreasing.
    pub fn new(factors: Vec<FactorSpec>) -> Result<Self> {
        Self::build(factors, false)
    }

    /// Relaxed constructor: reorders factors by size (stable) and allows `n < 3`.
    pub fn relaxed(factors: Vec<FactorSpec>) -> Result<Self> {
        Self::build(factors, true)
    }

    fn build(mut factors: Vec<FactorSpec>, relaxed: bool) -> Result<Self> {
        let err = |factors: &[FactorSpec], reason: String| Error::Descriptor {
            descriptor: join(factors),
            reason,
        };
        if factors.is_empty() {
            return Err(err(&factors, "no factors".into()));
        }
        for f in &factors {
            f.validate().map_err(|reason| err(&factors, reason))?;
        }
        if factors.iter().map(|f| f.log_size).sum::<u32>() > 30 {
            return Err(err(&factors, "more than 2^30 vertices".into()));
        }
        if !factors.windows(2).all(|w| w[0].log_size <= w[1].log_size) {
            if !relaxed {
                return Err(err(&factors, "factor sizes must be nondecreasing".into()));
            }
            let before = join(&factors);
            factors.sort_by_key(|f| f.log_size);
            log::warn!("reordered factors {before} -> {}", join(&factors));
        }
        Ok(ProductSpec { factors, relaxed })
    }

    /// Parses the descriptor grammar: comma-separated `P<k>` / `C<k>` tokens,
    /// `k` the log2 of the factor size.
    pub fn parse(descriptor: &str, relaxed: bool) -> Result<Self> {
        let bad = |reason: String| Error::Descriptor {
            descriptor: descriptor.to_string(),
            reason,
        };
        let mut factors = Vec::new();
        for token in descriptor.split(',').map(str::trim) {
            let mut chars = token.chars();
            let kind = match chars.next() {
                Some('P' | 'p') => FactorKind::Path,
                Some('C' | 'c') => FactorKind::Cycle,
                _ => return Err(bad(format!("token `{token}` must start with P or C"))),
            };
            let log_size = chars
                .as_str()
                .parse::<u32>()
                .map_err(|_| bad(format!("token `{token}` needs a log2 size")))?;
            factors.push(FactorSpec { kind, log_size });
        }
        Self::build(factors, relaxed).map_err(|e| match e {
            Error::Descriptor { reason, .. } => bad(reason),
            other => other,
        })
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    /// `r = Σ log_size`.
    pub fn r(&self) -> u32 {
        self.factors.iter().map(|f| f.log_size).sum()
    }

    pub fn vertex_count(&self) -> usize {
        1 << self.r()
    }

    pub fn is_relaxed(&self) -> bool {
        self.relaxed
    }

    /// Theorem mode needs at least three factors unless the spec is relaxed.
    pub fn check_theorem_mode(&self) -> Result<()> {
        if self.n() < 3 && !self.relaxed {
            return Err(Error::NotTheoremMode(format!(
                "{self} has {} factors; at least 3 are required (use relaxed mode for fewer)",
                self.n()
            )));
        }
        Ok(())
    }

    pub fn shape(&self) -> ProductShape {
        ProductShape::new(
            self.factors
                .iter()
                .map(|f| Dimension {
                    kind: f.kind,
                    len: f.len(),
                })
                .collect(),
        )
        .expect("validated factors form a valid shape")
    }

    /// Human-readable product, e.g. `P2□P2□C4`.
    pub fn pretty(&self) -> String {
        self.factors
            .iter()
            .map(|f| format!("{}{}", f.kind.letter(), f.len()))
            .collect::<Vec<_>>()
            .join("□")
    }
}

fn join(factors: &[FactorSpec]) -> String {
    factors.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for ProductSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.factors))
    }
}

impl FromStr for ProductSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProductSpec::parse(s, false)
    }
}

/// A factor of arbitrary length. Used where the host is not power-of-two,
/// such as a plain path host.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Dimension {
    pub kind: FactorKind,
    pub len: usize,
}

impl Dimension {
    fn graph(&self) -> Graph {
        match self.kind {
            FactorKind::Path => graphs::make_path(self.len),
            FactorKind::Cycle => graphs::make_cycle(self.len),
        }
        .expect("dimension lengths are validated")
    }

    /// Hop distance between two positions.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        let d = a.abs_diff(b);
        match self.kind {
            FactorKind::Path => d,
            FactorKind::Cycle => d.min(self.len - d),
        }
    }
}

/// A position tuple `(x_1, .., x_n)` with `x_i < len_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Coord(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductShape {
    dims: Vec<Dimension>,
    strides: Vec<usize>,
    total: usize,
}

impl ProductShape {
    pub fn new(dims: Vec<Dimension>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidParameter("product needs at least one dimension".into()));
        }
        let mut strides = Vec::with_capacity(dims.len());
        let mut total = 1usize;
        for d in &dims {
            match d.kind {
                FactorKind::Path if d.len < 1 => return Err(Error::InvalidParameter("empty path dimension".into())),
                FactorKind::Cycle if d.len < 3 => {
                    return Err(Error::InvalidParameter(format!("cycle of length {}", d.len)))
                }
                _ => {}
            }
            strides.push(total);
            total = total
                .checked_mul(d.len)
                .ok_or(Error::Overflow("product vertex count"))?;
        }
        Ok(ProductShape { dims, strides, total })
    }

    pub fn dims(&self) -> &[Dimension] {
        &self.dims
    }

    pub fn vertex_count(&self) -> usize {
        self.total
    }

    /// Coordinates of the 0-based mixed-radix index.
    pub fn coord(&self, index: usize) -> Coord {
        debug_assert!(index < self.total);
        Coord(
            self.dims
                .iter()
                .zip(&self.strides)
                .map(|(d, s)| (index / s) % d.len)
                .collect(),
        )
    }

    pub fn index(&self, c: &Coord) -> Result<usize> {
        if c.0.len() != self.dims.len() || c.0.iter().zip(&self.dims).any(|(&x, d)| x >= d.len) {
            return Err(Error::InvalidParameter(format!("coordinate {:?} out of range", c.0)));
        }
        Ok(c.0.iter().zip(&self.strides).map(|(x, s)| x * s).sum())
    }

    pub fn position(&self, index: usize, dim: usize) -> usize {
        (index / self.strides[dim]) % self.dims[dim].len
    }

    /// Shortest-path distance between two coordinates.
    pub fn distance(&self, a: &Coord, b: &Coord) -> usize {
        self.dims
            .iter()
            .zip(a.0.iter().zip(&b.0))
            .map(|(d, (&x, &y))| d.distance(x, y))
            .sum()
    }

    /// Host graph with mixed-radix vertex ids.
    pub fn graph(&self) -> Graph {
        let factors: Vec<Graph> = self.dims.iter().map(Dimension::graph).collect();
        graphs::cartesian_product(&factors).expect("shape is nonempty")
    }

    /// Dimension-order shortest path from `a` to `b`, inclusive of both ends.
    ///
    /// Dimensions are fixed in order. A cycle dimension takes the shorter arc;
    /// an exact half-cycle tie goes toward increasing position.
    pub fn route(&self, a: &Coord, b: &Coord) -> Vec<Coord> {
        let mut cur = a.clone();
        let mut path = vec![cur.clone()];
        for (i, d) in self.dims.iter().enumerate() {
            let target = b.0[i];
            let forward = (target + d.len - cur.0[i]) % d.len;
            let step_up = match d.kind {
                FactorKind::Path => target > cur.0[i],
                FactorKind::Cycle => forward <= d.len - forward,
            };
            while cur.0[i] != target {
                cur.0[i] = if step_up {
                    (cur.0[i] + 1) % d.len
                } else {
                    (cur.0[i] + d.len - 1) % d.len
                };
                path.push(cur.clone());
            }
        }
        path
    }
}

/// An edge cut of the host: removing `edges` leaves the two sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeCut {
    /// 1-based dimension index.
    pub dim: usize,
    /// 1-based cut index `j` within the dimension.
    pub id: usize,
    pub kind: FactorKind,
    edges: Vec<Edge>,
    side_a: Vec<usize>,
    side_b: Vec<usize>,
    #[serde(skip)]
    len: usize,
}

impl EdgeCut {
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Vertex ids on the first side, ascending.
    ///
    /// Path cut `S^j`: positions `< j`. Cycle cut `T^j`: the half-cycle arc
    /// `j, j+1, .., j+len/2-1` (mod len).
    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    /// Whether position `x` along this cut's dimension lies on side A.
    pub fn position_on_side_a(&self, x: usize) -> bool {
        match self.kind {
            FactorKind::Path => x < self.id,
            FactorKind::Cycle => (x + self.len - self.id) % self.len < self.len / 2,
        }
    }

    pub fn on_side_a(&self, c: &Coord) -> bool {
        self.position_on_side_a(c.0[self.dim - 1])
    }

    pub fn separates(&self, a: &Coord, b: &Coord) -> bool {
        self.on_side_a(a) != self.on_side_a(b)
    }
}

/// A partition of the host edges into the cuts `S_i^j` (path dimensions)
/// and `T_i^j` (cycle dimensions).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutFamily {
    shape: ProductShape,
    cuts: Vec<EdgeCut>,
    // index of the first cut of each dimension
    offsets: Vec<usize>,
}

pub fn build_cut_family(spec: &ProductSpec) -> CutFamily {
    CutFamily::new(spec.shape()).expect("power-of-two cycles have even length")
}

impl CutFamily {
    /// Vertex ids in the returned family are mixed-radix ids; see
    /// [`CutFamily::relabel`]. Cycle dimensions must have even length.
    pub fn new(shape: ProductShape) -> Result<Self> {
        let mut cuts = Vec::new();
        let mut offsets = Vec::new();
        for (i, d) in shape.dims().iter().enumerate() {
            offsets.push(cuts.len());
            let count = match d.kind {
                FactorKind::Path => d.len - 1,
                FactorKind::Cycle if d.len % 2 == 0 => d.len / 2,
                FactorKind::Cycle => {
                    return Err(Error::InvalidParameter(format!(
                        "cycle dimension {} has odd length {}",
                        i + 1,
                        d.len
                    )))
                }
            };
            for j in 1..=count {
                cuts.push(EdgeCut {
                    dim: i + 1,
                    id: j,
                    kind: d.kind,
                    edges: Vec::new(),
                    side_a: Vec::new(),
                    side_b: Vec::new(),
                    len: d.len,
                });
            }
        }
        let mut family = CutFamily { shape, cuts, offsets };
        for index in 0..family.shape.vertex_count() {
            let c = family.shape.coord(index);
            for cut in &mut family.cuts {
                if cut.on_side_a(&c) {
                    cut.side_a.push(index + 1);
                } else {
                    cut.side_b.push(index + 1);
                }
            }
        }
        let host = family.shape.graph();
        for e in host.edges() {
            let (a, b) = (family.shape.coord(e.u - 1), family.shape.coord(e.v - 1));
            let k = family.cut_of_edge(&a, &b).expect("host edges join adjacent positions");
            family.cuts[k].edges.push(e);
        }
        Ok(family)
    }

    pub fn shape(&self) -> &ProductShape {
        &self.shape
    }

    pub fn cuts(&self) -> &[EdgeCut] {
        &self.cuts
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    /// Index into [`CutFamily::cuts`] of the cut holding the host edge `a`–`b`.
    pub fn cut_of_edge(&self, a: &Coord, b: &Coord) -> Option<usize> {
        let mut differing = a.0.iter().zip(&b.0).enumerate().filter(|(_, (x, y))| x != y);
        let (i, (&x, &y)) = differing.next()?;
        if differing.next().is_some() {
            return None;
        }
        let d = self.shape.dims()[i];
        // t = lower end of the edge in the dimension's cyclic order
        let t = match d.kind {
            FactorKind::Path if x.abs_diff(y) == 1 => x.min(y),
            FactorKind::Cycle if (x + 1) % d.len == y => x,
            FactorKind::Cycle if (y + 1) % d.len == x => y,
            _ => return None,
        };
        let j = match d.kind {
            FactorKind::Path => t + 1,
            FactorKind::Cycle => t % (d.len / 2) + 1,
        };
        Some(self.offsets[i] + j - 1)
    }

    /// The same family with vertex ids translated through `labeling`
    /// (mixed-radix id -> label). Sides stay sorted.
    pub fn relabel(&self, labeling: &Labeling) -> CutFamily {
        let map = |id: usize| labeling.label_of_index(id - 1);
        let cuts = self
            .cuts
            .iter()
            .map(|c| {
                let mut side_a: Vec<usize> = c.side_a.iter().map(|&v| map(v)).collect();
                let mut side_b: Vec<usize> = c.side_b.iter().map(|&v| map(v)).collect();
                side_a.sort_unstable();
                side_b.sort_unstable();
                let mut edges: Vec<Edge> = c.edges.iter().map(|e| Edge::new(map(e.u), map(e.v))).collect();
                edges.sort_unstable();
                EdgeCut {
                    edges,
                    side_a,
                    side_b,
                    ..c.clone()
                }
            })
            .collect();
        CutFamily {
            shape: self.shape.clone(),
            cuts,
            offsets: self.offsets.clone(),
        }
    }

    /// Checks that the cuts partition the edges of `host` and that each cut
    /// leaves exactly its two sides as connected components.
    pub fn verify_partition(&self, host: &Graph) -> Result<()> {
        let mut owner = std::collections::HashMap::with_capacity(host.edge_count());
        for (k, cut) in self.cuts.iter().enumerate() {
            for e in &cut.edges {
                if !host.has_edge(e.u, e.v) {
                    return Err(Error::NotAPartition(format!(
                        "cut ({}, {}) holds non-edge {}-{}",
                        cut.dim, cut.id, e.u, e.v
                    )));
                }
                if let Some(prev) = owner.insert(*e, k) {
                    return Err(Error::NotAPartition(format!(
                        "edge {}-{} lies in cuts {prev} and {k}",
                        e.u, e.v
                    )));
                }
            }
        }
        if owner.len() != host.edge_count() {
            return Err(Error::NotAPartition(format!(
                "cuts cover {} of {} host edges",
                owner.len(),
                host.edge_count()
            )));
        }
        for (k, cut) in self.cuts.iter().enumerate() {
            let components = components_without(host, |e| owner.get(&e) == Some(&k));
            let mut expect = vec![cut.side_a.clone(), cut.side_b.clone()];
            expect.sort();
            if components != expect {
                return Err(Error::NotAPartition(format!(
                    "removing cut ({}, {}) leaves {} components that do not match its sides",
                    cut.dim,
                    cut.id,
                    components.len()
                )));
            }
        }
        Ok(())
    }
}

fn components_without(host: &Graph, removed: impl Fn(Edge) -> bool) -> Vec<Vec<usize>> {
    let mut seen = vec![false; host.vertex_count()];
    let mut out = Vec::new();
    for s in host.vertices() {
        if seen[s - 1] {
            continue;
        }
        seen[s - 1] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in host.neighbors(u) {
                if !seen[w - 1] && !removed(Edge::new(u, w)) {
                    seen[w - 1] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out.sort();
    out
}

/// Dimension-order route between two host labels, as a label sequence.
pub fn route(labeling: &Labeling, u: usize, v: usize) -> Result<Vec<usize>> {
    let (a, b) = (labeling.coord_of(u)?, labeling.coord_of(v)?);
    Ok(labeling
        .shape()
        .route(&a, &b)
        .iter()
        .map(|c| labeling.label_of(c).expect("route stays inside the shape"))
        .collect())
}

/// The cuts (as `(dim, id)`) whose sides separate host labels `u` and `v`.
pub fn crossing_cuts(family: &CutFamily, labeling: &Labeling, u: usize, v: usize) -> Result<BTreeSet<(usize, usize)>> {
    let (a, b) = (labeling.coord_of(u)?, labeling.coord_of(v)?);
    Ok(family
        .cuts()
        .iter()
        .filter(|c| c.separates(&a, &b))
        .map(|c| (c.dim, c.id))
        .collect())
}

/// Routes guest edges through a labeled product host with [`ProductShape::route`].
#[derive(Debug, Clone, Copy)]
pub struct DimensionOrderRouter<'a> {
    labeling: &'a Labeling,
}

impl<'a> DimensionOrderRouter<'a> {
    pub fn new(labeling: &'a Labeling) -> Self {
        DimensionOrderRouter { labeling }
    }
}

impl Router for DimensionOrderRouter<'_> {
    fn route(&self, u: usize, v: usize) -> Vec<usize> {
        route(self.labeling, u, v).expect("router called with host labels")
    }

    fn distance(&self, u: usize, v: usize) -> usize {
        let shape = self.labeling.shape();
        let (a, b) = (self.labeling.index_of_label(u), self.labeling.index_of_label(v));
        shape
            .dims()
            .iter()
            .enumerate()
            .map(|(i, d)| d.distance(shape.position(a, i), shape.position(b, i)))
            .sum()
    }
}
