//! Layered graphs, representations and the contact semantics shared by every solver.
//!
//! Layer 0 is the bottom row. Every vertex `v(i, j)` is drawn as a unit-height
//! rectangle `[x, x + w] x [i, i + 1]`, so only rectangles on the same layer or on
//! adjacent layers can touch.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Q;

/// Index of a vertex: layer `i` (0 = bottom) and position `j` within the layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId {
    pub layer: usize,
    pub pos: usize,
}

impl VertexId {
    pub const fn new(layer: usize, pos: usize) -> Self {
        VertexId { layer, pos }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v({},{})", self.layer, self.pos)
    }
}

/// Inclusive range `[first, last]` of positions on the layer above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub first: usize,
    pub last: usize,
}

impl Interval {
    pub const fn new(first: usize, last: usize) -> Self {
        Interval { first, last }
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.first <= pos && pos <= self.last
    }

    pub fn len(&self) -> usize {
        self.last + 1 - self.first
    }

    pub fn is_empty(&self) -> bool {
        self.last < self.first
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// Consecutive vertices of one layer.
    Horizontal,
    /// Vertices on adjacent layers.
    Vertical,
}

/// An edge of `G`, stored with `lo < hi` in lexicographic `(layer, pos)` order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub lo: VertexId,
    pub hi: VertexId,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            Edge { lo: a, hi: b }
        } else {
            Edge { lo: b, hi: a }
        }
    }

    pub fn kind(&self) -> EdgeKind {
        if self.lo.layer == self.hi.layer {
            EdgeKind::Horizontal
        } else {
            EdgeKind::Vertical
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

/// The input graph: one list of widths per layer plus, for every vertex below the
/// top layer, the interval of its neighbors on the next layer.
///
/// Construction only checks that the shapes agree; use [`LayeredGraph::validate`]
/// for the structural invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredGraph {
    widths: Vec<Vec<Q>>,
    up: Vec<Vec<Option<Interval>>>,
}

/// A violated [`LayeredGraph`] invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoLayers,
    EmptyLayer { layer: usize },
    NonPositiveWidth { v: VertexId },
    MalformedInterval { v: VertexId, interval: Interval },
    MissingUpNeighbors { v: VertexId },
    TopLayerHasUpNeighbors { v: VertexId },
    UncoveredLeft { layer: usize },
    UncoveredRight { layer: usize },
    /// The face between two consecutive intervals is not a triangle.
    NotTriangulated { left: VertexId, right: VertexId },
    /// Two consecutive intervals overlap in more than one position.
    Crossing { left: VertexId, right: VertexId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoLayers => write!(f, "graph has no layers"),
            Violation::EmptyLayer { layer } => write!(f, "layer {layer} is empty"),
            Violation::NonPositiveWidth { v } => write!(f, "{v} has a non-positive width"),
            Violation::MalformedInterval { v, interval } => write!(
                f,
                "{v} has malformed up-neighbor interval [{}, {}]",
                interval.first, interval.last
            ),
            Violation::MissingUpNeighbors { v } => {
                write!(f, "{v} has no neighbors on layer {}", v.layer + 1)
            }
            Violation::TopLayerHasUpNeighbors { v } => {
                write!(f, "{v} is on the top layer but lists up-neighbors")
            }
            Violation::UncoveredLeft { layer } => write!(
                f,
                "strip {layer}-{}: first vertex of layer {layer} is not adjacent to the first vertex above",
                layer + 1
            ),
            Violation::UncoveredRight { layer } => write!(
                f,
                "strip {layer}-{}: last vertex of layer {layer} is not adjacent to the last vertex above",
                layer + 1
            ),
            Violation::NotTriangulated { left, right } => write!(
                f,
                "strip not triangulated: intervals of {left} and {right} do not share an endpoint"
            ),
            Violation::Crossing { left, right } => {
                write!(f, "intervals of {left} and {right} cross")
            }
        }
    }
}

impl LayeredGraph {
    /// Builds a graph from per-layer widths and per-vertex up-neighbor intervals.
    ///
    /// `up` must have one entry per vertex; the top layer's entries are normally `None`.
    pub fn new(widths: Vec<Vec<Q>>, up: Vec<Vec<Option<Interval>>>) -> Result<Self> {
        if widths.len() != up.len() {
            return Err(Error::Shape(format!(
                "{} layers of widths but {} layers of up-neighbors",
                widths.len(),
                up.len()
            )));
        }
        for (i, (w, u)) in widths.iter().zip(&up).enumerate() {
            if w.len() != u.len() {
                return Err(Error::Shape(format!(
                    "layer {i}: {} widths but {} up-neighbor entries",
                    w.len(),
                    u.len()
                )));
            }
        }
        Ok(LayeredGraph { widths, up })
    }

    /// Convenience constructor for integer widths and `(first, last)` intervals.
    pub fn from_ints(widths: &[&[i64]], up: &[&[Option<(usize, usize)>]]) -> Result<Self> {
        let widths = widths
            .iter()
            .map(|row| row.iter().map(|&w| Q::from_integer(w)).collect())
            .collect();
        let mut up: Vec<Vec<Option<Interval>>> = up
            .iter()
            .map(|row| row.iter().map(|iv| iv.map(|(a, b)| Interval::new(a, b))).collect())
            .collect();
        // Allow callers to omit the all-`None` top layer.
        let layers: &Vec<Vec<Q>> = &widths;
        if up.len() + 1 == layers.len() {
            up.push(vec![None; layers[layers.len() - 1].len()]);
        }
        LayeredGraph::new(widths, up)
    }

    pub fn num_layers(&self) -> usize {
        self.widths.len()
    }

    pub fn layer_len(&self, layer: usize) -> usize {
        self.widths[layer].len()
    }

    pub fn num_vertices(&self) -> usize {
        self.widths.iter().map(Vec::len).sum()
    }

    pub fn widths(&self) -> &[Vec<Q>] {
        &self.widths
    }

    pub fn width(&self, v: VertexId) -> Q {
        self.widths[v.layer][v.pos]
    }

    pub fn up_intervals(&self) -> &[Vec<Option<Interval>>] {
        &self.up
    }

    pub fn up_interval(&self, v: VertexId) -> Option<Interval> {
        self.up[v.layer][v.pos]
    }

    /// Neighbors of `v` on the layer below, as an interval of positions.
    ///
    /// Assumes a validated graph.
    pub fn down_interval(&self, v: VertexId) -> Option<Interval> {
        if v.layer == 0 {
            return None;
        }
        let below = &self.up[v.layer - 1];
        let first = below.iter().position(|iv| iv.is_some_and(|iv| iv.contains(v.pos)))?;
        let last = below.iter().rposition(|iv| iv.is_some_and(|iv| iv.contains(v.pos)))?;
        Some(Interval::new(first, last))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.widths
            .iter()
            .enumerate()
            .flat_map(|(i, row)| (0..row.len()).map(move |j| VertexId::new(i, j)))
    }

    /// All edges in lexicographic `(lo, hi)` order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut edges = Vec::new();
        for v in self.vertices() {
            if v.pos + 1 < self.layer_len(v.layer) {
                edges.push(Edge::new(v, VertexId::new(v.layer, v.pos + 1)));
            }
            if let Some(iv) = self.up_interval(v) {
                for p in iv.first..=iv.last {
                    edges.push(Edge::new(v, VertexId::new(v.layer + 1, p)));
                }
            }
        }
        edges.sort();
        edges
    }

    pub fn is_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        let e = Edge::new(a, b);
        if e.lo.layer == e.hi.layer {
            e.hi.pos == e.lo.pos + 1
        } else if e.hi.layer == e.lo.layer + 1 {
            self.up_interval(e.lo).is_some_and(|iv| iv.contains(e.hi.pos))
        } else {
            false
        }
    }

    /// `K`: the largest number of vertices on one layer.
    pub fn max_layer_len(&self) -> usize {
        self.widths.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `w_max`: the widest rectangle.
    pub fn max_width(&self) -> Q {
        self.widths.iter().flatten().copied().max().unwrap_or_else(Q::zero)
    }

    pub fn min_width(&self) -> Q {
        self.widths.iter().flatten().copied().min().unwrap_or_else(Q::zero)
    }

    pub fn layer_width(&self, layer: usize) -> Q {
        self.widths[layer].iter().copied().sum()
    }

    /// `W_max`: the widest layer.
    pub fn max_layer_width(&self) -> Q {
        (0..self.num_layers()).map(|i| self.layer_width(i)).max().unwrap_or_else(Q::zero)
    }

    pub fn total_width(&self) -> Q {
        self.widths.iter().flatten().copied().sum()
    }

    /// `true` when every width is an integer.
    pub fn has_integer_widths(&self) -> bool {
        self.widths.iter().flatten().all(|w| w.is_integer())
    }

    /// Every violated invariant; empty iff the graph is a valid input.
    pub fn validate(&self) -> Vec<Violation> {
        validate_graph(self)
    }
}

/// Checks the layered-graph invariants: positive widths, contiguous up-neighbor
/// intervals, and an internally triangulated strip between every pair of layers.
pub fn validate_graph(g: &LayeredGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let layers = g.num_layers();
    if layers == 0 {
        out.push(Violation::NoLayers);
        return out;
    }
    for i in 0..layers {
        if g.layer_len(i) == 0 {
            out.push(Violation::EmptyLayer { layer: i });
        }
        for (j, w) in g.widths[i].iter().enumerate() {
            if !w.is_positive() {
                out.push(Violation::NonPositiveWidth { v: VertexId::new(i, j) });
            }
        }
    }
    let top = layers - 1;
    for j in 0..g.layer_len(top) {
        if g.up[top][j].is_some() {
            out.push(Violation::TopLayerHasUpNeighbors { v: VertexId::new(top, j) });
        }
    }
    for i in 0..top {
        let above = g.layer_len(i + 1);
        if g.layer_len(i) == 0 || above == 0 {
            continue;
        }
        let mut well_formed = true;
        for j in 0..g.layer_len(i) {
            let v = VertexId::new(i, j);
            match g.up[i][j] {
                None => {
                    out.push(Violation::MissingUpNeighbors { v });
                    well_formed = false;
                }
                Some(iv) if iv.first > iv.last || iv.last >= above => {
                    out.push(Violation::MalformedInterval { v, interval: iv });
                    well_formed = false;
                }
                Some(_) => {}
            }
        }
        if !well_formed {
            continue;
        }
        let row: Vec<Interval> = g.up[i].iter().map(|iv| iv.expect("checked above")).collect();
        if row[0].first != 0 {
            out.push(Violation::UncoveredLeft { layer: i });
        }
        if row[row.len() - 1].last != above - 1 {
            out.push(Violation::UncoveredRight { layer: i });
        }
        for j in 0..row.len().saturating_sub(1) {
            let (left, right) = (VertexId::new(i, j), VertexId::new(i, j + 1));
            match row[j].last.cmp(&row[j + 1].first) {
                Ordering::Equal => {}
                Ordering::Less => out.push(Violation::NotTriangulated { left, right }),
                Ordering::Greater => out.push(Violation::Crossing { left, right }),
            }
        }
    }
    out
}

/// Output layout: the x-coordinate of every rectangle's bottom-left corner and the
/// minimum length `epsilon` of a realized vertical contact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub epsilon: Q,
    x: Vec<Vec<Q>>,
}

impl Representation {
    pub fn new(epsilon: Q, x: Vec<Vec<Q>>) -> Self {
        Representation { epsilon, x }
    }

    pub fn x(&self, v: VertexId) -> Q {
        self.x[v.layer][v.pos]
    }

    pub fn try_x(&self, v: VertexId) -> Option<Q> {
        self.x.get(v.layer).and_then(|row| row.get(v.pos)).copied()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.x
    }

    pub fn set_x(&mut self, v: VertexId, x: Q) {
        self.x[v.layer][v.pos] = x;
    }

    /// Shifts every rectangle so that the smallest x-coordinate is 0.
    pub fn normalized(mut self) -> Self {
        if let Some(min) = self.x.iter().flatten().copied().min() {
            for x in self.x.iter_mut().flatten() {
                *x -= min;
            }
        }
        self
    }

    /// Left-aligned gap-free stacking: `x(i, j)` is the width sum of `v(i, 0..j)`.
    pub fn left_aligned(g: &LayeredGraph, epsilon: Q) -> Self {
        let x = g
            .widths()
            .iter()
            .map(|row| {
                let mut acc = Q::zero();
                row.iter()
                    .map(|w| {
                        let here = acc;
                        acc += *w;
                        here
                    })
                    .collect()
            })
            .collect();
        Representation { epsilon, x }
    }
}

/// Contact statistics of a representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactReport {
    pub realized: Vec<Edge>,
    pub lost: Vec<Edge>,
    /// Non-adjacent pairs on adjacent layers whose rectangles share a contact of positive length.
    pub false_adjacencies: Vec<(VertexId, VertexId)>,
    /// Pairs `(v, u)` from [`false_adjacency_pairs`] where `u` is not on the side of
    /// `v` that the embedding prescribes.
    pub order_violations: Vec<(VertexId, VertexId)>,
    pub gap_total: Q,
    pub bbox_width: Q,
}

impl ContactReport {
    pub fn is_valid(&self) -> bool {
        self.false_adjacencies.is_empty()
    }

    /// Valid, and every non-neighbor lies on its embedding side. This is the
    /// feasible set of all solvers.
    pub fn is_admissible(&self) -> bool {
        self.is_valid() && self.order_violations.is_empty()
    }

    pub fn realized_count(&self) -> usize {
        self.realized.len()
    }
}

/// Length of the intersection of `[a, a + wa]` and `[b, b + wb]`, clamped at 0.
pub fn overlap(a: Q, wa: Q, b: Q, wb: Q) -> Q {
    let lo = if a > b { a } else { b };
    let hi = if a + wa < b + wb { a + wa } else { b + wb };
    if hi > lo {
        hi - lo
    } else {
        Q::zero()
    }
}

fn check_shape(g: &LayeredGraph, r: &Representation) -> Result<()> {
    for v in g.vertices() {
        if r.try_x(v).is_none() {
            return Err(Error::MissingCoordinate(v));
        }
    }
    if r.rows().len() != g.num_layers()
        || r.rows().iter().enumerate().any(|(i, row)| row.len() != g.layer_len(i))
    {
        return Err(Error::Shape("representation has coordinates for vertices not in the graph".into()));
    }
    Ok(())
}

/// Computes realized and lost edges, false adjacencies, total gap and bounding box.
///
/// Horizontal contacts are realized by exact abutment; vertical contacts need an
/// overlap of at least `epsilon`. Fails if a coordinate is missing or two
/// rectangles of one layer overlap.
pub fn contact_report(g: &LayeredGraph, r: &Representation) -> Result<ContactReport> {
    check_shape(g, r)?;
    let eps = r.epsilon;
    let mut realized = Vec::new();
    let mut lost = Vec::new();
    let mut gap_total = Q::zero();
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;

    for i in 0..g.num_layers() {
        for j in 0..g.layer_len(i) {
            let v = VertexId::new(i, j);
            let (x, w) = (r.x(v), g.width(v));
            lo = Some(lo.map_or(x, |m| m.min(x)));
            hi = Some(hi.map_or(x + w, |m| m.max(x + w)));
            if j + 1 < g.layer_len(i) {
                let next = VertexId::new(i, j + 1);
                let gap = r.x(next) - (x + w);
                if gap.is_negative() {
                    return Err(Error::RowOverlap(v, next));
                }
                gap_total += gap;
                let e = Edge::new(v, next);
                if gap.is_zero() {
                    realized.push(e);
                } else {
                    lost.push(e);
                }
            }
            if let Some(iv) = g.up_interval(v) {
                for p in iv.first..=iv.last {
                    let u = VertexId::new(i + 1, p);
                    let e = Edge::new(v, u);
                    if overlap(x, w, r.x(u), g.width(u)) >= eps {
                        realized.push(e);
                    } else {
                        lost.push(e);
                    }
                }
            }
        }
    }

    let mut false_adjacencies = Vec::new();
    for i in 0..g.num_layers().saturating_sub(1) {
        // Both rows are sorted by x, so overlapping pairs can be merged in one pass.
        let (n0, n1) = (g.layer_len(i), g.layer_len(i + 1));
        let mut b = 0;
        for a in 0..n0 {
            let va = VertexId::new(i, a);
            let (xa, wa) = (r.x(va), g.width(va));
            while b < n1 {
                let vb = VertexId::new(i + 1, b);
                if r.x(vb) + g.width(vb) <= xa {
                    b += 1;
                } else {
                    break;
                }
            }
            let mut c = b;
            while c < n1 {
                let vc = VertexId::new(i + 1, c);
                if r.x(vc) >= xa + wa {
                    break;
                }
                if overlap(xa, wa, r.x(vc), g.width(vc)).is_positive() && !g.is_adjacent(va, vc) {
                    false_adjacencies.push((va, vc));
                }
                c += 1;
            }
        }
    }

    let mut order_violations = Vec::new();
    let (left, right) = false_adjacency_pairs(g);
    for (v, u) in left {
        if r.x(u) + g.width(u) > r.x(v) {
            order_violations.push((v, u));
        }
    }
    for (v, u) in right {
        if r.x(v) + g.width(v) > r.x(u) {
            order_violations.push((v, u));
        }
    }
    order_violations.sort();

    realized.sort();
    lost.sort();
    Ok(ContactReport {
        realized,
        lost,
        false_adjacencies,
        order_violations,
        gap_total,
        bbox_width: hi.unwrap_or_default() - lo.unwrap_or_default(),
    })
}

pub type VertexPair = (VertexId, VertexId);

/// The pairs `(v, u)` where `u` is the nearest non-neighbor of `v` on the layer above,
/// to the left (`F_L`) and to the right (`F_R`) of `v`'s neighbor interval.
///
/// Keeping these pairs apart, together with the row order, rules out every false
/// adjacency. Assumes a validated graph.
pub fn false_adjacency_pairs(g: &LayeredGraph) -> (Vec<VertexPair>, Vec<VertexPair>) {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for v in g.vertices() {
        let Some(iv) = g.up_interval(v) else { continue };
        if iv.first > 0 {
            left.push((v, VertexId::new(v.layer + 1, iv.first - 1)));
        }
        if iv.last + 1 < g.layer_len(v.layer + 1) {
            right.push((v, VertexId::new(v.layer + 1, iv.last + 1)));
        }
    }
    (left, right)
}

/// Checks `0 < epsilon <= min width`.
pub fn check_epsilon(g: &LayeredGraph, epsilon: Q) -> Result<()> {
    if !epsilon.is_positive() {
        return Err(Error::Epsilon(format!("epsilon {epsilon} must be positive")));
    }
    if epsilon > g.min_width() {
        return Err(Error::Epsilon(format!(
            "epsilon {epsilon} exceeds the smallest width {}",
            g.min_width()
        )));
    }
    Ok(())
}

pub(crate) fn require_valid(g: &LayeredGraph) -> Result<()> {
    let v = validate_graph(g);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidGraph(v))
    }
}
