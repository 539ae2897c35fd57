//! Area minimization by minimum-cost flow.
//!
//! Each layer is read as a strip of total width `b(s)`, cut into left buffer,
//! rectangles, gaps and right buffer. One unit of flow is one unit of horizontal
//! length passing from an element on layer `i` into the element above it on layer
//! `i + 1`; an arc exists exactly where the two elements may overlap without a
//! false adjacency. Flow entering a gap costs 1, so a minimum-cost flow minimizes
//! the total gap width.
//!
//! All quantities are stored as integers in units of `1 / scale`, where `scale` is
//! the common denominator of the widths.

use std::collections::{BinaryHeap, HashMap};
use std::cmp::Reverse;
use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::io::{common_denominator, scaled};
use crate::model::{require_valid, LayeredGraph, Representation, VertexId};
use crate::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    /// `v^a`: receives flow from the layer below.
    RectIn,
    /// `v^b`: passes flow to the layer above.
    RectOut,
    Gap,
    LeftBuffer,
    RightBuffer,
    Source,
    Sink,
}

/// A node of the network. `pos` is the vertex position for rectangle nodes and the
/// position of the left rectangle for gaps; it is 0 for buffers and terminals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FlowNode {
    pub kind: NodeKind,
    pub layer: usize,
    pub pos: usize,
}

impl std::fmt::Display for FlowNode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            NodeKind::RectIn => write!(f, "a({},{})", self.layer, self.pos),
            NodeKind::RectOut => write!(f, "b({},{})", self.layer, self.pos),
            NodeKind::Gap => write!(f, "g({},{})", self.layer, self.pos),
            NodeKind::LeftBuffer => write!(f, "l({})", self.layer),
            NodeKind::RightBuffer => write!(f, "r({})", self.layer),
            NodeKind::Source => write!(f, "s"),
            NodeKind::Sink => write!(f, "t"),
        }
    }
}

/// Arc with lower bound, capacity and cost in scaled integer units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub lower: i64,
    pub capacity: i64,
    pub cost: i64,
}

/// One slot of a layer strip: left buffer, rectangle, gap or right buffer.
/// Rectangles have distinct in/out nodes; the other kinds use one node for both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Element {
    inn: usize,
    out: usize,
}

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    nodes: Vec<FlowNode>,
    arcs: Vec<FlowArc>,
    imbalance: Vec<i64>,
    scale: i64,
    supply: i64,
    source: usize,
    sink: usize,
    /// Per layer, elements in left-to-right order: index `2j + 1` is rectangle `j`,
    /// index `2m + 2` is the gap right of rectangle `m` (buffers at both ends).
    elements: Vec<Vec<Element>>,
    /// Per layer pair `(i, i + 1)`: arc indices keyed by (lower element, upper element).
    between: Vec<HashMap<(usize, usize), usize>>,
    internal: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn nodes(&self) -> &[FlowNode] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }

    /// `b(v)` in scaled units.
    pub fn imbalance(&self) -> &[i64] {
        &self.imbalance
    }

    /// Units per unit of width.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// `b(s)` as a rational width.
    pub fn supply(&self) -> Q {
        self.to_width(self.supply)
    }

    pub fn to_width(&self, units: i64) -> Q {
        Q::new(units, self.scale)
    }

    /// Index of the `v^a -> v^b` arc of `v`.
    pub fn internal_arc(&self, v: VertexId) -> usize {
        self.internal[v.layer][v.pos]
    }

    /// Index of the node named `kind` at `(layer, pos)`, if present.
    pub fn find_node(&self, kind: NodeKind, layer: usize, pos: usize) -> Option<usize> {
        self.nodes.iter().position(|n| n.kind == kind && n.layer == layer && n.pos == pos)
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.arcs.iter().any(|a| a.from == from && a.to == to)
    }

    /// Plain-text arc list, one `from to lower capacity cost` line per arc.
    /// Arc from element `lower` of `layer` to element `upper` of `layer + 1`. Row
    /// elements alternate gap and rectangle: element `2m + 1` is rectangle `m`, even
    /// elements are the gaps and buffers around it.
    pub fn between_arc(&self, layer: usize, lower: usize, upper: usize) -> Option<usize> {
        self.between.get(layer)?.get(&(lower, upper)).copied()
    }

    pub fn dump_arcs(&self) -> String {
        let mut out = String::new();
        for a in &self.arcs {
            let _ = writeln!(
                out,
                "{} {} {} {} {}",
                self.nodes[a.from],
                self.nodes[a.to],
                self.to_width(a.lower),
                self.to_width(a.capacity),
                a.cost
            );
        }
        out
    }
}

/// Flow per arc (scaled units) and its total cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub flow: Vec<i64>,
    pub cost: i64,
}

impl FlowResult {
    /// Total cost as a width (`cost / scale`).
    pub fn cost_width(&self, n: &FlowNetwork) -> Q {
        n.to_width(self.cost)
    }
}

fn reach(g: &LayeredGraph, layer: usize, elem: usize) -> (usize, usize) {
    let n = g.layer_len(layer);
    let rect = |j: usize| {
        let iv = g.up_interval(VertexId::new(layer, j)).expect("validated graph");
        (2 * iv.first, 2 * iv.last + 2)
    };
    if elem % 2 == 1 {
        return rect(elem / 2);
    }
    // Gap between rectangles m and m + 1; m = -1 and m = n - 1 are the buffers.
    let right = elem / 2;
    match (right.checked_sub(1), right < n) {
        (Some(left), true) => {
            let (a, _) = rect(left);
            let (_, b) = rect(right);
            (a, b)
        }
        (Some(left), false) => rect(left),
        (None, true) => rect(right),
        (None, false) => unreachable!("layers are non-empty"),
    }
}

/// Builds the network with `b(s) = w_max * K`.
pub fn build_network(g: &LayeredGraph) -> Result<FlowNetwork> {
    require_valid(g)?;
    let scale = graph_scale(g);
    let supply = scaled(&g.max_width(), scale) * g.max_layer_len() as i64;
    build_network_with_supply(g, supply)
}

pub(crate) fn graph_scale(g: &LayeredGraph) -> i64 {
    common_denominator(g.widths().iter().flatten())
}

/// Builds the network with a chosen supply `b(s)` given in scaled units.
pub fn build_network_with_supply(g: &LayeredGraph, supply: i64) -> Result<FlowNetwork> {
    require_valid(g)?;
    let scale = graph_scale(g);
    let inf = supply;
    let mut nodes = vec![
        FlowNode { kind: NodeKind::Source, layer: 0, pos: 0 },
        FlowNode { kind: NodeKind::Sink, layer: 0, pos: 0 },
    ];
    let (source, sink) = (0, 1);
    let mut elements = Vec::with_capacity(g.num_layers());
    let mut arcs = Vec::new();
    let mut internal = Vec::with_capacity(g.num_layers());

    for layer in 0..g.num_layers() {
        let n = g.layer_len(layer);
        let mut row = Vec::with_capacity(2 * n + 1);
        let mut row_internal = Vec::with_capacity(n);
        let push = |nodes: &mut Vec<FlowNode>, kind, pos| {
            nodes.push(FlowNode { kind, layer, pos });
            nodes.len() - 1
        };
        let lb = push(&mut nodes, NodeKind::LeftBuffer, 0);
        row.push(Element { inn: lb, out: lb });
        for j in 0..n {
            let a = push(&mut nodes, NodeKind::RectIn, j);
            let b = push(&mut nodes, NodeKind::RectOut, j);
            let w = scaled(&g.width(VertexId::new(layer, j)), scale);
            row_internal.push(arcs.len());
            arcs.push(FlowArc { from: a, to: b, lower: w, capacity: w, cost: 0 });
            row.push(Element { inn: a, out: b });
            let gap = if j + 1 < n {
                push(&mut nodes, NodeKind::Gap, j)
            } else {
                push(&mut nodes, NodeKind::RightBuffer, 0)
            };
            row.push(Element { inn: gap, out: gap });
        }
        elements.push(row);
        internal.push(row_internal);
    }

    let gap_cost = |nodes: &[FlowNode], to: usize| i64::from(nodes[to].kind == NodeKind::Gap);
    for e in &elements[0] {
        arcs.push(FlowArc { from: source, to: e.inn, lower: 0, capacity: inf, cost: gap_cost(&nodes, e.inn) });
    }
    let mut between = Vec::with_capacity(g.num_layers().saturating_sub(1));
    for layer in 0..g.num_layers() - 1 {
        let mut index = HashMap::new();
        for (p, e) in elements[layer].iter().enumerate() {
            let (lo, hi) = reach(g, layer, p);
            for (q, next) in elements[layer + 1].iter().enumerate().take(hi + 1).skip(lo) {
                let to = next.inn;
                index.insert((p, q), arcs.len());
                arcs.push(FlowArc { from: e.out, to, lower: 0, capacity: inf, cost: gap_cost(&nodes, to) });
            }
        }
        between.push(index);
    }
    for e in &elements[g.num_layers() - 1] {
        arcs.push(FlowArc { from: e.out, to: sink, lower: 0, capacity: inf, cost: 0 });
    }

    let mut imbalance = vec![0; nodes.len()];
    imbalance[source] = supply;
    imbalance[sink] = -supply;
    Ok(FlowNetwork { nodes, arcs, imbalance, scale, supply, source, sink, elements, between, internal })
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Residual { head: Vec::new(), cap: Vec::new(), cost: Vec::new(), adj: vec![Vec::new(); n] }
    }

    /// Adds `u -> v` and its reverse; returns the forward edge id (reverse is `id ^ 1`).
    fn add(&mut self, u: usize, v: usize, cap: i64, cost: i64) -> usize {
        let id = self.head.len();
        self.head.extend([v, u]);
        self.cap.extend([cap, 0]);
        self.cost.extend([cost, -cost]);
        self.adj[u].push(id);
        self.adj[v].push(id + 1);
        id
    }
}

/// Minimum-cost flow honoring lower bounds and imbalances.
///
/// Lower bounds are moved into node imbalances, the imbalances are attached to a
/// super source and super sink, and successive shortest paths (Dijkstra with
/// potentials) saturate them. Integral data gives an integral flow.
pub fn solve_min_cost_flow(n: &FlowNetwork) -> Result<FlowResult> {
    let count = n.nodes.len();
    let (ss, tt) = (count, count + 1);
    let mut res = Residual::new(count + 2);
    let mut excess = n.imbalance.clone();
    let mut ids = Vec::with_capacity(n.arcs.len());
    for a in &n.arcs {
        if a.lower > a.capacity || a.lower < 0 {
            return Err(Error::Infeasible(format!("arc {} -> {} has lower > capacity", n.nodes[a.from], n.nodes[a.to])));
        }
        ids.push(res.add(a.from, a.to, a.capacity - a.lower, a.cost));
        excess[a.from] -= a.lower;
        excess[a.to] += a.lower;
    }
    if n.imbalance.iter().sum::<i64>() != 0 {
        return Err(Error::Infeasible("imbalances do not sum to zero".into()));
    }
    let mut required = 0;
    for (v, &e) in excess.iter().enumerate() {
        if e > 0 {
            res.add(ss, v, e, 0);
            required += e;
        } else if e < 0 {
            res.add(v, tt, -e, 0);
        }
    }

    let total = count + 2;
    let mut potential = vec![0i64; total];
    let mut sent = 0;
    let mut cost = 0;
    let mut dist = vec![i64::MAX; total];
    let mut prev = vec![usize::MAX; total];
    while sent < required {
        dist.fill(i64::MAX);
        prev.fill(usize::MAX);
        dist[ss] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0i64, ss)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &id in &res.adj[u] {
                if res.cap[id] == 0 {
                    continue;
                }
                let v = res.head[id];
                let nd = d + res.cost[id] + potential[u] - potential[v];
                if nd < dist[v] {
                    dist[v] = nd;
                    prev[v] = id;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        if dist[tt] == i64::MAX {
            break;
        }
        for v in 0..total {
            if dist[v] != i64::MAX {
                potential[v] += dist[v];
            }
        }
        let mut push = required - sent;
        let mut v = tt;
        while v != ss {
            let id = prev[v];
            push = push.min(res.cap[id]);
            v = res.head[id ^ 1];
        }
        let mut v = tt;
        while v != ss {
            let id = prev[v];
            res.cap[id] -= push;
            res.cap[id ^ 1] += push;
            cost += push * res.cost[id];
            v = res.head[id ^ 1];
        }
        sent += push;
    }
    if sent < required {
        return Err(Error::Infeasible(format!(
            "only {} of {} units of imbalance can be routed",
            n.to_width(sent),
            n.to_width(required)
        )));
    }
    let flow: Vec<i64> = n
        .arcs
        .iter()
        .zip(&ids)
        .map(|(a, &id)| a.lower + res.cap[id ^ 1])
        .collect();
    debug_assert_eq!(cost, n.arcs.iter().zip(&flow).map(|(a, f)| a.cost * (f - a.lower)).sum::<i64>());
    let cost = n.arcs.iter().zip(&flow).map(|(a, f)| a.cost * f).sum();
    Ok(FlowResult { flow, cost })
}

/// Checks bounds on every arc and conservation relative to `b`.
pub fn check_flow(n: &FlowNetwork, f: &FlowResult) -> Result<()> {
    if f.flow.len() != n.arcs.len() {
        return Err(Error::Internal("flow has the wrong number of arcs".into()));
    }
    let mut balance = n.imbalance.clone();
    for (a, &x) in n.arcs.iter().zip(&f.flow) {
        if x < a.lower || x > a.capacity {
            return Err(Error::Internal(format!(
                "arc {} -> {} carries {} outside [{}, {}]",
                n.nodes[a.from], n.nodes[a.to], x, a.lower, a.capacity
            )));
        }
        balance[a.from] -= x;
        balance[a.to] += x;
    }
    if let Some(v) = balance.iter().position(|&b| b != 0) {
        return Err(Error::Internal(format!("conservation violated at {}", n.nodes[v])));
    }
    let cost: i64 = n.arcs.iter().zip(&f.flow).map(|(a, x)| a.cost * x).sum();
    if cost != f.cost {
        return Err(Error::Internal(format!("cost {} does not match arc costs {cost}", f.cost)));
    }
    Ok(())
}

fn positive_between(n: &FlowNetwork, f: &FlowResult, layer: usize) -> Vec<(usize, usize, usize)> {
    let mut v: Vec<_> = n.between[layer]
        .iter()
        .filter(|(_, &id)| f.flow[id] > 0)
        .map(|(&(p, q), &id)| (p, q, id))
        .collect();
    v.sort_unstable();
    v
}

/// Number of pairs of positive-flow arcs between consecutive layers that cross.
pub fn crossing_pairs(n: &FlowNetwork, f: &FlowResult) -> usize {
    let mut total = 0;
    for layer in 0..n.between.len() {
        let arcs = positive_between(n, f, layer);
        for (i, &(a, d, _)) in arcs.iter().enumerate() {
            total += arcs[i + 1..].iter().filter(|&&(b, c, _)| b > a && c < d).count();
        }
    }
    total
}

fn first_crossing(arcs: &[(usize, usize, usize)]) -> Option<(usize, usize)> {
    for (i, &(a, d, _)) in arcs.iter().enumerate() {
        for (k, &(b, c, _)) in arcs.iter().enumerate().skip(i + 1) {
            if b > a && c < d {
                return Some((i, k));
            }
        }
    }
    None
}

/// Uncrosses the flow by local swaps.
///
/// While arcs `a -> d` and `b -> c` both carry flow with `a` left of `b` and `c` left
/// of `d`, `min(f(a -> d), f(b -> c))` is moved onto `a -> c` and `b -> d`. Costs only
/// depend on the arc head, so cost and per-node throughput are unchanged. Layers are
/// scanned bottom-up and pairs in `(lower, upper)` order.
pub fn resolve_crossing_patterns(n: &FlowNetwork, f: &FlowResult) -> Result<FlowResult> {
    resolve_crossing_patterns_traced(n, f, |_| {})
}

/// Like [`resolve_crossing_patterns`], calling `after_swap` with the flow after every swap.
pub fn resolve_crossing_patterns_traced(
    n: &FlowNetwork,
    f: &FlowResult,
    mut after_swap: impl FnMut(&FlowResult),
) -> Result<FlowResult> {
    let mut out = f.clone();
    for layer in 0..n.between.len() {
        loop {
            let arcs = positive_between(n, &out, layer);
            let Some((i, k)) = first_crossing(&arcs) else { break };
            let (a, d, ad) = arcs[i];
            let (b, c, bc) = arcs[k];
            let missing = |p: usize, q: usize| {
                Error::Internal(format!(
                    "crossing repair needs arc {} -> {} on layers {layer}/{} which the network lacks",
                    n.nodes[n.elements[layer][p].out],
                    n.nodes[n.elements[layer + 1][q].inn],
                    layer + 1
                ))
            };
            let ac = *n.between[layer].get(&(a, c)).ok_or_else(|| missing(a, c))?;
            let bd = *n.between[layer].get(&(b, d)).ok_or_else(|| missing(b, d))?;
            let delta = out.flow[ad].min(out.flow[bc]);
            out.flow[ad] -= delta;
            out.flow[bc] -= delta;
            out.flow[ac] += delta;
            out.flow[bd] += delta;
            after_swap(&out);
        }
    }
    out.cost = n.arcs.iter().zip(&out.flow).map(|(a, x)| a.cost * x).sum();
    Ok(out)
}

fn throughputs(n: &FlowNetwork, f: &FlowResult) -> Vec<Vec<i64>> {
    let mut inflow = vec![0i64; n.nodes.len()];
    for (a, &x) in n.arcs.iter().zip(&f.flow) {
        inflow[a.to] += x;
    }
    n.elements
        .iter()
        .map(|row| row.iter().map(|e| inflow[e.inn]).collect())
        .collect()
}

/// Width of every row (buffers, rectangles and gaps) in the strip read off `f`.
pub fn row_widths(n: &FlowNetwork, f: &FlowResult) -> Vec<Q> {
    throughputs(n, f)
        .iter()
        .map(|row| n.to_width(row.iter().sum()))
        .collect()
}

/// Lays every row out left to right with buffer, rectangle and gap widths equal to
/// their throughput. Rows start at 0, so every row spans `[0, b(s)]`.
pub fn extract_representation(
    g: &LayeredGraph,
    n: &FlowNetwork,
    f: &FlowResult,
    epsilon: Q,
) -> Result<Representation> {
    if crossing_pairs(n, f) > 0 {
        return Err(Error::Internal("flow has crossing patterns; resolve them first".into()));
    }
    let through = throughputs(n, f);
    let mut rows = Vec::with_capacity(g.num_layers());
    for (layer, row) in through.iter().enumerate() {
        let mut cursor = 0i64;
        let mut xs = Vec::with_capacity(g.layer_len(layer));
        for (p, &t) in row.iter().enumerate() {
            if p % 2 == 1 {
                xs.push(n.to_width(cursor));
            }
            cursor += t;
        }
        if cursor != n.supply {
            return Err(Error::Internal(format!(
                "row {layer} has width {} instead of {}",
                n.to_width(cursor),
                n.supply()
            )));
        }
        rows.push(xs);
    }
    Ok(Representation::new(epsilon, rows))
}

/// An area-minimal representation and its total gap width.
#[derive(Clone, Debug)]
pub struct AreaLayout {
    pub representation: Representation,
    pub gap_total: Q,
    /// Supply `b(s)` of the network the layout was extracted from; every row,
    /// buffers included, has this width.
    pub row_width: Q,
}

fn standard_supply(g: &LayeredGraph, scale: i64) -> i64 {
    scaled(&g.max_width(), scale) * g.max_layer_len() as i64
}

/// Min-cost flow at `supply`, or `None` if that network is infeasible.
fn solve_at(g: &LayeredGraph, supply: i64) -> Result<Option<(FlowNetwork, FlowResult)>> {
    let n = build_network_with_supply(g, supply)?;
    match solve_min_cost_flow(&n) {
        Ok(f) => Ok(Some((n, f))),
        Err(Error::Infeasible(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Build, solve, uncross and extract. The returned layout is shifted so the
/// leftmost rectangle starts at 0.
///
/// The network is solved with supply `w_max * K` and, when the sum of all widths
/// is larger, again with that sum; the cheaper flow wins and ties keep `w_max * K`.
/// Some graphs have no admissible layout as narrow as `w_max * K`, while a
/// gap-minimal layout never needs more than the sum of all widths.
pub fn minimize_area(g: &LayeredGraph, epsilon: Q) -> Result<AreaLayout> {
    require_valid(g)?;
    let scale = graph_scale(g);
    let standard = standard_supply(g, scale);
    let total = scaled(&g.total_width(), scale);
    let mut best = solve_at(g, standard)?;
    if total > standard {
        if let Some((n, f)) = solve_at(g, total)? {
            if best.as_ref().is_none_or(|(_, b)| f.cost < b.cost) {
                best = Some((n, f));
            }
        }
    }
    let (n, f) = best.ok_or_else(|| Error::Internal("network of a valid graph is infeasible at every supply".into()))?;
    let f = resolve_crossing_patterns(&n, &f)?;
    let representation = extract_representation(g, &n, &f, epsilon)?.normalized();
    Ok(AreaLayout { representation, gap_total: f.cost_width(&n), row_width: n.supply() })
}

/// Whether all rows fit into a common strip of width `width`.
pub fn is_feasible(g: &LayeredGraph, width: Q) -> Result<bool> {
    let scale = graph_scale(g);
    let scaled_width = width * Q::from_integer(scale);
    if !scaled_width.is_integer() || scaled_width < Q::zero() {
        return Err(Error::Unsupported(format!("width {width} is not a multiple of 1/{scale}")));
    }
    let n = build_network_with_supply(g, scaled_width.to_integer())?;
    match solve_min_cost_flow(&n) {
        Ok(_) => Ok(true),
        Err(Error::Infeasible(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Result of [`minimize_bounding_box`].
#[derive(Clone, Debug)]
pub struct BoxLayout {
    pub representation: Representation,
    pub width: Q,
    pub gap_total: Q,
    /// Number of min-cost flow solves performed by the search.
    pub solves: usize,
}

/// Smallest feasible supply in `[lo, hi]` by binary search, counting solves.
fn smallest_feasible(
    g: &LayeredGraph,
    mut lo: i64,
    mut hi: i64,
    solves: &mut usize,
) -> Result<Option<(i64, FlowNetwork, FlowResult)>> {
    if lo > hi {
        return Ok(None);
    }
    let mut best = None;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        *solves += 1;
        match solve_at(g, mid)? {
            Some((n, f)) => {
                hi = mid;
                best = Some((mid, n, f));
            }
            None => lo = mid + 1,
        }
    }
    if let Some((b, n, f)) = best {
        if b == lo {
            return Ok(Some((b, n, f)));
        }
    }
    *solves += 1;
    Ok(solve_at(g, lo)?.map(|(n, f)| (lo, n, f)))
}

/// Smallest strip width `B >= W_max` whose network is feasible, found by binary
/// search over multiples of `1 / scale` in `[W_max, w_max * K]`; the layout is the
/// gap-minimal one inside that strip.
///
/// When even `w_max * K` is infeasible the search continues up to the sum of
/// all widths, which always suffices.
pub fn minimize_bounding_box(g: &LayeredGraph, epsilon: Q) -> Result<BoxLayout> {
    require_valid(g)?;
    let scale = graph_scale(g);
    let lo = scaled(&g.max_layer_width(), scale);
    let standard = standard_supply(g, scale);
    let total = scaled(&g.total_width(), scale);
    let mut solves = 0;
    let found = match smallest_feasible(g, lo, standard, &mut solves)? {
        Some(hit) => Some(hit),
        None => smallest_feasible(g, standard + 1, total, &mut solves)?,
    };
    let (b, n, f) = found.ok_or_else(|| Error::Internal("network of a valid graph is infeasible at every width".into()))?;
    let f = resolve_crossing_patterns(&n, &f)?;
    let representation = extract_representation(g, &n, &f, epsilon)?.normalized();
    Ok(BoxLayout { representation, width: n.to_width(b), gap_total: f.cost_width(&n), solves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::contact_report;

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    fn fan() -> LayeredGraph {
        LayeredGraph::from_ints(&[&[3], &[1, 1, 1]], &[&[Some((0, 2))]]).unwrap()
    }

    #[test]
    fn fan_network_shape() {
        let n = build_network(&fan()).unwrap();
        assert_eq!(n.supply(), q(9));
        assert_eq!(n.nodes().len(), 16);
        let gaps = n.nodes().iter().filter(|v| v.kind == NodeKind::Gap).count();
        assert_eq!(gaps, 2);
        let internal = n.arcs()[n.internal_arc(VertexId::new(0, 0))];
        assert_eq!((internal.lower, internal.capacity, internal.cost), (3, 3, 0));
        for a in n.arcs() {
            let into_gap = n.nodes()[a.to].kind == NodeKind::Gap;
            assert_eq!(a.cost, i64::from(into_gap));
            if n.nodes()[a.from].kind != NodeKind::RectIn {
                assert_eq!((a.lower, a.capacity), (0, 9));
            }
        }
    }

    #[test]
    fn single_vertex_network() {
        let g = LayeredGraph::from_ints(&[&[2]], &[&[None]]).unwrap();
        let n = build_network(&g).unwrap();
        assert_eq!(n.supply(), q(2));
        let s = n.source();
        let a = n.find_node(NodeKind::RectIn, 0, 0).unwrap();
        let b = n.find_node(NodeKind::RectOut, 0, 0).unwrap();
        assert!(n.has_arc(s, a));
        assert!(n.has_arc(b, n.sink()));
        let f = solve_min_cost_flow(&n).unwrap();
        assert_eq!(f.cost, 0);
        assert!(f.flow.contains(&2));
        let r = extract_representation(&g, &n, &f, q(1)).unwrap();
        let lb = n.find_node(NodeKind::LeftBuffer, 0, 0).unwrap();
        let into_lb: i64 = n.arcs().iter().zip(&f.flow).filter(|(a, _)| a.to == lb).map(|(_, x)| x).sum();
        assert_eq!(r.x(VertexId::new(0, 0)), n.to_width(into_lb));
    }

    #[test]
    fn reachability_follows_neighbor_intervals() {
        let g = LayeredGraph::from_ints(&[&[2, 2], &[1, 2, 1]], &[&[Some((0, 1)), Some((1, 2))]]).unwrap();
        let n = build_network(&g).unwrap();
        let b00 = n.find_node(NodeKind::RectOut, 0, 0).unwrap();
        let node = |k, l, p| n.find_node(k, l, p).unwrap();
        for to in [
            node(NodeKind::RectIn, 1, 0),
            node(NodeKind::RectIn, 1, 1),
            node(NodeKind::Gap, 1, 0),
            node(NodeKind::Gap, 1, 1),
            node(NodeKind::LeftBuffer, 1, 0),
        ] {
            assert!(n.has_arc(b00, to), "missing arc to {}", n.nodes()[to]);
        }
        assert!(!n.has_arc(b00, node(NodeKind::RectIn, 1, 2)));
        assert!(!n.has_arc(b00, node(NodeKind::RightBuffer, 1, 0)));
        // The gap between the two bottom rectangles reaches everything both neighbors reach.
        let g0 = node(NodeKind::Gap, 0, 0);
        assert!(n.has_arc(g0, node(NodeKind::RectIn, 1, 2)));
        assert!(n.has_arc(g0, node(NodeKind::LeftBuffer, 1, 0)));
        let dump = n.dump_arcs();
        assert!(!dump.lines().any(|l| l.starts_with("b(0,0) a(1,2) ")));
        assert!(dump.lines().any(|l| l == "b(0,0) g(1,1) 0 6 1"));
    }

    #[test]
    fn forced_flow() {
        let g = LayeredGraph::from_ints(&[&[2]], &[&[None]]).unwrap();
        let n = build_network(&g).unwrap();
        let f = solve_min_cost_flow(&n).unwrap();
        check_flow(&n, &f).unwrap();
        assert_eq!(f.flow[n.internal_arc(VertexId::new(0, 0))], 2);
    }

    #[test]
    fn fan_area() {
        let g = fan();
        let n = build_network(&g).unwrap();
        let f = solve_min_cost_flow(&n).unwrap();
        check_flow(&n, &f).unwrap();
        assert_eq!(f.cost, 0);
        let a = minimize_area(&g, q(1)).unwrap();
        assert_eq!(a.gap_total, q(0));
        let r = &a.representation;
        let base = r.x(VertexId::new(0, 0));
        assert_eq!(r.x(VertexId::new(1, 0)) - base, q(0));
        assert_eq!(r.x(VertexId::new(1, 1)) - base, q(1));
        assert_eq!(r.x(VertexId::new(1, 2)) - base, q(2));
    }

    #[test]
    fn pinch_needs_a_gap() {
        // The middle top rectangle must sit strictly between the outer bottom ones.
        let g = LayeredGraph::from_ints(&[&[1, 1, 1], &[1, 3, 1]], &[&[Some((0, 0)), Some((0, 2)), Some((2, 2))]])
            .unwrap();
        let a = minimize_area(&g, q(1)).unwrap();
        assert_eq!(a.gap_total, q(2));
        let rep = contact_report(&g, &a.representation).unwrap();
        assert!(rep.is_valid());
        assert_eq!(rep.gap_total, q(2));
    }

    #[test]
    fn four_node_crossing_swaps() {
        // Bottom rect 0 sees both top rects; bottom rect 1 sees top rect 1 and the gap left of it.
        let g = LayeredGraph::from_ints(&[&[1, 1], &[1, 1]], &[&[Some((0, 1)), Some((1, 1))]]).unwrap();
        let n = build_network(&g).unwrap();
        let mut f = FlowResult { flow: vec![0; n.arcs().len()], cost: 0 };
        let ad = n.between[0][&(1, 3)];
        let bc = n.between[0][&(3, 2)];
        f.flow[ad] = 1;
        f.flow[bc] = 1;
        f.cost = n.arcs()[ad].cost + n.arcs()[bc].cost;
        assert_eq!(crossing_pairs(&n, &f), 1);
        let out = resolve_crossing_patterns(&n, &f).unwrap();
        assert_eq!(out.flow[n.between[0][&(1, 2)]], 1);
        assert_eq!(out.flow[n.between[0][&(3, 3)]], 1);
        assert_eq!(out.flow[ad] + out.flow[bc], 0);
        assert_eq!(out.cost, f.cost);
        assert_eq!(crossing_pairs(&n, &out), 0);
    }

    #[test]
    fn crossing_free_flow_is_fixed_point() {
        let g = fan();
        let n = build_network(&g).unwrap();
        let f = resolve_crossing_patterns(&n, &solve_min_cost_flow(&n).unwrap()).unwrap();
        assert_eq!(resolve_crossing_patterns(&n, &f).unwrap(), f);
    }

    #[test]
    fn extraction_rejects_crossings() {
        let g = LayeredGraph::from_ints(&[&[1, 1], &[1, 1]], &[&[Some((0, 1)), Some((1, 1))]]).unwrap();
        let n = build_network(&g).unwrap();
        let mut f = solve_min_cost_flow(&n).unwrap();
        assert!(extract_representation(&g, &n, &f, q(1)).is_ok());
        f.flow[n.between[0][&(1, 3)]] += 1;
        f.flow[n.between[0][&(3, 2)]] += 1;
        let err = extract_representation(&g, &n, &f, q(1)).unwrap_err();
        assert!(err.to_string().contains("crossing"), "{err}");
    }

    #[test]
    fn bounding_box() {
        let b = minimize_bounding_box(&fan(), q(1)).unwrap();
        assert_eq!(b.width, q(3));
        let g = LayeredGraph::from_ints(&[&[5]], &[&[None]]).unwrap();
        let b = minimize_bounding_box(&g, q(1)).unwrap();
        assert_eq!(b.width, q(5));
        assert_eq!(b.solves, 1);
        assert!(!is_feasible(&g, q(4)).unwrap());
        assert!(is_feasible(&g, q(5)).unwrap());
    }

    #[test]
    fn rational_widths_are_scaled() {
        let g = LayeredGraph::new(
            vec![vec![Q::new(3, 2)], vec![Q::new(1, 2), Q::new(1, 3)]],
            vec![vec![Some(crate::Interval::new(0, 1))], vec![None, None]],
        )
        .unwrap();
        let n = build_network(&g).unwrap();
        assert_eq!(n.scale(), 6);
        assert_eq!(n.supply(), Q::from_integer(3));
        let a = minimize_area(&g, Q::new(1, 3)).unwrap();
        assert_eq!(a.gap_total, q(0));
        assert!(contact_report(&g, &a.representation).unwrap().is_valid());
    }
}
