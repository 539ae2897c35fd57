//! Brute-force ground truth for small integer instances.
//!
//! A layout is admissible when every rectangle of a layer is ordered and each
//! non-adjacent pair on consecutive layers lies on the side given by the
//! embedding (a vertex of layer `i + 1` left of the neighbor interval of `v` must
//! end before `v` starts, and symmetrically on the right). This rules out every
//! false adjacency.
//!
//! Two independent searches are provided for both objectives:
//!
//! * grid search: depth-first enumeration of integer coordinates, deepening the
//!   allowed number of lost contacts (or total gap) one step at a time;
//! * subset search: for every candidate set of realized edges (or per-layer gap
//!   budget) a difference-constraint system is checked with Bellman-Ford.
//!
//! # Why integer grids suffice
//!
//! Fixing which contacts are realized leaves a system of difference constraints
//! with integer bounds. Its constraint matrix is totally unimodular, so whenever it
//! is feasible it has an integral solution, and minimizing the total gap over it
//! has an integral optimum. Two more normalizations bound the grid:
//!
//! * If no rectangle covers some stretch `(a, b)` of the x-axis, moving everything
//!   right of `b` left by `b - a` keeps the order on both sides, keeps every overlap
//!   and can only close gaps. So the layout fits into a window of width `S`, the sum
//!   of all widths, and with `x(0, 0) = 0` every coordinate lies in `[-S, S]`.
//! * If layers `i` and `i + 1` do not touch, layers `i + 1` and up can be moved
//!   toward layer `i` together until they do. So the extent of every layer touches
//!   or overlaps the extent of the layer below.

use crate::error::{Error, Result};
use crate::model::{require_valid, LayeredGraph, Representation, VertexId};
use crate::Q;

/// Caps and semantics for the oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSearchConfig {
    pub max_rectangles: usize,
    pub epsilon: i64,
    /// Drop the embedding-order constraints and let non-adjacent rectangles overlap.
    pub allow_false_adjacencies: bool,
}

impl Default for GridSearchConfig {
    fn default() -> Self {
        GridSearchConfig { max_rectangles: 10, epsilon: 1, allow_false_adjacencies: false }
    }
}

impl GridSearchConfig {
    pub fn with_epsilon(epsilon: i64) -> Self {
        GridSearchConfig { epsilon, ..Self::default() }
    }
}

/// Row-major flattening of a graph with integer widths.
struct Flat {
    width: Vec<i64>,
    layer: Vec<usize>,
    row_start: Vec<usize>,
    left: Vec<Option<usize>>,
    /// Adjacent vertices on the layer below.
    down: Vec<Vec<usize>>,
    /// Non-adjacent vertices below that must end before this one starts.
    after: Vec<Vec<usize>>,
    /// Non-adjacent vertices below that must start after this one ends.
    before: Vec<Vec<usize>>,
    edges: usize,
    total: i64,
    epsilon: i64,
}

impl Flat {
    fn new(g: &LayeredGraph, cfg: &GridSearchConfig) -> Result<Self> {
        require_valid(g)?;
        let n = g.num_vertices();
        if n > cfg.max_rectangles {
            return Err(Error::TooLarge(format!(
                "{n} rectangles exceed the oracle cap of {}",
                cfg.max_rectangles
            )));
        }
        if !g.has_integer_widths() {
            return Err(Error::Unsupported("the oracle needs integer widths".into()));
        }
        let min_width = g.min_width().to_integer();
        if cfg.epsilon < 1 || cfg.epsilon > min_width {
            return Err(Error::Epsilon(format!(
                "oracle epsilon {} must be an integer in [1, {min_width}]",
                cfg.epsilon
            )));
        }
        let mut row_start = Vec::with_capacity(g.num_layers() + 1);
        let mut acc = 0;
        for i in 0..g.num_layers() {
            row_start.push(acc);
            acc += g.layer_len(i);
        }
        row_start.push(acc);
        let index = |v: VertexId| row_start[v.layer] + v.pos;
        let mut f = Flat {
            width: Vec::with_capacity(n),
            layer: Vec::with_capacity(n),
            row_start: row_start.clone(),
            left: Vec::with_capacity(n),
            down: vec![Vec::new(); n],
            after: vec![Vec::new(); n],
            before: vec![Vec::new(); n],
            edges: 0,
            total: g.total_width().to_integer(),
            epsilon: cfg.epsilon,
        };
        for v in g.vertices() {
            f.width.push(g.width(v).to_integer());
            f.layer.push(v.layer);
            f.left.push((v.pos > 0).then(|| index(v) - 1));
            f.edges += usize::from(v.pos > 0);
        }
        for v in g.vertices() {
            let Some(iv) = g.up_interval(v) else { continue };
            for p in 0..g.layer_len(v.layer + 1) {
                let u = index(VertexId::new(v.layer + 1, p));
                if iv.contains(p) {
                    f.down[u].push(index(v));
                    f.edges += 1;
                } else if cfg.allow_false_adjacencies {
                    continue;
                } else if p > iv.last {
                    f.after[u].push(index(v));
                } else {
                    f.before[u].push(index(v));
                }
            }
        }
        Ok(f)
    }

    fn len(&self) -> usize {
        self.width.len()
    }

    fn overlap(&self, x: &[i64], a: usize, xa: i64, b: usize) -> i64 {
        let lo = xa.max(x[b]);
        let hi = (xa + self.width[a]).min(x[b] + self.width[b]);
        (hi - lo).max(0)
    }

    fn is_row_first(&self, u: usize) -> bool {
        self.left[u].is_none()
    }

    fn row_last(&self, u: usize) -> bool {
        u + 1 == self.row_start[self.layer[u] + 1]
    }

    fn row_extent(&self, x: &[i64], layer: usize) -> (i64, i64) {
        let (a, b) = (self.row_start[layer], self.row_start[layer + 1] - 1);
        (x[a], x[b] + self.width[b])
    }

    /// Coordinate range for `u` given everything placed before it.
    fn range(&self, x: &[i64], u: usize) -> (i64, i64) {
        if u == 0 {
            return (0, 0);
        }
        let w = self.width[u];
        let mut lo = -self.total;
        let mut hi = self.total - w;
        if let Some(l) = self.left[u] {
            lo = lo.max(x[l] + self.width[l]);
        }
        for &v in &self.after[u] {
            lo = lo.max(x[v] + self.width[v]);
        }
        for &v in &self.before[u] {
            hi = hi.min(x[v] - w);
        }
        if self.is_row_first(u) && self.layer[u] > 0 {
            hi = hi.min(self.row_extent(x, self.layer[u] - 1).1);
        }
        (lo, hi)
    }

    /// Whether the finished row of `u` touches the row below.
    fn tethered(&self, x: &[i64], u: usize, xu: i64) -> bool {
        let layer = self.layer[u];
        layer == 0 || xu + self.width[u] >= self.row_extent(x, layer - 1).0
    }

    fn representation(&self, g: &LayeredGraph, x: &[i64]) -> Representation {
        let min = x.iter().copied().min().unwrap_or(0);
        let rows = (0..g.num_layers())
            .map(|i| {
                (self.row_start[i]..self.row_start[i + 1])
                    .map(|k| Q::from_integer(x[k] - min))
                    .collect()
            })
            .collect();
        Representation::new(Q::from_integer(self.epsilon), rows)
    }
}

struct ContactSearch<'a> {
    f: &'a Flat,
    x: Vec<i64>,
    budget: usize,
}

impl ContactSearch<'_> {
    fn dfs(&mut self, u: usize, lost: usize) -> bool {
        if u == self.f.len() {
            return true;
        }
        let (lo, hi) = self.f.range(&self.x, u);
        for xu in lo..=hi {
            let mut l = lost;
            if let Some(p) = self.f.left[u] {
                l += usize::from(xu > self.x[p] + self.f.width[p]);
            }
            for &v in &self.f.down[u] {
                l += usize::from(self.f.overlap(&self.x, u, xu, v) < self.f.epsilon);
            }
            if l > self.budget {
                continue;
            }
            if self.f.row_last(u) && !self.f.tethered(&self.x, u, xu) {
                continue;
            }
            self.x[u] = xu;
            if self.dfs(u + 1, l) {
                return true;
            }
        }
        false
    }
}

struct GapSearch<'a> {
    f: &'a Flat,
    x: Vec<i64>,
    budget: i64,
}

impl GapSearch<'_> {
    fn dfs(&mut self, u: usize, used: i64) -> bool {
        if u == self.f.len() {
            return true;
        }
        let (lo, mut hi) = self.f.range(&self.x, u);
        if let Some(p) = self.f.left[u] {
            hi = hi.min(self.x[p] + self.f.width[p] + self.budget - used);
        }
        for xu in lo..=hi {
            let gap = self.f.left[u].map_or(0, |p| xu - self.x[p] - self.f.width[p]);
            if self.f.row_last(u) && !self.f.tethered(&self.x, u, xu) {
                continue;
            }
            self.x[u] = xu;
            if self.dfs(u + 1, used + gap) {
                return true;
            }
        }
        false
    }
}

struct BoxSearch<'a> {
    f: &'a Flat,
    x: Vec<i64>,
    width: i64,
}

impl BoxSearch<'_> {
    fn dfs(&mut self, u: usize, lo_all: i64, hi_all: i64) -> bool {
        if u == self.f.len() {
            return true;
        }
        let w = self.f.width[u];
        let (lo, hi) = self.f.range(&self.x, u);
        let (lo, hi) = (lo.max(hi_all - self.width), hi.min(lo_all + self.width - w));
        for xu in lo..=hi {
            if self.f.row_last(u) && !self.f.tethered(&self.x, u, xu) {
                continue;
            }
            self.x[u] = xu;
            if self.dfs(u + 1, lo_all.min(xu), hi_all.max(xu + w)) {
                return true;
            }
        }
        false
    }
}

fn widest_layer(f: &Flat) -> i64 {
    (0..f.row_start.len() - 1)
        .map(|i| f.width[f.row_start[i]..f.row_start[i + 1]].iter().sum())
        .max()
        .unwrap_or(0)
}

/// Maximum number of realized contacts over admissible integer layouts, by grid search.
pub fn brute_force_max_contacts(g: &LayeredGraph, cfg: &GridSearchConfig) -> Result<(usize, Representation)> {
    let f = Flat::new(g, cfg)?;
    for budget in 0..=f.edges {
        let mut s = ContactSearch { f: &f, x: vec![0; f.len()], budget };
        if s.dfs(0, 0) {
            return Ok((f.edges - budget, f.representation(g, &s.x)));
        }
    }
    Err(Error::Internal("grid search found no admissible layout".into()))
}

/// Minimum total gap over admissible integer layouts, by grid search.
pub fn brute_force_min_gap(g: &LayeredGraph, cfg: &GridSearchConfig) -> Result<(i64, Representation)> {
    let f = Flat::new(g, cfg)?;
    // Every layer packed tight and pushed apart is admissible once gaps reach `S` per layer.
    let cap = f.total * g.num_layers() as i64;
    for budget in 0..=cap {
        let mut s = GapSearch { f: &f, x: vec![0; f.len()], budget };
        if s.dfs(0, 0) {
            let gap = gap_total(&f, &s.x);
            return Ok((gap, f.representation(g, &s.x)));
        }
    }
    Err(Error::Internal("grid search found no admissible layout".into()))
}

/// Narrowest bounding box over admissible integer layouts, by grid search.
pub fn brute_force_min_bbox(g: &LayeredGraph, cfg: &GridSearchConfig) -> Result<(i64, Representation)> {
    let f = Flat::new(g, cfg)?;
    for width in widest_layer(&f)..=f.total {
        let mut s = BoxSearch { f: &f, x: vec![0; f.len()], width };
        if s.dfs(0, 0, 0) {
            return Ok((width, f.representation(g, &s.x)));
        }
    }
    Err(Error::Internal("grid search found no admissible layout".into()))
}

fn gap_total(f: &Flat, x: &[i64]) -> i64 {
    (0..f.len())
        .filter_map(|u| f.left[u].map(|p| x[u] - x[p] - f.width[p]))
        .sum()
}

/// `x[a] - x[b] <= c`.
#[derive(Clone, Copy, Debug)]
struct Diff {
    a: usize,
    b: usize,
    c: i64,
}

/// Bellman-Ford from a virtual source joined to every variable by a 0 arc.
fn solve_differences(n: usize, rows: &[Diff]) -> Option<Vec<i64>> {
    let mut dist = vec![0i64; n];
    for _ in 0..=n {
        let mut changed = false;
        for r in rows {
            let cand = dist[r.b] + r.c;
            if cand < dist[r.a] {
                dist[r.a] = cand;
                changed = true;
            }
        }
        if !changed {
            return Some(dist);
        }
    }
    None
}

#[derive(Clone, Copy)]
enum EdgeRef {
    Horizontal(usize),
    Vertical(usize, usize),
}

fn base_rows(f: &Flat) -> (Vec<Diff>, Vec<EdgeRef>) {
    let mut rows = Vec::new();
    let mut edges = Vec::new();
    for u in 0..f.len() {
        if let Some(p) = f.left[u] {
            rows.push(Diff { a: p, b: u, c: -f.width[p] });
            edges.push(EdgeRef::Horizontal(u));
        }
        for &v in &f.down[u] {
            edges.push(EdgeRef::Vertical(v, u));
        }
        for &v in &f.after[u] {
            rows.push(Diff { a: v, b: u, c: -f.width[v] });
        }
        for &v in &f.before[u] {
            rows.push(Diff { a: u, b: v, c: -f.width[u] });
        }
    }
    (rows, edges)
}

fn realize(f: &Flat, e: EdgeRef, rows: &mut Vec<Diff>) {
    match e {
        EdgeRef::Horizontal(u) => {
            let p = f.left[u].expect("horizontal edge has a left end");
            rows.push(Diff { a: u, b: p, c: f.width[p] });
        }
        EdgeRef::Vertical(v, u) => {
            rows.push(Diff { a: u, b: v, c: f.width[v] - f.epsilon });
            rows.push(Diff { a: v, b: u, c: f.width[u] - f.epsilon });
        }
    }
}

/// Calls `visit` on every `k`-subset of `0..n` in lexicographic order until it returns `true`.
fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return true;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { return false };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Maximum number of realized contacts by enumerating lost-edge sets, smallest first.
pub fn subset_max_contacts(g: &LayeredGraph, cfg: &GridSearchConfig) -> Result<(usize, Representation)> {
    let f = Flat::new(g, cfg)?;
    let (base, edges) = base_rows(&f);
    for lost in 0..=edges.len() {
        let mut found = None;
        for_each_subset(edges.len(), lost, |drop| {
            let mut rows = base.clone();
            let mut d = drop.iter().peekable();
            for (k, &e) in edges.iter().enumerate() {
                if d.peek() == Some(&&k) {
                    d.next();
                } else {
                    realize(&f, e, &mut rows);
                }
            }
            found = solve_differences(f.len(), &rows);
            found.is_some()
        });
        if let Some(x) = found {
            return Ok((edges.len() - lost, f.representation(g, &x)));
        }
    }
    Err(Error::Internal("no admissible layout even with every contact lost".into()))
}

/// Calls `visit` on every way to write `total` as an ordered sum of `parts` non-negative integers.
fn for_each_composition(total: i64, parts: usize, mut visit: impl FnMut(&[i64]) -> bool) -> bool {
    fn rec(left: i64, buf: &mut Vec<i64>, parts: usize, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        if buf.len() + 1 == parts {
            buf.push(left);
            let hit = visit(buf);
            buf.pop();
            return hit;
        }
        for v in 0..=left {
            buf.push(v);
            let hit = rec(left - v, buf, parts, visit);
            buf.pop();
            if hit {
                return true;
            }
        }
        false
    }
    rec(total, &mut Vec::with_capacity(parts), parts, &mut visit)
}

/// Minimum total gap by enumerating per-layer gap budgets and checking each
/// resulting difference system.
pub fn subset_min_gap(g: &LayeredGraph, cfg: &GridSearchConfig) -> Result<(i64, Representation)> {
    let f = Flat::new(g, cfg)?;
    let (base, _) = base_rows(&f);
    let layers = g.num_layers();
    let cap = f.total * layers as i64;
    for gap in 0..=cap {
        let mut found = None;
        for_each_composition(gap, layers, |budget| {
            let mut rows = base.clone();
            for (i, &b) in budget.iter().enumerate() {
                let (first, last) = (f.row_start[i], f.row_start[i + 1] - 1);
                let packed: i64 = f.width[first..last].iter().sum();
                rows.push(Diff { a: last, b: first, c: packed + b });
            }
            found = solve_differences(f.len(), &rows);
            found.is_some()
        });
        if let Some(x) = found {
            debug_assert!(gap_total(&f, &x) <= gap);
            return Ok((gap_total(&f, &x), f.representation(g, &x)));
        }
    }
    Err(Error::Internal("no admissible layout within the gap cap".into()))
}

/// Narrowest bounding box by adding `x[v] + w[v] - x[u] <= B` for all pairs and
/// raising `B` until the difference system is feasible.
pub fn subset_min_bbox(g: &LayeredGraph, cfg: &GridSearchConfig) -> Result<(i64, Representation)> {
    let f = Flat::new(g, cfg)?;
    let (base, _) = base_rows(&f);
    for width in widest_layer(&f)..=f.total {
        let mut rows = base.clone();
        for u in 0..f.len() {
            for v in 0..f.len() {
                if u != v {
                    rows.push(Diff { a: v, b: u, c: width - f.width[v] });
                }
            }
        }
        if let Some(x) = solve_differences(f.len(), &rows) {
            return Ok((width, f.representation(g, &x)));
        }
    }
    Err(Error::Internal("no admissible layout within the total width".into()))
}
