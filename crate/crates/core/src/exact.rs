//! Exact contact maximization for any number of layers.
//!
//! The integer program has one binary indicator `c(e)` per edge (1 = lost) and one
//! free coordinate per vertex:
//!
//! ```text
//! minimize  sum c(e)
//! order       x(i,j) + w(i,j)       <= x(i,j+1)
//! horizontal  x(i,j+1)              <= x(i,j) + w(i,j) + c M
//! upper       x(i+1,j')             <= x(i,j) + w(i,j) - eps + c M
//! lower       x(i,j)                <= x(i+1,j') + w(i+1,j') - eps + c M
//! left false  x(i+1,j') + w(i+1,j') <= x(i,j)      for (v(i,j), v(i+1,j')) in F_L
//! right false x(i,j) + w(i,j)       <= x(i+1,j')   for (v(i,j), v(i+1,j')) in F_R
//! ```
//!
//! Once every indicator is fixed each row is a difference constraint, so the search
//! never needs an LP solver: it branches on indicators and checks feasibility with
//! Bellman-Ford.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::io::common_denominator;
use crate::model::{check_epsilon, contact_report, false_adjacency_pairs, require_valid, Edge, EdgeKind};
use crate::model::{LayeredGraph, Representation, VertexId};
use crate::Q;

/// Which inequality of the program a row instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowKind {
    /// Same-layer order.
    Order,
    /// Horizontal contact.
    Horizontal,
    /// Upper rectangle starts early enough.
    VerticalUpper,
    /// Lower rectangle starts early enough.
    VerticalLower,
    /// Left non-neighbor above stays left.
    LeftFalse,
    /// Right non-neighbor above stays right.
    RightFalse,
}

/// `x(a) - x(b) <= bound + c(indicator) * M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelRow {
    pub kind: RowKind,
    pub a: VertexId,
    pub b: VertexId,
    pub bound: Q,
    pub indicator: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ContactModel {
    graph: LayeredGraph,
    epsilon: Q,
    big_m: Q,
    indicators: Vec<Edge>,
    rows: Vec<ModelRow>,
}

impl ContactModel {
    pub fn graph(&self) -> &LayeredGraph {
        &self.graph
    }

    pub fn epsilon(&self) -> Q {
        self.epsilon
    }

    pub fn big_m(&self) -> Q {
        self.big_m
    }

    /// One indicator per edge, in lexicographic edge order.
    pub fn indicators(&self) -> &[Edge] {
        &self.indicators
    }

    pub fn rows(&self) -> &[ModelRow] {
        &self.rows
    }

    pub fn count(&self, kind: RowKind) -> usize {
        self.rows.iter().filter(|r| r.kind == kind).count()
    }

    /// The same model with another `M`.
    pub fn with_big_m(mut self, big_m: Q) -> Self {
        self.big_m = big_m;
        self
    }

    /// Difference system for a partial assignment. Rows of fixed indicators get
    /// `+ c M`; rows of unfixed ones are dropped if `relax`, or taken with `c = 0`.
    pub fn induced_system(&self, assignment: &[Option<bool>], relax: bool) -> DifferenceConstraintSystem {
        let mut d = DifferenceConstraintSystem::new(&self.graph);
        for row in &self.rows {
            let bound = match row.indicator.map(|k| assignment[k]) {
                None | Some(Some(false)) => row.bound,
                Some(Some(true)) => row.bound + self.big_m,
                Some(None) if relax => continue,
                Some(None) => row.bound,
            };
            d.push(row.a, row.b, bound);
        }
        d
    }
}

/// Instantiates every row kind with `M = sum of widths + eps`.
pub fn build_model(g: &LayeredGraph, epsilon: Q) -> Result<ContactModel> {
    require_valid(g)?;
    check_epsilon(g, epsilon)?;
    let big_m = g.total_width() + epsilon;
    let indicators = g.edges();
    let mut rows = Vec::new();
    for (k, e) in indicators.iter().enumerate() {
        let (lo, hi) = (e.lo, e.hi);
        match e.kind() {
            EdgeKind::Horizontal => {
                let w = g.width(lo);
                rows.push(ModelRow { kind: RowKind::Order, a: lo, b: hi, bound: -w, indicator: None });
                rows.push(ModelRow { kind: RowKind::Horizontal, a: hi, b: lo, bound: w, indicator: Some(k) });
            }
            EdgeKind::Vertical => {
                rows.push(ModelRow {
                    kind: RowKind::VerticalUpper,
                    a: hi,
                    b: lo,
                    bound: g.width(lo) - epsilon,
                    indicator: Some(k),
                });
                rows.push(ModelRow {
                    kind: RowKind::VerticalLower,
                    a: lo,
                    b: hi,
                    bound: g.width(hi) - epsilon,
                    indicator: Some(k),
                });
            }
        }
    }
    let (left, right) = false_adjacency_pairs(g);
    for (v, u) in left {
        rows.push(ModelRow { kind: RowKind::LeftFalse, a: u, b: v, bound: -g.width(u), indicator: None });
    }
    for (v, u) in right {
        rows.push(ModelRow { kind: RowKind::RightFalse, a: v, b: u, bound: -g.width(v), indicator: None });
    }
    Ok(ContactModel { graph: g.clone(), epsilon, big_m, indicators, rows })
}

/// `x(a) - x(b) <= bound` over the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceConstraint {
    pub a: usize,
    pub b: usize,
    pub bound: Q,
}

#[derive(Clone, Debug, Default)]
pub struct DifferenceConstraintSystem {
    row_start: Vec<usize>,
    num_vars: usize,
    constraints: Vec<DifferenceConstraint>,
}

impl DifferenceConstraintSystem {
    /// A system with one variable per vertex of `g`.
    pub fn new(g: &LayeredGraph) -> Self {
        let mut row_start = Vec::with_capacity(g.num_layers());
        let mut acc = 0;
        for i in 0..g.num_layers() {
            row_start.push(acc);
            acc += g.layer_len(i);
        }
        DifferenceConstraintSystem { row_start, num_vars: acc, constraints: Vec::new() }
    }

    /// A system over `n` anonymous variables.
    pub fn with_vars(n: usize) -> Self {
        DifferenceConstraintSystem { row_start: Vec::new(), num_vars: n, constraints: Vec::new() }
    }

    pub fn var(&self, v: VertexId) -> usize {
        self.row_start[v.layer] + v.pos
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[DifferenceConstraint] {
        &self.constraints
    }

    pub fn push(&mut self, a: VertexId, b: VertexId, bound: Q) {
        let (a, b) = (self.var(a), self.var(b));
        self.push_raw(a, b, bound);
    }

    pub fn push_raw(&mut self, a: usize, b: usize, bound: Q) {
        self.constraints.push(DifferenceConstraint { a, b, bound });
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// Shortest-path potentials; they satisfy every constraint.
    Feasible(Vec<Q>),
    /// A negative cycle, as a list of variables.
    Infeasible(Vec<usize>),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Bellman-Ford from a virtual source tied to every variable with a 0 arc.
/// Bounds are scaled to integers by their common denominator first.
pub fn check_feasible(d: &DifferenceConstraintSystem) -> Feasibility {
    let scale = common_denominator(d.constraints.iter().map(|c| &c.bound));
    let rows: Vec<(usize, usize, i64)> = d
        .constraints
        .iter()
        .map(|c| (c.a, c.b, (c.bound * Q::from_integer(scale)).to_integer()))
        .collect();
    let n = d.num_vars;
    let mut dist = vec![0i64; n];
    let mut pred = vec![usize::MAX; n];
    let mut last = None;
    for _ in 0..=n {
        last = None;
        for &(a, b, c) in &rows {
            let cand = dist[b] + c;
            if cand < dist[a] {
                dist[a] = cand;
                pred[a] = b;
                last = Some(a);
            }
        }
        if last.is_none() {
            return Feasibility::Feasible(dist.into_iter().map(|x| Q::new(x, scale)).collect());
        }
    }
    // Walking back n steps from a vertex relaxed in the last pass lands on the cycle.
    let mut v = last.expect("relaxed in the final pass");
    for _ in 0..n {
        v = pred[v];
    }
    let mut cycle = vec![v];
    let mut u = pred[v];
    while u != v {
        cycle.push(u);
        u = pred[u];
    }
    cycle.reverse();
    Feasibility::Infeasible(cycle)
}

/// Optimal layout found by [`solve_branch_and_bound`].
#[derive(Clone, Debug)]
pub struct ExactSolution {
    pub representation: Representation,
    pub lost_count: usize,
    /// `c(e)` per indicator, `true` = lost.
    pub lost: Vec<bool>,
    /// Search nodes visited.
    pub nodes: usize,
}

impl ExactSolution {
    pub fn realized_count(&self) -> usize {
        self.lost.len() - self.lost_count
    }
}

struct Search<'a> {
    m: &'a ContactModel,
    assignment: Vec<Option<bool>>,
    best: Option<(usize, Vec<bool>, Vec<Q>)>,
    nodes: usize,
}

impl Search<'_> {
    fn visit(&mut self, next: usize, ones: usize) {
        self.nodes += 1;
        if self.best.as_ref().is_some_and(|b| ones >= b.0) {
            return;
        }
        if !check_feasible(&self.m.induced_system(&self.assignment, true)).is_feasible() {
            return;
        }
        // All remaining indicators at 0 is the best any completion can do.
        if let Feasibility::Feasible(x) = check_feasible(&self.m.induced_system(&self.assignment, false)) {
            let lost = self.assignment.iter().map(|c| *c == Some(true)).collect();
            self.best = Some((ones, lost, x));
            return;
        }
        if next == self.assignment.len() {
            return;
        }
        for value in [false, true] {
            self.assignment[next] = Some(value);
            self.visit(next + 1, ones + usize::from(value));
        }
        self.assignment[next] = None;
    }
}

/// Depth-first branch-and-bound over the indicators in edge order, `c = 0` first.
///
/// A node is pruned if its count of lost edges already reaches the incumbent, or if
/// the rows of its fixed indicators alone are infeasible. When the node's
/// completion with every open indicator at 0 is feasible it is optimal for the
/// subtree and becomes the incumbent. Among optimal assignments the
/// lexicographically smallest one is returned.
pub fn solve_branch_and_bound(m: &ContactModel) -> Result<ExactSolution> {
    let mut s = Search { m, assignment: vec![None; m.indicators.len()], best: None, nodes: 0 };
    s.visit(0, 0);
    let (lost_count, lost, x) = s
        .best
        .ok_or_else(|| Error::Internal("no feasible indicator assignment; every c = 1 should be".into()))?;
    let d = DifferenceConstraintSystem::new(&m.graph);
    let rows = m
        .graph
        .widths()
        .iter()
        .enumerate()
        .map(|(i, row)| (0..row.len()).map(|j| x[d.var(VertexId::new(i, j))]).collect())
        .collect();
    let representation = Representation::new(m.epsilon, rows).normalized();
    verify(m, &representation, &lost)?;
    Ok(ExactSolution { representation, lost_count, lost, nodes: s.nodes })
}

fn verify(m: &ContactModel, r: &Representation, lost: &[bool]) -> Result<()> {
    let report = contact_report(&m.graph, r)?;
    if !report.is_admissible() {
        return Err(Error::Internal("witness has false adjacencies or misordered pairs".into()));
    }
    for (e, &c) in m.indicators.iter().zip(lost) {
        if !c && report.lost.binary_search(e).is_ok() {
            return Err(Error::Internal(format!("indicator of {e} is 0 but the contact is not realized")));
        }
    }
    Ok(())
}

/// Builds the model and solves it.
pub fn maximize_contacts(g: &LayeredGraph, epsilon: Q) -> Result<ExactSolution> {
    solve_branch_and_bound(&build_model(g, epsilon)?)
}

fn x_name(v: VertexId) -> String {
    format!("x_{}_{}", v.layer, v.pos)
}

fn c_name(e: &Edge) -> String {
    format!("c_{}_{}_{}_{}", e.lo.layer, e.lo.pos, e.hi.layer, e.hi.pos)
}

fn term(out: &mut String, coef: i64, name: &str, first: bool) {
    let mag = coef.abs();
    let body = if mag == 1 { name.to_string() } else { format!("{mag} {name}") };
    let sign = if coef < 0 { "-" } else { "+" };
    match (first, coef < 0) {
        (true, false) => out.push_str(&body),
        (true, true) => {
            let _ = write!(out, "- {body}");
        }
        (false, _) => {
            let _ = write!(out, " {sign} {body}");
        }
    }
}

/// The model in CPLEX LP format.
///
/// Coordinates are written as `X = scale * x`, with `scale` the common denominator
/// of all widths, `eps` and `M`, so every coefficient is an integer.
pub fn export_lp(m: &ContactModel) -> String {
    let g = &m.graph;
    let scale = common_denominator(
        g.widths().iter().flatten().chain([&m.epsilon, &m.big_m]),
    );
    let s = |q: Q| (q * Q::from_integer(scale)).to_integer();
    let mut out = String::new();
    let _ = writeln!(out, "\\ layered contact model: {} indicators, {} rows", m.indicators.len(), m.rows.len());
    let _ = writeln!(out, "\\ x_i_j = {scale} * coordinate, eps = {}, M = {}", m.epsilon, m.big_m);
    out.push_str("Minimize\n obj:");
    if m.indicators.is_empty() {
        let first = g.vertices().next().map(x_name).unwrap_or_else(|| "x".into());
        let _ = write!(out, " 0 {first}");
    } else {
        out.push(' ');
        for (k, e) in m.indicators.iter().enumerate() {
            term(&mut out, 1, &c_name(e), k == 0);
        }
    }
    out.push_str("\nSubject To\n");
    for (k, r) in m.rows.iter().enumerate() {
        let _ = write!(out, " r{k}: ");
        term(&mut out, 1, &x_name(r.a), true);
        term(&mut out, -1, &x_name(r.b), false);
        if let Some(c) = r.indicator {
            let coef = s(m.big_m);
            if coef != 0 {
                term(&mut out, -coef, &c_name(&m.indicators[c]), false);
            }
        }
        let _ = writeln!(out, " <= {}", s(r.bound));
    }
    out.push_str("Bounds\n");
    for v in g.vertices() {
        let _ = writeln!(out, " {} free", x_name(v));
    }
    if !m.indicators.is_empty() {
        out.push_str("Binary\n");
        for e in &m.indicators {
            let _ = writeln!(out, " {}", c_name(e));
        }
    }
    out.push_str("End\n");
    out
}

/// The lost-contact count an assignment scores, or `None` if it is infeasible.
pub fn evaluate_assignment(m: &ContactModel, lost: &[bool]) -> Option<usize> {
    let a: Vec<Option<bool>> = lost.iter().map(|&c| Some(c)).collect();
    check_feasible(&m.induced_system(&a, false))
        .is_feasible()
        .then(|| lost.iter().filter(|&&c| c).count())
}
