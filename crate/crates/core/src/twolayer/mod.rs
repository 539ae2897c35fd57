//! Contact maximization on two layers.
//!
//! A vertex with exactly one neighbor on the other layer is a *T-vertex*, one with
//! more is a *fan*. Rectangles are visited fan by fan: a fan, then its unvisited
//! neighbors on the other row from left to right, the last of which is the next
//! fan. Every rectangle then has exactly one visited vertical neighbor, the
//! current fan, and one row predecessor.
//!
//! [`sweep`] walks this order once. For the newest rectangle it keeps, as a step
//! function of its offset from the current fan, the best number of contacts any
//! layout of the visited prefix can realize. Offsets that are worse than some
//! offset further left by a whole contact are dropped: everything placed later can
//! be copied with at most the row contact to lose. When the next fan is reached the
//! function is re-expressed relative to it. A backward pass picks concrete offsets.
//!
//! [`greedy_sweep`] is the block-sliding greedy, kept for comparison.

mod greedy;
mod step;

pub use greedy::greedy_sweep;


use crate::error::{Error, Result};
use crate::io::{common_denominator, scaled};
use crate::model::{check_epsilon, require_valid, Interval, LayeredGraph, Representation, VertexId};
use crate::Q;
use step::{End, Step, NEG};

/// The visiting order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacementOrder {
    pub order: Vec<VertexId>,
    /// Fans in the order they become current; the first entry is `order[0]`.
    pub fans: Vec<VertexId>,
}

/// A maximal run `first..=last` of rectangles on one layer that all touch their
/// right neighbor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub layer: usize,
    pub first: usize,
    pub last: usize,
}

/// Counters from one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweepStats {
    /// Elementary steps: one per rectangle and interval scanned, plus every
    /// step-function piece created (exact sweep) or rectangle and contact
    /// re-examined by a slide (greedy).
    pub ops: u64,
    /// Largest step function built by the exact sweep, in pieces.
    pub max_pieces: usize,
    pub block_slides: usize,
    pub fan_slides: usize,
    pub rejected_slides: usize,
}

#[derive(Clone, Debug)]
pub struct SweepLayout {
    pub representation: Representation,
    pub realized: usize,
    pub stats: SweepStats,
}

/// Visit order as `(row, index)` pairs and the positions of the fans in it.
type LocalOrder = (Vec<(usize, usize)>, Vec<usize>);

/// Local view of the graph with row 0 being the layer that starts on a fan.
struct Strip {
    layer: [usize; 2],
    w: [Vec<Q>; 2],
    /// Neighbor interval of each rectangle in the other row.
    nb: [Vec<Interval>; 2],
}

impl Strip {
    fn new(g: &LayeredGraph, ops: &mut u64) -> Result<Strip> {
        if g.num_layers() != 2 {
            return Err(Error::Unsupported(format!(
                "two-layer contact maximization needs exactly 2 layers, got {}",
                g.num_layers()
            )));
        }
        require_valid(g)?;
        let up: Vec<Interval> = g.up_intervals()[0].iter().map(|iv| iv.expect("validated")).collect();
        let mut down = vec![Interval::new(usize::MAX, 0); g.layer_len(1)];
        for (a, iv) in up.iter().enumerate() {
            for d in &mut down[iv.first..=iv.last] {
                *ops += 1;
                d.first = d.first.min(a);
                d.last = d.last.max(a);
            }
        }
        let (w0, w1) = (g.widths()[0].clone(), g.widths()[1].clone());
        Ok(if up[0].len() >= 2 || down[0].len() < 2 {
            Strip { layer: [0, 1], w: [w0, w1], nb: [up, down] }
        } else {
            Strip { layer: [1, 0], w: [w1, w0], nb: [down, up] }
        })
    }

    fn len(&self, r: usize) -> usize {
        self.w[r].len()
    }

    fn id(&self, (r, j): (usize, usize)) -> VertexId {
        VertexId::new(self.layer[r], j)
    }

    /// Local `(row, pos)` sequence and the indices into it that are fans.
    fn order(&self) -> Result<LocalOrder> {
        let total = self.len(0) + self.len(1);
        let mut order = vec![(0, 0)];
        let mut fans = vec![0];
        let mut next = [1, 0];
        let mut fan = (0, 0);
        while order.len() < total {
            let (r, p) = fan;
            let o = 1 - r;
            let iv = self.nb[r][p];
            if iv.last < next[o] {
                return Err(Error::Internal(format!("fan {} has no unvisited neighbors", self.id(fan))));
            }
            order.extend((next[o]..=iv.last).map(|j| (o, j)));
            next[o] = iv.last + 1;
            if order.len() == total {
                break;
            }
            if self.nb[o][iv.last].last <= p {
                return Err(Error::Internal(format!("visiting order stalls after {}", self.id((o, iv.last)))));
            }
            fan = (o, iv.last);
            fans.push(order.len() - 1);
        }
        Ok((order, fans))
    }

    fn representation(&self, epsilon: Q, x0: Vec<Q>, x1: Vec<Q>) -> Representation {
        let mut rows = vec![Vec::new(), Vec::new()];
        rows[self.layer[0]] = x0;
        rows[self.layer[1]] = x1;
        Representation::new(epsilon, rows).normalized()
    }
}

/// The visiting order; rejects graphs that do not have exactly two layers.
pub fn placement_order(g: &LayeredGraph) -> Result<PlacementOrder> {
    let strip = Strip::new(g, &mut 0)?;
    let (order, fans) = strip.order()?;
    Ok(PlacementOrder {
        fans: fans.iter().map(|&k| strip.id(order[k])).collect(),
        order: order.into_iter().map(|v| strip.id(v)).collect(),
    })
}

/// Value functions of one fan's stretch.
///
/// Offsets are in integer units relative to the fan's left end. `a(s)`: best
/// prefix count when the fan's children must start at `s` or later and the first
/// one may abut its row predecessor exactly at `s`. `b(s)`: the same without that
/// option. `p[i](d)`: best count with child `i` at offset `d`.
struct Stage {
    a: Step,
    b: Step,
    p: Vec<Step>,
}

struct Exact<'a> {
    eps: i64,
    /// Scaled widths per local row.
    w: [Vec<i64>; 2],
    order: &'a [(usize, usize)],
    fans: &'a [usize],
    stats: SweepStats,
}

fn closed(a: i64, b: i64) -> Step {
    Step::window(Some(End::closed(a)), Some(End::closed(b)), 1, 0)
}

impl Exact<'_> {
    fn tick(&mut self, s: Step) -> Step {
        self.stats.max_pieces = self.stats.max_pieces.max(s.pieces());
        s
    }

    fn width(&self, (r, j): (usize, usize)) -> i64 {
        self.w[r][j]
    }

    fn kids(&self, k: usize) -> &[(usize, usize)] {
        let start = self.fans[k] + 1;
        let end = self.fans.get(k + 1).map_or(self.order.len(), |&f| f + 1);
        &self.order[start..end]
    }

    /// Contact with a fan of width `wf` for a child of width `wc` at offset `d`.
    fn reach(&mut self, wc: i64, wf: i64) -> Step {
        let s = closed(self.eps - wc, wf - self.eps);
        self.tick(s)
    }

    /// Drops offsets beaten by a whole contact somewhere to their left.
    fn prune(&mut self, p: Step) -> Step {
        let left = p.prefix_max(true);
        let s = Step::combine(&[&p, &left], |v| if v[0] >= v[1] { v[0] } else { NEG });
        self.tick(s)
    }

    fn prune_pair(&mut self, a: Step, b: Step) -> (Step, Step) {
        let left = a.max(&b).prefix_max(true);
        let a2 = Step::combine(&[&a, &b, &left], |v| if v[0] >= v[2] && v[0] >= v[1] { v[0] } else { NEG });
        let b2 = Step::combine(&[&a, &b, &left], |v| if v[1] >= v[2] && v[1] > v[0] { v[1] } else { NEG });
        (self.tick(a2), self.tick(b2))
    }

    /// `s -> [s >= 0] max(p(c - s) + 1, pm(c - s)) + [s < 0] pm(c)`, where `pm`
    /// is the prefix maximum: the next fan abuts the predecessor, or leaves a gap.
    fn abut_or_gap(&mut self, p: &Step, c: i64) -> Step {
        let pm = p.prefix_max(false);
        let right = p.reflect(c).add(1).max(&pm.reflect(c));
        let right = right.masked(&Step::window(Some(End::closed(0)), None, 1, 0));
        let left = Step::window(None, Some(End::open(0)), pm.eval(c), NEG);
        let s = right.max(&left);
        self.tick(s)
    }

    /// `s -> sup { p(u) : u > c } + [s = 0]` for `s <= 0`: the predecessor ends past
    /// the old fan and the new fan sits `-s` to its right.
    fn detached(&mut self, p: &Step, c: i64) -> Step {
        let v = p.sup_after(c);
        let at0 = if v == NEG { NEG } else { v + 1 };
        let s = Step::window(None, Some(End::open(0)), v, NEG).max(&Step::window(
            Some(End::closed(0)),
            Some(End::closed(0)),
            at0,
            NEG,
        ));
        self.tick(s)
    }

    fn forward(&mut self) -> Result<(Vec<Stage>, i64)> {
        let mut stages: Vec<Stage> = Vec::with_capacity(self.fans.len());
        let mut a = Step::constant(NEG);
        let mut b = Step::constant(0);
        let mut best = 0i64;
        for k in 0..self.fans.len() {
            let fan = self.order[self.fans[k]];
            let wf = self.width(fan);
            let kids = self.kids(k).to_vec();
            let last = k + 1 == self.fans.len();
            let body = if last { kids.len() } else { kids.len() - 1 };
            let mut p: Vec<Step> = Vec::with_capacity(body);
            for (i, &c) in kids.iter().enumerate().take(body) {
                let wc = self.width(c);
                let reach = self.reach(wc, wf);
                let reached = if i == 0 {
                    a.add(1).max(&a.max(&b).prefix_max(false))
                } else {
                    let (prev, wp) = (&p[i - 1], self.width(kids[i - 1]));
                    prev.shift(wp).add(1).max(&prev.prefix_max(false).shift(wp))
                };
                let raw = reach.plus(&reached);
                let now = raw.sup();
                self.check_gain(best, now)?;
                best = now;
                let pi = self.prune(raw);
                p.push(pi);
            }
            if last {
                stages.push(Stage { a, b, p });
                break;
            }
            let next = kids[kids.len() - 1];
            let wn = self.width(next);
            let touch = closed(self.eps, wf + wn - self.eps);
            let (na, nb) = if kids.len() >= 2 {
                let pred = p[kids.len() - 2].clone();
                let c = wf - self.width(kids[kids.len() - 2]);
                (self.abut_or_gap(&pred, c), self.detached(&pred, c))
            } else {
                let via_a = self.abut_or_gap(&a, wf);
                let via_b = b.prefix_max(false).reflect(wf);
                (via_a.max(&via_b), self.detached(&a, wf))
            };
            let na = touch.plus(&na);
            let now = na.sup().max(nb.sup());
            self.check_gain(best, now)?;
            best = now;
            let (na, nb) = self.prune_pair(na, nb);
            stages.push(Stage { a, b, p });
            a = na;
            b = nb;
        }
        Ok((stages, best))
    }

    fn check_gain(&self, before: i64, after: i64) -> Result<()> {
        if !(1..=2).contains(&(after - before)) {
            return Err(Error::Internal(format!(
                "the best prefix count went from {before} to {after} in one step"
            )));
        }
        Ok(())
    }

    /// Offsets of every child from its fan; the last child of a stretch that is
    /// not the final one is the next fan.
    fn backward(&self, stages: &[Stage]) -> Result<Vec<Vec<i64>>> {
        let missing = || Error::Internal("backward pass found no witness".into());
        let n = stages.len();
        let mut offsets: Vec<Vec<i64>> = vec![Vec::new(); n];
        // What the stretch after the current one needs from it: entry kind, offset, value.
        let mut demand: Option<(bool, i64, i64)> = None;
        for k in (0..n).rev() {
            let st = &stages[k];
            let wf = self.width(self.order[self.fans[k]]);
            let kids = self.kids(k);
            let m = kids.len();
            let mut ds = vec![0i64; m];
            let mut start: Option<(usize, i64)> = None;
            let mut entry: Option<(bool, i64)> = None;
            match demand {
                None => {
                    let top = &st.p[m - 1];
                    start = Some((m - 1, top.witness_at_most(i64::MAX / 4, top.sup()).ok_or_else(missing)?));
                }
                Some((true, s, t)) => {
                    let wn = self.width(kids[m - 1]);
                    let tt = t - closed(self.eps, wf + wn - self.eps).eval(s);
                    ds[m - 1] = wf - s;
                    let (p, c) = if m >= 2 {
                        (&st.p[m - 2], wf - self.width(kids[m - 2]))
                    } else {
                        (&st.a, wf)
                    };
                    let bound = if s >= 0 { c - s } else { c };
                    let found = if s >= 0 && p.eval(c - s) + 1 >= tt { Some(c - s) } else { p.witness_at_most(bound, tt) };
                    if m >= 2 {
                        start = Some((m - 2, found.ok_or_else(missing)?));
                    } else {
                        entry = Some(match found {
                            Some(x) => (true, x),
                            None => (false, st.b.witness_at_most(wf - s, tt).ok_or_else(missing)?),
                        });
                    }
                }
                Some((false, s, t)) => {
                    let tt = t - (s == 0) as i64;
                    if m >= 2 {
                        let wp = self.width(kids[m - 2]);
                        let u = st.p[m - 2].witness_after(wf - wp, tt).ok_or_else(missing)?;
                        ds[m - 1] = u + wp - s;
                        start = Some((m - 2, u));
                    } else {
                        let s_old = st.a.witness_after(wf, tt).ok_or_else(missing)?;
                        ds[m - 1] = s_old - s;
                        entry = Some((true, s_old));
                    }
                }
            }
            if let Some((i0, d0)) = start {
                ds[i0] = d0;
                let value = |i: usize, d: i64| {
                    st.p[i].eval(d) - closed(self.eps - self.width(kids[i]), wf - self.eps).eval(d)
                };
                for i in (1..=i0).rev() {
                    let t = value(i, ds[i]);
                    let bound = ds[i] - self.width(kids[i - 1]);
                    let prev = &st.p[i - 1];
                    ds[i - 1] = if prev.eval(bound) + 1 >= t {
                        bound
                    } else {
                        prev.witness_at_most(bound, t).ok_or_else(missing)?
                    };
                }
                let t = value(0, ds[0]);
                entry = Some(if st.a.eval(ds[0]) + 1 >= t {
                    (true, ds[0])
                } else {
                    let s = st.a.max(&st.b).witness_at_most(ds[0], t).ok_or_else(missing)?;
                    (st.a.eval(s) >= t, s)
                });
            }
            offsets[k] = ds;
            let (is_a, s) = entry.ok_or_else(missing)?;
            let t = if is_a { st.a.eval(s) } else { st.b.eval(s) };
            demand = Some((is_a, s, t));
        }
        Ok(offsets)
    }
}

/// Exact contact maximization; the count is the largest over all admissible
/// layouts with vertical contacts of length at least `epsilon`.
pub fn sweep(g: &LayeredGraph, epsilon: Q) -> Result<SweepLayout> {
    let mut ops = 0;
    let strip = Strip::new(g, &mut ops)?;
    check_epsilon(g, epsilon)?;
    let (order, fans) = strip.order()?;
    let den = common_denominator(strip.w.iter().flatten().chain(std::iter::once(&epsilon)));
    let scale = 4 * den;
    let w = [
        strip.w[0].iter().map(|q| scaled(q, scale)).collect(),
        strip.w[1].iter().map(|q| scaled(q, scale)).collect(),
    ];
    let mut ex = Exact {
        eps: scaled(&epsilon, scale),
        w,
        order: &order,
        fans: &fans,
        stats: SweepStats { ops: ops + order.len() as u64, ..SweepStats::default() },
    };
    step::take_work();
    let (stages, best) = ex.forward()?;
    let offsets = ex.backward(&stages)?;
    ex.stats.ops += step::take_work();
    let mut x: [Vec<i64>; 2] = [vec![0; strip.len(0)], vec![0; strip.len(1)]];
    let mut xf = 0i64;
    for k in 0..fans.len() {
        let (fr, fp) = order[fans[k]];
        x[fr][fp] = xf;
        for (&(r, j), &d) in ex.kids(k).iter().zip(&offsets[k]) {
            x[r][j] = xf + d;
        }
        xf += offsets[k].last().copied().unwrap_or(0);
    }
    let to_q = |v: &Vec<i64>| v.iter().map(|&u| Q::new(u, scale)).collect::<Vec<Q>>();
    let [x0, x1] = &x;
    Ok(SweepLayout {
        representation: strip.representation(epsilon, to_q(x0), to_q(x1)),
        realized: best as usize,
        stats: ex.stats,
    })
}

/// A contact-maximal admissible layout of a 2-layer graph and its number of
/// realized contacts.
pub fn maximize_contacts_2layer(g: &LayeredGraph, epsilon: Q) -> Result<(Representation, usize)> {
    let out = sweep(g, epsilon)?;
    Ok((out.representation, out.realized))
}

/// Blocks of the given layer in a representation.
pub fn blocks(g: &LayeredGraph, r: &Representation, layer: usize) -> Vec<Block> {
    let mut out = Vec::new();
    let n = g.layer_len(layer);
    let mut first = 0;
    for j in 1..=n {
        let v = VertexId::new(layer, j - 1);
        if j == n || r.x(VertexId::new(layer, j)) != r.x(v) + g.width(v) {
            out.push(Block { layer, first, last: j - 1 });
            first = j;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::contact_report;
    use num_traits::Zero;

    fn v(i: usize, j: usize) -> VertexId {
        VertexId::new(i, j)
    }

    fn one() -> Q {
        Q::from_integer(1)
    }

    fn check(g: &LayeredGraph, expect: usize) -> Representation {
        let (rep, n) = maximize_contacts_2layer(g, one()).unwrap();
        let report = contact_report(g, &rep).unwrap();
        assert!(report.is_admissible(), "{report:?}");
        assert_eq!(report.realized_count(), n);
        assert_eq!(n, expect);
        rep
    }

    #[test]
    fn fan_order_and_count() {
        let g = LayeredGraph::from_ints(&[&[3], &[1, 1, 1]], &[&[Some((0, 2))]]).unwrap();
        let o = placement_order(&g).unwrap();
        assert_eq!(o.order, vec![v(0, 0), v(1, 0), v(1, 1), v(1, 2)]);
        assert_eq!(o.fans, vec![v(0, 0)]);
        let rep = check(&g, 5);
        assert_eq!(rep.rows()[0][0], Q::zero());
    }

    #[test]
    fn swapped_rows() {
        let g = LayeredGraph::from_ints(&[&[1, 1, 1], &[3]], &[&[Some((0, 0)), Some((0, 0)), Some((0, 0))]]).unwrap();
        let o = placement_order(&g).unwrap();
        assert_eq!(o.order, vec![v(1, 0), v(0, 0), v(0, 1), v(0, 2)]);
        assert_eq!(o.fans, vec![v(1, 0)]);
        check(&g, 5);
    }

    #[test]
    fn zig_zag_order() {
        let g = LayeredGraph::from_ints(&[&[1, 1], &[1, 1]], &[&[Some((0, 1)), Some((1, 1))]]).unwrap();
        let o = placement_order(&g).unwrap();
        assert_eq!(o.order, vec![v(0, 0), v(1, 0), v(1, 1), v(0, 1)]);
        assert_eq!(o.fans, vec![v(0, 0), v(1, 1)]);
        let (best, _) = crate::oracle::brute_force_max_contacts(&g, &Default::default()).unwrap();
        assert_eq!(best, 4);
        check(&g, 4);
    }

    #[test]
    fn wide_tops_lose_one() {
        let g = LayeredGraph::from_ints(&[&[1, 1], &[3, 3]], &[&[Some((0, 0)), Some((0, 1))]]).unwrap();
        check(&g, 4);
    }

    #[test]
    fn single_edge() {
        let g = LayeredGraph::from_ints(&[&[2], &[5]], &[&[Some((0, 0))]]).unwrap();
        check(&g, 1);
    }

    #[test]
    fn rational_widths_and_epsilon() {
        let g = LayeredGraph::new(
            vec![vec![Q::new(3, 2)], vec![Q::new(1, 2), Q::new(1, 3)]],
            vec![vec![Some(Interval::new(0, 1))], vec![None, None]],
        )
        .unwrap();
        let (rep, n) = maximize_contacts_2layer(&g, Q::new(1, 4)).unwrap();
        assert_eq!(n, 3);
        assert!(contact_report(&g, &rep).unwrap().is_admissible());
        assert!(matches!(maximize_contacts_2layer(&g, Q::new(1, 2)), Err(Error::Epsilon(_))));
    }

    #[test]
    fn rejects_other_layer_counts() {
        let g = LayeredGraph::from_ints(&[&[1]], &[]).unwrap();
        assert!(matches!(placement_order(&g), Err(Error::Unsupported(_))));
        let g = LayeredGraph::from_ints(&[&[1], &[1], &[1]], &[&[Some((0, 0))], &[Some((0, 0))]]).unwrap();
        assert!(matches!(maximize_contacts_2layer(&g, one()), Err(Error::Unsupported(_))));
        assert!(matches!(greedy_sweep(&g, one()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn invalid_graph_is_rejected() {
        let g = LayeredGraph::from_ints(&[&[1, 1], &[1, 1]], &[&[Some((0, 0)), Some((1, 1))]]).unwrap();
        assert!(matches!(sweep(&g, one()), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn blocks_split_at_gaps() {
        let g = LayeredGraph::from_ints(&[&[1, 1, 1], &[3]], &[&[Some((0, 0)), Some((0, 0)), Some((0, 0))]]).unwrap();
        let q = Q::from_integer;
        let r = Representation::new(one(), vec![vec![q(0), q(1), q(3)], vec![q(0)]]);
        assert_eq!(
            blocks(&g, &r, 0),
            vec![Block { layer: 0, first: 0, last: 1 }, Block { layer: 0, first: 2, last: 2 }]
        );
    }

    #[test]
    fn work_is_counted() {
        let g = LayeredGraph::from_ints(&[&[3], &[1, 1, 1]], &[&[Some((0, 2))]]).unwrap();
        let out = sweep(&g, one()).unwrap();
        assert!(out.stats.ops > 0);
        assert!(out.stats.max_pieces >= 2);
    }
}
