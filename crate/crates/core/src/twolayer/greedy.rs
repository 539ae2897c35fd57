//! The block-sliding greedy for two layers.
//!
//! Each rectangle is placed against its row predecessor when it may be; if it then
//! misses the current fan, the fan's block (or the fan alone) is slid right to meet
//! it whenever that does not lose contacts, ties going to the newer position.
//!
//! This is fast and usually optimal but not always: a tie taken early can cost a
//! contact later (see the tests). [`super::sweep`] is exact.

use num_traits::Zero;

use super::{Strip, SweepLayout, SweepStats};
use crate::error::{Error, Result};
use crate::model::{check_epsilon, overlap, LayeredGraph};
use crate::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    Stay,
    Block,
    Fan,
}

struct Sweep<'a> {
    s: &'a Strip,
    eps: Q,
    x: [Vec<Q>; 2],
    count: usize,
    stats: SweepStats,
}

impl Sweep<'_> {
    fn end(&self, r: usize, j: usize) -> Q {
        self.x[r][j] + self.s.w[r][j]
    }

    fn touches(&self, r: usize, j: usize) -> bool {
        j > 0 && self.x[r][j] == self.end(r, j - 1)
    }

    fn vertical(&self, xa: Q, wa: Q, xb: Q, wb: Q) -> bool {
        overlap(xa, wa, xb, wb) >= self.eps
    }

    fn block_start(&mut self, r: usize, p: usize) -> usize {
        let mut s = p;
        while self.touches(r, s) {
            self.stats.ops += 1;
            s -= 1;
        }
        s
    }

    /// Contact change from sliding `r[first..=last]` right by `delta` while the
    /// other row holds `placed` rectangles and the new one will sit at `xn`.
    /// `None` if a rectangle would run into a non-neighbor.
    fn slide_gain(&mut self, r: usize, first: usize, last: usize, delta: Q, placed: usize, xn: Q) -> Option<i64> {
        let o = 1 - r;
        let mut gain = 0i64;
        if self.touches(r, first) {
            gain -= 1;
        }
        for m in first..=last {
            self.stats.ops += 1;
            let (xm, wm) = (self.x[r][m], self.s.w[r][m]);
            let iv = self.s.nb[r][m];
            let beyond = iv.last + 1;
            if beyond < placed && xm + wm + delta > self.x[o][beyond] {
                return None;
            }
            if beyond == placed && xm + wm + delta > xn {
                return None;
            }
            let seen = iv.last.min(placed.saturating_sub(1));
            for c in (iv.first..=seen).filter(|_| placed > 0) {
                self.stats.ops += 1;
                let (xc, wc) = (self.x[o][c], self.s.w[o][c]);
                let before = self.vertical(xm, wm, xc, wc);
                let after = self.vertical(xm + delta, wm, xc, wc);
                gain += after as i64 - before as i64;
            }
        }
        Some(gain)
    }

    fn place(&mut self, (r, j): (usize, usize), fan: (usize, usize)) -> Result<()> {
        self.stats.ops += 1;
        let (fr, p) = fan;
        debug_assert_eq!(fr, 1 - r);
        let s = self.s;
        let wn = s.w[r][j];
        let (xf, wf) = (self.x[fr][p], s.w[fr][p]);
        let mut lower: Option<Q> = (j > 0).then(|| self.end(r, j - 1));
        if p > 0 {
            if s.nb[fr][p - 1].last >= j {
                return Err(Error::Internal(format!("{:?} has two visited neighbors", s.id((r, j)))));
            }
            let e = self.end(fr, p - 1);
            lower = Some(lower.map_or(e, |l| l.max(e)));
        }
        let pred_end = (j > 0).then(|| self.end(r, j - 1));
        let xn = match lower {
            Some(l) if j > 0 => l,
            Some(l) => l.max(xf + self.eps - wn),
            None => xf + self.eps - wn,
        };
        let h = pred_end == Some(xn);
        let reach = self.vertical(xn, wn, xf, wf);
        let mut choice = (xn, Move::Stay, h as i64 + reach as i64, Q::zero());
        if !reach {
            if xn + wn < xf + self.eps {
                // Too far left: jumping onto the fan trades the row contact.
                let jump = xf + self.eps - wn;
                if !h {
                    choice = (jump, Move::Stay, 1, Q::zero());
                }
            } else {
                let delta = xn - (xf + wf - self.eps);
                let bs = self.block_start(fr, p);
                let block = self.slide_gain(fr, bs, p, delta, j, xn).map(|g| g + h as i64 + 1);
                let alone = if bs < p {
                    self.slide_gain(fr, p, p, delta, j, xn).map(|g| g + h as i64 + 1)
                } else {
                    None
                };
                let stay = h as i64;
                let best_block = block.filter(|&g| g >= stay);
                let best_alone = alone.filter(|&g| g >= stay && g >= best_block.unwrap_or(i64::MIN));
                if let Some(g) = best_alone {
                    choice = (xn, Move::Fan, g, delta);
                } else if let Some(g) = best_block {
                    choice = (xn, Move::Block, g, delta);
                } else if block.is_some() || alone.is_some() {
                    self.stats.rejected_slides += 1;
                }
                match choice.1 {
                    Move::Block => {
                        self.stats.block_slides += 1;
                        for m in bs..=p {
                            self.x[fr][m] += delta;
                        }
                    }
                    Move::Fan => {
                        self.stats.fan_slides += 1;
                        self.x[fr][p] += delta;
                    }
                    Move::Stay => {}
                }
            }
        }
        let (x, _, gain, _) = choice;
        if !(1..=2).contains(&gain) {
            return Err(Error::Internal(format!("placing {:?} changed the contact count by {gain}", s.id((r, j)))));
        }
        self.x[r].push(x);
        self.count += gain as usize;
        Ok(())
    }
}

/// Runs the greedy. The contact count is exact for the returned layout but may
/// fall short of the optimum.
pub fn greedy_sweep(g: &LayeredGraph, epsilon: Q) -> Result<SweepLayout> {
    let mut ops = 0;
    let strip = Strip::new(g, &mut ops)?;
    check_epsilon(g, epsilon)?;
    let (order, fans) = strip.order()?;
    let mut sw = Sweep {
        s: &strip,
        eps: epsilon,
        x: [Vec::with_capacity(strip.len(0)), Vec::with_capacity(strip.len(1))],
        count: 0,
        stats: SweepStats { ops, ..SweepStats::default() },
    };
    sw.x[0].push(Q::zero());
    let mut fi = 0;
    for (k, &v) in order.iter().enumerate().skip(1) {
        sw.place(v, order[fans[fi]])?;
        if fi + 1 < fans.len() && fans[fi + 1] == k {
            fi += 1;
        }
    }
    let [x0, x1] = sw.x;
    Ok(SweepLayout {
        representation: strip.representation(epsilon, x0, x1),
        realized: sw.count,
        stats: sw.stats,
    })
}
