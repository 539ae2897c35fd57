//! Integer-valued step functions of a real variable.
//!
//! A function is stored as breakpoints `b_0 < b_1 < ...` with a value at every
//! breakpoint and a value on every open interval between them, so single points
//! may carry their own value. `NEG` stands for minus infinity.
//!
//! Coordinates are integers and callers keep every breakpoint a multiple of 4, so
//! each open piece contains the integers next to its ends.

use std::cell::Cell;

pub(crate) const NEG: i64 = i64::MIN / 4;

thread_local! {
    static WORK: Cell<u64> = const { Cell::new(0) };
}

fn work(n: usize) {
    WORK.with(|w| w.set(w.get() + n as u64));
}

/// Pieces read or written by step operations on this thread since the last call.
pub(crate) fn take_work() -> u64 {
    WORK.with(|w| w.replace(0))
}

fn clamp(v: i64) -> i64 {
    if v <= NEG / 2 {
        NEG
    } else {
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Step {
    bp: Vec<i64>,
    at: Vec<i64>,
    /// `open[i]` is the value just left of `bp[i]`; `open[bp.len()]` the tail.
    open: Vec<i64>,
}

/// One end of an interval; `closed` says whether the end point belongs to it.
#[derive(Clone, Copy, Debug)]
pub(crate) struct End {
    pub at: i64,
    pub closed: bool,
}

impl End {
    pub fn closed(at: i64) -> Self {
        End { at, closed: true }
    }

    pub fn open(at: i64) -> Self {
        End { at, closed: false }
    }
}

impl Step {
    pub fn constant(v: i64) -> Self {
        Step { bp: Vec::new(), at: Vec::new(), open: vec![clamp(v)] }
    }

    /// `inside` on the interval between `lo` and `hi` (unbounded where `None`), else `outside`.
    pub fn window(lo: Option<End>, hi: Option<End>, inside: i64, outside: i64) -> Self {
        let mut s = Step { bp: Vec::new(), at: Vec::new(), open: vec![outside] };
        if let Some(lo) = lo {
            s.bp.push(lo.at);
            s.at.push(if lo.closed { inside } else { outside });
            s.open.push(inside);
        } else {
            s.open[0] = inside;
        }
        if let Some(hi) = hi {
            if let Some(lo) = lo {
                if hi.at < lo.at || (hi.at == lo.at && !(hi.closed && lo.closed)) {
                    return Step::constant(outside);
                }
                if hi.at == lo.at {
                    let mut p = Step::constant(outside);
                    p.bp.push(hi.at);
                    p.at.push(inside);
                    p.open.push(outside);
                    return p;
                }
            }
            s.bp.push(hi.at);
            s.at.push(if hi.closed { inside } else { outside });
            s.open.push(outside);
        }
        s.normalized()
    }

    pub fn pieces(&self) -> usize {
        self.open.len()
    }

    pub fn eval(&self, x: i64) -> i64 {
        match self.bp.binary_search(&x) {
            Ok(i) => self.at[i],
            Err(i) => self.open[i],
        }
    }

    /// Largest value anywhere.
    pub fn sup(&self) -> i64 {
        self.at.iter().chain(&self.open).copied().max().unwrap_or(NEG)
    }

    /// `sup { f(y) : y > a }`.
    pub fn sup_after(&self, a: i64) -> i64 {
        let (first_bp, first_open) = match self.bp.binary_search(&a) {
            Ok(i) => (i + 1, i + 1),
            Err(i) => (i, i),
        };
        let pts = self.at[first_bp..].iter().copied().max().unwrap_or(NEG);
        let opens = self.open[first_open..].iter().copied().max().unwrap_or(NEG);
        pts.max(opens)
    }

    /// `x -> f(x - t)`.
    pub fn shift(&self, t: i64) -> Self {
        work(self.pieces());
        Step { bp: self.bp.iter().map(|b| b + t).collect(), at: self.at.clone(), open: self.open.clone() }
    }

    /// `x -> f(c - x)`.
    pub fn reflect(&self, c: i64) -> Self {
        work(self.pieces());
        Step {
            bp: self.bp.iter().rev().map(|b| c - b).collect(),
            at: self.at.iter().rev().copied().collect(),
            open: self.open.iter().rev().copied().collect(),
        }
    }

    pub fn add(&self, k: i64) -> Self {
        work(self.pieces());
        let f = |v: i64| if v == NEG { NEG } else { clamp(v + k) };
        Step { bp: self.bp.clone(), at: self.at.iter().map(|&v| f(v)).collect(), open: self.open.iter().map(|&v| f(v)).collect() }
    }

    /// `x -> sup { f(y) : y <= x }`, or `y < x` when `strict`.
    pub fn prefix_max(&self, strict: bool) -> Self {
        work(self.pieces());
        let mut run = NEG;
        let mut out = self.clone();
        for i in 0..self.bp.len() {
            run = run.max(self.open[i]);
            out.open[i] = run;
            let here = run.max(self.at[i]);
            out.at[i] = if strict { run } else { here };
            run = here;
        }
        let last = self.bp.len();
        out.open[last] = run.max(self.open[last]);
        out.normalized()
    }

    /// Pointwise combination of several functions.
    pub fn combine(fs: &[&Step], op: impl Fn(&[i64]) -> i64) -> Step {
        let mut bp: Vec<i64> = fs.iter().flat_map(|f| f.bp.iter().copied()).collect();
        bp.sort();
        bp.dedup();
        work(fs.iter().map(|f| f.pieces()).sum::<usize>() + bp.len());
        let mut vals = vec![0; fs.len()];
        let mut sample = |x: i64| {
            for (v, f) in vals.iter_mut().zip(fs) {
                *v = f.eval(x);
            }
            clamp(op(&vals))
        };
        let at: Vec<i64> = bp.iter().map(|&b| sample(b)).collect();
        let mut open = Vec::with_capacity(bp.len() + 1);
        for i in 0..=bp.len() {
            let x = match (i.checked_sub(1).map(|j| bp[j]), bp.get(i)) {
                (None, None) => 0,
                (None, Some(&b)) => b - 1,
                (Some(a), None) => a + 1,
                (Some(a), Some(&b)) => {
                    debug_assert!(b - a >= 2, "breakpoints {a} and {b} too close");
                    a + 1
                }
            };
            open.push(sample(x));
        }
        Step { bp, at, open }.normalized()
    }

    pub fn max(&self, other: &Step) -> Step {
        Step::combine(&[self, other], |v| v[0].max(v[1]))
    }

    pub fn plus(&self, other: &Step) -> Step {
        Step::combine(&[self, other], |v| if v[0] == NEG || v[1] == NEG { NEG } else { v[0] + v[1] })
    }

    /// Keeps `f` where `mask > 0` and is `NEG` elsewhere.
    pub fn masked(&self, mask: &Step) -> Step {
        Step::combine(&[self, mask], |v| if v[1] > 0 { v[0] } else { NEG })
    }

    /// Largest `x <= bound` with `f(x) >= t`.
    pub fn witness_at_most(&self, bound: i64, t: i64) -> Option<i64> {
        if self.eval(bound) >= t {
            return Some(bound);
        }
        // Pieces strictly left of `bound`, right to left.
        let mut i = match self.bp.binary_search(&bound) {
            Ok(i) => i,
            Err(i) => i,
        };
        let mut right = bound;
        loop {
            // open piece i lies in (bp[i-1], right)
            if self.open[i] >= t {
                return Some(right - 1);
            }
            if i == 0 {
                return None;
            }
            i -= 1;
            if self.at[i] >= t {
                return Some(self.bp[i]);
            }
            right = self.bp[i];
        }
    }

    /// Some `x > a` with `f(x) >= t`, as far left as the pieces allow.
    pub fn witness_after(&self, a: i64, t: i64) -> Option<i64> {
        let mut i = match self.bp.binary_search(&a) {
            Ok(i) => i + 1,
            Err(i) => i,
        };
        let mut left = a;
        loop {
            // open piece i lies in (left, bp[i])
            if self.open[i] >= t {
                return Some(left + 1);
            }
            if i == self.bp.len() {
                return None;
            }
            if self.at[i] >= t {
                return Some(self.bp[i]);
            }
            left = self.bp[i];
            i += 1;
        }
    }

    fn normalized(mut self) -> Self {
        let n = self.bp.len();
        let mut bp = Vec::with_capacity(n);
        let mut at = Vec::with_capacity(n);
        let mut open = Vec::with_capacity(n + 1);
        open.push(self.open[0]);
        for i in 0..n {
            let (l, p, r) = (*open.last().expect("nonempty"), self.at[i], self.open[i + 1]);
            if l == p && p == r {
                continue;
            }
            bp.push(self.bp[i]);
            at.push(p);
            open.push(r);
        }
        self.bp = bp;
        self.at = at;
        self.open = open;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_and_points() {
        let w = Step::window(Some(End::closed(0)), Some(End::open(8)), 1, 0);
        assert_eq!((w.eval(-4), w.eval(0), w.eval(4), w.eval(8)), (0, 1, 1, 0));
        let p = Step::window(Some(End::closed(12)), Some(End::closed(12)), 5, NEG);
        assert_eq!((p.eval(12), p.eval(13)), (5, NEG));
        assert_eq!(Step::window(Some(End::open(12)), Some(End::closed(12)), 5, 0).sup(), 0);
    }

    #[test]
    fn prefix_max_and_strict() {
        let p = Step::window(Some(End::closed(4)), Some(End::closed(4)), 4, 0);
        let pm = p.prefix_max(false);
        assert_eq!((pm.eval(0), pm.eval(4), pm.eval(8)), (0, 4, 4));
        let spm = p.prefix_max(true);
        assert_eq!((spm.eval(4), spm.eval(5)), (0, 4));
    }

    #[test]
    fn shift_reflect_sup_after() {
        let w = Step::window(Some(End::closed(0)), Some(End::open(8)), 1, 0);
        assert_eq!(w.shift(20).eval(20), 1);
        let r = w.reflect(40);
        assert_eq!((r.eval(40), r.eval(32), r.eval(33)), (1, 0, 1));
        assert_eq!(w.sup_after(8), 0);
        assert_eq!(w.sup_after(4), 1);
    }

    #[test]
    fn witnesses() {
        let w = Step::window(Some(End::open(0)), Some(End::open(8)), 1, 0);
        assert_eq!(w.witness_at_most(20, 1), Some(7));
        assert_eq!(w.witness_at_most(2, 1), Some(2));
        assert_eq!(w.witness_at_most(0, 1), None);
        assert_eq!(w.witness_after(-12, 1), Some(1));
        assert_eq!(w.witness_after(8, 1), None);
        let pt = Step::window(Some(End::closed(16)), Some(End::closed(16)), 1, 0);
        assert_eq!(pt.witness_at_most(36, 1), Some(16));
        assert_eq!(pt.witness_after(0, 1), Some(16));
    }

    #[test]
    fn combine_merges_breakpoints() {
        let a = Step::window(Some(End::closed(0)), None, 1, 0);
        let b = Step::window(None, Some(End::closed(0)), 2, 0);
        let m = a.max(&b);
        assert_eq!((m.eval(-4), m.eval(0), m.eval(4)), (2, 2, 1));
        assert_eq!(a.plus(&b).eval(0), 3);
        assert_eq!(a.masked(&b).eval(4), NEG);
    }
}
