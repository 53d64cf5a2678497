//! Backtracking over element colors with forced-color elimination.
//!
//! Constraints are sets of element indices that must not be monochromatic.
//! Propagation only ever removes colors that are already in use, so unused
//! colors stay interchangeable and branching on one of them is complete
//! under symmetry breaking.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use sha2::{Digest, Sha256};

use crate::coloring::Color;
use crate::detector::CandidateTable;

const NONE: Color = Color::MAX;
const FLUSH_EVERY: u64 = 1024;

/// Deduplicated constraint hypergraph with element occurrence lists.
#[derive(Clone, Debug)]
pub struct Problem {
    pub n: usize,
    pub r: usize,
    cons_start: Vec<usize>,
    cons: Vec<u32>,
    occ_start: Vec<usize>,
    occ: Vec<u32>,
    /// Elements by decreasing constraint degree, ties by index.
    order: Vec<u32>,
    /// Some constraint has a single element, so every coloring fails.
    pub trivially_unsat: bool,
}

impl Problem {
    pub fn from_table(table: &CandidateTable, r: usize) -> Self {
        let mut sets: Vec<Vec<u32>> = table
            .iter()
            .map(|vals| {
                let mut v = vals.to_vec();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        sets.sort_unstable();
        sets.dedup();
        Problem::new(table.window().len(), r, sets)
    }

    /// `sets` must be sorted, deduplicated and made of sorted unique indices.
    pub fn new(n: usize, r: usize, sets: Vec<Vec<u32>>) -> Self {
        assert!((1..=64).contains(&r));
        let trivially_unsat = sets.iter().any(|s| s.len() == 1);
        let mut cons_start = vec![0];
        let mut cons = Vec::new();
        let mut degree = vec![0usize; n];
        for s in &sets {
            cons.extend_from_slice(s);
            cons_start.push(cons.len());
            for &e in s {
                degree[e as usize] += 1;
            }
        }
        let mut occ_start = vec![0usize; n + 1];
        for e in 0..n {
            occ_start[e + 1] = occ_start[e] + degree[e];
        }
        let mut fill = occ_start.clone();
        let mut occ = vec![0u32; cons.len()];
        for (k, s) in sets.iter().enumerate() {
            for &e in s {
                occ[fill[e as usize]] = k as u32;
                fill[e as usize] += 1;
            }
        }
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by_key(|&e| (std::cmp::Reverse(degree[e as usize]), e));
        Problem {
            n,
            r,
            cons_start,
            cons,
            occ_start,
            occ,
            order,
            trivially_unsat,
        }
    }

    pub fn constraint_count(&self) -> usize {
        self.cons_start.len() - 1
    }

    pub fn constraint(&self, k: usize) -> &[u32] {
        &self.cons[self.cons_start[k]..self.cons_start[k + 1]]
    }

    pub fn constraints(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.constraint_count()).map(move |k| self.constraint(k))
    }

    fn occurrences(&self, e: usize) -> &[u32] {
        &self.occ[self.occ_start[e]..self.occ_start[e + 1]]
    }

    /// Whether a full color array leaves every constraint non-monochromatic.
    pub fn is_avoiding(&self, colors: &[Color]) -> bool {
        self.constraints().all(|s| {
            let c = colors[s[0] as usize];
            s[1..].iter().any(|&e| colors[e as usize] != c)
        })
    }
}

/// Shared limits and cancellation for one search.
pub struct Control {
    pub max_nodes: Option<u64>,
    pub deadline: Option<Instant>,
    pub nodes: AtomicU64,
    /// Lowest subtree index known to contain a solution.
    pub found_min: AtomicUsize,
}

impl Control {
    pub fn new(max_nodes: Option<u64>, deadline: Option<Instant>) -> Self {
        Control {
            max_nodes,
            deadline,
            nodes: AtomicU64::new(0),
            found_min: AtomicUsize::new(usize::MAX),
        }
    }

    fn over_budget(&self) -> bool {
        if let Some(m) = self.max_nodes {
            if self.nodes.load(Ordering::Relaxed) >= m {
                return true;
            }
        }
        matches!(self.deadline, Some(d) if Instant::now() >= d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dfs {
    Solved,
    Exhausted,
    Budget,
    Aborted,
}

enum Change {
    Assign(u32),
    Domain(u32, u64),
}

struct Frame {
    pos: usize,
    elem: u32,
    values: u64,
    chosen: Color,
    mark: usize,
}

pub struct State<'p> {
    p: &'p Problem,
    symmetry: bool,
    domain: Vec<u64>,
    color: Vec<Color>,
    /// `cnt[k * r + c]` = members of constraint `k` colored `c`.
    cnt: Vec<u32>,
    used: Vec<u32>,
    trail: Vec<Change>,
    queue: Vec<u32>,
    pub nodes: u64,
    unflushed: u64,
    hasher: Sha256,
}

impl<'p> State<'p> {
    pub fn new(p: &'p Problem, symmetry: bool) -> Self {
        let full = if p.r == 64 { u64::MAX } else { (1u64 << p.r) - 1 };
        State {
            p,
            symmetry,
            domain: vec![full; p.n],
            color: vec![NONE; p.n],
            cnt: vec![0; p.constraint_count() * p.r],
            used: vec![0; p.r],
            trail: Vec::new(),
            queue: Vec::new(),
            nodes: 0,
            unflushed: 0,
            hasher: Sha256::new(),
        }
    }

    pub fn colors(&self) -> &[Color] {
        &self.color
    }

    pub fn trace_digest(self) -> [u8; 32] {
        self.hasher.finalize().into()
    }

    fn undo_to(&mut self, mark: usize) {
        let r = self.p.r;
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Change::Assign(e) => {
                    let c = self.color[e as usize] as usize;
                    for &k in self.p.occurrences(e as usize) {
                        self.cnt[k as usize * r + c] -= 1;
                    }
                    self.used[c] -= 1;
                    self.color[e as usize] = NONE;
                }
                Change::Domain(e, old) => self.domain[e as usize] = old,
            }
        }
    }

    /// Assigns `c` to `e` and propagates; `false` on conflict (state must
    /// then be undone by the caller).
    pub fn assign(&mut self, e: u32, c: Color) -> bool {
        self.queue.clear();
        if !self.assign_one(e, c) {
            return false;
        }
        while let Some(u) = self.queue.pop() {
            if self.color[u as usize] != NONE {
                continue;
            }
            let d = self.domain[u as usize];
            if d == 0 {
                return false;
            }
            if !self.assign_one(u, d.trailing_zeros() as Color) {
                return false;
            }
        }
        true
    }

    fn assign_one(&mut self, e: u32, c: Color) -> bool {
        let p = self.p;
        let r = p.r;
        let cu = c as usize;
        if self.domain[e as usize] & (1 << cu) == 0 {
            return false;
        }
        self.trail.push(Change::Assign(e));
        self.color[e as usize] = c;
        self.used[cu] += 1;
        let occ = p.occurrences(e as usize);
        for &k in occ {
            self.cnt[k as usize * r + cu] += 1;
        }
        for &k in occ {
            let k = k as usize;
            let members = p.constraint(k);
            let m = self.cnt[k * r + cu] as usize;
            if m == members.len() {
                return false;
            }
            if m + 1 == members.len() {
                let Some(&u) = members.iter().find(|&&u| self.color[u as usize] == NONE) else {
                    continue;
                };
                let d = self.domain[u as usize];
                if d & (1 << cu) != 0 {
                    self.trail.push(Change::Domain(u, d));
                    let nd = d & !(1 << cu);
                    self.domain[u as usize] = nd;
                    if nd == 0 {
                        return false;
                    }
                    if nd.is_power_of_two() {
                        self.queue.push(u);
                    }
                }
            }
        }
        true
    }

    fn branch_values(&self, e: u32) -> u64 {
        let d = self.domain[e as usize];
        if !self.symmetry {
            return d;
        }
        let mut mask = 0u64;
        for c in 0..self.p.r {
            if self.used[c] > 0 {
                mask |= 1 << c;
            } else {
                mask |= 1 << c;
                break;
            }
        }
        d & mask
    }

    fn next_unassigned(&self, from: usize) -> Option<usize> {
        (from..self.p.n).find(|&i| self.color[self.p.order[i] as usize] == NONE)
    }

    fn tick(&mut self, ctl: &Control, abort: &dyn Fn() -> bool) -> Option<Dfs> {
        self.nodes += 1;
        self.unflushed += 1;
        if self.unflushed >= FLUSH_EVERY {
            ctl.nodes.fetch_add(self.unflushed, Ordering::Relaxed);
            self.unflushed = 0;
            if abort() {
                return Some(Dfs::Aborted);
            }
            if ctl.over_budget() {
                return Some(Dfs::Budget);
            }
        } else if let Some(m) = ctl.max_nodes {
            if ctl.nodes.load(Ordering::Relaxed) + self.unflushed > m {
                return Some(Dfs::Budget);
            }
        }
        None
    }

    pub fn flush(&mut self, ctl: &Control) {
        ctl.nodes.fetch_add(self.unflushed, Ordering::Relaxed);
        self.unflushed = 0;
    }

    /// Depth-first search below the current state. With `limit`, every
    /// consistent state reached after `limit` decisions (or earlier with
    /// all elements colored) is recorded in `leaves` and not explored.
    pub fn dfs(
        &mut self,
        ctl: &Control,
        abort: &dyn Fn() -> bool,
        limit: Option<usize>,
        leaves: &mut Vec<Vec<(u32, Color)>>,
    ) -> Dfs {
        let mut stack: Vec<Frame> = Vec::new();
        let mut descend = true;
        loop {
            if descend {
                let from = stack.last().map_or(0, |f| f.pos + 1);
                let at_limit = limit.is_some_and(|l| stack.len() >= l);
                match self.next_unassigned(from) {
                    None if limit.is_none() => return Dfs::Solved,
                    next if limit.is_some() && (next.is_none() || at_limit) => {
                        leaves.push(stack.iter().map(|f| (f.elem, f.chosen)).collect());
                    }
                    Some(pos) => {
                        let elem = self.p.order[pos];
                        stack.push(Frame {
                            pos,
                            elem,
                            values: self.branch_values(elem),
                            chosen: NONE,
                            mark: self.trail.len(),
                        });
                    }
                    None => unreachable!(),
                }
            }
            descend = false;
            let Some(top) = stack.last_mut() else {
                return Dfs::Exhausted;
            };
            let mark = top.mark;
            if top.values == 0 {
                stack.pop();
                self.undo_to(mark);
                continue;
            }
            let c = top.values.trailing_zeros() as Color;
            top.values &= top.values - 1;
            top.chosen = c;
            let elem = top.elem;
            self.undo_to(mark);
            if let Some(stop) = self.tick(ctl, abort) {
                return stop;
            }
            self.hasher.update(elem.to_le_bytes());
            self.hasher.update([c]);
            descend = self.assign(elem, c);
        }
    }
}
