//! Depth-first assignment search over a finite tone set, shared by the
//! unrestricted and restricted solvers. Tones are scaled to integers by the
//! common denominator of the value set, so comparisons are exact and cheap.

use std::cmp::Ordering;

use crate::graph::{Graph, Vertex};
use crate::rational::{common_denominator, scaled_numerator, Rational};

const UNSET: u64 = u64::MAX;

/// A value set scaled by the least common multiple of its denominators.
#[derive(Debug, Clone)]
pub(crate) struct Scaled {
    pub scale: u64,
    /// Ascending.
    pub codes: Vec<u64>,
}

impl Scaled {
    /// `None` if the common denominator overflows.
    pub fn new(values: &[Rational]) -> Option<Self> {
        let scale = common_denominator(values)?;
        let mut codes = values
            .iter()
            .map(|v| scaled_numerator(v, scale))
            .collect::<Option<Vec<u64>>>()?;
        codes.sort_unstable();
        codes.dedup();
        Some(Scaled { scale, codes })
    }

    pub fn encode(&self, v: &Rational) -> Option<u64> {
        scaled_numerator(v, self.scale).filter(|c| self.codes.binary_search(c).is_ok())
    }

    pub fn decode(&self, c: u64) -> Rational {
        Rational::frac(c as i64, self.scale as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Replace the incumbent only on a strictly larger vector; prune any
    /// branch whose bound does not exceed it.
    Strict,
    /// Return the first leaf in visiting order attaining the maximum:
    /// prune only branches strictly below the incumbent and let the first
    /// search leaf replace a seeded incumbent of equal value.
    Canonical,
}

#[derive(Debug, Clone)]
pub(crate) struct Best {
    pub vector: Vec<u64>,
    pub tones: Vec<u64>,
}

pub(crate) struct Outcome {
    pub best: Option<Best>,
    pub nodes: u64,
    pub exhausted: bool,
}

pub(crate) struct Search<'a> {
    g: &'a Graph,
    codes: &'a [u64],
    one: u64,
    order: Vec<Vertex>,
    tone: Vec<u64>,
    /// Tones of edges with both ends assigned, ascending.
    decided: Vec<u64>,
    zeros: usize,
    ones: usize,
    pub nodes: u64,
    budget: Option<u64>,
    pruning: bool,
    mode: Mode,
    /// Stop at the first accepted leaf (the seed is known to be optimal).
    stop_on_accept: bool,
    /// Largest tone tried for `order[0]`.
    first_cap: Option<u64>,
    best: Option<Best>,
    from_search: bool,
    done: bool,
    exhausted: bool,
}

impl<'a> Search<'a> {
    /// `fixed` pre-assigns tones; `order` lists the vertices to branch on.
    pub fn new(
        g: &'a Graph,
        scaled: &'a Scaled,
        order: Vec<Vertex>,
        fixed: &[(Vertex, u64)],
    ) -> Self {
        let mut s = Search {
            g,
            codes: &scaled.codes,
            one: scaled.scale,
            order,
            tone: vec![UNSET; g.n()],
            decided: Vec::with_capacity(g.m()),
            zeros: 0,
            ones: 0,
            nodes: 0,
            budget: None,
            pruning: true,
            mode: Mode::Strict,
            stop_on_accept: false,
            first_cap: None,
            best: None,
            from_search: false,
            done: false,
            exhausted: false,
        };
        for &(v, t) in fixed {
            s.assign(v, t);
        }
        s
    }

    pub fn pruning(mut self, on: bool) -> Self {
        self.pruning = on;
        self
    }

    pub fn mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }

    pub fn first_cap(mut self, cap: Option<u64>) -> Self {
        self.first_cap = cap;
        self
    }

    pub fn seed(mut self, best: Option<Best>, optimal: bool) -> Self {
        self.best = best;
        self.stop_on_accept = optimal;
        self
    }

    pub fn vector_of(g: &Graph, tones: &[u64]) -> Vec<u64> {
        let mut v: Vec<u64> = g
            .edges()
            .iter()
            .map(|&(a, b)| tones[a].abs_diff(tones[b]))
            .collect();
        v.sort_unstable();
        v
    }

    fn assign(&mut self, v: Vertex, t: u64) {
        self.tone[v] = t;
        for &w in self.g.neighbours(v) {
            let tw = self.tone[w];
            if tw != UNSET {
                let d = t.abs_diff(tw);
                let at = self.decided.partition_point(|&x| x < d);
                self.decided.insert(at, d);
            }
        }
        self.zeros += (t == 0) as usize;
        self.ones += (t == self.one) as usize;
    }

    fn unassign(&mut self, v: Vertex) {
        let t = self.tone[v];
        self.tone[v] = UNSET;
        for &w in self.g.neighbours(v) {
            let tw = self.tone[w];
            if tw != UNSET {
                let d = t.abs_diff(tw);
                let at = self.decided.partition_point(|&x| x < d);
                self.decided.remove(at);
            }
        }
        self.zeros -= (t == 0) as usize;
        self.ones -= (t == self.one) as usize;
    }

    /// Decided tones ascending, padded with 1 for undecided edges, against `other`.
    fn bound_cmp(&self, other: &[u64]) -> Ordering {
        for (i, &o) in other.iter().enumerate() {
            let b = self.decided.get(i).copied().unwrap_or(self.one);
            match b.cmp(&o) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    fn pruned(&self, depth: usize) -> bool {
        if !self.pruning {
            return false;
        }
        let remaining = self.order.len() - depth;
        if (self.zeros == 0) as usize + (self.ones == 0) as usize > remaining {
            return true;
        }
        let Some(best) = &self.best else {
            return false;
        };
        if self.decided.first().is_some_and(|&d| d < best.vector[0]) {
            return true;
        }
        match (self.mode, self.bound_cmp(&best.vector)) {
            (Mode::Strict, Ordering::Greater) => false,
            (Mode::Strict, _) => true,
            (Mode::Canonical, ord) => ord == Ordering::Less,
        }
    }

    fn leaf(&mut self) {
        if self.zeros == 0 || self.ones == 0 {
            return;
        }
        let accept = match &self.best {
            None => true,
            Some(best) => match self.decided.as_slice().cmp(&best.vector) {
                Ordering::Greater => true,
                Ordering::Equal => self.mode == Mode::Canonical && !self.from_search,
                Ordering::Less => false,
            },
        };
        if accept {
            self.best = Some(Best {
                vector: self.decided.clone(),
                tones: self.tone.clone(),
            });
            self.from_search = true;
            self.done = self.stop_on_accept;
        }
    }

    fn dfs(&mut self, depth: usize) {
        if self.done {
            return;
        }
        if depth == self.order.len() {
            self.leaf();
            return;
        }
        let v = self.order[depth];
        let cap = if depth == 0 { self.first_cap } else { None };
        for i in 0..self.codes.len() {
            let t = self.codes[i];
            if cap.is_some_and(|c| t > c) {
                break;
            }
            self.nodes += 1;
            if self.budget.is_some_and(|b| self.nodes > b) {
                self.exhausted = true;
                self.done = true;
                return;
            }
            self.assign(v, t);
            if !self.pruned(depth + 1) {
                self.dfs(depth + 1);
            }
            self.unassign(v);
            if self.done {
                return;
            }
        }
    }

    pub fn run(mut self) -> Outcome {
        if !self.pruned(0) {
            self.dfs(0);
        }
        Outcome {
            best: self.best,
            nodes: self.nodes,
            exhausted: self.exhausted,
        }
    }

    /// Runs one independent search per tone of `order[0]` (in parallel when
    /// a rayon pool is installed) and keeps the first strictly largest
    /// result. Node counts do not depend on the number of workers.
    pub fn run_split(self) -> Outcome {
        use rayon::prelude::*;
        let Some(&v0) = self.order.first() else {
            return self.run();
        };
        let cap = self.first_cap;
        let tones: Vec<u64> = self
            .codes
            .iter()
            .copied()
            .filter(|&t| cap.is_none_or(|c| t <= c))
            .collect();
        let base_fixed: Vec<(Vertex, u64)> = (0..self.g.n())
            .filter(|&v| self.tone[v] != UNSET)
            .map(|v| (v, self.tone[v]))
            .collect();
        let rest = self.order[1..].to_vec();
        let scaled = Scaled {
            scale: self.one,
            codes: self.codes.to_vec(),
        };
        let parts: Vec<Outcome> = tones
            .par_iter()
            .map(|&t| {
                let mut fixed = base_fixed.clone();
                fixed.push((v0, t));
                let mut s = Search::new(self.g, &scaled, rest.clone(), &fixed)
                    .pruning(self.pruning)
                    .mode(self.mode)
                    .budget(self.budget)
                    .seed(self.best.clone(), self.stop_on_accept);
                s.nodes = 1;
                s.run()
            })
            .collect();
        let mut out = Outcome {
            best: self.best,
            nodes: 0,
            exhausted: false,
        };
        for p in parts {
            out.nodes += p.nodes;
            out.exhausted |= p.exhausted;
            if let Some(b) = p.best {
                if out.best.as_ref().is_none_or(|cur| b.vector > cur.vector) {
                    out.best = Some(b);
                }
            }
        }
        if self.budget.is_some_and(|b| out.nodes > b) {
            out.exhausted = true;
        }
        out
    }
}

/// Runs `f` on a dedicated pool of `jobs` workers (at least one).
pub(crate) fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| e.to_string())?;
    Ok(pool.install(f))
}
