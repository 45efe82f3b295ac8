//! Step chains, minimum-step-enchained sets and the saturation procedure
//! that builds the maximal set `F_k`.
//!
//! A value `y` of a working set `H` is *supported* when it is an interior
//! point of a `p`-step chain inside `H` with `p >= 1/k` and `p` strictly
//! above the support step of both chain extremes (0 and 1 have step 0).
//! The support step `S(y)` is the least such `p`. Saturation repeatedly adds
//! the interior points of every admissible chain and lowers support steps
//! until nothing changes; both updates only ever move in one direction, so
//! the result does not depend on the order in which chains are visited.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnchainedError {
    #[error("chain length must be at least 2, got {0}")]
    ShortChain(u64),
    #[error("chain extremes must satisfy 0 <= y1 < y2 <= 1, got {0} and {1}")]
    BadExtremes(Rational, Rational),
    #[error("k must be at least 2, got {0}")]
    SmallK(u64),
    #[error("{0} is not a member of the set")]
    NotMember(Rational),
    #[error("cannot build a thread pool: {0}")]
    ThreadPool(String),
}

/// An arithmetic progression `y_0 < y_1 < ... < y_r` in `[0, 1]`, `r >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepChain {
    points: Vec<Rational>,
    step: Rational,
}

impl StepChain {
    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn step(&self) -> &Rational {
        &self.step
    }

    pub fn extremes(&self) -> (&Rational, &Rational) {
        (&self.points[0], &self.points[self.points.len() - 1])
    }

    pub fn interior(&self) -> &[Rational] {
        &self.points[1..self.points.len() - 1]
    }
}

/// The `(y2 - y1)/r`-step chain with extremes `y1` and `y2`.
pub fn make_chain(y1: &Rational, y2: &Rational, r: u64) -> Result<StepChain, EnchainedError> {
    if r < 2 {
        return Err(EnchainedError::ShortChain(r));
    }
    if y1.is_negative() || y1 >= y2 || *y2 > Rational::ONE {
        return Err(EnchainedError::BadExtremes(y1.clone(), y2.clone()));
    }
    let step = (y2 - y1).div_int(r);
    let points = (0..=r as i64).map(|i| y1 + &step.mul_int(i)).collect();
    Ok(StepChain { points, step })
}

/// `I_k = {i/k : 0 <= i <= k}`.
pub fn scale_set(k: u64) -> Vec<Rational> {
    (0..=k as i64)
        .map(|i| Rational::frac(i, k as i64))
        .collect()
}

fn check_k(k: u64) -> Result<(), EnchainedError> {
    if k < 2 {
        return Err(EnchainedError::SmallK(k));
    }
    Ok(())
}

/// Support steps of a fixed set. Values with no admissible chain map to 0,
/// as do the extremes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SMap(BTreeMap<Rational, Rational>);

impl SMap {
    pub fn get(&self, y: &Rational) -> Option<&Rational> {
        self.0.get(y)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Working state: a value set with support steps (`None` = unsupported).
struct Chains {
    k: u64,
    min_step: Rational,
    values: Vec<Rational>,
    support: Vec<Option<Rational>>,
    index: HashMap<Rational, usize>,
}

/// Result of one pass over the pairs of a working set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PassStats {
    /// Values new to the set.
    pub added: usize,
    /// Existing values whose support step decreased.
    pub lowered: usize,
}

impl PassStats {
    fn is_quiet(&self) -> bool {
        self.added == 0 && self.lowered == 0
    }
}

impl Chains {
    fn new(k: u64) -> Self {
        let mut c = Chains {
            k,
            min_step: Rational::frac(1, k as i64),
            values: Vec::new(),
            support: Vec::new(),
            index: HashMap::new(),
        };
        c.push(Rational::ZERO, Some(Rational::ZERO));
        c.push(Rational::ONE, Some(Rational::ZERO));
        c
    }

    /// A closed set: members start unsupported except the extremes.
    fn closed(values: &BTreeSet<Rational>, k: u64) -> Self {
        let mut c = Chains::new(k);
        for y in values {
            if !c.index.contains_key(y) {
                c.push(y.clone(), None);
            }
        }
        c
    }

    fn push(&mut self, y: Rational, s: Option<Rational>) -> usize {
        let i = self.values.len();
        self.index.insert(y.clone(), i);
        self.values.push(y);
        self.support.push(s);
        i
    }

    fn sorted_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| self.values[a].cmp(&self.values[b]));
        idx
    }

    /// Lower bound index `j` in `sorted` with `values[sorted[j]] - lo >= 2/k`.
    fn first_reachable(&self, sorted: &[usize], from: usize) -> usize {
        let lo = &self.values[sorted[from]];
        let reach = lo + &self.min_step.mul_int(2);
        from + 1 + sorted[from + 1..].partition_point(|&j| self.values[j] < reach)
    }

    fn insert_or_lower(&mut self, y: Rational, p: &Rational, stats: &mut PassStats) -> bool {
        match self.index.get(&y) {
            None => {
                self.push(y, Some(p.clone()));
                stats.added += 1;
                true
            }
            Some(&i) => match &self.support[i] {
                Some(s) if s <= p => false,
                _ => {
                    self.support[i] = Some(p.clone());
                    stats.lowered += 1;
                    true
                }
            },
        }
    }

    /// Interior points of the admissible chains between `a` and `b` (a < b),
    /// given support steps of the extremes. Calls `emit(y, p)`; with
    /// `closed`, only chains lying entirely inside the set are used.
    fn chains_between(
        &self,
        a: &Rational,
        b: &Rational,
        sa: &Rational,
        sb: &Rational,
        closed: bool,
        mut emit: impl FnMut(Rational, &Rational),
    ) {
        let d = b - a;
        let r_max = d.floor_times(self.k);
        let floor = if sa > sb { sa } else { sb };
        for r in 2..=r_max {
            // p = d/r shrinks with r, so the first failure ends the scan
            if d.cmp_div_int(r, floor) != std::cmp::Ordering::Greater {
                break;
            }
            let p = d.div_int(r);
            if closed {
                let inside = (1..r as i64).all(|t| self.index.contains_key(&(a + &p.mul_int(t))));
                if !inside {
                    continue;
                }
            }
            for t in 1..r as i64 {
                emit(a + &p.mul_int(t), &p);
            }
        }
    }

    /// One pass in visiting order over all pairs of the set as it stood at the
    /// start of the pass; support steps update in place.
    fn literal_pass(&mut self) -> PassStats {
        let sorted = self.sorted_indices();
        let mut stats = PassStats {
            added: 0,
            lowered: 0,
        };
        let mut found = Vec::new();
        for i in 0..sorted.len() {
            let start = self.first_reachable(&sorted, i);
            for &jb in &sorted[start..] {
                let ia = sorted[i];
                let (Some(sa), Some(sb)) = (&self.support[ia], &self.support[jb]) else {
                    continue;
                };
                found.clear();
                self.chains_between(&self.values[ia], &self.values[jb], sa, sb, false, |y, p| {
                    found.push((y, p.clone()))
                });
                for (y, p) in found.drain(..) {
                    self.insert_or_lower(y, &p, &mut stats);
                }
            }
        }
        stats
    }

    /// One pass over the pairs touching a dirty value, against a snapshot of
    /// the support steps. Candidates are generated (optionally in parallel)
    /// then merged in pair order. Returns the next dirty flags.
    fn incremental_pass(
        &mut self,
        dirty: &[bool],
        closed: bool,
        stats: &mut PassStats,
    ) -> Vec<bool> {
        let sorted = self.sorted_indices();
        let this = &*self;
        let rows: Vec<Vec<(Rational, Rational)>> = (0..sorted.len())
            .into_par_iter()
            .map(|i| {
                let ia = sorted[i];
                let mut out = Vec::new();
                let Some(sa) = &this.support[ia] else {
                    return out;
                };
                for &jb in &sorted[this.first_reachable(&sorted, i)..] {
                    if !(dirty[ia] || dirty[jb]) {
                        continue;
                    }
                    let Some(sb) = &this.support[jb] else {
                        continue;
                    };
                    this.chains_between(
                        &this.values[ia],
                        &this.values[jb],
                        sa,
                        sb,
                        closed,
                        |y, p| {
                            let improves = match this.index.get(&y) {
                                None => true,
                                Some(&iy) => this.support[iy].as_ref().is_none_or(|s| p < s),
                            };
                            if improves {
                                out.push((y, p.clone()));
                            }
                        },
                    );
                }
                out
            })
            .collect();

        let mut next = vec![false; self.values.len()];
        for (y, p) in rows.into_iter().flatten() {
            if self.insert_or_lower(y.clone(), &p, stats) {
                let i = self.index[&y];
                if i >= next.len() {
                    next.resize(i + 1, false);
                }
                next[i] = true;
            }
        }
        next.resize(self.values.len(), false);
        next
    }

    /// Runs incremental passes until quiet.
    fn saturate(&mut self, mut dirty: Vec<bool>, closed: bool) -> Vec<PassStats> {
        let mut passes = Vec::new();
        loop {
            dirty.resize(self.values.len(), false);
            let mut stats = PassStats {
                added: 0,
                lowered: 0,
            };
            dirty = self.incremental_pass(&dirty, closed, &mut stats);
            passes.push(stats);
            if stats.is_quiet() {
                return passes;
            }
        }
    }

    fn smap(&self) -> SMap {
        SMap(
            self.values
                .iter()
                .zip(&self.support)
                .map(|(y, s)| (y.clone(), s.clone().unwrap_or(Rational::ZERO)))
                .collect(),
        )
    }
}

/// Support steps of every member of `h` (closed: no values are added).
pub fn s_map(h: &BTreeSet<Rational>, k: u64) -> Result<SMap, EnchainedError> {
    check_k(k)?;
    let mut chains = Chains::closed(h, k);
    let dirty = vec![true; chains.values.len()];
    chains.saturate(dirty, true);
    // extremes are forced in by construction; report only the members of h
    let mut map = chains.smap();
    map.0.retain(|y, _| h.contains(y));
    Ok(map)
}

/// `S_{H,k}(y)`: the least admissible step with `y` interior, or 0.
pub fn s_value(h: &BTreeSet<Rational>, k: u64, y: &Rational) -> Result<Rational, EnchainedError> {
    if !h.contains(y) {
        return Err(EnchainedError::NotMember(y.clone()));
    }
    Ok(s_map(h, k)?.get(y).cloned().unwrap_or(Rational::ZERO))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sweep {
    /// Every pass revisits every pair; support steps update in place.
    Literal,
    /// Each pass revisits only pairs touching a value that changed in the
    /// previous pass. Same fixpoint, far fewer pairs.
    #[default]
    Incremental,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MesOptions {
    pub sweep: Sweep,
    pub strata: bool,
    /// Worker threads for the incremental sweep; 0 or 1 runs on the caller.
    pub jobs: usize,
}

impl Default for MesOptions {
    fn default() -> Self {
        MesOptions {
            sweep: Sweep::Incremental,
            strata: false,
            jobs: 1,
        }
    }
}

/// The maximal `1/k`-minimum-step-enchained set `F_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnchainedSet {
    pub k: u64,
    /// Ascending.
    pub values: Vec<Rational>,
    pub support: SMap,
    pub strata: Option<Vec<Vec<Rational>>>,
    pub passes: Vec<PassStats>,
}

impl EnchainedSet {
    pub fn cardinality(&self) -> usize {
        self.values.len()
    }

    pub fn contains(&self, y: &Rational) -> bool {
        self.values.binary_search(y).is_ok()
    }

    /// True if some pass added nothing but still lowered a support step,
    /// i.e. a loop guarded on additions alone would have stopped there.
    pub fn guard_diverged(&self) -> bool {
        let last = self.passes.len().saturating_sub(1);
        self.passes[..last]
            .iter()
            .any(|p| p.added == 0 && p.lowered > 0)
    }

    /// Minimum support step within each stratum.
    pub fn stratum_minima(&self) -> Option<Vec<Rational>> {
        let strata = self.strata.as_ref()?;
        let mut minima = vec![Rational::ZERO];
        let mut prefix: BTreeSet<Rational> = strata[0].iter().cloned().collect();
        for layer in &strata[1..] {
            prefix.extend(layer.iter().cloned());
            let s = s_map(&prefix, self.k).ok()?;
            minima.push(layer.iter().filter_map(|y| s.get(y)).min()?.clone());
        }
        Some(minima)
    }
}

pub fn mes(k: u64) -> Result<EnchainedSet, EnchainedError> {
    mes_with(k, &MesOptions::default())
}

pub fn mes_with(k: u64, opts: &MesOptions) -> Result<EnchainedSet, EnchainedError> {
    check_k(k)?;
    crate::search::with_pool(opts.jobs, || run_mes(k, opts)).map_err(EnchainedError::ThreadPool)
}

fn run_mes(k: u64, opts: &MesOptions) -> EnchainedSet {
    let mut chains = Chains::new(k);
    let passes = match opts.sweep {
        Sweep::Literal => {
            let mut passes = Vec::new();
            loop {
                let stats = chains.literal_pass();
                passes.push(stats);
                if stats.is_quiet() {
                    break passes;
                }
            }
        }
        Sweep::Incremental => chains.saturate(vec![true; 2], false),
    };
    let support = chains.smap();
    let mut values = chains.values;
    values.sort();
    let strata = opts.strata.then(|| strata_of(k));
    EnchainedSet {
        k,
        values,
        support,
        strata,
        passes,
    }
}

/// Layers `A_0 = {0, 1}`, then `A_i`: values first reachable as interior
/// points of admissible chains whose extremes lie in `A_0 ∪ ... ∪ A_{i-1}`.
fn strata_of(k: u64) -> Vec<Vec<Rational>> {
    let mut chains = Chains::new(k);
    let mut strata = vec![vec![Rational::ZERO, Rational::ONE]];
    loop {
        let sorted = chains.sorted_indices();
        let mut layer: BTreeMap<Rational, Rational> = BTreeMap::new();
        for i in 0..sorted.len() {
            for &jb in &sorted[chains.first_reachable(&sorted, i)..] {
                let ia = sorted[i];
                let (Some(sa), Some(sb)) = (&chains.support[ia], &chains.support[jb]) else {
                    continue;
                };
                chains.chains_between(
                    &chains.values[ia],
                    &chains.values[jb],
                    sa,
                    sb,
                    false,
                    |y, p| {
                        if !chains.index.contains_key(&y) {
                            let e = layer.entry(y).or_insert_with(|| p.clone());
                            if p < e {
                                *e = p.clone();
                            }
                        }
                    },
                );
            }
        }
        if layer.is_empty() {
            return strata;
        }
        let mut dirty = vec![false; chains.values.len()];
        for (y, p) in &layer {
            chains.push(y.clone(), Some(p.clone()));
            dirty.push(true);
        }
        // support steps over the enlarged prefix, without adding values
        chains.saturate(dirty, true);
        strata.push(layer.into_keys().collect());
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EnchainedViolation {
    OutOfRange {
        value: Rational,
    },
    /// Some `i/k` is missing, so there is no `1/k`-step chain from 0 to 1.
    MissingScale {
        value: Rational,
    },
    /// A finer chain `{j/r}` with extremes 0 and 1 lies in the set.
    FinerChain {
        length: u64,
    },
    /// A non-extreme value is not interior to any admissible chain.
    Unsupported {
        value: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnchainedCheck {
    pub ok: bool,
    pub violations: Vec<EnchainedViolation>,
}

/// Checks both defining assertions for step `1/k`.
pub fn is_enchained_set(f: &BTreeSet<Rational>, k: u64) -> Result<EnchainedCheck, EnchainedError> {
    check_k(k)?;
    let mut violations = Vec::new();
    for y in f {
        if !y.is_unit_interval() {
            violations.push(EnchainedViolation::OutOfRange { value: y.clone() });
        }
    }
    if !violations.is_empty() {
        return Ok(EnchainedCheck {
            ok: false,
            violations,
        });
    }
    for y in scale_set(k) {
        if !f.contains(&y) {
            violations.push(EnchainedViolation::MissingScale { value: y });
        }
    }
    for r in (k + 1)..(f.len() as u64) {
        if (0..=r as i64).all(|j| f.contains(&Rational::frac(j, r as i64))) {
            violations.push(EnchainedViolation::FinerChain { length: r });
        }
    }
    let mut with_extremes = f.clone();
    with_extremes.insert(Rational::ZERO);
    with_extremes.insert(Rational::ONE);
    let support = s_map(&with_extremes, k)?;
    for y in f {
        if !y.is_zero() && !y.is_one() && support.get(y).is_none_or(Rational::is_zero) {
            violations.push(EnchainedViolation::Unsupported { value: y.clone() });
        }
    }
    Ok(EnchainedCheck {
        ok: violations.is_empty(),
        violations,
    })
}
