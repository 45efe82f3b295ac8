//! Maximum contrast vectors of connected graphs: an exhaustive oracle over an
//! arbitrary finite value set, and a branch-and-bound solver over `F_k`.

use thiserror::Error;

use crate::chromatic::{chromatic_number, degree_order, optimal_colouring};
use crate::enchained::{mes, EnchainedError};
use crate::graph::{two_colourings, Graph};
use crate::greyscale::{contrast_vector, ContrastVector, Greyscale, GreyscaleError};
use crate::rational::Rational;
use crate::search::{with_pool, Best, Mode, Scaled, Search};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("graph has no edges")]
    Edgeless,
    #[error("value set must contain 0 and 1 and lie in [0, 1]")]
    BadValueSet,
    #[error("value set denominators are too large for exact search")]
    Unrepresentable,
    #[error("node budget of {budget} exceeded")]
    BudgetExceeded {
        budget: u64,
        incumbent: Option<Box<MacgResult>>,
    },
    #[error(transparent)]
    Enchained(#[from] EnchainedError),
    #[error(transparent)]
    Greyscale(#[from] GreyscaleError),
    #[error("cannot build a thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum ValueSet {
    /// `F_k` with `k = chi - 1`.
    #[default]
    Auto,
    Explicit(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub values: ValueSet,
    pub pruning: bool,
    /// Limit on search nodes (tone assignments tried).
    pub budget: Option<u64>,
    pub jobs: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            values: ValueSet::Auto,
            pruning: true,
            budget: None,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacgResult {
    pub vector: ContrastVector,
    pub witness: Greyscale,
    pub value_set: Vec<Rational>,
    pub nodes: u64,
    pub chromatic_number: usize,
}

fn normalise(values: &[Rational]) -> Result<Vec<Rational>, SolverError> {
    let mut v = values.to_vec();
    v.sort();
    v.dedup();
    let ok = v.iter().all(Rational::is_unit_interval)
        && v.first() == Some(&Rational::ZERO)
        && v.last() == Some(&Rational::ONE);
    if !ok {
        return Err(SolverError::BadValueSet);
    }
    Ok(v)
}

fn finish(
    g: &Graph,
    scaled: &Scaled,
    best: &Best,
    value_set: Vec<Rational>,
    nodes: u64,
    chi: usize,
) -> Result<MacgResult, SolverError> {
    let witness = Greyscale::new(best.tones.iter().map(|&c| scaled.decode(c)).collect())?;
    let vector = contrast_vector(g, &witness)?;
    Ok(MacgResult {
        vector,
        witness,
        value_set,
        nodes,
        chromatic_number: chi,
    })
}

fn over_budget(
    g: &Graph,
    scaled: &Scaled,
    best: Option<&Best>,
    value_set: &[Rational],
    nodes: u64,
    chi: usize,
    budget: u64,
) -> SolverError {
    let incumbent = best
        .and_then(|b| finish(g, scaled, b, value_set.to_vec(), nodes, chi).ok())
        .map(Box::new);
    SolverError::BudgetExceeded { budget, incumbent }
}

/// Every assignment `V -> values` with 0 and 1 in its image, in lexicographic
/// order of the tone sequence; returns the maximum and its first witness.
pub fn oracle_macg(g: &Graph, values: &[Rational]) -> Result<MacgResult, SolverError> {
    oracle_macg_with(g, values, None, 1)
}

pub fn oracle_macg_with(
    g: &Graph,
    values: &[Rational],
    budget: Option<u64>,
    jobs: usize,
) -> Result<MacgResult, SolverError> {
    if g.m() == 0 {
        return Err(SolverError::Edgeless);
    }
    let values = normalise(values)?;
    let scaled = Scaled::new(&values).ok_or(SolverError::Unrepresentable)?;
    let out = with_pool(jobs, || {
        Search::new(g, &scaled, (0..g.n()).collect(), &[])
            .pruning(false)
            .budget(budget)
            .run_split()
    })
    .map_err(SolverError::ThreadPool)?;
    let chi = chromatic_number(g);
    if out.exhausted {
        let b = budget.unwrap_or(0);
        return Err(over_budget(
            g,
            &scaled,
            out.best.as_ref(),
            &values,
            out.nodes,
            chi,
            b,
        ));
    }
    let best = out.best.expect("a 2-valued assignment always exists");
    finish(g, &scaled, &best, values, out.nodes, chi)
}

/// The maximum contrast vector over `cfg.values` and its lexicographically
/// smallest witness.
pub fn solve_macg(g: &Graph, cfg: &SearchConfig) -> Result<MacgResult, SolverError> {
    if g.m() == 0 {
        return Err(SolverError::Edgeless);
    }
    let chi = chromatic_number(g);
    let k = (chi - 1) as i64;
    let values = match &cfg.values {
        ValueSet::Auto if chi == 2 => vec![Rational::ZERO, Rational::ONE],
        ValueSet::Auto => mes(k as u64)?.values,
        ValueSet::Explicit(v) => normalise(v)?,
    };

    if chi == 2 {
        let (phi0, _) = two_colourings(g).expect("2-chromatic graphs are bipartite");
        let tones = phi0
            .classes()
            .iter()
            .map(|&c| Rational::from_integer(c as i64))
            .collect();
        let witness = Greyscale::new(tones)?;
        let vector = contrast_vector(g, &witness)?;
        return Ok(MacgResult {
            vector,
            witness,
            value_set: values,
            nodes: 0,
            chromatic_number: chi,
        });
    }

    let scaled = Scaled::new(&values).ok_or(SolverError::Unrepresentable)?;
    let seed = optimal_colouring(g)
        .iter()
        .map(|&c| scaled.encode(&Rational::frac(c as i64, k)))
        .collect::<Option<Vec<u64>>>()
        .map(|tones| Best {
            vector: Search::vector_of(g, &tones),
            tones,
        });
    // complementing a greyscale keeps its vector, so one half of the first
    // vertex's tones suffices when the value set is symmetric
    let symmetric = scaled
        .codes
        .iter()
        .all(|&c| scaled.codes.binary_search(&(scaled.scale - c)).is_ok());
    let cap = (cfg.pruning && symmetric).then_some(scaled.scale / 2);

    let phase1 = with_pool(cfg.jobs, || {
        Search::new(g, &scaled, degree_order(g), &[])
            .pruning(cfg.pruning)
            .mode(Mode::Strict)
            .budget(cfg.budget)
            .first_cap(cap)
            .seed(seed, false)
            .run_split()
    })
    .map_err(SolverError::ThreadPool)?;
    let budget = cfg.budget.unwrap_or(u64::MAX);
    if phase1.exhausted {
        return Err(over_budget(
            g,
            &scaled,
            phase1.best.as_ref(),
            &values,
            phase1.nodes,
            chi,
            budget,
        ));
    }
    let optimum = phase1
        .best
        .expect("the colouring seed or a leaf is always found");

    // canonical witness: first optimal tone sequence in vertex order
    let remaining = budget.saturating_sub(phase1.nodes);
    let phase2 = Search::new(g, &scaled, (0..g.n()).collect(), &[])
        .mode(Mode::Canonical)
        .budget(cfg.budget.map(|_| remaining))
        .seed(Some(optimum.clone()), true)
        .run();
    let nodes = phase1.nodes + phase2.nodes;
    if phase2.exhausted {
        return Err(over_budget(
            g,
            &scaled,
            Some(&optimum),
            &values,
            nodes,
            chi,
            budget,
        ));
    }
    finish(
        g,
        &scaled,
        &phase2.best.expect("seeded"),
        values,
        nodes,
        chi,
    )
}
