//! The `{0, 1}`-restricted problem on bipartite graphs: some vertices carry
//! a fixed extreme tone and the rest are chosen to maximise contrast.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{two_colourings, Graph, TwoColouring, Vertex};
use crate::greyscale::{contrast_vector, ContrastVector, Greyscale, GreyscaleError};
use crate::rational::Rational;
use crate::search::{Best, Mode, Scaled, Search};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RmacgError {
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("no vertex is fixed")]
    NothingFixed,
    #[error("every vertex is fixed")]
    EverythingFixed,
    #[error("vertex {vertex} out of range for {n} vertices")]
    OutOfRange { vertex: Vertex, n: usize },
    #[error("vertex {0} fixed twice")]
    Duplicate(Vertex),
    #[error("vertex {0}: fixed tone must be 0 or 1")]
    NotExtreme(Vertex),
    #[error("adjacent vertices {0} and {1} share fixed tone {2}")]
    SameToneAdjacent(Vertex, Vertex, u8),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
    #[error("node budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error(transparent)]
    Greyscale(#[from] GreyscaleError),
}

/// Fixed extreme tones on a nonempty proper subset `V_c` of the vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncompleteGreyscale {
    fixed: Vec<Option<u8>>,
}

impl IncompleteGreyscale {
    pub fn new(g: &Graph, fixed: &[(Vertex, u8)]) -> Result<Self, RmacgError> {
        let mut tones = vec![None; g.n()];
        for &(v, t) in fixed {
            if v >= g.n() {
                return Err(RmacgError::OutOfRange {
                    vertex: v,
                    n: g.n(),
                });
            }
            if t > 1 {
                return Err(RmacgError::NotExtreme(v));
            }
            if tones[v].replace(t).is_some() {
                return Err(RmacgError::Duplicate(v));
            }
        }
        let inc = IncompleteGreyscale { fixed: tones };
        inc.validate(g)?;
        Ok(inc)
    }

    fn validate(&self, g: &Graph) -> Result<(), RmacgError> {
        let count = self.vc().len();
        if count == 0 {
            return Err(RmacgError::NothingFixed);
        }
        if count == g.n() {
            return Err(RmacgError::EverythingFixed);
        }
        for &(u, v) in g.edges() {
            if let (Some(a), Some(b)) = (self.fixed[u], self.fixed[v]) {
                if a == b {
                    return Err(RmacgError::SameToneAdjacent(u, v, a));
                }
            }
        }
        Ok(())
    }

    pub fn tone(&self, v: Vertex) -> Option<u8> {
        self.fixed[v]
    }

    /// Fixed vertices, ascending.
    pub fn vc(&self) -> Vec<Vertex> {
        (0..self.fixed.len())
            .filter(|&v| self.fixed[v].is_some())
            .collect()
    }

    pub fn free(&self) -> Vec<Vertex> {
        (0..self.fixed.len())
            .filter(|&v| self.fixed[v].is_none())
            .collect()
    }

    pub fn pairs(&self) -> Vec<(Vertex, u8)> {
        self.vc()
            .into_iter()
            .map(|v| (v, self.fixed[v].unwrap()))
            .collect()
    }

    /// One `v t` line per fixed vertex.
    pub fn to_text(&self) -> String {
        self.pairs()
            .iter()
            .map(|(v, t)| format!("{v} {t}\n"))
            .collect()
    }
}

/// Parses `v 0` / `v 1` lines; `#` starts a comment line.
pub fn parse_fixed(text: &str, g: &Graph) -> Result<IncompleteGreyscale, RmacgError> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let bad = |reason: &str| RmacgError::Parse {
            line,
            reason: reason.to_string(),
        };
        let mut it = l.split_whitespace();
        let v = it
            .next()
            .and_then(|s| s.parse::<Vertex>().ok())
            .ok_or_else(|| bad("expected a vertex"))?;
        let t = match it.next() {
            Some("0") => 0,
            Some("1") => 1,
            _ => return Err(bad("expected tone 0 or 1")),
        };
        if it.next().is_some() {
            return Err(bad("trailing tokens"));
        }
        pairs.push((v, t));
    }
    IncompleteGreyscale::new(g, &pairs)
}

/// Fixed vertices agreeing with `phi_0` and with `phi_1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VcPartition {
    pub match_phi0: Vec<Vertex>,
    pub match_phi1: Vec<Vertex>,
}

fn colourings(g: &Graph) -> Result<(TwoColouring, TwoColouring), RmacgError> {
    two_colourings(g).ok_or(RmacgError::NotBipartite)
}

pub fn partition_vc(g: &Graph, inc: &IncompleteGreyscale) -> Result<VcPartition, RmacgError> {
    let (phi0, _) = colourings(g)?;
    inc.validate(g)?;
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (v, t) in inc.pairs() {
        if phi0.class_of(v) == t {
            a.push(v);
        } else {
            b.push(v);
        }
    }
    Ok(VcPartition {
        match_phi0: a,
        match_phi1: b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    TwoColouring,
    CompleteBipartite,
    SingleOpposite,
    StarSubdivision,
    TreeThree,
    Oracle,
    Constructive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmacgResult {
    pub vector: ContrastVector,
    pub witness: Greyscale,
    pub method: Method,
    pub partition: VcPartition,
    pub nodes: u64,
}

fn half() -> Rational {
    Rational::frac(1, 2)
}

fn bit(c: u8) -> Rational {
    Rational::from_integer(c as i64)
}

fn result(
    g: &Graph,
    tones: Vec<Rational>,
    method: Method,
    partition: VcPartition,
    nodes: u64,
) -> Result<RmacgResult, RmacgError> {
    let witness = Greyscale::new(tones)?;
    let vector = contrast_vector(g, &witness)?;
    Ok(RmacgResult {
        vector,
        witness,
        method,
        partition,
        nodes,
    })
}

/// The greyscale `f_phi`: fixed tones kept, free neighbours of fixed
/// vertices disagreeing with `phi` moved to 2/3 (fixed 0) or 1/3 (fixed 1),
/// everything else coloured by `phi`. Uses `phi_0` whenever some fixed
/// vertex agrees with it. Edge tones lie in `{1/3, 2/3, 1}`.
pub fn constructive_f_phi(g: &Graph, inc: &IncompleteGreyscale) -> Result<Greyscale, RmacgError> {
    let part = partition_vc(g, inc)?;
    let (phi0, phi1) = colourings(g)?;
    let phi = if part.match_phi0.is_empty() {
        phi1
    } else {
        phi0
    };
    let tones = (0..g.n())
        .map(|v| {
            if let Some(t) = inc.tone(v) {
                return bit(t);
            }
            let clash = |tone: u8| {
                g.neighbours(v)
                    .iter()
                    .any(|&u| inc.tone(u) == Some(tone) && phi.class_of(u) != tone)
            };
            if clash(0) {
                Rational::frac(2, 3)
            } else if clash(1) {
                Rational::frac(1, 3)
            } else {
                bit(phi.class_of(v))
            }
        })
        .collect();
    Ok(Greyscale::new(tones)?)
}

fn two_colouring_result(
    g: &Graph,
    inc: &IncompleteGreyscale,
) -> Result<Option<RmacgResult>, RmacgError> {
    let part = partition_vc(g, inc)?;
    let (phi0, phi1) = colourings(g)?;
    let phi = if part.match_phi1.is_empty() {
        phi0
    } else if part.match_phi0.is_empty() {
        phi1
    } else {
        return Ok(None);
    };
    let tones = phi.classes().iter().map(|&c| bit(c)).collect();
    Ok(Some(result(g, tones, Method::TwoColouring, part, 0)?))
}

/// The five tones every restricted optimum on a bipartite graph uses.
pub fn five_values() -> Vec<Rational> {
    [(0, 1), (1, 3), (1, 2), (2, 3), (1, 1)]
        .iter()
        .map(|&(p, q)| Rational::frac(p, q))
        .collect()
}

/// Exact maximum over assignments of the free vertices into `values`,
/// returning the lexicographically smallest optimal tone sequence.
pub fn oracle_rmacg_over(
    g: &Graph,
    inc: &IncompleteGreyscale,
    values: &[Rational],
    budget: Option<u64>,
) -> Result<RmacgResult, RmacgError> {
    search_over(g, inc, values, budget, Method::Oracle, None)
}

/// Exact maximum over `{0, 1/3, 1/2, 2/3, 1}`.
pub fn oracle_rmacg(g: &Graph, inc: &IncompleteGreyscale) -> Result<RmacgResult, RmacgError> {
    oracle_rmacg_over(g, inc, &five_values(), None)
}

fn search_over(
    g: &Graph,
    inc: &IncompleteGreyscale,
    values: &[Rational],
    budget: Option<u64>,
    method: Method,
    seed: Option<&Greyscale>,
) -> Result<RmacgResult, RmacgError> {
    let part = partition_vc(g, inc)?;
    let scaled =
        Scaled::new(values).ok_or(RmacgError::Precondition("value set denominators too large"))?;
    let fixed: Vec<(Vertex, u64)> = inc
        .pairs()
        .into_iter()
        .map(|(v, t)| (v, if t == 0 { 0 } else { scaled.scale }))
        .collect();
    let seed = seed.and_then(|f| {
        let tones = f
            .tones()
            .iter()
            .map(|t| scaled.encode(t))
            .collect::<Option<Vec<u64>>>()?;
        Some(Best {
            vector: Search::vector_of(g, &tones),
            tones,
        })
    });
    let out = Search::new(g, &scaled, inc.free(), &fixed)
        .mode(Mode::Canonical)
        .budget(budget)
        .seed(seed, false)
        .run();
    if out.exhausted {
        return Err(RmacgError::BudgetExceeded(budget.unwrap_or(0)));
    }
    let best = out.best.ok_or(RmacgError::Precondition(
        "no compatible greyscale uses both 0 and 1",
    ))?;
    let tones = best.tones.iter().map(|&c| scaled.decode(c)).collect();
    result(g, tones, method, part, out.nodes)
}

/// `K_{r,s}` with parts `0..r` and `r..r+s`: the matching 2-colouring when
/// every fixed tone agrees with one, otherwise 1/2 on the part without fixed
/// vertices and 0 on the free vertices of the other.
pub fn solve_complete_bipartite(
    r: usize,
    s: usize,
    inc: &IncompleteGreyscale,
) -> Result<RmacgResult, RmacgError> {
    let g = Graph::complete_bipartite(r, s);
    if inc.fixed.len() != g.n() {
        return Err(RmacgError::Precondition("fixed tones do not match K_{r,s}"));
    }
    complete_bipartite_on(&g, inc)
}

fn complete_bipartite_parts(g: &Graph) -> Option<TwoColouring> {
    let (phi0, _) = two_colourings(g)?;
    let a = phi0.class(0).len();
    (g.m() == a * (g.n() - a)).then_some(phi0)
}

fn complete_bipartite_on(g: &Graph, inc: &IncompleteGreyscale) -> Result<RmacgResult, RmacgError> {
    let phi0 = complete_bipartite_parts(g)
        .ok_or(RmacgError::Precondition("not a complete bipartite graph"))?;
    if let Some(mut r) = two_colouring_result(g, inc)? {
        r.method = Method::CompleteBipartite;
        return Ok(r);
    }
    let part = partition_vc(g, inc)?;
    let side = phi0.class_of(part.match_phi0[0]);
    let tones = (0..g.n())
        .map(|v| match inc.tone(v) {
            Some(t) => bit(t),
            None if phi0.class_of(v) == side => Rational::ZERO,
            None => half(),
        })
        .collect();
    result(g, tones, Method::CompleteBipartite, part, 0)
}

/// The starting greyscale `f_0` for a singleton side `{v0}`: 1/2 on the
/// neighbours of `v0`, the other 2-colouring elsewhere.
pub fn single_opposite_seed(g: &Graph, inc: &IncompleteGreyscale) -> Result<Greyscale, RmacgError> {
    let part = partition_vc(g, inc)?;
    let (phi0, phi1) = colourings(g)?;
    let (v0, phi) = match (part.match_phi0.as_slice(), part.match_phi1.as_slice()) {
        ([v0], rest) if !rest.is_empty() => (*v0, phi1),
        (rest, [v0]) if !rest.is_empty() => (*v0, phi0),
        _ => {
            return Err(RmacgError::Precondition(
                "neither side of V_c is a singleton; use the oracle",
            ))
        }
    };
    let tones = (0..g.n())
        .map(|v| match inc.tone(v) {
            Some(t) => bit(t),
            None if g.has_edge(v, v0) => half(),
            None => bit(phi.class_of(v)),
        })
        .collect();
    Ok(Greyscale::new(tones)?)
}

/// Singleton side: seeds with `f_0`, then searches `{0, 1/2, 1}` exactly.
pub fn solve_single_opposite(
    g: &Graph,
    inc: &IncompleteGreyscale,
) -> Result<RmacgResult, RmacgError> {
    let seed = single_opposite_seed(g, inc)?;
    let values = [Rational::ZERO, half(), Rational::ONE];
    search_over(g, inc, &values, None, Method::SingleOpposite, Some(&seed))
}

/// Hub and legs of a subdivided star with at least three legs.
fn star_legs(t: &Graph) -> Option<(Vertex, Vec<Vec<Vertex>>)> {
    if !t.is_tree() {
        return None;
    }
    let hubs: Vec<Vertex> = (0..t.n()).filter(|&v| t.degree(v) >= 3).collect();
    let &[hub] = hubs.as_slice() else {
        return None;
    };
    let legs = t
        .neighbours(hub)
        .iter()
        .map(|&first| {
            let mut leg = vec![first];
            let (mut prev, mut cur) = (hub, first);
            while let Some(&next) = t.neighbours(cur).iter().find(|&&w| w != prev) {
                leg.push(next);
                (prev, cur) = (cur, next);
            }
            leg
        })
        .collect();
    Some((hub, legs))
}

/// Subdivided star with exactly the leaves fixed. Either the hub takes 1/2
/// (one 1/2 component per leg) or the hub takes colour `c` and each leg
/// whose leaf disagrees with `phi_c` gets 1/2 next to its leaf (two 1/2
/// components per such leg); the cheaper wins, the hub taking 1/2 only
/// when strictly cheaper.
pub fn solve_star_subdivision(
    t: &Graph,
    inc: &IncompleteGreyscale,
) -> Result<RmacgResult, RmacgError> {
    let (hub, legs) = star_legs(t).ok_or(RmacgError::Precondition(
        "not a subdivided star with three or more legs",
    ))?;
    let leaves: Vec<Vertex> = legs.iter().map(|l| *l.last().unwrap()).collect();
    let mut sorted = leaves.clone();
    sorted.sort_unstable();
    if inc.vc() != sorted {
        return Err(RmacgError::Precondition(
            "the fixed vertices must be exactly the leaves",
        ));
    }
    let part = partition_vc(t, inc)?;
    let (phi0, phi1) = colourings(t)?;
    let n = legs.len();

    // phi_c gives the hub colour c
    let by_hub = |c: u8| {
        if phi0.class_of(hub) == c {
            &phi0
        } else {
            &phi1
        }
    };
    let mut best: Option<(usize, u8)> = None;
    for c in [0u8, 1] {
        let phi = by_hub(c);
        let bad: Vec<&Vec<Vertex>> = legs
            .iter()
            .filter(|l| phi.class_of(*l.last().unwrap()) != inc.tone(*l.last().unwrap()).unwrap())
            .collect();
        if bad.iter().any(|l| l.len() < 2) {
            continue;
        }
        let cost = 2 * bad.len();
        if best.is_none_or(|(b, _)| cost < b) {
            best = Some((cost, c));
        }
    }

    let mut tones: Vec<Rational> = vec![Rational::ZERO; t.n()];
    match best {
        Some((cost, c)) if cost <= n => {
            let phi = by_hub(c);
            for (v, tone) in tones.iter_mut().enumerate() {
                *tone = bit(phi.class_of(v));
            }
            for leg in &legs {
                let leaf = *leg.last().unwrap();
                let g_leaf = inc.tone(leaf).unwrap();
                if phi.class_of(leaf) != g_leaf {
                    tones[leg[leg.len() - 2]] = half();
                    tones[leaf] = bit(g_leaf);
                }
            }
        }
        _ => {
            tones[hub] = half();
            for leg in &legs {
                let leaf = *leg.last().unwrap();
                let g_leaf = inc.tone(leaf).unwrap();
                let phi = if phi0.class_of(leaf) == g_leaf {
                    &phi0
                } else {
                    &phi1
                };
                for &v in leg {
                    tones[v] = bit(phi.class_of(v));
                }
            }
        }
    }
    result(t, tones, Method::StarSubdivision, part, 0)
}

/// Tree with three fixed vertices. If they all agree with one 2-colouring
/// that colouring is optimal. Otherwise two agree (`v1`, `v2`) and one does
/// not (`x`): 1/2 goes on a minimum-degree free vertex of the segment
/// shared by the paths from `x` to `v1` and to `v2`, or on one
/// minimum-degree free vertex of each private segment when that is cheaper;
/// ties go to the single vertex, then to the smallest index.
pub fn solve_tree_three(t: &Graph, inc: &IncompleteGreyscale) -> Result<RmacgResult, RmacgError> {
    if !t.is_tree() {
        return Err(RmacgError::Precondition("not a tree"));
    }
    if inc.vc().len() != 3 {
        return Err(RmacgError::Precondition(
            "exactly three vertices must be fixed",
        ));
    }
    if let Some(mut r) = two_colouring_result(t, inc)? {
        r.method = Method::TreeThree;
        return Ok(r);
    }
    let part = partition_vc(t, inc)?;
    let (phi0, phi1) = colourings(t)?;
    let (pair, x, phi) = if part.match_phi0.len() == 2 {
        (&part.match_phi0, part.match_phi1[0], &phi0)
    } else {
        (&part.match_phi1, part.match_phi0[0], &phi1)
    };
    let p1 = t.path_between(x, pair[0]);
    let p2 = t.path_between(x, pair[1]);
    let shared_len = p1.iter().zip(&p2).take_while(|(a, b)| a == b).count();
    let free = |v: &&Vertex| inc.tone(**v).is_none();
    let cheapest = |seg: &[Vertex]| {
        seg.iter()
            .filter(free)
            .min_by_key(|&&v| (t.degree(v), v))
            .copied()
    };

    let single = cheapest(&p1[..shared_len]);
    let split = cheapest(&p1[shared_len..]).zip(cheapest(&p2[shared_len..]));
    let halves: Vec<Vertex> = match (single, split) {
        (Some(w), Some((a, b))) if t.degree(w) > t.degree(a) + t.degree(b) => vec![a, b],
        (Some(w), _) => vec![w],
        (None, Some((a, b))) => vec![a, b],
        (None, None) => {
            return Err(RmacgError::Precondition(
                "no free vertex separates the fixed vertices",
            ))
        }
    };

    // the component of x (after removing the 1/2 vertices) takes the other colouring
    let mut in_x = vec![false; t.n()];
    let mut queue = VecDeque::from([x]);
    in_x[x] = true;
    while let Some(v) = queue.pop_front() {
        for &w in t.neighbours(v) {
            if !in_x[w] && !halves.contains(&w) {
                in_x[w] = true;
                queue.push_back(w);
            }
        }
    }
    let tones = (0..t.n())
        .map(|v| {
            if halves.contains(&v) {
                half()
            } else if in_x[v] {
                bit(1 - phi.class_of(v))
            } else {
                bit(phi.class_of(v))
            }
        })
        .collect();
    result(t, tones, Method::TreeThree, part, 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RmacgMethod {
    /// A closed form when one applies, else the oracle.
    #[default]
    Auto,
    Oracle,
    /// The `f_phi` lower-bound greyscale, not claimed optimal.
    Constructive,
}

pub fn solve_rmacg(
    g: &Graph,
    inc: &IncompleteGreyscale,
    method: RmacgMethod,
) -> Result<RmacgResult, RmacgError> {
    match method {
        RmacgMethod::Oracle => oracle_rmacg(g, inc),
        RmacgMethod::Constructive => {
            let f = constructive_f_phi(g, inc)?;
            result(
                g,
                f.tones().to_vec(),
                Method::Constructive,
                partition_vc(g, inc)?,
                0,
            )
        }
        RmacgMethod::Auto => {
            if let Some(r) = two_colouring_result(g, inc)? {
                return Ok(r);
            }
            if complete_bipartite_parts(g).is_some() {
                return complete_bipartite_on(g, inc);
            }
            if let Some((_, legs)) = star_legs(g) {
                let mut leaves: Vec<Vertex> = legs.iter().map(|l| *l.last().unwrap()).collect();
                leaves.sort_unstable();
                if inc.vc() == leaves {
                    return solve_star_subdivision(g, inc);
                }
            }
            if g.is_tree() && inc.vc().len() == 3 {
                return solve_tree_three(g, inc);
            }
            match solve_single_opposite(g, inc) {
                Err(RmacgError::Precondition(_)) => oracle_rmacg(g, inc),
                other => other,
            }
        }
    }
}
