//! Greyscales, contrast and gradation vectors, and the local conditions every
//! maximum-contrast greyscale satisfies.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chromatic::chromatic_number;
use crate::graph::{Edge, Graph, Vertex};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreyscaleError {
    #[error("vertex {vertex}: tone {tone} outside [0, 1]")]
    OutOfRange { vertex: Vertex, tone: Rational },
    #[error("tone {0} missing from the image")]
    MissingExtreme(Rational),
    #[error("greyscale has {got} tones but the graph has {expected} vertices")]
    NotTotal { expected: usize, got: usize },
    #[error("contrast vectors of different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("graph has no edges")]
    Edgeless,
    #[error("k must be positive")]
    ZeroScale,
    #[error("vertices {0} and {1} are adjacent but share colour {2}")]
    ImproperColouring(Vertex, Vertex, usize),
    #[error("edge {{{0}, {1}}} is not an edge of the graph")]
    NotAnEdge(Vertex, Vertex),
    #[error("edge tone {tone} differs from the lightest tone {lightest}")]
    NotLightest { tone: Rational, lightest: Rational },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A total vertex-to-tone map into `[0, 1]` whose image contains 0 and 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Greyscale(Vec<Rational>);

impl Greyscale {
    pub fn new(tones: Vec<Rational>) -> Result<Self, GreyscaleError> {
        for (vertex, tone) in tones.iter().enumerate() {
            if !tone.is_unit_interval() {
                return Err(GreyscaleError::OutOfRange {
                    vertex,
                    tone: tone.clone(),
                });
            }
        }
        for extreme in [Rational::ZERO, Rational::ONE] {
            if !tones.contains(&extreme) {
                return Err(GreyscaleError::MissingExtreme(extreme));
            }
        }
        Ok(Greyscale(tones))
    }

    /// Shorthand for tests and fixtures: `(numerator, denominator)` pairs.
    pub fn from_fracs(tones: &[(i64, i64)]) -> Result<Self, GreyscaleError> {
        Self::new(tones.iter().map(|&(p, q)| Rational::frac(p, q)).collect())
    }

    pub fn tone(&self, v: Vertex) -> &Rational {
        &self.0[v]
    }

    pub fn tones(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Distinct tones, ascending.
    pub fn image(&self) -> BTreeSet<Rational> {
        self.0.iter().cloned().collect()
    }

    pub fn edge_tone(&self, (u, v): Edge) -> Rational {
        self.0[u].abs_diff(&self.0[v])
    }

    fn check_total(&self, g: &Graph) -> Result<(), GreyscaleError> {
        if self.0.len() != g.n() {
            return Err(GreyscaleError::NotTotal {
                expected: g.n(),
                got: self.0.len(),
            });
        }
        Ok(())
    }

    /// One `v p/q` line per vertex.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, t) in self.0.iter().enumerate() {
            let _ = writeln!(out, "{v} {t}");
        }
        out
    }
}

/// Parses `v p/q` lines; every vertex of `0..n` must appear exactly once.
pub fn parse_greyscale(text: &str, n: usize) -> Result<Greyscale, GreyscaleError> {
    let mut tones: Vec<Option<Rational>> = vec![None; n];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let err = |reason: String| GreyscaleError::Parse { line, reason };
        let mut it = l.split_whitespace();
        let (Some(v), Some(t), None) = (it.next(), it.next(), it.next()) else {
            return Err(err("expected `vertex tone`".into()));
        };
        let v: usize = v.parse().map_err(|_| err(format!("bad vertex {v:?}")))?;
        let t: Rational = t.parse().map_err(|e| err(format!("{e}")))?;
        let slot = tones
            .get_mut(v)
            .ok_or_else(|| err(format!("vertex {v} out of range")))?;
        if slot.replace(t).is_some() {
            return Err(err(format!("vertex {v} listed twice")));
        }
    }
    let got = tones.iter().filter(|t| t.is_some()).count();
    if got != n {
        return Err(GreyscaleError::NotTotal { expected: n, got });
    }
    Greyscale::new(tones.into_iter().map(Option::unwrap).collect())
}

/// Edge tones sorted ascending. The derived order is lexicographic, which
/// is the contrast order for vectors of the same graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContrastVector(Vec<Rational>);

impl ContrastVector {
    /// Sorts `tones` ascending.
    pub fn from_tones(mut tones: Vec<Rational>) -> Self {
        tones.sort();
        ContrastVector(tones)
    }

    pub fn tones(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<&Rational> {
        self.0.first()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn count_of(&self, tone: &Rational) -> usize {
        self.0.iter().filter(|t| *t == tone).count()
    }
}

/// Edge tones sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradationVector(Vec<Rational>);

impl GradationVector {
    pub fn tones(&self) -> &[Rational] {
        &self.0
    }

    pub fn reversed(&self) -> ContrastVector {
        ContrastVector(self.0.iter().rev().cloned().collect())
    }
}

pub fn contrast_vector(g: &Graph, f: &Greyscale) -> Result<ContrastVector, GreyscaleError> {
    f.check_total(g)?;
    Ok(ContrastVector::from_tones(
        g.edges().iter().map(|&e| f.edge_tone(e)).collect(),
    ))
}

pub fn gradation_vector(g: &Graph, f: &Greyscale) -> Result<GradationVector, GreyscaleError> {
    let mut tones = contrast_vector(g, f)?.0;
    tones.reverse();
    Ok(GradationVector(tones))
}

pub fn lex_compare(a: &ContrastVector, b: &ContrastVector) -> Result<Ordering, GreyscaleError> {
    if a.len() != b.len() {
        return Err(GreyscaleError::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.cmp(b))
}

pub fn complementary(f: &Greyscale) -> Greyscale {
    Greyscale(f.0.iter().map(Rational::complement).collect())
}

/// `1 / (chi - 1)`, the first component of the maximum contrast vector.
pub fn lightest_tone(g: &Graph) -> Result<Rational, GreyscaleError> {
    if g.m() == 0 {
        return Err(GreyscaleError::Edgeless);
    }
    let chi = chromatic_number(g) as i64;
    Ok(Rational::frac(1, chi - 1))
}

/// Class `i` for tones in `[i/k, (i+1)/k)` and class `k` for tone 1, checked proper.
pub fn colouring_from_greyscale(
    g: &Graph,
    f: &Greyscale,
    k: u64,
) -> Result<Vec<usize>, GreyscaleError> {
    if k == 0 {
        return Err(GreyscaleError::ZeroScale);
    }
    f.check_total(g)?;
    let classes: Vec<usize> =
        f.0.iter()
            .map(|t| t.floor_times(k).min(k) as usize)
            .collect();
    for &(u, v) in g.edges() {
        if classes[u] == classes[v] {
            return Err(GreyscaleError::ImproperColouring(u, v, classes[u]));
        }
    }
    Ok(classes)
}

/// A path `u_0 .. u_k` with tone `i/k` at `u_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncrementalPath {
    pub vertices: Vec<Vertex>,
    pub step: Rational,
}

/// All incremental paths of length `k` through `e`, where `1/k` is the
/// lightest tone of `g` and must equal the tone of `e`.
pub fn find_incremental_paths(
    g: &Graph,
    f: &Greyscale,
    e: Edge,
) -> Result<Vec<IncrementalPath>, GreyscaleError> {
    f.check_total(g)?;
    let lightest = lightest_tone(g)?;
    incremental_paths_with_step(g, f, e, &lightest)
}

pub(crate) fn incremental_paths_with_step(
    g: &Graph,
    f: &Greyscale,
    (a, b): Edge,
    step: &Rational,
) -> Result<Vec<IncrementalPath>, GreyscaleError> {
    if !g.has_edge(a, b) {
        return Err(GreyscaleError::NotAnEdge(a, b));
    }
    let tone = f.edge_tone((a, b));
    if tone != *step {
        return Err(GreyscaleError::NotLightest {
            tone,
            lightest: step.clone(),
        });
    }
    let (lo, hi) = if f.tone(a) < f.tone(b) {
        (a, b)
    } else {
        (b, a)
    };
    // tones along an incremental path are multiples of the step
    if !(f.tone(lo) / step).is_integer() {
        return Ok(Vec::new());
    }
    let down = monotone_walks(g, f, lo, step, true);
    let up = monotone_walks(g, f, hi, step, false);
    let mut paths = Vec::new();
    for left in &down {
        for right in &up {
            let mut vertices: Vec<Vertex> = left.iter().rev().copied().collect();
            vertices.extend(right);
            paths.push(IncrementalPath {
                vertices,
                step: step.clone(),
            });
        }
    }
    Ok(paths)
}

/// Walks from `start` stepping the tone by `step` each move until reaching 0
/// (`descending`) or 1. Each walk starts with `start`.
fn monotone_walks(
    g: &Graph,
    f: &Greyscale,
    start: Vertex,
    step: &Rational,
    descending: bool,
) -> Vec<Vec<Vertex>> {
    let target = if descending {
        Rational::ZERO
    } else {
        Rational::ONE
    };
    if *f.tone(start) == target {
        return vec![vec![start]];
    }
    let next_tone = if descending {
        f.tone(start) - step
    } else {
        f.tone(start) + step
    };
    let mut walks = Vec::new();
    for &w in g.neighbours(start) {
        if *f.tone(w) == next_tone {
            for mut tail in monotone_walks(g, f, w, step, descending) {
                tail.insert(0, start);
                walks.push(tail);
            }
        }
    }
    walks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// Some edge has tone 0.
    ZeroComponent,
    /// The smallest edge tone is not `1/(chi - 1)`.
    LightestTone,
    /// An interior-toned vertex lacks a closest pair of neighbours.
    ClosestPair,
    /// A lightest edge lies on no incremental path.
    IncrementalPath,
    /// Some `i/k` is missing from the image.
    ScaleSubset,
    /// Fewer than `k` edges carry the lightest tone.
    LightestCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Vertex(Vertex),
    Edge(Vertex, Vertex),
    Tone(Rational),
    Count(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub witness: Witness,
}

/// Outcome of [`verify_max_conditions`]. These are necessary conditions only:
/// a passing report does not certify maximality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub necessary_conditions_only: bool,
    pub k: u64,
    pub violations: Vec<Violation>,
}

/// Checks the necessary conditions for `f` to be a maximum-contrast greyscale of `g`.
pub fn verify_max_conditions(
    g: &Graph,
    f: &Greyscale,
) -> Result<VerificationReport, GreyscaleError> {
    f.check_total(g)?;
    let k = (chromatic_number(g).max(2) - 1) as u64;
    let mut violations = Vec::new();
    let mut flag = |condition, witness| violations.push(Violation { condition, witness });

    if g.m() == 0 {
        return Ok(VerificationReport {
            passed: true,
            necessary_conditions_only: true,
            k,
            violations: Vec::new(),
        });
    }

    let step = Rational::frac(1, k as i64);
    for &(u, v) in g.edges() {
        if f.tone(u) == f.tone(v) {
            flag(Condition::ZeroComponent, Witness::Edge(u, v));
        }
    }

    let cv = contrast_vector(g, f)?;
    if cv.first() != Some(&step) {
        flag(
            Condition::LightestTone,
            Witness::Tone(cv.first().cloned().unwrap_or_default()),
        );
    }

    for v in 0..g.n() {
        let t = f.tone(v);
        if t.is_zero() || t.is_one() {
            continue;
        }
        let nearest = g.neighbours(v).iter().map(|&u| t.abs_diff(f.tone(u))).min();
        let ok = nearest.is_some_and(|a| {
            let side = |below: bool| {
                g.neighbours(v).iter().any(|&u| {
                    let fu = f.tone(u);
                    (if below { fu < t } else { fu > t }) && t.abs_diff(fu) == a
                })
            };
            !a.is_zero() && side(true) && side(false)
        });
        if !ok {
            flag(Condition::ClosestPair, Witness::Vertex(v));
        }
    }

    for &(u, v) in g.edges() {
        if f.edge_tone((u, v)) == step {
            let paths = incremental_paths_with_step(g, f, (u, v), &step)?;
            if paths.is_empty() {
                flag(Condition::IncrementalPath, Witness::Edge(u, v));
            }
        }
    }

    let image = f.image();
    for i in 0..=k {
        let tone = Rational::frac(i as i64, k as i64);
        if !image.contains(&tone) {
            flag(Condition::ScaleSubset, Witness::Tone(tone));
        }
    }

    let lightest = cv.count_of(&step);
    if (lightest as u64) < k {
        flag(Condition::LightestCount, Witness::Count(lightest));
    }

    Ok(VerificationReport {
        passed: violations.is_empty(),
        necessary_conditions_only: true,
        k,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(p, q)| Rational::frac(p, q)).collect()
    }

    fn k4_f() -> Greyscale {
        Greyscale::from_fracs(&[(0, 1), (1, 2), (1, 2), (1, 1)]).unwrap()
    }

    fn k4_fprime() -> Greyscale {
        Greyscale::from_fracs(&[(0, 1), (1, 3), (2, 3), (1, 1)]).unwrap()
    }

    pub(crate) fn wheel6_f() -> Greyscale {
        Greyscale::from_fracs(&[(1, 1), (0, 1), (1, 2), (0, 1), (2, 3), (1, 3)]).unwrap()
    }

    #[test]
    fn k4_contrast_and_gradation() {
        let g = Graph::complete(4);
        let cf = contrast_vector(&g, &k4_f()).unwrap();
        let cfp = contrast_vector(&g, &k4_fprime()).unwrap();
        assert_eq!(
            cf.tones(),
            rv(&[(0, 1), (1, 2), (1, 2), (1, 2), (1, 2), (1, 1)])
        );
        assert_eq!(
            cfp.tones(),
            rv(&[(1, 3), (1, 3), (1, 3), (2, 3), (2, 3), (1, 1)])
        );
        let gf = gradation_vector(&g, &k4_f()).unwrap();
        let gfp = gradation_vector(&g, &k4_fprime()).unwrap();
        assert_eq!(
            gf.tones(),
            rv(&[(1, 1), (1, 2), (1, 2), (1, 2), (1, 2), (0, 1)])
        );
        assert_eq!(
            gfp.tones(),
            rv(&[(1, 1), (2, 3), (2, 3), (1, 3), (1, 3), (1, 3)])
        );
        assert_eq!(gf.reversed(), cf);
        assert_eq!(lex_compare(&cf, &cfp).unwrap(), Ordering::Less);
        assert_eq!(lex_compare(&cf, &cf).unwrap(), Ordering::Equal);
    }

    #[test]
    fn single_edge() {
        let g = Graph::path(2);
        let f = Greyscale::from_fracs(&[(0, 1), (1, 1)]).unwrap();
        assert_eq!(contrast_vector(&g, &f).unwrap().tones(), rv(&[(1, 1)]));
        assert_eq!(gradation_vector(&g, &f).unwrap().tones(), rv(&[(1, 1)]));
    }

    #[test]
    fn lex_compare_first_component_decides() {
        let a = ContrastVector::from_tones(rv(&[(1, 3), (1, 1)]));
        let b = ContrastVector::from_tones(rv(&[(1, 2), (1, 2)]));
        assert_eq!(lex_compare(&a, &b).unwrap(), Ordering::Less);
        let c = ContrastVector::from_tones(rv(&[(1, 2)]));
        assert_eq!(
            lex_compare(&a, &c),
            Err(GreyscaleError::LengthMismatch(2, 1))
        );
    }

    #[test]
    fn greyscale_validation() {
        assert_eq!(
            Greyscale::from_fracs(&[(0, 1), (1, 2)]),
            Err(GreyscaleError::MissingExtreme(Rational::ONE))
        );
        assert!(matches!(
            Greyscale::from_fracs(&[(0, 1), (3, 2), (1, 1)]),
            Err(GreyscaleError::OutOfRange { vertex: 1, .. })
        ));
        let g = Graph::path(3);
        let f = Greyscale::from_fracs(&[(0, 1), (1, 1)]).unwrap();
        assert!(matches!(
            contrast_vector(&g, &f),
            Err(GreyscaleError::NotTotal { .. })
        ));
    }

    #[test]
    fn complementary_keeps_contrast() {
        let f = Greyscale::from_fracs(&[(0, 1), (1, 2), (1, 1)]).unwrap();
        assert_eq!(complementary(&f).tones(), rv(&[(1, 1), (1, 2), (0, 1)]));
        let e = Greyscale::from_fracs(&[(0, 1), (1, 1)]).unwrap();
        assert_eq!(complementary(&e).tones(), rv(&[(1, 1), (0, 1)]));
        let g = Graph::complete(4);
        for f in [k4_f(), k4_fprime()] {
            assert_eq!(
                contrast_vector(&g, &f),
                contrast_vector(&g, &complementary(&f))
            );
        }
    }

    #[test]
    fn lightest_tones() {
        assert_eq!(
            lightest_tone(&Graph::complete(4)).unwrap(),
            Rational::frac(1, 3)
        );
        assert_eq!(
            lightest_tone(&Graph::complete(3)).unwrap(),
            Rational::frac(1, 2)
        );
        assert_eq!(lightest_tone(&Graph::cycle(6)).unwrap(), Rational::ONE);
        assert_eq!(
            lightest_tone(&Graph::path(1)),
            Err(GreyscaleError::Edgeless)
        );
    }

    #[test]
    fn colour_extraction() {
        let w = Graph::wheel(5);
        assert_eq!(
            colouring_from_greyscale(&w, &wheel6_f(), 3).unwrap(),
            vec![3, 0, 1, 0, 2, 1]
        );
        let k4 = Graph::complete(4);
        assert_eq!(
            colouring_from_greyscale(&k4, &k4_fprime(), 3).unwrap(),
            vec![0, 1, 2, 3]
        );
        let k3 = Graph::complete(3);
        let f = Greyscale::from_fracs(&[(0, 1), (1, 4), (1, 1)]).unwrap();
        assert_eq!(
            colouring_from_greyscale(&k3, &f, 3),
            Err(GreyscaleError::ImproperColouring(0, 1, 0))
        );
    }

    #[test]
    fn incremental_paths() {
        let w = Graph::wheel(5);
        let paths = find_incremental_paths(&w, &wheel6_f(), (1, 5)).unwrap();
        assert!(paths.iter().any(|p| p.vertices == vec![1, 5, 4, 0]));
        for p in &paths {
            for (i, &v) in p.vertices.iter().enumerate() {
                assert_eq!(*wheel6_f().tone(v), Rational::frac(i as i64, 3));
            }
        }
        let k4 = Graph::complete(4);
        let p = find_incremental_paths(&k4, &k4_fprime(), (0, 1)).unwrap();
        assert_eq!(
            p,
            vec![IncrementalPath {
                vertices: vec![0, 1, 2, 3],
                step: Rational::frac(1, 3)
            }]
        );
        let e = Graph::path(2);
        let f = Greyscale::from_fracs(&[(0, 1), (1, 1)]).unwrap();
        assert_eq!(
            find_incremental_paths(&e, &f, (0, 1)).unwrap()[0].vertices,
            vec![0, 1]
        );
        assert!(matches!(
            find_incremental_paths(&w, &wheel6_f(), (0, 2)),
            Err(GreyscaleError::NotLightest { .. })
        ));
    }

    #[test]
    fn verification() {
        let w = Graph::wheel(5);
        let report = verify_max_conditions(&w, &wheel6_f()).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(report.necessary_conditions_only);

        let bad = verify_max_conditions(&Graph::complete(4), &k4_f()).unwrap();
        assert!(!bad.passed);
        assert!(bad
            .violations
            .iter()
            .any(|v| v.condition == Condition::ZeroComponent));

        let p = Graph::path(3);
        let f = Greyscale::from_fracs(&[(0, 1), (1, 4), (1, 1)]).unwrap();
        let r = verify_max_conditions(&p, &f).unwrap();
        assert!(r.violations.contains(&Violation {
            condition: Condition::ClosestPair,
            witness: Witness::Vertex(1)
        }));
    }
}
