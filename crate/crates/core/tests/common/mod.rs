//! Shared corpus and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use greyscale_contrast::chromatic::chromatic_number;
use greyscale_contrast::graph::{is_bipartite, Graph};
use greyscale_contrast::rmacg::IncompleteGreyscale;
use greyscale_contrast::Rational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_c0ffee;

fn pair_index(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    pairs
}

fn connected(n: usize, pairs: &[(usize, usize)], mask: u64) -> bool {
    let mut reach = 1u64;
    loop {
        let mut next = reach;
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 && (reach >> u & 1 == 1 || reach >> v & 1 == 1) {
                next |= 1 << u | 1 << v;
            }
        }
        if next == reach {
            return reach == (1 << n) - 1;
        }
        reach = next;
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Smallest relabelled edge mask: equal exactly for isomorphic graphs.
fn canonical(n: usize, pairs: &[(usize, usize)], perms: &[Vec<usize>], mask: u64) -> u64 {
    let mut slot = vec![vec![0usize; n]; n];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        slot[u][v] = i;
        slot[v][u] = i;
    }
    perms
        .iter()
        .map(|p| {
            pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(0u64, |acc, (_, &(u, v))| acc | 1 << slot[p[u]][p[v]])
        })
        .min()
        .unwrap()
}

fn graph_of(n: usize, pairs: &[(usize, usize)], mask: u64) -> Graph {
    let edges = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &e)| e);
    Graph::from_edges(n, edges).unwrap()
}

/// Every connected graph on `n` vertices up to isomorphism.
pub fn all_connected(n: usize) -> Vec<Graph> {
    let pairs = pair_index(n);
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    for mask in 0..1u64 << pairs.len() {
        if connected(n, &pairs, mask) {
            seen.insert(canonical(n, &pairs, &perms, mask));
        }
    }
    seen.into_iter().map(|m| graph_of(n, &pairs, m)).collect()
}

/// Distinct random connected graphs on 7 vertices with `chi <= 5`.
pub fn sample_seven(count: usize, seed: u64) -> Vec<Graph> {
    let n = 7;
    let pairs = pair_index(n);
    let perms = permutations(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < count {
        let p: f64 = rng.gen_range(0.25..0.75);
        let mask = (0..pairs.len()).fold(0u64, |acc, i| acc | (rng.gen_bool(p) as u64) << i);
        if !connected(n, &pairs, mask) {
            continue;
        }
        let c = canonical(n, &pairs, &perms, mask);
        let g = graph_of(n, &pairs, c);
        if chromatic_number(&g) <= 5 && seen.insert(c) {
            out.push(g);
        }
    }
    out
}

/// All connected graphs with 2..=6 vertices (142) plus 58 sampled on 7.
pub fn corpus() -> Vec<Graph> {
    let mut all: Vec<Graph> = (2..=6).flat_map(all_connected).collect();
    let rest = 200 - all.len();
    all.extend(sample_seven(rest, SEED));
    all
}

pub fn random_connected_bipartite(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    loop {
        let side: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let p: f64 = rng.gen_range(0.3..0.9);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if side[u] != side[v] && rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        if let Ok(g) = Graph::from_edges(n, edges) {
            assert!(is_bipartite(&g));
            return g;
        }
    }
}

/// Uniform random labelled tree (random attachment).
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let edges: Vec<(usize, usize)> = (1..n)
        .map(|i| (order[rng.gen_range(0..i)], order[i]))
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

/// A random valid fixed-tone pattern with `size` fixed vertices (or a random size).
pub fn random_fixed(rng: &mut ChaCha8Rng, g: &Graph, size: Option<usize>) -> IncompleteGreyscale {
    loop {
        let k = size.unwrap_or_else(|| rng.gen_range(1..g.n()));
        let mut vs: Vec<usize> = (0..g.n()).collect();
        vs.shuffle(rng);
        let pairs: Vec<(usize, u8)> = vs[..k]
            .iter()
            .map(|&v| (v, rng.gen_range(0..2u8)))
            .collect();
        if let Ok(inc) = IncompleteGreyscale::new(g, &pairs) {
            return inc;
        }
    }
}

pub fn scale_of(values: &[Rational]) -> (u64, Vec<u64>) {
    let small: Vec<(u64, u64)> = values
        .iter()
        .map(|v| {
            let (p, q) = v.to_small().unwrap();
            (p as u64, q as u64)
        })
        .collect();
    let l = small.iter().fold(1u64, |l, &(_, q)| l / gcd(l, q) * q);
    let codes = small.iter().map(|&(p, q)| p * (l / q)).collect();
    (l, codes)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Plain enumeration of every assignment of the free vertices into `codes`
/// (vertex 0 most significant, codes ascending) with 0 and `scale` in the
/// image. Returns the maximum sorted edge vector and its first witness.
pub fn brute_force(
    g: &Graph,
    scale: u64,
    codes: &[u64],
    fixed: &[Option<u64>],
) -> Option<(Vec<u64>, Vec<u64>)> {
    let free: Vec<usize> = (0..g.n()).filter(|&v| fixed[v].is_none()).collect();
    let mut tones: Vec<u64> = fixed.iter().map(|t| t.unwrap_or(0)).collect();
    let mut best: Option<(Vec<u64>, Vec<u64>)> = None;
    let mut idx = vec![0usize; free.len()];
    loop {
        for (i, &v) in free.iter().enumerate() {
            tones[v] = codes[idx[i]];
        }
        if tones.contains(&0) && tones.contains(&scale) {
            let mut vec: Vec<u64> = g
                .edges()
                .iter()
                .map(|&(u, v)| tones[u].abs_diff(tones[v]))
                .collect();
            vec.sort_unstable();
            if best.as_ref().is_none_or(|(b, _)| vec > *b) {
                best = Some((vec, tones.clone()));
            }
        }
        // odometer with the last free vertex least significant
        let mut i = free.len();
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < codes.len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

pub fn decode(scale: u64, tones: &[u64]) -> Vec<Rational> {
    tones
        .iter()
        .map(|&t| Rational::frac(t as i64, scale as i64))
        .collect()
}

pub fn grid(q: i64) -> Vec<Rational> {
    (0..=q).map(|i| Rational::frac(i, q)).collect()
}

pub fn rng(offset: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED.wrapping_add(offset))
}

/// Bundled example invocations: golden file stem, arguments, exit code.
pub const GOLDEN: &[(&str, &[&str], i32)] = &[
    ("fk3", &["fk", "--k", "3", "--strata"], 0),
    ("fk4", &["fk", "--k", "4", "--strata"], 0),
    (
        "contrast_k4_f",
        &[
            "contrast",
            "--graph",
            "k4.graph",
            "--greyscale",
            "k4_f.grey",
            "--gradation",
        ],
        0,
    ),
    (
        "contrast_k4_fprime",
        &[
            "contrast",
            "--graph",
            "k4.graph",
            "--greyscale",
            "k4_fprime.grey",
            "--gradation",
        ],
        0,
    ),
    ("solve_k3", &["solve", "--graph", "k3.graph"], 0),
    ("solve_k4", &["solve", "--graph", "k4.graph"], 0),
    ("solve_wheel6", &["solve", "--graph", "wheel6.graph"], 0),
    (
        "solve_k4_values",
        &["solve", "--graph", "k4.graph", "--values", "f3.values"],
        0,
    ),
    ("chromatic_k3", &["chromatic", "--graph", "k3.graph"], 0),
    ("chromatic_k4", &["chromatic", "--graph", "k4.graph"], 0),
    (
        "chromatic_wheel6",
        &["chromatic", "--graph", "wheel6.graph"],
        0,
    ),
    (
        "verify_wheel6",
        &[
            "verify",
            "--graph",
            "wheel6.graph",
            "--greyscale",
            "wheel6.grey",
        ],
        0,
    ),
    (
        "verify_k4_f",
        &["verify", "--graph", "k4.graph", "--greyscale", "k4_f.grey"],
        1,
    ),
    (
        "rmacg_p4",
        &["rmacg", "--graph", "p4.graph", "--fixed", "p4.fixed"],
        0,
    ),
    (
        "rmacg_p5",
        &["rmacg", "--graph", "p5.graph", "--fixed", "p5.fixed"],
        0,
    ),
    (
        "rmacg_k23",
        &["rmacg", "--graph", "k23.graph", "--fixed", "k23.fixed"],
        0,
    ),
    (
        "rmacg_spider",
        &[
            "rmacg",
            "--graph",
            "spider.graph",
            "--fixed",
            "spider.fixed",
        ],
        0,
    ),
    (
        "rmacg_p4_constructive",
        &[
            "rmacg",
            "--graph",
            "p4.graph",
            "--fixed",
            "p4.fixed",
            "--method",
            "constructive",
        ],
        0,
    ),
    (
        "rmacg_p5_constructive",
        &[
            "rmacg",
            "--graph",
            "p5.graph",
            "--fixed",
            "p5.fixed",
            "--method",
            "constructive",
        ],
        0,
    ),
    (
        "rmacg_k23_constructive",
        &[
            "rmacg",
            "--graph",
            "k23.graph",
            "--fixed",
            "k23.fixed",
            "--method",
            "constructive",
        ],
        0,
    ),
    (
        "rmacg_spider_constructive",
        &[
            "rmacg",
            "--graph",
            "spider.graph",
            "--fixed",
            "spider.fixed",
            "--method",
            "constructive",
        ],
        0,
    ),
];
