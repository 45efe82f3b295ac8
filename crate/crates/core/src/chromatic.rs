//! Exact chromatic number by backtracking colouring over a clique lower bound.

use crate::graph::{Graph, Vertex};

/// Descending degree, ties by index.
pub(crate) fn degree_order(g: &Graph) -> Vec<Vertex> {
    let mut order: Vec<Vertex> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    order
}

/// A clique grown greedily along the degree order; its size bounds `chi` from below.
fn greedy_clique(g: &Graph, order: &[Vertex]) -> Vec<Vertex> {
    let mut best = Vec::new();
    for &seed in order {
        let mut clique = vec![seed];
        for &v in order {
            if v != seed && clique.iter().all(|&u| g.has_edge(u, v)) {
                clique.push(v);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

struct Colourer<'a> {
    g: &'a Graph,
    order: &'a [Vertex],
    colour: Vec<usize>,
}

impl Colourer<'_> {
    /// Colours `order[idx..]` with colours `< limit`; `used` colours are open so far.
    fn extend(&mut self, idx: usize, used: usize, limit: usize) -> bool {
        let Some(&v) = self.order.get(idx) else {
            return true;
        };
        // new colours beyond `used` are interchangeable, so only try one of them
        for c in 0..limit.min(used + 1) {
            let clash = self.g.neighbours(v).iter().any(|&w| self.colour[w] == c);
            if clash {
                continue;
            }
            self.colour[v] = c;
            if self.extend(idx + 1, used.max(c + 1), limit) {
                return true;
            }
        }
        self.colour[v] = usize::MAX;
        false
    }
}

/// A proper colouring with `chromatic_number(g)` colours, classes `0..chi`.
pub fn optimal_colouring(g: &Graph) -> Vec<usize> {
    let order = degree_order(g);
    let lower = greedy_clique(g, &order).len().max(1);
    for limit in lower..=g.n() {
        let mut c = Colourer {
            g,
            order: &order,
            colour: vec![usize::MAX; g.n()],
        };
        if c.extend(0, 0, limit) {
            return c.colour;
        }
    }
    unreachable!("n colours always suffice")
}

/// The exact chromatic number.
pub fn chromatic_number(g: &Graph) -> usize {
    let colouring = optimal_colouring(g);
    colouring.iter().max().map_or(1, |&c| c + 1)
}
