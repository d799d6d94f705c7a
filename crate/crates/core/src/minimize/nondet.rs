//! Size-`k` decision for possibly nondeterministic minimizers.
//!
//! The search walks the product of `D = determinize(F)` with the subset
//! semantics of a candidate `H`, fixing `H`'s transitions lazily. A pair
//! `(d, T)` means some string reaches `d` in `D` and exactly the states `T`
//! in `H`. Every such `T` must be nonempty, and each member of `T` may only
//! carry colors of `d`. Candidate states are numbered in order of first use,
//! so each candidate is met once up to renaming.
//!
//! Candidate states get the intersection of the colors they are allowed.
//! Restricting a candidate's colors never changes its language and only
//! shrinks its outputs, so this loses no solutions.

use std::collections::{HashSet, VecDeque};
use std::time::Instant;

use super::search::{run, Space, Step};
use super::{bits, build_candidate, Decision, DetView, Limits, SearchBudget, SearchStats};
use crate::error::{Error, Result};
use crate::filter::Filter;
use crate::product::output_simulates;

/// Largest `k` the subset bitmasks allow.
const MAX_K: usize = 63;

#[derive(Clone)]
pub(crate) struct Node {
    /// Successor mask per `(w, y)`, `None` while undecided.
    delta: Vec<Option<u64>>,
    allowed: Vec<u64>,
    used: usize,
    initial: u64,
    visited: HashSet<(u32, u64)>,
    queue: VecDeque<(u32, u64)>,
}

struct NondetSpace<'a> {
    input: &'a Filter,
    d: DetView,
    k: usize,
}

impl NondetSpace<'_> {
    fn roots(&self) -> Vec<Node> {
        let d0 = self.d.initial;
        let full = u64::MAX;
        (1..=self.k)
            .map(|m| {
                let init = (1u64 << m) - 1;
                let mut allowed = vec![full; self.k];
                for a in allowed.iter_mut().take(m) {
                    *a = self.d.colors[d0];
                }
                Node {
                    delta: vec![None; self.k * self.d.m],
                    allowed,
                    used: m,
                    initial: init,
                    visited: HashSet::from([(d0 as u32, init)]),
                    queue: VecDeque::from([(d0 as u32, init)]),
                }
            })
            .collect()
    }

    /// Options for `δ(w, y)`: any subset of the states in use together with
    /// the next `j` unused states.
    fn children(&self, node: &Node, w: usize, y: usize) -> Vec<Node> {
        let m = self.d.m;
        let used = node.used;
        let mut out = Vec::new();
        for j in 0..=(self.k - used) {
            let fresh = ((1u64 << (used + j)) - 1) & !((1u64 << used) - 1);
            for s in 0..(1u64 << used) {
                let mut child = node.clone();
                child.delta[w * m + y] = Some(s | fresh);
                child.used = used + j;
                out.push(child);
            }
        }
        out
    }
}

impl Space for NondetSpace<'_> {
    type Node = Node;

    fn advance(&self, node: &mut Node) -> Step<Node> {
        let m = self.d.m;
        while let Some(&(d, t)) = node.queue.front() {
            let d = d as usize;
            for y in 0..m {
                let Some(d2) = self.d.succ(d, y) else {
                    continue;
                };
                let mut t2 = 0u64;
                for w in bits(t) {
                    match node.delta[w * m + y] {
                        Some(s) => t2 |= s,
                        None => return Step::Branch(self.children(node, w, y)),
                    }
                }
                if t2 == 0 {
                    return Step::Dead;
                }
                let c = self.d.colors[d2];
                for w in bits(t2) {
                    node.allowed[w] &= c;
                    if node.allowed[w] == 0 {
                        return Step::Dead;
                    }
                }
                if node.visited.insert((d2 as u32, t2)) {
                    node.queue.push_back((d2 as u32, t2));
                }
            }
            node.queue.pop_front();
        }
        Step::Leaf
    }

    fn finish(&self, node: &Node) -> Result<Option<Filter>> {
        let m = self.d.m;
        let palette = super::full_mask(self.input.num_colors());
        let colors: Vec<u64> = node.allowed.iter().map(|&c| c & palette).collect();
        let h = build_candidate(self.input, node.used, bits(node.initial).collect(), &colors, |w, y| {
            bits(node.delta[w * m + y].unwrap_or(0))
        });
        Ok(output_simulates(&h, self.input, None)?.holds.then_some(h))
    }
}

pub(crate) fn search(
    f: &Filter,
    k: usize,
    budget: &SearchBudget,
    limits: &Limits,
    stats: &mut SearchStats,
) -> Result<Decision> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if k > MAX_K {
        return Err(Error::TooLarge {
            what: "candidate size",
            max: MAX_K,
        });
    }
    let det = f.determinize(budget.determinize_cap)?.filter;
    stats.determinized_states = det.num_states();
    let space = NondetSpace {
        input: f,
        d: DetView::new(&det)?,
        k,
    };
    let roots = space.roots();
    run(&space, roots, limits, budget.jobs, stats)
}

/// Whether some filter with at most `k` states output-simulates `f`.
///
/// `Yes` carries the canonically first witness found. `No` is returned only
/// after the whole candidate space has been exhausted.
pub fn decide_size_k(f: &Filter, k: usize, budget: &SearchBudget) -> Result<Decision> {
    let f = f.trim();
    if k >= f.num_states() {
        return Ok(Decision::Yes(f));
    }
    let limits = Limits::new(budget, Instant::now());
    search(&f, k, budget, &limits, &mut SearchStats::default())
}
