//! Depth-first driver shared by the exact searches, with an optional
//! parallel mode that still reports the canonically first witness.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::{Decision, Limits, SearchStats};
use crate::error::{Error, Result};
use crate::filter::Filter;

pub(crate) enum Step<N> {
    /// The partial candidate cannot be completed.
    Dead,
    /// Every reachable product pair is closed; the candidate is complete.
    Leaf,
    /// Children in canonical order.
    Branch(Vec<N>),
}

pub(crate) trait Space: Sync {
    type Node: Clone + Send;

    fn advance(&self, node: &mut Self::Node) -> Step<Self::Node>;

    /// The verified witness for a complete candidate, if it is one.
    fn finish(&self, node: &Self::Node) -> Result<Option<Filter>>;
}

struct Counters<'a> {
    limits: &'a Limits,
    nodes: AtomicU64,
    verified: AtomicU64,
    stop: AtomicBool,
}

impl Counters<'_> {
    /// Counts one node; false once the budget is spent.
    fn tick(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        let count = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_cap = self.limits.node_cap.is_some_and(|cap| count > cap);
        let over_time = count % 64 == 0
            && self.limits.deadline.is_some_and(|d| Instant::now() >= d);
        if over_cap || over_time {
            self.stop.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

enum Item<N> {
    Node(N),
    Found(Filter),
}

fn dfs<S: Space>(space: &S, root: S::Node, c: &Counters) -> Result<Decision> {
    let mut stack = vec![root];
    while let Some(mut node) = stack.pop() {
        if !c.tick() {
            return Ok(Decision::BudgetExhausted);
        }
        match space.advance(&mut node) {
            Step::Dead => {}
            Step::Leaf => {
                c.verified.fetch_add(1, Ordering::Relaxed);
                if let Some(f) = space.finish(&node)? {
                    return Ok(Decision::Yes(f));
                }
            }
            Step::Branch(children) => stack.extend(children.into_iter().rev()),
        }
    }
    Ok(Decision::No)
}

/// Searches the subtrees under `roots` in order. Node and verification
/// counts are added to `stats`.
pub(crate) fn run<S: Space>(
    space: &S,
    roots: Vec<S::Node>,
    limits: &Limits,
    jobs: usize,
    stats: &mut SearchStats,
) -> Result<Decision> {
    let c = Counters {
        limits,
        nodes: AtomicU64::new(0),
        verified: AtomicU64::new(0),
        stop: AtomicBool::new(false),
    };
    let decision = if jobs <= 1 {
        sequential(space, roots, &c)
    } else {
        parallel(space, roots, &c, jobs)
    };
    stats.nodes += c.nodes.load(Ordering::Relaxed);
    stats.candidates_verified += c.verified.load(Ordering::Relaxed);
    decision
}

fn sequential<S: Space>(space: &S, roots: Vec<S::Node>, c: &Counters) -> Result<Decision> {
    for root in roots {
        match dfs(space, root, c)? {
            Decision::No => {}
            other => return Ok(other),
        }
    }
    Ok(Decision::No)
}

fn parallel<S: Space>(space: &S, roots: Vec<S::Node>, c: &Counters, jobs: usize) -> Result<Decision> {
    // Expand breadth-wise, keeping depth-first order, until there is enough
    // work to spread.
    let mut frontier: Vec<Item<S::Node>> = roots.into_iter().map(Item::Node).collect();
    while frontier.len() < 8 * jobs {
        let mut next = Vec::new();
        let mut expanded = false;
        for item in frontier {
            match item {
                Item::Found(f) => {
                    next.push(Item::Found(f));
                    break;
                }
                Item::Node(mut node) => {
                    if !c.tick() {
                        return Ok(Decision::BudgetExhausted);
                    }
                    match space.advance(&mut node) {
                        Step::Dead => {}
                        Step::Leaf => {
                            c.verified.fetch_add(1, Ordering::Relaxed);
                            if let Some(f) = space.finish(&node)? {
                                next.push(Item::Found(f));
                                break;
                            }
                        }
                        Step::Branch(children) => {
                            expanded = true;
                            next.extend(children.into_iter().map(Item::Node));
                        }
                    }
                }
            }
        }
        frontier = next;
        if !expanded {
            break;
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let first = pool.install(|| {
        frontier
            .into_par_iter()
            .map(|item| match item {
                Item::Found(f) => Ok(Decision::Yes(f)),
                Item::Node(node) => dfs(space, node, c),
            })
            .find_map_first(|r| match r {
                Ok(Decision::No) => None,
                other => Some(other),
            })
    });
    first.unwrap_or(Ok(Decision::No))
}
