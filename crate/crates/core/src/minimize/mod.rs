//! Exact minimization.
//!
//! Both engines work against `D = determinize(F)`: a filter output-simulates
//! `F` iff it output-simulates `D`, since the two have the same language and
//! the same output on every string.
//!
//! The nondeterministic engine ([`minimize_nondet`]) deepens over
//! [`decide_size_k`]. The deterministic engine ([`minimize_det`]) brackets
//! the optimum between a clique lower bound on the incompatibility graph and
//! a greedy merge, then closes the gap with [`decide_det_size_k`].

mod det;
mod nondet;
mod search;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::filter::Filter;

pub use det::{compatibility_graph, decide_det_size_k, CompatibilityGraph};
pub use nondet::decide_size_k;

/// Limits on a search. `None` means unlimited.
#[derive(Debug, Clone, Default)]
pub struct SearchBudget {
    /// Largest candidate size to try.
    pub max_states: Option<usize>,
    /// Cap on partial candidates (search nodes) explored.
    pub candidate_cap: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Worker threads for the nondeterministic search; 0 or 1 is sequential.
    pub jobs: usize,
    /// Cap on subset-states during determinization.
    pub determinize_cap: Option<usize>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }
}

/// Outcome of a size-`k` decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    /// A filter with at most `k` states that output-simulates the input.
    Yes(Filter),
    No,
    BudgetExhausted,
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Partial candidates explored.
    pub nodes: u64,
    /// Complete candidates checked with the simulation decision procedure.
    pub candidates_verified: u64,
    /// Size levels that finished with a definite answer.
    pub levels_completed: Vec<usize>,
    /// States of the determinized input.
    pub determinized_states: usize,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct MinimizationResult {
    pub minimizer: Filter,
    pub size: usize,
    /// No filter with fewer states output-simulates the input.
    pub proven_optimal: bool,
    /// The search stopped on a budget rather than a proof.
    pub budget_exhausted: bool,
    pub stats: SearchStats,
}

/// Per-search shared state: budget counters and the deadline.
pub(crate) struct Limits {
    pub(crate) node_cap: Option<u64>,
    pub(crate) deadline: Option<Instant>,
}

impl Limits {
    pub(crate) fn new(budget: &SearchBudget, start: Instant) -> Self {
        Limits {
            node_cap: budget.candidate_cap,
            deadline: budget.time_limit.map(|t| start + t),
        }
    }
}

/// Compact view of a deterministic filter: successor table and color masks.
#[derive(Debug, Clone)]
pub(crate) struct DetView {
    pub(crate) n: usize,
    pub(crate) m: usize,
    succ: Vec<u32>,
    pub(crate) colors: Vec<u64>,
    pub(crate) initial: usize,
}

pub(crate) const NONE: u32 = u32::MAX;

impl DetView {
    pub(crate) fn new(d: &Filter) -> Result<Self> {
        debug_assert!(d.is_deterministic());
        if d.num_colors() > 64 {
            return Err(Error::TooLarge {
                what: "color count",
                max: 64,
            });
        }
        let (n, m) = (d.num_states(), d.num_symbols());
        let mut succ = vec![NONE; n * m];
        for v in 0..n {
            for y in 0..m {
                if let Some(&w) = d.successors(v, y).first() {
                    succ[v * m + y] = w as u32;
                }
            }
        }
        let colors = (0..n).map(|v| mask(d.coloring(v))).collect();
        Ok(DetView {
            n,
            m,
            succ,
            colors,
            initial: d.initial()[0],
        })
    }

    #[inline]
    pub(crate) fn succ(&self, v: usize, y: usize) -> Option<usize> {
        let w = self.succ[v * self.m + y];
        (w != NONE).then_some(w as usize)
    }
}

pub(crate) fn mask(colors: &[usize]) -> u64 {
    colors.iter().fold(0, |acc, &c| acc | 1 << c)
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn bits(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if x == 0 {
            None
        } else {
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(b)
        }
    })
}

/// Assembles a candidate with states `s0 … s{n-1}` over `like`'s alphabet
/// and colors. `target(w, y)` lists the successors of `w` under `y`.
pub(crate) fn build_candidate<I: IntoIterator<Item = usize>>(
    like: &Filter,
    n: usize,
    initial: Vec<usize>,
    colors: &[u64],
    target: impl Fn(usize, usize) -> I,
) -> Filter {
    let m = like.num_symbols();
    let mut edges: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for w in 0..n {
        for y in 0..m {
            for t in target(w, y) {
                edges.entry((w, t)).or_default().push(y);
            }
        }
    }
    Filter::assemble(
        (0..n).map(|i| format!("s{i}")).collect(),
        initial,
        like.observations().to_vec(),
        like.colors().to_vec(),
        colors[..n].iter().map(|&c| bits(c).collect()).collect(),
        edges,
    )
}

/// Smallest filter, possibly nondeterministic, that output-simulates `f`.
/// Sizes `k = 1, 2, …` are tried in turn; the trimmed input bounds the
/// search from above.
pub fn minimize_nondet(f: &Filter, budget: &SearchBudget) -> Result<MinimizationResult> {
    let start = Instant::now();
    let trimmed = f.trim();
    let n = trimmed.num_states();
    let limits = Limits::new(budget, start);
    let mut stats = SearchStats {
        upper_bound: n,
        lower_bound: 1,
        ..Default::default()
    };
    let top = budget.max_states.map_or(n - 1, |k| k.min(n - 1));
    let mut exhausted = false;
    let mut found = None;
    for k in 1..=top {
        let decision = nondet::search(&trimmed, k, budget, &limits, &mut stats)?;
        match decision {
            Decision::Yes(h) => {
                stats.levels_completed.push(k);
                found = Some(h);
                break;
            }
            Decision::No => {
                stats.levels_completed.push(k);
                stats.lower_bound = k + 1;
            }
            Decision::BudgetExhausted => {
                exhausted = true;
                break;
            }
        }
    }
    stats.elapsed = start.elapsed();
    let minimizer = match found {
        Some(h) => h,
        None => trimmed,
    };
    let size = minimizer.num_states();
    stats.upper_bound = size;
    Ok(MinimizationResult {
        proven_optimal: stats.lower_bound >= size,
        minimizer,
        size,
        budget_exhausted: exhausted,
        stats,
    })
}

/// Smallest deterministic filter that output-simulates `f`.
pub fn minimize_det(f: &Filter, budget: &SearchBudget) -> Result<MinimizationResult> {
    det::minimize(f, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{fig3_input, fig3_minimizer, prime_family};
    use crate::format::FilterDesc;
    use crate::product::output_simulates;

    fn sims(h: &Filter, f: &Filter) -> bool {
        output_simulates(h, f, None).unwrap().holds
    }

    #[test]
    fn single_state_input() {
        let mut d = FilterDesc::new(&["a"], &["g"]);
        d.state("s", &["g"]).initial("s").edge("s", "s", &["a"]);
        let f = d.build().unwrap();
        let r = minimize_nondet(&f, &SearchBudget::unlimited()).unwrap();
        assert_eq!(r.size, 1);
        assert!(r.proven_optimal);
        let r = minimize_det(&f, &SearchBudget::unlimited()).unwrap();
        assert_eq!(r.size, 1);
        assert!(r.proven_optimal);
    }

    #[test]
    fn trimmed_input_is_a_witness() {
        let f = prime_family(1).unwrap();
        let d = decide_size_k(&f, f.num_states(), &SearchBudget::unlimited()).unwrap();
        match d {
            Decision::Yes(h) => assert!(sims(&h, &f)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn prime_one_nondet_is_five() {
        let f = prime_family(1).unwrap();
        let r = minimize_nondet(&f, &SearchBudget::unlimited()).unwrap();
        assert_eq!(r.size, 5);
        assert!(r.proven_optimal);
        assert!(sims(&r.minimizer, &f));
    }

    #[test]
    fn fig3_det_sizes() {
        for f in [fig3_input(), fig3_minimizer()] {
            let r = minimize_det(&f, &SearchBudget::unlimited()).unwrap();
            assert_eq!(r.size, 10);
            assert!(r.proven_optimal);
            assert!(r.minimizer.is_deterministic());
            assert!(sims(&r.minimizer, &f));
        }
    }

    #[test]
    fn candidate_cap_exhausts() {
        let f = fig3_input();
        let budget = SearchBudget {
            candidate_cap: Some(50),
            ..Default::default()
        };
        let r = minimize_nondet(&f, &budget).unwrap();
        assert!(r.budget_exhausted);
        assert!(!r.proven_optimal);
        assert_eq!(r.size, 10);
    }

    #[test]
    fn merging_identical_states() {
        // two green states reachable on a and b, both looping: one state suffices
        let mut d = FilterDesc::new(&["a", "b"], &["g"]);
        d.state("s", &["g"]).state("t", &["g"]).state("u", &["g"]).initial("s");
        d.edge("s", "t", &["a"]).edge("s", "u", &["b"]);
        d.edge("t", "t", &["a", "b"]).edge("u", "u", &["a", "b"]);
        let f = d.build().unwrap();
        assert_eq!(minimize_nondet(&f, &SearchBudget::unlimited()).unwrap().size, 1);
        assert_eq!(minimize_det(&f, &SearchBudget::unlimited()).unwrap().size, 1);
    }
}
