//! The two hardness reductions as instance generators.
//!
//! * NFA universality to nondeterministic minimization: `L(A) = Σ*` iff the
//!   produced filter has a one-state minimizer.
//! * DFA union universality to deterministic minimization: the union of the
//!   languages is `Σ*` iff the produced filter has a one-state deterministic
//!   minimizer.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::filter::Filter;
use crate::minimize::{decide_det_size_k, decide_size_k, Decision, SearchBudget};
use crate::nfa::{fresh_name, union, union_alphabet, Nfa};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionSource {
    NfaUniversality(Nfa),
    DfaUnion(Vec<Nfa>),
}

#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub source: ReductionSource,
    pub filter: Filter,
    /// The symbol added outside the source alphabet.
    pub fresh_symbol: String,
    /// Filter state name to the source state it copies; added states are absent.
    pub state_map: BTreeMap<String, SourceState>,
}

/// A state of the source automaton (or of its completion, for trap states).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceState {
    pub automaton: usize,
    pub state: String,
}

impl ReductionInstance {
    /// Comment lines describing where the instance came from.
    pub fn provenance(&self) -> Vec<String> {
        let what = match &self.source {
            ReductionSource::NfaUniversality(a) => format!(
                "reduction nfa-universality: {} source states, alphabet [{}]",
                a.num_states(),
                a.alphabet().join(", ")
            ),
            ReductionSource::DfaUnion(ds) => format!(
                "reduction dfa-union: {} automata with {} states in total",
                ds.len(),
                ds.iter().map(Nfa::num_states).sum::<usize>()
            ),
        };
        vec![what, format!("fresh symbol: {}", self.fresh_symbol)]
    }
}

fn copy_edges(n: &Nfa, edges: &mut BTreeMap<(usize, usize), BTreeSet<usize>>) {
    for v in 0..n.num_states() {
        for y in 0..n.alphabet().len() {
            for &w in n.successors(v, y) {
                edges.entry((v, w)).or_default().insert(y);
            }
        }
    }
}

fn finish_edges(edges: BTreeMap<(usize, usize), BTreeSet<usize>>) -> BTreeMap<(usize, usize), Vec<usize>> {
    edges
        .into_iter()
        .map(|(k, v)| (k, v.into_iter().collect()))
        .collect()
}

/// Filter whose one-state minimizers exist exactly when `a` is universal.
///
/// States: copies `a:{q}` of `a`'s states with its transitions and initial
/// states; a new initial `v` looping on `Σ`; `w`, entered under the fresh
/// symbol from every accepting copy; `u`, entered from `v` under the fresh
/// symbol. `u` is blue and every other state green.
pub fn from_nfa_universality(a: &Nfa) -> ReductionInstance {
    let sigma = a.alphabet().to_vec();
    let z = fresh_name("z", &sigma);
    let mut observations = sigma.clone();
    observations.push(z.clone());
    let zi = sigma.len();
    let n = a.num_states();

    let mut states: Vec<String> = (0..n).map(|q| format!("a:{}", a.state_name(q))).collect();
    let (v, w, u) = (n, n + 1, n + 2);
    states.extend(["v", "w", "u"].map(String::from));

    let mut edges = BTreeMap::new();
    copy_edges(a, &mut edges);
    edges.entry((v, v)).or_default().extend(0..zi);
    for q in (0..n).filter(|&q| a.is_accepting(q)) {
        edges.entry((q, w)).or_default().insert(zi);
    }
    edges.entry((v, u)).or_default().insert(zi);

    let mut initial: Vec<usize> = a.initial().to_vec();
    initial.push(v);
    let (green, blue) = (0, 1);
    let mut coloring = vec![vec![green]; n + 3];
    coloring[u] = vec![blue];

    let filter = Filter::assemble(
        states,
        initial,
        observations,
        vec!["green".into(), "blue".into()],
        coloring,
        finish_edges(edges),
    );
    let state_map = (0..n)
        .map(|q| {
            let src = SourceState {
                automaton: 0,
                state: a.state_name(q).to_string(),
            };
            (format!("a:{}", a.state_name(q)), src)
        })
        .collect();
    ReductionInstance {
        source: ReductionSource::NfaUniversality(a.clone()),
        filter,
        fresh_symbol: z,
        state_map,
    }
}

/// Filter whose one-state deterministic minimizers exist exactly when the
/// union of the languages of `dfas` is `Σ*`.
///
/// Each automaton is completed over the union alphabet with a trap state,
/// and the disjoint union is taken with states `{i}:{q}`. Accepting copies
/// are green and the rest red. One extra green state `g` is entered under
/// the fresh symbol from the first accepting copy (in state order) that is
/// reachable.
pub fn from_dfa_union(dfas: &[Nfa]) -> Result<ReductionInstance> {
    if dfas.is_empty() {
        return Err(Error::InvalidArgument("empty automaton family".into()));
    }
    let sigma = dfas
        .iter()
        .fold(Vec::new(), |acc, d| union_alphabet(&acc, d.alphabet()));
    let completed = dfas
        .iter()
        .map(|d| d.with_alphabet(&sigma)?.complete_dfa())
        .collect::<Result<Vec<_>>>()?;
    let b = union(&completed)?;
    let z = fresh_name("z", &sigma);
    let zi = sigma.len();
    let n = b.num_states();

    let reachable = reachable(&b);
    let goal_src = (0..n)
        .find(|&q| b.is_accepting(q) && reachable[q])
        .ok_or(Error::NoAcceptingState)?;

    let mut states: Vec<String> = (0..n).map(|q| b.state_name(q).to_string()).collect();
    let goal = n;
    states.push("g".into());
    let mut edges = BTreeMap::new();
    copy_edges(&b, &mut edges);
    edges.entry((goal_src, goal)).or_default().insert(zi);

    let (green, red) = (0, 1);
    let mut coloring: Vec<Vec<usize>> = (0..n)
        .map(|q| vec![if b.is_accepting(q) { green } else { red }])
        .collect();
    coloring.push(vec![green]);
    let mut observations = sigma;
    observations.push(z.clone());

    let filter = Filter::assemble(
        states,
        b.initial().to_vec(),
        observations,
        vec!["green".into(), "red".into()],
        coloring,
        finish_edges(edges),
    );
    let mut state_map = BTreeMap::new();
    let mut offset = 0;
    for (i, c) in completed.iter().enumerate() {
        for q in 0..c.num_states() {
            let src = SourceState {
                automaton: i,
                state: c.state_name(q).to_string(),
            };
            state_map.insert(b.state_name(offset + q).to_string(), src);
        }
        offset += c.num_states();
    }
    Ok(ReductionInstance {
        source: ReductionSource::DfaUnion(dfas.to_vec()),
        filter,
        fresh_symbol: z,
        state_map,
    })
}

fn reachable(n: &Nfa) -> Vec<bool> {
    let mut seen = vec![false; n.num_states()];
    let mut stack: Vec<usize> = n.initial().to_vec();
    for &q in &stack {
        seen[q] = true;
    }
    while let Some(q) = stack.pop() {
        for y in 0..n.alphabet().len() {
            for &w in n.successors(q, y) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    seen
}

/// Whether the instance's minimization answer agrees with `universal`, the
/// oracle's verdict on the source.
pub fn verify_reduction(
    instance: &ReductionInstance,
    universal: bool,
    budget: &SearchBudget,
) -> Result<bool> {
    let decision = match instance.source {
        ReductionSource::NfaUniversality(_) => decide_size_k(&instance.filter, 1, budget)?,
        ReductionSource::DfaUnion(_) => decide_det_size_k(&instance.filter, 1, budget)?,
    };
    match decision {
        Decision::BudgetExhausted => Err(Error::BudgetExhausted),
        d => Ok(d.is_yes() == universal),
    }
}
