//! The p-filter model: a transition system whose states carry nonempty sets
//! of colors (outputs), with a set of initial states and edges labelled by
//! sets of observation symbols.
//!
//! States, symbols and colors are addressed by dense indices internally; the
//! string identifiers from the text format are kept for display and I/O.
//! The empty string always belongs to the interaction language because every
//! valid filter has at least one initial state.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::format::FilterDesc;

/// Default cap on the number of subset-states produced by [`Filter::determinize`].
pub const DEFAULT_DETERMINIZE_CAP: usize = 1 << 20;

/// A validated, immutable p-filter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filter {
    states: Vec<String>,
    initial: Vec<usize>,
    observations: Vec<String>,
    colors: Vec<String>,
    coloring: Vec<Vec<usize>>,
    edges: BTreeMap<(usize, usize), Vec<usize>>,
    succ: Vec<Vec<Vec<usize>>>,
}

/// The states reached by a string, and whether the string crashes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceResult {
    pub reached: Vec<usize>,
    pub crashed: bool,
}

/// Output of a string: either a color set or a crash.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Output {
    Crash,
    Colors(Vec<usize>),
}

impl Output {
    pub fn is_crash(&self) -> bool {
        matches!(self, Output::Crash)
    }

    pub fn colors(&self) -> Option<&[usize]> {
        match self {
            Output::Crash => None,
            Output::Colors(c) => Some(c),
        }
    }
}

/// Result of the power-set construction.
#[derive(Debug, Clone)]
pub struct Determinization {
    pub filter: Filter,
    /// For every state of `filter`, the sorted set of original states it stands for.
    pub subsets: Vec<Vec<usize>>,
}

/// Checks a raw description against the filter well-formedness rules.
pub fn validate(desc: &FilterDesc) -> Result<Filter> {
    if desc.observations.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    let observations = unique_names("symbol", &desc.observations)?;
    let colors = unique_names("color", &desc.colors)?;
    let state_names: Vec<String> = desc.states.iter().map(|s| s.id.clone()).collect();
    let states = unique_names("state", &state_names)?;

    let mut coloring = Vec::with_capacity(desc.states.len());
    for s in &desc.states {
        if s.colors.is_empty() {
            return Err(Error::EmptyColorSet(s.id.clone()));
        }
        let mut cs = BTreeSet::new();
        for c in &s.colors {
            let idx = colors
                .get(c.as_str())
                .ok_or_else(|| Error::UnknownColor(c.clone()))?;
            cs.insert(*idx);
        }
        coloring.push(cs.into_iter().collect());
    }

    let state_idx = |id: &str| -> Result<usize> {
        states
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownState(id.to_string()))
    };

    let mut initial = BTreeSet::new();
    for id in &desc.initial {
        initial.insert(state_idx(id)?);
    }
    if initial.is_empty() {
        return Err(Error::NoInitialState);
    }

    let mut edges: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
    for t in &desc.transitions {
        let from = state_idx(&t.from)?;
        let to = state_idx(&t.to)?;
        let mut syms = BTreeSet::new();
        for y in &t.symbols {
            let idx = observations
                .get(y.as_str())
                .ok_or_else(|| Error::UnknownSymbol(y.clone()))?;
            syms.insert(*idx);
        }
        if !syms.is_empty() {
            edges.entry((from, to)).or_default().extend(syms);
        }
    }

    Ok(Filter::assemble(
        state_names,
        initial.into_iter().collect(),
        desc.observations.clone(),
        desc.colors.clone(),
        coloring,
        edges
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().collect()))
            .collect(),
    ))
}

fn unique_names<'a>(kind: &'static str, names: &'a [String]) -> Result<HashMap<&'a str, usize>> {
    let mut map = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.as_str(), i).is_some() {
            return Err(Error::Duplicate {
                kind,
                name: n.clone(),
            });
        }
    }
    Ok(map)
}

impl Filter {
    /// Builds a filter from already-consistent parts. Symbol and color lists
    /// inside `coloring` and `edges` must be sorted and in range.
    pub(crate) fn assemble(
        states: Vec<String>,
        initial: Vec<usize>,
        observations: Vec<String>,
        colors: Vec<String>,
        coloring: Vec<Vec<usize>>,
        edges: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Filter {
        let n = states.len();
        let m = observations.len();
        let mut succ = vec![vec![Vec::new(); m]; n];
        for (&(v, w), ys) in &edges {
            for &y in ys {
                succ[v][y].push(w);
            }
        }
        // BTreeMap iteration yields targets in ascending order per (v, y).
        Filter {
            states,
            initial,
            observations,
            colors,
            coloring,
            edges,
            succ,
        }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.observations.len()
    }

    pub fn num_colors(&self) -> usize {
        self.colors.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, v: usize) -> &str {
        &self.states[v]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn observations(&self) -> &[String] {
        &self.observations
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.observations.iter().position(|s| s == name)
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn color_index(&self, name: &str) -> Option<usize> {
        self.colors.iter().position(|s| s == name)
    }

    /// Sorted color indices of state `v`.
    pub fn coloring(&self, v: usize) -> &[usize] {
        &self.coloring[v]
    }

    /// Edges `(v, w)` with their (sorted, nonempty) symbol sets.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), &[usize])> + '_ {
        self.edges.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    pub fn edge_symbols(&self, v: usize, w: usize) -> &[usize] {
        self.edges.get(&(v, w)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Sorted targets of `v` under symbol `y`.
    pub fn successors(&self, v: usize, y: usize) -> &[usize] {
        &self.succ[v][y]
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1
            && self
                .succ
                .iter()
                .all(|per_sym| per_sym.iter().all(|ts| ts.len() <= 1))
    }

    /// One step of the subset semantics.
    pub fn step(&self, from: &[usize], y: usize) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for &v in from {
            out.extend(self.succ[v][y].iter().copied());
        }
        out.into_iter().collect()
    }

    /// States reached from the initial states by a word of symbol indices.
    pub fn reached(&self, word: &[usize]) -> Vec<usize> {
        let mut cur = self.initial.clone();
        for &y in word {
            if cur.is_empty() {
                break;
            }
            cur = self.step(&cur, y);
        }
        cur
    }

    /// Union of the colorings of a set of states.
    pub fn colors_of(&self, set: &[usize]) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for &v in set {
            out.extend(self.coloring[v].iter().copied());
        }
        out.into_iter().collect()
    }

    pub fn output_indices(&self, word: &[usize]) -> Output {
        let reached = self.reached(word);
        if reached.is_empty() {
            Output::Crash
        } else {
            Output::Colors(self.colors_of(&reached))
        }
    }

    /// Maps symbol names to indices.
    pub fn word<S: AsRef<str>>(&self, symbols: &[S]) -> Result<Vec<usize>> {
        symbols
            .iter()
            .map(|s| {
                let s = s.as_ref();
                self.symbol_index(s)
                    .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
            })
            .collect()
    }

    /// Splits a textual string into symbols. Whitespace or commas separate
    /// symbols when present; otherwise the text is tokenized by repeatedly
    /// taking the longest observation that prefixes the remainder.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>> {
        if text.contains(|c: char| c.is_whitespace() || c == ',') {
            let parts: Vec<&str> = text
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|p| !p.is_empty())
                .collect();
            return self.word(&parts);
        }
        let mut out = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let best = self
                .observations
                .iter()
                .enumerate()
                .filter(|(_, o)| !o.is_empty() && rest.starts_with(o.as_str()))
                .max_by_key(|(_, o)| o.len());
            match best {
                Some((i, o)) => {
                    out.push(i);
                    rest = &rest[o.len()..];
                }
                None => {
                    let bad: String = rest.chars().take(1).collect();
                    return Err(Error::UnknownSymbol(bad));
                }
            }
        }
        Ok(out)
    }

    pub fn word_names(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&y| self.observations[y].clone()).collect()
    }

    pub fn reached_states<S: AsRef<str>>(&self, symbols: &[S]) -> Result<TraceResult> {
        let word = self.word(symbols)?;
        let reached = self.reached(&word);
        Ok(TraceResult {
            crashed: reached.is_empty(),
            reached,
        })
    }

    pub fn output_of<S: AsRef<str>>(&self, symbols: &[S]) -> Result<Output> {
        Ok(self.output_indices(&self.word(symbols)?))
    }

    /// Whether the string survives (does not crash).
    pub fn interaction_language_member<S: AsRef<str>>(&self, symbols: &[S]) -> Result<bool> {
        Ok(!self.reached(&self.word(symbols)?).is_empty())
    }

    /// Color names of an output, in declared order.
    pub fn color_names(&self, colors: &[usize]) -> Vec<&str> {
        colors.iter().map(|&c| self.colors[c].as_str()).collect()
    }

    /// States reachable from the initial states, as a membership mask.
    pub fn reachable_mask(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &v in &self.initial {
            seen[v] = true;
            queue.push_back(v);
        }
        while let Some(v) = queue.pop_front() {
            for ts in &self.succ[v] {
                for &w in ts {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        seen
    }

    pub fn is_trim(&self) -> bool {
        self.reachable_mask().into_iter().all(|b| b)
    }

    /// Removes states not reachable from any initial state.
    pub fn trim(&self) -> Filter {
        let keep = self.reachable_mask();
        self.restrict(&keep)
    }

    /// Keeps only the states flagged in `keep`, preserving their order.
    pub(crate) fn restrict(&self, keep: &[bool]) -> Filter {
        let mut remap = vec![usize::MAX; self.num_states()];
        let mut states = Vec::new();
        let mut coloring = Vec::new();
        for (v, &k) in keep.iter().enumerate() {
            if k {
                remap[v] = states.len();
                states.push(self.states[v].clone());
                coloring.push(self.coloring[v].clone());
            }
        }
        let initial = self
            .initial
            .iter()
            .filter(|&&v| keep[v])
            .map(|&v| remap[v])
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|(&(v, w), _)| keep[v] && keep[w])
            .map(|(&(v, w), ys)| ((remap[v], remap[w]), ys.clone()))
            .collect();
        Filter::assemble(
            states,
            initial,
            self.observations.clone(),
            self.colors.clone(),
            coloring,
            edges,
        )
    }

    /// Power-set construction. Subset-states are discovered breadth-first
    /// from the initial set, symbols in declared order, and are named by
    /// their sorted member lists, e.g. `{q1,q2}`.
    pub fn determinize(&self, cap: Option<usize>) -> Result<Determinization> {
        let cap = cap.unwrap_or(DEFAULT_DETERMINIZE_CAP);
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        let mut edges: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();

        index.insert(self.initial.clone(), 0);
        subsets.push(self.initial.clone());
        let mut i = 0;
        while i < subsets.len() {
            for y in 0..self.num_symbols() {
                let next = self.step(&subsets[i], y);
                if next.is_empty() {
                    continue;
                }
                let j = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        if subsets.len() >= cap {
                            return Err(Error::CapExceeded { cap });
                        }
                        let j = subsets.len();
                        index.insert(next.clone(), j);
                        subsets.push(next);
                        j
                    }
                };
                edges.entry((i, j)).or_default().push(y);
            }
            i += 1;
        }

        let states = subsets
            .iter()
            .map(|s| {
                let names: Vec<&str> = s.iter().map(|&v| self.states[v].as_str()).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        let coloring = subsets.iter().map(|s| self.colors_of(s)).collect();
        let filter = Filter::assemble(
            states,
            vec![0],
            self.observations.clone(),
            self.colors.clone(),
            coloring,
            edges,
        );
        Ok(Determinization { filter, subsets })
    }
}

impl fmt::Display for TraceResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.crashed {
            write!(f, "crashed")
        } else {
            write!(f, "{:?}", self.reached)
        }
    }
}
