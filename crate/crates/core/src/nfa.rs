//! Finite automata with accepting states, plus the language decisions
//! (inclusion, equivalence, universality) the simulation checker and the
//! reductions are built on.
//!
//! Operations over several automata work on the union of their alphabets.
//! A symbol missing from one operand simply has no transitions there.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::filter::{Filter, DEFAULT_DETERMINIZE_CAP};
use crate::format::NfaDesc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    states: Vec<String>,
    initial: Vec<usize>,
    alphabet: Vec<String>,
    delta: Vec<Vec<Vec<usize>>>,
    accepting: Vec<bool>,
}

/// Outcome of a language comparison. `witness` is set exactly when the
/// relation fails, and is a shortest string demonstrating the failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageCheck {
    pub holds: bool,
    pub witness: Option<Vec<String>>,
}

impl LanguageCheck {
    fn holds() -> Self {
        LanguageCheck {
            holds: true,
            witness: None,
        }
    }

    fn fails(witness: Vec<String>) -> Self {
        LanguageCheck {
            holds: false,
            witness: Some(witness),
        }
    }
}

pub fn validate_nfa(desc: &NfaDesc) -> Result<Nfa> {
    let mut sym_idx = HashMap::new();
    for (i, y) in desc.observations.iter().enumerate() {
        if sym_idx.insert(y.as_str(), i).is_some() {
            return Err(Error::Duplicate {
                kind: "symbol",
                name: y.clone(),
            });
        }
    }
    let mut st_idx = HashMap::new();
    for (i, s) in desc.states.iter().enumerate() {
        if st_idx.insert(s.id.as_str(), i).is_some() {
            return Err(Error::Duplicate {
                kind: "state",
                name: s.id.clone(),
            });
        }
    }
    let state = |id: &str| {
        st_idx
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownState(id.to_string()))
    };
    let n = desc.states.len();
    let mut initial = BTreeSet::new();
    for id in &desc.initial {
        initial.insert(state(id)?);
    }
    if initial.is_empty() {
        return Err(Error::NoInitialState);
    }
    let mut accepting = vec![false; n];
    for id in &desc.accepting {
        accepting[state(id)?] = true;
    }
    let mut sets = vec![vec![BTreeSet::new(); desc.observations.len()]; n];
    for t in &desc.transitions {
        let (v, w) = (state(&t.from)?, state(&t.to)?);
        for y in &t.symbols {
            let yi = *sym_idx
                .get(y.as_str())
                .ok_or_else(|| Error::UnknownSymbol(y.clone()))?;
            sets[v][yi].insert(w);
        }
    }
    Ok(Nfa {
        states: desc.states.iter().map(|s| s.id.clone()).collect(),
        initial: initial.into_iter().collect(),
        alphabet: desc.observations.clone(),
        delta: to_vecs(sets),
        accepting,
    })
}

fn to_vecs(sets: Vec<Vec<BTreeSet<usize>>>) -> Vec<Vec<Vec<usize>>> {
    sets.into_iter()
        .map(|row| row.into_iter().map(|s| s.into_iter().collect()).collect())
        .collect()
}

/// Union of two alphabets: `a` in order, then the symbols of `b` not in `a`.
pub fn union_alphabet(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    for y in b {
        if !out.contains(y) {
            out.push(y.clone());
        }
    }
    out
}

/// Automaton with the transition structure of `f`, accepting at `accepting`.
/// Colors are discarded.
pub fn filter_to_nfa(f: &Filter, accepting: &[usize]) -> Nfa {
    let n = f.num_states();
    let delta = (0..n)
        .map(|v| {
            (0..f.num_symbols())
                .map(|y| f.successors(v, y).to_vec())
                .collect()
        })
        .collect();
    let mut acc = vec![false; n];
    for &v in accepting {
        acc[v] = true;
    }
    Nfa {
        states: f.states().to_vec(),
        initial: f.initial().to_vec(),
        alphabet: f.observations().to_vec(),
        delta,
        accepting: acc,
    }
}

impl Nfa {
    /// Builds an automaton from raw parts; `delta` target lists must be sorted.
    pub(crate) fn from_parts(
        states: Vec<String>,
        initial: Vec<usize>,
        alphabet: Vec<String>,
        delta: Vec<Vec<Vec<usize>>>,
        accepting: Vec<bool>,
    ) -> Nfa {
        Nfa {
            states,
            initial,
            alphabet,
            delta,
            accepting,
        }
    }

    /// The one-state automaton accepting every string over `alphabet`.
    pub fn universal(alphabet: &[String]) -> Nfa {
        Nfa {
            states: vec!["all".into()],
            initial: vec![0],
            alphabet: alphabet.to_vec(),
            delta: vec![vec![vec![0]; alphabet.len()]],
            accepting: vec![true],
        }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
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

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn is_accepting(&self, v: usize) -> bool {
        self.accepting[v]
    }

    pub fn successors(&self, v: usize, y: usize) -> &[usize] {
        &self.delta[v][y]
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1 && self.delta.iter().all(|r| r.iter().all(|t| t.len() <= 1))
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(|r| r.iter().all(|t| !t.is_empty()))
    }

    /// Re-indexes the automaton over `alphabet`, which must contain every
    /// symbol of the current alphabet. New symbols get no transitions.
    pub fn with_alphabet(&self, alphabet: &[String]) -> Result<Nfa> {
        let map: Vec<usize> = self
            .alphabet
            .iter()
            .map(|y| {
                alphabet
                    .iter()
                    .position(|z| z == y)
                    .ok_or_else(|| Error::UnknownSymbol(y.clone()))
            })
            .collect::<Result<_>>()?;
        let delta = self
            .delta
            .iter()
            .map(|row| {
                let mut new_row = vec![Vec::new(); alphabet.len()];
                for (y, ts) in row.iter().enumerate() {
                    new_row[map[y]] = ts.clone();
                }
                new_row
            })
            .collect();
        Ok(Nfa {
            states: self.states.clone(),
            initial: self.initial.clone(),
            alphabet: alphabet.to_vec(),
            delta,
            accepting: self.accepting.clone(),
        })
    }

    /// Returns a copy with a different accepting set.
    pub fn with_accepting(&self, accepting: &[usize]) -> Nfa {
        let mut acc = vec![false; self.num_states()];
        for &v in accepting {
            acc[v] = true;
        }
        Nfa {
            accepting: acc,
            ..self.clone()
        }
    }

    fn step(&self, from: &[usize], y: usize) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for &v in from {
            out.extend(self.delta[v][y].iter().copied());
        }
        out.into_iter().collect()
    }

    pub fn accepts_indices(&self, word: &[usize]) -> bool {
        let mut cur = self.initial.clone();
        for &y in word {
            cur = self.step(&cur, y);
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|&v| self.accepting[v])
    }

    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> Result<bool> {
        let idx: Vec<usize> = word
            .iter()
            .map(|s| {
                let s = s.as_ref();
                self.alphabet
                    .iter()
                    .position(|y| y == s)
                    .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
            })
            .collect::<Result<_>>()?;
        Ok(self.accepts_indices(&idx))
    }

    /// Subset construction. The result is deterministic and complete: the
    /// empty subset appears as a non-accepting dead state whenever some
    /// transition leads to it.
    pub fn subset_construct(&self, cap: Option<usize>) -> Result<Nfa> {
        let cap = cap.unwrap_or(DEFAULT_DETERMINIZE_CAP);
        let m = self.alphabet.len();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut subsets = vec![self.initial.clone()];
        index.insert(self.initial.clone(), 0);
        let mut delta: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            let mut row = Vec::with_capacity(m);
            for y in 0..m {
                let next = self.step(&subsets[i], y);
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
                row.push(vec![j]);
            }
            delta.push(row);
            i += 1;
        }
        let states = subsets
            .iter()
            .map(|s| {
                let names: Vec<&str> = s.iter().map(|&v| self.states[v].as_str()).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        let accepting = subsets
            .iter()
            .map(|s| s.iter().any(|&v| self.accepting[v]))
            .collect();
        Ok(Nfa {
            states,
            initial: vec![0],
            alphabet: self.alphabet.clone(),
            delta,
            accepting,
        })
    }

    /// Makes a deterministic automaton total by routing every undefined
    /// transition to a fresh non-accepting trap state that loops on every
    /// symbol. Complete inputs are returned unchanged.
    pub fn complete_dfa(&self) -> Result<Nfa> {
        if !self.is_deterministic() {
            return Err(Error::NotDeterministic);
        }
        if self.is_complete() {
            return Ok(self.clone());
        }
        let trap = self.num_states();
        let mut out = self.clone();
        out.states.push(fresh_name("trap", &self.states));
        out.accepting.push(false);
        for row in &mut out.delta {
            for ts in row.iter_mut() {
                if ts.is_empty() {
                    ts.push(trap);
                }
            }
        }
        out.delta.push(vec![vec![trap]; self.alphabet.len()]);
        Ok(out)
    }

    /// Language complement; requires a deterministic complete automaton.
    pub fn complement(&self) -> Result<Nfa> {
        if !self.is_deterministic() {
            return Err(Error::NotDeterministic);
        }
        if !self.is_complete() {
            return Err(Error::NotComplete);
        }
        let mut out = self.clone();
        for a in &mut out.accepting {
            *a = !*a;
        }
        Ok(out)
    }

    pub fn is_included(&self, other: &Nfa, cap: Option<usize>) -> Result<LanguageCheck> {
        is_included(self, other, cap)
    }
}

/// Product automaton over reachable state pairs.
pub fn intersect(a: &Nfa, b: &Nfa) -> Nfa {
    let alphabet = union_alphabet(&a.alphabet, &b.alphabet);
    let a = a.with_alphabet(&alphabet).expect("superset alphabet");
    let b = b.with_alphabet(&alphabet).expect("superset alphabet");
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = Vec::new();
    for &p in &a.initial {
        for &q in &b.initial {
            index.insert((p, q), pairs.len());
            pairs.push((p, q));
        }
    }
    let initial = (0..pairs.len()).collect();
    let mut delta = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        let mut row = Vec::with_capacity(alphabet.len());
        for y in 0..alphabet.len() {
            let mut ts = BTreeSet::new();
            for &p2 in &a.delta[p][y] {
                for &q2 in &b.delta[q][y] {
                    let j = *index.entry((p2, q2)).or_insert_with(|| {
                        pairs.push((p2, q2));
                        pairs.len() - 1
                    });
                    ts.insert(j);
                }
            }
            row.push(ts.into_iter().collect());
        }
        delta.push(row);
        i += 1;
    }
    let states = pairs
        .iter()
        .map(|&(p, q)| format!("({},{})", a.states[p], b.states[q]))
        .collect();
    let accepting = pairs
        .iter()
        .map(|&(p, q)| a.accepting[p] && b.accepting[q])
        .collect();
    Nfa {
        states,
        initial,
        alphabet,
        delta,
        accepting,
    }
}

/// Disjoint union. State `v` of the `i`-th operand is named `i:v`.
pub fn union(automata: &[Nfa]) -> Result<Nfa> {
    if automata.is_empty() {
        return Err(Error::InvalidArgument("union of an empty list".into()));
    }
    let alphabet = automata
        .iter()
        .fold(Vec::new(), |acc, n| union_alphabet(&acc, &n.alphabet));
    let mut out = Nfa {
        states: Vec::new(),
        initial: Vec::new(),
        alphabet: alphabet.clone(),
        delta: Vec::new(),
        accepting: Vec::new(),
    };
    for (i, n) in automata.iter().enumerate() {
        let n = n.with_alphabet(&alphabet)?;
        let offset = out.states.len();
        out.states
            .extend(n.states.iter().map(|s| format!("{i}:{s}")));
        out.initial.extend(n.initial.iter().map(|&v| v + offset));
        out.accepting.extend(n.accepting.iter().copied());
        out.delta.extend(n.delta.iter().map(|row| {
            row.iter()
                .map(|ts| ts.iter().map(|&w| w + offset).collect())
                .collect()
        }));
    }
    Ok(out)
}

/// Decides `L(a) ⊆ L(b)` by a breadth-first search over pairs of a state
/// of `a` and a subset of states of `b`, determinizing `b` on the fly.
/// A pair whose `a` component accepts while the subset contains no
/// accepting state of `b` ends a shortest counterexample. `cap` bounds the
/// number of distinct pairs explored.
pub fn is_included(a: &Nfa, b: &Nfa, cap: Option<usize>) -> Result<LanguageCheck> {
    let cap = cap.unwrap_or(DEFAULT_DETERMINIZE_CAP);
    let alphabet = union_alphabet(&a.alphabet, &b.alphabet);
    let a = a.with_alphabet(&alphabet)?;
    let b = b.with_alphabet(&alphabet)?;
    let m = alphabet.len();

    let mut subset_ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    let mut subset_acc: Vec<bool> = Vec::new();
    let mut subset_step: Vec<Vec<Option<usize>>> = Vec::new();
    let mut intern = |s: Vec<usize>,
                      subsets: &mut Vec<Vec<usize>>,
                      subset_acc: &mut Vec<bool>,
                      subset_step: &mut Vec<Vec<Option<usize>>>|
     -> usize {
        if let Some(&id) = subset_ids.get(&s) {
            return id;
        }
        let id = subsets.len();
        subset_acc.push(s.iter().any(|&v| b.accepting[v]));
        subset_step.push(vec![None; m]);
        subset_ids.insert(s.clone(), id);
        subsets.push(s);
        id
    };

    // node -> (parent node, symbol)
    let mut parent: HashMap<(usize, usize), Option<((usize, usize), usize)>> = HashMap::new();
    let mut queue = VecDeque::new();
    let start = intern(
        b.initial.clone(),
        &mut subsets,
        &mut subset_acc,
        &mut subset_step,
    );
    for &p in &a.initial {
        let node = (p, start);
        if parent.insert(node, None).is_none() {
            queue.push_back(node);
        }
    }

    while let Some(node @ (p, sid)) = queue.pop_front() {
        if a.accepting[p] && !subset_acc[sid] {
            let mut word = Vec::new();
            let mut cur = node;
            while let Some(Some((prev, y))) = parent.get(&cur) {
                word.push(alphabet[*y].clone());
                cur = *prev;
            }
            word.reverse();
            return Ok(LanguageCheck::fails(word));
        }
        for y in 0..m {
            if a.delta[p][y].is_empty() {
                continue;
            }
            let next_sid = match subset_step[sid][y] {
                Some(id) => id,
                None => {
                    let next = b.step(&subsets[sid], y);
                    let id = intern(next, &mut subsets, &mut subset_acc, &mut subset_step);
                    subset_step[sid][y] = Some(id);
                    id
                }
            };
            for &p2 in &a.delta[p][y] {
                let parent_len = parent.len();
                let next = (p2, next_sid);
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                    if parent_len >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    e.insert(Some((node, y)));
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(LanguageCheck::holds())
}

pub fn is_equivalent(a: &Nfa, b: &Nfa, cap: Option<usize>) -> Result<LanguageCheck> {
    let ab = is_included(a, b, cap)?;
    if !ab.holds {
        return Ok(ab);
    }
    is_included(b, a, cap)
}

/// Whether the automaton accepts every string over its alphabet; the
/// witness is a shortest rejected string.
pub fn is_universal(a: &Nfa, cap: Option<usize>) -> Result<LanguageCheck> {
    is_included(&Nfa::universal(&a.alphabet), a, cap)
}

/// Smallest name of the form `base`, `base1`, `base2`, ... not in `taken`.
pub fn fresh_name(base: &str, taken: &[String]) -> String {
    if !taken.iter().any(|t| t == base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|c| !taken.iter().any(|t| t == c))
        .expect("unbounded candidates")
}
