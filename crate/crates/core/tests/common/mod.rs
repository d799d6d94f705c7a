//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the product construction or the automaton inclusion code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use pfilter::random::rng;
use pfilter::{Filter, FilterDesc};
use rand::Rng;

/// Every string over `alphabet` of length at most `len`, shortest first.
pub fn words(alphabet: &[String], len: usize) -> Vec<Vec<String>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<String>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for y in alphabet {
                let mut w2 = w.clone();
                w2.push(y.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Tracer working from the edge list alone. `None` is a crash; otherwise
/// the set of color names reached. Symbols outside the alphabet crash.
pub fn trace(f: &Filter, word: &[String]) -> Option<BTreeSet<String>> {
    let mut cur: BTreeSet<usize> = f.initial().iter().copied().collect();
    for y in word {
        let yi = f.observations().iter().position(|o| o == y)?;
        let mut next = BTreeSet::new();
        for ((v, w), ys) in f.edges() {
            if cur.contains(&v) && ys.contains(&yi) {
                next.insert(w);
            }
        }
        cur = next;
        if cur.is_empty() {
            return None;
        }
    }
    Some(
        cur.iter()
            .flat_map(|&v| f.coloring(v).iter().map(|&c| f.colors()[c].clone()))
            .collect(),
    )
}

pub fn union_alphabet(a: &Filter, b: &Filter) -> Vec<String> {
    let mut out = a.observations().to_vec();
    for y in b.observations() {
        if !out.contains(y) {
            out.push(y.clone());
        }
    }
    out
}

/// A filter over a shared alphabet and color universe, with subsets as bitmasks.
pub struct Small {
    init: u64,
    succ: Vec<Vec<u64>>,
    colors: Vec<u64>,
}

impl Small {
    pub fn new(f: &Filter, alphabet: &[String], colors: &[String]) -> Small {
        assert!(f.num_states() <= 64 && colors.len() <= 64);
        let mut succ = vec![vec![0u64; alphabet.len()]; f.num_states()];
        for ((v, w), ys) in f.edges() {
            for &y in ys {
                let yi = alphabet.iter().position(|a| a == &f.observations()[y]).unwrap();
                succ[v][yi] |= 1 << w;
            }
        }
        let colors = (0..f.num_states())
            .map(|v| {
                f.coloring(v).iter().fold(0u64, |acc, &c| {
                    acc | 1 << colors.iter().position(|n| n == &f.colors()[c]).unwrap()
                })
            })
            .collect();
        Small {
            init: f.initial().iter().fold(0, |acc, &v| acc | 1 << v),
            succ,
            colors,
        }
    }

    pub fn from_parts(init: u64, succ: Vec<Vec<u64>>, colors: Vec<u64>) -> Small {
        Small { init, succ, colors }
    }

    fn step(&self, s: u64, y: usize) -> u64 {
        let mut out = 0;
        let mut b = s;
        while b != 0 {
            let v = b.trailing_zeros() as usize;
            b &= b - 1;
            out |= self.succ[v][y];
        }
        out
    }

    fn out(&self, s: u64) -> u64 {
        let mut out = 0;
        let mut b = s;
        while b != 0 {
            let v = b.trailing_zeros() as usize;
            b &= b - 1;
            out |= self.colors[v];
        }
        out
    }
}

/// Shortest failures of `fp` simulating `f`, found by enumerating strings in
/// order of length. Strings reaching the same pair of reached-sets behave
/// the same from then on, so only one per pair is extended; the walk stops
/// when no new pair appears.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Enumerated {
    /// Shortest string surviving on `f` and crashing on `fp`.
    pub language_gap: Option<Vec<String>>,
    /// Shortest string surviving on both where `fp` emits a color `f` does not.
    pub output_violation: Option<Vec<String>>,
}

impl Enumerated {
    pub fn holds(&self) -> bool {
        self.language_gap.is_none() && self.output_violation.is_none()
    }
}

pub fn enumerate_simulation(fp: &Filter, f: &Filter) -> Enumerated {
    let alphabet = union_alphabet(f, fp);
    let mut colors: Vec<String> = f.colors().to_vec();
    for c in fp.colors() {
        if !colors.contains(c) {
            colors.push(c.clone());
        }
    }
    let a = Small::new(f, &alphabet, &colors);
    let b = Small::new(fp, &alphabet, &colors);
    let mut res = Enumerated::default();
    let mut seen = HashSet::new();
    let mut level: Vec<(u64, u64, Vec<String>)> = vec![(a.init, b.init, vec![])];
    seen.insert((a.init, b.init));
    while !level.is_empty() {
        for (s, t, w) in &level {
            if *s == 0 {
                continue;
            }
            if *t == 0 {
                res.language_gap.get_or_insert_with(|| w.clone());
            } else if b.out(*t) & !a.out(*s) != 0 {
                res.output_violation.get_or_insert_with(|| w.clone());
            }
        }
        let mut next = Vec::new();
        for (s, t, w) in &level {
            if *s == 0 {
                continue;
            }
            for (y, name) in alphabet.iter().enumerate() {
                let pair = (a.step(*s, y), b.step(*t, y));
                if seen.insert(pair) {
                    let mut w2 = w.clone();
                    w2.push(name.clone());
                    next.push((pair.0, pair.1, w2));
                }
            }
        }
        level = next;
    }
    res
}

/// Whether `fp` output-simulates `f`, on precompiled filters.
pub fn simulates_small(b: &Small, a: &Small, m: usize) -> bool {
    let mut seen = HashSet::new();
    let mut stack = vec![(a.init, b.init)];
    seen.insert((a.init, b.init));
    while let Some((s, t)) = stack.pop() {
        if t == 0 || b.out(t) & !a.out(s) != 0 {
            return false;
        }
        for y in 0..m {
            let s2 = a.step(s, y);
            if s2 == 0 {
                continue;
            }
            let pair = (s2, b.step(t, y));
            if seen.insert(pair) {
                stack.push(pair);
            }
        }
    }
    true
}

/// Size of a smallest filter output-simulating `f`, by trying every filter
/// with fewer states than `trim(f)` over `f`'s symbols and colors, with
/// arbitrary color sets, initial sets and transition relations.
pub fn brute_force_min_size(f: &Filter) -> usize {
    let f = f.trim();
    let n = f.num_states();
    let m = f.num_symbols();
    let c = f.num_colors();
    let target = Small::new(&f, f.observations(), f.colors());
    for k in 1..n {
        let pairs = k * m * k;
        assert!(pairs <= 20, "candidate space too large for the oracle");
        for init in 1u64..(1 << k) {
            let colorings = (1usize << c) - 1;
            for col_code in 0..colorings.pow(k as u32) {
                let mut code = col_code;
                let colors: Vec<u64> = (0..k)
                    .map(|_| {
                        let x = (code % colorings) as u64 + 1;
                        code /= colorings;
                        x
                    })
                    .collect();
                for rel in 0u64..(1 << pairs) {
                    let succ = (0..k)
                        .map(|v| {
                            (0..m)
                                .map(|y| (rel >> ((v * m + y) * k)) & ((1 << k) - 1))
                                .collect()
                        })
                        .collect();
                    let cand = Small {
                        init,
                        succ,
                        colors: colors.clone(),
                    };
                    if simulates_small(&cand, &target, m) {
                        return k;
                    }
                }
            }
        }
    }
    n
}

/// Copy of `f` with one transition symbol removed.
pub fn without_transition(f: &Filter, v: usize, w: usize, y: usize) -> Filter {
    let mut d = FilterDesc::from(f);
    let from = f.state_name(v);
    let to = f.state_name(w);
    let sym = &f.observations()[y];
    for t in &mut d.transitions {
        if t.from == from && t.to == to {
            t.symbols.retain(|s| s != sym);
        }
    }
    d.build().unwrap()
}

/// All transitions of `f` as `(v, w, y)`.
pub fn transitions(f: &Filter) -> Vec<(usize, usize, usize)> {
    f.edges()
        .flat_map(|((v, w), ys)| ys.iter().map(move |&y| (v, w, y)))
        .collect()
}

/// Every filter with exactly `n` states over `m` symbols and `c` colors,
/// in a fixed order. Only meant for tiny parameters.
pub fn all_filters(n: usize, m: usize, c: usize) -> Vec<Filter> {
    let syms: Vec<String> = (0..m).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let cols: Vec<String> = (0..c).map(|i| format!("c{i}")).collect();
    let colorings = (1usize << c) - 1;
    let pairs = n * m * n;
    let mut out = Vec::new();
    for init in 1u64..(1 << n) {
        for col_code in 0..colorings.pow(n as u32) {
            for rel in 0u64..(1 << pairs) {
                let mut d = FilterDesc::new(&syms, &cols);
                let mut code = col_code;
                for v in 0..n {
                    let set = code % colorings + 1;
                    code /= colorings;
                    let names: Vec<&String> =
                        (0..c).filter(|b| set >> b & 1 == 1).map(|b| &cols[b]).collect();
                    d.state(format!("s{v}"), &names);
                    if init >> v & 1 == 1 {
                        d.initial(format!("s{v}"));
                    }
                }
                let mut edges: BTreeMap<(usize, usize), Vec<&str>> = BTreeMap::new();
                for v in 0..n {
                    for y in 0..m {
                        for w in 0..n {
                            if rel >> ((v * m + y) * n + w) & 1 == 1 {
                                edges.entry((v, w)).or_default().push(&syms[y]);
                            }
                        }
                    }
                }
                for ((v, w), ys) in edges {
                    d.edge(format!("s{v}"), format!("s{w}"), &ys);
                }
                out.push(d.build().unwrap());
            }
        }
    }
    out
}

/// A uniformly drawn filter with three states, two symbols and two colors.
pub fn sample_three_state(seed: u64) -> Filter {
    let mut r = rng(seed);
    let syms = ["a", "b"];
    let cols = ["c0", "c1"];
    let mut d = FilterDesc::new(&syms, &cols);
    for v in 0..3 {
        let set: usize = r.gen_range(1..4);
        let names: Vec<&str> = (0..2).filter(|b| set >> b & 1 == 1).map(|b| cols[b]).collect();
        d.state(format!("s{v}"), &names);
    }
    let init: usize = r.gen_range(1..8);
    for v in 0..3 {
        if init >> v & 1 == 1 {
            d.initial(format!("s{v}"));
        }
    }
    for v in 0..3 {
        for w in 0..3 {
            let ys: Vec<&str> = syms.iter().copied().filter(|_| r.gen_bool(0.3)).collect();
            if !ys.is_empty() {
                d.edge(format!("s{v}"), format!("s{w}"), &ys);
            }
        }
    }
    d.build().unwrap()
}
