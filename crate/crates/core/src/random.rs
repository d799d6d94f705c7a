//! Seeded random filters and automata for tests and the `gen random` command.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::filter::Filter;
use crate::format::NfaDesc;
use crate::nfa::Nfa;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub states: usize,
    pub symbols: usize,
    pub colors: usize,
    /// Probability of each `(v, y, w)` transition.
    pub density: f64,
}

impl RandomSpec {
    pub fn new(states: usize, symbols: usize, colors: usize) -> Self {
        RandomSpec {
            states,
            symbols,
            colors,
            density: 0.3,
        }
    }

    fn check(&self) -> Result<()> {
        if self.states == 0 || self.symbols == 0 || self.colors == 0 {
            return Err(Error::InvalidArgument(
                "states, symbols and colors must be positive".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::InvalidArgument("density must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symbol names `a, b, …, z`, then `y26, y27, …`.
pub fn symbol_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("y{i}")
            }
        })
        .collect()
}

fn nonempty_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// Random filter with states `s0 …`, colors `c0 …`. State `s0` is always
/// initial; others are initial with probability `1/states`. The result may
/// have unreachable states.
pub fn random_filter<R: Rng>(spec: &RandomSpec, rng: &mut R) -> Result<Filter> {
    spec.check()?;
    let n = spec.states;
    let coloring = (0..n)
        .map(|_| {
            // singletons are more common, to keep outputs informative
            if rng.gen_bool(0.6) {
                vec![rng.gen_range(0..spec.colors)]
            } else {
                nonempty_subset(rng, spec.colors)
            }
        })
        .collect();
    let mut initial = vec![0];
    initial.extend((1..n).filter(|_| rng.gen_bool(1.0 / n as f64)));
    let mut edges: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        for y in 0..spec.symbols {
            for w in 0..n {
                if rng.gen_bool(spec.density) {
                    edges.entry((v, w)).or_default().push(y);
                }
            }
        }
    }
    Ok(Filter::assemble(
        (0..n).map(|i| format!("s{i}")).collect(),
        initial,
        symbol_names(spec.symbols),
        (0..spec.colors).map(|i| format!("c{i}")).collect(),
        coloring,
        edges,
    ))
}

/// Random automaton with states `q0 …`; `q0` is initial, each state
/// accepting with probability one half.
pub fn random_nfa<R: Rng>(states: usize, symbols: usize, density: f64, rng: &mut R) -> Result<Nfa> {
    let spec = RandomSpec {
        states,
        symbols,
        colors: 1,
        density,
    };
    spec.check()?;
    let syms = symbol_names(symbols);
    let mut d = NfaDesc::new(&syms);
    for q in 0..states {
        d.state(format!("q{q}"));
        if rng.gen_bool(0.5) {
            d.accepting(format!("q{q}"));
        }
    }
    d.initial("q0");
    for v in 0..states {
        for y in &syms {
            for w in 0..states {
                if rng.gen_bool(density) {
                    d.edge(format!("q{v}"), format!("q{w}"), &[y]);
                }
            }
        }
    }
    d.build()
}

/// Random deterministic automaton; each `(state, symbol)` has a successor
/// with probability `defined`.
pub fn random_dfa<R: Rng>(states: usize, symbols: usize, defined: f64, rng: &mut R) -> Result<Nfa> {
    let spec = RandomSpec {
        states,
        symbols,
        colors: 1,
        density: defined,
    };
    spec.check()?;
    let syms = symbol_names(symbols);
    let mut d = NfaDesc::new(&syms);
    for q in 0..states {
        d.state(format!("q{q}"));
        if rng.gen_bool(0.5) {
            d.accepting(format!("q{q}"));
        }
    }
    d.initial("q0");
    for v in 0..states {
        for y in &syms {
            if rng.gen_bool(defined) {
                let w = rng.gen_range(0..states);
                d.edge(format!("q{v}"), format!("q{w}"), &[y]);
            }
        }
    }
    d.build()
}
