mod common;

use std::collections::HashSet;

use common::{simulates_small, trace, words, Small};
use pfilter::format::NfaDesc;
use pfilter::minimize::{decide_det_size_k, decide_size_k, minimize_det, SearchBudget};
use pfilter::nfa::is_universal;
use pfilter::random::{random_dfa, random_nfa, rng};
use pfilter::reductions::{from_dfa_union, from_nfa_universality, verify_reduction};
use pfilter::{Error, Filter, Nfa};
use rand::Rng;

/// Universality by breadth-first search over reached-state bitmasks.
fn universal_by_subsets(n: &Nfa) -> bool {
    let m = n.alphabet().len();
    let start = n.initial().iter().fold(0u64, |acc, &q| acc | 1 << q);
    let accepts = |s: u64| (0..n.num_states()).any(|q| s >> q & 1 == 1 && n.is_accepting(q));
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(s) = stack.pop() {
        if !accepts(s) {
            return false;
        }
        for y in 0..m {
            let mut t = 0u64;
            for q in (0..n.num_states()).filter(|q| s >> q & 1 == 1) {
                for &w in n.successors(q, y) {
                    t |= 1 << w;
                }
            }
            if seen.insert(t) {
                stack.push(t);
            }
        }
    }
    true
}

/// Universality of a union of partial DFAs over a shared alphabet, by
/// search over tuples of current states (`None` once an automaton crashed).
fn union_universal(dfas: &[Nfa]) -> bool {
    let m = dfas[0].alphabet().len();
    let start: Vec<Option<usize>> = dfas.iter().map(|d| d.initial().first().copied()).collect();
    let accepts = |t: &[Option<usize>]| {
        t.iter()
            .zip(dfas)
            .any(|(q, d)| q.is_some_and(|q| d.is_accepting(q)))
    };
    let mut seen = HashSet::from([start.clone()]);
    let mut stack = vec![start];
    while let Some(t) = stack.pop() {
        if !accepts(&t) {
            return false;
        }
        for y in 0..m {
            let next: Vec<Option<usize>> = t
                .iter()
                .zip(dfas)
                .map(|(q, d)| q.and_then(|q| d.successors(q, y).first().copied()))
                .collect();
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    true
}

/// Whether some one-state filter simulates `f`: one state, any color set,
/// self-loops on any subset of the symbols.
fn one_state_minimizer_exists(f: &Filter) -> bool {
    let f = f.trim();
    let m = f.num_symbols();
    let target = Small::new(&f, f.observations(), f.colors());
    for colors in 1u64..(1 << f.num_colors()) {
        for loops in 0u64..(1 << m) {
            let succ = vec![(0..m).map(|y| loops >> y & 1).collect()];
            if simulates_small(&Small::from_parts(1, succ, vec![colors]), &target, m) {
                return true;
            }
        }
    }
    false
}

fn random_source(seed: u64) -> Nfa {
    let mut r = rng(seed);
    let states = r.gen_range(1..=4);
    let symbols = r.gen_range(1..=2);
    let density = r.gen_range(0.2..0.8);
    random_nfa(states, symbols, density, &mut r).unwrap()
}

fn random_family(seed: u64) -> Vec<Nfa> {
    let mut r = rng(seed);
    let count = r.gen_range(1..=3);
    let symbols = r.gen_range(1..=2);
    (0..count)
        .map(|_| {
            let states = r.gen_range(1..=3);
            let defined = r.gen_range(0.4..1.0);
            random_dfa(states, symbols, defined, &mut r).unwrap()
        })
        .collect()
}

#[test]
fn nfa_universality_is_preserved() {
    let budget = SearchBudget::unlimited();
    let (mut yes, mut no) = (0, 0);
    for seed in 0..200 {
        let a = random_source(seed);
        let universal = is_universal(&a, None).unwrap().holds;
        assert_eq!(universal, universal_by_subsets(&a));
        let inst = from_nfa_universality(&a);
        assert!(!a.alphabet().contains(&inst.fresh_symbol));
        let d = decide_size_k(&inst.filter, 1, &budget).unwrap();
        assert_eq!(d.is_yes(), universal, "seed {seed}");
        assert_eq!(one_state_minimizer_exists(&inst.filter), universal, "seed {seed}");
        assert!(verify_reduction(&inst, universal, &budget).unwrap());
        if universal {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes >= 5 && no >= 5, "{yes} universal, {no} not");
}

#[test]
fn dfa_union_universality_is_preserved() {
    let budget = SearchBudget::unlimited();
    let (mut yes, mut no, mut refused) = (0, 0, 0);
    for seed in 0..200 {
        let family = random_family(seed);
        let universal = union_universal(&family);
        match from_dfa_union(&family) {
            Err(Error::NoAcceptingState) => {
                assert!(!universal);
                refused += 1;
            }
            Err(e) => panic!("seed {seed}: {e}"),
            Ok(inst) => {
                assert!(inst.filter.observations().iter().filter(|y| **y == inst.fresh_symbol).count() == 1);
                let d = decide_det_size_k(&inst.filter, 1, &budget).unwrap();
                assert_eq!(d.is_yes(), universal, "seed {seed}");
                assert_eq!(one_state_minimizer_exists(&inst.filter), universal, "seed {seed}");
                assert!(verify_reduction(&inst, universal, &budget).unwrap());
                if universal {
                    yes += 1;
                } else {
                    no += 1;
                }
            }
        }
    }
    assert!(yes + no >= 50);
    assert!(yes >= 5 && no >= 5, "{yes} universal, {no} not, {refused} refused");
}

#[test]
fn lemma_instance_language_and_outputs() {
    for seed in 0..40 {
        let a = random_source(1000 + seed);
        let inst = from_nfa_universality(&a);
        let f = &inst.filter;
        let z = inst.fresh_symbol.clone();
        for s in words(a.alphabet(), 4) {
            // every string over the source alphabet survives
            assert_eq!(trace(f, &s).unwrap(), ["green".to_string()].into());
            let mut sz = s.clone();
            sz.push(z.clone());
            let out = trace(f, &sz).unwrap();
            let expect: Vec<&str> = if a.accepts(&s).unwrap() {
                vec!["blue", "green"]
            } else {
                vec!["blue"]
            };
            assert_eq!(out.iter().map(String::as_str).collect::<Vec<_>>(), expect);
            assert!(f.interaction_language_member(&sz).unwrap());
            // nothing extends past z
            for y in f.observations() {
                let mut w = sz.clone();
                w.push(y.clone());
                assert!(trace(f, &w).is_none());
                assert!(!f.interaction_language_member(&w).unwrap());
            }
        }
    }
}

#[test]
fn dfa_union_examples() {
    let parity = |even: bool| {
        let mut d = NfaDesc::new(&["a", "b"]);
        d.state("e").state("o").initial("e");
        d.accepting(if even { "e" } else { "o" });
        d.edge("e", "o", &["a"]).edge("o", "e", &["a"]);
        d.edge("e", "e", &["b"]).edge("o", "o", &["b"]);
        d.build().unwrap()
    };
    let both = from_dfa_union(&[parity(true), parity(false)]).unwrap();
    let r = minimize_det(&both.filter, &SearchBudget::unlimited()).unwrap();
    assert_eq!(r.size, 1);

    let mut d = NfaDesc::new(&["a"]);
    d.state("s").state("t").initial("s").accepting("t");
    d.edge("s", "t", &["a"]).edge("t", "t", &["a"]);
    let nonempty = from_dfa_union(&[d.build().unwrap()]).unwrap();
    let r = minimize_det(&nonempty.filter, &SearchBudget::unlimited()).unwrap();
    assert!(r.size >= 2);
    let eps = trace(&nonempty.filter, &[]).unwrap();
    assert!(eps.contains("red"));

    let mut d = NfaDesc::new(&["a"]);
    d.state("s").initial("s").edge("s", "s", &["a"]);
    assert!(matches!(
        from_dfa_union(&[d.build().unwrap()]),
        Err(Error::NoAcceptingState)
    ));
}

#[test]
fn fresh_symbol_avoids_collisions() {
    let mut d = NfaDesc::new(&["z", "z1"]);
    d.state("q").initial("q").accepting("q").edge("q", "q", &["z", "z1"]);
    let inst = from_nfa_universality(&d.build().unwrap());
    assert!(inst.fresh_symbol != "z" && inst.fresh_symbol != "z1");
    assert!(inst.fresh_symbol.starts_with('z'));
    assert_eq!(inst.filter.num_symbols(), 3);
}
