mod common;

use common::{enumerate_simulation, trace, transitions, without_transition, words};
use pfilter::families::{fig3_input, fig3_minimizer};
use pfilter::product::{
    check_language_inclusion, check_output_consistency, output_simulates, tensor_product,
    FailureKind,
};
use pfilter::random::{random_filter, rng, RandomSpec};
use pfilter::{Filter, FilterDesc};
use proptest::prelude::*;
use rand::Rng;

fn random_small(seed: u64) -> Filter {
    let mut r = rng(seed);
    let spec = RandomSpec {
        states: r.gen_range(1..=5),
        symbols: r.gen_range(1..=2),
        colors: r.gen_range(1..=3),
        density: r.gen_range(0.15..0.6),
    };
    random_filter(&spec, &mut r).unwrap()
}

/// A random edit of `f`: drop a transition, recolor a state, or add an edge.
fn mutate(f: &Filter, seed: u64) -> Filter {
    let mut r = rng(seed ^ 0x9e37_79b9);
    let mut d = FilterDesc::from(f);
    match r.gen_range(0..3) {
        0 if !d.transitions.is_empty() => {
            let i = r.gen_range(0..d.transitions.len());
            let t = &mut d.transitions[i];
            let j = r.gen_range(0..t.symbols.len());
            t.symbols.remove(j);
        }
        1 => {
            let i = r.gen_range(0..d.states.len());
            let c = r.gen_range(0..d.colors.len());
            d.states[i].colors = vec![d.colors[c].clone()];
        }
        _ => {
            let n = d.states.len();
            let (v, w) = (r.gen_range(0..n), r.gen_range(0..n));
            let y = r.gen_range(0..d.observations.len());
            let (from, to, sym) = (
                d.states[v].id.clone(),
                d.states[w].id.clone(),
                d.observations[y].clone(),
            );
            d.edge(from, to, &[sym]);
        }
    }
    d.build().unwrap()
}

/// Checks a verdict against enumeration, including witness validity and length.
fn agrees(fp: &Filter, f: &Filter) -> Result<(), TestCaseError> {
    let v = output_simulates(fp, f, None).unwrap();
    let oracle = enumerate_simulation(fp, f);
    prop_assert_eq!(v.holds, oracle.holds());
    if let Some(fail) = v.failure {
        match fail.kind {
            FailureKind::LanguageGap => {
                let shortest = oracle.language_gap.unwrap();
                prop_assert_eq!(fail.witness.len(), shortest.len());
                prop_assert!(trace(f, &fail.witness).is_some());
                prop_assert!(trace(fp, &fail.witness).is_none());
            }
            FailureKind::OutputViolation => {
                prop_assert!(oracle.language_gap.is_none());
                let shortest = oracle.output_violation.unwrap();
                prop_assert_eq!(fail.witness.len(), shortest.len());
                let out_f = trace(f, &fail.witness).unwrap();
                let out_fp = trace(fp, &fail.witness).unwrap();
                let color = fail.color.unwrap();
                prop_assert!(out_fp.contains(&color) && !out_f.contains(&color));
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn reflexive(seed in any::<u64>()) {
        let f = random_small(seed);
        prop_assert!(output_simulates(&f, &f, None).unwrap().holds);
    }

    #[test]
    fn agrees_with_enumeration_on_independent_pairs(a in any::<u64>(), b in any::<u64>()) {
        agrees(&random_small(a), &random_small(b))?;
    }

    #[test]
    fn agrees_with_enumeration_on_edited_pairs(seed in any::<u64>()) {
        let f = random_small(seed);
        let fp = mutate(&f, seed);
        agrees(&fp, &f)?;
        agrees(&f, &fp)?;
    }

    #[test]
    fn deleting_transitions_keeps_language_gaps(seed in any::<u64>()) {
        let f = random_small(seed);
        let fp = mutate(&f, seed);
        let before = check_language_inclusion(&f.trim(), &fp.trim(), None).unwrap();
        if !before.holds {
            for (v, w, y) in transitions(&fp) {
                let smaller = without_transition(&fp, v, w, y);
                let after = check_language_inclusion(&f.trim(), &smaller.trim(), None).unwrap();
                prop_assert!(!after.holds);
            }
        }
    }

    #[test]
    fn deterministic_self_product_is_diagonal(seed in any::<u64>()) {
        let f = random_small(seed).determinize(None).unwrap().filter;
        let g = tensor_product(&f, &f);
        prop_assert!(g.vertices().iter().all(|&(v, w)| w == Some(v)));
    }
}

#[test]
fn fig3_pair_by_enumeration() {
    let (a, b) = (fig3_input(), fig3_minimizer());
    assert!(enumerate_simulation(&b, &a).holds());
    // outputs agree on every string up to length 3
    for w in words(a.observations(), 3) {
        let (x, y) = (trace(&a, &w), trace(&b, &w));
        if let Some(x) = x {
            assert!(y.unwrap().is_subset(&x), "{w:?}");
        }
    }
}

#[test]
fn fig3_output_consistency_targets() {
    // every flagged (pair, color) inclusion holds, so the whole check holds
    let (a, b) = (fig3_input(), fig3_minimizer());
    assert!(check_output_consistency(&a, &b, None).unwrap().holds);
    assert!(output_simulates(&a, &b, None).unwrap().holds);
    assert!(enumerate_simulation(&a, &b).holds());
}

#[test]
fn fig3_cut_edge_witness() {
    let mut d = FilterDesc::from(&fig3_minimizer());
    d.transitions.retain(|t| !(t.from == "p1" && t.to == "+"));
    let cut = d.build().unwrap();
    let v = output_simulates(&cut, &fig3_input(), None).unwrap();
    let fail = v.failure.unwrap();
    assert_eq!(fail.kind, FailureKind::LanguageGap);
    assert_eq!(fail.witness, vec!["1".to_string(), "a".to_string()]);
    assert_eq!(
        enumerate_simulation(&cut, &fig3_input()).language_gap.unwrap().len(),
        2
    );
}

#[test]
fn fig3_recolor_violation() {
    let mut d = FilterDesc::from(&fig3_minimizer());
    for s in &mut d.states {
        if s.id == "p3" {
            s.colors = vec!["pink".into()];
        }
    }
    let bad = d.build().unwrap();
    let v = output_simulates(&bad, &fig3_input(), None).unwrap();
    let fail = v.failure.unwrap();
    assert_eq!(fail.kind, FailureKind::OutputViolation);
    let oracle = enumerate_simulation(&bad, &fig3_input());
    assert_eq!(oracle.output_violation.unwrap().len(), fail.witness.len());
    // the witness passes through p3 on the minimizer side
    let reached = bad.reached_states(&fail.witness[..1]).unwrap();
    assert!(reached.reached.contains(&bad.state_index("p3").unwrap()));
}
