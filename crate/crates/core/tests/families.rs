mod common;

use common::{enumerate_simulation, trace, words};
use pfilter::families::{
    donut_world, fig3_input, fig3_minimizer, prime_family, prime_family_minimizer,
    PrimeFamilyParams,
};
use pfilter::minimize::{compatibility_graph, minimize_det, SearchBudget};
use pfilter::output_simulates;

/// The first `r` primes, by sieving.
fn primes(r: usize) -> Vec<u64> {
    let limit = 100;
    let mut composite = vec![false; limit];
    let mut out = Vec::new();
    for i in 2..limit {
        if !composite[i] {
            out.push(i as u64);
            for j in (i * i..limit).step_by(i) {
                composite[j] = true;
            }
        }
    }
    out.truncate(r);
    out
}

#[test]
fn size_formulas() {
    for r in 1..=5 {
        let p = primes(r);
        let s: u64 = p.iter().sum();
        let prod: u64 = p.iter().product();
        let params = PrimeFamilyParams::new(r).unwrap();
        assert_eq!(params.primes, p);
        assert_eq!(params.n(), 2 * s + 1);
        assert_eq!(params.z(), 1 + prod + p[r - 1]);
        assert_eq!(prime_family(r).unwrap().num_states() as u64, 2 * s + 1);
        assert_eq!(
            prime_family_minimizer(r).unwrap().num_states() as u64,
            1 + prod + p[r - 1]
        );
    }
    let n: Vec<u64> = (1..=4).map(|r| PrimeFamilyParams::new(r).unwrap().n()).collect();
    assert_eq!(n, [5, 11, 21, 35]);
    let z: Vec<u64> = (1..=4).map(|r| PrimeFamilyParams::new(r).unwrap().z()).collect();
    assert_eq!(z, [5, 10, 36, 218]);
}

#[test]
fn prime_minimizer_simulates() {
    for r in 1..=4 {
        let f = prime_family(r).unwrap();
        let m = prime_family_minimizer(r).unwrap();
        assert!(m.is_deterministic());
        assert!(output_simulates(&m, &f, None).unwrap().holds, "r={r}");
        if r <= 3 {
            assert!(enumerate_simulation(&m, &f).holds());
        }
    }
}

#[test]
fn prime_trace_picks_the_shifted_child() {
    let f = prime_family(3).unwrap();
    let out = trace(&f, &["a", "a", "a", "x3"].map(String::from)).unwrap();
    assert_eq!(out, ["o3".to_string()].into());
}

#[test]
fn prime_deterministic_minimum() {
    for r in 1..=3 {
        let params = PrimeFamilyParams::new(r).unwrap();
        let res = minimize_det(&prime_family(r).unwrap(), &SearchBudget::unlimited()).unwrap();
        assert_eq!(res.size as u64, params.z(), "r={r}");
        assert!(res.proven_optimal);
    }
}

#[test]
fn prime_minimizer_white_cycle_is_pairwise_incompatible() {
    let m = prime_family_minimizer(2).unwrap();
    let g = compatibility_graph(&m).unwrap();
    let white: Vec<usize> = (0..m.num_states())
        .filter(|&v| m.color_names(m.coloring(v)) == ["white"])
        .collect();
    assert_eq!(white.len(), 6);
    for (i, &u) in white.iter().enumerate() {
        for &v in &white[i + 1..] {
            assert!(!g.compatible(u, v));
        }
    }
}

#[test]
fn fig3_shapes() {
    let (a, b) = (fig3_input(), fig3_minimizer());
    assert_eq!(a.num_states(), 10);
    assert_eq!(b.num_states(), 9);
    assert_eq!(a.color_names(a.coloring(a.state_index("q0").unwrap())), ["blue"]);
    assert!(output_simulates(&b, &a, None).unwrap().holds);
    for f in [&a, &b] {
        let res = minimize_det(f, &SearchBudget::unlimited()).unwrap();
        assert_eq!(res.size, 10);
    }
}

#[test]
fn donut() {
    let f = donut_world();
    let d = f.determinize(None).unwrap().filter;
    assert!(d.is_deterministic());
    for w in words(f.observations(), 6) {
        // beams far from both agents cannot fire, so some strings crash
        let out = trace(&f, &w);
        assert_eq!(out, trace(&d, &w));
        if let Some(out) = out {
            assert!(out.iter().all(|c| c == "red" || c == "cyan"));
        }
    }
    let res = minimize_det(&f, &SearchBudget::unlimited()).unwrap();
    assert_eq!(res.size, 4);
    assert!(res.proven_optimal);
    assert!(output_simulates(&res.minimizer, &f, None).unwrap().holds);
}

#[test]
fn refused_rows() {
    assert!(PrimeFamilyParams::new(0).is_err());
    assert!(PrimeFamilyParams::new(7).is_ok());
    assert!(PrimeFamilyParams::new(8).is_err());
}
