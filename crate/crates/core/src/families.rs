//! Concrete filters: a ten-state example with its nine-state minimizer, the
//! prime-cycle family with its deterministic minimizer, and a two-agent
//! donut world.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::filter::Filter;
use crate::format::FilterDesc;

/// Largest primorial the prime-family generators accept.
pub const PRIMORIAL_CAP: u64 = 1 << 20;

/// Parameters of the prime family with `r` rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFamilyParams {
    pub r: usize,
    /// The first `r` primes.
    pub primes: Vec<u64>,
}

impl PrimeFamilyParams {
    pub fn new(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("row count must be positive".into()));
        }
        let primes = first_primes(r);
        let mut prod: u64 = 1;
        for &p in &primes {
            prod = prod.saturating_mul(p);
            if prod > PRIMORIAL_CAP {
                return Err(Error::TooLarge {
                    what: "primorial",
                    max: PRIMORIAL_CAP as usize,
                });
            }
        }
        Ok(PrimeFamilyParams { r, primes })
    }

    /// `S(r)`, the sum of the first `r` primes.
    pub fn sum(&self) -> u64 {
        self.primes.iter().sum()
    }

    /// `P(r)`, the product of the first `r` primes.
    pub fn primorial(&self) -> u64 {
        self.primes.iter().product()
    }

    pub fn last_prime(&self) -> u64 {
        *self.primes.last().expect("r >= 1")
    }

    /// State count of [`prime_family`]: `2·S(r)+1`.
    pub fn n(&self) -> u64 {
        2 * self.sum() + 1
    }

    /// State count of [`prime_family_minimizer`]: `1+P(r)+p_r`.
    pub fn z(&self) -> u64 {
        1 + self.primorial() + self.last_prime()
    }
}

/// The first `r` primes, by trial division.
pub fn first_primes(r: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(r);
    let mut c = 2u64;
    while out.len() < r {
        if out.iter().take_while(|&&p| p * p <= c).all(|&p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

fn prime_alphabet_and_colors(params: &PrimeFamilyParams) -> (Vec<String>, Vec<String>) {
    let mut obs = vec!["a".to_string()];
    obs.extend((1..=params.r).map(|i| format!("x{i}")));
    let mut colors = vec!["black".to_string(), "white".to_string()];
    colors.extend((1..=params.last_prime()).map(|k| format!("o{k}")));
    (obs, colors)
}

/// Prime-cycle family with `r` rows. Row `i` is an `a`-cycle of `p_i` white
/// states `q{i}_{j}`, entered at `q{i}_1` from the black initial state `q0`.
/// Each `q{i}_{j}` has an `x{i}` edge to a child `p{i}_{j}` colored `o{j}`.
pub fn prime_family(r: usize) -> Result<Filter> {
    let params = PrimeFamilyParams::new(r)?;
    let (obs, colors) = prime_alphabet_and_colors(&params);
    let mut d = FilterDesc::new(&obs, &colors);
    d.state("q0", &["black"]).initial("q0");
    for (i, &p) in params.primes.iter().enumerate() {
        let i = i + 1;
        let xi = format!("x{i}");
        for j in 1..=p {
            d.state(format!("q{i}_{j}"), &["white"]);
            d.state(format!("p{i}_{j}"), &[format!("o{j}")]);
        }
        d.edge("q0", format!("q{i}_1"), &["a"]);
        for j in 1..=p {
            let next = if j == p { 1 } else { j + 1 };
            d.edge(format!("q{i}_{j}"), format!("q{i}_{next}"), &["a"]);
            d.edge(format!("q{i}_{j}"), format!("p{i}_{j}"), &[&xi]);
        }
    }
    d.build()
}

/// Deterministic minimizer of [`prime_family`]: black `r0`, an `a`-cycle
/// `r1 … r{P(r)}`, and sinks `s1 … s{p_r}` colored `o1 … o{p_r}`. State
/// `r{j}` sends `x{i}` to sink `((j-1) mod p_i)+1`.
pub fn prime_family_minimizer(r: usize) -> Result<Filter> {
    let params = PrimeFamilyParams::new(r)?;
    let (obs, colors) = prime_alphabet_and_colors(&params);
    let big_p = params.primorial();
    let mut d = FilterDesc::new(&obs, &colors);
    d.state("r0", &["black"]).initial("r0");
    for j in 1..=big_p {
        d.state(format!("r{j}"), &["white"]);
    }
    for k in 1..=params.last_prime() {
        d.state(format!("s{k}"), &[format!("o{k}")]);
    }
    d.edge("r0", "r1", &["a"]);
    for j in 1..=big_p {
        let next = if j == big_p { 1 } else { j + 1 };
        d.edge(format!("r{j}"), format!("r{next}"), &["a"]);
        for (i, &p) in params.primes.iter().enumerate() {
            let k = (j - 1) % p + 1;
            d.edge(format!("r{j}"), format!("s{k}"), &[format!("x{}", i + 1)]);
        }
    }
    d.build()
}

const FIG3_OBS: [&str; 15] = [
    "1", "2", "3", "4", "5", "6", "7", "a", "b", "c", "d", "e", "f", "g", "h",
];
const FIG3_COLORS: [&str; 4] = ["blue", "white", "pink", "green"];

/// A 10-state deterministic filter with no smaller deterministic minimizer.
pub fn fig3_input() -> Filter {
    let mut d = FilterDesc::new(&FIG3_OBS, &FIG3_COLORS);
    d.state("q0", &["blue"]).initial("q0");
    for i in 1..=7 {
        d.state(format!("q{i}"), &["white"]);
    }
    d.state("+", &["pink"]).state("-", &["green"]);
    for i in 1..=7 {
        d.edge("q0", format!("q{i}"), &[i.to_string()]);
    }
    let rows: [(&str, &[&str], &[&str]); 7] = [
        ("q1", &["a", "b", "c", "d", "e"], &[]),
        ("q2", &["d", "e", "f"], &["a"]),
        ("q3", &["f", "g", "h"], &["a", "d"]),
        ("q4", &["a", "b", "c", "g", "h"], &["d"]),
        ("q5", &["d", "e"], &["b", "f", "g"]),
        ("q6", &[], &["b", "f", "g", "c", "e", "h"]),
        ("q7", &["f"], &["a", "c", "e", "h"]),
    ];
    for (q, plus, minus) in rows {
        d.edge(q, "+", plus).edge(q, "-", minus);
    }
    d.build().expect("fig3 input is well formed")
}

/// A 9-state nondeterministic minimizer of [`fig3_input`].
pub fn fig3_minimizer() -> Filter {
    let mut d = FilterDesc::new(&FIG3_OBS, &FIG3_COLORS);
    d.state("p0", &["blue"]).initial("p0");
    for i in 1..=6 {
        d.state(format!("p{i}"), &["white"]);
    }
    d.state("+", &["pink"]).state("-", &["green"]);
    d.edge("p0", "p1", &["1", "4"])
        .edge("p0", "p2", &["1", "2", "5"])
        .edge("p0", "p3", &["2", "3", "7"])
        .edge("p0", "p4", &["3", "4"])
        .edge("p0", "p5", &["5", "6"])
        .edge("p0", "p6", &["6", "7"]);
    let rows: [(&str, &[&str], &[&str]); 6] = [
        ("p1", &["a", "b", "c"], &[]),
        ("p2", &["d", "e"], &[]),
        ("p3", &["f"], &["a"]),
        ("p4", &["g", "h"], &["d"]),
        ("p5", &[], &["b", "f", "g"]),
        ("p6", &[], &["c", "e", "h"]),
    ];
    for (p, plus, minus) in rows {
        d.edge(p, "+", plus).edge(p, "-", minus);
    }
    d.build().expect("fig3 minimizer is well formed")
}

/// Two indistinguishable agents in a ring of regions 0, 1, 2. Beam `a`
/// separates regions 0 and 1, `b` separates 1 and 2, `c` separates 2 and 0.
/// A beam reading moves one agent adjacent to that beam across it. States
/// are unordered region pairs, red when both agents share a region and cyan
/// otherwise; both agents start in region 0.
pub fn donut_world() -> Filter {
    let beams = [("a", 0u8, 1u8), ("b", 1, 2), ("c", 2, 0)];
    let name = |i: u8, j: u8| format!("{}{}", i.min(j), i.max(j));
    let mut d = FilterDesc::new(&["a", "b", "c"], &["red", "cyan"]);
    let mut configs = Vec::new();
    for i in 0..3u8 {
        for j in i..3u8 {
            configs.push((i, j));
            d.state(name(i, j), &[if i == j { "red" } else { "cyan" }]);
        }
    }
    d.initial(name(0, 0));
    for &(i, j) in &configs {
        for &(beam, x, y) in &beams {
            let cross = |r: u8| {
                if r == x {
                    Some(y)
                } else if r == y {
                    Some(x)
                } else {
                    None
                }
            };
            let mut targets = BTreeSet::new();
            if let Some(i2) = cross(i) {
                targets.insert(name(i2, j));
            }
            if let Some(j2) = cross(j) {
                targets.insert(name(i, j2));
            }
            for t in targets {
                d.edge(name(i, j), t, &[beam]);
            }
        }
    }
    d.build().expect("donut world is well formed").trim()
}
