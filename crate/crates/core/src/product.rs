//! Tensor product of two filters and the output-simulation decision.
//!
//! `F'` output-simulates `F` when every string that survives on `F` also
//! survives on `F'` (language inclusion), and every such string's output on
//! `F'` is a subset of its output on `F` (output consistency). Both parts are
//! reduced to automaton inclusion over the product graph `F ⊗ F'`, whose
//! second coordinate may be the placeholder `⊖` marking that `F'` has crashed.
//!
//! Colors of the two filters are matched by name.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::Result;
use crate::filter::Filter;
use crate::nfa::{filter_to_nfa, intersect, is_equivalent, is_included, union_alphabet, Nfa};

/// Reachable part of `F1 ⊗ F2`. A vertex is `(v, Some(w))`, or `(v, None)`
/// when the second filter has crashed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductGraph {
    vertices: Vec<(usize, Option<usize>)>,
    names: Vec<String>,
    initial: Vec<usize>,
    alphabet: Vec<String>,
    delta: Vec<Vec<Vec<usize>>>,
}

impl ProductGraph {
    pub fn vertices(&self) -> &[(usize, Option<usize>)] {
        &self.vertices
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn successors(&self, i: usize, y: usize) -> &[usize] {
        &self.delta[i][y]
    }

    pub fn has_crash_vertex(&self) -> bool {
        self.vertices.iter().any(|(_, w)| w.is_none())
    }

    /// Vertices whose second coordinate is `⊖`.
    pub fn crash_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&i| self.vertices[i].1.is_none())
            .collect()
    }

    /// Drops every `(v, ⊖)` vertex. Such vertices only lead to other `⊖`
    /// vertices, so the remainder stays reachable.
    pub fn without_crash_vertices(&self) -> ProductGraph {
        let mut remap = vec![usize::MAX; self.vertices.len()];
        let mut out = ProductGraph {
            vertices: Vec::new(),
            names: Vec::new(),
            initial: Vec::new(),
            alphabet: self.alphabet.clone(),
            delta: Vec::new(),
        };
        for (i, &(v, w)) in self.vertices.iter().enumerate() {
            if w.is_some() {
                remap[i] = out.vertices.len();
                out.vertices.push((v, w));
                out.names.push(self.names[i].clone());
            }
        }
        out.initial = self
            .initial
            .iter()
            .filter(|&&i| remap[i] != usize::MAX)
            .map(|&i| remap[i])
            .collect();
        for (i, row) in self.delta.iter().enumerate() {
            if remap[i] == usize::MAX {
                continue;
            }
            out.delta.push(
                row.iter()
                    .map(|ts| {
                        ts.iter()
                            .filter(|&&t| remap[t] != usize::MAX)
                            .map(|&t| remap[t])
                            .collect()
                    })
                    .collect(),
            );
        }
        out
    }

    /// The product read as an automaton accepting at `accepting`.
    pub fn to_nfa(&self, accepting: &[usize]) -> Nfa {
        let mut acc = vec![false; self.vertices.len()];
        for &i in accepting {
            acc[i] = true;
        }
        Nfa::from_parts(
            self.names.clone(),
            self.initial.clone(),
            self.alphabet.clone(),
            self.delta.clone(),
            acc,
        )
    }
}

/// Builds `F1 ⊗ F2` over the union alphabet, keeping only vertices
/// reachable from `V0(F1) × V0(F2)`.
pub fn tensor_product(f1: &Filter, f2: &Filter) -> ProductGraph {
    let alphabet = union_alphabet(f1.observations(), f2.observations());
    let in1: Vec<Option<usize>> = alphabet.iter().map(|y| f1.symbol_index(y)).collect();
    let in2: Vec<Option<usize>> = alphabet.iter().map(|y| f2.symbol_index(y)).collect();

    let mut index: HashMap<(usize, Option<usize>), usize> = HashMap::new();
    let mut vertices = Vec::new();
    for &v in f1.initial() {
        for &w in f2.initial() {
            index.insert((v, Some(w)), vertices.len());
            vertices.push((v, Some(w)));
        }
    }
    let initial: Vec<usize> = (0..vertices.len()).collect();
    let mut delta = Vec::new();
    let mut i = 0;
    while i < vertices.len() {
        let (v, w) = vertices[i];
        let mut row = Vec::with_capacity(alphabet.len());
        for y in 0..alphabet.len() {
            let mut targets = BTreeSet::new();
            if let Some(y1) = in1[y] {
                let next1 = f1.successors(v, y1);
                if !next1.is_empty() {
                    let next2: &[usize] = match (w, in2[y]) {
                        (Some(w), Some(y2)) => f2.successors(w, y2),
                        _ => &[],
                    };
                    for &v2 in next1 {
                        if next2.is_empty() {
                            targets.insert((v2, None));
                        } else {
                            for &w2 in next2 {
                                targets.insert((v2, Some(w2)));
                            }
                        }
                    }
                }
            }
            let ids: Vec<usize> = targets
                .into_iter()
                .map(|t| {
                    *index.entry(t).or_insert_with(|| {
                        vertices.push(t);
                        vertices.len() - 1
                    })
                })
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            row.push(ids);
        }
        delta.push(row);
        i += 1;
    }
    let names = vertices
        .iter()
        .map(|&(v, w)| match w {
            Some(w) => format!("({},{})", f1.state_name(v), f2.state_name(w)),
            None => format!("({},⊖)", f1.state_name(v)),
        })
        .collect();
    ProductGraph {
        vertices,
        names,
        initial,
        alphabet,
        delta,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    /// Some string survives on the simulated filter but crashes on the candidate.
    LanguageGap,
    /// Some string makes the candidate emit a color the simulated filter does not.
    OutputViolation,
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureKind::LanguageGap => write!(f, "LanguageGap"),
            FailureKind::OutputViolation => write!(f, "OutputViolation"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationFailure {
    pub kind: FailureKind,
    /// A shortest string exhibiting the failure.
    pub witness: Vec<String>,
    /// The offending color, for output violations.
    pub color: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationVerdict {
    pub holds: bool,
    pub failure: Option<SimulationFailure>,
}

impl SimulationVerdict {
    fn holds() -> Self {
        SimulationVerdict {
            holds: true,
            failure: None,
        }
    }

    fn fails(kind: FailureKind, witness: Vec<String>, color: Option<String>) -> Self {
        SimulationVerdict {
            holds: false,
            failure: Some(SimulationFailure {
                kind,
                witness,
                color,
            }),
        }
    }
}

/// Decides `L(f) ⊆ L(fp)`.
///
/// With `G = f ⊗ fp`: if no `(v, ⊖)` vertex exists the inclusion holds.
/// Otherwise `A` is `G` accepting at its `⊖` vertices, `B` is `fp` accepting
/// everywhere, and the inclusion holds iff `L(A) = L(A ∩ B)`.
pub fn check_language_inclusion(
    f: &Filter,
    fp: &Filter,
    cap: Option<usize>,
) -> Result<SimulationVerdict> {
    let g = tensor_product(f, fp);
    if !g.has_crash_vertex() {
        return Ok(SimulationVerdict::holds());
    }
    let a = g.to_nfa(&g.crash_vertices());
    let all: Vec<usize> = (0..fp.num_states()).collect();
    let b = filter_to_nfa(fp, &all);
    let ab = intersect(&a, &b);
    let eq = is_equivalent(&a, &ab, cap)?;
    Ok(match eq.witness {
        None => SimulationVerdict::holds(),
        Some(w) => SimulationVerdict::fails(FailureKind::LanguageGap, w, None),
    })
}

/// Decides output consistency, assuming language inclusion already holds.
///
/// For every product vertex `(v, w)` and every color `o` of `w` missing from
/// `v`, strings reaching `(v, w)` must all reach some state of `f` carrying
/// `o`. This is the inclusion `L(M) ⊆ L(N)` with `M` the product accepting
/// at `(v, w)` and `N` the filter `f` accepting at its `o`-colored states.
/// On failure the shortest witness over all offending vertices is reported
/// (earliest vertex and color on ties).
pub fn check_output_consistency(
    f: &Filter,
    fp: &Filter,
    cap: Option<usize>,
) -> Result<SimulationVerdict> {
    let g = tensor_product(f, fp).without_crash_vertices();
    let m_base = g.to_nfa(&[]);
    let n_base = filter_to_nfa(f, &[]);
    let mut n_by_color: HashMap<&str, Nfa> = HashMap::new();
    let mut best: Option<(Vec<String>, String)> = None;

    for (i, &(v, w)) in g.vertices().iter().enumerate() {
        let w = w.expect("crash vertices removed");
        let have: BTreeSet<&str> = f
            .coloring(v)
            .iter()
            .map(|&c| f.colors()[c].as_str())
            .collect();
        for &c in fp.coloring(w) {
            let o = fp.colors()[c].as_str();
            if have.contains(o) {
                continue;
            }
            let n = n_by_color.entry(o).or_insert_with(|| {
                let acc: Vec<usize> = (0..f.num_states())
                    .filter(|&u| f.coloring(u).iter().any(|&k| f.colors()[k] == o))
                    .collect();
                n_base.with_accepting(&acc)
            });
            let m = m_base.with_accepting(&[i]);
            let r = is_included(&m, n, cap)?;
            if let Some(wit) = r.witness {
                let shorter = best.as_ref().is_none_or(|(b, _)| wit.len() < b.len());
                if shorter {
                    best = Some((wit, o.to_string()));
                }
            }
        }
    }
    Ok(match best {
        None => SimulationVerdict::holds(),
        Some((w, o)) => SimulationVerdict::fails(FailureKind::OutputViolation, w, Some(o)),
    })
}

/// Whether `fp` output-simulates `f`. Both filters are trimmed first.
pub fn output_simulates(fp: &Filter, f: &Filter, cap: Option<usize>) -> Result<SimulationVerdict> {
    let f = f.trim();
    let fp = fp.trim();
    let li = check_language_inclusion(&f, &fp, cap)?;
    if !li.holds {
        return Ok(li);
    }
    check_output_consistency(&f, &fp, cap)
}
