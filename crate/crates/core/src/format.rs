//! Text formats for filters and automata.
//!
//! Both are TOML documents. A filter file looks like
//!
//! ```text
//! # optional comment lines, ignored by the parser
//! observations = ["a", "b"]
//! colors = ["red", "cyan"]
//! initial = ["s0"]
//!
//! [[states]]
//! id = "s0"
//! colors = ["red"]
//!
//! [[transitions]]
//! from = "s0"
//! to = "s0"
//! symbols = ["a", "b"]
//! ```
//!
//! Automaton files use the same layout, with a top-level `accepting` list of
//! state ids in place of `colors`, and `[[states]]` entries carrying only `id`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::{validate, Filter};
use crate::nfa::{validate_nfa, Nfa};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDesc {
    pub id: String,
    pub colors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDesc {
    pub from: String,
    pub to: String,
    pub symbols: Vec<String>,
}

/// Unvalidated filter description, as read from or written to a file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterDesc {
    pub observations: Vec<String>,
    pub colors: Vec<String>,
    pub initial: Vec<String>,
    #[serde(default)]
    pub states: Vec<StateDesc>,
    #[serde(default)]
    pub transitions: Vec<TransitionDesc>,
}

impl FilterDesc {
    pub fn new<S: AsRef<str>, C: AsRef<str>>(observations: &[S], colors: &[C]) -> Self {
        FilterDesc {
            observations: observations.iter().map(|s| s.as_ref().to_string()).collect(),
            colors: colors.iter().map(|s| s.as_ref().to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn state<C: AsRef<str>>(&mut self, id: impl Into<String>, colors: &[C]) -> &mut Self {
        self.states.push(StateDesc {
            id: id.into(),
            colors: colors.iter().map(|c| c.as_ref().to_string()).collect(),
        });
        self
    }

    pub fn initial(&mut self, id: impl Into<String>) -> &mut Self {
        self.initial.push(id.into());
        self
    }

    pub fn edge<S: AsRef<str>>(
        &mut self,
        from: impl Into<String>,
        to: impl Into<String>,
        symbols: &[S],
    ) -> &mut Self {
        self.transitions.push(TransitionDesc {
            from: from.into(),
            to: to.into(),
            symbols: symbols.iter().map(|s| s.as_ref().to_string()).collect(),
        });
        self
    }

    pub fn build(&self) -> Result<Filter> {
        validate(self)
    }
}

impl From<&Filter> for FilterDesc {
    fn from(f: &Filter) -> Self {
        let states = (0..f.num_states())
            .map(|v| StateDesc {
                id: f.state_name(v).to_string(),
                colors: f
                    .coloring(v)
                    .iter()
                    .map(|&c| f.colors()[c].clone())
                    .collect(),
            })
            .collect();
        let transitions = f
            .edges()
            .map(|((v, w), ys)| TransitionDesc {
                from: f.state_name(v).to_string(),
                to: f.state_name(w).to_string(),
                symbols: ys.iter().map(|&y| f.observations()[y].clone()).collect(),
            })
            .collect();
        FilterDesc {
            observations: f.observations().to_vec(),
            colors: f.colors().to_vec(),
            initial: f
                .initial()
                .iter()
                .map(|&v| f.state_name(v).to_string())
                .collect(),
            states,
            transitions,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NfaStateDesc {
    pub id: String,
}

/// Unvalidated automaton description.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NfaDesc {
    pub observations: Vec<String>,
    pub initial: Vec<String>,
    #[serde(default)]
    pub accepting: Vec<String>,
    #[serde(default)]
    pub states: Vec<NfaStateDesc>,
    #[serde(default)]
    pub transitions: Vec<TransitionDesc>,
}

impl NfaDesc {
    pub fn new<S: AsRef<str>>(observations: &[S]) -> Self {
        NfaDesc {
            observations: observations.iter().map(|s| s.as_ref().to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn state(&mut self, id: impl Into<String>) -> &mut Self {
        self.states.push(NfaStateDesc { id: id.into() });
        self
    }

    pub fn initial(&mut self, id: impl Into<String>) -> &mut Self {
        self.initial.push(id.into());
        self
    }

    pub fn accepting(&mut self, id: impl Into<String>) -> &mut Self {
        self.accepting.push(id.into());
        self
    }

    pub fn edge<S: AsRef<str>>(
        &mut self,
        from: impl Into<String>,
        to: impl Into<String>,
        symbols: &[S],
    ) -> &mut Self {
        self.transitions.push(TransitionDesc {
            from: from.into(),
            to: to.into(),
            symbols: symbols.iter().map(|s| s.as_ref().to_string()).collect(),
        });
        self
    }

    pub fn build(&self) -> Result<Nfa> {
        validate_nfa(self)
    }
}

impl From<&Nfa> for NfaDesc {
    fn from(n: &Nfa) -> Self {
        let mut transitions = Vec::new();
        for v in 0..n.num_states() {
            // group symbols by target to mirror the filter layout
            let mut by_target: std::collections::BTreeMap<usize, Vec<String>> = Default::default();
            for y in 0..n.alphabet().len() {
                for &w in n.successors(v, y) {
                    by_target
                        .entry(w)
                        .or_default()
                        .push(n.alphabet()[y].clone());
                }
            }
            for (w, symbols) in by_target {
                transitions.push(TransitionDesc {
                    from: n.state_name(v).to_string(),
                    to: n.state_name(w).to_string(),
                    symbols,
                });
            }
        }
        NfaDesc {
            observations: n.alphabet().to_vec(),
            initial: n
                .initial()
                .iter()
                .map(|&v| n.state_name(v).to_string())
                .collect(),
            accepting: (0..n.num_states())
                .filter(|&v| n.is_accepting(v))
                .map(|v| n.state_name(v).to_string())
                .collect(),
            states: (0..n.num_states())
                .map(|v| NfaStateDesc {
                    id: n.state_name(v).to_string(),
                })
                .collect(),
            transitions,
        }
    }
}

pub fn parse_filter_desc(text: &str) -> Result<FilterDesc> {
    toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))
}

pub fn parse_filter(text: &str) -> Result<Filter> {
    validate(&parse_filter_desc(text)?)
}

pub fn parse_nfa(text: &str) -> Result<Nfa> {
    let desc: NfaDesc = toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))?;
    validate_nfa(&desc)
}

/// Serializes a filter. Each line of `header` is emitted as a `#` comment.
pub fn emit_filter(f: &Filter, header: &[String]) -> String {
    emit(&FilterDesc::from(f), header)
}

pub fn emit_nfa(n: &Nfa, header: &[String]) -> String {
    emit(&NfaDesc::from(n), header)
}

fn emit<T: Serialize>(value: &T, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    // Serializing these plain structs cannot fail.
    out.push_str(&toml::to_string(value).expect("serializable description"));
    out
}
