use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use pfilter::dot::to_dot;
use pfilter::families::{
    donut_world, fig3_input, fig3_minimizer, prime_family, prime_family_minimizer,
    PrimeFamilyParams,
};
use pfilter::format::{emit_filter, parse_filter, parse_nfa};
use pfilter::minimize::{minimize_det, minimize_nondet, MinimizationResult, SearchBudget};
use pfilter::random::{random_filter, rng, RandomSpec};
use pfilter::reductions::{from_dfa_union, from_nfa_universality};
use pfilter::{output_simulates, Error, Filter, Output};

/// Combinatorial filters: validation, simulation checks and minimization.
#[derive(Parser, Debug)]
#[command(name = "pfilter", version, about)]
struct Cli {
    /// Write results to this file instead of standard output.
    #[arg(long, short, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a filter file is well formed.
    Validate { file: PathBuf },
    /// Run a string through a filter and print the reached states and colors.
    Trace {
        /// Symbols separated by spaces or commas, or run together.
        string: String,
        file: PathBuf,
    },
    /// Subset construction.
    Determinize {
        #[arg(long)]
        cap: Option<usize>,
        file: PathBuf,
    },
    /// Drop states that no string reaches.
    Trim { file: PathBuf },
    /// Does the first filter output-simulate the second?
    CheckSim {
        #[arg(long)]
        cap: Option<usize>,
        candidate: PathBuf,
        input: PathBuf,
    },
    /// Find a smallest filter that output-simulates the input.
    Minimize {
        #[arg(long, value_enum, default_value_t = Mode::Det)]
        mode: Mode,
        /// Only look for minimizers with at most this many states.
        #[arg(long)]
        max_k: Option<usize>,
        /// Seconds before the search gives up.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Search nodes before the search gives up.
        #[arg(long)]
        candidate_cap: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// State cap for the determinization step of the det mode.
        #[arg(long)]
        determinize_cap: Option<usize>,
        file: PathBuf,
    },
    /// Graphviz rendering of a filter.
    ExportDot { file: PathBuf },
    /// Generate a built-in filter.
    #[command(subcommand)]
    Gen(Gen),
    /// Build the filter of a hardness reduction from automata.
    #[command(subcommand)]
    Reduce(Reduce),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Nondet,
    Det,
}

#[derive(Subcommand, Debug)]
enum Gen {
    /// Prime-cycle family with `rows` rows, or its deterministic minimizer.
    PrimeFamily {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        minimizer: bool,
    },
    /// The ten-state input filter or its nine-state minimizer.
    Fig3 {
        #[arg(value_enum)]
        which: Fig3,
    },
    /// Two agents in a three-region ring, watched by three beams.
    Donut,
    /// Seeded random filter.
    Random {
        #[arg(long)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        symbols: usize,
        #[arg(long, default_value_t = 2)]
        colors: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Fig3 {
    Input,
    Minimizer,
}

#[derive(Subcommand, Debug)]
enum Reduce {
    /// One-state minimizers exist iff the automaton is universal.
    NfaUniversality { file: PathBuf },
    /// One-state deterministic minimizers exist iff the union is universal.
    DfaUnion {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    detail: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExhausted | Error::CapExceeded { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            kind: e.kind(),
            detail: e.to_string(),
        }
    }
}

/// What a command produced: text for the output and the exit code.
struct Done {
    text: String,
    code: u8,
}

impl Done {
    fn ok(text: String) -> Self {
        Done { text, code: 0 }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        kind: "io",
        detail: format!("{}: {e}", path.display()),
    })
}

fn load(path: &Path) -> Result<Filter, Failure> {
    let text = read(path)?;
    parse_filter(&text).map_err(|e| Failure {
        detail: format!("{}: {e}", path.display()),
        ..Failure::from(e)
    })
}

fn braces<S: AsRef<str>>(items: &[S]) -> String {
    let names: Vec<&str> = items.iter().map(AsRef::as_ref).collect();
    format!("{{{}}}", names.join(","))
}

fn inputs(cmd: &Command) -> Vec<&Path> {
    match cmd {
        Command::Validate { file }
        | Command::Trace { file, .. }
        | Command::Determinize { file, .. }
        | Command::Trim { file }
        | Command::Minimize { file, .. }
        | Command::ExportDot { file } => vec![file],
        Command::CheckSim {
            candidate, input, ..
        } => vec![candidate, input],
        Command::Gen(_) => vec![],
        Command::Reduce(Reduce::NfaUniversality { file }) => vec![file],
        Command::Reduce(Reduce::DfaUnion { files }) => files.iter().collect(),
    }
    .into_iter()
    .map(PathBuf::as_path)
    .collect()
}

fn stats_footer(mode: Mode, jobs: usize, r: &MinimizationResult) -> String {
    let s = &r.stats;
    let mut lines = vec![
        format!("mode={}", if mode == Mode::Det { "det" } else { "nondet" }),
        format!("size={}", r.size),
        format!("lower_bound={}", s.lower_bound),
        format!("upper_bound={}", s.upper_bound),
        format!("proven_optimal={}", r.proven_optimal),
        format!("budget_exhausted={}", r.budget_exhausted),
    ];
    if mode == Mode::Det {
        lines.push(format!("determinized_states={}", s.determinized_states));
    }
    let levels: Vec<String> = s.levels_completed.iter().map(usize::to_string).collect();
    lines.push(format!("levels_completed=[{}]", levels.join(",")));
    // parallel runs visit nodes in a schedule-dependent order
    if jobs <= 1 {
        lines.push(format!("nodes={}", s.nodes));
        lines.push(format!("candidates_verified={}", s.candidates_verified));
    }
    lines.iter().map(|l| format!("# {l}\n")).collect()
}

fn run(cmd: Command) -> Result<Done, Failure> {
    for path in inputs(&cmd) {
        if !path.exists() || path.is_dir() {
            return Err(Failure {
                code: 2,
                kind: "io",
                detail: format!("{}: not a readable file", path.display()),
            });
        }
    }
    match cmd {
        Command::Validate { file } => {
            let f = load(&file)?;
            Ok(Done::ok(format!(
                "valid states={} symbols={} colors={} deterministic={} trim={}\n",
                f.num_states(),
                f.num_symbols(),
                f.num_colors(),
                f.is_deterministic(),
                f.is_trim()
            )))
        }
        Command::Trace { string, file } => {
            let f = load(&file)?;
            let word = f.parse_word(&string)?;
            let reached = f.reached(&word);
            let names: Vec<&str> = reached.iter().map(|&v| f.state_name(v)).collect();
            match f.output_indices(&word) {
                Output::Crash => Ok(Done {
                    text: "reached={}\ncolors=crash\n".into(),
                    code: 1,
                }),
                Output::Colors(cs) => Ok(Done::ok(format!(
                    "reached={}\ncolors={}\n",
                    braces(&names),
                    braces(&f.color_names(&cs))
                ))),
            }
        }
        Command::Determinize { cap, file } => {
            let f = load(&file)?;
            let d = f.determinize(cap)?;
            Ok(Done::ok(emit_filter(&d.filter, &[])))
        }
        Command::Trim { file } => Ok(Done::ok(emit_filter(&load(&file)?.trim(), &[]))),
        Command::CheckSim {
            cap,
            candidate,
            input,
        } => {
            let fp = load(&candidate)?;
            let f = load(&input)?;
            let v = output_simulates(&fp, &f, cap)?;
            match v.failure {
                None => Ok(Done::ok("holds\n".into())),
                Some(fail) => {
                    let mut text = format!(
                        "fails kind={} witness=\"{}\"",
                        fail.kind,
                        fail.witness.join(" ")
                    );
                    if let Some(c) = fail.color {
                        text.push_str(&format!(" color={c}"));
                    }
                    text.push('\n');
                    Ok(Done { text, code: 1 })
                }
            }
        }
        Command::Minimize {
            mode,
            max_k,
            time_limit,
            candidate_cap,
            jobs,
            determinize_cap,
            file,
        } => {
            let f = load(&file)?;
            if max_k == Some(0) || jobs == 0 {
                return Err(Error::InvalidArgument("--max-k and --jobs must be positive".into()).into());
            }
            let time_limit = match time_limit {
                Some(t) if !(t.is_finite() && t >= 0.0) => {
                    return Err(Error::InvalidArgument("--time-limit must be non-negative".into()).into())
                }
                t => t.map(Duration::from_secs_f64),
            };
            let budget = SearchBudget {
                max_states: max_k,
                candidate_cap,
                time_limit,
                jobs,
                determinize_cap,
            };
            let r = match mode {
                Mode::Det => minimize_det(&f, &budget)?,
                Mode::Nondet => minimize_nondet(&f, &budget)?,
            };
            let mut text = emit_filter(&r.minimizer, &[]);
            text.push_str(&stats_footer(mode, jobs, &r));
            let code = if r.budget_exhausted {
                3
            } else if max_k.is_some_and(|k| r.size > k) {
                1
            } else {
                0
            };
            Ok(Done { text, code })
        }
        Command::ExportDot { file } => Ok(Done::ok(to_dot(&load(&file)?))),
        Command::Gen(g) => {
            let (f, header) = match g {
                Gen::PrimeFamily { rows, minimizer } => {
                    let p = PrimeFamilyParams::new(rows)?;
                    let header = vec![format!(
                        "prime family rows={rows} primes={:?} n={} z={}",
                        p.primes,
                        p.n(),
                        p.z()
                    )];
                    let f = if minimizer {
                        prime_family_minimizer(rows)?
                    } else {
                        prime_family(rows)?
                    };
                    (f, header)
                }
                Gen::Fig3 { which: Fig3::Input } => (fig3_input(), vec![]),
                Gen::Fig3 {
                    which: Fig3::Minimizer,
                } => (fig3_minimizer(), vec![]),
                Gen::Donut => (donut_world(), vec![]),
                Gen::Random {
                    states,
                    symbols,
                    colors,
                    density,
                    seed,
                } => {
                    let spec = RandomSpec {
                        states,
                        symbols,
                        colors,
                        density,
                    };
                    let f = random_filter(&spec, &mut rng(seed))?;
                    (f, vec![format!("random seed={seed}")])
                }
            };
            Ok(Done::ok(emit_filter(&f, &header)))
        }
        Command::Reduce(Reduce::NfaUniversality { file }) => {
            let a = parse_nfa(&read(&file)?)?;
            let inst = from_nfa_universality(&a);
            Ok(Done::ok(emit_filter(&inst.filter, &inst.provenance())))
        }
        Command::Reduce(Reduce::DfaUnion { files }) => {
            let mut dfas = Vec::new();
            for path in &files {
                dfas.push(parse_nfa(&read(path)?)?);
            }
            match from_dfa_union(&dfas) {
                // the union is empty, so certainly not universal
                Err(Error::NoAcceptingState) => Err(Failure {
                    code: 1,
                    kind: "no-accepting-state",
                    detail: "the family accepts nothing, so its union is not universal".into(),
                }),
                Err(e) => Err(e.into()),
                Ok(inst) => Ok(Done::ok(emit_filter(&inst.filter, &inst.provenance()))),
            }
        }
    }
}

fn report(kind: &str, detail: &str) {
    eprintln!("error kind={kind} detail={detail:?}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            if code != 0 {
                let first = e.to_string();
                let first = first.lines().next().unwrap_or("").trim_start_matches("error: ");
                report("usage", first);
            }
            return ExitCode::from(code);
        }
    };
    let (text, code) = match run(cli.command) {
        Ok(d) => (d.text, d.code),
        Err(f) => {
            report(f.kind, &f.detail);
            return ExitCode::from(f.code);
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(detail) = written {
        report("io", &detail);
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
