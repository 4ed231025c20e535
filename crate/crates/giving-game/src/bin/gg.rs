//! `gg`: command-line surface for the giving-game library.
//!
//! Subcommands: simulate, branches, frame, cycles, decide, reduce, gen.
//! Output is byte-stable for fixed inputs and flags. Exit codes: 0 on
//! success (for `decide`: the pair is a stability pair), 1 `decide` no,
//! 2 `decide` unknown (cap hit) or a usage error, 3 operational failure
//! (unreadable file, bad JSON, illegal step, cap on other subcommands).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use giving_game::engine::{enumerate_branches, play, ChoicePolicy, SearchLimits, Trace};
use giving_game::frame::{elementary_cycles, frame_of};
use giving_game::generate::{generate, GeneratorSpec};
use giving_game::io::{matrix_from_json, matrix_to_json, trace_from_json, trace_to_json};
use giving_game::matrix::{AgentId, Pair, PreferenceMatrix};
use giving_game::render::{cycle_string, matrix_text, pair_string, spaced_path, summary_string};
use giving_game::stability::{
    classify_pair, cycle_decomposition, decide_pair, reduce_to_normal_form, Answer, PairClass,
};

#[derive(Parser)]
#[command(name = "gg", version, about = "Simulate and analyze giving games")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Play one game and print the path, boundary, pair, and summary.
    Simulate {
        /// Matrix JSON file.
        #[arg(long, value_name = "PATH")]
        matrix: PathBuf,
        /// Label of the agent that holds the token first.
        #[arg(long, value_name = "LABEL")]
        start: String,
        /// first | random[:SEED] | script:PATH. `random` without a seed
        /// reads GG_SEED. A script file lists receiver labels consumed one
        /// per choice point (forced steps consume none).
        #[arg(long, value_name = "SPEC", default_value = "first")]
        policy: String,
        /// Stop after this many steps if no boundary is reached.
        #[arg(long, value_name = "N", default_value_t = 10_000)]
        max_steps: usize,
        /// Print a matrix snapshot after every step (text format only).
        #[arg(long)]
        snapshots: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write output here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Enumerate every distinct run from a start agent.
    Branches {
        #[arg(long, value_name = "PATH")]
        matrix: PathBuf,
        #[arg(long, value_name = "LABEL")]
        start: String,
        /// Per-branch step limit.
        #[arg(long, value_name = "N", default_value_t = 10_000)]
        max_steps: usize,
        /// Abort once more branches than this complete.
        #[arg(long, value_name = "N", default_value_t = 1_000_000)]
        branch_cap: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Blue-cell digraph: edges, equivalence classes, condensation.
    Frame {
        #[arg(long, value_name = "PATH")]
        matrix: PathBuf,
        /// text, json, or dot (frame digraph plus class condensation).
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Elementary cycles of the frame with twin gaps, order, and poles.
    Cycles {
        #[arg(long, value_name = "PATH")]
        matrix: PathBuf,
        /// Abort once more cycles than this are found.
        #[arg(long, value_name = "N", default_value_t = 1_000_000)]
        cycle_cap: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Is {X,Y} a stability pair of the game from the start agent?
    /// Exit code carries the verdict: 0 yes, 1 no, 2 unknown.
    Decide {
        #[arg(long, value_name = "PATH")]
        matrix: PathBuf,
        #[arg(long, value_name = "LABEL")]
        start: String,
        /// The pair, as two labels: X,Y
        #[arg(long, value_name = "X,Y")]
        pair: String,
        /// Abort the exhaustive search after this many stabilized branches.
        #[arg(long, value_name = "N", default_value_t = 1_000_000)]
        branch_cap: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Reduce a recorded trace to normal form and decompose it into cycles.
    Reduce {
        #[arg(long, value_name = "PATH")]
        matrix: PathBuf,
        /// Trace JSON file (as written by `simulate --format json`).
        #[arg(long, value_name = "PATH")]
        trace: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Generate a matrix: trivial:N | random:N,MAX,SEED | turquoise:K |
    /// fixture:NAME. Output is matrix JSON.
    Gen {
        /// Generator spec string.
        #[arg(value_name = "SPEC")]
        spec: String,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok((output, code)) => {
            print!("{output}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cmd: Cmd) -> Result<(String, u8)> {
    match cmd {
        Cmd::Simulate {
            matrix,
            start,
            policy,
            max_steps,
            snapshots,
            format,
            out,
        } => {
            let m = load_matrix(&matrix)?;
            let start = m.agent_by_label(&start)?;
            let policy = parse_policy(&policy, &m)?;
            let t = play(&m, start, &policy, max_steps)?;
            let output = match format {
                Format::Json => trace_to_json(&t),
                Format::Text => simulate_text(&m, &t, snapshots),
                Format::Dot => bail!("dot output is only available for the frame subcommand"),
            };
            finish(output, &out)
        }
        Cmd::Branches {
            matrix,
            start,
            max_steps,
            branch_cap,
            format,
            out,
        } => {
            let m = load_matrix(&matrix)?;
            let start = m.agent_by_label(&start)?;
            let limits = SearchLimits {
                branch_cap,
                ..SearchLimits::default()
            };
            let branches = enumerate_branches(&m, start, max_steps, &limits)?;
            let output = match format {
                Format::Json => {
                    let rows: Vec<serde_json::Value> = branches
                        .iter()
                        .map(|t| {
                            serde_json::json!({
                                "path": label_path(&m, t),
                                "pair": t.stability_pair().map(|p| pair_labels(&m, p)),
                                "truncated": t.truncated(),
                            })
                        })
                        .collect();
                    pretty(serde_json::json!({
                        "start": m.label(start),
                        "branches": rows,
                        "total": branches.len(),
                    }))
                }
                Format::Text => {
                    let mut s = String::new();
                    for (i, t) in branches.iter().enumerate() {
                        let outcome = match t.stability_pair() {
                            Some(p) => format!("pair {}", pair_string(&m, p)),
                            None => "truncated".to_string(),
                        };
                        s.push_str(&format!(
                            "branch {}: {}  {}\n",
                            i + 1,
                            spaced_path(t),
                            outcome
                        ));
                    }
                    s.push_str(&format!("total: {}\n", branches.len()));
                    s
                }
                Format::Dot => bail!("dot output is only available for the frame subcommand"),
            };
            finish(output, &out)
        }
        Cmd::Frame {
            matrix,
            format,
            out,
        } => {
            let m = load_matrix(&matrix)?;
            let f = frame_of(&m);
            let eq = f.equivalence_classes();
            let class_str = |ci: usize| {
                let members: Vec<&str> = eq.classes[ci].iter().map(|&a| f.label(a)).collect();
                format!("{{{}}}", members.join(","))
            };
            let output = match format {
                Format::Dot => format!("{}\n{}", f.dot(), f.condensation_dot(&eq)),
                Format::Json => pretty(serde_json::json!({
                    "agents": f.labels(),
                    "edges": f
                        .edges()
                        .map(|(x, y)| [f.label(x), f.label(y)])
                        .collect::<Vec<_>>(),
                    "classes": eq
                        .classes
                        .iter()
                        .map(|c| c.iter().map(|&a| f.label(a)).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "condensation": eq.edges.iter().copied().collect::<Vec<(usize, usize)>>(),
                })),
                Format::Text => {
                    let mut s = format!("agents: {}\n", f.labels().join(" "));
                    s.push_str("edges:\n");
                    for (x, y) in f.edges() {
                        s.push_str(&format!("  {} -> {}\n", f.label(x), f.label(y)));
                    }
                    s.push_str("classes:\n");
                    for ci in 0..eq.classes.len() {
                        s.push_str(&format!("  {}\n", class_str(ci)));
                    }
                    s.push_str("condensation:\n");
                    for &(a, b) in &eq.edges {
                        s.push_str(&format!("  {} -> {}\n", class_str(a), class_str(b)));
                    }
                    s
                }
            };
            finish(output, &out)
        }
        Cmd::Cycles {
            matrix,
            cycle_cap,
            format,
            out,
        } => {
            let m = load_matrix(&matrix)?;
            let f = frame_of(&m);
            let limits = SearchLimits {
                cycle_cap,
                ..SearchLimits::default()
            };
            let cycles = elementary_cycles(&f, &m, &limits)?;
            let output = match format {
                Format::Json => {
                    let rows: Vec<serde_json::Value> = cycles
                        .iter()
                        .map(|c| {
                            serde_json::json!({
                                "agents": c.agents.iter().map(|&a| m.label(a)).collect::<Vec<_>>(),
                                "twin_gaps": c.twin_gaps,
                                "order": c.order,
                                "poles": c.poles.iter().map(|&p| pair_labels(&m, p)).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    pretty(serde_json::json!({ "cycles": rows, "total": cycles.len() }))
                }
                Format::Text => {
                    let mut s = String::new();
                    for (i, c) in cycles.iter().enumerate() {
                        let gaps: Vec<String> = c.twin_gaps.iter().map(|g| g.to_string()).collect();
                        let poles: Vec<String> =
                            c.poles.iter().map(|&p| pair_string(&m, p)).collect();
                        s.push_str(&format!(
                            "cycle {}: {}  gaps ({})  order {}  poles {}\n",
                            i + 1,
                            cycle_string(&m, &c.agents),
                            gaps.join(","),
                            c.order,
                            poles.join(" "),
                        ));
                    }
                    s.push_str(&format!("total: {}\n", cycles.len()));
                    s
                }
                Format::Dot => bail!("dot output is only available for the frame subcommand"),
            };
            finish(output, &out)
        }
        Cmd::Decide {
            matrix,
            start,
            pair,
            branch_cap,
            format,
            out,
        } => {
            let m = load_matrix(&matrix)?;
            let start_id = m.agent_by_label(&start)?;
            let pair = parse_pair(&m, &pair)?;
            let class = classify_pair(&m, pair.lo(), pair.hi())?;
            let class_name = match class {
                PairClass::BluePair => "blue",
                PairClass::TurquoisePair { .. } => "turquoise",
                PairClass::WhitePair => "white",
            };
            let limits = SearchLimits {
                branch_cap,
                ..SearchLimits::default()
            };
            let verdict = decide_pair(&m, start_id, pair, &limits)?;
            let (answer, code) = match verdict.answer {
                Answer::Yes => ("yes", 0),
                Answer::No => ("no", 1),
                Answer::Unknown => ("unknown", 2),
            };
            let output = match format {
                Format::Json => pretty(serde_json::json!({
                    "start": m.label(start_id),
                    "pair": pair_labels(&m, pair),
                    "class": class_name,
                    "answer": answer,
                    "witness": verdict.witness.as_ref().map(|t| label_path(&m, t)),
                    "branches_explored": verdict.branches_explored,
                    "max_depth": verdict.max_depth,
                })),
                Format::Text => {
                    let witness = match &verdict.witness {
                        Some(t) => spaced_path(t),
                        None => "none".to_string(),
                    };
                    format!(
                        "start: {}\npair: {} ({})\nanswer: {}\nwitness: {}\nbranches explored: {}\n",
                        m.label(start_id),
                        pair_string(&m, pair),
                        class_name,
                        answer,
                        witness,
                        verdict.branches_explored,
                    )
                }
                Format::Dot => bail!("dot output is only available for the frame subcommand"),
            };
            emit(&output, &out)?;
            Ok((String::new(), code))
        }
        Cmd::Reduce {
            matrix,
            trace,
            format,
            out,
        } => {
            let m = load_matrix(&matrix)?;
            let raw = fs::read_to_string(&trace)
                .with_context(|| format!("reading {}", trace.display()))?;
            let t = trace_from_json(&m, &raw)?;
            let normal = reduce_to_normal_form(&m, &t)?;
            let pair = normal
                .stability_pair()
                .context("reduced trace lost its boundary")?;
            let d = cycle_decomposition(&normal, pair)?;
            let output = match format {
                Format::Json => pretty(serde_json::json!({
                    "input_path": label_path(&m, &t),
                    "normal_form": label_path(&m, &normal),
                    "pair": pair_labels(&m, pair),
                    "decomposition": d
                        .cycles
                        .iter()
                        .map(|(c, power)| {
                            serde_json::json!({
                                "cycle": c.agents.iter().map(|&a| m.label(a)).collect::<Vec<_>>(),
                                "power": power,
                            })
                        })
                        .collect::<Vec<_>>(),
                    "closing_step": d.closing_step,
                })),
                Format::Text => {
                    let items: Vec<String> = d
                        .cycles
                        .iter()
                        .map(|(c, power)| format!("({}, {})", cycle_string(&m, &c.agents), power))
                        .collect();
                    format!(
                        "input path: {}\nnormal form: {}\npair: {}\ndecomposition: [{}]\nclosing step: {}\n",
                        spaced_path(&t),
                        spaced_path(&normal),
                        pair_string(&m, pair),
                        items.join(", "),
                        if d.closing_step { "yes" } else { "no" },
                    )
                }
                Format::Dot => bail!("dot output is only available for the frame subcommand"),
            };
            finish(output, &out)
        }
        Cmd::Gen { spec, out } => {
            let spec = GeneratorSpec::from_str(&spec)?;
            let m = generate(&spec)?;
            finish(matrix_to_json(&m), &out)
        }
    }
}

fn load_matrix(path: &PathBuf) -> Result<PreferenceMatrix> {
    let raw = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(matrix_from_json(&raw)?)
}

fn parse_policy(spec: &str, m: &PreferenceMatrix) -> Result<ChoicePolicy> {
    if spec == "first" {
        return Ok(ChoicePolicy::FirstByIndex);
    }
    if spec == "random" {
        let seed =
            std::env::var("GG_SEED").context("policy `random` without a seed needs GG_SEED set")?;
        let seed: u64 = seed
            .parse()
            .with_context(|| format!("GG_SEED {seed:?} is not a u64"))?;
        return Ok(ChoicePolicy::SeededRandom(seed));
    }
    if let Some(seed) = spec.strip_prefix("random:") {
        let seed: u64 = seed
            .parse()
            .with_context(|| format!("random seed {seed:?} is not a u64"))?;
        return Ok(ChoicePolicy::SeededRandom(seed));
    }
    if let Some(path) = spec.strip_prefix("script:") {
        let raw = fs::read_to_string(path).with_context(|| format!("reading script {path}"))?;
        let picks = raw
            .split_whitespace()
            .map(|l| m.agent_by_label(l))
            .collect::<giving_game::Result<Vec<AgentId>>>()?;
        return Ok(ChoicePolicy::Scripted(picks));
    }
    bail!("unknown policy {spec:?}; expected first, random[:SEED], or script:PATH")
}

fn parse_pair(m: &PreferenceMatrix, spec: &str) -> Result<Pair> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let [x, y] = parts.as_slice() else {
        bail!("pair must be two labels separated by a comma, got {spec:?}");
    };
    let a = m.agent_by_label(x)?;
    let b = m.agent_by_label(y)?;
    if a == b {
        bail!("pair needs two distinct agents, got {x:?} twice");
    }
    Ok(Pair::new(a, b))
}

fn simulate_text(m: &PreferenceMatrix, t: &Trace, snapshots: bool) -> String {
    let mut s = String::new();
    if snapshots {
        let mut cur = m.clone();
        s.push_str(&format!(
            "initial matrix (holder {}):\n",
            m.label(t.start())
        ));
        s.push_str(&matrix_text(&cur, Some(t.start())));
        s.push('\n');
        for (i, st) in t.steps().iter().enumerate() {
            // The step bumps the twin cell (receiver, submitter).
            let v = cur.value(st.receiver, st.submitter);
            cur.set(st.receiver, st.submitter, v + 1)
                .expect("twin cell is off-diagonal");
            s.push_str(&format!(
                "after step {} ({} -> {}):\n",
                i + 1,
                m.label(st.submitter),
                m.label(st.receiver)
            ));
            s.push_str(&matrix_text(&cur, Some(st.receiver)));
            s.push('\n');
        }
    }
    s.push_str(&format!("path: {}\n", spaced_path(t)));
    match t.boundary() {
        Some(b) => {
            let pair = t.stability_pair().expect("boundary implies pair");
            s.push_str(&format!("boundary: {b}\n"));
            s.push_str(&format!("pair: {}\n", pair_string(m, pair)));
        }
        None => {
            s.push_str("boundary: none\n");
            s.push_str("pair: none\n");
        }
    }
    s.push_str(&format!("summary: {}\n", summary_string(t)));
    s
}

fn label_path(m: &PreferenceMatrix, t: &Trace) -> Vec<String> {
    t.agents().iter().map(|&a| m.label(a).to_string()).collect()
}

fn pair_labels(m: &PreferenceMatrix, p: Pair) -> [String; 2] {
    [m.label(p.lo()).to_string(), m.label(p.hi()).to_string()]
}

fn pretty(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("plain data serializes");
    s.push('\n');
    s
}

fn emit(output: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, output).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{output}"),
    }
    Ok(())
}

fn finish(output: String, out: &Option<PathBuf>) -> Result<(String, u8)> {
    match out {
        Some(path) => {
            fs::write(path, &output).with_context(|| format!("writing {}", path.display()))?;
            Ok((String::new(), 0))
        }
        None => Ok((output, 0)),
    }
}
