use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ncgraph::io;
use ncgraph::puzzle::{classify_with_bindings, replay_witness};
use ncgraph::sweep::{cases, sweep, sweep_sequential};
use ncgraph::{
    bundled, classify, derive, enumerate_words, export_dot, game_gen, Grammar, NodeId, RoleMap,
    SampleMode, SelectionPolicy,
};

/// Node-replacement graph grammars with regular control.
#[derive(Parser)]
#[command(name = "ncgraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a grammar and print its diagnostics.
    Validate { grammar: String },
    /// Apply a production word to the start graph.
    Derive {
        grammar: String,
        /// Comma-separated production names.
        #[arg(long, value_delimiter = ',', required = true)]
        word: Vec<String>,
        /// `first` or `random:<seed>`.
        #[arg(long, default_value = "first", value_parser = parse_policy)]
        policy: SelectionPolicy,
        /// Write every intermediate graph as a JSON array.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Draw antiparallel edge pairs as one double-headed edge.
        #[arg(long)]
        merge_bidi: bool,
    },
    /// Sample a control word, derive it, and optionally check solvability.
    Generate {
        grammar: String,
        #[arg(long)]
        seed: u32,
        #[arg(long)]
        limit: u32,
        #[arg(long, value_enum, default_value_t = Mode::Literal)]
        mode: Mode,
        #[arg(long, default_value = "first", value_parser = parse_policy)]
        policy: SelectionPolicy,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the final graph as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        check_solvable: bool,
        /// Labels for begin, end, lock, key and neutral nodes.
        #[arg(long, default_value = "b,e,l,k,m", value_parser = parse_roles)]
        roles: RoleMap,
    },
    /// List every control word up to a length, shortest first.
    Enumerate {
        grammar: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Check a puzzle graph for a valid begin-to-end walk.
    Solve {
        graph: PathBuf,
        #[arg(long, default_value = "b,e,l,k,m", value_parser = parse_roles)]
        roles: RoleMap,
    },
    /// Generate plots for a range of seeds and report how many are sound.
    Sweep {
        grammar: String,
        #[arg(long, default_value_t = 100)]
        seeds: u32,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        limits: Vec<u32>,
        #[arg(long)]
        sequential: bool,
        #[arg(long, default_value = "b,e,l,k,m", value_parser = parse_roles)]
        roles: RoleMap,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Literal,
    Instance,
}

impl From<Mode> for SampleMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Literal => SampleMode::PerStar,
            Mode::Instance => SampleMode::PerInstance,
        }
    }
}

fn parse_policy(s: &str) -> Result<SelectionPolicy, String> {
    match s.split_once(':') {
        None if s == "first" => Ok(SelectionPolicy::FirstById),
        Some(("random", seed)) => seed
            .parse()
            .map(SelectionPolicy::SeededRandom)
            .map_err(|e| format!("bad seed {seed:?}: {e}")),
        _ => Err(format!("expected `first` or `random:<seed>`, got {s:?}")),
    }
}

fn parse_roles(s: &str) -> Result<RoleMap, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [b, e, l, k, m] = parts[..] else {
        return Err("expected five labels: begin,end,lock,key,neutral".into());
    };
    let one = |x: &str| [x.to_string()].into_iter().collect();
    Ok(RoleMap {
        begin: one(b),
        end: one(e),
        lock: one(l),
        key: one(k),
        neutral: one(m),
    })
}

/// A file path, or the name of a bundled grammar.
fn grammar_arg(arg: &str) -> Result<Grammar> {
    let path = Path::new(arg);
    if path.exists() {
        return io::load_grammar(path).with_context(|| format!("loading {arg}"));
    }
    bundled::bundled_grammars()
        .remove(arg)
        .ok_or_else(|| anyhow!("no grammar file or bundled grammar named {arg:?}"))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Validate { grammar } => {
            let g = grammar_arg(&grammar)?;
            let diagnostics = g.validate();
            for d in &diagnostics {
                println!("{d}");
            }
            if diagnostics.is_empty() {
                println!(
                    "ok: {} productions, control {}",
                    g.productions.len(),
                    g.control
                );
            }
            Ok(diagnostics.is_empty())
        }
        Command::Derive {
            grammar,
            word,
            policy,
            trace,
            dot,
            merge_bidi,
        } => {
            let g = grammar_arg(&grammar)?;
            let t = derive(&g, &word, policy)?;
            if let Some(p) = trace {
                write(&p, &io::trace_to_json(&t))?;
            }
            if let Some(p) = dot {
                write(&p, &export_dot(t.final_graph(), merge_bidi))?;
            }
            let f = t.final_graph();
            println!("nodes: {}, edges: {}", f.node_count(), f.edge_count());
            println!(
                "in-control: {}, terminal: {}",
                t.word_in_control, t.final_terminal
            );
            Ok(t.in_language())
        }
        Command::Generate {
            grammar,
            seed,
            limit,
            mode,
            policy,
            dot,
            json,
            check_solvable,
            roles,
        } => {
            let g = grammar_arg(&grammar)?;
            let (word, t) = game_gen(&g, seed, limit, mode.into(), policy)?;
            let f = t.final_graph();
            println!("word: {}", word.join(","));
            println!(
                "in-control: {}, terminal: {}",
                t.word_in_control, t.final_terminal
            );
            if let Some(p) = dot {
                write(&p, &export_dot(f, true))?;
            }
            if let Some(p) = json {
                write(&p, &(io::graph_to_json(f) + "\n"))?;
            }
            if !check_solvable {
                return Ok(true);
            }
            let report = classify(f, &roles)?.solve();
            println!("{}", serde_json::to_string(&report)?);
            println!("solvable: {}", report.solvable);
            Ok(report.solvable)
        }
        Command::Enumerate { grammar, max_len } => {
            let g = grammar_arg(&grammar)?;
            if max_len > ncgraph::control::MAX_ENUMERATION_LEN {
                eprintln!(
                    "note: length capped at {}",
                    ncgraph::control::MAX_ENUMERATION_LEN
                );
            }
            for w in enumerate_words(&g.control, max_len) {
                println!("{}", w.join(","));
            }
            Ok(true)
        }
        Command::Solve { graph, roles } => {
            let text = std::fs::read_to_string(&graph)
                .with_context(|| format!("reading {}", graph.display()))?;
            let g = io::parse_graph(&text)?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let puzzle = match value.get("bindings") {
                Some(b) => {
                    let pairs: Vec<(usize, usize)> = serde_json::from_value(b.clone())
                        .context("bindings must be [key, lock] id pairs")?;
                    let pairs: Vec<_> = pairs
                        .into_iter()
                        .map(|(k, l)| (NodeId(k), NodeId(l)))
                        .collect();
                    classify_with_bindings(&g, &roles, &pairs)?
                }
                None => classify(&g, &roles)?,
            };
            for d in &puzzle.diagnostics {
                eprintln!("warning: {d}");
            }
            let report = puzzle.solve();
            if report.solvable {
                replay_witness(&puzzle, &report.witness).map_err(|e| anyhow!(e))?;
            }
            println!("{}", serde_json::to_string(&report)?);
            Ok(report.solvable)
        }
        Command::Sweep {
            grammar,
            seeds,
            limits,
            sequential,
            roles,
        } => {
            let g = grammar_arg(&grammar)?;
            if limits.is_empty() {
                bail!("no limits given");
            }
            let work = cases(
                0..seeds,
                &limits,
                &[SampleMode::PerStar, SampleMode::PerInstance],
            );
            let out = if sequential {
                sweep_sequential(&g, &work, SelectionPolicy::FirstById, &roles)
            } else {
                sweep(&g, &work, SelectionPolicy::FirstById, &roles)
            };
            let mut sound = 0;
            for o in &out {
                if o.is_sound() {
                    sound += 1;
                    continue;
                }
                let why = o.error.clone().unwrap_or_else(|| "unsolvable".into());
                println!(
                    "seed {} limit {} {:?}: {why}",
                    o.case.seed, o.case.limit, o.case.mode
                );
            }
            println!("{sound}/{} sound", out.len());
            Ok(sound == out.len())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
