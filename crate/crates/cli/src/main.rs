//! `ktrace`: check and search Kleisli simulations, unroll systems, and query
//! trace semantics from the command line.
//!
//! Every command prints one JSON report on stdout. Exit status: 0 when the
//! property holds, 1 when it is refuted, 2 on usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ktrace::{
    apply_fpe, check_bwd, check_fwd, check_restrictions, find_bwd_bruteforce, find_fwd_rel,
    lift_inclusion_upto, lift_output, parse_system, parse_tree, parse_witness,
    prefix_lang, prob_inclusion_upto, render_tree, subdist_tree_prob, system_from_json,
    system_to_string, tree_inclusion_upto, witness_to_json, word_inclusion_exact, CheckReport,
    CylinderOracle, Direction, Exec, InclusionReport, LiftOutput, Monad, PrefixTree, Prob,
    RankedAlphabet, RestrictionFlags, Start, System, Verdict,
};

#[derive(Parser)]
#[command(name = "ktrace", version, about = "Kleisli simulations and infinite-trace oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Fwd,
    Bwd,
}

impl From<Dir> for Direction {
    fn from(d: Dir) -> Self {
        match d {
            Dir::Fwd => Direction::Forward,
            Dir::Bwd => Direction::Backward,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Restriction {
    Total,
    ImageFinite,
}

fn flags_of(list: &[Restriction]) -> RestrictionFlags {
    RestrictionFlags {
        total: list.contains(&Restriction::Total),
        image_finite: list.contains(&Restriction::ImageFinite),
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a system document against every invariant.
    Validate { system: PathBuf },
    /// Check a candidate simulation between two systems.
    CheckSim {
        /// Direction; defaults to the one recorded in the witness.
        #[arg(long, value_enum)]
        dir: Option<Dir>,
        #[arg(long)]
        witness: PathBuf,
        /// Restrictions the witness must also meet.
        #[arg(long, value_enum, value_delimiter = ',')]
        require: Vec<Restriction>,
        x: PathBuf,
        y: PathBuf,
    },
    /// Search for a simulation from X to Y (nondeterministic systems).
    FindSim {
        #[arg(long, value_enum)]
        dir: Dir,
        #[arg(long, value_enum, value_delimiter = ',')]
        require: Vec<Restriction>,
        /// Largest number of relations the backward search may visit.
        #[arg(long, default_value_t = 1 << 24)]
        budget: u128,
        x: PathBuf,
        y: PathBuf,
    },
    /// Unroll one step: write the forward partial execution of a system.
    Fpe {
        system: PathBuf,
        /// Write the document here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Trace semantics of one system, from `init` or a named state.
    Trace {
        system: PathBuf,
        #[arg(long, default_value = "init")]
        from: String,
        #[arg(long)]
        depth: Option<usize>,
        /// Evaluate a single prefix tree, e.g. `b(a(✓))` or `ba✓`.
        #[arg(long)]
        tree: Option<String>,
        /// Probability of the finite prefix itself rather than its cylinder.
        #[arg(long)]
        finite: bool,
        #[arg(long, default_value = "1e-9", value_parser = positive)]
        eps: f64,
    },
    /// Trace inclusion of X in Y.
    Inclusion {
        x: PathBuf,
        y: PathBuf,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value = "1e-9", value_parser = positive)]
        eps: f64,
        /// Decide infinite-word inclusion exactly (word alphabets only).
        #[arg(long)]
        exact_word: bool,
    },
}

const HOLDS: u8 = 0;
const REFUTED: u8 = 1;
const INPUT_ERROR: u8 = 2;

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<System> {
    parse_system(&read(path)?).with_context(|| format!("invalid system {}", path.display()))
}

fn prob_json(p: &Prob) -> Value {
    match p {
        Prob::Exact(_) => Value::String(p.to_string()),
        Prob::Approx(f) => json!(f),
    }
}

fn report(command: &str, verdict: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("verdict".into(), json!(verdict));
    m
}

fn exit_for(holds: bool) -> u8 {
    if holds {
        HOLDS
    } else {
        REFUTED
    }
}

fn check_json(r: &CheckReport) -> Value {
    r.violations
        .iter()
        .map(|v| json!({"condition": v.condition, "at": v.at, "lhs": v.lhs, "rhs": v.rhs}))
        .collect()
}

fn flags_json(f: RestrictionFlags) -> Value {
    json!({"total": f.total, "image_finite": f.image_finite})
}

fn inclusion_json(alphabet: &RankedAlphabet, r: &InclusionReport) -> Map<String, Value> {
    let verdict = match r.verdict {
        Verdict::Included => "included",
        Verdict::NotIncluded => "not-included",
        Verdict::IncludedUpToDepth(_) => "included-up-to-depth",
    };
    let mut m = report("inclusion", verdict);
    if let Some(w) = &r.witness {
        m.insert(
            "witness".into(),
            json!({
                "tree": render_tree(alphabet, &w.tree),
                "lhs": prob_json(&w.lhs),
                "rhs": prob_json(&w.rhs),
            }),
        );
    }
    m.insert("depths_checked".into(), json!(r.depths_checked));
    m
}

/// Accepts tree syntax, or for word alphabets a run of letters such as `ba✓`.
fn read_tree(alphabet: &RankedAlphabet, text: &str) -> anyhow::Result<PrefixTree> {
    if text == "ε" {
        return Ok(PrefixTree::empty());
    }
    match parse_tree(alphabet, text, None) {
        Ok(t) => Ok(t),
        Err(e) if alphabet.word_mode() => {
            let parts: Vec<String> = if text.contains('.') {
                text.split('.').map(str::to_string).collect()
            } else {
                text.chars().map(String::from).collect()
            };
            let word = parts
                .iter()
                .map(|p| alphabet.lookup(p).ok_or_else(|| anyhow!("{e}")))
                .collect::<anyhow::Result<Vec<_>>>()?;
            Ok(PrefixTree::from_word(alphabet, &word)?)
        }
        Err(e) => Err(e.into()),
    }
}

fn start_of(sys: &System, from: &str) -> anyhow::Result<Start> {
    if from == "init" {
        return Ok(Start::Init);
    }
    sys.states
        .position(from)
        .map(Start::State)
        .ok_or_else(|| anyhow!("unknown state `{from}`"))
}

fn run(cli: Cli) -> anyhow::Result<(Value, u8)> {
    let exec = Exec::Parallel.available();
    let (out, code) = match cli.command {
        Command::Validate { system } => {
            let text = read(&system)?;
            let doc: Value = serde_json::from_str(&text)
                .with_context(|| format!("{} is not JSON", system.display()))?;
            match system_from_json(&doc) {
                Ok(_) => (report("validate", "valid"), HOLDS),
                Err(e) => {
                    let mut m = report("validate", "invalid");
                    m.insert("violations".into(), json!([e.to_string()]));
                    (m, REFUTED)
                }
            }
        }
        Command::CheckSim { dir, witness, require, x, y } => {
            let (x, y) = (load(&x)?, load(&y)?);
            let (recorded, arrow) = parse_witness(&read(&witness)?, &x, &y)
                .with_context(|| format!("invalid witness {}", witness.display()))?;
            if let Some(d) = dir {
                if Direction::from(d) != recorded {
                    bail!("--dir disagrees with the witness direction `{}`", recorded.name());
                }
            }
            let check = match recorded {
                Direction::Forward => check_fwd(&x, &y, &arrow)?,
                Direction::Backward => check_bwd(&x, &y, &arrow)?,
            };
            let flags = check_restrictions(&arrow);
            let holds = check.verdict && flags.satisfies(flags_of(&require));
            let mut m = report("check-sim", if holds { "holds" } else { "fails" });
            m.insert("violations".into(), check_json(&check));
            m.insert("flags".into(), flags_json(flags));
            (m, exit_for(holds))
        }
        Command::FindSim { dir, require, budget, x, y } => {
            let (x, y) = (load(&x)?, load(&y)?);
            let require = flags_of(&require);
            let found = match dir {
                Dir::Fwd => find_fwd_rel(&x, &y)?.filter(|f| check_restrictions(f).satisfies(require)),
                Dir::Bwd => find_bwd_bruteforce(&x, &y, require, budget, exec)?,
            };
            match found {
                Some(arrow) => {
                    let mut m = report("find-sim", "found");
                    m.insert("witness".into(), witness_to_json(dir.into(), &arrow));
                    m.insert("flags".into(), flags_json(check_restrictions(&arrow)));
                    (m, HOLDS)
                }
                None => (report("find-sim", "none"), REFUTED),
            }
        }
        Command::Fpe { system, output } => {
            let text = system_to_string(&apply_fpe(&load(&system)?));
            match output {
                Some(path) => {
                    fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
                    let mut m = report("fpe", "written");
                    m.insert("output".into(), json!(path.display().to_string()));
                    (m, HOLDS)
                }
                None => {
                    print!("{text}");
                    return Ok((Value::Null, HOLDS));
                }
            }
        }
        Command::Trace { system, from, depth, tree, finite, eps } => {
            let sys = load(&system)?;
            (trace(&sys, &from, depth, tree.as_deref(), finite, eps)?, HOLDS)
        }
        Command::Inclusion { x, y, depth, eps, exact_word } => {
            let (x, y) = (load(&x)?, load(&y)?);
            if x.monad != y.monad {
                bail!("systems use different monads: {} and {}", x.monad, y.monad);
            }
            if exact_word && x.monad != Monad::Powerset {
                bail!("--exact-word applies to nondeterministic systems only");
            }
            let r = match x.monad {
                Monad::Powerset if exact_word => word_inclusion_exact(&x, &y)?,
                Monad::Powerset => tree_inclusion_upto(&x, &y, depth)?,
                Monad::SubDist => prob_inclusion_upto(&x, &y, depth, eps, exec)?,
                Monad::Lift => lift_inclusion_upto(&x, &y, depth)?,
            };
            (inclusion_json(&x.alphabet, &r), exit_for(r.holds()))
        }
    };
    Ok((Value::Object(out), code))
}

fn trace(
    sys: &System,
    from: &str,
    depth: Option<usize>,
    tree: Option<&str>,
    finite: bool,
    eps: f64,
) -> anyhow::Result<Map<String, Value>> {
    let start = start_of(sys, from)?;
    let alphabet = &sys.alphabet;
    let tree = tree.map(|t| read_tree(alphabet, t)).transpose()?;
    let depth = depth.unwrap_or_else(|| tree.as_ref().map_or(6, PrefixTree::depth));
    let mut m = report("trace", "computed");
    let mut values = Map::new();
    match sys.monad {
        Monad::Powerset => {
            let lang = prefix_lang(sys, start, tree.as_ref().map_or(depth, PrefixTree::depth))?;
            match &tree {
                Some(t) => {
                    let p = if lang.contains(t) { Prob::one() } else { Prob::zero() };
                    values.insert(render_tree(alphabet, t), prob_json(&p));
                }
                None => {
                    for t in &lang {
                        values.insert(render_tree(alphabet, t), prob_json(&Prob::one()));
                    }
                }
            }
        }
        Monad::SubDist if finite => {
            let trees = match tree {
                Some(t) => vec![t],
                None => ktrace::prefix_trees(alphabet, depth),
            };
            for t in trees {
                let p = Prob::Exact(subdist_tree_prob(sys, start, &t)?);
                if p != Prob::zero() {
                    values.insert(render_tree(alphabet, &t), prob_json(&p));
                }
            }
        }
        Monad::SubDist => {
            let oracle = CylinderOracle::new(sys, eps)?;
            let trees = match tree {
                Some(t) => vec![t],
                None => {
                    let mut level = vec![PrefixTree::empty()];
                    for _ in 0..depth {
                        level = level
                            .iter()
                            .flat_map(|t| t.extensions(alphabet))
                            .filter(|t| oracle.prob(start, t) != Prob::zero())
                            .collect();
                    }
                    level
                }
            };
            for t in trees {
                values.insert(render_tree(alphabet, &t), prob_json(&oracle.prob(start, &t)));
            }
            m.insert("flags".into(), json!({"converged": oracle.survival().converged}));
        }
        Monad::Lift => {
            let out = match start {
                Start::State(s) => lift_output(sys, s, depth)?,
                Start::Init => match sys.lift_init().expect("lift") {
                    None => LiftOutput::Abort,
                    Some(s) => lift_output(sys, s, depth)?,
                },
            };
            let shown = match out {
                LiftOutput::Abort => "⊥".to_string(),
                LiftOutput::Tree(t) => render_tree(alphabet, &t),
            };
            values.insert("output".into(), json!(shown));
        }
    }
    m.insert("depths_checked".into(), json!(depth));
    m.insert("values".into(), Value::Object(values));
    Ok(m)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((Value::Null, code)) => ExitCode::from(code),
        Ok((report, code)) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
