use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dsregret::rational::{format_rational, parse_rational};
use dsregret::reductions::{self, GeneratedInstance, SatEncoding};
use dsregret::regret_all::{self, EveStrategy};
use dsregret::regret_positional;
use dsregret::regret_word;
use dsregret::report::DEFAULT_BUDGET;
use dsregret::values::ValueTable;
use dsregret::{parse_arena, parse_automaton, Config, DiscountFactor, Error, Rational, RegretReport, ReportValue};

#[derive(Parser)]
#[command(name = "dsregret", version, about = "Regret minimization in discounted-sum games")]
struct Cli {
    /// Limit on expanded search nodes.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Single-threaded evaluation.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Adversary {
    All,
    Positional,
    Word,
}

#[derive(Subcommand)]
enum Command {
    /// Antagonistic and co-operative values of every vertex.
    Values { file: PathBuf },
    /// Decide whether Eve has a regret-free strategy.
    ZeroRegret {
        #[arg(long, value_enum)]
        adversary: Adversary,
        file: PathBuf,
    },
    /// Exact regret of the game, or a threshold query.
    Regret {
        #[arg(long, value_enum)]
        adversary: Adversary,
        file: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        threshold: Option<Rational>,
        /// Ask `regret < threshold` instead of `regret <= threshold`.
        #[arg(long, requires = "threshold")]
        strict: bool,
    },
    /// The epsilon-gap promise problem on a weighted automaton.
    EpsilonGap {
        #[arg(long = "r", value_parser = rational_arg)]
        r: Rational,
        #[arg(long, value_parser = rational_arg)]
        epsilon: Rational,
        file: PathBuf,
    },
    /// Synthesize an optimistic-then-pessimistic strategy with threshold `t`.
    Synth {
        #[arg(long, value_parser = rational_arg)]
        t: Rational,
        file: PathBuf,
    },
    /// Regret of an Eve strategy given as JSON.
    Eval {
        #[arg(long)]
        strategy: PathBuf,
        file: PathBuf,
    },
    /// Certified regret interval from a depth-bounded search.
    Oracle {
        #[arg(long, value_enum)]
        adversary: Adversary,
        #[arg(long)]
        depth: usize,
        file: PathBuf,
    },
    /// Generate a benchmark instance with its expected answer.
    #[command(subcommand)]
    Gen(Gen),
}

#[derive(Args)]
struct GenOut {
    /// Write the instance here and the expected answer to `OUT.expected.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Gen {
    /// Wrap an arena so that its antagonistic value becomes a regret value.
    AvalGadget {
        file: PathBuf,
        #[command(flatten)]
        out: GenOut,
    },
    /// From a DIMACS-like graph (`p edge N M`, `e U V`, 1-based vertices).
    #[command(name = "2dp")]
    TwoDp {
        file: PathBuf,
        #[arg(long)]
        s1: usize,
        #[arg(long)]
        t1: usize,
        #[arg(long)]
        s2: usize,
        #[arg(long)]
        t2: usize,
        #[arg(long, value_parser = rational_arg, default_value = "1/2")]
        lambda: Rational,
        #[arg(long = "r", value_parser = rational_arg, default_value = "1")]
        r: Rational,
        #[command(flatten)]
        out: GenOut,
    },
    /// From a DIMACS CNF formula.
    Sat {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "tree")]
        encoding: EncodingArg,
        #[arg(long, value_parser = rational_arg, default_value = "1/2")]
        lambda: Rational,
        #[command(flatten)]
        out: GenOut,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodingArg {
    Chooser,
    Tree,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s)
}

enum Failure {
    Usage(String),
    Input(String),
    Budget(Value, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget { limit, depth } => Failure::Budget(
                json!({"error": "budget", "limit": limit, "depth": depth, "value": null}),
                e.to_string(),
            ),
            e => Failure::Input(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn arena_at(path: &Path) -> Result<dsregret::WeightedArena, Failure> {
    parse_arena(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn automaton_at(path: &Path) -> Result<dsregret::WeightedAutomaton, Failure> {
    parse_automaton(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn discount(r: &Rational) -> Result<DiscountFactor, Failure> {
    DiscountFactor::new(r.clone()).map_err(|e| Failure::Usage(e.to_string()))
}

fn gen_report(inst: GeneratedInstance, out: &GenOut) -> Result<Value, Failure> {
    let mut report = RegretReport::new("gen", ReportValue::None).to_json();
    let text = inst.artifact.to_text();
    let obj = report.as_object_mut().unwrap();
    obj.remove("value");
    obj.insert("expected".into(), inst.expected.to_json());
    obj.insert("provenance".into(), Value::Object(inst.provenance.clone()));
    match &out.out {
        Some(path) => {
            let sidecar = PathBuf::from(format!("{}.expected.json", path.display()));
            let write = |p: &Path, s: String| std::fs::write(p, s).map_err(|e| Failure::Input(format!("{}: {e}", p.display())));
            write(path, text)?;
            write(&sidecar, format!("{}\n", serde_json::to_string_pretty(&inst.sidecar()).unwrap()))?;
            obj.insert("out".into(), json!(path.display().to_string()));
            obj.insert("sidecar".into(), json!(sidecar.display().to_string()));
        }
        None => {
            obj.insert("artifact".into(), json!(text));
        }
    }
    Ok(report)
}

/// 1-based vertex index from the command line.
fn vertex(v: usize, n: usize) -> Result<usize, Failure> {
    if v == 0 || v > n {
        return Err(Failure::Usage(format!("vertex {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    let cfg = Config {
        budget: cli.budget,
        parallel: !cli.deterministic,
    };
    Ok(match &cli.command {
        Command::Values { file } => {
            let a = arena_at(file)?;
            let mut r = RegretReport::new("values", ReportValue::None).to_json();
            let obj = r.as_object_mut().unwrap();
            obj.remove("value");
            obj.insert("values".into(), ValueTable::compute(&a).to_json(&a));
            r
        }
        Command::ZeroRegret { adversary, file } => match adversary {
            Adversary::All => {
                let a = arena_at(file)?;
                let z = regret_all::zero_regret_all(&a);
                let mut r = RegretReport::new("zero-regret", ReportValue::Answer(z.answer));
                r.witness = Some(z.witness.to_json(&a));
                r.extra.insert("adversary".into(), json!("all"));
                r.to_json()
            }
            Adversary::Positional => {
                let a = arena_at(file)?;
                let z = regret_positional::zero_regret_positional(&a, &cfg)?;
                let mut r = RegretReport::new("zero-regret", ReportValue::Answer(z.answer));
                if z.answer {
                    r.witness = Some(z.witness_json(&a));
                }
                r.extra.insert("adversary".into(), json!("positional"));
                r.extra.insert("knowledge_states".into(), json!(z.arena.states.len()));
                r.to_json()
            }
            Adversary::Word => {
                let a = automaton_at(file)?;
                let mut r = regret_word::zero_regret_word_report(&a, &cfg)?;
                r.mode = "zero-regret".into();
                r.extra.insert("adversary".into(), json!("word"));
                r.to_json()
            }
        },
        Command::Regret {
            adversary,
            file,
            threshold,
            strict,
        } => {
            if *adversary == Adversary::Word {
                return Err(Failure::Usage(
                    "exact regret against word strategies is not supported; use epsilon-gap".into(),
                ));
            }
            let a = arena_at(file)?;
            let mut r = match adversary {
                Adversary::All => regret_all::regret_all(&a, &cfg)?,
                Adversary::Positional => regret_positional::regret_positional(&a, &cfg)?,
                Adversary::Word => unreachable!(),
            };
            if let Some(t) = threshold {
                let v = r.exact().unwrap();
                let ans = if *strict { v < t } else { v <= t };
                r.extra.insert("threshold".into(), json!(format_rational(t)));
                r.extra.insert("strict".into(), json!(strict));
                r.extra.insert("answer".into(), json!(ans));
            }
            r.to_json()
        }
        Command::EpsilonGap { r, epsilon, file } => {
            let a = automaton_at(file)?;
            let mut rep = regret_word::epsilon_gap_report(&a, r, epsilon, &cfg)?;
            rep.extra.insert("r".into(), json!(format_rational(r)));
            rep.extra.insert("epsilon".into(), json!(format_rational(epsilon)));
            rep.to_json()
        }
        Command::Synth { t, file } => {
            let a = arena_at(file)?;
            let otp = regret_all::synth_otp(&a, t);
            let witness = otp.to_json(&a);
            let value = regret_all::eval_strategy_regret(&a, &EveStrategy::Otp(otp), &cfg)?;
            let mut r = RegretReport::new("synth", ReportValue::Exact(value));
            r.witness = Some(witness);
            r.to_json()
        }
        Command::Eval { strategy, file } => {
            let a = arena_at(file)?;
            let text = read(strategy)?;
            let json: Value = serde_json::from_str(&text)
                .map_err(|e| Failure::Input(format!("{}: {e}", strategy.display())))?;
            let s = EveStrategy::from_json(&a, &json)?;
            let value = regret_all::eval_strategy_regret(&a, &s, &cfg)?;
            let mut r = RegretReport::new("eval", ReportValue::Exact(value));
            r.witness = Some(json);
            r.to_json()
        }
        Command::Oracle { adversary, depth, file } => {
            let (lo, hi) = match adversary {
                Adversary::Positional => regret_positional::oracle_interval_positional(&arena_at(file)?, *depth, &cfg)?,
                Adversary::Word => regret_word::oracle_interval_word(&automaton_at(file)?, *depth, &cfg)?,
                Adversary::All => {
                    return Err(Failure::Usage("oracle supports --adversary positional|word".into()));
                }
            };
            let mut r = RegretReport::new("oracle", ReportValue::Interval(lo, hi));
            r.horizon = Some(*depth);
            r.to_json()
        }
        Command::Gen(gen) => match gen {
            Gen::AvalGadget { file, out } => gen_report(reductions::aval_gadget(&arena_at(file)?), out)?,
            Gen::TwoDp {
                file,
                s1,
                t1,
                s2,
                t2,
                lambda,
                r,
                out,
            } => {
                let g = reductions::parse_graph(&read(file)?)?;
                let n = g.n;
                let inst = reductions::gen_2dp(
                    &g,
                    vertex(*s1, n)?,
                    vertex(*t1, n)?,
                    vertex(*s2, n)?,
                    vertex(*t2, n)?,
                    &discount(lambda)?,
                    r,
                )?;
                gen_report(inst, out)?
            }
            Gen::Sat {
                file,
                encoding,
                lambda,
                out,
            } => {
                let cnf = reductions::parse_cnf(&read(file)?)?;
                let enc = match encoding {
                    EncodingArg::Chooser => SatEncoding::ValueChooser,
                    EncodingArg::Tree => SatEncoding::AssignmentTree,
                };
                gen_report(reductions::gen_sat(&cnf, enc, &discount(lambda)?)?, out)?
            }
        },
    })
}

fn mode_name(c: &Command) -> &'static str {
    match c {
        Command::Values { .. } => "values",
        Command::ZeroRegret { .. } => "zero-regret",
        Command::Regret { adversary: Adversary::Positional, .. } => "positional",
        Command::Regret { .. } => "all",
        Command::EpsilonGap { .. } => "epsilon-gap",
        Command::Synth { .. } => "synth",
        Command::Eval { .. } => "eval",
        Command::Oracle { .. } => "oracle",
        Command::Gen(_) => "gen",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli);
    let elapsed = start.elapsed();
    match result {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            eprintln!("wall time: {:.3}s", elapsed.as_secs_f64());
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Budget(mut partial, m)) => {
            partial["mode"] = json!(mode_name(&cli.command));
            println!("{}", serde_json::to_string_pretty(&partial).unwrap());
            eprintln!("error: {m}");
            ExitCode::from(4)
        }
    }
}
