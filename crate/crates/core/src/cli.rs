//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and returns the exit status together with the text to print.

use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::alphabets::{twists_ab, twists_ts};
use crate::error::{Error, Result};
use crate::label::Verdict;
use crate::moduli::{classify_numeric_run, FamilyId, NumericParams, RationalFamily};
use crate::periodic2::{self, classify_full, fi_recursion, fstar_recursion, moduli_i_recursion};
use crate::preperiod2::{classify_quater, moduli_q_recursion, quater_recursion, QuaterVariant};
use crate::rabbit::{classify_mcg, classify_st_power, classify_twist_power, mcg_recursion, rabbit_recursion, RabbitVariant};
use crate::selfsim::{
    self, automata_distinct, automata_isomorphic, is_trivial_action, moore_diagram, moore_diagram_modulo_action,
    MooreDiagram,
};
use crate::word::{Alphabet, GenWord};
use crate::wreath::Recursion;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;

pub const RECURSIONS: [&str; 11] =
    ["rabbit", "airplane", "corabbit", "mcg-rabbit", "fi", "fstar", "moduli-i", "q14", "q34", "q512", "moduli-q"];

#[derive(Parser, Debug)]
#[command(name = "imgtwist", about = "Thurston classes of twisted quadratic polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print nuclei as Graphviz DOT.
    #[arg(long, global = true)]
    dot: bool,
    /// State bound for nucleus and triviality searches.
    #[arg(long, global = true, default_value_t = selfsim::DEFAULT_BOUND)]
    bound: usize,
    /// Iteration limit for classifiers (lifts for `moduli`).
    #[arg(long, global = true)]
    max_iters: Option<usize>,
    /// Convergence tolerance for `moduli`.
    #[arg(long, global = true, default_value_t = crate::moduli::DEFAULT_TOL)]
    tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class of T^m·f_R, (ST)^m·f_R or g·f_R for a word g in T, S.
    ClassifyRabbit {
        word: Option<String>,
        #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["word", "st_power"])]
        power: Option<i64>,
        #[arg(long, allow_negative_numbers = true, conflicts_with = "word")]
        st_power: Option<i64>,
    },
    /// Class of f_i·w for a word in a, b.
    ClassifyI { word: String },
    /// Class of f_1/4·w for a word in a, b.
    ClassifyQuater { word: String },
    /// Nucleus of a built-in recursion.
    Nucleus { name: String },
    /// Whether the nuclei of two built-in recursions are non-isomorphic automata.
    Distinct { first: String, second: String },
    /// Numerical class by lifting the loop of a word on moduli space.
    Moduli {
        /// rabbit, i or quater
        family: String,
        word: String,
        /// Print the endpoint after each lift as `index re im`.
        #[arg(long)]
        trajectory: bool,
    },
    /// Whether a word acts trivially on the tree.
    Trivial { name: String, word: String },
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::UnknownGenerator(_) | Error::AlphabetMismatch { .. } => EXIT_PARSE,
        Error::Diverged { .. } | Error::BoundExceeded { .. } => EXIT_DIVERGED,
        _ => EXIT_FAILURE,
    }
}

/// A built-in recursion with its generators and whether states are compared
/// by tree action (the generators are then involutions).
pub struct Builtin {
    pub rec: Recursion,
    pub modulo_action: bool,
}

pub fn builtin(name: &str) -> Option<Builtin> {
    let word_mode = |rec| Some(Builtin { rec, modulo_action: false });
    let action_mode = |rec| Some(Builtin { rec, modulo_action: true });
    match name {
        "rabbit" => word_mode(rabbit_recursion(RabbitVariant::R)),
        "airplane" => word_mode(rabbit_recursion(RabbitVariant::A)),
        "corabbit" => word_mode(rabbit_recursion(RabbitVariant::C)),
        "mcg-rabbit" => word_mode(mcg_recursion()),
        "moduli-i" => word_mode(moduli_i_recursion()),
        "moduli-q" => word_mode(moduli_q_recursion()),
        "fi" => action_mode(fi_recursion()),
        "fstar" => action_mode(fstar_recursion()),
        "q14" => action_mode(quater_recursion(QuaterVariant::F14)),
        "q34" => action_mode(quater_recursion(QuaterVariant::F34)),
        "q512" => action_mode(quater_recursion(QuaterVariant::F512)),
        _ => None,
    }
}

fn lookup(name: &str) -> Result<Builtin> {
    builtin(name).ok_or_else(|| Error::Parse {
        token: name.to_string(),
        pos: 0,
        msg: format!("unknown recursion; expected one of {}", RECURSIONS.join(", ")),
    })
}

fn generators(a: &Arc<Alphabet>) -> Vec<GenWord> {
    (0..a.len()).map(|i| GenWord::generator(a, i)).collect()
}

/// Nucleus of a built-in recursion as a Moore diagram.
pub fn builtin_nucleus(b: &Builtin, bound: usize) -> Result<MooreDiagram> {
    let gens = generators(b.rec.alphabet());
    if b.modulo_action {
        let n = selfsim::nucleus_modulo_action(&b.rec, &gens, bound)?;
        moore_diagram_modulo_action(&b.rec, &n, bound)
    } else {
        let n = selfsim::nucleus(&b.rec, &gens, bound)?;
        moore_diagram(&b.rec, &n)
    }
}

fn verdict_json(command: &str, input: &str, v: &Verdict) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("input".into(), json!(input));
    m.insert("label".into(), json!(v.label));
    if let Some(n) = v.label.index() {
        m.insert("index".into(), json!(n));
    }
    m.insert("iterations".into(), json!(v.iterations));
    m.insert("witness".into(), json!(v.witness.to_string()));
    Value::Object(m)
}

fn verdict_text(v: &Verdict) -> String {
    format!("{}\niterations: {}\nwitness: {}\n", v.label, v.iterations, v.witness)
}

fn render(json_out: bool, value: Value, text: String) -> String {
    if json_out {
        format!("{value}\n")
    } else {
        text
    }
}

fn dispatch(cli: &Cli) -> Result<String> {
    let iters = cli.max_iters.unwrap_or(periodic2::DEFAULT_ITER_MAX);
    match &cli.command {
        Command::ClassifyRabbit { word, power, st_power } => {
            if let Some(m) = power {
                let label = classify_twist_power(*m);
                let input = format!("T^{m}");
                let value = json!({ "command": "classify-rabbit", "input": input, "label": label });
                return Ok(render(cli.json, value, format!("{label}\n")));
            }
            let (input, v) = match (word, st_power) {
                (_, Some(m)) => (format!("(S T)^{m}"), classify_st_power(*m, iters)?),
                (Some(w), None) => (w.clone(), classify_mcg(&GenWord::parse(twists_ts(), w)?, iters)?),
                (None, None) => {
                    return Err(Error::Parse {
                        token: String::new(),
                        pos: 0,
                        msg: "expected a word, --power or --st-power".into(),
                    })
                }
            };
            Ok(render(cli.json, verdict_json("classify-rabbit", &input, &v), verdict_text(&v)))
        }
        Command::ClassifyI { word } => {
            let v = classify_full(&GenWord::parse(twists_ab(), word)?, periodic2::DEFAULT_K_MAX, iters)?;
            Ok(render(cli.json, verdict_json("classify-i", word, &v), verdict_text(&v)))
        }
        Command::ClassifyQuater { word } => {
            let v = classify_quater(&GenWord::parse(twists_ab(), word)?, iters)?;
            Ok(render(cli.json, verdict_json("classify-quater", word, &v), verdict_text(&v)))
        }
        Command::Nucleus { name } => {
            let d = builtin_nucleus(&lookup(name)?, cli.bound)?;
            if cli.dot {
                return Ok(d.to_dot(name));
            }
            let states: Vec<String> = d.states.iter().map(|s| s.to_string()).collect();
            let value = json!({
                "command": "nucleus",
                "input": name,
                "size": d.len(),
                "states": states,
                "diagram": d.to_json(),
            });
            Ok(render(cli.json, value, format!("{} states\n{}\n", d.len(), states.join("\n"))))
        }
        Command::Distinct { first, second } => {
            let d1 = builtin_nucleus(&lookup(first)?, cli.bound)?;
            let d2 = builtin_nucleus(&lookup(second)?, cli.bound)?;
            let distinct = automata_distinct(&d1, &d2);
            let isomorphic = automata_isomorphic(&d1, &d2);
            let value = json!({
                "command": "distinct",
                "input": format!("{first} {second}"),
                "distinct": distinct,
                "isomorphic": isomorphic,
                "sizes": [d1.len(), d2.len()],
            });
            let text = if distinct {
                "distinct\n".to_string()
            } else if isomorphic {
                "isomorphic\n".to_string()
            } else {
                "isomorphic after exchanging the letters\n".to_string()
            };
            Ok(render(cli.json, value, text))
        }
        Command::Moduli { family, word, trajectory } => {
            let id = FamilyId::from_name(family).ok_or_else(|| Error::Parse {
                token: family.clone(),
                pos: 0,
                msg: "unknown family; expected rabbit, i or quater".into(),
            })?;
            let fam = RationalFamily::new(id);
            let h = GenWord::parse(fam.alphabet(), word)?;
            let params = NumericParams {
                tol: cli.tol,
                max_lifts: cli.max_iters.unwrap_or(crate::moduli::DEFAULT_MAX_LIFTS),
                ..NumericParams::default()
            };
            let run = classify_numeric_run(&fam, &h, &params)?;
            if *trajectory {
                return Ok(run.trajectory_dump());
            }
            let value = json!({
                "command": "moduli",
                "input": format!("{family} {word}"),
                "label": run.label,
                "iterations": run.lifts,
                "limit": [run.limit.re, run.limit.im],
            });
            let text = format!("{}\nlifts: {}\nlimit: {}\n", run.label, run.lifts, run.limit);
            Ok(render(cli.json, value, text))
        }
        Command::Trivial { name, word } => {
            let b = lookup(name)?;
            let w = GenWord::parse(b.rec.alphabet(), word)?;
            let trivial = is_trivial_action(&b.rec, &w, cli.bound)?;
            let value = json!({ "command": "trivial", "input": format!("{name} {word}"), "trivial": trivial });
            Ok(render(cli.json, value, format!("{trivial}\n")))
        }
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli) {
        Ok(stdout) => Outcome::ok(stdout),
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("imgtwist").chain(args.iter().copied()))
    }

    fn json_of(args: &[&str]) -> Value {
        let o = go(args);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
        serde_json::from_str(&o.stdout).unwrap()
    }

    #[test]
    fn rabbit_power() {
        let v = json_of(&["classify-rabbit", "--power", "-4", "--json"]);
        assert_eq!(v["label"], "corabbit");
        let v = json_of(&["classify-rabbit", "T", "--json"]);
        assert_eq!(v["label"], "airplane");
        assert!(v["iterations"].is_number());
        let v = json_of(&["classify-rabbit", "--st-power", "2", "--json"]);
        assert!(v["witness"].is_string());
    }

    #[test]
    fn i_family() {
        let v = json_of(&["classify-i", "a'a", "--json"]);
        assert_eq!(v["label"], "f_i");
        let v = json_of(&["classify-i", "a", "--json"]);
        assert_eq!(v["label"], "obstructed");
        assert_eq!(v["index"], 0);
        let w = v["witness"].as_str().unwrap();
        assert!(GenWord::parse(twists_ab(), w).is_ok());
    }

    #[test]
    fn nucleus_and_distinct() {
        let v = json_of(&["nucleus", "mcg-rabbit", "--json"]);
        assert_eq!(v["size"], 7);
        let o = go(&["nucleus", "rabbit", "--dot"]);
        assert!(o.stdout.starts_with("digraph"));
        let v = json_of(&["distinct", "rabbit", "airplane", "--json"]);
        assert_eq!(v["distinct"], true);
        let v = json_of(&["trivial", "fi", "alpha alpha", "--json"]);
        assert_eq!(v["trivial"], true);
    }

    #[test]
    fn moduli_command() {
        let v = json_of(&["moduli", "rabbit", "T", "--json"]);
        assert_eq!(v["label"], "airplane");
        let o = go(&["moduli", "i", "b", "--trajectory"]);
        assert!(o.stdout.starts_with("0 0 2"));
    }

    #[test]
    fn exit_codes() {
        let o = go(&["classify-i", "a c"]);
        assert_eq!(o.code, EXIT_PARSE);
        assert!(o.stderr.contains('c'));
        assert_eq!(go(&["nucleus", "nope"]).code, EXIT_PARSE);
        assert_eq!(go(&["frobnicate"]).code, EXIT_PARSE);
        assert_eq!(go(&["classify-rabbit", "T^3", "--max-iters", "0"]).code, EXIT_DIVERGED);
        assert_eq!(go(&["nucleus", "rabbit", "--bound", "3"]).code, EXIT_DIVERGED);
    }

    #[test]
    fn json_is_stable() {
        let a = go(&["classify-quater", "a'b", "--json"]).stdout;
        let b = go(&["classify-quater", "a'b", "--json"]).stdout;
        assert_eq!(a, b);
    }
}
