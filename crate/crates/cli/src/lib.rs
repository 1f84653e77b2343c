//! The `hfs` command line: an expression evaluator over pure finite sets
//! plus commands for structure diagrams, isomorphism reports, tuples,
//! numerals, fusion and corpus generation.
//!
//! Everything goes through [`run`], which returns the output and exit code
//! instead of touching the process, so tests can drive it directly.
//!
//! Exit codes: 0 success or true, 1 NOT-ISO or false, 2 domain error,
//! 3 syntax error (including bad command-line usage).

pub mod expr;

use std::fmt::Write as _;
use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use hfs_core::corpus::corpus;
use hfs_core::fusion::{
    close, fuse, has_bottom_structure, has_top_structure, validate_bottom, validate_middle,
    validate_top, DEFAULT_BUDGET,
};
use hfs_core::numerals::{add_vn, add_zermelo, mul_structural, Numeral, Scheme};
use hfs_core::structure::{isomorphic, structure_of, to_dot, to_json, StructureGraph};
use hfs_core::tuples::{contains_position, get_at, PositionPath};
use hfs_core::SetHandle;

pub use expr::{evaluate, ExprError};

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: 0,
        }
    }

    fn with_code(stdout: String, code: i32) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code,
        }
    }

    fn failure(stderr: String, code: i32) -> Self {
        Outcome {
            stdout: String::new(),
            stderr,
            code,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "hfs",
    version,
    about = "Calculator for pure finite sets and their constituent structure"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

const INPUT_HELP: &str = "Expression to evaluate; read from stdin when absent or '-'";

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression (with optional let-bindings) and print it canonically.
    Eval {
        #[arg(help = INPUT_HELP)]
        expr: Option<String>,
    },
    /// Canonicalize plain brace text such as "{{{}},{}}".
    Canon {
        /// Brace text; read from stdin when absent or '-'
        text: Option<String>,
    },
    /// Number of elements.
    Card {
        #[arg(help = INPUT_HELP)]
        expr: Option<String>,
    },
    /// All constituents, one per line in canonical order.
    Constituents {
        #[arg(help = INPUT_HELP)]
        expr: Option<String>,
    },
    /// Number of brace pairs in the canonical text.
    Instances {
        #[arg(help = INPUT_HELP)]
        expr: Option<String>,
    },
    /// Render the constituent-structure graph.
    Structure {
        #[arg(help = INPUT_HELP)]
        expr: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Decide isomorphism of two constituent structures and print the mapping.
    Iso { a: String, b: String },
    /// Positional tuple access. Paths are comma-separated and innermost-first:
    /// "0,1" is entry 0 of the tuple found at entry 1.
    Tuple {
        #[command(subcommand)]
        op: TupleOp,
    },
    /// Numeral arithmetic and codecs.
    Num {
        #[command(subcommand)]
        op: NumOp,
    },
    /// Fuse a top structure with a bottom structure, or search for a missing side.
    ///
    /// Without --check the arguments are TOP BOTTOM. With --check top they are
    /// TOP X and a bottom fusing with TOP to X is searched for; with
    /// --check bottom they are X BOTTOM and a top is searched for.
    Fuse {
        first: String,
        second: String,
        #[arg(long, value_enum)]
        check: Option<Check>,
        /// Candidate bound for the --check searches
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Close a middle structure into the set of its branches.
    Close {
        #[arg(help = INPUT_HELP)]
        expr: Option<String>,
    },
    /// Print reproducible pseudo-random sets, one per line.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        max_depth: u32,
    },
}

#[derive(Subcommand, Debug)]
enum TupleOp {
    /// Print the entry at PATH.
    Get { tuple: String, path: String },
    /// Print whether PATH is occupied. An absent position prints false and exits 2.
    Has { tuple: String, path: String },
}

#[derive(Subcommand, Debug)]
enum NumOp {
    /// Sum of two numerals of the chosen scheme.
    Add {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = SchemeArg::Zermelo)]
        scheme: SchemeArg,
    },
    /// Structural product: the simplest set shaped like the product of the two structures.
    Mul { a: String, b: String },
    /// The numeral for N.
    Encode {
        n: usize,
        #[arg(long, value_enum, default_value_t = SchemeArg::Zermelo)]
        scheme: SchemeArg,
    },
    /// The natural number a numeral denotes.
    Decode {
        expr: String,
        #[arg(long, value_enum, default_value_t = SchemeArg::Zermelo)]
        scheme: SchemeArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Dot,
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Check {
    Top,
    Bottom,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SchemeArg {
    #[value(alias = "z")]
    Zermelo,
    #[value(alias = "v", alias = "von-neumann")]
    Vn,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Zermelo => Scheme::Zermelo,
            SchemeArg::Vn => Scheme::VonNeumann,
        }
    }
}

/// A failure already rendered for stderr.
struct Failure {
    message: String,
    code: i32,
}

impl Failure {
    fn domain(e: hfs_core::Error) -> Self {
        Failure {
            message: format!("error: {e}\n"),
            code: 2,
        }
    }
}

type Step<T> = Result<T, Failure>;

fn eval_source(src: &str) -> Step<SetHandle> {
    evaluate(src).map_err(|e| Failure {
        message: e.report(src),
        code: e.exit_code(),
    })
}

fn input(arg: Option<String>, stdin: &mut dyn Read) -> Step<String> {
    match arg {
        Some(a) if a != "-" => Ok(a),
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| Failure {
                message: format!("error: cannot read stdin: {e}\n"),
                code: 2,
            })?;
            Ok(s)
        }
    }
}

fn line(s: impl std::fmt::Display) -> String {
    format!("{s}\n")
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::failure(text, 3)
            } else {
                Outcome::ok(text)
            };
        }
    };
    match execute(cli.command, stdin) {
        Ok(o) => o,
        Err(f) => Outcome::failure(f.message, f.code),
    }
}

fn execute(command: Command, stdin: &mut dyn Read) -> Step<Outcome> {
    Ok(match command {
        Command::Eval { expr } => Outcome::ok(line(eval_source(&input(expr, stdin)?)?.text())),
        Command::Canon { text } => {
            let src = input(text, stdin)?;
            let h = hfs_core::parse(src.trim()).map_err(|e| Failure {
                message: format!("error: {e}\n"),
                code: 3,
            })?;
            Outcome::ok(line(h.text()))
        }
        Command::Card { expr } => {
            Outcome::ok(line(eval_source(&input(expr, stdin)?)?.cardinality()))
        }
        Command::Constituents { expr } => {
            let h = eval_source(&input(expr, stdin)?)?;
            Outcome::ok(h.constituents().iter().map(|c| line(c.text())).collect())
        }
        Command::Instances { expr } => {
            Outcome::ok(line(eval_source(&input(expr, stdin)?)?.instance_count()))
        }
        Command::Structure { expr, format } => {
            let g = structure_of(eval_source(&input(expr, stdin)?)?);
            Outcome::ok(match format {
                Format::Dot => to_dot(&g),
                Format::Json => to_json(&g),
                Format::Text => structure_text(&g),
            })
        }
        Command::Iso { a, b } => iso_report(eval_source(&a)?, eval_source(&b)?),
        Command::Tuple { op } => match op {
            TupleOp::Get { tuple, path } => {
                let t = eval_source(&tuple)?;
                let p: PositionPath = path.parse().map_err(Failure::domain)?;
                Outcome::ok(line(get_at(t, &p).map_err(Failure::domain)?.text()))
            }
            TupleOp::Has { tuple, path } => {
                let t = eval_source(&tuple)?;
                let p: PositionPath = path.parse().map_err(Failure::domain)?;
                if contains_position(t, &p) {
                    Outcome::ok(line("true"))
                } else {
                    Outcome::with_code(line("false"), 2)
                }
            }
        },
        Command::Num { op } => match op {
            NumOp::Add { a, b, scheme } => {
                let (a, b) = (eval_source(&a)?, eval_source(&b)?);
                let sum = match scheme {
                    SchemeArg::Zermelo => add_zermelo(a, b),
                    SchemeArg::Vn => add_vn(a, b),
                };
                Outcome::ok(line(sum.map_err(Failure::domain)?.text()))
            }
            NumOp::Mul { a, b } => {
                let p =
                    mul_structural(eval_source(&a)?, eval_source(&b)?).map_err(Failure::domain)?;
                Outcome::ok(line(p.text()))
            }
            NumOp::Encode { n, scheme } => {
                if n > expr::MAX_NUMERAL {
                    return Err(Failure {
                        message: format!(
                            "error: {n} exceeds the numeral limit of {}\n",
                            expr::MAX_NUMERAL
                        ),
                        code: 2,
                    });
                }
                Outcome::ok(line(Scheme::from(scheme).encode(n).text()))
            }
            NumOp::Decode { expr, scheme } => {
                let n =
                    Numeral::decode(scheme.into(), eval_source(&expr)?).map_err(Failure::domain)?;
                Outcome::ok(line(n.value))
            }
        },
        Command::Fuse {
            first,
            second,
            check,
            budget,
        } => {
            let (x, y) = (eval_source(&first)?, eval_source(&second)?);
            match check {
                None => {
                    let t = validate_top(x).map_err(Failure::domain)?;
                    let b = validate_bottom(y).map_err(Failure::domain)?;
                    Outcome::ok(line(fuse(&t, &b).map_err(Failure::domain)?.text()))
                }
                Some(Check::Top) => {
                    let t = validate_top(x).map_err(Failure::domain)?;
                    match has_top_structure(&t, y, budget).map_err(Failure::domain)? {
                        Some(b) => Outcome::ok(line(b.set().text())),
                        None => Outcome::with_code(line("none"), 1),
                    }
                }
                Some(Check::Bottom) => {
                    let b = validate_bottom(y).map_err(Failure::domain)?;
                    match has_bottom_structure(x, &b, budget).map_err(Failure::domain)? {
                        Some(t) => Outcome::ok(line(t.set().text())),
                        None => Outcome::with_code(line("none"), 1),
                    }
                }
            }
        }
        Command::Close { expr } => {
            let m = validate_middle(eval_source(&input(expr, stdin)?)?).map_err(Failure::domain)?;
            Outcome::ok(line(close(&m).map_err(Failure::domain)?.text()))
        }
        Command::Corpus {
            seed,
            count,
            max_depth,
        } => Outcome::ok(
            corpus(seed, count, max_depth)
                .iter()
                .map(|h| line(h.text()))
                .collect(),
        ),
    })
}

fn tag_text(g: &StructureGraph, v: usize) -> String {
    g.tag(v).map_or_else(|| "•".to_string(), |h| h.text())
}

fn structure_text(g: &StructureGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} vertices, {} edges, top v{}, bottom v{}",
        g.len(),
        g.edges().len(),
        g.top(),
        g.bottom()
    );
    for v in 0..g.len() {
        let _ = writeln!(out, "v{v} {}", tag_text(g, v));
    }
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "v{a} -> v{b}");
    }
    out
}

/// `ISO` followed by one `a ↦ b` row per constituent of `a`, or `NOT-ISO`.
fn iso_report(a: SetHandle, b: SetHandle) -> Outcome {
    let (ga, gb) = (structure_of(a), structure_of(b));
    match isomorphic(&ga, &gb) {
        Some(w) => {
            let mut out = String::from("ISO\n");
            for v in 0..ga.len() {
                let _ = writeln!(out, "{} ↦ {}", tag_text(&ga, v), tag_text(&gb, w.map(v)));
            }
            Outcome::ok(out)
        }
        None => Outcome::with_code(line("NOT-ISO"), 1),
    }
}
