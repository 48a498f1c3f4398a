mod commands;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wordlogic::{Caps, Error};

pub const SCHEMA: &str = "wordlogic/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "wordlogic", version, about = "Logic on finite words: models, atoms, substitution, encodings and recognizers")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,

    /// Letters of the base alphabet: `ab`, or `a,b,c` for longer symbols.
    #[arg(long, global = true, default_value = "ab")]
    pub alphabet: String,

    /// Largest word length in bounded checks.
    #[arg(long, global = true, default_value_t = 5)]
    pub maxlen: usize,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Extra quantifiers and predicates (registry JSON).
    #[arg(long, global = true)]
    pub registry: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide `w ⊨ φ` for a marked word such as `ab[x=2]`.
    Eval {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        word: String,
        /// Variable order for the marks; defaults to the free variables.
        #[arg(long, value_delimiter = ',')]
        context: Option<Vec<String>>,
    },
    /// List the models of φ up to `--maxlen`.
    Models {
        #[arg(long)]
        formula: String,
        #[arg(long, value_delimiter = ',')]
        context: Option<Vec<String>>,
    },
    /// Bounded equivalence of two formulas; exit 1 with a distinguishing word.
    Equiv {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, value_delimiter = ',')]
        context: Option<Vec<String>>,
    },
    /// Atoms of the algebra generated by formulas in one free variable.
    Atoms {
        #[command(flatten)]
        delta: DeltaArgs,
    },
    /// Substitute the atom formulas into a sentence over the atom letters.
    Substitute {
        #[command(flatten)]
        delta: DeltaArgs,
        /// Sentence over the atom letters `c0, c1, …`.
        #[arg(long)]
        psi: String,
    },
    /// The atom word `τ(w)`.
    Tau {
        #[command(flatten)]
        delta: DeltaArgs,
        #[arg(long)]
        word: String,
    },
    /// Move free variables into the alphabet.
    Encode {
        #[command(flatten)]
        codec: CodecArgs,
        #[arg(long)]
        formula: String,
    },
    /// Move encoded variables back out of the alphabet.
    Decode {
        #[command(flatten)]
        codec: CodecArgs,
        #[arg(long)]
        formula: String,
    },
    /// Syntactic monoid of a language.
    Synmon {
        /// The language of words with exactly one marked letter.
        #[arg(long, conflicts_with_all = ["formula", "dfa"])]
        marked_universe: bool,
        /// A formula; its embedded models form the language.
        #[arg(long)]
        formula: Option<String>,
        #[arg(long, value_delimiter = ',')]
        context: Option<Vec<String>>,
        /// An automaton in JSON.
        #[arg(long)]
        dfa: Option<PathBuf>,
    },
    /// Smallest quotient-closed Boolean algebra containing the given languages.
    QuotientClosure {
        /// Generating formulas (repeatable).
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        context: Option<Vec<String>>,
    },
    /// Compile a formula to an automaton over the extended alphabet.
    Compile {
        #[arg(long)]
        formula: String,
        #[arg(long, value_delimiter = ',')]
        context: Option<Vec<String>>,
    },
    /// Two-sided semidirect product from a JSON file `{S, M, lambda, rho}`.
    Sdp {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run an invariant suite on seeded random instances.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: suites::Suite,
    },
    /// Sentences of bounded quantifier depth, as a finite algebra.
    DepthFragment {
        /// Quantifier names (repeatable), e.g. `E`, `mod[2,0]`.
        #[arg(long = "quantifier", required = true)]
        quantifiers: Vec<String>,
        /// Numerical predicate names (repeatable), e.g. `<`.
        #[arg(long = "predicate")]
        predicates: Vec<String>,
        #[arg(long)]
        depth: usize,
        /// Also compute the fragment by direct enumeration and compare.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Debug, clap::Args)]
pub struct DeltaArgs {
    /// The free variable of the generators.
    #[arg(long, default_value = "x")]
    pub var: String,
    /// Generating formulas (repeatable).
    #[arg(long = "gen")]
    pub gens: Vec<String>,
    /// Extra free variables shared by the generators.
    #[arg(long, value_delimiter = ',')]
    pub params: Vec<String>,
}

#[derive(Debug, clap::Args)]
pub struct CodecArgs {
    /// Variables to encode.
    #[arg(long, value_delimiter = ',', required = true)]
    pub encode: Vec<String>,
    /// Variables left free.
    #[arg(long, value_delimiter = ',')]
    pub keep: Vec<String>,
}

/// The result of one command.
pub struct Outcome {
    pub pass: bool,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    pub fn ok(text: impl Into<String>, json: Value) -> Outcome {
        Outcome {
            pass: true,
            text: text.into(),
            json,
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval { .. } => "eval",
        Command::Models { .. } => "models",
        Command::Equiv { .. } => "equiv",
        Command::Atoms { .. } => "atoms",
        Command::Substitute { .. } => "substitute",
        Command::Tau { .. } => "tau",
        Command::Encode { .. } => "encode",
        Command::Decode { .. } => "decode",
        Command::Synmon { .. } => "synmon",
        Command::QuotientClosure { .. } => "quotient-closure",
        Command::Compile { .. } => "compile",
        Command::Sdp { .. } => "sdp",
        Command::Verify { .. } => "verify",
        Command::DepthFragment { .. } => "depth-fragment",
    }
}

fn emit(format: Format, command: &str, out: &Outcome) {
    match format {
        Format::Text => print!("{}", out.text),
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("schema".into(), json!(SCHEMA));
            obj.insert("command".into(), json!(command));
            obj.insert("pass".into(), json!(out.pass));
            obj.insert("result".into(), out.json.clone());
            println!("{}", serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable"));
        }
    }
}

fn emit_error(format: Format, command: &str, e: &Error) {
    match format {
        Format::Text => eprintln!("error: {e}"),
        Format::Json => {
            let v = json!({"schema": SCHEMA, "command": command, "error": e.to_string()});
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let result = Caps::from_env().and_then(|caps| commands::run(&cli, &caps));
    match result {
        Ok(out) => {
            emit(cli.format, name, &out);
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            emit_error(cli.format, name, &e);
            ExitCode::from(2)
        }
    }
}
