//! `densevec`: batch front end over the `.qts` text format.

mod commands;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use densevec::model::ModelSession;
use densevec::qe::Completion;
use serde_json::{json, Value as Json};

#[derive(Parser, Debug)]
#[command(name = "densevec", version, about = "Decide, eliminate and build models for T_t")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Type of the constant 1.
    #[arg(long, global = true, default_value = "germ-pos-inf")]
    pub completion: Completion,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Report QE statistics.
    #[arg(long, global = true)]
    pub stats: bool,
    /// Write the model session next to each input (`<input>.session`).
    #[arg(long, global = true)]
    pub dump_session: bool,
    /// Process input files in parallel, one session per file.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Inputs {
    /// Input files; standard input when none are given.
    pub files: Vec<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Decide each sentence.
    Decide(Inputs),
    /// Eliminate all quantifiers.
    Qe(Inputs),
    /// Eliminate `∃^∞` from `(exists-inf (x) φ)`, or from φ with `--var x`.
    Einf {
        #[arg(long)]
        var: Option<String>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Interior of the defined set.
    Interior {
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Closure of the defined set.
    Closure {
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Whether the defined set is open.
    IsOpen {
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// A fresh generator with `λ_{dirs[i]}(g)` inside `boxes[i]`.
    Witness {
        /// `;`-separated rational functions, e.g. `1;t`.
        #[arg(long)]
        dirs: String,
        /// `;`-separated open intervals, e.g. `(0,1);(5,6)`.
        #[arg(long)]
        boxes: String,
    },
    /// Whether `target` is in the Q(t)-span of `set`.
    Span {
        #[arg(long)]
        target: String,
        /// `;`-separated elements over `one`, `g0`, `g1`, …
        #[arg(long, default_value = "")]
        set: String,
    },
    /// Steinitz exchange check for `a`, `b` over `set`.
    Exchange {
        #[arg(long, default_value = "")]
        set: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Witness for a path through a row × column array of intervals.
    Nonstrong {
        #[arg(long)]
        rows: String,
        #[arg(long)]
        cols: String,
        /// Comma-separated column index per row.
        #[arg(long, value_delimiter = ',')]
        path: Vec<usize>,
    },
    /// Split each `(chain …)` into its base and Skolem parts.
    SkolemSplit(Inputs),
    /// Build each `(axiom (vars …) (k n) φ (config …))` instance.
    SkolemAxiom(Inputs),
    /// Check a finite `(table …)` at `(points …)`.
    SkolemCheck(Inputs),
}

/// Error classes; input errors exit with 2, the rest with 1.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Run(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Run(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Run(m) => m,
        }
    }
}

impl From<densevec::Error> for Failure {
    fn from(e: densevec::Error) -> Self {
        use densevec::Error as E;
        match e {
            E::Parse { .. }
            | E::UnboundVariable(_)
            | E::FreeVariables(_)
            | E::UnknownSymbol(_)
            | E::ArityMismatch(_)
            | E::MalformedTheta(_)
            | E::NotQuantifierFree
            | E::QuantifierInDnfInput
            | E::SessionFormat(_) => Failure::Input(e.to_string()),
            _ => Failure::Run(e.to_string()),
        }
    }
}

/// One result: text lines and the matching JSON record.
pub struct Item {
    pub text: Vec<String>,
    pub json: Json,
}

pub struct Output {
    pub items: Vec<Item>,
    pub session: Option<ModelSession>,
}

enum Source {
    Stdin,
    File(PathBuf),
    Flags,
}

impl Source {
    fn label(&self) -> String {
        match self {
            Source::Stdin => "<stdin>".into(),
            Source::File(p) => p.display().to_string(),
            Source::Flags => "<flags>".into(),
        }
    }

    fn session_path(&self, command: &str) -> PathBuf {
        match self {
            Source::File(p) => p.with_extension("session"),
            _ => PathBuf::from(format!("densevec-{command}.session")),
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Decide(_) => "decide",
        Command::Qe(_) => "qe",
        Command::Einf { .. } => "einf",
        Command::Interior { .. } => "interior",
        Command::Closure { .. } => "closure",
        Command::IsOpen { .. } => "is-open",
        Command::Witness { .. } => "witness",
        Command::Span { .. } => "span",
        Command::Exchange { .. } => "exchange",
        Command::Nonstrong { .. } => "nonstrong",
        Command::SkolemSplit(_) => "skolem-split",
        Command::SkolemAxiom(_) => "skolem-axiom",
        Command::SkolemCheck(_) => "skolem-check",
    }
}

fn inputs(c: &Command) -> Option<&Inputs> {
    match c {
        Command::Decide(i) | Command::Qe(i) | Command::SkolemSplit(i) | Command::SkolemAxiom(i) | Command::SkolemCheck(i) => Some(i),
        Command::Einf { inputs, .. }
        | Command::Interior { inputs, .. }
        | Command::Closure { inputs, .. }
        | Command::IsOpen { inputs, .. } => Some(inputs),
        _ => None,
    }
}

fn run_source(cli: &Cli, src: &Source, stdin: &str) -> Result<Output, Failure> {
    let text = match src {
        Source::File(p) => std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("cannot read: {e}")))?,
        Source::Stdin => stdin.to_string(),
        Source::Flags => String::new(),
    };
    commands::run(cli, &text)
}

fn write_session(path: &Path, s: &ModelSession) -> Result<(), Failure> {
    std::fs::write(path, s.dump()).map_err(|e| Failure::Run(format!("cannot write {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let name = command_name(&cli.command);
    let sources: Vec<Source> = match inputs(&cli.command) {
        Some(i) if i.files.is_empty() => vec![Source::Stdin],
        Some(i) => i.files.iter().cloned().map(Source::File).collect(),
        None => vec![Source::Flags],
    };
    let mut stdin = String::new();
    if matches!(sources[..], [Source::Stdin]) && std::io::stdin().read_to_string(&mut stdin).is_err() {
        eprintln!("densevec: cannot read standard input");
        return ExitCode::from(2);
    }

    let jobs = cli.jobs.max(1).min(sources.len());
    let mut results: Vec<Option<Result<Output, Failure>>> = (0..sources.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunk = sources.len().div_ceil(jobs);
        let handles: Vec<_> = sources
            .chunks(chunk)
            .map(|part| {
                let (cli, stdin) = (&cli, &stdin);
                scope.spawn(move || part.iter().map(|s| run_source(cli, s, stdin)).collect::<Vec<_>>())
            })
            .collect();
        let mut k = 0;
        for h in handles {
            for r in h.join().expect("worker panicked") {
                results[k] = Some(r);
                k += 1;
            }
        }
    });

    let mut code = 0u8;
    let mut records = Vec::new();
    for (src, r) in sources.iter().zip(results) {
        match r.expect("every input processed") {
            Ok(out) => {
                let mut session_path = None;
                if cli.dump_session {
                    if let Some(s) = &out.session {
                        let p = src.session_path(name);
                        if let Err(f) = write_session(&p, s) {
                            eprintln!("densevec: {}", f.message());
                            code = code.max(f.code());
                        }
                        session_path = Some(p.display().to_string());
                    }
                }
                if cli.format == Format::Text {
                    if sources.len() > 1 {
                        println!("; {}", src.label());
                    }
                    for line in out.items.iter().flat_map(|i| &i.text) {
                        println!("{line}");
                    }
                    if let Some(p) = &session_path {
                        println!("; session written to {p}");
                    }
                }
                records.push(json!({
                    "input": src.label(),
                    "items": out.items.into_iter().map(|i| i.json).collect::<Vec<_>>(),
                    "session": session_path,
                }));
            }
            Err(f) => {
                eprintln!("densevec: {}: {}", src.label(), f.message());
                code = code.max(f.code());
                records.push(json!({ "input": src.label(), "error": f.message() }));
            }
        }
    }
    if cli.format == Format::Json {
        let doc = json!({
            "command": name,
            "completion": cli.completion.to_string(),
            "seed": cli.seed,
            "results": records,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    }
    ExitCode::from(code)
}
