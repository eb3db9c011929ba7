//! The `phi` command: one subcommand per pipeline stage, plus `run`.

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::atoms::Registry;
use crate::builder::build;
use crate::eval::{Io, Machine};
use crate::graph::{Graph, Trace};
use crate::pipeline::{evaluate, front, RunError};
use crate::syntax::{parse_data, print};
use crate::value::Value;
use crate::xmir::{parse_xmir, resolve_methods, resolve_refs, serialize_xmir, validate};
use crate::{FrontError, XmirError};

#[derive(Parser, Debug)]
#[command(name = "phi", version, about = "EO toolchain: parse, lower, build and dataize")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check syntax and print the program in canonical form.
    Parse {
        file: PathBuf,
    },
    /// Write XMIR.
    Ir {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the graph-modifying instruction trace.
    Gmi {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and dataize an object, printing its value.
    Run {
        file: PathBuf,
        /// Object to dataize, e.g. `fibo` or `balance.share`.
        #[arg(long)]
        main: Option<String>,
        /// Data literal bound to the next free attribute of the main object.
        #[arg(long = "arg", allow_hyphen_values = true)]
        args: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        stdin_file: Option<PathBuf>,
        /// Echo the trace to stderr before evaluating.
        #[arg(long)]
        trace: bool,
    },
}

/// Exit codes.
pub const OK: i32 = 0;
pub const BOTTOM: i32 = 1;
pub const FRONT: i32 = 2;

struct Fail(i32, String);

impl Fail {
    fn front(file: &Path, e: impl std::fmt::Display) -> Fail {
        Fail(FRONT, format!("{}:{e}", file.display()))
    }
}

fn read(file: &Path) -> Result<String, Fail> {
    fs::read_to_string(file).map_err(|e| Fail(FRONT, format!("{}: {e}", file.display())))
}

fn ext(file: &Path) -> &str {
    file.extension().and_then(|e| e.to_str()).unwrap_or("eo")
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), Fail> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Fail(FRONT, format!("{}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Fail(FRONT, e.to_string())),
    }
}

/// An XMIR document from source or from an XMIR file, normalized.
fn load_xmir(file: &Path, reg: &Registry) -> Result<crate::xmir::XmirDoc, Fail> {
    let text = read(file)?;
    if ext(file) == "xmir" {
        let doc = parse_xmir(&text).map_err(|e| Fail::front(file, format!(" {e}")))?;
        let doc = resolve_methods(doc).map_err(|e| Fail::front(file, format!(" {e}")))?;
        let (doc, _) = resolve_refs(doc, &|n| reg.global(n).is_some());
        if let Some(d) = validate(&doc).into_iter().next() {
            return Err(Fail::front(file, format!("{}: {}", d.line, d.message)));
        }
        return Ok(doc);
    }
    front(&text, reg).map(|f| f.xmir).map_err(|e| front_fail(file, e))
}

fn front_fail(file: &Path, e: FrontError) -> Fail {
    match e {
        FrontError::Parse(p) => Fail::front(file, p),
        FrontError::Xmir(XmirError::Invalid { line, message }) => Fail::front(file, format!("{line}: {message}")),
        FrontError::Build(b) if b.line() > 0 => Fail::front(file, format!("{}: {}", b.line(), strip_line(&b.to_string()))),
        other => Fail::front(file, format!(" {other}")),
    }
}

fn strip_line(msg: &str) -> &str {
    msg.split_once(": ").map(|(_, m)| m).unwrap_or(msg)
}

fn load_trace(file: &Path, reg: &Registry) -> Result<Trace, Fail> {
    if ext(file) == "gmi" {
        let text = read(file)?;
        return Trace::parse(&text).map_err(|e| Fail::front(file, format!(" {e}")));
    }
    let doc = load_xmir(file, reg)?;
    build(&doc, reg)
        .map(|b| b.trace)
        .map_err(|e| front_fail(file, e.into()))
}

fn dispatch(cli: Cli, reg: &Registry, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Fail> {
    match cli.command {
        Command::Parse { file } => {
            let src = read(&file)?;
            let ast = crate::syntax::parse(&src).map_err(|e| Fail::front(&file, e))?;
            emit(&None, &print(&ast), stdout)
        }
        Command::Ir { file, out } => {
            let doc = load_xmir(&file, reg)?;
            emit(&out, &serialize_xmir(&doc), stdout)
        }
        Command::Gmi { file, out } => {
            let trace = load_trace(&file, reg)?;
            emit(&out, &trace.to_text(), stdout)
        }
        Command::Run {
            file,
            main,
            args,
            out,
            stdin_file,
            trace,
        } => {
            let values = args
                .iter()
                .map(|a| parse_data(a).map_err(|e| Fail(FRONT, format!("--arg {a}: {e}"))))
                .collect::<Result<Vec<Value>, _>>()?;
            let t = load_trace(&file, reg)?;
            if trace {
                let _ = stderr.write_all(t.to_text().as_bytes());
            }
            let graph = Graph::from_trace(&t).map_err(|e| Fail::front(&file, format!(" {e}")))?;
            let mut io = Io::std();
            if let Some(p) = stdin_file {
                let f = fs::File::open(&p).map_err(|e| Fail(FRONT, format!("{}: {e}", p.display())))?;
                io.stdin = Box::new(BufReader::new(f));
            }
            let mut m = Machine::new(&graph, reg, io);
            let result = evaluate(&mut m, main.as_deref(), &values);
            let _ = m.io.stdout.flush();
            match result {
                Ok(v) => emit(&out, &format!("{v}\n"), stdout),
                Err(RunError::Bottom(b)) => Err(Fail(BOTTOM, b.to_string())),
                Err(RunError::Main(msg)) => Err(Fail(FRONT, format!("{}: {msg}", file.display()))),
                Err(RunError::Front(e)) => Err(front_fail(&file, e)),
            }
        }
    }
}

/// Runs one invocation; returns the process exit code.
pub fn run_cli(cli: Cli, reg: &Registry, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match dispatch(cli, reg, stdout, stderr) {
        Ok(()) => OK,
        Err(Fail(code, msg)) => {
            let _ = writeln!(stderr, "{msg}");
            code
        }
    }
}
