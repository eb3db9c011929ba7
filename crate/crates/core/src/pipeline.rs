//! Source to running program, one stage at a time.

use thiserror::Error;

use crate::atoms::Registry;
use crate::builder::{build, Built};
use crate::error::{FrontError, XmirError};
use crate::eval::{Bottom, Io, Machine, Res};
use crate::graph::{EdgeKind, Graph, Locator, Root, Target, VId, DELTA, ROOT};
use crate::syntax::{parse, Program};
use crate::value::Value;
use crate::xmir::{ast_to_xmir, resolve_methods, resolve_refs, validate, Diagnostic, XmirDoc};

/// Parsed, lowered and normalized source.
#[derive(Clone, Debug)]
pub struct Front {
    pub ast: Program,
    /// Straight from the AST, methods not yet desugared.
    pub raw: XmirDoc,
    /// After method and reference resolution.
    pub xmir: XmirDoc,
    /// Names nothing resolved; not fatal.
    pub warnings: Vec<Diagnostic>,
}

pub fn front(src: &str, registry: &Registry) -> Result<Front, FrontError> {
    let ast = parse(src)?;
    let raw = ast_to_xmir(&ast);
    let methods = resolve_methods(raw.clone())?;
    let (xmir, warnings) = resolve_refs(methods, &|name| registry.global(name).is_some());
    if let Some(d) = validate(&xmir).into_iter().next() {
        return Err(XmirError::Invalid {
            line: d.line,
            message: d.message,
        }
        .into());
    }
    Ok(Front {
        ast,
        raw,
        xmir,
        warnings,
    })
}

pub fn compile(src: &str, registry: &Registry) -> Result<(Front, Built), FrontError> {
    let f = front(src, registry)?;
    let built = build(&f.xmir, registry)?;
    Ok((f, built))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error(transparent)]
    Front(#[from] FrontError),
    #[error("{0}")]
    Main(String),
    #[error("{0}")]
    Bottom(#[from] Bottom),
}

/// The object `--main` names, else the only top-level object, else the
/// only closed one (no free attributes left to bind).
pub fn main_locator(g: &Graph, main: Option<&str>) -> Result<Locator, RunError> {
    if let Some(m) = main {
        let segs: Vec<String> = m.split('.').map(str::to_string).collect();
        return Ok(Locator::new(Root::Phi, segs));
    }
    let target = |l: &str| match g.out_edge(ROOT, l).map(|e| &e.to) {
        Some(Target::Vertex(v)) => Some(*v),
        _ => None,
    };
    let is_prelude = |l: &str| {
        target(l).is_some_and(|v| g.vertex(v).is_some_and(|x| x.lambda.is_some()) && !g.is_abstraction(v))
    };
    let is_open = |l: &str| {
        target(l).is_some_and(|v| {
            g.is_abstraction(v)
                && g.edges_from(v).iter().any(|e| match e.to {
                    Target::Vertex(t) => e.kind == EdgeKind::Solid && g.is_free(t),
                    _ => false,
                })
        })
    };
    let all: Vec<String> = g
        .edges_from(ROOT)
        .iter()
        .filter_map(|e| e.label.clone())
        .filter(|l| !is_prelude(l))
        .filter(|l| !target(l).is_some_and(|v| g.out_edge(v, DELTA).is_some()))
        .collect();
    let named: Vec<&String> = all.iter().filter(|l| !l.starts_with('ω')).collect();
    let closed: Vec<&String> = all.iter().filter(|l| !is_open(l)).collect();
    let pick = if all.len() == 1 {
        Some(&all[0])
    } else if closed.len() == 1 {
        Some(closed[0])
    } else if named.len() == 1 && closed.is_empty() {
        Some(named[0])
    } else {
        None
    };
    match pick {
        Some(one) => Ok(Locator::phi(&[one.as_str()])),
        None if all.is_empty() => Err(RunError::Main("nothing to run".into())),
        None => Err(RunError::Main(format!(
            "several top-level objects ({}); choose one with --main",
            named.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
        ))),
    }
}

/// Evaluates the main object with `args` bound to its free attributes.
pub fn evaluate(m: &mut Machine, main: Option<&str>, args: &[Value]) -> Result<Value, RunError> {
    let loc = main_locator(m.graph, main)?;
    let root = m.root();
    let target = m.resolve(&root, &loc)?;
    let target = bind_args(m, &target, args)?;
    Ok(m.dataize(&target)?)
}

fn bind_args(m: &mut Machine, target: &crate::eval::Obj, args: &[Value]) -> Res<crate::eval::Obj> {
    if args.is_empty() {
        return Ok(target.clone());
    }
    let v: Option<VId> = target.vertex();
    let free = v.map(|v| m.free_attrs(v)).unwrap_or_default();
    let vararg = v
        .and_then(|v| m.graph.out_edge(v, free.last()?))
        .and_then(|e| match e.to {
            Target::Vertex(t) => Some(m.graph.is_vararg(t)),
            _ => None,
        })
        .unwrap_or(false);
    let mut binds = Vec::new();
    let fixed = if vararg { free.len() - 1 } else { free.len() };
    if args.len() > fixed && !vararg {
        return Err(Bottom::new(format!(
            "{} takes {} arguments, got {}",
            m.describe(target),
            fixed,
            args.len()
        )));
    }
    for (name, a) in free.iter().zip(args.iter().take(fixed)) {
        let o = m.data(a.clone());
        binds.push((name.clone(), o));
    }
    if vararg {
        let rest: Vec<_> = args.iter().skip(fixed).cloned().collect();
        let items = rest.into_iter().map(|a| m.data(a)).collect();
        let arr = m.array(items);
        binds.push((free[fixed].clone(), arr));
    }
    Ok(m.apply(target, binds))
}

/// Compiles and runs `src` in one go.
pub fn run_source(src: &str, registry: &Registry, main: Option<&str>, args: &[Value], io: Io) -> Result<Value, RunError> {
    let (_, built) = compile(src, registry)?;
    let mut m = Machine::new(&built.graph, registry, io);
    evaluate(&mut m, main, args)
}

/// Runs `f` on a thread with a large stack; deep object chains recurse.
pub fn with_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(f)
        .expect("spawn evaluator thread")
        .join()
        .expect("evaluator thread panicked")
}
