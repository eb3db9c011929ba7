#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use phi_machine::atoms::Registry;
use phi_machine::eval::{Bottom, Io, Obj, Res, SharedBuf};
use phi_machine::pipeline::{run_source, RunError};
use phi_machine::syntax::{Arg, FreeAttr, Head, Kind, Object, Program, Suffix};
use phi_machine::Value;
use proptest::prelude::*;

pub fn fixture(rel: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn fixture_dir(rel: &str) -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel);
    let mut out: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "eo"))
        .collect();
    out.sort();
    out
}

/// Runs a program with scripted stdin; returns the value and what it printed.
pub fn run(src: &str, reg: &Registry, main: Option<&str>, args: &[Value], stdin: &str) -> (Result<Value, RunError>, String) {
    let buf = SharedBuf::default();
    let v = run_source(src, reg, main, args, Io::scripted(stdin, buf.clone()));
    (v, buf.text())
}

fn as_f64(v: Value) -> Res<f64> {
    match v {
        Value::Int(i) => Ok(i as f64),
        Value::Float(f) => Ok(f),
        other => Err(Bottom::new(format!("not a number: {other}"))),
    }
}

/// Built-ins plus `point.distance`, the atom the decoration program names.
pub fn geometry() -> Registry {
    let mut r = Registry::builtins();
    r.add("point.distance", &["to"], false, false, |m, me| {
        let p = m.receiver(me)?;
        let to = m.arg(me, "point.distance", 0)?;
        let mut coord = |o: &Obj, a: &str| -> Res<f64> {
            let x = m.get(o, a)?;
            let v = m.dataize(&x)?;
            as_f64(v)
        };
        let dx = coord(&p, "x")? - coord(&to, "x")?;
        let dy = coord(&p, "y")? - coord(&to, "y")?;
        Ok(m.data(Value::Float((dx * dx + dy * dy).sqrt())))
    })
    .unwrap();
    r
}

pub const DECORATION: &str = "\
[x y] > point
  [to] > distance /float
[center radius] > circle
  center > @
  [p] > is-inside
    (^.@.distance p).lte radius > @
circle (point -3 9) 40 > c
c.is-inside (point 1 7) > is
";

/// A registry with a global `tick` atom that counts its calls.
pub fn counting() -> (Registry, Arc<AtomicUsize>) {
    let n = Arc::new(AtomicUsize::new(0));
    let mut r = Registry::builtins();
    let c = n.clone();
    r.add("org.eolang.tick", &[], false, true, move |m, _| {
        let k = c.fetch_add(1, Ordering::SeqCst) + 1;
        Ok(m.data(Value::Int(k as i64)))
    })
    .unwrap();
    (r, n)
}

// Random ASTs for round-trip properties.

const NAMES: &[&str] = &["a", "b", "x", "foo", "bar-baz", "y2", "item_3"];

fn name() -> impl Strategy<Value = String> {
    proptest::sample::select(NAMES).prop_map(str::to_string)
}

fn data() -> impl Strategy<Value = Value> {
    prop_oneof![
        (-1000i64..1000).prop_map(Value::Int),
        proptest::sample::select(vec![0.5, 1.25, -3.75, 2.0, 1e-5]).prop_map(Value::Float),
        "[a-zA-Z0-9 ,!?]{0,8}".prop_map(Value::Str),
        any::<bool>().prop_map(Value::Bool),
        proptest::collection::vec(any::<u8>(), 0..4).prop_map(Value::Bytes),
    ]
}

fn suffix() -> impl Strategy<Value = Option<Suffix>> {
    prop_oneof![
        2 => Just(None),
        1 => (name(), any::<bool>()).prop_map(|(name, constant)| Some(Suffix { name, constant })),
    ]
}

fn head() -> impl Strategy<Value = Head> {
    prop_oneof![
        6 => name().prop_map(Head::Name),
        1 => proptest::sample::select(vec![Head::This, Head::Parent, Head::Home, Head::Phi, Head::Star]),
    ]
}

fn leaf() -> impl Strategy<Value = Object> {
    prop_oneof![
        data().prop_map(|v| Object::new(Kind::Data(v), 0)),
        (head(), any::<bool>()).prop_map(|(head, copy)| {
            let copy = copy && matches!(head, Head::Name(_));
            Object::new(
                Kind::Application {
                    head,
                    copy,
                    spread: false,
                    args: Vec::new(),
                },
                0,
            )
        }),
    ]
}

fn arg(inner: BoxedStrategy<Object>) -> impl Strategy<Value = Arg> {
    (inner, proptest::option::weighted(0.2, name())).prop_map(|(value, tag)| Arg { value, tag })
}

fn object() -> impl Strategy<Value = Object> {
    leaf().prop_recursive(4, 24, 3, |inner| {
        let inner = inner.boxed();
        prop_oneof![
            (name(), proptest::collection::vec(arg(inner.clone()), 1..3)).prop_map(|(n, args)| {
                Object::new(
                    Kind::Application {
                        head: Head::Name(n),
                        copy: false,
                        spread: false,
                        args,
                    },
                    0,
                )
            }),
            (
                inner.clone(),
                prop_oneof![4 => name(), 1 => Just("<".to_string()), 1 => Just("^".to_string())],
                proptest::collection::vec(arg(inner.clone()), 0..3)
            )
                .prop_map(|(receiver, method, args)| {
                    Object::new(
                        Kind::DotChain {
                            receiver: Box::new(receiver),
                            method,
                            args,
                        },
                        0,
                    )
                }),
            (
                proptest::collection::btree_set(name(), 0..3),
                any::<bool>(),
                proptest::collection::vec((inner.clone(), suffix()), 0..3)
            )
                .prop_map(|(attrs, vararg, body)| {
                    let n = attrs.len();
                    let attrs = attrs
                        .into_iter()
                        .enumerate()
                        .map(|(i, name)| FreeAttr {
                            name,
                            vararg: vararg && i + 1 == n,
                        })
                        .collect();
                    let body = body
                        .into_iter()
                        .map(|(mut o, s)| {
                            if o.suffix.is_none() {
                                o.suffix = s;
                            }
                            o
                        })
                        .collect();
                    Object::new(Kind::Abstraction { attrs, body, atom: None }, 0)
                }),
        ]
    })
}

pub fn program() -> impl Strategy<Value = Program> {
    proptest::collection::vec((object(), suffix()), 1..4).prop_map(|objs| Program {
        license: Vec::new(),
        metas: Vec::new(),
        objects: objs
            .into_iter()
            .map(|(mut o, s)| {
                if o.suffix.is_none() {
                    o.suffix = s;
                }
                o
            })
            .collect(),
        comments: Vec::new(),
    })
}
