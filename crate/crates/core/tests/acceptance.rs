//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::collections::{BTreeMap, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::atomic::Ordering;

use phi_machine::atoms::Registry;
use phi_machine::eval::{Io, Machine, SharedBuf};
use phi_machine::graph::{EdgeKind, Gmi, Graph, Locator, VertexKind, DELTA, DOT_T};
use phi_machine::pipeline::{compile, front, with_big_stack, RunError};
use phi_machine::syntax::{parse, print};
use phi_machine::xmir::{serialize_xmir, serialize_xmir_with, SerializeOptions};
use phi_machine::{GraphError, Value};
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use proptest::prelude::*;

use common::*;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1. GMI golden trace

/// Renames ids by order of first appearance, separately per prefix.
fn canonical(lines: &[String]) -> Vec<String> {
    let mut seen: HashMap<String, String> = HashMap::new();
    let mut count: HashMap<char, usize> = HashMap::new();
    lines
        .iter()
        .map(|l| {
            let l = l.trim().trim_end_matches(';');
            let (op, rest) = l.split_once('(').expect("instruction");
            let args: Vec<String> = rest
                .trim_end_matches(')')
                .split(',')
                .map(|a| {
                    let a = a.trim();
                    let mut cs = a.chars();
                    let p = cs.next().unwrap_or(' ');
                    let tail: String = cs.collect();
                    if "vdeM".contains(p) && tail.chars().all(|c| c.is_ascii_digit()) {
                        seen.entry(a.to_string())
                            .or_insert_with(|| {
                                let n = count.entry(p).or_default();
                                *n += 1;
                                format!("{p}#{n}")
                            })
                            .clone()
                    } else {
                        a.to_string()
                    }
                })
                .collect();
            format!("{op}({})", args.join(", "))
        })
        .collect()
}

fn gmi_golden() -> Outcome {
    let reg = Registry::builtins();
    let (_, built) = compile(&fixture("golden/book2.eo"), &reg).map_err(|e| e.to_string())?;
    let ours = built.trace.instructions();
    let golden: Vec<String> = fixture("golden/book2.gmi").lines().map(str::to_string).collect();
    check(ours.len() == 13, || format!("{} instructions", ours.len()))?;
    let (a, b) = (canonical(&ours), canonical(&golden));
    for (i, (x, y)) in a.iter().zip(&b).enumerate() {
        check(x == y, || format!("instruction {}: {x} vs {y}", i + 1))?;
    }
    Ok("13 instructions equal after id canonicalization".into())
}

// 2. Discovery oracle

fn discovery() -> Outcome {
    let reg = geometry();
    let (_, built) = compile(DECORATION, &reg).map_err(|e| e.to_string())?;
    let mut m = Machine::new(&built.graph, &reg, Io::scripted("", SharedBuf::default()));
    let l: Locator = "Phi.c.center.y".parse()?;
    let found = m.discover(&l, DELTA).map_err(|e| e.to_string())?;
    let v = found.data_vertex().ok_or("not a graph data vertex")?;
    let delta = built.graph.vertex(v).and_then(|x| x.delta.clone());
    check(delta == Some(Value::Int(9)), || format!("d{v} holds {delta:?}"))?;
    Ok(format!("data vertex d{v} holding 9"))
}

// 3. Decoration graph shape

/// The `is` graph as drawn: attribute and ref edges by label, dotted edge
/// count, vertex kinds. ρ edges are left out (see the README).
fn expected_edges() -> BTreeMap<(&'static str, &'static str), usize> {
    let solid = [
        "circle", "center", "radius", "is-inside", "p", "φ", "t", "point", "x", "y", "distance", "to", "c",
        "radius", "Δ", "center", "x", "Δ", "y", "Δ", "is", "p", "x", "Δ", "y", "Δ",
    ];
    let refs = ["φ", "other", "to", "t"];
    let mut out = BTreeMap::new();
    for l in solid {
        *out.entry(("solid", l)).or_default() += 1;
    }
    for l in refs {
        *out.entry(("ref", l)).or_default() += 1;
    }
    out.insert(("dotted", ""), 6);
    out
}

fn graph_shape() -> Outcome {
    let reg = geometry();
    let (_, built) = compile(DECORATION, &reg).map_err(|e| e.to_string())?;
    let g = &built.graph;
    let mut kinds = [0usize; 3];
    for v in g.vertices() {
        kinds[match v.kind {
            VertexKind::Plain => 0,
            VertexKind::Atom => 1,
            VertexKind::Data => 2,
        }] += 1;
    }
    check(kinds == [21, 3, 5], || format!("plain/atom/data = {kinds:?}"))?;
    let mut ours: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for e in g.edges() {
        let kind = match e.kind {
            EdgeKind::Solid => "solid",
            EdgeKind::Ref => "ref",
            EdgeKind::Dotted => "dotted",
            EdgeKind::Rho => continue,
        };
        let l = match e.label.as_deref() {
            Some(DOT_T) => "t",
            Some(l) => l,
            None => "",
        };
        *ours.entry((kind, l)).or_default() += 1;
    }
    let want = expected_edges();
    check(ours == want, || format!("edge multiset differs: {ours:?}"))?;
    let mut m = Machine::new(g, &reg, Io::scripted("", SharedBuf::default()));
    let expect = [
        ("Phi.c.radius", 40),
        ("Phi.c.center.x", -3),
        ("Phi.c.center.y", 9),
        ("Phi.is.p.x", 1),
        ("Phi.is.p.y", 7),
    ];
    let mut seen = Vec::new();
    for (path, want) in expect {
        let l: Locator = path.parse()?;
        let d = m.discover(&l, DELTA).map_err(|e| format!("{path}: {e}"))?;
        let v = d.data_vertex().ok_or_else(|| format!("{path} is not a data vertex"))?;
        check(g.vertex(v).and_then(|x| x.delta.clone()) == Some(Value::Int(want)), || {
            format!("{path} is d{v}, not {want}")
        })?;
        seen.push(v);
    }
    seen.sort();
    seen.dedup();
    check(seen.len() == 5, || "data vertices are shared".into())?;
    Ok("21 plain, 3 atom, 5 data; 30 labelled edges, 6 dotted; data 40 -3 9 1 7".into())
}

// 4. Program results

fn int(v: &Result<Value, RunError>) -> Option<i64> {
    match v {
        Ok(Value::Int(i)) => Some(*i),
        _ => None,
    }
}

fn program_results() -> Outcome {
    let reg = Registry::builtins();
    let fibo = fixture("corpus/fibo.eo");
    for (n, want) in [(0, 0), (1, 1), (7, 13), (10, 55)] {
        let (v, _) = run(&fibo, &reg, Some("fibo"), &[Value::Int(n)], "");
        check(int(&v) == Some(want), || format!("fibo {n} = {v:?}"))?;
    }
    let leap = fixture("run/leap-year.eo");
    for (y, want) in [(2000, true), (1900, false), (2012, true), (2021, false)] {
        let (v, out) = run(&leap, &reg, None, &[], &format!("{y}\n"));
        v.map_err(|e| format!("leap {y}: {e}"))?;
        let line = format!("{y} is a leap year? {want}\n");
        check(out == format!("Enter a year:\n{line}"), || format!("leap {y} printed {out:?}"))?;
    }
    let circle = fixture("corpus/decoration.eo");
    let (v, _) = run(&circle, &reg, Some("i"), &[], "");
    check(v == Ok(Value::Bool(true)), || format!("c.is-inside (point 0 0) = {v:?}"))?;
    let (v, _) = run("sum 8 13 -9 > total\n", &reg, Some("total"), &[], "");
    check(int(&v) == Some(12), || format!("sum = {v:?}"))?;
    Ok("fibo 0 1 7 10, leap years, circle, sum".into())
}

// 5. Identity

pub const IDENTITY: [(&str, bool); 7] = [
    ("TRUE.<.eq (TRUE.<)", true),
    ("42.<.eq (42.<)", true),
    ("point.<.eq (point.<)", true),
    ("42.<.eq (7.<)", false),
    ("(2.plus 2).<.eq (4.<)", false),
    ("(point 3 5).<.eq ((point 3 5).<)", false),
    ("(* 1 2).<.eq ((* 1 2).<)", false),
];

fn identity() -> Outcome {
    let reg = Registry::builtins();
    for (e, want) in IDENTITY {
        let src = format!("[x y] > point\n[] > t\n  {e} > @\n");
        let (v, _) = run(&src, &reg, Some("t"), &[], "");
        check(v == Ok(Value::Bool(want)), || format!("{e} = {v:?}"))?;
    }
    Ok("3 true and 4 false expressions".into())
}

// 6. XMIR goldens

fn normalize(xml: &str) -> String {
    xml.split_whitespace().collect::<Vec<_>>().join(" ").replace("> <", "><")
}

fn xmir_goldens() -> Outcome {
    let reg = Registry::builtins();
    let circle = front(&fixture("corpus/circle-simple.eo"), &reg).map_err(|e| e.to_string())?;
    let got = serialize_xmir_with(&circle.raw, SerializeOptions { lines: false });
    check(normalize(&got) == normalize(&fixture("golden/circle.xmir")), || format!("circle:\n{got}"))?;
    let app = front(&fixture("corpus/app-const.eo"), &reg).map_err(|e| e.to_string())?;
    let got = serialize_xmir(&app.raw);
    check(normalize(&got) == normalize(&fixture("golden/app.xmir")), || format!("app:\n{got}"))?;
    Ok("circle and app".into())
}

// 7. Property suites

fn runner() -> TestRunner {
    let config = Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn label() -> impl Strategy<Value = String> {
    proptest::sample::select(vec!["a", "b", "c", "φ", "Δ"]).prop_map(str::to_string)
}

fn gmi() -> impl Strategy<Value = Gmi> {
    let v = 0usize..6;
    let e = 1usize..8;
    prop_oneof![
        (v.clone(), proptest::option::of(-3i64..3)).prop_map(|(v, d)| Gmi::Add {
            v,
            data: d.map(Value::Int)
        }),
        (v.clone(), v.clone(), label()).prop_map(|(from, to, label)| Gmi::Bind { from, to, label }),
        (e.clone(), v.clone(), label(), proptest::sample::select(vec!["Phi.a", "rho.b", "xi.c.d"]))
            .prop_map(|(edge, from, label, l)| Gmi::Ref {
                edge,
                from,
                locator: l.parse().unwrap(),
                label
            }),
        (e.clone(), label(), 6usize..9, 8usize..12).prop_map(|(edge, method, v, new_edge)| Gmi::Dot {
            edge,
            method,
            v,
            new_edge
        }),
        (e.clone(), 6usize..9, 8usize..12).prop_map(|(edge, v, new_edge)| Gmi::Copy { edge, v, new_edge }),
        v.prop_map(|v| Gmi::Atom {
            v,
            lambda: "org.eolang.seq".into()
        }),
    ]
}

fn gmi_idempotence() -> Result<(), String> {
    let stream = proptest::collection::vec(gmi(), 1..30);
    runner()
        .run(&stream, |gs| {
            let mut g = Graph::new();
            g.apply(&Gmi::Add { v: 0, data: None }).unwrap();
            for x in &gs {
                if g.apply(x).is_ok() {
                    let once = g.clone();
                    g.apply(x).map_err(|e| TestCaseError::fail(format!("{x:?} twice: {e}")))?;
                    prop_assert_eq!(&g, &once, "{:?} changed the graph again", x);
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn rebind_rejection() -> Result<(), String> {
    let s = (2usize..8, 0usize..8, 0usize..8, 0usize..8, label());
    runner()
        .run(&s, |(n, a, b, c, l)| {
            let (a, b, c) = (a % n, b % n, c % n);
            prop_assume!(b != c);
            let mut g = Graph::new();
            for v in 0..n {
                g.apply(&Gmi::Add { v, data: None }).unwrap();
            }
            g.apply(&Gmi::Bind { from: a, to: b, label: l.clone() }).unwrap();
            let before = g.clone();
            let r = g.apply(&Gmi::Bind { from: a, to: c, label: l.clone() });
            prop_assert!(matches!(r, Err(GraphError::Rebind { .. })), "got {:?}", r);
            prop_assert_eq!(&g, &before);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn parser_round_trip() -> Result<(), String> {
    runner()
        .run(&program(), |p| {
            let text = print(&p);
            let q = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
            prop_assert_eq!(print(&q), text.clone());
            prop_assert_eq!(q.structure(), p.structure(), "{}", text);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

const POOL: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

fn decoration_law() -> Result<(), String> {
    let reg = Registry::builtins();
    let s = (
        proptest::collection::btree_map(proptest::sample::select(POOL.to_vec()), -50i64..50, 1..6),
        proptest::collection::btree_map(proptest::sample::select(POOL.to_vec()), -50i64..50, 0..4),
        -20i64..20,
    );
    runner()
        .run(&s, |(base, own, k)| {
            let mut src = String::from("[k] > base\n");
            for (n, v) in &base {
                src.push_str(&format!("  k.plus {v} > {n}\n"));
            }
            src.push_str(&format!("[] > deco\n  base {k} > @\n"));
            for (n, v) in &own {
                src.push_str(&format!("  {v} > {n}\n"));
            }
            src.push_str(&format!("base {k} > direct\n"));
            let (_, built) = compile(&src, &reg).map_err(|e| TestCaseError::fail(format!("{e}\n{src}")))?;
            let mut m = Machine::new(&built.graph, &reg, Io::scripted("", SharedBuf::default()));
            for (n, v) in &base {
                let through: Locator = format!("Phi.deco.{n}").parse().unwrap();
                let direct: Locator = format!("Phi.direct.{n}").parse().unwrap();
                let a = m.discover(&through, DELTA).map_err(|e| TestCaseError::fail(e.to_string()))?;
                let b = m.discover(&direct, DELTA).map_err(|e| TestCaseError::fail(e.to_string()))?;
                if own.contains_key(n) {
                    prop_assert_eq!(a.value(), Some(&Value::Int(own[n])));
                } else {
                    prop_assert_eq!(a.value(), b.value(), "{}", src);
                    prop_assert_eq!(a.value(), Some(&Value::Int(k + v)));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn const_cache() -> Result<(), String> {
    let s = (1usize..10, any::<bool>());
    runner()
        .run(&s, |(uses, constant)| {
            let (reg, calls) = counting();
            let mut src = format!("[] > app\n  tick > t{}\n  seq > @\n", if constant { "!" } else { "" });
            for _ in 0..uses {
                src.push_str("    t\n");
            }
            let (v, _) = run(&src, &reg, Some("app"), &[], "");
            prop_assert!(v.is_ok(), "{:?}", v);
            let n = calls.load(Ordering::SeqCst);
            prop_assert_eq!(n, if constant { 1 } else { uses }, "{}", src);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn properties() -> Outcome {
    let suites: [(&str, fn() -> Result<(), String>); 5] = [
        ("gmi idempotence", gmi_idempotence),
        ("rebind rejection", rebind_rejection),
        ("parser round trip", parser_round_trip),
        ("decoration law", decoration_law),
        ("const cache", const_cache),
    ];
    let mut failed = Vec::new();
    for (name, f) in suites {
        if let Err(e) = f() {
            failed.push(format!("{name}: {e}"));
        }
    }
    if failed.is_empty() {
        Ok("5 suites x 1000 cases".into())
    } else {
        Err(failed.join("; "))
    }
}

// 8. Full corpus smoke

/// Runnable programs: file, main, stdin, expected value, expected output.
const RUNNABLE: &[(&str, Option<&str>, &str, &str, &str)] = &[
    ("corpus/app.eo", None, "", "true", "Hello, world!\n"),
    ("corpus/fibo.eo", Some("fibo"), "", "5", ""),
    ("corpus/identity.eo", None, "", "[true, true, true, false, false, false, false]", ""),
    ("corpus/decoration.eo", Some("i"), "", "true", ""),
    ("run/leap-year.eo", None, "2012\n", "true", "Enter a year:\n2012 is a leap year? true\n"),
    ("run/sum.eo", Some("total"), "", "12", ""),
    ("run/hello-const.eo", None, "abc\n", "true", "The length of abc is 3\n"),
    ("run/streams.eo", Some("main"), "", "true", "DEBUG: Hello, world!\n"),
    ("run/while.eo", None, "", "true", ""),
    ("run/mutability.eo", Some("main"), "", "45.0", ""),
    ("run/inheritance.eo", Some("v"), "", "6.28", ""),
    ("run/book3.eo", Some("main"), "", "19.99", ""),
    ("run/try.eo", None, "", "true", "caught boom\nThis happens anyway\n"),
    ("run/point.eo", Some("d"), "", "10.564563407921787", ""),
    ("run/vector.eo", Some("l"), "", "5.0", ""),
    ("run/calendar.eo", None, "", "2013-4-6", ""),
    ("run/sum-div.eo", None, "", "19", ""),
    ("run/arrays.eo", Some("s"), "", "49", ""),
];

fn corpus_smoke() -> Outcome {
    let reg = Registry::builtins();
    let files = fixture_dir("corpus");
    for p in &files {
        let src = std::fs::read_to_string(p).unwrap();
        compile(&src, &reg).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    for (file, main, stdin, value, out) in RUNNABLE {
        let src = fixture(file);
        let args = if *file == "corpus/fibo.eo" { vec![Value::Int(5)] } else { vec![] };
        let (v, printed) = run(&src, &reg, *main, &args, stdin);
        let v = v.map_err(|e| format!("{file}: {e}"))?;
        check(v.to_string() == *value, || format!("{file} = {v}"))?;
        if *file == "run/while.eo" {
            check(printed == "even!\n".repeat(50), || format!("{file} printed {printed:?}"))?;
        } else {
            check(printed == *out, || format!("{file} printed {printed:?}"))?;
        }
    }
    let bin = env!("CARGO_BIN_EXE_phi");
    let division = format!("{}/tests/fixtures/corpus/division.eo", env!("CARGO_MANIFEST_DIR"));
    let o = Command::new(bin)
        .args(["run", &division, "--main", "balance.share", "--arg", "0"])
        .output()
        .map_err(|e| e.to_string())?;
    let err = String::from_utf8_lossy(&o.stderr);
    check(o.status.code() == Some(1), || format!("division exited {:?}", o.status.code()))?;
    check(err.contains("The number can't be zero"), || format!("division said {err:?}"))?;
    Ok(format!(
        "{} listings build, {} runs clean, division exits 1",
        files.len(),
        RUNNABLE.len()
    ))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("gmi golden trace", gmi_golden),
        ("discovery oracle", discovery),
        ("decoration graph shape", graph_shape),
        ("program results", program_results),
        ("identity semantics", identity),
        ("xmir goldens", xmir_goldens),
        ("property suites", properties),
        ("full corpus smoke", corpus_smoke),
    ];
    let results = with_big_stack(move || {
        let hook = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {}));
        let out: Vec<(usize, &str, Outcome)> = criteria
            .into_iter()
            .enumerate()
            .map(|(i, (name, f))| {
                let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
                    let msg = p
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_else(|| "panicked".into());
                    Err(msg)
                });
                (i + 1, name, r)
            })
            .collect();
        std::panic::set_hook(hook);
        out
    });
    let mut failed = 0;
    for (i, name, r) in &results {
        match r {
            Ok(detail) => println!("PASS {i} {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {i} {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
