mod common;

use std::collections::BTreeSet;

use phi_machine::atoms::Registry;
use phi_machine::graph::{EdgeKind, Gmi, Lambda, Locator, Root, Target, PHI, ROOT, SIGMA};
use phi_machine::pipeline::compile;
use phi_machine::{BuildError, FrontError};

fn build(src: &str) -> phi_machine::builder::Built {
    compile(src, &Registry::builtins()).map(|(_, b)| b).unwrap()
}

fn refs(b: &phi_machine::builder::Built) -> Vec<(String, Locator)> {
    b.trace
        .gmis
        .iter()
        .filter_map(|g| match g {
            Gmi::Ref { label, locator, .. } => Some((label.clone(), locator.clone())),
            _ => None,
        })
        .collect()
}

#[test]
fn abstraction_scope_is_its_declared_names() {
    let b = build(&common::fixture("corpus/book3.eo"));
    let book = b.graph.out_edge(ROOT, "book3").unwrap();
    let Target::Vertex(v) = book.to else { panic!() };
    let want: BTreeSet<String> = ["isbn", "title", "price", "set-price"].iter().map(|s| s.to_string()).collect();
    assert_eq!(b.graph.scope_of(v), want);
}

#[test]
fn special_heads_become_locator_roots() {
    let b = build("[x] > a\n  $.x > s\n  ^.a > r\n  &.x > h\n  x > @\n");
    let r = refs(&b);
    let root = |label: &str| r.iter().find(|(l, _)| l == label).map(|(_, loc)| loc.root);
    assert_eq!(root("s"), Some(Root::Xi));
    assert_eq!(root("r"), Some(Root::Rho));
    let home = r.iter().find(|(l, _)| l == "h").unwrap();
    assert_eq!(home.1.segments, vec![SIGMA.to_string()]);
    assert!(r.iter().any(|(l, _)| l == PHI));
}

#[test]
fn identity_access_is_a_dot_on_nu() {
    let b = build("[x] > a\n  x.< > i\n");
    let nu = b.graph.vertices().any(|v| v.lambda == Some(Lambda::Dot("ν".into())));
    assert!(nu);
}

#[test]
fn book2_prelude_and_ref() {
    let b = build(&common::fixture("golden/book2.eo"));
    let lines = b.trace.instructions();
    assert_eq!(lines[2], "ATOM(v1, M1)");
    assert_eq!(lines[10], "REF(e1, v2, Phi.memory, price)");
    assert_eq!(b.graph.edges().filter(|e| e.kind == EdgeKind::Dotted).count(), 0);
}

#[test]
fn build_errors() {
    let reg = Registry::builtins();
    let err = |src: &str| match compile(src, &reg) {
        Err(FrontError::Build(e)) => e,
        other => panic!("{src}: {other:?}"),
    };
    assert!(matches!(err("[] > b /nosuchatom\n"), BuildError::UnknownAtom { .. }));
    assert!(matches!(err("[x y] > p\n[] > a\n  p 1 2 3 > q\n"), BuildError::Arity { expected: 2, got: 3, .. }));
    // Caught by XMIR validation before the builder sees it.
    match compile("[x] > a\n  x > x\n", &reg) {
        Err(FrontError::Xmir(e)) => assert!(e.to_string().contains("duplicate attribute x")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn data_is_interned() {
    let b = build("[] > a\n  1 > x\n  1 > y\n  2 > z\n");
    let data = b.graph.vertices().filter(|v| v.delta.is_some()).count();
    assert_eq!(data, 2);
}
