mod common;

use phi_machine::atoms::Registry;
use phi_machine::graph::{EdgeKind, Gmi, Graph, Target, Trace, ROOT};
use phi_machine::pipeline::compile;

fn corpus_traces() -> Vec<(String, Trace)> {
    let reg = Registry::builtins();
    common::fixture_dir("corpus")
        .into_iter()
        .map(|p| {
            let src = std::fs::read_to_string(&p).unwrap();
            let (_, b) = compile(&src, &reg).unwrap();
            (p.display().to_string(), b.trace)
        })
        .collect()
}

#[test]
fn replaying_a_trace_changes_nothing() {
    for (name, t) in corpus_traces() {
        let mut g = Graph::from_trace(&t).unwrap();
        let once = g.clone();
        g.apply_all(&t.gmis).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(g, once, "{name}");
    }
}

#[test]
fn traces_are_deterministic_and_reparse() {
    let reg = Registry::builtins();
    let src = common::fixture("corpus/decoration.eo");
    let (_, a) = compile(&src, &reg).unwrap();
    let (_, b) = compile(&src, &reg).unwrap();
    assert_eq!(a.trace, b.trace);
    let text = a.trace.to_text();
    let back = Trace::parse(&text).unwrap();
    assert_eq!(back.to_text(), text);
    assert_eq!(Graph::from_trace(&back).unwrap(), a.graph);
}

#[test]
fn every_bind_sets_one_parent_edge() {
    for (name, t) in corpus_traces() {
        let g = Graph::from_trace(&t).unwrap();
        for gmi in &t.gmis {
            if let Gmi::Bind { from, to, .. } = gmi {
                let rhos: Vec<_> = g.edges_from(*to).iter().filter(|e| e.kind == EdgeKind::Rho).collect();
                assert_eq!(rhos.len(), 1, "{name}: v{to}");
                if g.vertex(*to).is_some_and(|v| v.delta.is_none()) {
                    assert_eq!(rhos[0].to, Target::Vertex(*from), "{name}: v{to}");
                }
            }
        }
    }
}

#[test]
fn unknown_vertices_are_errors() {
    let mut g = Graph::new();
    g.apply(&Gmi::Add { v: ROOT, data: None }).unwrap();
    assert!(g.apply(&Gmi::Bind { from: ROOT, to: 7, label: "a".into() }).is_err());
    assert!(Trace::parse("FROB(v1)").is_err());
}
