mod common;

use phi_machine::atoms::Registry;
use phi_machine::eval::{Io, Machine, SharedBuf};
use phi_machine::graph::{Locator, DELTA};
use phi_machine::pipeline::{compile, with_big_stack, RunError};
use phi_machine::Value;

fn machine_run(src: &'static str, f: impl FnOnce(&mut Machine) + Send + 'static) {
    with_big_stack(move || {
        let reg = common::geometry();
        let (_, b) = compile(src, &reg).unwrap();
        let mut m = Machine::new(&b.graph, &reg, Io::scripted("", SharedBuf::default()));
        f(&mut m);
    })
}

#[test]
fn discovery_is_repeatable() {
    machine_run(common::DECORATION, |m| {
        let l = Locator::phi(&["c", "center"]);
        let a = m.discover(&l, "y").unwrap();
        let b = m.discover(&l, "y").unwrap();
        assert_eq!(m.dataize(&a).unwrap(), Value::Int(9));
        assert_eq!(m.dataize(&a).unwrap(), m.dataize(&b).unwrap());
    });
}

#[test]
fn dataization_is_discovery_of_delta() {
    machine_run(common::DECORATION, |m| {
        for path in [&["c", "center", "x"][..], &["c", "radius"], &["is"]] {
            let l = Locator::phi(path);
            let obj = m.resolve(&m.root(), &l).unwrap();
            let through = m.discover(&l, DELTA).map(|d| d.value().cloned());
            let direct = m.dataize(&obj);
            assert_eq!(through.unwrap(), Some(direct.unwrap()), "{path:?}");
        }
    });
}

#[test]
fn decorated_attribute_is_found_through_phi() {
    machine_run(common::DECORATION, |m| {
        let x = m.discover(&Locator::phi(&["c"]), "x").unwrap();
        assert_eq!(m.dataize(&x).unwrap(), Value::Int(-3));
        let is = m.discover(&Locator::phi(&[]), "is").unwrap();
        assert_eq!(m.dataize(&is).unwrap(), Value::Bool(true));
    });
}

#[test]
fn missing_attribute_is_bottom() {
    machine_run(common::DECORATION, |m| {
        let err = m.discover(&Locator::phi(&["c"]), "nope").unwrap_err();
        assert!(err.message.contains("nope"), "{}", err.message);
    });
}

#[test]
fn abstract_object_cannot_be_dataized() {
    let (v, _) = common::run("[x] > a\n  x > @\n", &Registry::builtins(), Some("a"), &[], "");
    let Err(RunError::Bottom(b)) = v else { panic!("{v:?}") };
    assert!(b.message.contains("x"), "{}", b.message);
}

#[test]
fn error_object_carries_its_message() {
    let (v, _) = common::run("error \"nope\" > e\n", &Registry::builtins(), Some("e"), &[], "");
    assert_eq!(v.unwrap_err().to_string(), "nope");
}

#[test]
fn main_must_be_unambiguous() {
    let (v, _) = common::run("1 > a\n[] > b\n  2 > @\n[] > c\n  3 > @\n", &Registry::builtins(), None, &[], "");
    assert!(matches!(v, Err(RunError::Main(_))), "{v:?}");
}

#[test]
fn arguments_bind_free_attributes() {
    let src = common::fixture("corpus/fibo.eo");
    let (v, _) = common::run(&src, &Registry::builtins(), Some("fibo"), &[Value::Int(10)], "");
    assert_eq!(v.unwrap(), Value::Int(55));
    let (v, _) = common::run(&src, &Registry::builtins(), Some("fibo"), &[Value::Int(1), Value::Int(2)], "");
    assert!(matches!(v, Err(RunError::Bottom(_))));
}
