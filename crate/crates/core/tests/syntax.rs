mod common;

use phi_machine::syntax::{parse, print, tokenize, TokenKind};
use proptest::prelude::*;

fn balanced(src: &str) -> bool {
    let toks = tokenize(src).unwrap();
    let tabs = toks.iter().filter(|t| t.kind == TokenKind::Tab).count();
    let untabs = toks.iter().filter(|t| t.kind == TokenKind::Untab).count();
    tabs == untabs
}

#[test]
fn every_corpus_listing_parses_and_balances() {
    for p in common::fixture_dir("corpus").into_iter().chain(common::fixture_dir("run")) {
        let src = std::fs::read_to_string(&p).unwrap();
        parse(&src).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        assert!(balanced(&src), "{}", p.display());
    }
}

#[test]
fn succ_prev_forms_agree() {
    let h = parse(&common::fixture("corpus/succ-prev.eo")).unwrap().structure();
    let v = parse(&common::fixture("corpus/succ-prev-vertical.eo")).unwrap().structure();
    let one = parse(&common::fixture("corpus/succ-prev-horizontal.eo")).unwrap().structure();
    assert_eq!(h, v);
    assert_eq!(h, one);
}

#[test]
fn reversed_chain_is_the_nested_expression() {
    let a = parse(&common::fixture("corpus/vector.eo")).unwrap().structure();
    let b = parse(&common::fixture("corpus/vector-reversed.eo")).unwrap().structure();
    assert_eq!(a, b);
}

#[test]
fn errors_carry_positions() {
    let e = parse("[x] > a\n  x.plus (1\n").unwrap_err();
    assert_eq!(e.line(), 2);
    assert!(parse("[x > a\n").is_err());
    assert!(parse("[] > a\n   b > c\n").is_err());
}

#[test]
fn metas_and_license_survive_printing() {
    let src = common::fixture("corpus/app.eo");
    let p = parse(&src).unwrap();
    assert_eq!(p.license.len(), 3);
    assert_eq!(p.metas.len(), 2);
    assert_eq!(parse(&print(&p)).unwrap().structure(), p.structure());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn printed_programs_have_balanced_blocks(p in common::program()) {
        prop_assert!(balanced(&print(&p)));
    }
}
