//! Canonical source printer. Applications are printed on one line unless an
//! abstraction hides somewhere inside, in which case they go vertical.

use super::ast::*;

pub fn print(program: &Program) -> String {
    let mut out = String::new();
    for l in &program.license {
        if l.is_empty() {
            out.push_str("#\n");
        } else {
            out.push_str(&format!("# {l}\n"));
        }
    }
    if !program.license.is_empty() {
        out.push('\n');
    }
    for m in &program.metas {
        match &m.tail {
            Some(t) => out.push_str(&format!("+{} {}\n", m.head, t)),
            None => out.push_str(&format!("+{}\n", m.head)),
        }
    }
    if !program.metas.is_empty() {
        out.push('\n');
    }
    for (i, o) in program.objects.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        print_object(o, 0, None, &mut out);
    }
    out
}

fn suffix_text(s: &Option<Suffix>) -> String {
    match s {
        Some(s) => format!(" > {}{}", s.name, if s.constant { "!" } else { "" }),
        None => String::new(),
    }
}

fn tag_text(tag: Option<&str>) -> String {
    tag.map(|t| format!(":{t}")).unwrap_or_default()
}

fn has_abstraction(o: &Object) -> bool {
    match &o.kind {
        Kind::Abstraction { .. } => true,
        Kind::Data(_) => false,
        Kind::Application { args, .. } => args.iter().any(|a| has_abstraction(&a.value)),
        Kind::DotChain { receiver, args, .. } => {
            has_abstraction(receiver) || args.iter().any(|a| has_abstraction(&a.value))
        }
    }
}

fn head_text(head: &Head, copy: bool, spread: bool) -> String {
    format!(
        "{}{}{}",
        if spread { "..." } else { "" },
        head.text(),
        if copy { "'" } else { "" }
    )
}

fn is_name_method(m: &str) -> bool {
    m.chars().next().is_some_and(|c| c.is_alphabetic())
}

fn print_object(o: &Object, indent: usize, tag: Option<&str>, out: &mut String) {
    let pad = "  ".repeat(indent);
    match &o.kind {
        Kind::Abstraction { attrs, body, atom } => {
            let names: Vec<String> = attrs
                .iter()
                .map(|a| format!("{}{}", a.name, if a.vararg { "..." } else { "" }))
                .collect();
            out.push_str(&format!("{pad}[{}]{}{}", names.join(" "), tag_text(tag), suffix_text(&o.suffix)));
            if let Some(a) = atom {
                out.push_str(&format!(" /{a}"));
            }
            out.push('\n');
            for b in body {
                print_object(b, indent + 1, None, out);
            }
        }
        _ if !has_abstraction(o) => {
            let body = expr_tagged(o, tag);
            out.push_str(&format!("{pad}{body}{}\n", suffix_text(&o.suffix)));
        }
        Kind::Application {
            head,
            copy,
            spread,
            args,
        } => {
            out.push_str(&format!(
                "{pad}{}{}{}\n",
                head_text(head, *copy, *spread),
                tag_text(tag),
                suffix_text(&o.suffix)
            ));
            for a in args {
                print_object(&a.value, indent + 1, a.tag.as_deref(), out);
            }
        }
        Kind::DotChain {
            receiver,
            method,
            args,
        } if is_name_method(method) => {
            out.push_str(&format!("{pad}{method}.{}{}\n", tag_text(tag), suffix_text(&o.suffix)));
            print_object(receiver, indent + 1, None, out);
            for a in args {
                print_object(&a.value, indent + 1, a.tag.as_deref(), out);
            }
        }
        Kind::DotChain {
            receiver,
            method,
            args,
        } => {
            // `.^` and friends have no inverse form; use a continuation line.
            print_object(receiver, indent, None, out);
            out.push_str(&format!("{pad}.{method}{}{}\n", tag_text(tag), suffix_text(&o.suffix)));
            for a in args {
                print_object(&a.value, indent + 1, a.tag.as_deref(), out);
            }
        }
        Kind::Data(_) => unreachable!("data has no abstraction inside"),
    }
}

/// One-line form with the line's own tag after the head, where it cannot
/// be mistaken for a tag on the last argument.
fn expr_tagged(o: &Object, tag: Option<&str>) -> String {
    let t = tag_text(tag);
    match &o.kind {
        Kind::Application {
            head,
            copy,
            spread,
            args,
        } => {
            let mut s = format!("{}{t}", head_text(head, *copy, *spread));
            for a in args {
                s.push(' ');
                s.push_str(&arg(a));
            }
            s
        }
        Kind::DotChain {
            receiver,
            method,
            args,
        } => {
            let mut s = format!("{}.{}{t}", atomic(receiver), method);
            for a in args {
                s.push(' ');
                s.push_str(&arg(a));
            }
            s
        }
        _ => format!("{}{t}", expr(o)),
    }
}

/// One-line form without the suffix.
fn expr(o: &Object) -> String {
    match &o.kind {
        Kind::Data(v) => v.to_literal(),
        Kind::Application {
            head,
            copy,
            spread,
            args,
        } => {
            let mut s = head_text(head, *copy, *spread);
            for a in args {
                s.push(' ');
                s.push_str(&arg(a));
            }
            s
        }
        Kind::DotChain {
            receiver,
            method,
            args,
        } => {
            let mut s = format!("{}.{}", atomic(receiver), method);
            for a in args {
                s.push(' ');
                s.push_str(&arg(a));
            }
            s
        }
        Kind::Abstraction { .. } => unreachable!("abstractions are printed vertically"),
    }
}

fn arg(a: &Arg) -> String {
    format!("{}{}", atomic(&a.value), tag_text(a.tag.as_deref()))
}

fn is_atomic(o: &Object) -> bool {
    if o.suffix.is_some() {
        return false;
    }
    match &o.kind {
        Kind::Data(_) => true,
        Kind::Application { args, .. } => args.is_empty(),
        Kind::DotChain { receiver, args, .. } => args.is_empty() && is_atomic(receiver),
        Kind::Abstraction { .. } => false,
    }
}

fn atomic(o: &Object) -> String {
    if is_atomic(o) {
        expr(o)
    } else {
        format!("({}{})", expr(o), suffix_text(&o.suffix))
    }
}
