use super::{XmirDoc, XmirNode};
use crate::syntax::{Arg, Head, Kind, Object, Program};

/// Lowers the AST. An argument-free dot chain on a plain receiver comes out
/// flat, the method element marked `method` right after its receiver;
/// everything else nests the receiver as first child.
pub fn ast_to_xmir(program: &Program) -> XmirDoc {
    let mut objects = Vec::new();
    for o in &program.objects {
        objects.extend(lower(o, None));
    }
    XmirDoc {
        license: program.license.clone(),
        metas: program.metas.clone(),
        objects,
    }
}

fn is_plain(o: &Object) -> bool {
    if o.suffix.is_some() {
        return false;
    }
    match &o.kind {
        Kind::Data(_) => true,
        Kind::Application { args, .. } => args.is_empty(),
        Kind::DotChain { receiver, args, .. } => args.is_empty() && is_plain(receiver),
        Kind::Abstraction { .. } => false,
    }
}

fn named(node: &mut XmirNode, o: &Object, tag: Option<&str>) {
    if let Some(s) = &o.suffix {
        node.name = Some(s.name.clone());
        node.constant = s.constant;
    }
    node.tag = tag.map(str::to_string);
}

fn lower_args(args: &[Arg], into: &mut Vec<XmirNode>) {
    for a in args {
        into.extend(lower(&a.value, a.tag.as_deref()));
    }
}

fn lower(o: &Object, tag: Option<&str>) -> Vec<XmirNode> {
    let mut node = XmirNode::new(o.line);
    named(&mut node, o, tag);
    match &o.kind {
        Kind::Abstraction { attrs, body, atom } => {
            for a in attrs {
                let mut free = XmirNode::new(o.line);
                free.name = Some(a.name.clone());
                free.vararg = a.vararg;
                node.children.push(free);
            }
            for b in body {
                node.children.extend(lower(b, None));
            }
            node.atom = atom.clone();
            node.empty_abstraction = node.children.is_empty();
            vec![node]
        }
        Kind::Data(v) => {
            let kind = v.kind().expect("literals are never arrays");
            node.base = Some(kind.as_str().to_string());
            node.data = Some(kind);
            node.payload = Some(v.payload());
            vec![node]
        }
        Kind::Application {
            head,
            copy,
            spread,
            args,
        } => {
            node.base = Some(match head {
                Head::Name(n) => n.clone(),
                other => other.text().to_string(),
            });
            node.copy = *copy;
            node.spread = *spread;
            lower_args(args, &mut node.children);
            vec![node]
        }
        Kind::DotChain {
            receiver,
            method,
            args,
        } => {
            node.base = Some(format!(".{method}"));
            if is_plain(receiver) && args.is_empty() {
                node.method = true;
                let mut out = lower(receiver, None);
                lower_args(args, &mut node.children);
                out.push(node);
                out
            } else {
                node.children.extend(lower(receiver, None));
                lower_args(args, &mut node.children);
                vec![node]
            }
        }
    }
}
