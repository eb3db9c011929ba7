use std::collections::HashMap;
use std::fmt;

use super::{XmirDoc, XmirNode};
use crate::error::XmirError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.line, self.message)
    }
}

/// Moves each `method` element's preceding sibling inside it as the
/// first child.
pub fn resolve_methods(mut doc: XmirDoc) -> Result<XmirDoc, XmirError> {
    doc.objects = resolve_list(std::mem::take(&mut doc.objects))?;
    Ok(doc)
}

fn resolve_list(list: Vec<XmirNode>) -> Result<Vec<XmirNode>, XmirError> {
    let mut out: Vec<XmirNode> = Vec::with_capacity(list.len());
    for mut node in list {
        node.children = resolve_list(std::mem::take(&mut node.children))?;
        if node.method {
            let receiver = out.pop().ok_or_else(|| XmirError::Invalid {
                line: node.line,
                message: format!("method {} has no receiver", node.base.as_deref().unwrap_or("?")),
            })?;
            node.children.insert(0, receiver);
            node.method = false;
        }
        out.push(node);
    }
    Ok(out)
}

pub const SPECIAL_HEADS: [&str; 7] = ["$", "^", "&", "@", "Q", "QQ", "*"];

/// Names declared directly by an abstraction: its children plus anything
/// named inside its applications (not crossing nested abstractions).
fn declared(abstraction: &XmirNode) -> HashMap<String, usize> {
    fn collect(node: &XmirNode, out: &mut HashMap<String, usize>) {
        for c in &node.children {
            if let Some(n) = &c.name {
                out.entry(n.clone()).or_insert(c.line);
            }
            if !c.is_abstraction() {
                collect(c, out);
            }
        }
    }
    let mut out = HashMap::new();
    collect(abstraction, &mut out);
    out
}

/// Adds `ref` to every base that names a visible definition and rewrites
/// aliased bases to their full names. `known` answers whether a global
/// name is a built-in.
pub fn resolve_refs(mut doc: XmirDoc, known: &dyn Fn(&str) -> bool) -> (XmirDoc, Vec<Diagnostic>) {
    let aliases: HashMap<String, String> = doc.aliases().into_iter().collect();
    let mut top = HashMap::new();
    for o in &doc.objects {
        if let Some(n) = &o.name {
            top.entry(n.clone()).or_insert(o.line);
        }
    }
    let mut diags = Vec::new();
    let mut scopes = vec![top];
    let ctx = RefCtx {
        aliases: &aliases,
        known,
    };
    for o in &mut doc.objects {
        ctx.visit(o, &mut scopes, &mut diags);
    }
    (doc, diags)
}

struct RefCtx<'a> {
    aliases: &'a HashMap<String, String>,
    known: &'a dyn Fn(&str) -> bool,
}

impl RefCtx<'_> {
    fn visit(&self, node: &mut XmirNode, scopes: &mut Vec<HashMap<String, usize>>, diags: &mut Vec<Diagnostic>) {
        if let Some(base) = node.base.clone() {
            if !base.starts_with('.') && node.data.is_none() && !SPECIAL_HEADS.contains(&base.as_str()) {
                match scopes.iter().rev().find_map(|s| s.get(&base)) {
                    Some(line) => node.reference = Some(*line),
                    None => {
                        node.reference = None;
                        if let Some(fqn) = self.aliases.get(&base) {
                            node.base = Some(fqn.clone());
                        } else if !(self.known)(&base) && !self.aliases.values().any(|v| *v == base) {
                            diags.push(Diagnostic {
                                line: node.line,
                                message: format!("cannot resolve '{base}'"),
                            });
                        }
                    }
                }
            }
        }
        let abstraction = node.is_abstraction();
        if abstraction {
            scopes.push(declared(node));
        }
        for c in &mut node.children {
            self.visit(c, scopes, diags);
        }
        if abstraction {
            scopes.pop();
        }
    }
}

/// Structural checks of a resolved document.
pub fn validate(doc: &XmirDoc) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    doc.walk(|n| {
        let mut bad = |m: String| {
            out.push(Diagnostic {
                line: n.line,
                message: m,
            })
        };
        if n.method {
            bad("unresolved method flag".into());
        }
        if n.data.is_some() && (n.payload.is_none() || !n.children.is_empty()) {
            bad("data element must hold a payload and no children".into());
        }
        if n.is_method() && n.children.is_empty() {
            bad(format!("{} has no receiver", n.base.as_deref().unwrap_or_default()));
        }
        if n.is_abstraction() {
            let mut seen = std::collections::HashSet::new();
            for c in &n.children {
                if let Some(name) = &c.name {
                    if !seen.insert(name.as_str()) {
                        bad(format!("duplicate attribute {name}"));
                    }
                }
            }
            let frees: Vec<&XmirNode> = n.children.iter().filter(|c| c.is_free()).collect();
            if frees.iter().rev().skip(1).any(|c| c.vararg) {
                bad("vararg must be the last free attribute".into());
            }
        }
        if let Err(e) = n.value() {
            bad(e.to_string());
        }
    });
    out
}
