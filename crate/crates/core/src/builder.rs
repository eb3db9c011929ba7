//! XMIR to graph-modifying instructions.
//!
//! Bodies are emitted in two passes: first every member gets its anchor
//! (abstraction vertex, data holder or reference edge), then contents
//! follow (data, nested bodies, dot and copy tails). References whose
//! chain starts with a dot wait for the second pass so the relaxed head
//! can see vertices built by then.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::atoms::Registry;
use crate::error::BuildError;
use crate::graph::{EId, EdgeKind, Gmi, Graph, Locator, Note, Root, Target, Trace, VId, PHI, RHO, ROOT, SIGMA};
use crate::value::Value;
use crate::xmir::{XmirDoc, XmirNode};

#[derive(Clone, Debug)]
pub struct Built {
    pub trace: Trace,
    pub graph: Graph,
    /// Source line of every vertex made from a source object.
    pub lines: BTreeMap<VId, usize>,
}

pub fn build(doc: &XmirDoc, registry: &Registry) -> Result<Built, BuildError> {
    let mut b = Builder {
        registry,
        graph: Graph::new(),
        trace: Trace::default(),
        next_v: 1,
        next_e: 1,
        prelude: HashMap::new(),
        data: HashMap::new(),
        lines: BTreeMap::new(),
        scopes: Vec::new(),
        path: Vec::new(),
        package: doc.package().map(str::to_string),
    };
    b.emit(Gmi::Add { v: ROOT, data: None })?;
    b.prelude(doc)?;
    let top: Vec<&XmirNode> = doc.objects.iter().collect();
    b.body(ROOT, &top)?;
    Ok(Built {
        trace: b.trace,
        graph: b.graph,
        lines: b.lines,
    })
}

struct Scope {
    v: VId,
    names: HashSet<String>,
}

enum Head<'a> {
    Name(&'a str),
    Special(&'a str),
    Data(Value),
}

enum Op<'a> {
    Dot(String),
    Copy(Vec<&'a XmirNode>),
}

#[derive(Clone, Debug)]
enum Origin {
    Vertex(VId),
    Method(String),
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
struct Params {
    names: Vec<String>,
    vararg: bool,
    strict: bool,
    /// Whose parameters these are, for messages.
    owner: String,
}

enum Pending<'a> {
    Body(VId, &'a XmirNode),
    Data(VId, Value),
    Tail(VId, EId, Origin, Vec<Op<'a>>),
    Deferred(VId, String, &'a XmirNode),
}

struct Builder<'a> {
    registry: &'a Registry,
    graph: Graph,
    trace: Trace,
    next_v: VId,
    next_e: EId,
    prelude: HashMap<String, VId>,
    data: HashMap<(&'static str, Vec<u8>), VId>,
    lines: BTreeMap<VId, usize>,
    scopes: Vec<Scope>,
    path: Vec<String>,
    package: Option<String>,
}

fn label_of(name: &str) -> String {
    match name {
        "@" => PHI,
        "<" => crate::graph::NU,
        "^" => RHO,
        "&" => SIGMA,
        other => other,
    }
    .to_string()
}

/// Pulls named arguments out of member expressions so they become members
/// of the enclosing abstraction; the argument keeps a plain reference.
fn hoist(members: &[&XmirNode]) -> Vec<XmirNode> {
    fn pull(node: &mut XmirNode, out: &mut Vec<XmirNode>) {
        for c in &mut node.children {
            let named = c.name.as_deref().is_some_and(|n| n != "@");
            if named {
                let mut moved = std::mem::replace(c, XmirNode::new(0));
                let name = moved.name.clone().expect("checked above");
                let mut stub = XmirNode::new(moved.line);
                stub.base = Some(name);
                stub.tag = moved.tag.take();
                *c = stub;
                if !moved.is_abstraction() {
                    pull(&mut moved, out);
                }
                out.push(moved);
            } else if !c.is_abstraction() {
                pull(c, out);
            }
        }
    }
    let mut out = Vec::new();
    for m in members {
        let mut m = (*m).clone();
        let mut extra = Vec::new();
        if !m.is_abstraction() {
            pull(&mut m, &mut extra);
        }
        out.push(m);
        out.extend(extra);
    }
    out
}

fn flatten(node: &XmirNode) -> Result<(Head<'_>, Vec<Op<'_>>), BuildError> {
    let base = node.base.as_deref().ok_or_else(|| BuildError::Unsupported {
        line: node.line,
        message: "an abstraction cannot be used as a receiver".into(),
    })?;
    if let Some(m) = base.strip_prefix('.') {
        let receiver = node.children.first().ok_or_else(|| BuildError::Unsupported {
            line: node.line,
            message: format!("{base} has no receiver"),
        })?;
        let (head, mut ops) = flatten(receiver)?;
        ops.push(Op::Dot(m.to_string()));
        if node.children.len() > 1 || node.copy {
            ops.push(Op::Copy(node.children[1..].iter().collect()));
        }
        return Ok((head, ops));
    }
    if let Some(v) = node.value().map_err(|e| BuildError::Unsupported {
        line: node.line,
        message: e.to_string(),
    })? {
        return Ok((Head::Data(v), Vec::new()));
    }
    let head = if crate::xmir::SPECIAL_HEADS.contains(&base) {
        Head::Special(base)
    } else {
        Head::Name(base)
    };
    let mut ops = Vec::new();
    if !node.children.is_empty() || node.copy || base == "*" {
        ops.push(Op::Copy(node.children.iter().collect()));
    }
    Ok((head, ops))
}

fn data_key(v: &Value) -> (&'static str, Vec<u8>) {
    (v.kind_name(), v.as_bytes())
}

impl<'a> Builder<'a> {
    fn emit(&mut self, g: Gmi) -> Result<(), BuildError> {
        self.graph.apply(&g)?;
        self.trace.gmis.push(g);
        Ok(())
    }

    fn note(&mut self, n: Note) {
        self.graph.note(&n);
        self.trace.notes.push(n);
    }

    fn vertex(&mut self, line: usize) -> Result<VId, BuildError> {
        let v = self.next_v;
        self.next_v += 1;
        self.emit(Gmi::Add { v, data: None })?;
        self.lines.insert(v, line);
        Ok(v)
    }

    fn fresh_v(&mut self) -> VId {
        let v = self.next_v;
        self.next_v += 1;
        v
    }

    fn fresh_e(&mut self) -> EId {
        let e = self.next_e;
        self.next_e += 1;
        e
    }

    fn bind(&mut self, from: VId, to: VId, label: &str) -> Result<(), BuildError> {
        self.emit(Gmi::Bind {
            from,
            to,
            label: label.to_string(),
        })
    }

    fn fqn(&self, name: &str) -> String {
        let mut parts: Vec<&str> = Vec::new();
        if let Some(p) = &self.package {
            parts.push(p);
        }
        parts.extend(self.path.iter().map(String::as_str));
        parts.push(name);
        parts.join(".")
    }

    /// Global atoms referenced by name, bound on Φ before anything else.
    fn prelude(&mut self, doc: &XmirDoc) -> Result<(), BuildError> {
        let top: HashSet<&str> = doc.objects.iter().filter_map(|o| o.name.as_deref()).collect();
        let mut wanted: Vec<String> = Vec::new();
        doc.walk(|n| {
            let Some(base) = n.base.as_deref() else { return };
            let name = if base == "*" {
                "array"
            } else if n.reference.is_some()
                || n.data.is_some()
                || base.starts_with('.')
                || crate::xmir::SPECIAL_HEADS.contains(&base)
                || top.contains(base)
            {
                return;
            } else {
                base
            };
            if let Some(entry) = self.registry.global(name) {
                if !wanted.contains(&entry.fqn) {
                    wanted.push(entry.fqn.clone());
                }
            }
        });
        for fqn in wanted {
            self.ensure_prelude(&fqn)?;
        }
        Ok(())
    }

    fn ensure_prelude(&mut self, fqn: &str) -> Result<String, BuildError> {
        let short = fqn.rsplit('.').next().unwrap_or(fqn).to_string();
        if self.prelude.contains_key(&short) {
            return Ok(short);
        }
        let v = self.vertex(0)?;
        self.emit(Gmi::Atom {
            v,
            lambda: fqn.to_string(),
        })?;
        self.bind(ROOT, v, &short)?;
        self.prelude.insert(short.clone(), v);
        Ok(short)
    }

    fn body(&mut self, v: VId, children: &[&XmirNode]) -> Result<(), BuildError> {
        let members: Vec<XmirNode> = hoist(&children.iter().copied().filter(|c| !c.is_free()).collect::<Vec<_>>());
        let mut names: HashSet<String> = HashSet::new();
        for c in children.iter().filter(|c| c.is_free()) {
            names.insert(c.name.clone().unwrap_or_default());
        }
        for m in &members {
            if let Some(n) = &m.name {
                if !names.insert(n.clone()) {
                    return Err(BuildError::DuplicateAttribute {
                        line: m.line,
                        name: n.clone(),
                    });
                }
            }
        }
        self.scopes.push(Scope { v, names });
        let members: &[XmirNode] = &members;
        // The members live as long as this call; keep them borrowed.
        let result = self.body_members(v, members);
        self.scopes.pop();
        result
    }

    fn body_members(&mut self, v: VId, members: &[XmirNode]) -> Result<(), BuildError> {
        let mut pending: Vec<Pending> = Vec::new();
        for m in members {
            let label = match &m.name {
                Some(n) => Some(label_of(n)),
                None if m.is_abstraction() && v == ROOT => None,
                None => Some(format!("ω{}", self.next_e)),
            };
            if m.is_abstraction() {
                let a = self.abstraction_anchor(v, label.as_deref(), m)?;
                pending.push(Pending::Body(a, m));
                continue;
            }
            let label = label.expect("only abstractions go unlabelled");
            if let Some(value) = m.value().map_err(|e| BuildError::Unsupported {
                line: m.line,
                message: e.to_string(),
            })? {
                let h = self.vertex(m.line)?;
                self.bind(v, h, &label)?;
                pending.push(Pending::Data(h, value));
            } else {
                let (head, ops) = flatten(m)?;
                if matches!(ops.first(), Some(Op::Dot(_))) || matches!(head, Head::Data(_)) {
                    pending.push(Pending::Deferred(v, label.clone(), m));
                    continue;
                }
                let (e, origin, ops) = self.reference(v, &label, head, ops, m.line)?;
                pending.push(Pending::Tail(v, e, origin, ops));
            }
            if m.constant {
                self.note(Note::Const { from: v, label });
            }
        }
        for p in pending {
            match p {
                Pending::Body(a, m) => self.abstraction_body(a, m)?,
                Pending::Data(h, value) => self.data(h, value)?,
                Pending::Tail(src, e, origin, ops) => self.tail(src, e, origin, ops)?,
                Pending::Deferred(src, label, m) => {
                    self.value_at(src, &label, m)?;
                }
            }
        }
        Ok(())
    }

    fn abstraction_anchor(&mut self, parent: VId, label: Option<&str>, node: &XmirNode) -> Result<VId, BuildError> {
        let v = self.vertex(node.line)?;
        if let Some(l) = label {
            self.bind(parent, v, l)?;
        }
        let fqn = node.name.as_deref().filter(|n| *n != "@").map(|n| self.fqn(n));
        self.note(Note::Abstract { v, fqn: fqn.clone() });
        let mut seen = HashSet::new();
        for c in node.children.iter().filter(|c| c.is_free()) {
            let name = c.name.clone().unwrap_or_default();
            if !seen.insert(name.clone()) {
                return Err(BuildError::DuplicateAttribute { line: c.line, name });
            }
            let f = self.vertex(c.line)?;
            self.bind(v, f, &label_of(&name))?;
            self.note(Note::Free { v: f, vararg: c.vararg });
        }
        if let Some(atom) = &node.atom {
            let full = fqn.clone().unwrap_or_default();
            let entry = self
                .registry
                .atom(&full)
                .or_else(|| if atom != "?" { None } else { None })
                .ok_or_else(|| BuildError::UnknownAtom {
                    line: node.line,
                    name: if full.is_empty() { atom.clone() } else { full.clone() },
                })?;
            let lambda = entry.fqn.clone();
            self.emit(Gmi::Atom { v, lambda })?;
        }
        Ok(v)
    }

    fn abstraction_body(&mut self, v: VId, node: &XmirNode) -> Result<(), BuildError> {
        let pushed = node.name.as_ref().filter(|n| *n != "@").cloned();
        if let Some(n) = &pushed {
            self.path.push(n.clone());
        }
        let children: Vec<&XmirNode> = node.children.iter().collect();
        let r = self.body(v, &children);
        if pushed.is_some() {
            self.path.pop();
        }
        r
    }

    fn data(&mut self, holder: VId, value: Value) -> Result<(), BuildError> {
        let key = data_key(&value);
        let d = match self.data.get(&key) {
            Some(d) => *d,
            None => {
                let d = self.fresh_v();
                self.emit(Gmi::Add { v: d, data: Some(value) })?;
                self.data.insert(key, d);
                d
            }
        };
        self.bind(holder, d, crate::graph::DELTA)
    }

    /// Binds `node` under `label` at `src`, whatever kind of object it is.
    fn value_at(&mut self, src: VId, label: &str, node: &XmirNode) -> Result<(), BuildError> {
        if node.is_abstraction() {
            let a = self.abstraction_anchor(src, Some(label), node)?;
            self.abstraction_body(a, node)?;
        } else if let Some(value) = node.value().map_err(|e| BuildError::Unsupported {
            line: node.line,
            message: e.to_string(),
        })? {
            let h = self.vertex(node.line)?;
            self.bind(src, h, label)?;
            self.data(h, value)?;
        } else {
            let (head, ops) = flatten(node)?;
            let (e, origin, ops) = self.reference(src, label, head, ops, node.line)?;
            self.tail(src, e, origin, ops)?;
        }
        if node.constant {
            self.note(Note::Const {
                from: src,
                label: label.to_string(),
            });
        }
        Ok(())
    }

    /// Emits the REF for a chain head, using the longest head that already
    /// resolves on the graph. Returns the edge and the remaining ops.
    fn reference<'n>(
        &mut self,
        src: VId,
        label: &str,
        head: Head<'n>,
        ops: Vec<Op<'n>>,
        line: usize,
    ) -> Result<(EId, Origin, Vec<Op<'n>>), BuildError> {
        let mut ops: std::collections::VecDeque<Op> = ops.into();
        let mut loc = match head {
            Head::Name(n) => self.locate_name(src, n, line)?,
            Head::Special(s) => self.locate_special(src, s, &mut ops, line)?,
            Head::Data(v) => {
                let h = self.fresh_v();
                self.emit(Gmi::Add { v: h, data: None })?;
                self.lines.insert(h, line);
                let anon = format!("ω{h}");
                self.bind(ROOT, h, &anon)?;
                self.data(h, v)?;
                Locator::phi(&[anon.as_str()])
            }
        };
        if self.static_resolve(src, &loc, 0).is_some() {
            while let Some(Op::Dot(m)) = ops.front() {
                let longer = loc.clone().push(label_of(m));
                if self.static_resolve(src, &longer, 0).is_none() {
                    break;
                }
                loc = longer;
                ops.pop_front();
            }
        }
        let origin = match self.static_resolve(src, &loc, 0) {
            Some(v) => Origin::Vertex(v),
            None => Origin::Unknown,
        };
        let e = self.fresh_e();
        self.emit(Gmi::Ref {
            edge: e,
            from: src,
            locator: loc,
            label: label.to_string(),
        })?;
        Ok((e, origin, ops.into()))
    }

    fn path_to(&self, src: VId, target: VId) -> Option<Locator> {
        if target == ROOT {
            return Some(Locator::new(Root::Phi, Vec::new()));
        }
        let mut cur = src;
        let mut k = 0;
        while cur != target {
            cur = self.graph.rho(cur)?;
            k += 1;
        }
        Some(if k == 0 {
            Locator::new(Root::Xi, Vec::new())
        } else {
            Locator::new(Root::Rho, vec![RHO.to_string(); k - 1])
        })
    }

    fn locate_name(&mut self, src: VId, name: &str, line: usize) -> Result<Locator, BuildError> {
        let found = self.scopes.iter().rev().find(|s| s.names.contains(name)).map(|s| s.v);
        if let Some(a) = found {
            let base = self.path_to(src, a).ok_or_else(|| BuildError::UnresolvableHead {
                line,
                name: name.to_string(),
            })?;
            return Ok(base.push(label_of(name)));
        }
        if let Some(entry) = self.registry.global(name) {
            let fqn = entry.fqn.clone();
            let short = self.ensure_prelude(&fqn)?;
            return Ok(Locator::phi(&[short.as_str()]));
        }
        Err(BuildError::UnresolvableHead {
            line,
            name: name.to_string(),
        })
    }

    fn current(&self) -> VId {
        self.scopes.last().map_or(ROOT, |s| s.v)
    }

    fn locate_special(
        &mut self,
        src: VId,
        s: &str,
        ops: &mut std::collections::VecDeque<Op>,
        line: usize,
    ) -> Result<Locator, BuildError> {
        let here = || BuildError::UnresolvableHead {
            line,
            name: s.to_string(),
        };
        let cur = self.current();
        Ok(match s {
            "$" => self.path_to(src, cur).ok_or_else(here)?,
            "^" => {
                let l = self.path_to(src, cur).ok_or_else(here)?;
                match l.root {
                    Root::Phi => return Err(here()),
                    Root::Xi => Locator::new(Root::Rho, Vec::new()),
                    _ => l.push(RHO),
                }
            }
            "@" => self.path_to(src, cur).ok_or_else(here)?.push(PHI),
            "&" => self.path_to(src, cur).ok_or_else(here)?.push(SIGMA),
            "*" => {
                let short = self.ensure_prelude("org.eolang.array")?;
                Locator::phi(&[short.as_str()])
            }
            "Q" | "QQ" => {
                let mut path: Vec<String> = if s == "QQ" {
                    vec!["org".into(), "eolang".into()]
                } else {
                    Vec::new()
                };
                let mut taken = 0;
                let mut hit = None;
                for (i, op) in ops.iter().enumerate() {
                    let Op::Dot(m) = op else { break };
                    path.push(m.clone());
                    if let Some(e) = self.registry.global(&path.join(".")) {
                        if e.fqn == path.join(".") {
                            hit = Some(e.fqn.clone());
                            taken = i + 1;
                            break;
                        }
                    }
                }
                if let Some(fqn) = hit {
                    ops.drain(..taken);
                    let short = self.ensure_prelude(&fqn)?;
                    Locator::phi(&[short.as_str()])
                } else if s == "QQ" {
                    Locator::phi(&["org", "eolang"])
                } else {
                    Locator::new(Root::Phi, Vec::new())
                }
            }
            _ => return Err(here()),
        })
    }

    fn tail(&mut self, _src: VId, mut e: EId, mut origin: Origin, ops: Vec<Op>) -> Result<(), BuildError> {
        for op in ops {
            match op {
                Op::Dot(m) => {
                    let v = self.fresh_v();
                    let e2 = self.fresh_e();
                    let method = label_of(&m);
                    self.emit(Gmi::Dot {
                        edge: e,
                        method: method.clone(),
                        v,
                        new_edge: e2,
                    })?;
                    origin = match origin {
                        Origin::Vertex(o) => match self.static_get(o, &method, 0) {
                            Some(t) => Origin::Vertex(t),
                            None => Origin::Method(m),
                        },
                        _ => Origin::Method(m),
                    };
                    e = e2;
                }
                Op::Copy(args) => {
                    let v = self.fresh_v();
                    let e2 = self.fresh_e();
                    self.emit(Gmi::Copy { edge: e, v, new_edge: e2 })?;
                    if let Some(line) = args.first().map(|a| a.line) {
                        self.lines.insert(v, line);
                    }
                    let params = self.params(&origin);
                    self.args(v, params, &args)?;
                    e = e2;
                }
            }
        }
        Ok(())
    }

    /// Free attribute names, in declaration order, of whatever `origin` is.
    fn params(&self, origin: &Origin) -> Option<Params> {
        match origin {
            Origin::Vertex(v) => self.vertex_params(*v, 0),
            Origin::Method(m) => {
                let mut candidates: Vec<Params> = Vec::new();
                for v in self.graph.vertices().map(|x| x.id) {
                    let named = self
                        .graph
                        .abstraction_name(v)
                        .is_some_and(|n| n.rsplit('.').next() == Some(m.as_str()));
                    if named {
                        if let Some(p) = self.vertex_params(v, 0) {
                            candidates.push(p);
                        }
                    }
                }
                for entry in self.registry.methods_named(m) {
                    candidates.push(Params {
                        names: entry.params.clone(),
                        vararg: entry.vararg,
                        strict: false,
                        owner: entry.fqn.clone(),
                    });
                }
                let first = candidates.first()?.clone();
                let same = candidates
                    .iter()
                    .all(|c| c.names == first.names && c.vararg == first.vararg);
                same.then_some(Params { strict: false, ..first })
            }
            Origin::Unknown => None,
        }
    }

    fn vertex_params(&self, v: VId, depth: usize) -> Option<Params> {
        if depth > 16 {
            return None;
        }
        if self.graph.is_abstraction(v) {
            let mut names = Vec::new();
            let mut vararg = false;
            for e in self.graph.edges_from(v) {
                if let (EdgeKind::Solid, Target::Vertex(t), Some(l)) = (e.kind, &e.to, &e.label) {
                    if self.graph.is_free(*t) {
                        names.push(l.clone());
                        vararg = self.graph.is_vararg(*t);
                    }
                }
            }
            return Some(Params {
                names,
                vararg,
                strict: true,
                owner: self.graph.abstraction_name(v).unwrap_or("object").to_string(),
            });
        }
        if let Some(crate::graph::Lambda::Named(fqn)) = self.graph.vertex(v).and_then(|x| x.lambda.as_ref()) {
            let entry = self.registry.atom(fqn)?;
            return Some(Params {
                names: entry.params.clone(),
                vararg: entry.vararg,
                strict: false,
                owner: entry.fqn.clone(),
            });
        }
        if let Some(d) = self.graph.dotted(v) {
            let origin = match &d.to {
                Target::Vertex(t) => Some(*t),
                Target::Locator(l) => self.static_resolve(v, l, 0),
            }?;
            let mut p = self.vertex_params(origin, depth + 1)?;
            p.names.retain(|n| self.graph.out_edge(v, n).is_none());
            return Some(p);
        }
        None
    }

    fn args(&mut self, c: VId, params: Option<Params>, args: &[&XmirNode]) -> Result<(), BuildError> {
        let tagged: Vec<String> = args.iter().filter_map(|a| a.tag.clone()).collect();
        let positional: Vec<&XmirNode> = args.iter().copied().filter(|a| a.tag.is_none()).collect();
        let mut bindings: Vec<(String, &XmirNode)> = Vec::new();
        let mut packed: Option<(String, Vec<&XmirNode>)> = None;
        match params {
            Some(p) => {
                let free: Vec<String> = p.names.iter().filter(|n| !tagged.contains(n)).cloned().collect();
                let fixed = if p.vararg && !free.is_empty() { free.len() - 1 } else { free.len() };
                for (i, a) in positional.iter().enumerate() {
                    if i < fixed {
                        bindings.push((free[i].clone(), a));
                    } else if p.vararg && !free.is_empty() {
                        packed.get_or_insert_with(|| (free[fixed].clone(), Vec::new())).1.push(a);
                    } else if p.strict {
                        return Err(BuildError::Arity {
                            line: a.line,
                            name: p.owner.clone(),
                            expected: p.names.len(),
                            got: args.len(),
                        });
                    } else {
                        bindings.push((format!("α{i}"), a));
                    }
                }
                if p.vararg && packed.is_none() && free.len() > fixed && positional.len() == fixed {
                    packed = Some((free[fixed].clone(), Vec::new()));
                }
            }
            None => {
                for (i, a) in positional.iter().enumerate() {
                    bindings.push((format!("α{i}"), a));
                }
            }
        }
        for a in args.iter().filter(|a| a.tag.is_some()) {
            bindings.push((label_of(a.tag.as_deref().expect("filtered")), a));
        }
        for (label, node) in bindings {
            self.value_at(c, &label, node)?;
        }
        if let Some((label, items)) = packed {
            if let [single] = items.as_slice() {
                if single.spread {
                    return self.value_at(c, &label, single);
                }
            }
            let short = self.ensure_prelude("org.eolang.array")?;
            let e = self.fresh_e();
            self.emit(Gmi::Ref {
                edge: e,
                from: c,
                locator: Locator::phi(&[short.as_str()]),
                label: label.clone(),
            })?;
            let arr = self.fresh_v();
            let e2 = self.fresh_e();
            self.emit(Gmi::Copy {
                edge: e,
                v: arr,
                new_edge: e2,
            })?;
            for (i, item) in items.iter().enumerate() {
                self.value_at(arr, &format!("α{i}"), item)?;
            }
        }
        Ok(())
    }

    fn static_resolve(&self, src: VId, l: &Locator, depth: usize) -> Option<VId> {
        if depth > 24 {
            return None;
        }
        let mut cur = match l.root {
            Root::Xi => src,
            Root::Rho => self.graph.rho(src)?,
            Root::Phi => ROOT,
            Root::Sigma => return None,
        };
        for seg in &l.segments {
            cur = self.static_get(cur, seg, depth + 1)?;
        }
        Some(cur)
    }

    fn static_get(&self, v: VId, a: &str, depth: usize) -> Option<VId> {
        if depth > 24 {
            return None;
        }
        if a == RHO {
            return self.graph.rho(v);
        }
        if let Some(e) = self.graph.out_edge(v, a) {
            return match &e.to {
                Target::Vertex(t) => Some(*t),
                Target::Locator(l) => self.static_resolve(v, l, depth + 1),
            };
        }
        if let Some(e) = self.graph.out_edge(v, PHI) {
            let t = match &e.to {
                Target::Vertex(t) => Some(*t),
                Target::Locator(l) => self.static_resolve(v, l, depth + 1),
            }?;
            if let Some(r) = self.static_get(t, a, depth + 1) {
                return Some(r);
            }
        }
        if let Some(d) = self.graph.dotted(v) {
            let o = match &d.to {
                Target::Vertex(t) => Some(*t),
                Target::Locator(l) => self.static_resolve(v, l, depth + 1),
            }?;
            return self.static_get(o, a, depth + 1);
        }
        None
    }
}
