//! Dataization: attribute discovery over the built graph.
//!
//! A runtime object is a graph vertex seen in a context (its parent
//! object) plus the bindings of the copies it was made through.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::io::{BufRead, Write};
use std::cell::RefCell;
use std::rc::Rc;

use thiserror::Error;

use crate::atoms::Registry;
use crate::graph::{EdgeKind, Edge, Graph, Lambda, Locator, Root, Target, VId, DELTA, DOT_T, NU, PHI, RHO, ROOT, SIGMA};
use crate::value::Value;

/// Pseudo attribute answered by arrays with themselves.
pub const ITEMS: &str = "ι";

/// Failed resolution.
#[derive(Clone, Debug, PartialEq, Error)]
#[error("{message}")]
pub struct Bottom {
    pub message: String,
    /// Attribute names being resolved when it happened, innermost last.
    pub trail: Vec<String>,
}

impl Bottom {
    pub fn new(message: impl Into<String>) -> Self {
        Bottom {
            message: message.into(),
            trail: Vec::new(),
        }
    }
}

pub type Res<T> = Result<T, Bottom>;

#[derive(Clone)]
pub enum Overlay {
    /// A copy vertex whose own edges bind attributes.
    Copy(Obj),
    /// Bindings made at runtime by an atom or the runner.
    Bind(Rc<Vec<(String, Obj)>>),
}

#[derive(Clone)]
pub enum Body {
    View { v: VId, rho: Option<Obj> },
    Data { value: Value, vertex: Option<VId> },
    Array(Vec<Obj>),
    /// A built-in method bound to its receiver, waiting for arguments.
    Method {
        fqn: String,
        receiver: Obj,
        /// Receiver already computed while looking the method up; used by
        /// the first request only, later ones evaluate `receiver` again.
        first: Rc<RefCell<Option<Obj>>>,
    },
}

struct Inner {
    key: u64,
    nu: u64,
    body: Body,
    overlays: Vec<Overlay>,
}

#[derive(Clone)]
pub struct Obj(Rc<Inner>);

impl Obj {
    /// Structural key: equal for objects reached the same way.
    pub fn key(&self) -> u64 {
        self.0.key
    }

    pub fn nu(&self) -> u64 {
        self.0.nu
    }

    pub fn body(&self) -> &Body {
        &self.0.body
    }

    pub fn vertex(&self) -> Option<VId> {
        match &self.0.body {
            Body::View { v, .. } => Some(*v),
            _ => None,
        }
    }

    pub fn rho(&self) -> Option<&Obj> {
        match &self.0.body {
            Body::View { rho, .. } => rho.as_ref(),
            Body::Method { receiver, .. } => Some(receiver),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<&Value> {
        match &self.0.body {
            Body::Data { value, .. } => Some(value),
            _ => None,
        }
    }

    /// The graph data vertex this object stands for, if any.
    pub fn data_vertex(&self) -> Option<VId> {
        match &self.0.body {
            Body::Data { vertex, .. } => *vertex,
            _ => None,
        }
    }

    pub fn overlays(&self) -> &[Overlay] {
        &self.0.overlays
    }
}

impl fmt::Debug for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.body {
            Body::View { v, .. } => write!(f, "v{v}")?,
            Body::Data { value, .. } => write!(f, "{}", value.to_literal())?,
            Body::Array(items) => write!(f, "array[{}]", items.len())?,
            Body::Method { fqn, .. } => write!(f, "{fqn}")?,
        }
        if !self.0.overlays.is_empty() {
            write!(f, "+{}", self.0.overlays.len())?;
        }
        Ok(())
    }
}

fn hash_of(parts: impl Hash) -> u64 {
    let mut h = DefaultHasher::new();
    parts.hash(&mut h);
    h.finish()
}

fn overlay_key(o: &Overlay) -> u64 {
    match o {
        Overlay::Copy(c) => c.key(),
        Overlay::Bind(b) => hash_of(b.iter().map(|(l, o)| (l.clone(), o.key())).collect::<Vec<_>>()),
    }
}

/// Input and output ports used by the I/O atoms.
pub struct Io {
    pub stdin: Box<dyn BufRead>,
    pub stdout: Box<dyn Write>,
}

impl Io {
    pub fn std() -> Self {
        Io {
            stdin: Box::new(std::io::BufReader::new(std::io::stdin())),
            stdout: Box::new(std::io::stdout()),
        }
    }

    /// Scripted input, output collected into the shared buffer.
    pub fn scripted(input: &str, out: SharedBuf) -> Self {
        Io {
            stdin: Box::new(std::io::Cursor::new(input.as_bytes().to_vec())),
            stdout: Box::new(out),
        }
    }
}

/// Clonable in-memory sink.
#[derive(Clone, Default)]
pub struct SharedBuf(pub Rc<std::cell::RefCell<Vec<u8>>>);

impl SharedBuf {
    pub fn text(&self) -> String {
        String::from_utf8_lossy(&self.0.borrow()).into_owned()
    }
}

impl Write for SharedBuf {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.0.borrow_mut().extend_from_slice(buf);
        Ok(buf.len())
    }

    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}

pub struct Machine<'g> {
    pub graph: &'g Graph,
    pub registry: &'g Registry,
    pub io: Io,
    /// Memory cells, by the structural key of the memory object.
    pub cells: HashMap<u64, Value>,
    consts: HashMap<(u64, String), Value>,
    active: HashSet<(u64, String)>,
    next_nu: u64,
    depth: usize,
    pub max_depth: usize,
    root: Obj,
}

impl<'g> Machine<'g> {
    pub fn new(graph: &'g Graph, registry: &'g Registry, io: Io) -> Self {
        let root = Obj(Rc::new(Inner {
            key: hash_of((0u8, ROOT)),
            nu: 0,
            body: Body::View { v: ROOT, rho: None },
            overlays: Vec::new(),
        }));
        Machine {
            graph,
            registry,
            io,
            cells: HashMap::new(),
            consts: HashMap::new(),
            active: HashSet::new(),
            next_nu: graph.next_id() as u64,
            depth: 0,
            max_depth: 20_000,
            root,
        }
    }

    pub fn root(&self) -> Obj {
        self.root.clone()
    }

    fn fresh_nu(&mut self) -> u64 {
        let n = self.next_nu;
        self.next_nu += 1;
        n
    }

    pub fn view(&self, v: VId, rho: Option<Obj>) -> Obj {
        let nu = self.graph.vertex(v).map_or(v as u64, |x| x.nu);
        let key = hash_of((0u8, v, rho.as_ref().map(Obj::key)));
        Obj(Rc::new(Inner {
            key,
            nu,
            body: Body::View { v, rho },
            overlays: Vec::new(),
        }))
    }

    /// Fresh data made at runtime, with a new identity.
    pub fn data(&mut self, value: Value) -> Obj {
        let nu = self.fresh_nu();
        let key = hash_of((1u8, value.kind_name(), value.as_bytes()));
        Obj(Rc::new(Inner {
            key,
            nu,
            body: Body::Data { value, vertex: None },
            overlays: Vec::new(),
        }))
    }

    fn graph_data(&self, d: VId) -> Obj {
        let vx = self.graph.vertex(d).expect("data vertex exists");
        let value = vx.delta.clone().expect("data vertex has a value");
        Obj(Rc::new(Inner {
            key: hash_of((1u8, value.kind_name(), value.as_bytes())),
            nu: vx.nu,
            body: Body::Data { value, vertex: Some(d) },
            overlays: Vec::new(),
        }))
    }

    pub fn array(&mut self, items: Vec<Obj>) -> Obj {
        let nu = self.fresh_nu();
        let key = hash_of((2u8, items.iter().map(Obj::key).collect::<Vec<_>>()));
        Obj(Rc::new(Inner {
            key,
            nu,
            body: Body::Array(items),
            overlays: Vec::new(),
        }))
    }

    fn method(&self, fqn: String, receiver: Obj) -> Obj {
        self.method_with(fqn, receiver, None)
    }

    fn method_with(&self, fqn: String, receiver: Obj, first: Option<Obj>) -> Obj {
        let key = hash_of((3u8, &fqn, receiver.key()));
        let nu = receiver.nu();
        Obj(Rc::new(Inner {
            key,
            nu,
            body: Body::Method {
                fqn,
                receiver,
                first: Rc::new(RefCell::new(first)),
            },
            overlays: Vec::new(),
        }))
    }

    /// `obj` specialized by one more layer of bindings.
    pub fn with(&mut self, obj: &Obj, overlay: Overlay) -> Obj {
        let mut overlays = obj.0.overlays.clone();
        let nu = match &overlay {
            Overlay::Copy(c) => c.nu(),
            Overlay::Bind(_) => self.fresh_nu(),
        };
        overlays.push(overlay);
        let key = hash_of((obj.key(), overlays.iter().map(overlay_key).collect::<Vec<_>>()));
        Obj(Rc::new(Inner {
            key,
            nu,
            body: obj.0.body.clone(),
            overlays,
        }))
    }

    /// Binds `args` to `f` by name.
    pub fn apply(&mut self, f: &Obj, args: Vec<(String, Obj)>) -> Obj {
        self.with(f, Overlay::Bind(Rc::new(args)))
    }

    pub fn get(&mut self, obj: &Obj, a: &str) -> Res<Obj> {
        match self.lookup(obj, a)? {
            Some(o) => Ok(o),
            None => Err(Bottom::new(format!(
                "{} has no attribute {}",
                self.describe(obj),
                crate::graph::locator::label_text(a)
            ))),
        }
    }

    pub fn describe(&self, obj: &Obj) -> String {
        match obj.body() {
            Body::View { v, .. } => match self.graph.abstraction_name(*v) {
                Some(n) => n.to_string(),
                None if *v == ROOT => "Φ".into(),
                None => format!("v{v}"),
            },
            Body::Data { value, .. } => value.to_literal(),
            Body::Array(_) => "array".into(),
            Body::Method { fqn, .. } => fqn.clone(),
        }
    }

    pub fn dataize(&mut self, obj: &Obj) -> Res<Value> {
        if let Some(v) = obj.value() {
            return Ok(v.clone());
        }
        match self.lookup(obj, DELTA)? {
            Some(d) => match d.value() {
                Some(v) => Ok(v.clone()),
                None => self.dataize(&d),
            },
            None => Err(Bottom::new(self.halt_message(obj))),
        }
    }

    /// Message for an object that cannot be dataized: its `msg` when it
    /// has one.
    fn halt_message(&mut self, obj: &Obj) -> String {
        if let Ok(Some(m)) = self.lookup(obj, "msg") {
            if let Ok(v) = self.dataize(&m) {
                return v.to_string();
            }
        }
        format!("{} cannot be dataized", self.describe(obj))
    }

    /// ℝ from the root: resolve the locator, then ask for `a`.
    pub fn discover(&mut self, l: &Locator, a: &str) -> Res<Obj> {
        let root = self.root();
        let x = self.resolve(&root, l)?;
        self.get(&x, a)
    }

    pub fn resolve(&mut self, owner: &Obj, l: &Locator) -> Res<Obj> {
        let mut cur = match l.root {
            Root::Xi => owner.clone(),
            Root::Rho => self.get(owner, RHO)?,
            Root::Phi => self.root(),
            Root::Sigma => self.get(owner, SIGMA)?,
        };
        for s in &l.segments {
            cur = self.get(&cur, s)?;
        }
        Ok(cur)
    }

    pub fn lookup(&mut self, obj: &Obj, a: &str) -> Res<Option<Obj>> {
        if self.depth >= self.max_depth {
            return Err(Bottom::new("recursion is too deep"));
        }
        let mark = (obj.key(), a.to_string());
        if !self.active.insert(mark.clone()) {
            return Err(Bottom::new(format!(
                "cycle while resolving {} of {}",
                crate::graph::locator::label_text(a),
                self.describe(obj)
            )));
        }
        self.depth += 1;
        let r = self.lookup_inner(obj, a);
        self.depth -= 1;
        self.active.remove(&mark);
        r.map_err(|mut b| {
            if b.trail.len() < 64 {
                b.trail.push(a.to_string());
            }
            b
        })
    }

    fn lookup_inner(&mut self, obj: &Obj, a: &str) -> Res<Option<Obj>> {
        match a {
            RHO => return Ok(obj.rho().cloned()),
            NU => {
                // Data keeps the identity of its interned data vertex.
                let held = obj
                    .vertex()
                    .filter(|_| obj.0.overlays.is_empty())
                    .and_then(|v| self.own_edge(v, DELTA))
                    .and_then(|e| match e.to {
                        Target::Vertex(d) => self.graph.vertex(d).map(|x| x.nu),
                        _ => None,
                    });
                let n = held.unwrap_or(obj.nu()) as i64;
                return Ok(Some(self.data(Value::Int(n))));
            }
            SIGMA => return Ok(obj.rho().cloned()),
            _ => {}
        }
        if let Some(o) = self.bound(obj, a)? {
            return Ok(Some(o));
        }
        match obj.0.body.clone() {
            Body::Data { value, .. } => {
                if a == DELTA {
                    return Ok(Some(obj.clone()));
                }
                let fqn = format!("org.eolang.{}.{a}", value.kind_name());
                if self.registry.get(&fqn).is_some() {
                    return Ok(Some(self.method(fqn, obj.clone())));
                }
                Ok(None)
            }
            Body::Array(items) => {
                if a == ITEMS {
                    return Ok(Some(obj.clone()));
                }
                if a == DELTA {
                    let mut vals = Vec::new();
                    for i in &items {
                        vals.push(self.dataize(i)?);
                    }
                    return Ok(Some(self.data(Value::Array(vals))));
                }
                let fqn = format!("org.eolang.array.{a}");
                if self.registry.get(&fqn).is_some() {
                    return Ok(Some(self.method(fqn, obj.clone())));
                }
                Ok(None)
            }
            Body::Method { fqn, .. } => {
                let r = self.call(&fqn, obj)?;
                let found = self.lookup(&r, a)?;
                Ok(self.rebind(found, &r, obj))
            }
            Body::View { v, .. } => self.lookup_view(obj, v, a),
        }
    }

    fn lookup_view(&mut self, obj: &Obj, v: VId, a: &str) -> Res<Option<Obj>> {
        if let Some(e) = self.own_edge(v, a) {
            let e = e.clone();
            return self.follow(obj, &e).map(Some);
        }
        if let Some(d) = self.graph.dotted(v) {
            let to = d.to.clone();
            let origin = match to {
                Target::Vertex(t) => {
                    let rho = self.parent_for(obj, t);
                    self.view(t, Some(rho))
                }
                Target::Locator(l) => self.resolve(obj, &l)?,
            };
            let spec = self.with(&origin, Overlay::Copy(obj.clone()));
            return self.lookup(&spec, a);
        }
        if a != PHI && self.own_edge(v, PHI).is_some() {
            let deco = self.get(obj, PHI)?;
            if let Some(x) = self.lookup(&deco, a)? {
                return Ok(Some(x));
            }
        }
        match self.graph.vertex(v).and_then(|x| x.lambda.clone()) {
            Some(Lambda::Named(fqn)) => {
                let m = format!("{fqn}.{a}");
                if self.registry.get(&m).is_some() {
                    return Ok(Some(self.method(m, obj.clone())));
                }
                let r = self.call(&fqn, obj)?;
                let found = self.lookup(&r, a)?;
                return Ok(self.rebind(found, &r, obj));
            }
            Some(Lambda::Dot(m)) => {
                let t = self.get(obj, DOT_T)?;
                let mut target = self.get(&t, &m)?;
                for ov in obj.0.overlays.clone() {
                    target = self.with(&target, ov);
                }
                return self.lookup(&target, a);
            }
            None => {}
        }
        if a != DELTA && self.own_edge(v, DELTA).is_some() {
            let d = self.get(obj, DELTA)?;
            return self.lookup(&d, a);
        }
        Ok(None)
    }

    /// A method found on the computed `r` keeps `obj` as its receiver, so
    /// asking it again re-evaluates (loop conditions rely on this).
    fn rebind(&self, found: Option<Obj>, r: &Obj, obj: &Obj) -> Option<Obj> {
        match found {
            Some(f) => match f.body() {
                Body::Method { fqn, receiver, first } if Rc::ptr_eq(&receiver.0, &r.0) && f.overlays().is_empty() => {
                    let first = first.borrow().clone().unwrap_or_else(|| r.clone());
                    Some(self.method_with(fqn.clone(), obj.clone(), Some(first)))
                }
                _ => Some(f),
            },
            None => None,
        }
    }

    fn own_edge(&self, v: VId, a: &str) -> Option<&'g Edge> {
        self.graph
            .out_edge(v, a)
            .filter(|e| !matches!(e.kind, EdgeKind::Rho | EdgeKind::Dotted))
    }

    /// The runtime object standing for the graph parent of `t`, found on
    /// the parent chain of `owner`.
    fn parent_for(&self, owner: &Obj, t: VId) -> Obj {
        let want = self.graph.rho(t);
        let mut cur = Some(owner);
        while let Some(o) = cur {
            if o.vertex() == want {
                return o.clone();
            }
            cur = o.rho();
        }
        owner.clone()
    }

    fn follow(&mut self, owner: &Obj, e: &Edge) -> Res<Obj> {
        let label = e.label.clone().unwrap_or_default();
        if e.constant {
            let k = (owner.key(), label.clone());
            if let Some(v) = self.consts.get(&k) {
                let v = v.clone();
                return Ok(self.data(v));
            }
            let raw = self.follow_raw(owner, e, &label)?;
            return match self.dataize(&raw) {
                Ok(v) => {
                    self.consts.insert(k, v.clone());
                    Ok(match raw.value() {
                        Some(_) => raw,
                        None => self.data(v),
                    })
                }
                Err(_) => Ok(raw),
            };
        }
        self.follow_raw(owner, e, &label)
    }

    fn follow_raw(&mut self, owner: &Obj, e: &Edge, label: &str) -> Res<Obj> {
        match &e.to {
            Target::Vertex(t) => {
                let t = *t;
                if self.graph.vertex(t).is_some_and(|x| x.delta.is_some()) {
                    return Ok(self.graph_data(t));
                }
                if self.graph.is_free(t) {
                    return Err(Bottom::new(format!(
                        "attribute {} of {} is not bound",
                        crate::graph::locator::label_text(label),
                        self.describe(owner)
                    )));
                }
                let rho = self.parent_for(owner, t);
                Ok(self.view(t, Some(rho)))
            }
            Target::Locator(l) => {
                let l = l.clone();
                self.resolve(owner, &l)
            }
        }
    }

    fn call(&mut self, fqn: &str, obj: &Obj) -> Res<Obj> {
        let entry = self
            .registry
            .get(fqn)
            .ok_or_else(|| Bottom::new(format!("no atom {fqn}")))?;
        let f = entry.func.clone();
        f(self, obj)
    }

    // Helpers for atoms.

    /// The object a method or a program-defined atom belongs to.
    pub fn receiver(&self, obj: &Obj) -> Res<Obj> {
        if let Body::Method { receiver, first, .. } = obj.body() {
            return Ok(first.borrow_mut().take().unwrap_or_else(|| receiver.clone()));
        }
        obj.rho().cloned().ok_or_else(|| Bottom::new("atom has no receiver"))
    }

    pub fn receiver_value(&mut self, obj: &Obj) -> Res<Value> {
        let r = self.receiver(obj)?;
        self.dataize(&r)
    }

    /// Attribute names of the atom's parameters, in order.
    pub fn params(&self, obj: &Obj, fqn: &str) -> Vec<String> {
        if let Some(v) = obj.vertex() {
            if self.graph.is_abstraction(v) {
                let free = self.free_attrs(v);
                if !free.is_empty() {
                    return free;
                }
            }
        }
        self.registry.get(fqn).map(|e| e.params.clone()).unwrap_or_default()
    }

    pub fn free_attrs(&self, v: VId) -> Vec<String> {
        self.graph
            .edges_from(v)
            .iter()
            .filter(|e| e.kind == EdgeKind::Solid)
            .filter_map(|e| match (&e.to, &e.label) {
                (Target::Vertex(t), Some(l)) if self.graph.is_free(*t) => Some(l.clone()),
                _ => None,
            })
            .collect()
    }

    /// Free attributes of whatever abstraction `f` was made from.
    pub fn free_attrs_of(&mut self, f: &Obj) -> Vec<String> {
        let mut cur = f.clone();
        for _ in 0..64 {
            let Some(v) = cur.vertex() else { return Vec::new() };
            if self.graph.is_abstraction(v) {
                return self.free_attrs(v);
            }
            let next = if let Some(d) = self.graph.dotted(v) {
                match d.to.clone() {
                    Target::Vertex(t) => {
                        let rho = self.parent_for(&cur, t);
                        Some(self.view(t, Some(rho)))
                    }
                    Target::Locator(l) => self.resolve(&cur, &l).ok(),
                }
            } else if let Some(e) = self.own_edge(v, PHI) {
                let e = e.clone();
                self.follow(&cur, &e).ok()
            } else {
                None
            };
            match next {
                Some(n) => cur = n,
                None => return Vec::new(),
            }
        }
        Vec::new()
    }

    /// The i-th parameter of an atom, as a lazy object.
    pub fn arg(&mut self, obj: &Obj, fqn: &str, i: usize) -> Res<Obj> {
        let params = self.params(obj, fqn);
        let name = params
            .get(i)
            .ok_or_else(|| Bottom::new(format!("{fqn} has no parameter #{i}")))?
            .clone();
        if let Some(o) = self.bound(obj, &name)? {
            return Ok(o);
        }
        // The call site could not tell which atom it was calling.
        if let Some(o) = self.bound(obj, &format!("α{i}"))? {
            return Ok(o);
        }
        if let Some(e) = obj.vertex().and_then(|v| self.own_edge(v, &name)) {
            let e = e.clone();
            return self.follow(obj, &e);
        }
        Err(Bottom::new(format!("{fqn} needs {name}")))
    }

    /// An attribute bound by one of the object's copies, without looking
    /// further.
    pub fn bound(&mut self, obj: &Obj, a: &str) -> Res<Option<Obj>> {
        for ov in obj.0.overlays.iter().rev() {
            match ov {
                Overlay::Copy(c) => {
                    let v = c.vertex().expect("copy overlays are views");
                    if let Some(e) = self.own_edge(v, a) {
                        let e = e.clone();
                        return self.follow(c, &e).map(Some);
                    }
                }
                Overlay::Bind(list) => {
                    if let Some((_, o)) = list.iter().find(|(l, _)| l == a) {
                        return Ok(Some(o.clone()));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn arg_value(&mut self, obj: &Obj, fqn: &str, i: usize) -> Res<Value> {
        let a = self.arg(obj, fqn, i)?;
        self.dataize(&a)
    }

    /// Elements of an array-like object.
    pub fn items(&mut self, obj: &Obj) -> Res<Vec<Obj>> {
        if let Some(Value::Array(vals)) = obj.value() {
            let vals = vals.clone();
            return Ok(vals.into_iter().map(|v| self.data(v)).collect());
        }
        match self.lookup(obj, ITEMS)? {
            Some(a) => match a.body() {
                Body::Array(items) => Ok(items.clone()),
                _ => Err(Bottom::new("not an array")),
            },
            None => Err(Bottom::new(format!("{} is not an array", self.describe(obj)))),
        }
    }

    /// Numbered `α` bindings of a copy, in order.
    pub fn positional(&mut self, obj: &Obj) -> Res<Vec<Obj>> {
        let mut out = Vec::new();
        for i in 0.. {
            match self.bound(obj, &format!("α{i}"))? {
                Some(o) => out.push(o),
                None => break,
            }
        }
        Ok(out)
    }
}
