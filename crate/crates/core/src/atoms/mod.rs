//! Name-indexed registry of built-in λ-terms.

mod builtins;
pub use builtins::sprintf;

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::eval::{Machine, Obj, Res};

pub type AtomFn = Arc<dyn Fn(&mut Machine, &Obj) -> Res<Obj> + Send + Sync>;

#[derive(Clone)]
pub struct AtomEntry {
    pub fqn: String,
    /// Parameter names in positional order.
    pub params: Vec<String>,
    /// The last parameter collects the remaining arguments.
    pub vararg: bool,
    /// Usable as a bare name, bound on Φ when referenced.
    pub global: bool,
    pub func: AtomFn,
}

impl std::fmt::Debug for AtomEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}({})", self.fqn, self.params.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("atom {0} is already registered")]
pub struct DuplicateAtom(pub String);

#[derive(Clone, Default, Debug)]
pub struct Registry {
    entries: BTreeMap<String, AtomEntry>,
}

fn short(fqn: &str) -> &str {
    fqn.rsplit('.').next().unwrap_or(fqn)
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    /// Registry with every built-in atom.
    pub fn builtins() -> Self {
        let mut r = Registry::new();
        builtins::register_builtins(&mut r).expect("built-in names are unique");
        r
    }

    pub fn register(&mut self, entry: AtomEntry) -> Result<(), DuplicateAtom> {
        if self.entries.contains_key(&entry.fqn) {
            return Err(DuplicateAtom(entry.fqn));
        }
        self.entries.insert(entry.fqn.clone(), entry);
        Ok(())
    }

    /// Shorthand for registering a closure.
    pub fn add(
        &mut self,
        fqn: &str,
        params: &[&str],
        vararg: bool,
        global: bool,
        func: impl Fn(&mut Machine, &Obj) -> Res<Obj> + Send + Sync + 'static,
    ) -> Result<(), DuplicateAtom> {
        self.register(AtomEntry {
            fqn: fqn.to_string(),
            params: params.iter().map(|p| p.to_string()).collect(),
            vararg,
            global,
            func: Arc::new(func),
        })
    }

    pub fn get(&self, fqn: &str) -> Option<&AtomEntry> {
        self.entries.get(fqn)
    }

    pub fn contains(&self, fqn: &str) -> bool {
        self.entries.contains_key(fqn)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// A global atom by full name, or by a short name that is unique.
    pub fn global(&self, name: &str) -> Option<&AtomEntry> {
        if let Some(e) = self.entries.get(name).filter(|e| e.global) {
            return Some(e);
        }
        if name.contains('.') {
            return None;
        }
        unique(self.entries.values().filter(|e| e.global && short(&e.fqn) == name))
    }

    /// Implementation for an `/name` object with full name `fqn`.
    pub fn atom(&self, fqn: &str) -> Option<&AtomEntry> {
        if let Some(e) = self.entries.get(fqn) {
            return Some(e);
        }
        let s = short(fqn);
        unique(self.entries.values().filter(|e| short(&e.fqn) == s))
    }

    /// Non-global entries whose last segment is `m`.
    pub fn methods_named<'a>(&'a self, m: &'a str) -> impl Iterator<Item = &'a AtomEntry> + 'a {
        self.entries.values().filter(move |e| !e.global && short(&e.fqn) == m)
    }
}

fn unique<'a>(mut it: impl Iterator<Item = &'a AtomEntry>) -> Option<&'a AtomEntry> {
    let first = it.next()?;
    match it.next() {
        None => Some(first),
        Some(_) => None,
    }
}
