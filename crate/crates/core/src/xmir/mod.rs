//! XML intermediate representation: one `<o>` element per object.

mod lower;
mod passes;
mod xml;

pub use lower::ast_to_xmir;
pub use passes::{resolve_methods, resolve_refs, validate, Diagnostic, SPECIAL_HEADS};
pub use xml::{parse_xmir, serialize_xmir, serialize_xmir_with, SerializeOptions};

use crate::error::XmirError;
use crate::syntax::{parse_data, Meta};
use crate::value::{DataKind, Value};

#[derive(Clone, Debug, PartialEq, Default)]
pub struct XmirNode {
    pub name: Option<String>,
    pub base: Option<String>,
    pub data: Option<DataKind>,
    pub payload: Option<String>,
    pub line: usize,
    pub vararg: bool,
    pub constant: bool,
    pub method: bool,
    pub reference: Option<usize>,
    /// `/name` marker on an abstraction.
    pub atom: Option<String>,
    /// Explicit copy with an apostrophe.
    pub copy: bool,
    /// `:name` binding of an argument.
    pub tag: Option<String>,
    /// `...a` spread of an existing array.
    pub spread: bool,
    /// Nullary abstraction with an empty body.
    pub empty_abstraction: bool,
    pub children: Vec<XmirNode>,
}

impl XmirNode {
    pub fn new(line: usize) -> Self {
        XmirNode {
            line,
            ..Default::default()
        }
    }

    pub fn is_abstraction(&self) -> bool {
        self.base.is_none() && (self.empty_abstraction || !self.children.is_empty() || self.atom.is_some())
    }

    pub fn is_free(&self) -> bool {
        self.base.is_none() && !self.is_abstraction()
    }

    pub fn is_method(&self) -> bool {
        self.base.as_deref().is_some_and(|b| b.starts_with('.'))
    }

    /// Literal value, when this is a data element.
    pub fn value(&self) -> Result<Option<Value>, XmirError> {
        let Some(kind) = self.data else {
            return Ok(None);
        };
        let text = self.payload.clone().unwrap_or_default();
        let bad = |m: String| XmirError::Invalid {
            line: self.line,
            message: m,
        };
        let v = match kind {
            DataKind::String => Value::Str(text),
            DataKind::Regex => Value::Regex(text),
            DataKind::Bool => match text.as_str() {
                "TRUE" => Value::Bool(true),
                "FALSE" => Value::Bool(false),
                other => return Err(bad(format!("bad bool payload '{other}'"))),
            },
            DataKind::Int | DataKind::Float | DataKind::Bytes => {
                let v = parse_data(text.trim()).map_err(bad)?;
                match (kind, v) {
                    (DataKind::Float, Value::Int(i)) => Value::Float(i as f64),
                    (DataKind::Int, v @ Value::Int(_))
                    | (DataKind::Float, v @ Value::Float(_))
                    | (DataKind::Bytes, v @ Value::Bytes(_)) => v,
                    (_, v) => return Err(bad(format!("{} payload holds {}", kind, v.kind_name()))),
                }
            }
        };
        Ok(Some(v))
    }

    /// Visits this node and all descendants, parents first.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a XmirNode)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct XmirDoc {
    pub license: Vec<String>,
    pub metas: Vec<Meta>,
    pub objects: Vec<XmirNode>,
}

impl XmirDoc {
    pub fn package(&self) -> Option<&str> {
        self.metas
            .iter()
            .find(|m| m.head == "package")
            .and_then(|m| m.tail.as_deref())
    }

    /// Short name to fully qualified name, from `+alias` metas.
    pub fn aliases(&self) -> Vec<(String, String)> {
        self.metas
            .iter()
            .filter(|m| m.head == "alias")
            .filter_map(|m| {
                let tail = m.tail.as_deref()?;
                let parts: Vec<&str> = tail.split_whitespace().collect();
                match parts.as_slice() {
                    [fqn] => Some((fqn.rsplit('.').next()?.to_string(), fqn.to_string())),
                    [short, fqn, ..] => Some((short.to_string(), fqn.to_string())),
                    _ => None,
                }
            })
            .collect()
    }

    pub fn walk<'a>(&'a self, mut f: impl FnMut(&'a XmirNode)) {
        for o in &self.objects {
            o.walk(&mut f);
        }
    }
}
