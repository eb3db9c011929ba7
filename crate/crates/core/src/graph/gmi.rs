use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use super::locator::{label_from_text, label_text, Locator};
use crate::error::GraphError;
use crate::syntax::parse_data;
use crate::value::Value;

pub type VId = usize;
pub type EId = usize;

/// Root vertex id.
pub const ROOT: VId = 0;

#[derive(Clone, Debug, PartialEq)]
pub enum Gmi {
    /// `data` is the recorded Δ for data vertices.
    Add { v: VId, data: Option<Value> },
    Bind { from: VId, to: VId, label: String },
    Dot { edge: EId, method: String, v: VId, new_edge: EId },
    Copy { edge: EId, v: VId, new_edge: EId },
    /// λ-term named by the atom's fully qualified name.
    Atom { v: VId, lambda: String },
    Ref { edge: EId, from: VId, locator: Locator, label: String },
}

/// Build-time annotations that do not change graph shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Note {
    /// An unbound free attribute slot.
    Free { v: VId, vararg: bool },
    /// Constant binding, cached by the dataizer.
    Const { from: VId, label: String },
    /// Vertex made by an abstraction, with its full name if it has one.
    Abstract { v: VId, fqn: Option<String> },
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Trace {
    pub gmis: Vec<Gmi>,
    pub notes: Vec<Note>,
}

fn vname(v: VId, data: &HashSet<VId>) -> String {
    if v == ROOT {
        "Phi".into()
    } else if data.contains(&v) {
        format!("d{v}")
    } else {
        format!("v{v}")
    }
}

impl Trace {
    /// Instruction lines only.
    pub fn instructions(&self) -> Vec<String> {
        let data: HashSet<VId> = self
            .gmis
            .iter()
            .filter_map(|g| match g {
                Gmi::Add { v, data: Some(_) } => Some(*v),
                _ => None,
            })
            .collect();
        let n = |v: VId| vname(v, &data);
        self.gmis
            .iter()
            .map(|g| match g {
                Gmi::Add { v, .. } => format!("ADD({})", n(*v)),
                Gmi::Bind { from, to, label } => format!("BIND({}, {}, {})", n(*from), n(*to), label_text(label)),
                Gmi::Dot {
                    edge,
                    method,
                    v,
                    new_edge,
                } => format!("DOT(e{edge}, {}, {}, e{new_edge})", label_text(method), n(*v)),
                Gmi::Copy { edge, v, new_edge } => format!("COPY(e{edge}, {}, e{new_edge})", n(*v)),
                Gmi::Atom { v, .. } => format!("ATOM({}, M{v})", n(*v)),
                Gmi::Ref {
                    edge,
                    from,
                    locator,
                    label,
                } => format!("REF(e{edge}, {}, {locator}, {})", n(*from), label_text(label)),
            })
            .collect()
    }

    /// Full text: instructions, then `#` lines with data, λ names and notes.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in self.instructions() {
            out.push_str(&l);
            out.push('\n');
        }
        let data: HashSet<VId> = self
            .gmis
            .iter()
            .filter_map(|g| match g {
                Gmi::Add { v, data: Some(_) } => Some(*v),
                _ => None,
            })
            .collect();
        for g in &self.gmis {
            match g {
                Gmi::Add { v, data: Some(d) } => {
                    let _ = writeln!(out, "# d{v} -> {}", d.to_literal());
                }
                Gmi::Atom { v, lambda } => {
                    let _ = writeln!(out, "# M{v} -> {lambda}");
                }
                _ => {}
            }
        }
        for note in &self.notes {
            let _ = match note {
                Note::Free { v, vararg } => {
                    writeln!(out, "# free {}{}", vname(*v, &data), if *vararg { " vararg" } else { "" })
                }
                Note::Const { from, label } => writeln!(out, "# const {} {}", vname(*from, &data), label_text(label)),
                Note::Abstract { v, fqn: Some(f) } => writeln!(out, "# abstract {} {f}", vname(*v, &data)),
                Note::Abstract { v, fqn: None } => writeln!(out, "# abstract {}", vname(*v, &data)),
            };
        }
        out
    }

    pub fn parse(text: &str) -> Result<Trace, GraphError> {
        let bad = |l: &str| GraphError::BadInstruction(l.to_string());
        let mut data: HashMap<VId, Value> = HashMap::new();
        let mut lambdas: HashMap<VId, String> = HashMap::new();
        let mut notes = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| l.starts_with('#')) {
            let body = line.trim_start_matches('#').trim();
            if let Some((lhs, rhs)) = body.split_once(" -> ") {
                if let Some(id) = lhs.strip_prefix('d') {
                    let v = id.parse().map_err(|_| bad(line))?;
                    data.insert(v, parse_data(rhs.trim()).map_err(|_| bad(line))?);
                } else if let Some(id) = lhs.strip_prefix('M') {
                    lambdas.insert(id.parse().map_err(|_| bad(line))?, rhs.trim().to_string());
                }
                continue;
            }
            let words: Vec<&str> = body.split_whitespace().collect();
            match words.as_slice() {
                ["free", v] => notes.push(Note::Free { v: vid(v).ok_or_else(|| bad(line))?, vararg: false }),
                ["free", v, "vararg"] => notes.push(Note::Free { v: vid(v).ok_or_else(|| bad(line))?, vararg: true }),
                ["const", v, l] => notes.push(Note::Const {
                    from: vid(v).ok_or_else(|| bad(line))?,
                    label: label_from_text(l),
                }),
                ["abstract", v] => notes.push(Note::Abstract { v: vid(v).ok_or_else(|| bad(line))?, fqn: None }),
                ["abstract", v, f] => notes.push(Note::Abstract {
                    v: vid(v).ok_or_else(|| bad(line))?,
                    fqn: Some(f.to_string()),
                }),
                _ => {}
            }
        }
        let mut gmis = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let line = line.trim_end_matches(';');
            let (op, rest) = line.split_once('(').ok_or_else(|| bad(line))?;
            let args: Vec<&str> = rest.strip_suffix(')').ok_or_else(|| bad(line))?.split(',').map(str::trim).collect();
            let v = |s: &str| vid(s).ok_or_else(|| bad(line));
            let e = |s: &str| s.strip_prefix('e').and_then(|n| n.parse().ok()).ok_or_else(|| bad(line));
            let g = match (op, args.as_slice()) {
                ("ADD", [a]) => {
                    let id = v(a)?;
                    Gmi::Add {
                        v: id,
                        data: data.get(&id).cloned(),
                    }
                }
                ("BIND", [a, b, l]) => Gmi::Bind {
                    from: v(a)?,
                    to: v(b)?,
                    label: label_from_text(l),
                },
                ("DOT", [a, m, b, c]) => Gmi::Dot {
                    edge: e(a)?,
                    method: label_from_text(m),
                    v: v(b)?,
                    new_edge: e(c)?,
                },
                ("COPY", [a, b, c]) => Gmi::Copy {
                    edge: e(a)?,
                    v: v(b)?,
                    new_edge: e(c)?,
                },
                ("ATOM", [a, _m]) => {
                    let id = v(a)?;
                    Gmi::Atom {
                        v: id,
                        lambda: lambdas.get(&id).cloned().ok_or_else(|| bad(line))?,
                    }
                }
                ("REF", [a, b, l, n]) => Gmi::Ref {
                    edge: e(a)?,
                    from: v(b)?,
                    locator: l.parse().map_err(|_| bad(line))?,
                    label: label_from_text(n),
                },
                _ => return Err(bad(line)),
            };
            gmis.push(g);
        }
        Ok(Trace { gmis, notes })
    }
}

fn vid(s: &str) -> Option<VId> {
    if s == "Phi" {
        return Some(ROOT);
    }
    s.strip_prefix('v').or_else(|| s.strip_prefix('d')).and_then(|n| n.parse().ok())
}
