//! The object graph and the six instructions that draw it.

pub mod gmi;
pub mod locator;

use std::collections::{BTreeMap, BTreeSet};

pub use gmi::{EId, Gmi, Note, Trace, VId, ROOT};
pub use locator::{Locator, Root, DELTA, DOT_T, NU, PHI, RHO, SIGMA};

use crate::error::GraphError;
use crate::value::Value;

#[derive(Clone, Debug, PartialEq)]
pub enum Lambda {
    /// Built-in atom, by fully qualified name.
    Named(String),
    /// The special term of a DOT vertex: take `t`, then ask it for `m`.
    Dot(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Plain,
    Atom,
    Data,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub id: VId,
    pub kind: VertexKind,
    pub lambda: Option<Lambda>,
    pub delta: Option<Value>,
    pub nu: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Solid,
    Rho,
    Dotted,
    Ref,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    Vertex(VId),
    Locator(Locator),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    /// Set for edges named by an instruction (`e<n>`).
    pub name: Option<EId>,
    pub from: VId,
    /// None for dotted edges.
    pub label: Option<String>,
    pub kind: EdgeKind,
    pub to: Target,
    pub constant: bool,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Graph {
    vertices: BTreeMap<VId, Vertex>,
    /// Live edges per source vertex, in insertion order.
    edges: BTreeMap<VId, Vec<Edge>>,
    free: BTreeMap<VId, bool>,
    abstractions: BTreeMap<VId, Option<String>>,
    /// Every edge name an instruction ever introduced; makes REF, DOT and
    /// COPY no-ops on replay even after later splits removed the edge.
    introduced: BTreeSet<EId>,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    pub fn from_trace(trace: &Trace) -> Result<Graph, GraphError> {
        let mut g = Graph::new();
        g.apply_all(&trace.gmis)?;
        for n in &trace.notes {
            g.note(n);
        }
        Ok(g)
    }

    pub fn apply_all(&mut self, gmis: &[Gmi]) -> Result<(), GraphError> {
        gmis.iter().try_for_each(|g| self.apply(g))
    }

    pub fn note(&mut self, note: &Note) {
        match note {
            Note::Free { v, vararg } => {
                self.free.insert(*v, *vararg);
            }
            Note::Const { from, label } => {
                if let Some(e) = self.edges.get_mut(from).and_then(|es| {
                    es.iter_mut().find(|e| e.label.as_deref() == Some(label.as_str()) && e.kind != EdgeKind::Rho)
                }) {
                    e.constant = true;
                }
            }
            Note::Abstract { v, fqn } => {
                self.abstractions.insert(*v, fqn.clone());
            }
        }
    }

    pub fn vertex(&self, v: VId) -> Option<&Vertex> {
        self.vertices.get(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values().flatten()
    }

    pub fn edges_from(&self, v: VId) -> &[Edge] {
        self.edges.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_free(&self, v: VId) -> bool {
        self.free.contains_key(&v)
    }

    pub fn is_vararg(&self, v: VId) -> bool {
        self.free.get(&v).copied().unwrap_or(false)
    }

    pub fn is_abstraction(&self, v: VId) -> bool {
        self.abstractions.contains_key(&v)
    }

    pub fn abstraction_name(&self, v: VId) -> Option<&str> {
        self.abstractions.get(&v).and_then(|n| n.as_deref())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn next_id(&self) -> VId {
        self.vertices.keys().next_back().map_or(0, |k| k + 1)
    }

    /// The unique attribute edge (solid or ref) with this label; ρ edges
    /// are found with label ρ.
    pub fn out_edge(&self, v: VId, label: &str) -> Option<&Edge> {
        self.edges_from(v)
            .iter()
            .find(|e| e.label.as_deref() == Some(label) && e.kind != EdgeKind::Dotted)
    }

    pub fn dotted(&self, v: VId) -> Option<&Edge> {
        self.edges_from(v).iter().find(|e| e.kind == EdgeKind::Dotted)
    }

    pub fn rho(&self, v: VId) -> Option<VId> {
        match self.out_edge(v, RHO).map(|e| &e.to) {
            Some(Target::Vertex(p)) => Some(*p),
            _ => None,
        }
    }

    /// Attribute labels, without ρ, Δ and φ.
    pub fn scope_of(&self, v: VId) -> BTreeSet<String> {
        self.edges_from(v)
            .iter()
            .filter(|e| matches!(e.kind, EdgeKind::Solid | EdgeKind::Ref))
            .filter_map(|e| e.label.clone())
            .filter(|l| l != DELTA && l != PHI && l != DOT_T)
            .collect()
    }

    pub fn arity_of(&self, v: VId) -> usize {
        self.scope_of(v).len()
    }

    /// Inserts a vertex outside the instruction stream (used while
    /// dataizing to materialize data).
    pub fn add_data_vertex(&mut self, value: Value) -> VId {
        let id = self.next_id();
        self.insert_vertex(id, Some(value));
        id
    }

    fn insert_vertex(&mut self, v: VId, data: Option<Value>) {
        let nu = self.vertices.len() as u64;
        let kind = if data.is_some() { VertexKind::Data } else { VertexKind::Plain };
        self.vertices.insert(
            v,
            Vertex {
                id: v,
                kind,
                lambda: None,
                delta: data,
                nu,
            },
        );
    }

    fn need(&self, v: VId) -> Result<(), GraphError> {
        if self.vertices.contains_key(&v) {
            Ok(())
        } else {
            Err(GraphError::NoVertex(v))
        }
    }

    fn find_named(&self, e: EId) -> Option<(VId, usize)> {
        self.edges
            .iter()
            .find_map(|(v, es)| es.iter().position(|x| x.name == Some(e)).map(|i| (*v, i)))
    }

    fn set_rho(&mut self, child: VId, parent: VId) {
        let es = self.edges.entry(child).or_default();
        if let Some(e) = es.iter_mut().find(|e| e.kind == EdgeKind::Rho) {
            e.to = Target::Vertex(parent);
        } else {
            es.push(Edge {
                name: None,
                from: child,
                label: Some(RHO.into()),
                kind: EdgeKind::Rho,
                to: Target::Vertex(parent),
                constant: false,
            });
        }
    }

    pub fn apply(&mut self, g: &Gmi) -> Result<(), GraphError> {
        match g {
            Gmi::Add { v, data } => {
                match self.vertices.get(v) {
                    Some(existing) if existing.delta == *data => {}
                    Some(_) => return Err(GraphError::VertexExists(*v)),
                    None => self.insert_vertex(*v, data.clone()),
                }
                Ok(())
            }
            Gmi::Bind { from, to, label } => {
                self.need(*from)?;
                self.need(*to)?;
                if label == RHO {
                    self.set_rho(*from, *to);
                    return Ok(());
                }
                if let Some(e) = self.out_edge(*from, label) {
                    return if e.kind == EdgeKind::Solid && e.to == Target::Vertex(*to) {
                        Ok(())
                    } else {
                        Err(GraphError::Rebind {
                            from: *from,
                            attr: label.clone(),
                            to: *to,
                        })
                    };
                }
                self.edges.entry(*from).or_default().push(Edge {
                    name: None,
                    from: *from,
                    label: Some(label.clone()),
                    kind: EdgeKind::Solid,
                    to: Target::Vertex(*to),
                    constant: false,
                });
                self.set_rho(*to, *from);
                Ok(())
            }
            Gmi::Atom { v, lambda } => self.attach(*v, Lambda::Named(lambda.clone())),
            Gmi::Ref {
                edge,
                from,
                locator,
                label,
            } => {
                self.need(*from)?;
                if self.introduced.contains(edge) {
                    return Ok(());
                }
                if self.out_edge(*from, label).is_some() {
                    return Err(GraphError::Rebind {
                        from: *from,
                        attr: label.clone(),
                        to: 0,
                    });
                }
                self.introduced.insert(*edge);
                self.edges.entry(*from).or_default().push(Edge {
                    name: Some(*edge),
                    from: *from,
                    label: Some(label.clone()),
                    kind: EdgeKind::Ref,
                    to: Target::Locator(locator.clone()),
                    constant: false,
                });
                Ok(())
            }
            Gmi::Dot {
                edge,
                method,
                v,
                new_edge,
            } => {
                if self.introduced.contains(new_edge) {
                    return Ok(());
                }
                let old = self.split(*edge, *v, *new_edge)?;
                self.attach(*v, Lambda::Dot(method.clone()))?;
                let far = match &old.to {
                    Target::Vertex(t) => Edge {
                        name: None,
                        from: *v,
                        label: Some(DOT_T.into()),
                        kind: EdgeKind::Solid,
                        to: Target::Vertex(*t),
                        constant: false,
                    },
                    Target::Locator(l) => Edge {
                        name: None,
                        from: *v,
                        label: Some(DOT_T.into()),
                        kind: EdgeKind::Ref,
                        to: Target::Locator(l.from_child()),
                        constant: false,
                    },
                };
                self.edges.entry(*v).or_default().push(far);
                Ok(())
            }
            Gmi::Copy { edge, v, new_edge } => {
                if self.introduced.contains(new_edge) {
                    return Ok(());
                }
                let old = self.split(*edge, *v, *new_edge)?;
                let to = match &old.to {
                    Target::Vertex(t) => Target::Vertex(*t),
                    Target::Locator(l) => Target::Locator(l.from_child()),
                };
                self.edges.entry(*v).or_default().push(Edge {
                    name: None,
                    from: *v,
                    label: None,
                    kind: EdgeKind::Dotted,
                    to,
                    constant: false,
                });
                Ok(())
            }
        }
    }

    /// Removes named edge `e`, adds vertex `v` in its place and reconnects
    /// the source to `v` with `new_edge`. Returns the removed edge.
    fn split(&mut self, e: EId, v: VId, new_edge: EId) -> Result<Edge, GraphError> {
        let (from, idx) = self.find_named(e).ok_or(GraphError::NoEdge {
            from: 0,
            attr: format!("e{e}"),
        })?;
        if self.vertices.contains_key(&v) {
            return Err(GraphError::VertexExists(v));
        }
        let old = self.edges.get_mut(&from).expect("edge list exists").remove(idx);
        self.introduced.insert(new_edge);
        self.insert_vertex(v, None);
        self.edges.get_mut(&from).expect("edge list exists").insert(
            idx,
            Edge {
                name: Some(new_edge),
                from,
                label: old.label.clone(),
                kind: EdgeKind::Solid,
                to: Target::Vertex(v),
                constant: old.constant,
            },
        );
        self.set_rho(v, from);
        Ok(old)
    }

    fn attach(&mut self, v: VId, lambda: Lambda) -> Result<(), GraphError> {
        let vx = self.vertices.get_mut(&v).ok_or(GraphError::NoVertex(v))?;
        match &vx.lambda {
            Some(l) if *l == lambda => Ok(()),
            Some(_) => Err(GraphError::AtomExists(v)),
            None => {
                vx.lambda = Some(lambda);
                vx.kind = VertexKind::Atom;
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn add(v: VId) -> Gmi {
        Gmi::Add { v, data: None }
    }

    #[test]
    fn bind_adds_rho() {
        let mut g = Graph::new();
        g.apply_all(&[add(0), add(1), Gmi::Bind { from: 0, to: 1, label: "memory".into() }])
            .unwrap();
        assert_eq!(g.rho(1), Some(0));
        assert_eq!(g.scope_of(0).into_iter().collect::<Vec<_>>(), vec!["memory"]);
        let once = g.clone();
        g.apply(&Gmi::Bind { from: 0, to: 1, label: "memory".into() }).unwrap();
        assert_eq!(g, once);
    }

    #[test]
    fn rebind_rejected() {
        let mut g = Graph::new();
        g.apply_all(&[add(0), add(1), add(2), Gmi::Bind { from: 0, to: 1, label: "a".into() }])
            .unwrap();
        assert!(matches!(
            g.apply(&Gmi::Bind { from: 0, to: 2, label: "a".into() }),
            Err(GraphError::Rebind { .. })
        ));
    }

    #[test]
    fn dot_and_copy_split_edges() {
        let mut g = Graph::new();
        g.apply_all(&[
            add(0),
            add(1),
            Gmi::Bind { from: 0, to: 1, label: "x".into() },
            Gmi::Ref {
                edge: 1,
                from: 1,
                locator: Locator::phi(&["c"]),
                label: "@".into(),
            },
            Gmi::Dot {
                edge: 1,
                method: "is".into(),
                v: 2,
                new_edge: 2,
            },
            Gmi::Copy { edge: 2, v: 3, new_edge: 3 },
        ])
        .unwrap();
        let e = g.out_edge(1, "@").unwrap();
        assert_eq!(e.to, Target::Vertex(3));
        assert_eq!(g.dotted(3).unwrap().to, Target::Vertex(2));
        assert_eq!(g.vertex(2).unwrap().kind, VertexKind::Atom);
        assert_eq!(g.out_edge(2, DOT_T).unwrap().to, Target::Locator(Locator::phi(&["c"])));
        let once = g.clone();
        g.apply(&Gmi::Copy { edge: 2, v: 3, new_edge: 3 }).unwrap();
        g.apply(&Gmi::Dot {
            edge: 1,
            method: "is".into(),
            v: 2,
            new_edge: 2,
        })
        .unwrap();
        assert_eq!(g, once);
    }
}
