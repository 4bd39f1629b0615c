//! Fault-tree model, document format and structural validation.
//!
//! A tree is stored as an arena of [`Node`]s addressed by [`NodeId`]. Basic
//! events are leaves carrying a fuzzy failure rate; gates hold an ordered
//! child list, and that order is the occurrence order for PAND and POR.

mod format;
mod parse;
mod validate;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{fuzzify, Spread, Tfn};
use crate::gates::MissionTime;

pub use format::{
    to_document, StructuredDirectives, StructuredEvent, StructuredGate, StructuredRate,
    StructuredTree,
};
pub use parse::{parse_expression, parse_spec, parse_tree, Expr, ParseError, ParseErrorKind};
pub use validate::{validate_spec, Diagnostic, Severity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    And,
    Or,
    Pand,
    Por,
}

impl GateKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Pand => "PAND",
            GateKind::Por => "POR",
        }
    }

    pub fn is_temporal(&self) -> bool {
        matches!(self, GateKind::Pand | GateKind::Por)
    }

    pub fn from_keyword(s: &str) -> Option<GateKind> {
        match s {
            "AND" | "∩" => Some(GateKind::And),
            "OR" | "∪" => Some(GateKind::Or),
            "PAND" | "◁" => Some(GateKind::Pand),
            "POR" | "≀" => Some(GateKind::Por),
            _ => None,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// How a basic event's rate was written in its source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RateSpec {
    /// A crisp rate, fuzzified with the event's own spread or the document default.
    Crisp { rate: f64, spread: Option<Spread> },
    /// An explicit `(lower, peak, upper)` rate.
    Fuzzy { fuzzy: Tfn },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasicEvent {
    pub id: String,
    pub description: Option<String>,
    pub spec: RateSpec,
    /// Fuzzy rate per hour after applying the spread in force at load time.
    pub rate: Tfn,
}

impl BasicEvent {
    /// Rate under an override of the document spread. Events with their own
    /// spread or an explicit fuzzy rate are unaffected.
    pub fn rate_with_spread(&self, spread: Option<Spread>) -> Result<Tfn> {
        match (self.spec, spread) {
            (RateSpec::Crisp { rate, spread: None }, Some(s)) => fuzzify(rate, s),
            _ => Ok(self.rate),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub id: String,
    pub kind: GateKind,
    pub children: Vec<NodeId>,
    /// Gates created for parenthesised sub-expressions have generated ids.
    pub anonymous: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Event(BasicEvent),
    Gate(Gate),
}

impl Node {
    pub fn id(&self) -> &str {
        match self {
            Node::Event(e) => &e.id,
            Node::Gate(g) => &g.id,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) usize);

impl NodeId {
    pub fn index(&self) -> usize {
        self.0
    }
}

/// Document-level settings carried alongside the tree.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Directives {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spread: Option<Spread>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub times: Vec<MissionTime>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub importance_time: Option<MissionTime>,
}

/// A validated fault tree.
#[derive(Debug, Clone, PartialEq)]
pub struct FaultTree {
    nodes: Vec<Node>,
    index: HashMap<String, NodeId>,
    top: NodeId,
    pub directives: Directives,
    /// Where the tree came from (a path, or a label for in-memory trees).
    pub source: Option<String>,
    warnings: Vec<Diagnostic>,
}

impl FaultTree {
    pub fn top(&self) -> NodeId {
        self.top
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i), n))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lookup(&self, id: &str) -> Option<NodeId> {
        self.index.get(id).copied()
    }

    pub fn name(&self) -> Option<&str> {
        self.directives.name.as_deref()
    }

    /// Basic events in declaration order.
    pub fn events(&self) -> impl Iterator<Item = (NodeId, &BasicEvent)> {
        self.nodes().filter_map(|(id, n)| match n {
            Node::Event(e) => Some((id, e)),
            Node::Gate(_) => None,
        })
    }

    pub fn event(&self, id: &str) -> Result<(NodeId, &BasicEvent)> {
        match self.lookup(id).map(|n| (n, self.node(n))) {
            Some((n, Node::Event(e))) => Ok((n, e)),
            _ => Err(Error::UnknownEvent(id.to_string())),
        }
    }

    /// Node ids in post-order from the top event: children before parents.
    pub fn post_order(&self) -> Vec<NodeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.top, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                out.push(id);
                continue;
            }
            if seen[id.0] {
                continue;
            }
            seen[id.0] = true;
            stack.push((id, true));
            if let Node::Gate(g) = &self.nodes[id.0] {
                for &c in g.children.iter().rev() {
                    if !seen[c.0] {
                        stack.push((c, false));
                    }
                }
            }
        }
        out
    }

    /// Warnings raised while the tree was built (repeated events, unary gates, ...).
    pub fn warnings(&self) -> &[Diagnostic] {
        &self.warnings
    }

    /// Re-checks the tree and returns every diagnostic, warnings included.
    pub fn validate(&self) -> Vec<Diagnostic> {
        validate_spec(&self.to_spec())
    }

    /// Unvalidated definition list equivalent to this tree.
    pub fn to_spec(&self) -> TreeSpec {
        let mut spec = TreeSpec {
            directives: self.directives.clone(),
            top: Some(self.nodes[self.top.0].id().to_string()),
            ..TreeSpec::default()
        };
        for node in &self.nodes {
            match node {
                Node::Event(e) => spec.events.push(EventDef {
                    id: e.id.clone(),
                    description: e.description.clone(),
                    spec: e.spec,
                    line: None,
                }),
                Node::Gate(g) => spec.gates.push(GateDef {
                    id: g.id.clone(),
                    kind: g.kind,
                    children: g
                        .children
                        .iter()
                        .map(|c| self.nodes[c.0].id().to_string())
                        .collect(),
                    anonymous: g.anonymous,
                    line: None,
                }),
            }
        }
        spec
    }

    /// Builds and validates a tree from definitions.
    pub fn from_spec(spec: &TreeSpec) -> Result<FaultTree> {
        let diagnostics = validate_spec(spec);
        if diagnostics.iter().any(|d| d.severity == Severity::Error) {
            return Err(Error::Invalid(diagnostics));
        }
        let default_spread = spec.directives.spread.unwrap_or_default();
        let mut nodes = Vec::with_capacity(spec.events.len() + spec.gates.len());
        let mut index = HashMap::new();
        for e in &spec.events {
            let rate = match e.spec {
                RateSpec::Crisp { rate, spread } => {
                    fuzzify(rate, spread.unwrap_or(default_spread))?
                }
                RateSpec::Fuzzy { fuzzy } => fuzzy,
            };
            index.insert(e.id.clone(), NodeId(nodes.len()));
            nodes.push(Node::Event(BasicEvent {
                id: e.id.clone(),
                description: e.description.clone(),
                spec: e.spec,
                rate,
            }));
        }
        for g in &spec.gates {
            index.insert(g.id.clone(), NodeId(nodes.len()));
            nodes.push(Node::Gate(Gate {
                id: g.id.clone(),
                kind: g.kind,
                children: Vec::new(),
                anonymous: g.anonymous,
            }));
        }
        for g in &spec.gates {
            let children = g.children.iter().map(|c| index[c]).collect();
            if let Node::Gate(gate) = &mut nodes[index[&g.id].0] {
                gate.children = children;
            }
        }
        let top = index[spec.top.as_deref().expect("validated top")];
        Ok(FaultTree {
            nodes,
            index,
            top,
            directives: spec.directives.clone(),
            source: None,
            warnings: diagnostics,
        })
    }
}

/// A basic-event definition before validation.
#[derive(Debug, Clone, PartialEq)]
pub struct EventDef {
    pub id: String,
    pub description: Option<String>,
    pub spec: RateSpec,
    pub line: Option<usize>,
}

/// A gate definition before validation; children are referenced by id.
#[derive(Debug, Clone, PartialEq)]
pub struct GateDef {
    pub id: String,
    pub kind: GateKind,
    pub children: Vec<String>,
    pub anonymous: bool,
    pub line: Option<usize>,
}

/// Unvalidated tree definitions, as produced by the parser or a builder.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TreeSpec {
    pub events: Vec<EventDef>,
    pub gates: Vec<GateDef>,
    pub top: Option<String>,
    /// Every `top = ...` line seen, for duplicate detection.
    pub top_lines: Vec<usize>,
    pub directives: Directives,
}

impl TreeSpec {
    pub fn event(mut self, id: &str, rate: f64) -> Self {
        self.events.push(EventDef {
            id: id.into(),
            description: None,
            spec: RateSpec::Crisp { rate, spread: None },
            line: None,
        });
        self
    }

    pub fn fuzzy_event(mut self, id: &str, rate: Tfn) -> Self {
        self.events.push(EventDef {
            id: id.into(),
            description: None,
            spec: RateSpec::Fuzzy { fuzzy: rate },
            line: None,
        });
        self
    }

    pub fn gate(mut self, id: &str, kind: GateKind, children: &[&str]) -> Self {
        self.gates.push(GateDef {
            id: id.into(),
            kind,
            children: children.iter().map(|c| c.to_string()).collect(),
            anonymous: false,
            line: None,
        });
        self
    }

    pub fn top(mut self, id: &str) -> Self {
        self.top = Some(id.into());
        self
    }

    pub fn spread(mut self, spread: Spread) -> Self {
        self.directives.spread = Some(spread);
        self
    }

    pub fn build(&self) -> Result<FaultTree> {
        FaultTree::from_spec(self)
    }
}
