//! Writing trees back out, and the structured (JSON) encoding.
//!
//! The structured encoding mirrors the line format field for field:
//!
//! ```json
//! {
//!   "directives": { "spread": 15, "times": [100, 500] },
//!   "events": [ { "id": "A", "rate": 1e-3 }, { "id": "B", "rate": [1e-4, 2e-4, 3e-4] } ],
//!   "gates": [ { "id": "G", "expr": "A PAND B" } ],
//!   "top": "G"
//! }
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::parse::{
    directives_from, lower_expression_into, parse_expression, ParseError, ParseErrorKind,
};
use super::{EventDef, FaultTree, Node, NodeId, RateSpec, TreeSpec};
use crate::fuzzy::{Spread, Tfn};

fn nonstandard(s: Option<Spread>) -> bool {
    s.is_some_and(|s| Spread::standard(s.percent()).is_err())
}

fn expression(tree: &FaultTree, id: NodeId, nested: bool) -> String {
    match tree.node(id) {
        Node::Event(e) => e.id.clone(),
        Node::Gate(g) if nested && !g.anonymous => g.id.clone(),
        Node::Gate(g) => {
            let parts: Vec<String> = g
                .children
                .iter()
                .map(|&c| match tree.node(c) {
                    Node::Gate(cg) if cg.anonymous => format!("({})", expression(tree, c, true)),
                    _ => expression(tree, c, true),
                })
                .collect();
            parts.join(&format!(" {} ", g.kind))
        }
    }
}

fn quote(s: &str) -> String {
    format!(
        "\"{}\"",
        s.replace('\\', "\\\\")
            .replace('"', "\\\"")
            .replace('\n', "\\n")
    )
}

/// Serialises a tree to the line format. Reparsing the output gives a
/// structurally identical tree.
///
/// ```
/// use fuzzy_tft::tree::{parse_tree, to_document};
/// let t = parse_tree("event A rate=1e-3\nevent B rate=2e-3\ngate G = (A OR B) PAND A\ntop = G\n").unwrap();
/// let doc = to_document(&t);
/// assert!(doc.contains("gate G = (A OR B) PAND A"));
/// assert_eq!(parse_tree(&doc).unwrap().to_spec().gates, t.to_spec().gates);
/// ```
pub fn to_document(tree: &FaultTree) -> String {
    let mut out = String::new();
    let d = &tree.directives;
    let event_spreads = tree
        .events()
        .any(|(_, e)| matches!(e.spec, RateSpec::Crisp { spread, .. } if nonstandard(spread)));
    let mut dir = Vec::new();
    if let Some(name) = &d.name {
        dir.push(format!("name={}", quote(name)));
    }
    if let Some(s) = d.spread {
        dir.push(format!("spread={}", s.percent()));
    }
    if nonstandard(d.spread) || event_spreads {
        dir.push("spread_override=true".into());
    }
    if !d.times.is_empty() {
        let times: Vec<String> = d.times.iter().map(|t| t.hours().to_string()).collect();
        dir.push(format!("times={}", times.join(",")));
    }
    if let Some(t) = d.importance_time {
        dir.push(format!("importance_time={}", t.hours()));
    }
    if !dir.is_empty() {
        let _ = writeln!(out, "directive {}", dir.join(" "));
    }
    for (_, e) in tree.events() {
        let _ = write!(out, "event {} ", e.id);
        match e.spec {
            RateSpec::Crisp { rate, spread } => {
                let _ = write!(out, "rate={rate}");
                if let Some(s) = spread {
                    let _ = write!(out, " spread={}", s.percent());
                }
            }
            RateSpec::Fuzzy { fuzzy } => {
                let _ = write!(
                    out,
                    "rate=({},{},{})",
                    fuzzy.lower(),
                    fuzzy.peak(),
                    fuzzy.upper()
                );
            }
        }
        if let Some(desc) = &e.description {
            let _ = write!(out, " desc={}", quote(desc));
        }
        out.push('\n');
    }
    for (id, n) in tree.nodes() {
        if let Node::Gate(g) = n {
            if !g.anonymous {
                let _ = writeln!(out, "gate {} = {}", g.id, expression(tree, id, false));
            }
        }
    }
    let _ = writeln!(out, "top = {}", tree.node(tree.top()).id());
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StructuredRate {
    Crisp(f64),
    Fuzzy([f64; 3]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructuredEvent {
    pub id: String,
    pub rate: StructuredRate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spread: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub desc: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructuredGate {
    pub id: String,
    pub expr: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructuredDirectives {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spread: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub spread_override: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub importance_time: Option<f64>,
}

/// The structured encoding of a tree document.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructuredTree {
    #[serde(default)]
    pub directives: StructuredDirectives,
    pub events: Vec<StructuredEvent>,
    #[serde(default)]
    pub gates: Vec<StructuredGate>,
    pub top: String,
}

impl StructuredTree {
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError {
            line: e.line(),
            column: e.column(),
            kind: ParseErrorKind::Syntax,
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serialises")
    }

    pub fn from_tree(tree: &FaultTree) -> Self {
        let d = &tree.directives;
        let event_spreads = tree
            .events()
            .any(|(_, e)| matches!(e.spec, RateSpec::Crisp { spread, .. } if nonstandard(spread)));
        let directives = StructuredDirectives {
            name: d.name.clone(),
            spread: d.spread.map(|s| s.percent()),
            spread_override: nonstandard(d.spread) || event_spreads,
            times: d.times.iter().map(|t| t.hours()).collect(),
            importance_time: d.importance_time.map(|t| t.hours()),
        };
        let events = tree
            .events()
            .map(|(_, e)| {
                let (rate, spread) = match e.spec {
                    RateSpec::Crisp { rate, spread } => {
                        (StructuredRate::Crisp(rate), spread.map(|s| s.percent()))
                    }
                    RateSpec::Fuzzy { fuzzy } => (StructuredRate::Fuzzy(fuzzy.components()), None),
                };
                StructuredEvent {
                    id: e.id.clone(),
                    rate,
                    spread,
                    desc: e.description.clone(),
                }
            })
            .collect();
        let gates = tree
            .nodes()
            .filter_map(|(id, n)| match n {
                Node::Gate(g) if !g.anonymous => Some(StructuredGate {
                    id: g.id.clone(),
                    expr: expression(tree, id, false),
                }),
                _ => None,
            })
            .collect();
        StructuredTree {
            directives,
            events,
            gates,
            top: tree.node(tree.top()).id().to_string(),
        }
    }

    pub fn to_spec(&self) -> Result<TreeSpec, ParseError> {
        let d = &self.directives;
        let bad = |kind, message: String| ParseError {
            line: 0,
            column: 0,
            kind,
            message,
        };
        let mut spec = TreeSpec {
            directives: directives_from(
                d.spread,
                d.spread_override,
                &d.times,
                d.importance_time,
                d.name.clone(),
            )?,
            top: Some(self.top.clone()),
            ..TreeSpec::default()
        };
        for e in &self.events {
            let spec_rate = match e.rate {
                StructuredRate::Crisp(rate) => {
                    let spread = e
                        .spread
                        .map(|s| {
                            if d.spread_override {
                                Spread::custom(s)
                            } else {
                                Spread::standard(s)
                            }
                        })
                        .transpose()
                        .map_err(|err| {
                            bad(
                                ParseErrorKind::BadSpread,
                                format!("event `{}`: {err}", e.id),
                            )
                        })?;
                    RateSpec::Crisp { rate, spread }
                }
                StructuredRate::Fuzzy([a, b, c]) => {
                    let fuzzy = Tfn::new(a, b, c).map_err(|err| {
                        bad(ParseErrorKind::Syntax, format!("event `{}`: {err}", e.id))
                    })?;
                    RateSpec::Fuzzy { fuzzy }
                }
            };
            spec.events.push(EventDef {
                id: e.id.clone(),
                description: e.desc.clone(),
                spec: spec_rate,
                line: None,
            });
        }
        for g in &self.gates {
            let expr = parse_expression(&g.expr).map_err(|mut err| {
                err.message = format!("gate `{}`: {}", g.id, err.message);
                err
            })?;
            lower_expression_into(&mut spec, &g.id, &expr);
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::parse_tree;

    const DOC: &str = "\
directive name=\"demo \\\"x\\\"\" spread=25 times=10,20 importance_time=20
event A rate=0.001 desc=\"first\"
event B rate=(1e-4,2e-4,3e-4)
event C rate=3e-3 spread=50
gate G = (A OR B) PAND (C AND A)
gate H = G POR B
top = H
";

    #[test]
    fn text_round_trip() {
        let t = parse_tree(DOC).unwrap();
        let again = parse_tree(&to_document(&t)).unwrap();
        assert_eq!(again.to_spec(), t.to_spec());
        assert_eq!(again.name(), Some("demo \"x\""));
    }

    #[test]
    fn structured_round_trip() {
        let t = parse_tree(DOC).unwrap();
        let json = StructuredTree::from_tree(&t).to_json();
        let again = parse_tree(&json).unwrap();
        assert_eq!(again.to_spec(), t.to_spec());
    }

    #[test]
    fn custom_spread_survives() {
        let t = parse_tree("directive spread=20 spread_override=true\nevent A rate=1\ntop = A\n")
            .unwrap();
        assert!(to_document(&t).contains("spread_override=true"));
        parse_tree(&to_document(&t)).unwrap();
    }
}
