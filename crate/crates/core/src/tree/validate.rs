//! Structural checks shared by every way of building a tree.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use super::{RateSpec, TreeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

/// One machine-readable finding. `code` is a stable kebab-case tag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{sev}[{}]", self.code)?;
        if let Some(line) = self.line {
            write!(f, " line {line}")?;
        }
        if let Some(node) = &self.node {
            write!(f, " `{node}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

struct Sink(Vec<Diagnostic>);

impl Sink {
    fn push(
        &mut self,
        severity: Severity,
        code: &'static str,
        node: Option<&str>,
        line: Option<usize>,
        message: String,
    ) {
        self.0.push(Diagnostic {
            severity,
            code,
            node: node.map(str::to_string),
            line,
            message,
        });
    }
}

/// Checks definitions and returns every diagnostic, errors and warnings alike.
/// An empty list means the tree is clean.
pub fn validate_spec(spec: &TreeSpec) -> Vec<Diagnostic> {
    use Severity::{Error, Warning};
    let mut out = Sink(Vec::new());

    // id -> (is_gate, index, line)
    let mut ids: HashMap<&str, (bool, usize, Option<usize>)> = HashMap::new();
    let defs = spec
        .events
        .iter()
        .enumerate()
        .map(|(i, e)| (e.id.as_str(), false, i, e.line))
        .chain(
            spec.gates
                .iter()
                .enumerate()
                .map(|(i, g)| (g.id.as_str(), true, i, g.line)),
        );
    for (id, is_gate, i, line) in defs {
        if let Some((_, _, first)) = ids.get(id) {
            let first = first
                .map(|l| format!(" (first defined on line {l})"))
                .unwrap_or_default();
            out.push(
                Error,
                "duplicate-id",
                Some(id),
                line,
                format!("`{id}` is defined more than once{first}"),
            );
        } else {
            ids.insert(id, (is_gate, i, line));
        }
    }

    for e in &spec.events {
        let bad = match e.spec {
            RateSpec::Crisp { rate, .. } => !(rate.is_finite() && rate > 0.0),
            RateSpec::Fuzzy { fuzzy } => !(fuzzy.lower() > 0.0 && fuzzy.upper().is_finite()),
        };
        if bad {
            out.push(
                Error,
                "non-positive-rate",
                Some(&e.id),
                e.line,
                "failure rate components must be positive and finite".into(),
            );
        }
    }

    // Parent references per node.
    let mut parents: HashMap<&str, Vec<&str>> = HashMap::new();
    for g in &spec.gates {
        let min = if g.kind.is_temporal() { 2 } else { 1 };
        if g.children.len() < min {
            out.push(
                Error,
                "arity",
                Some(&g.id),
                g.line,
                format!(
                    "{} gate needs at least {min} input(s), has {}",
                    g.kind,
                    g.children.len()
                ),
            );
        } else if g.children.len() == 1 {
            out.push(
                Warning,
                "unary-gate",
                Some(&g.id),
                g.line,
                format!("{} gate with a single input is a pass-through", g.kind),
            );
        }
        for c in &g.children {
            if ids.contains_key(c.as_str()) {
                parents.entry(c.as_str()).or_default().push(&g.id);
            } else {
                out.push(
                    Error,
                    "unresolved",
                    Some(&g.id),
                    g.line,
                    format!("reference to undefined node `{c}`"),
                );
            }
        }
    }

    for (child, ps) in &parents {
        let (is_gate, _, line) = ids[child];
        if ps.len() < 2 {
            continue;
        }
        if is_gate {
            out.push(
                Error,
                "shared-gate",
                Some(child),
                line,
                format!("gate is an input of {} gates ({}); shared intermediate gates are not supported", ps.len(), ps.join(", ")),
            );
        } else {
            out.push(
                Warning,
                "repeated-event",
                Some(child),
                line,
                format!("basic event feeds {} gate inputs ({}); gate formulas assume independent inputs", ps.len(), ps.join(", ")),
            );
        }
    }

    // Cycles, by iterative colouring over gate children.
    let gate_index: HashMap<&str, usize> = spec
        .gates
        .iter()
        .enumerate()
        .map(|(i, g)| (g.id.as_str(), i))
        .collect();
    let mut colour = vec![0u8; spec.gates.len()];
    let mut reported = HashSet::new();
    for start in 0..spec.gates.len() {
        if colour[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        colour[start] = 1;
        while let Some((gi, next)) = stack.pop() {
            let g = &spec.gates[gi];
            if next < g.children.len() {
                stack.push((gi, next + 1));
                if let Some(&ci) = gate_index.get(g.children[next].as_str()) {
                    match colour[ci] {
                        0 => {
                            colour[ci] = 1;
                            stack.push((ci, 0));
                        }
                        1 if reported.insert(ci) => {
                            let c = &spec.gates[ci];
                            out.push(
                                Error,
                                "cycle",
                                Some(&c.id),
                                c.line,
                                format!("`{}` is its own ancestor (via `{}`)", c.id, g.id),
                            );
                        }
                        _ => {}
                    }
                }
            } else {
                colour[gi] = 2;
            }
        }
    }

    match (&spec.top, spec.top_lines.len()) {
        (_, n) if n > 1 => out.push(
            Error,
            "multiple-top",
            None,
            spec.top_lines.get(1).copied(),
            format!("top event declared {n} times"),
        ),
        (None, _) => out.push(
            Error,
            "missing-top",
            None,
            None,
            "no `top = ...` declaration".into(),
        ),
        _ => {}
    }

    if let Some(top) = spec.top.as_deref() {
        if !ids.contains_key(top) {
            out.push(
                Error,
                "unresolved",
                Some(top),
                spec.top_lines.first().copied(),
                format!("top event `{top}` is not defined"),
            );
        } else {
            let mut reach = HashSet::new();
            let mut stack = vec![top];
            while let Some(id) = stack.pop() {
                if !reach.insert(id) {
                    continue;
                }
                if let Some(&gi) = gate_index.get(id) {
                    stack.extend(
                        spec.gates[gi]
                            .children
                            .iter()
                            .map(String::as_str)
                            .filter(|c| ids.contains_key(c)),
                    );
                }
            }
            for g in &spec.gates {
                if !reach.contains(g.id.as_str()) && !g.anonymous {
                    out.push(
                        Error,
                        "unreachable",
                        Some(&g.id),
                        g.line,
                        "gate is not reachable from the top event".into(),
                    );
                }
            }
            for e in &spec.events {
                if !reach.contains(e.id.as_str()) {
                    out.push(
                        Warning,
                        "unused-event",
                        Some(&e.id),
                        e.line,
                        "basic event is not reachable from the top event".into(),
                    );
                }
            }
        }
    }

    out.0.sort_by(|a, b| {
        b.severity
            .cmp(&a.severity)
            .then(
                a.line
                    .unwrap_or(usize::MAX)
                    .cmp(&b.line.unwrap_or(usize::MAX)),
            )
            .then(a.code.cmp(b.code))
            .then(a.node.cmp(&b.node))
    });
    out.0
}
