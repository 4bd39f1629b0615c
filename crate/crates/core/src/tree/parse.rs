//! Line-oriented tree documents and gate expressions.
//!
//! ```text
//! # comment
//! directive spread=15 times=100,500,1000
//! event I-SOV rate=1.65633E-3 desc="Valve inside SOS"
//! event X rate=(1e-4,2e-4,3e-4)
//! gate O-SOS = I-SOV OR I-SOL
//! gate IE6 = I-HiSOF PAND O-SOS
//! top = IE6
//! ```
//!
//! Expressions use `AND`, `OR`, `PAND`, `POR` (or the glyphs `∩ ∪ ◁ ≀`, plus
//! `∧ ∨` for AND/OR). PAND and POR bind tightest, then AND, then OR; all are
//! left-associative and an unparenthesised chain of one operator becomes a
//! single n-ary gate.

use std::fmt;

use thiserror::Error;

use super::format::StructuredTree;
use super::{Directives, EventDef, FaultTree, GateDef, GateKind, RateSpec, TreeSpec};
use crate::error::{Error, Result};
use crate::fuzzy::{Spread, Tfn};
use crate::gates::MissionTime;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnbalancedParens,
    AdjacentOperators,
    MissingOperator,
    UnknownGateKind,
    UnknownStatement,
    BadNumber,
    NonPositiveRate,
    BadSpread,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl ParseError {
    fn new(kind: ParseErrorKind, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: 0,
            column,
            kind,
            message: message.into(),
        }
    }

    fn at_line(mut self, line: usize, column_offset: usize) -> Self {
        self.line = line;
        self.column += column_offset;
        self
    }
}

/// Parsed gate expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Ref(String),
    Gate { kind: GateKind, operands: Vec<Expr> },
}

impl Expr {
    /// Identifiers referenced anywhere in the expression, in source order.
    pub fn references(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Ref(id) => out.push(id),
            Expr::Gate { operands, .. } => operands.iter().for_each(|o| o.collect_refs(out)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Ref(id) => f.write_str(id),
            Expr::Gate { kind, operands } => {
                for (i, o) in operands.iter().enumerate() {
                    if i > 0 {
                        write!(f, " {kind} ")?;
                    }
                    match o {
                        Expr::Ref(_) => write!(f, "{o}")?,
                        Expr::Gate { .. } => write!(f, "({o})")?,
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Op(GateKind),
    LParen,
    RParen,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\'')
}

/// Tokens with their 1-based character columns.
fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, col));
                i += 1;
            }
            '∩' | '∧' => {
                out.push((Tok::Op(GateKind::And), col));
                i += 1;
            }
            '∪' | '∨' => {
                out.push((Tok::Op(GateKind::Or), col));
                i += 1;
            }
            '◁' => {
                out.push((Tok::Op(GateKind::Pand), col));
                i += 1;
            }
            '≀' => {
                out.push((Tok::Op(GateKind::Por), col));
                i += 1;
            }
            c if is_ident_char(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                match word.as_str() {
                    "AND" | "OR" | "PAND" | "POR" => {
                        out.push((Tok::Op(GateKind::from_keyword(&word).unwrap()), col))
                    }
                    _ => out.push((Tok::Ident(word), col)),
                }
            }
            other => {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    col,
                    format!("unexpected character `{other}`"),
                ))
            }
        }
    }
    Ok(out)
}

fn precedence(kind: GateKind) -> u8 {
    match kind {
        GateKind::Or => 1,
        GateKind::And => 2,
        GateKind::Pand | GateKind::Por => 3,
    }
}

fn looks_like_operator(word: &str) -> bool {
    word.len() >= 2 && word.chars().all(|c| c.is_ascii_uppercase())
}

struct ExprParser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl ExprParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.end_col)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let col = self.col();
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Ident(id), _)) => {
                self.pos += 1;
                Ok(Expr::Ref(id))
            }
            Some((Tok::LParen, _)) => {
                self.pos += 1;
                let inner = self.expression(1)?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(ParseError::new(
                        ParseErrorKind::UnbalancedParens,
                        col,
                        "unclosed `(`",
                    )),
                }
            }
            Some((Tok::Op(k), _)) => Err(ParseError::new(
                ParseErrorKind::AdjacentOperators,
                col,
                format!("expected an operand before `{k}`"),
            )),
            Some((Tok::RParen, _)) => Err(ParseError::new(
                ParseErrorKind::UnbalancedParens,
                col,
                "unexpected `)`",
            )),
            None => Err(ParseError::new(
                ParseErrorKind::Syntax,
                col,
                "expected an operand",
            )),
        }
    }

    fn expression(&mut self, min_prec: u8) -> Result<Expr, ParseError> {
        let mut lhs = self.primary()?;
        // Kind of the n-ary gate this loop is still extending, if any.
        let mut open: Option<GateKind> = None;
        loop {
            let kind = match self.peek() {
                Some(Tok::Op(k)) if precedence(*k) >= min_prec => *k,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.expression(precedence(kind) + 1)?;
            match (&mut lhs, open) {
                (Expr::Gate { operands, .. }, Some(k)) if k == kind => operands.push(rhs),
                _ => {
                    lhs = Expr::Gate {
                        kind,
                        operands: vec![lhs, rhs],
                    };
                    open = Some(kind);
                }
            }
        }
        Ok(lhs)
    }

    fn finish(mut self) -> Result<Expr, ParseError> {
        let e = self.expression(1)?;
        match self.toks.get(self.pos).cloned() {
            None => Ok(e),
            Some((Tok::RParen, c)) => Err(ParseError::new(
                ParseErrorKind::UnbalancedParens,
                c,
                "unexpected `)`",
            )),
            Some((Tok::Ident(w), c)) if looks_like_operator(&w) => Err(ParseError::new(
                ParseErrorKind::UnknownGateKind,
                c,
                format!("unknown gate kind `{w}` (expected AND, OR, PAND or POR)"),
            )),
            Some((_, c)) => {
                self.pos += 1;
                Err(ParseError::new(
                    ParseErrorKind::MissingOperator,
                    c,
                    "expected an operator",
                ))
            }
        }
    }
}

/// Parses a gate expression. Identifiers are not resolved here.
///
/// ```
/// use fuzzy_tft::tree::{parse_expression, Expr, GateKind};
/// let e = parse_expression("A OR B PAND C").unwrap();
/// let Expr::Gate { kind, operands } = e else { panic!() };
/// assert_eq!(kind, GateKind::Or);
/// assert_eq!(operands[1].to_string(), "B PAND C");
/// ```
pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let end_col = text.chars().count() + 1;
    ExprParser {
        toks,
        pos: 0,
        end_col,
    }
    .finish()
}

/// Splits `text` into whitespace-separated words, keeping quoted strings and
/// parenthesised groups intact. Returns each word with its 0-based char offset.
fn split_words(text: &str) -> Result<Vec<(String, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start = 0;
    let mut in_quotes = false;
    let mut depth = 0i32;
    let mut escaped = false;
    for (i, c) in text.chars().enumerate() {
        if in_quotes {
            cur.push(c);
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_quotes = false;
            }
            continue;
        }
        match c {
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push((std::mem::take(&mut cur), start));
                }
            }
            _ => {
                if cur.is_empty() {
                    start = i;
                }
                match c {
                    '"' => in_quotes = true,
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    _ => {}
                }
                cur.push(c);
            }
        }
    }
    if in_quotes {
        return Err(ParseError::new(
            ParseErrorKind::Syntax,
            start + 1,
            "unterminated string",
        ));
    }
    if !cur.is_empty() {
        out.push((cur, start));
    }
    Ok(out)
}

fn unquote(v: &str, col: usize) -> Result<String, ParseError> {
    let inner = v
        .strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .ok_or_else(|| ParseError::new(ParseErrorKind::Syntax, col, "expected a quoted string"))?;
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('n') => out.push('\n'),
                Some(other) => out.push(other),
                None => out.push('\\'),
            }
        } else {
            out.push(c);
        }
    }
    Ok(out)
}

fn number(v: &str, col: usize) -> Result<f64, ParseError> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| {
            ParseError::new(
                ParseErrorKind::BadNumber,
                col,
                format!("invalid number `{v}`"),
            )
        })
}

fn positive_rate(v: &str, col: usize) -> Result<f64, ParseError> {
    let r = number(v, col)?;
    if r > 0.0 {
        Ok(r)
    } else {
        Err(ParseError::new(
            ParseErrorKind::NonPositiveRate,
            col,
            format!("rate must be positive, got {v}"),
        ))
    }
}

fn parse_rate(v: &str, col: usize) -> Result<RateSpec, ParseError> {
    if let Some(inner) = v.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(ParseError::new(
                ParseErrorKind::Syntax,
                col,
                "fuzzy rate needs three components `(lower,peak,upper)`",
            ));
        }
        let a = positive_rate(parts[0], col)?;
        let b = positive_rate(parts[1], col)?;
        let c = positive_rate(parts[2], col)?;
        let fuzzy = Tfn::new(a, b, c)
            .map_err(|e| ParseError::new(ParseErrorKind::Syntax, col, e.to_string()))?;
        Ok(RateSpec::Fuzzy { fuzzy })
    } else {
        Ok(RateSpec::Crisp {
            rate: positive_rate(v, col)?,
            spread: None,
        })
    }
}

fn parse_times(v: &str, col: usize) -> Result<Vec<MissionTime>, ParseError> {
    v.split(',')
        .map(|s| {
            let x = number(s.trim(), col)?;
            MissionTime::new(x)
                .map_err(|e| ParseError::new(ParseErrorKind::BadNumber, col, e.to_string()))
        })
        .collect()
}

fn key_value(word: &str, col: usize) -> Result<(&str, &str), ParseError> {
    word.split_once('=').ok_or_else(|| {
        ParseError::new(
            ParseErrorKind::Syntax,
            col,
            format!("expected `key=value`, got `{word}`"),
        )
    })
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(is_ident_char) && GateKind::from_keyword(id).is_none()
}

/// Raw spreads are checked once the whole document has been read, because
/// `spread_override` may come after the lines that use it.
struct PendingSpread {
    percent: f64,
    line: usize,
    column: usize,
    event: Option<usize>,
}

#[derive(Default)]
struct DocBuilder {
    spec: TreeSpec,
    spreads: Vec<PendingSpread>,
    spread_override: bool,
}

impl DocBuilder {
    /// Lowers an expression into gate definitions, returning the id that stands for it.
    fn lower(
        &mut self,
        expr: &Expr,
        owner: &str,
        counter: &mut usize,
        line: usize,
        named: Option<&str>,
    ) -> String {
        match expr {
            Expr::Ref(id) => id.clone(),
            Expr::Gate { kind, operands } => {
                let id = match named {
                    Some(n) => n.to_string(),
                    None => {
                        *counter += 1;
                        format!("{owner}#{counter}")
                    }
                };
                let children = operands
                    .iter()
                    .map(|o| self.lower(o, owner, counter, line, None))
                    .collect();
                self.spec.gates.push(GateDef {
                    id: id.clone(),
                    kind: *kind,
                    children,
                    anonymous: named.is_none(),
                    line: Some(line),
                });
                id
            }
        }
    }

    fn define_gate(&mut self, id: &str, expr: &Expr, line: usize) {
        let mut counter = 0;
        match expr {
            Expr::Ref(_) => {
                // `gate X = Y` is a unary OR pass-through.
                let child = self.lower(expr, id, &mut counter, line, None);
                self.spec.gates.push(GateDef {
                    id: id.to_string(),
                    kind: GateKind::Or,
                    children: vec![child],
                    anonymous: false,
                    line: Some(line),
                });
            }
            Expr::Gate { .. } => {
                self.lower(expr, id, &mut counter, line, Some(id));
            }
        }
    }

    fn statement(&mut self, body: &str, line: usize) -> Result<(), ParseError> {
        let words = split_words(body)?;
        let Some((head, _)) = words.first() else {
            return Ok(());
        };
        match head.as_str() {
            "event" => self.event(&words, line),
            "gate" => self.gate(body, &words, line),
            "top" => self.top(body, &words, line),
            "directive" => self.directive(&words, line),
            other => Err(ParseError::new(
                ParseErrorKind::UnknownStatement,
                1,
                format!("unknown statement `{other}` (expected event, gate, top or directive)"),
            )),
        }
    }

    fn event(&mut self, words: &[(String, usize)], line: usize) -> Result<(), ParseError> {
        let (id, id_col) = words
            .get(1)
            .ok_or_else(|| ParseError::new(ParseErrorKind::Syntax, 6, "expected an event id"))?;
        if !valid_id(id) || id.contains('=') {
            return Err(ParseError::new(
                ParseErrorKind::Syntax,
                id_col + 1,
                format!("invalid event id `{id}`"),
            ));
        }
        let mut rate = None;
        let mut description = None;
        let mut spread = None;
        for (w, off) in &words[2..] {
            let col = off + 1;
            let (k, v) = key_value(w, col)?;
            let vcol = col + k.chars().count() + 1;
            match k {
                "rate" => rate = Some(parse_rate(v, vcol)?),
                "spread" => spread = Some(number(v, vcol)?),
                "desc" => description = Some(unquote(v, vcol)?),
                _ => {
                    return Err(ParseError::new(
                        ParseErrorKind::Syntax,
                        col,
                        format!("unknown event attribute `{k}`"),
                    ))
                }
            }
        }
        let spec = rate.ok_or_else(|| {
            ParseError::new(
                ParseErrorKind::Syntax,
                id_col + 1,
                format!("event `{id}` has no rate"),
            )
        })?;
        if let Some(pct) = spread {
            if matches!(spec, RateSpec::Fuzzy { .. }) {
                return Err(ParseError::new(
                    ParseErrorKind::BadSpread,
                    id_col + 1,
                    "a fuzzy rate cannot take a spread",
                ));
            }
            self.spreads.push(PendingSpread {
                percent: pct,
                line,
                column: id_col + 1,
                event: Some(self.spec.events.len()),
            });
        }
        self.spec.events.push(EventDef {
            id: id.clone(),
            description,
            spec,
            line: Some(line),
        });
        Ok(())
    }

    fn assignment<'a>(
        &self,
        body: &'a str,
        what: &str,
    ) -> Result<(&'a str, &'a str, usize), ParseError> {
        let (lhs, rhs) = body.split_once('=').ok_or_else(|| {
            ParseError::new(
                ParseErrorKind::Syntax,
                1,
                format!("expected `{what} = <expression>`"),
            )
        })?;
        let offset = lhs.chars().count() + 1;
        Ok((lhs, rhs, offset))
    }

    fn gate(
        &mut self,
        body: &str,
        _words: &[(String, usize)],
        line: usize,
    ) -> Result<(), ParseError> {
        let (lhs, rhs, offset) = self.assignment(body, "gate <id>")?;
        let id = lhs.trim_start().strip_prefix("gate").unwrap_or("").trim();
        if !valid_id(id) {
            return Err(ParseError::new(
                ParseErrorKind::Syntax,
                6,
                format!("invalid gate id `{id}`"),
            ));
        }
        let expr = parse_expression(rhs).map_err(|e| e.at_line(line, offset))?;
        self.define_gate(id, &expr, line);
        Ok(())
    }

    fn top(
        &mut self,
        body: &str,
        _words: &[(String, usize)],
        line: usize,
    ) -> Result<(), ParseError> {
        let (lhs, rhs, offset) = self.assignment(body, "top")?;
        if lhs.trim() != "top" {
            return Err(ParseError::new(
                ParseErrorKind::Syntax,
                1,
                "expected `top = <id>`",
            ));
        }
        let expr = parse_expression(rhs).map_err(|e| e.at_line(line, offset))?;
        let id = match &expr {
            Expr::Ref(id) => id.clone(),
            Expr::Gate { .. } => {
                self.define_gate("top", &expr, line);
                "top".to_string()
            }
        };
        self.spec.top_lines.push(line);
        self.spec.top = Some(id);
        Ok(())
    }

    fn directive(&mut self, words: &[(String, usize)], line: usize) -> Result<(), ParseError> {
        for (w, off) in &words[1..] {
            let col = off + 1;
            let (k, v) = key_value(w, col)?;
            let vcol = col + k.chars().count() + 1;
            let d = &mut self.spec.directives;
            match k {
                "spread" => self.spreads.push(PendingSpread {
                    percent: number(v, vcol)?,
                    line,
                    column: vcol,
                    event: None,
                }),
                "times" => d.times = parse_times(v, vcol)?,
                "importance_time" => {
                    d.importance_time =
                        Some(parse_times(v, vcol)?.into_iter().next().ok_or_else(|| {
                            ParseError::new(ParseErrorKind::BadNumber, vcol, "expected a time")
                        })?)
                }
                "name" => d.name = Some(unquote(v, vcol)?),
                "spread_override" => {
                    self.spread_override = match v {
                        "true" => true,
                        "false" => false,
                        _ => {
                            return Err(ParseError::new(
                                ParseErrorKind::Syntax,
                                vcol,
                                "expected true or false",
                            ))
                        }
                    }
                }
                _ => {
                    return Err(ParseError::new(
                        ParseErrorKind::Syntax,
                        col,
                        format!("unknown directive `{k}`"),
                    ))
                }
            }
        }
        Ok(())
    }

    fn finish(mut self) -> Result<TreeSpec, ParseError> {
        for p in &self.spreads {
            let spread = if self.spread_override {
                Spread::custom(p.percent)
            } else {
                Spread::standard(p.percent)
            }
            .map_err(|e| ParseError {
                line: p.line,
                column: p.column,
                kind: ParseErrorKind::BadSpread,
                message: e.to_string(),
            })?;
            match p.event {
                Some(i) => {
                    if let RateSpec::Crisp { spread: s, .. } = &mut self.spec.events[i].spec {
                        *s = Some(spread);
                    }
                }
                None => self.spec.directives.spread = Some(spread),
            }
        }
        Ok(self.spec)
    }
}

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        if in_quotes {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_quotes = false;
            }
        } else if c == '"' {
            in_quotes = true;
        } else if c == '#' {
            return &line[..i];
        }
    }
    line
}

/// Parses a document into unvalidated definitions.
pub fn parse_spec(text: &str) -> Result<TreeSpec, ParseError> {
    if text.trim_start().starts_with('{') {
        return StructuredTree::from_json(text)?.to_spec();
    }
    let mut b = DocBuilder::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        b.statement(body, line)
            .map_err(|e| if e.line == 0 { e.at_line(line, 0) } else { e })?;
    }
    b.finish()
}

/// Parses and validates a tree document (text or structured encoding).
pub fn parse_tree(text: &str) -> Result<FaultTree> {
    let spec = parse_spec(text).map_err(Error::Parse)?;
    FaultTree::from_spec(&spec)
}

pub(crate) fn directives_from(
    spread: Option<f64>,
    spread_override: bool,
    times: &[f64],
    importance_time: Option<f64>,
    name: Option<String>,
) -> Result<Directives, ParseError> {
    let bad = |kind, msg: String| ParseError {
        line: 0,
        column: 0,
        kind,
        message: msg,
    };
    let spread = spread
        .map(|s| {
            if spread_override {
                Spread::custom(s)
            } else {
                Spread::standard(s)
            }
        })
        .transpose()
        .map_err(|e| bad(ParseErrorKind::BadSpread, e.to_string()))?;
    let times = times
        .iter()
        .map(|&t| MissionTime::new(t))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| bad(ParseErrorKind::BadNumber, e.to_string()))?;
    let importance_time = importance_time
        .map(MissionTime::new)
        .transpose()
        .map_err(|e| bad(ParseErrorKind::BadNumber, e.to_string()))?;
    Ok(Directives {
        name,
        spread,
        times,
        importance_time,
    })
}

pub(crate) fn lower_expression_into(spec: &mut TreeSpec, id: &str, expr: &Expr) {
    let mut b = DocBuilder {
        spec: std::mem::take(spec),
        ..DocBuilder::default()
    };
    b.define_gate(id, expr, 0);
    *spec = b.spec;
    for g in spec.gates.iter_mut().filter(|g| g.line == Some(0)) {
        g.line = None;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gate(e: &Expr) -> (GateKind, &[Expr]) {
        match e {
            Expr::Gate { kind, operands } => (*kind, operands),
            Expr::Ref(_) => panic!("expected a gate, got {e:?}"),
        }
    }

    #[test]
    fn pand_keeps_operand_order() {
        let e = parse_expression("I-HiSOF PAND O-SOS").unwrap();
        let (k, ops) = gate(&e);
        assert_eq!(k, GateKind::Pand);
        assert_eq!(
            ops,
            &[Expr::Ref("I-HiSOF".into()), Expr::Ref("O-SOS".into())]
        );
    }

    #[test]
    fn chains_flatten() {
        let e = parse_expression("A OR B OR C").unwrap();
        let (k, ops) = gate(&e);
        assert_eq!((k, ops.len()), (GateKind::Or, 3));
        let e = parse_expression("A PAND B PAND C").unwrap();
        assert_eq!(e.references(), vec!["A", "B", "C"]);
        assert_eq!(gate(&e).1.len(), 3);
    }

    #[test]
    fn precedence_and_parentheses() {
        let e = parse_expression("A OR B AND C PAND D").unwrap();
        assert_eq!(e.to_string(), "A OR (B AND (C PAND D))");
        let e = parse_expression("(A OR B) PAND C").unwrap();
        assert_eq!(e.to_string(), "(A OR B) PAND C");
        // A parenthesised chain is not merged into the outer one.
        let e = parse_expression("(A OR B) OR C").unwrap();
        assert_eq!(gate(&e).1.len(), 2);
        let e = parse_expression("A PAND B POR C").unwrap();
        assert_eq!(e.to_string(), "(A PAND B) POR C");
    }

    #[test]
    fn glyph_aliases() {
        let a = parse_expression("A ∪ B ∩ C ◁ D ≀ E").unwrap();
        let b = parse_expression("A OR B AND C PAND D POR E").unwrap();
        assert_eq!(a, b);
        assert_eq!(
            parse_expression("A ∧ B").unwrap(),
            parse_expression("A AND B").unwrap()
        );
    }

    #[test]
    fn expression_errors() {
        let kind = |s: &str| parse_expression(s).unwrap_err().kind;
        assert_eq!(kind("(A OR B"), ParseErrorKind::UnbalancedParens);
        assert_eq!(kind("A OR B)"), ParseErrorKind::UnbalancedParens);
        assert_eq!(kind("A OR AND B"), ParseErrorKind::AdjacentOperators);
        assert_eq!(kind("A B"), ParseErrorKind::MissingOperator);
        assert_eq!(kind("A XOR B"), ParseErrorKind::UnknownGateKind);
        assert_eq!(kind("A OR"), ParseErrorKind::Syntax);
        assert_eq!(parse_expression("A OR AND B").unwrap_err().column, 6);
    }

    #[test]
    fn minimal_document() {
        let t = parse_tree("event A rate=1e-3\nevent B rate=2e-3\ntop = A ∧ B\n").unwrap();
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn document_errors_carry_positions() {
        let err = parse_spec("event A rate=1e-3\ngate G = A OR (A\n").unwrap_err();
        assert_eq!((err.line, err.kind), (2, ParseErrorKind::UnbalancedParens));
        let err = parse_spec("event A rate=-1\n").unwrap_err();
        assert_eq!((err.line, err.kind), (1, ParseErrorKind::NonPositiveRate));
        let err = parse_spec("evnt A rate=1\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownStatement);
        let err = parse_spec("directive spread=20\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::BadSpread);
        assert!(parse_spec("directive spread=20 spread_override=true\n").is_ok());
    }

    #[test]
    fn comments_and_quotes() {
        let spec = parse_spec("event A rate=1e-3 desc=\"pump # 2\" # trailing\ntop = A\n").unwrap();
        assert_eq!(spec.events[0].description.as_deref(), Some("pump # 2"));
    }

    #[test]
    fn nested_expressions_get_generated_ids() {
        let spec = parse_spec(
            "event A rate=1\nevent B rate=1\nevent C rate=1\ngate G = (A OR B) PAND C\ntop = G\n",
        )
        .unwrap();
        let ids: Vec<_> = spec.gates.iter().map(|g| g.id.as_str()).collect();
        assert_eq!(ids, vec!["G#1", "G"]);
        assert!(spec.gates[0].anonymous);
        assert_eq!(spec.gates[1].children, vec!["G#1", "C"]);
    }
}
