//! Lexer and recursive-descent parser for `.lud` game descriptions.
//!
//! The grammar is small:
//!
//! ```text
//! node       := call | collection | string | atom
//! call       := '(' symbol node* ')'
//! collection := '{' node* '}'
//! string     := '"' ( [^"\\] | '\\' any )* '"'
//! atom       := maximal run of non-whitespace excluding ( ) { } "
//! ```
//!
//! Atoms that parse as a signed 64-bit integer become [`NodeKind::Number`],
//! everything else is a [`NodeKind::Symbol`]. A `//` at a token boundary starts
//! a comment that runs to the end of the line.

use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

/// Nesting guard so adversarial input cannot blow the stack.
pub const MAX_DEPTH: usize = 256;

/// Half-open byte range into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn slice<'a>(&self, text: &'a str) -> &'a str {
        &text[self.start..self.end]
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawNode {
    pub kind: NodeKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Symbol(String),
    Number(i64),
    /// String contents with escapes resolved.
    Text(String),
    Call {
        head: String,
        head_span: Span,
        args: Vec<RawNode>,
    },
    Collection(Vec<RawNode>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    EmptyInput,
    #[error("unbalanced bracket at byte {0}")]
    UnbalancedParen(usize),
    #[error("unterminated string starting at byte {0}")]
    UnterminatedString(usize),
    #[error("unexpected second top-level form at byte {0}")]
    TrailingContent(usize),
    #[error("call at byte {0} must start with a symbol")]
    ExpectedHead(usize),
    #[error("nesting deeper than {MAX_DEPTH} at byte {0}")]
    TooDeep(usize),
}

impl ParseError {
    pub fn position(&self) -> Option<usize> {
        match *self {
            ParseError::EmptyInput => None,
            ParseError::UnbalancedParen(p)
            | ParseError::UnterminatedString(p)
            | ParseError::TrailingContent(p)
            | ParseError::ExpectedHead(p)
            | ParseError::TooDeep(p) => Some(p),
        }
    }
}

/// 1-based line and column of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
    (line, col)
}

/// Parse exactly one top-level form.
pub fn parse(text: &str) -> Result<RawNode, ParseError> {
    let mut parser = Parser { text, pos: 0 };
    parser.skip_trivia();
    if parser.at_end() {
        return Err(ParseError::EmptyInput);
    }
    let node = parser.node(0)?;
    parser.skip_trivia();
    if !parser.at_end() {
        return Err(ParseError::TrailingContent(parser.pos));
    }
    Ok(node)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '{' | '}' | '"')
}

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_trivia(&mut self) {
        loop {
            let rest = &self.text[self.pos..];
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with("//") {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    fn node(&mut self, depth: usize) -> Result<RawNode, ParseError> {
        if depth > MAX_DEPTH {
            return Err(ParseError::TooDeep(self.pos));
        }
        let start = self.pos;
        match self.peek() {
            None => Err(ParseError::UnbalancedParen(start)),
            Some('(') => self.call(depth),
            Some('{') => {
                self.pos += 1;
                let items = self.items('}', start, depth)?;
                Ok(RawNode { kind: NodeKind::Collection(items), span: Span::new(start, self.pos) })
            }
            Some(')') | Some('}') => Err(ParseError::UnbalancedParen(start)),
            Some('"') => self.string(),
            Some(_) => Ok(self.atom()),
        }
    }

    fn call(&mut self, depth: usize) -> Result<RawNode, ParseError> {
        let start = self.pos;
        self.pos += 1;
        self.skip_trivia();
        let head_start = self.pos;
        let head = match self.peek() {
            Some(c) if !is_delimiter(c) => match self.atom().kind {
                NodeKind::Symbol(s) => s,
                _ => return Err(ParseError::ExpectedHead(head_start)),
            },
            None => return Err(ParseError::UnbalancedParen(start)),
            Some(_) => return Err(ParseError::ExpectedHead(head_start)),
        };
        let head_span = Span::new(head_start, self.pos);
        let args = self.items(')', start, depth)?;
        Ok(RawNode { kind: NodeKind::Call { head, head_span, args }, span: Span::new(start, self.pos) })
    }

    /// Children up to and including `close`.
    fn items(&mut self, close: char, open_pos: usize, depth: usize) -> Result<Vec<RawNode>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            match self.peek() {
                None => return Err(ParseError::UnbalancedParen(open_pos)),
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(out);
                }
                Some(')') | Some('}') => return Err(ParseError::UnbalancedParen(self.pos)),
                Some(_) => out.push(self.node(depth + 1)?),
            }
        }
    }

    fn string(&mut self) -> Result<RawNode, ParseError> {
        let start = self.pos;
        let mut value = String::new();
        let mut chars = self.text[start + 1..].char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos = start + 1 + i + 1;
                    return Ok(RawNode { kind: NodeKind::Text(value), span: Span::new(start, self.pos) });
                }
                '\\' => match chars.next() {
                    Some((_, esc)) => value.push(esc),
                    None => break,
                },
                c => value.push(c),
            }
        }
        Err(ParseError::UnterminatedString(start))
    }

    fn atom(&mut self) -> RawNode {
        let start = self.pos;
        let len = self.text[start..].find(is_delimiter).unwrap_or(self.text.len() - start);
        self.pos += len;
        let token = &self.text[start..self.pos];
        let kind = match token.parse::<i64>() {
            Ok(n) => NodeKind::Number(n),
            Err(_) => NodeKind::Symbol(token.to_string()),
        };
        RawNode { kind, span: Span::new(start, self.pos) }
    }
}

impl RawNode {
    /// Equality that ignores source spans.
    pub fn structure_eq(&self, other: &RawNode) -> bool {
        match (&self.kind, &other.kind) {
            (NodeKind::Symbol(a), NodeKind::Symbol(b)) => a == b,
            (NodeKind::Number(a), NodeKind::Number(b)) => a == b,
            (NodeKind::Text(a), NodeKind::Text(b)) => a == b,
            (NodeKind::Call { head: ha, args: aa, .. }, NodeKind::Call { head: hb, args: ab, .. }) => {
                ha == hb && nodes_eq(aa, ab)
            }
            (NodeKind::Collection(a), NodeKind::Collection(b)) => nodes_eq(a, b),
            _ => false,
        }
    }

    pub fn head(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::Call { head, .. } => Some(head),
            _ => None,
        }
    }

    pub fn args(&self) -> &[RawNode] {
        match &self.kind {
            NodeKind::Call { args, .. } => args,
            NodeKind::Collection(items) => items,
            _ => &[],
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_number(&self) -> Option<i64> {
        match self.kind {
            NodeKind::Number(n) => Some(n),
            _ => None,
        }
    }

    /// Short label used in diagnostics: `(head ...)`, `{...}` or the atom itself.
    pub fn describe(&self) -> String {
        match &self.kind {
            NodeKind::Symbol(s) => s.clone(),
            NodeKind::Number(n) => n.to_string(),
            NodeKind::Text(s) => format!("\"{s}\""),
            NodeKind::Call { head, .. } => format!("({head} ...)"),
            NodeKind::Collection(_) => "{...}".to_string(),
        }
    }

    /// Number of nodes in this subtree, counting this one.
    pub fn size(&self) -> usize {
        1 + self.args().iter().map(RawNode::size).sum::<usize>()
    }
}

fn nodes_eq(a: &[RawNode], b: &[RawNode]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.structure_eq(y))
}

/// Single-line canonical text; strings are re-quoted with `\"` and `\\` escapes.
pub fn print_canonical(node: &RawNode) -> String {
    let mut out = String::new();
    write_node(&mut out, node).expect("writing to a String cannot fail");
    out
}

fn write_node(out: &mut String, node: &RawNode) -> fmt::Result {
    match &node.kind {
        NodeKind::Symbol(s) => out.write_str(s),
        NodeKind::Number(n) => write!(out, "{n}"),
        NodeKind::Text(s) => {
            out.push('"');
            for c in s.chars() {
                if c == '"' || c == '\\' {
                    out.push('\\');
                }
                out.push(c);
            }
            out.push('"');
            Ok(())
        }
        NodeKind::Call { head, args, .. } => {
            out.push('(');
            out.push_str(head);
            for arg in args {
                out.push(' ');
                write_node(out, arg)?;
            }
            out.push(')');
            Ok(())
        }
        NodeKind::Collection(items) => {
            out.push('{');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write_node(out, item)?;
            }
            out.push('}');
            Ok(())
        }
    }
}

impl fmt::Display for RawNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_canonical(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn call(head: &str, args: Vec<NodeKind>) -> NodeKind {
        NodeKind::Call {
            head: head.into(),
            head_span: Span::default(),
            args: args.into_iter().map(|kind| RawNode { kind, span: Span::default() }).collect(),
        }
    }

    #[test]
    fn players_call() {
        let node = parse("(players 2)").unwrap();
        let expected = RawNode { kind: call("players", vec![NodeKind::Number(2)]), span: Span::default() };
        assert!(node.structure_eq(&expected));
        assert_eq!(node.span, Span::new(0, 11));
    }

    #[test]
    fn empty_and_blank_input() {
        assert_eq!(parse(""), Err(ParseError::EmptyInput));
        assert_eq!(parse("  \n // only a comment\n"), Err(ParseError::EmptyInput));
    }

    #[test]
    fn brace_collection_of_calls() {
        let node = parse("{ (sites Side NE) (sites Side SW) }").unwrap();
        let NodeKind::Collection(items) = &node.kind else {
            panic!("expected collection, got {node:?}");
        };
        assert_eq!(items.len(), 2);
        assert_eq!(items[0].head(), Some("sites"));
        assert_eq!(items[1].args()[1].as_symbol(), Some("SW"));
    }

    #[test]
    fn error_positions() {
        assert_eq!(parse("(a (b c)"), Err(ParseError::UnbalancedParen(0)));
        assert_eq!(parse("(a b))"), Err(ParseError::TrailingContent(5)));
        assert_eq!(parse("(a {b)"), Err(ParseError::UnbalancedParen(5)));
        assert_eq!(parse("(a \"bc"), Err(ParseError::UnterminatedString(3)));
        assert_eq!(parse("(a) (b)"), Err(ParseError::TrailingContent(4)));
        assert_eq!(parse("(1 2)"), Err(ParseError::ExpectedHead(1)));
        assert_eq!(parse("()"), Err(ParseError::ExpectedHead(1)));
        assert_eq!(parse(")"), Err(ParseError::UnbalancedParen(0)));
    }

    #[test]
    fn canonical_text() {
        assert_eq!(print_canonical(&parse("( players   2 )").unwrap()), "(players 2)");
        assert_eq!(print_canonical(&parse("\"Tic-Tac-Toe\"").unwrap()), "\"Tic-Tac-Toe\"");
        assert_eq!(print_canonical(&parse(r#""a\"b\\c""#).unwrap()), r#""a\"b\\c""#);
        assert_eq!(print_canonical(&parse("{ }").unwrap()), "{}");
    }

    #[test]
    fn numbers_and_symbols() {
        assert_eq!(parse("-7").unwrap().as_number(), Some(-7));
        assert_eq!(parse("0.15").unwrap().as_symbol(), Some("0.15"));
        assert_eq!(parse("Dot0").unwrap().as_symbol(), Some("Dot0"));
    }

    #[test]
    fn comments_are_skipped() {
        let node = parse("// header\n(a // trailing\n b)").unwrap();
        assert_eq!(print_canonical(&node), "(a b)");
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let text = "(a ".repeat(10_000);
        assert!(matches!(parse(&text), Err(ParseError::TooDeep(_))));
    }

    #[test]
    fn line_col_is_one_based() {
        assert_eq!(line_col("ab\ncd", 0), (1, 1));
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
    }

    fn arb_node() -> impl Strategy<Value = RawNode> {
        let leaf = prop_oneof![
            "[A-Za-z][A-Za-z0-9_.-]{0,6}".prop_map(NodeKind::Symbol),
            any::<i64>().prop_map(NodeKind::Number),
            "[ -~]{0,8}".prop_map(NodeKind::Text),
        ]
        .prop_map(|kind| RawNode { kind, span: Span::default() });
        leaf.prop_recursive(4, 32, 5, |inner| {
            prop_oneof![
                ("[a-z][A-Za-z]{0,5}", prop::collection::vec(inner.clone(), 0..5))
                    .prop_map(|(head, args)| NodeKind::Call { head, head_span: Span::default(), args }),
                prop::collection::vec(inner, 0..5).prop_map(NodeKind::Collection),
            ]
            .prop_map(|kind| RawNode { kind, span: Span::default() })
        })
    }

    fn check_spans(text: &str, node: &RawNode) {
        if matches!(node.kind, NodeKind::Call { .. } | NodeKind::Collection(_)) {
            let reparsed = parse(node.span.slice(text)).unwrap();
            assert!(reparsed.structure_eq(node));
        }
        let mut prev_end = node.span.start;
        for child in node.args() {
            assert!(node.span.contains(&child.span));
            assert!(child.span.start >= prev_end);
            prev_end = child.span.end;
            check_spans(text, child);
        }
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(node in arb_node()) {
            let text = print_canonical(&node);
            let reparsed = parse(&text).unwrap();
            prop_assert!(reparsed.structure_eq(&node));
            check_spans(&text, &reparsed);
        }

        #[test]
        fn parser_is_total(text in "[(){}\" a-z0-9/\\\\\n]{0,64}") {
            // Either a tree or a positioned error; never a panic.
            match parse(&text) {
                Ok(node) => prop_assert!(node.span.end <= text.len()),
                Err(e) => prop_assert!(e.position().is_none_or(|p| p <= text.len())),
            }
        }
    }
}
