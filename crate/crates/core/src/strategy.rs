//! Strategy tips from weighted heuristics.
//!
//! Heuristics files are S-expressions:
//!
//! ```text
//! (heuristics {
//!     (material "Pawn" 0.15)
//!     (mobility 0.3)
//!     (lineCompletion 3 -0.5)
//! })
//! ```

use thiserror::Error;

use crate::compiler::GameSpec;
use crate::sexpr::{parse, NodeKind, ParseError, RawNode, Span};

#[derive(Debug, Clone, PartialEq)]
pub enum HeuristicKind {
    Material(String),
    Mobility,
    LineCompletion(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicEntry {
    pub kind: HeuristicKind,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StrategyError {
    #[error("unknown piece name `{0}`")]
    UnknownPieceName(String),
    #[error("weight {0} is not finite")]
    NonFiniteWeight(f64),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("bad heuristics entry at {}..{}: {message}", span.start, span.end)]
    Format { message: String, span: Span },
}

/// Importance phrase for a weight, by absolute value in 0.2-wide buckets.
pub fn importance_bucket(weight: f64) -> &'static str {
    let w = weight.abs();
    if w < 0.2 {
        "very low importance"
    } else if w < 0.4 {
        "low importance"
    } else if w < 0.6 {
        "moderate importance"
    } else if w < 0.8 {
        "high importance"
    } else {
        "very high importance"
    }
}

/// One line per nonzero entry, in input order.
pub fn explain_heuristics(entries: &[HeuristicEntry], spec: &GameSpec) -> Result<Vec<String>, StrategyError> {
    let mut lines = Vec::new();
    for e in entries {
        if !e.weight.is_finite() {
            return Err(StrategyError::NonFiniteWeight(e.weight));
        }
        if let HeuristicKind::Material(name) = &e.kind {
            if !spec.has_base_piece(name) {
                return Err(StrategyError::UnknownPieceName(name.clone()));
            }
        }
        if e.weight == 0.0 {
            continue;
        }
        let up = e.weight > 0.0;
        let verb = if up { "maximise" } else { "minimise" };
        let body = match &e.kind {
            HeuristicKind::Material(name) => format!("Try to {verb} the number of {name}(s) you control"),
            HeuristicKind::Mobility => format!("Try to {verb} the number of moves available to you"),
            HeuristicKind::LineCompletion(n) if up => {
                format!("Try to work towards completing lines of {n} of your pieces")
            }
            HeuristicKind::LineCompletion(n) => format!("Try to avoid completing lines of {n} of your pieces"),
        };
        lines.push(format!("{body} ({})", importance_bucket(e.weight)));
    }
    Ok(lines)
}

fn bad(message: &str, node: &RawNode) -> StrategyError {
    StrategyError::Format { message: message.to_string(), span: node.span }
}

fn weight(node: &RawNode) -> Result<f64, StrategyError> {
    match &node.kind {
        NodeKind::Number(n) => Ok(*n as f64),
        NodeKind::Symbol(s) => s.parse::<f64>().map_err(|_| bad("expected a weight", node)),
        _ => Err(bad("expected a weight", node)),
    }
}

/// Parse a heuristics document.
pub fn parse_heuristics(text: &str) -> Result<Vec<HeuristicEntry>, StrategyError> {
    let root = parse(text)?;
    if root.head() != Some("heuristics") {
        return Err(bad("expected (heuristics ...)", &root));
    }
    let mut items = Vec::new();
    for arg in root.args() {
        match &arg.kind {
            NodeKind::Collection(inner) => items.extend(inner.iter()),
            _ => items.push(arg),
        }
    }
    items
        .into_iter()
        .map(|item| {
            let args = item.args();
            let entry = match (item.head(), args) {
                (Some("material"), [name, w]) => HeuristicEntry {
                    kind: HeuristicKind::Material(
                        name.as_text().ok_or_else(|| bad("expected a piece name", name))?.into(),
                    ),
                    weight: weight(w)?,
                },
                (Some("mobility"), [w]) => HeuristicEntry { kind: HeuristicKind::Mobility, weight: weight(w)? },
                (Some("lineCompletion"), [n, w]) => {
                    let len = n
                        .as_number()
                        .and_then(|v| usize::try_from(v).ok())
                        .ok_or_else(|| bad("expected a line length", n))?;
                    HeuristicEntry { kind: HeuristicKind::LineCompletion(len), weight: weight(w)? }
                }
                _ => return Err(bad("unknown heuristic", item)),
            };
            if entry.weight.is_finite() {
                Ok(entry)
            } else {
                Err(StrategyError::NonFiniteWeight(entry.weight))
            }
        })
        .collect()
}
