//! Assembly of the single-page manual and its image assets.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::compiler::GameSpec;
use crate::engine::{initial_state, replay, EngineError, PlayoutTrace};
use crate::english::TranslationContext;
use crate::render::{render_board, render_ending_pair, render_move_pair, HighlightMode, HighlightSpec};
use crate::taxonomy::{DistinctMove, EndingExample};

pub const SECTIONS: [&str; 5] = ["Rules", "Heuristics", "Setup", "Endings", "Moves"];
pub const NO_STRATEGY: &str = "No strategy information available.";
pub const SETUP_ASSET: &str = "setup.svg";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManualError {
    #[error("image `{0}` was referenced but not rendered")]
    MissingAsset(String),
    #[error("no playout with seed {0} in the batch")]
    MissingTrace(u64),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// A rendered SVG file, named relative to the `svg/` directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Asset {
    pub name: String,
    pub svg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImagePair {
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedAssets {
    pub assets: Vec<Asset>,
    pub setup: String,
    /// One pair per ending, in the same order as the endings.
    pub endings: Vec<ImagePair>,
    /// One pair per distinct move, in the same order as the moves.
    pub moves: Vec<ImagePair>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManualDocument {
    pub html: String,
    pub json: Value,
}

fn short_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
}

fn ending_id(e: &EndingExample) -> String {
    let players: Vec<String> = e.key.players.iter().map(ToString::to_string).collect();
    let end = e.key.end.map_or_else(|| "-".to_string(), |n| n.0.to_string());
    short_hash(&format!("{:?}|{}|{end}", e.key.outcome, players.join(",")))
}

/// Render the setup, ending and move images.
pub fn render_assets(
    spec: &GameSpec,
    traces: &[PlayoutTrace],
    endings: &[EndingExample],
    moves: &[DistinctMove],
    mode: HighlightMode,
) -> Result<RenderedAssets, ManualError> {
    let by_seed: BTreeMap<u64, &PlayoutTrace> = traces.iter().map(|t| (t.seed, t)).collect();
    let trace = |seed: u64| by_seed.get(&seed).copied().ok_or(ManualError::MissingTrace(seed));
    let mut assets = vec![Asset {
        name: SETUP_ASSET.into(),
        svg: render_board(spec, &initial_state(spec)?, &HighlightSpec::none()),
    }];
    let mut pair = |stem: String, (before, after): (String, String)| {
        let names = ImagePair { before: format!("{stem}-before.svg"), after: format!("{stem}-after.svg") };
        assets.push(Asset { name: names.before.clone(), svg: before });
        assets.push(Asset { name: names.after.clone(), svg: after });
        names
    };

    let mut ending_pairs = Vec::new();
    for e in endings {
        let svgs = render_ending_pair(spec, trace(e.seed)?)?;
        ending_pairs.push(pair(format!("ending-{}", ending_id(e)), svgs));
    }
    let mut move_pairs = Vec::new();
    for m in moves {
        let t = trace(m.exemplar.seed)?;
        let state = replay(spec, &t.moves[..m.exemplar.index])?;
        let svgs = render_move_pair(spec, &state, &t.moves[m.exemplar.index], mode)?;
        move_pairs.push(pair(format!("move-{}", short_hash(&m.signature.canonical())), svgs));
    }
    Ok(RenderedAssets { assets, setup: SETUP_ASSET.into(), endings: ending_pairs, moves: move_pairs })
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const STYLE: &str = "body{font-family:sans-serif;max-width:60em;margin:auto;padding:1em}\
pre{white-space:pre-wrap}\
figure{display:inline-block;margin:0.5em}\
.level{margin-left:1em}\
.collapsed>.title{display:none}\
.collapsed{margin-left:0}";

struct Leaf<'a> {
    mv: &'a DistinctMove,
    images: &'a ImagePair,
}

/// Moves grouped by mover, then piece, then origin rule.
type Tree<'a> = BTreeMap<Option<String>, BTreeMap<Option<String>, BTreeMap<usize, Vec<Leaf<'a>>>>>;

fn mover_title(spec: &GameSpec, mover: &Option<String>) -> String {
    match mover {
        None => "All players".into(),
        Some(p) => {
            let ctx = TranslationContext::new(spec, crate::english::Section::Header);
            let index: usize = p[1..].parse().unwrap_or(1);
            let name = ctx.players.get(index - 1).cloned().unwrap_or_else(|| p.clone());
            crate::english::sentence(&name).trim_end_matches('.').to_string()
        }
    }
}

fn images_html(out: &mut String, pair: &ImagePair, alt: &str) {
    for (src, when) in [(&pair.before, "before"), (&pair.after, "after")] {
        let _ = write!(
            out,
            "<figure><img src=\"svg/{}\" alt=\"{} ({when})\"/><figcaption>{}</figcaption></figure>",
            escape(src),
            escape(alt),
            if when == "before" { "Before" } else { "After" }
        );
    }
}

fn level_class(kind: &str, siblings: usize) -> String {
    if siblings == 1 {
        format!("level {kind} collapsed")
    } else {
        format!("level {kind}")
    }
}

/// Build the HTML page and its JSON twin.
pub fn build_manual(
    spec: &GameSpec,
    translation: &str,
    strategy: Option<&[String]>,
    endings: &[EndingExample],
    moves: &[DistinctMove],
    rendered: &RenderedAssets,
) -> Result<ManualDocument, ManualError> {
    let known: Vec<&str> = rendered.assets.iter().map(|a| a.name.as_str()).collect();
    let check = |name: &str| {
        if known.contains(&name) {
            Ok(())
        } else {
            Err(ManualError::MissingAsset(name.to_string()))
        }
    };
    check(&rendered.setup)?;
    for pair in rendered.endings.iter().chain(&rendered.moves) {
        check(&pair.before)?;
        check(&pair.after)?;
    }
    if rendered.endings.len() != endings.len() {
        return Err(ManualError::MissingAsset(format!("ending {}", rendered.endings.len())));
    }
    if rendered.moves.len() != moves.len() {
        return Err(ManualError::MissingAsset(format!("move {}", rendered.moves.len())));
    }

    let title = escape(&spec.name);
    let mut html = String::new();
    let _ = write!(
        html,
        "<!DOCTYPE html>\n<html xmlns=\"http://www.w3.org/1999/xhtml\" lang=\"en\">\n<head>\n<meta charset=\"utf-8\"/>\n\
         <title>{title}</title>\n<style>{STYLE}</style>\n</head>\n<body>\n<h1>{title}</h1>\n"
    );

    // Rules
    let rule_lines: Vec<&str> = translation.lines().collect();
    let _ = write!(
        html,
        "<section id=\"rules\">\n<h2>Rules</h2>\n<pre>{}</pre>\n</section>\n",
        escape(translation.trim_end())
    );

    // Heuristics
    html.push_str("<section id=\"heuristics\">\n<h2>Heuristics</h2>\n");
    let strategy_lines: Vec<String> = match strategy {
        Some(lines) if !lines.is_empty() => {
            html.push_str("<ul>\n");
            for l in lines {
                let _ = writeln!(html, "<li>{}</li>", escape(l));
            }
            html.push_str("</ul>\n");
            lines.to_vec()
        }
        _ => {
            let _ = writeln!(html, "<p>{NO_STRATEGY}</p>");
            vec![NO_STRATEGY.to_string()]
        }
    };
    html.push_str("</section>\n");

    // Setup
    let _ = write!(
        html,
        "<section id=\"setup\">\n<h2>Setup</h2>\n<figure><img src=\"svg/{}\" alt=\"Initial position\"/></figure>\n</section>\n",
        escape(&rendered.setup)
    );

    // Endings
    html.push_str("<section id=\"endings\">\n<h2>Endings</h2>\n");
    let mut ending_json = Vec::new();
    for (e, pair) in endings.iter().zip(&rendered.endings) {
        html.push_str("<div class=\"ending\">\n");
        let _ = writeln!(html, "<p>{}</p>", escape(&e.text));
        images_html(&mut html, pair, &e.text);
        html.push_str("\n</div>\n");
        ending_json.push(json!({
            "text": e.text,
            "outcome": format!("{:?}", e.key.outcome),
            "players": e.key.players.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "end": e.key.end.map(|n| n.0),
            "seed": e.seed,
            "winning_sites": e.winning_sites.as_ref().map(|s| s.iter().map(|&x| spec.board.label(x).to_string()).collect::<Vec<_>>()),
            "before": format!("svg/{}", pair.before),
            "after": format!("svg/{}", pair.after),
        }));
    }
    html.push_str("</section>\n");

    // Moves
    let mut tree: Tree = BTreeMap::new();
    for (mv, images) in moves.iter().zip(&rendered.moves) {
        tree.entry(mv.signature.mover.map(|p| p.to_string()))
            .or_default()
            .entry(mv.signature.piece.clone())
            .or_default()
            .entry(mv.signature.origin.0)
            .or_default()
            .push(Leaf { mv, images });
    }
    html.push_str("<section id=\"moves\">\n<h2>Moves</h2>\n");
    let mut movers_json = Vec::new();
    for (mover, pieces) in &tree {
        let _ = writeln!(html, "<div class=\"{}\">", level_class("mover", tree.len()));
        let _ = writeln!(html, "<h3 class=\"title\">{}</h3>", escape(&mover_title(spec, mover)));
        let mut pieces_json = Vec::new();
        for (piece, rules) in pieces {
            let _ = writeln!(html, "<div class=\"{}\">", level_class("piece", pieces.len()));
            let _ = writeln!(html, "<h4 class=\"title\">{}</h4>", escape(piece.as_deref().unwrap_or("No piece")));
            let mut rules_json = Vec::new();
            for (origin, leaves) in rules {
                let _ = writeln!(html, "<div class=\"{}\">", level_class("rule", rules.len()));
                let _ = writeln!(html, "<h5 class=\"title\">{}</h5>", escape(&leaves[0].mv.text));
                let mut leaves_json = Vec::new();
                for leaf in leaves {
                    let types: Vec<&str> = leaf.mv.signature.action_types.iter().map(|t| t.name()).collect();
                    let _ = writeln!(html, "<div class=\"{}\">", level_class("actions", leaves.len()));
                    let _ = writeln!(html, "<h6 class=\"title\">{}</h6>", types.join(", "));
                    images_html(&mut html, leaf.images, &leaf.mv.text);
                    html.push_str("\n</div>\n");
                    leaves_json.push(json!({
                        "action_types": types,
                        "signature": leaf.mv.signature.canonical(),
                        "exemplar": { "seed": leaf.mv.exemplar.seed, "index": leaf.mv.exemplar.index },
                        "before": format!("svg/{}", leaf.images.before),
                        "after": format!("svg/{}", leaf.images.after),
                    }));
                }
                html.push_str("</div>\n");
                rules_json.push(json!({ "origin": origin, "text": leaves[0].mv.text, "actions": leaves_json }));
            }
            html.push_str("</div>\n");
            pieces_json.push(json!({ "piece": piece, "rules": rules_json }));
        }
        html.push_str("</div>\n");
        movers_json.push(json!({ "mover": mover, "pieces": pieces_json }));
    }
    html.push_str("</section>\n</body>\n</html>\n");

    let json = json!({
        "game": spec.name,
        "sections": [
            { "title": SECTIONS[0], "lines": rule_lines },
            { "title": SECTIONS[1], "lines": strategy_lines },
            { "title": SECTIONS[2], "image": format!("svg/{}", rendered.setup) },
            { "title": SECTIONS[3], "endings": ending_json },
            { "title": SECTIONS[4], "movers": movers_json },
        ],
        "assets": rendered.assets.iter().map(|a| format!("svg/{}", a.name)).collect::<Vec<_>>(),
    });
    Ok(ManualDocument { html, json })
}

/// Leaf entries of the Moves section of a `manual.json` value.
pub fn json_leaves(manual: &Value) -> Vec<&Value> {
    let mut out = Vec::new();
    let movers = manual["sections"][4]["movers"].as_array().map(Vec::as_slice).unwrap_or_default();
    for mover in movers {
        for piece in mover["pieces"].as_array().into_iter().flatten() {
            for rule in piece["rules"].as_array().into_iter().flatten() {
                out.extend(rule["actions"].as_array().into_iter().flatten());
            }
        }
    }
    out
}
