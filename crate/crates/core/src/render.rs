//! SVG rendering of board states with move and ending highlights.
//!
//! Square boards use 48-unit cells. Hex diamonds use pointy-top hexagons of
//! circumradius 28 laid out as a rhombus. Every canvas has 16 units of padding.
//! Elements carry classes so the output can be inspected structurally:
//! `cell`, `piece`, `highlight arrow red` and `highlight dot red|green`.

use std::fmt::Write;

use crate::board::{SiteId, Tiling};
use crate::compiler::{GameSpec, Owner};
use crate::engine::{apply_move, replay, EngineError, GameState, Move, PlayoutTrace};
use crate::taxonomy::similar_legal_moves;

const CELL: f64 = 48.0;
const HEX_R: f64 = 28.0;
const PAD: f64 = 16.0;
const GLYPH: f64 = 16.0;
const DOT: f64 = 7.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Colour {
    Red,
    Green,
}

impl Colour {
    fn name(self) -> &'static str {
        match self {
            Colour::Red => "red",
            Colour::Green => "green",
        }
    }

    fn rgb(self) -> &'static str {
        match self {
            Colour::Red => "#d62728",
            Colour::Green => "#2ca02c",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HighlightMode {
    SelectedOnly,
    AllSimilar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighlightSpec {
    /// Red arrows from one site to another.
    pub arrows: Vec<(SiteId, SiteId)>,
    pub dots: Vec<(SiteId, Colour)>,
    pub mode: HighlightMode,
}

impl HighlightSpec {
    pub fn none() -> Self {
        HighlightSpec { arrows: Vec::new(), dots: Vec::new(), mode: HighlightMode::SelectedOnly }
    }

    /// A red arrow for each displacement, a red dot for each in-place move.
    pub fn for_moves(moves: &[Move], mode: HighlightMode) -> Self {
        let mut h = HighlightSpec { mode, ..HighlightSpec::none() };
        for mv in moves {
            h.add_move(mv);
        }
        h
    }

    fn add_move(&mut self, mv: &Move) {
        match (mv.from, mv.to) {
            (Some(f), Some(t)) if f != t => self.arrows.push((f, t)),
            (_, Some(t)) | (Some(t), None) => self.dots.push((t, Colour::Red)),
            (None, None) => {}
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len() + self.dots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

struct Layout {
    width: f64,
    height: f64,
    tiling: Tiling,
    rows: usize,
}

impl Layout {
    fn new(spec: &GameSpec) -> Layout {
        let b = &spec.board;
        let tiling = b.tiling();
        let (width, height) = match tiling {
            Tiling::Square => (b.cols as f64 * CELL + 2.0 * PAD, b.rows as f64 * CELL + 2.0 * PAD),
            Tiling::Hexagonal => {
                let w = 3f64.sqrt() * HEX_R;
                (
                    w * (b.cols as f64 + (b.rows as f64 - 1.0) / 2.0) + 2.0 * PAD,
                    2.0 * HEX_R + (b.rows as f64 - 1.0) * 1.5 * HEX_R + 2.0 * PAD,
                )
            }
        };
        Layout { width, height, tiling, rows: b.rows }
    }

    fn centre(&self, spec: &GameSpec, site: SiteId) -> (f64, f64) {
        let s = spec.board.site(site);
        let flipped = (self.rows - 1 - s.row) as f64;
        match self.tiling {
            Tiling::Square => (PAD + (s.col as f64 + 0.5) * CELL, PAD + (flipped + 0.5) * CELL),
            Tiling::Hexagonal => {
                let w = 3f64.sqrt() * HEX_R;
                (PAD + w * (s.col as f64 + s.row as f64 / 2.0) + w / 2.0, PAD + HEX_R + flipped * 1.5 * HEX_R)
            }
        }
    }
}

fn points(pts: &[(f64, f64)]) -> String {
    pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect::<Vec<_>>().join(" ")
}

fn colours(owner: Owner) -> (&'static str, &'static str) {
    match owner {
        Owner::Player(p) if p.0 % 2 == 1 => ("#ffffff", "#000000"),
        Owner::Player(_) => ("#000000", "#000000"),
        Owner::Neutral => ("#8c8c8c", "#555555"),
    }
}

fn glyph(out: &mut String, base: &str, name: &str, owner: Owner, (x, y): (f64, f64)) {
    let (fill, stroke) = colours(owner);
    let style = format!("fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"2\"");
    let _ = write!(out, "<g class=\"piece\" data-piece=\"{name}\">");
    let s = GLYPH;
    match base {
        "Disc" | "Marker" => {
            let _ = write!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{s:.2}\" {style}/>");
        }
        "Cross" => {
            let w = s * 0.3;
            let plus = [
                (-w, -s),
                (w, -s),
                (w, -w),
                (s, -w),
                (s, w),
                (w, w),
                (w, s),
                (-w, s),
                (-w, w),
                (-s, w),
                (-s, -w),
                (-w, -w),
            ];
            let c = std::f64::consts::FRAC_1_SQRT_2;
            let pts: Vec<(f64, f64)> = plus.iter().map(|&(px, py)| (x + c * (px - py), y + c * (px + py))).collect();
            let _ = write!(out, "<polygon points=\"{}\" {style}/>", points(&pts));
        }
        "Queen" => {
            let _ = write!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{s:.2}\" {style}/>");
            let crown = [
                (x - 0.6 * s, y + 0.35 * s),
                (x - 0.6 * s, y - 0.4 * s),
                (x - 0.3 * s, y - 0.05 * s),
                (x, y - 0.55 * s),
                (x + 0.3 * s, y - 0.05 * s),
                (x + 0.6 * s, y - 0.4 * s),
                (x + 0.6 * s, y + 0.35 * s),
            ];
            let inverse = if fill == "#ffffff" { "#000000" } else { "#ffffff" };
            let _ = write!(out, "<polygon points=\"{}\" fill=\"{inverse}\" stroke=\"none\"/>", points(&crown));
        }
        "Dot" => {
            let _ = write!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{:.2}\" fill=\"#8c8c8c\" stroke=\"#555555\" stroke-width=\"1\"/>", s * 0.5);
        }
        "Pawn" => {
            // Points the way the owner moves.
            let d = if matches!(owner, Owner::Player(p) if p.0 % 2 == 0) { -1.0 } else { 1.0 };
            let pts = [(x, y - d * s), (x + 0.87 * s, y + d * 0.5 * s), (x - 0.87 * s, y + d * 0.5 * s)];
            let _ = write!(out, "<polygon points=\"{}\" {style}/>", points(&pts));
        }
        _ => {
            let text = if fill == "#ffffff" { "#000000" } else { "#ffffff" };
            let initial: String = base.chars().take(1).collect();
            let _ = write!(
                out,
                "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{s:.2}\" {style}/>\
                 <text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"{:.2}\" text-anchor=\"middle\" fill=\"{text}\">{initial}</text>",
                y + s * 0.4,
                s * 1.1
            );
        }
    }
    out.push_str("</g>");
}

fn arrow(out: &mut String, from: (f64, f64), to: (f64, f64)) {
    let (dx, dy) = (to.0 - from.0, to.1 - from.1);
    let len = (dx * dx + dy * dy).sqrt().max(1e-9);
    let (ux, uy) = (dx / len, dy / len);
    let head = 12.0;
    let base = (to.0 - ux * head, to.1 - uy * head);
    let (px, py) = (-uy * head * 0.5, ux * head * 0.5);
    let colour = Colour::Red.rgb();
    let _ = write!(
        out,
        "<g class=\"highlight arrow red\"><line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{colour}\" stroke-width=\"4\"/>\
         <polygon points=\"{}\" fill=\"{colour}\"/></g>",
        from.0,
        from.1,
        base.0,
        base.1,
        points(&[to, (base.0 + px, base.1 + py), (base.0 - px, base.1 - py)])
    );
}

/// Render `state` as a standalone SVG document.
pub fn render_board(spec: &GameSpec, state: &GameState, highlights: &HighlightSpec) -> String {
    let layout = Layout::new(spec);
    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\">",
        w = layout.width,
        h = layout.height
    );
    let _ = writeln!(out, "<title>{}</title>", escape(&spec.name));
    out.push_str("<g class=\"board\">\n");
    for site in spec.board.site_ids() {
        let (cx, cy) = layout.centre(spec, site);
        let label = spec.board.label(site);
        match layout.tiling {
            Tiling::Square => {
                let h = CELL / 2.0;
                let _ = writeln!(
                    out,
                    "<rect class=\"cell\" data-site=\"{label}\" x=\"{:.2}\" y=\"{:.2}\" width=\"{CELL:.2}\" height=\"{CELL:.2}\" fill=\"#eed9b3\" stroke=\"#555555\"/>",
                    cx - h,
                    cy - h
                );
            }
            Tiling::Hexagonal => {
                let pts: Vec<(f64, f64)> = (0..6)
                    .map(|k| {
                        let a = (30.0 + 60.0 * k as f64).to_radians();
                        (cx + HEX_R * a.cos(), cy + HEX_R * a.sin())
                    })
                    .collect();
                let _ = writeln!(
                    out,
                    "<polygon class=\"cell\" data-site=\"{label}\" points=\"{}\" fill=\"#e9e4d4\" stroke=\"#555555\"/>",
                    points(&pts)
                );
            }
        }
    }
    out.push_str("</g>\n<g class=\"pieces\">\n");
    for site in spec.board.site_ids() {
        if let Some(p) = state.contents[site.0] {
            let piece = spec.piece(p);
            glyph(&mut out, &piece.base, &piece.name, piece.owner, layout.centre(spec, site));
            out.push('\n');
        }
    }
    out.push_str("</g>\n<g class=\"highlights\">\n");
    for &(from, to) in &highlights.arrows {
        arrow(&mut out, layout.centre(spec, from), layout.centre(spec, to));
        out.push('\n');
    }
    for &(site, colour) in &highlights.dots {
        let (cx, cy) = layout.centre(spec, site);
        let _ = writeln!(
            out,
            "<circle class=\"highlight dot {}\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{DOT:.2}\" fill=\"{}\" fill-opacity=\"0.85\"/>",
            colour.name(),
            colour.rgb()
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Before and after images for `mv` played in `before`.
pub fn render_move_pair(
    spec: &GameSpec,
    before: &GameState,
    mv: &Move,
    mode: HighlightMode,
) -> Result<(String, String), EngineError> {
    let after = apply_move(before, mv, spec)?;
    let moves = match mode {
        HighlightMode::SelectedOnly => vec![mv.clone()],
        HighlightMode::AllSimilar => similar_legal_moves(before, mv, spec),
    };
    let highlights = HighlightSpec::for_moves(&moves, mode);
    Ok((render_board(spec, before, &highlights), render_board(spec, &after, &HighlightSpec::none())))
}

/// Before and after images for the final move of a finished playout. The
/// after image keeps the final move's dot and marks winning sites in green.
pub fn render_ending_pair(spec: &GameSpec, trace: &PlayoutTrace) -> Result<(String, String), EngineError> {
    let (last, prefix) = trace.moves.split_last().ok_or(EngineError::NoLegalMoves)?;
    let before = replay(spec, prefix)?;
    let after = apply_move(&before, last, spec)?;
    let selected = HighlightSpec::for_moves(std::slice::from_ref(last), HighlightMode::SelectedOnly);
    let mut end = HighlightSpec { arrows: Vec::new(), ..selected.clone() };
    if let Some(end_match) = after.terminal.as_deref() {
        for &s in end_match.winning_sites.iter().flatten() {
            end.dots.push((s, Colour::Green));
        }
    }
    Ok((render_board(spec, &before, &selected), render_board(spec, &after, &end)))
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
