//! Recursive translation of a compiled game back into structured English.
//!
//! Every registry ludeme has a template (see [`has_template`]) that turns the
//! ludeme's arguments into a lowercase fragment, translating child ludemes
//! first. [`translate_game`] arranges fragments into the sectioned document.

use thiserror::Error;

use crate::compiler::{GameSpec, Owner, PlayerId};
use crate::registry::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("no English template for ludeme `{ludeme}` ({node})")]
    MissingTemplate { ludeme: String, node: NodeId },
    #[error("ludeme {node} has an unexpected shape: {detail}")]
    Malformed { node: NodeId, detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Section {
    Header,
    Equipment,
    PieceRules,
    Setup,
    Rules,
    Aim,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationContext {
    pub section: Section,
    /// English name of each player, index 0 for player one.
    pub players: Vec<String>,
}

impl TranslationContext {
    pub fn new(spec: &GameSpec, section: Section) -> Self {
        let players = spec.player_ids().map(|p| format!("player {}", number_word(p.0 as i64))).collect();
        TranslationContext { section, players }
    }

    pub fn in_section(&self, section: Section) -> Self {
        TranslationContext { section, ..self.clone() }
    }

    pub fn player(&self, p: PlayerId) -> &str {
        &self.players[p.index()]
    }

    fn player_ref(&self, symbol: &str) -> String {
        match symbol {
            "Mover" => "the moving player".into(),
            "Next" => "the next player".into(),
            _ => symbol[1..]
                .parse::<u8>()
                .ok()
                .and_then(|n| self.players.get(usize::from(n).wrapping_sub(1)))
                .cloned()
                .unwrap_or_else(|| symbol.to_string()),
        }
    }
}

/// Cardinal word for 0..=12, digits otherwise.
pub fn number_word(n: i64) -> String {
    const WORDS: [&str; 13] =
        ["zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve"];
    usize::try_from(n).ok().and_then(|i| WORDS.get(i)).map_or_else(|| n.to_string(), |w| w.to_string())
}

pub fn plural(word: &str) -> String {
    if ["s", "x", "z", "ch", "sh"].iter().any(|e| word.ends_with(e)) {
        format!("{word}es")
    } else {
        format!("{word}s")
    }
}

/// "A, B and C".
pub fn join_list<S: AsRef<str>>(items: &[S]) -> String {
    match items {
        [] => String::new(),
        [one] => one.as_ref().to_string(),
        [init @ .., last] => {
            let head: Vec<&str> = init.iter().map(AsRef::as_ref).collect();
            format!("{} and {}", head.join(", "), last.as_ref())
        }
    }
}

/// Capitalise the first letter and end with a full stop.
pub fn sentence(fragment: &str) -> String {
    let mut chars = fragment.chars();
    let mut out: String = match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    };
    if !out.ends_with('.') {
        out.push('.');
    }
    out
}

type Template = fn(&Translator, NodeId, &TranslationContext) -> Result<String, TranslateError>;

/// Template for a registry descriptor name.
fn template(name: &str) -> Option<Template> {
    let t: Template = match name {
        "game" => |t, id, c| t.game(id, c),
        "players" => |t, id, c| t.players(id, c),
        "equipment" => |t, id, c| t.equipment(id, c),
        "board" => |t, id, c| t.board(id, c),
        "square" | "rectangle" | "hex Diamond" => |t, id, c| t.shape(id, c),
        "piece" => |t, id, c| t.piece(id, c),
        "regions" => |t, id, c| t.regions(id, c),
        "sites Empty" | "sites NotFriend" | "sites Side" | "sites Row" => |t, id, c| t.sites(id, c),
        "rules" => |t, id, c| t.rules(id, c),
        "meta" => |t, id, c| t.meta(id, c),
        "swap" => |t, id, c| t.swap(id, c),
        "start" => |t, id, c| t.start(id, c),
        "place" => |t, id, c| t.place(id, c),
        "play" => |t, id, c| t.play(id, c),
        "end" => |t, id, c| t.end(id, c),
        "move Add" => |t, id, c| t.add(id, c),
        "move Step" | "move Slide" => |t, id, c| t.step_slide(id, c),
        "move Shoot" => |t, id, c| t.shoot(id, c),
        "to" | "from" => |t, id, c| t.to_from(id, c),
        "directions" => |t, id, c| t.directions_node(id, c),
        "then" => |t, id, c| t.then(id, c),
        "moveAgain" => |t, id, c| t.move_again(id, c),
        "forEach Piece" => |t, id, c| t.for_each_piece(id, c),
        "if" => |t, id, c| t.if_(id, c),
        "or" | "and" => |t, id, c| t.or_and(id, c),
        "is Line" | "is Connected" | "is Reached" | "is Even" | "no Moves" => |t, id, c| t.condition(id, c),
        "count Moves" => |t, id, c| t.count_moves(id, c),
        "result" => |t, id, c| t.result(id, c),
        _ => return None,
    };
    Some(t)
}

pub fn has_template(name: &str) -> bool {
    template(name).is_some()
}

/// Translate one ludeme to a lowercase fragment.
pub fn translate_node(id: NodeId, ctx: &TranslationContext, spec: &GameSpec) -> Result<String, TranslateError> {
    Translator { spec }.node(id, ctx)
}

/// Translate the whole game into the sectioned document.
pub fn translate_game(spec: &GameSpec) -> Result<String, TranslateError> {
    let t = Translator { spec };
    let ctx = TranslationContext::new(spec, Section::Header);
    t.game(spec.ids.game, &ctx)
}

const INDENT: &str = "     ";
const REGION_INDENT: &str = "    ";

struct Translator<'a> {
    spec: &'a GameSpec,
}

impl Translator<'_> {
    fn node(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        let name = self.spec.table.descriptor(id).ok_or_else(|| self.malformed(id, "not a ludeme"))?;
        let t = template(name).ok_or_else(|| TranslateError::MissingTemplate { ludeme: name.to_string(), node: id })?;
        t(self, id, ctx)
    }

    fn malformed(&self, id: NodeId, detail: &str) -> TranslateError {
        TranslateError::Malformed { node: id, detail: detail.to_string() }
    }

    fn slot(&self, id: NodeId, slot: &str) -> Result<NodeId, TranslateError> {
        self.spec.table.slot(id, slot).ok_or_else(|| self.malformed(id, &format!("missing `{slot}`")))
    }

    fn number(&self, id: NodeId, slot: &str) -> Result<i64, TranslateError> {
        let arg = self.slot(id, slot)?;
        self.spec.table.node(arg).as_number().ok_or_else(|| self.malformed(arg, "expected a number"))
    }

    fn symbol(&self, id: NodeId, slot: &str) -> Result<&str, TranslateError> {
        let arg = self.slot(id, slot)?;
        self.spec.table.node(arg).as_symbol().ok_or_else(|| self.malformed(arg, "expected a symbol"))
    }

    fn text(&self, id: NodeId, slot: &str) -> Result<&str, TranslateError> {
        let arg = self.slot(id, slot)?;
        self.spec.table.node(arg).as_text().ok_or_else(|| self.malformed(arg, "expected a string"))
    }

    fn is(&self, id: NodeId, name: &str) -> bool {
        self.spec.table.descriptor(id) == Some(name)
    }

    /// Translate every ludeme bound to `slot`, looking through collections.
    fn each(&self, id: NodeId, slot: &str, ctx: &TranslationContext) -> Result<Vec<String>, TranslateError> {
        let mut out = Vec::new();
        for &arg in self.spec.table.slot_all(id, slot) {
            for item in self.spec.table.flatten(arg) {
                out.push(self.node(item, ctx)?);
            }
        }
        Ok(out)
    }

    fn game(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        let spec = self.spec;
        let name = self.text(id, "name")?;
        let players = self.node(self.slot(id, "players")?, ctx)?;
        let board = self.node(spec.ids.board, ctx)?;
        let mut lines = vec![format!("The game \"{name}\" is played by {players} {board}.")];

        let equipment = ctx.in_section(Section::Equipment);
        let regions = self.slot(id, "equipment").map(|e| self.spec.table.slot_all(e, "items").to_vec())?;
        let region_nodes: Vec<NodeId> =
            regions.iter().flat_map(|&c| spec.table.flatten(c)).filter(|&n| self.is(n, "regions")).collect();
        if !region_nodes.is_empty() {
            lines.push("Regions:".into());
            for r in region_nodes {
                lines.push(format!("{REGION_INDENT}{}", self.node(r, &equipment)?));
            }
        }

        lines.push(self.pieces_line());

        let piece_rules = ctx.in_section(Section::PieceRules);
        let mut rule_lines = Vec::new();
        let mut seen = Vec::new();
        for piece in &spec.pieces {
            if piece.rule.is_some() && !seen.contains(&piece.decl) {
                seen.push(piece.decl);
                rule_lines.push(format!("{INDENT}{}", sentence(&self.node(piece.decl, &piece_rules)?)));
            }
        }
        if !rule_lines.is_empty() {
            lines.push("Rules for Pieces:".into());
            lines.extend(rule_lines);
        }

        lines.push("Players take turns moving.".into());

        if let Some(start) = spec.ids.start {
            lines.push("Setup:".into());
            for item in self.place_lines(start, &ctx.in_section(Section::Setup))? {
                lines.push(format!("{INDENT}{}", sentence(&item)));
            }
        }

        lines.push("Rules:".into());
        lines.push(format!("{INDENT}{}", sentence(&self.node(spec.ids.play, &ctx.in_section(Section::Rules))?)));

        if let Some(end) = spec.ids.end {
            lines.push("Aim:".into());
            for item in self.each(end, "rules", &ctx.in_section(Section::Aim))? {
                lines.push(format!("{INDENT}{}", sentence(&item)));
            }
        }
        let mut text = lines.join("\n");
        text.push('\n');
        Ok(text)
    }

    fn pieces_line(&self) -> String {
        let spec = self.spec;
        let bases = |pred: &dyn Fn(&crate::compiler::PieceSpec) -> bool| {
            let mut out: Vec<String> = Vec::new();
            for p in spec.pieces.iter().filter(|p| pred(p)) {
                let word = plural(&p.base);
                if !out.contains(&word) {
                    out.push(word);
                }
            }
            out
        };
        let mut parts = Vec::new();
        let shared = bases(&|p| p.each);
        if !shared.is_empty() {
            parts.push(format!("All players play with {}.", join_list(&shared)));
        }
        let ctx = TranslationContext::new(spec, Section::Equipment);
        for player in spec.player_ids() {
            let own = bases(&|p| !p.each && p.owner == Owner::Player(player));
            if !own.is_empty() {
                parts.push(sentence(&format!("{} plays with {}", ctx.player(player), join_list(&own))));
            }
        }
        let neutral = bases(&|p| p.owner == Owner::Neutral);
        if !neutral.is_empty() {
            parts.push(format!("The following pieces are neutral: {}.", join_list(&neutral)));
        }
        parts.join(" ")
    }

    fn place_lines(&self, start: NodeId, ctx: &TranslationContext) -> Result<Vec<String>, TranslateError> {
        self.each(start, "placements", ctx)
    }

    fn players(&self, id: NodeId, _: &TranslationContext) -> Result<String, TranslateError> {
        let n = self.number(id, "count")?;
        Ok(format!("{} {}", number_word(n), if n == 1 { "player" } else { "players" }))
    }

    fn equipment(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        Ok(join_list(&self.each(id, "items", &ctx.in_section(Section::Equipment))?))
    }

    fn board(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        Ok(format!("on a {}", self.node(self.slot(id, "shape")?, ctx)?))
    }

    fn shape(&self, id: NodeId, _: &TranslationContext) -> Result<String, TranslateError> {
        Ok(match self.spec.table.descriptor(id) {
            Some("square") => {
                let n = self.number(id, "size")?;
                format!("{n}x{n} rectangle board with square tiling")
            }
            Some("rectangle") => {
                let (r, c) = (self.number(id, "rows")?, self.number(id, "columns")?);
                format!("{r}x{c} rectangle board with square tiling")
            }
            _ => {
                let n = self.number(id, "size")?;
                format!("{n}x{n} diamond board with hexagonal tiling")
            }
        })
    }

    fn piece(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        let name = self.text(id, "name")?;
        match ctx.section {
            Section::PieceRules => {
                let rule = self.slot(id, "rule")?;
                Ok(format!("{} {}", plural(name), self.node(rule, ctx)?))
            }
            Section::Equipment | Section::Header => Ok(plural(name)),
            _ => Ok(format!("the piece {name}")),
        }
    }

    fn regions(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        let owner = self.symbol(id, "owner")?;
        let name = match self.spec.table.slot(id, "name") {
            Some(n) => self.spec.table.node(n).as_text().unwrap_or_default().to_string(),
            None => format!("Region{owner}"),
        };
        let parts: Vec<String> =
            self.each(id, "sites", ctx)?.into_iter().map(|sites| format!("{name}: {sites} for {owner}")).collect();
        Ok(join_list(&parts))
    }

    fn sites(&self, id: NodeId, _: &TranslationContext) -> Result<String, TranslateError> {
        Ok(match self.spec.table.descriptor(id) {
            Some("sites Empty") => "the set of empty cells".into(),
            Some("sites NotFriend") => "the set of cells not occupied by your pieces".into(),
            Some("sites Side") => format!("the {} side", self.symbol(id, "side")?),
            _ => format!("row {}", self.number(id, "row")?),
        })
    }

    fn rules(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        let mut parts = Vec::new();
        for slot in ["meta", "start", "play", "end"] {
            if let Some(n) = self.spec.table.slot(id, slot) {
                parts.push(self.node(n, ctx)?);
            }
        }
        Ok(parts.join("; "))
    }

    fn meta(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        Ok(join_list(&self.each(id, "rules", ctx)?))
    }

    fn swap(&self, _: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        let second = ctx.players.get(1).map_or("the second player", String::as_str);
        Ok(format!("{second} may swap sides after the first move"))
    }

    fn start(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        Ok(self.place_lines(id, ctx)?.join("; "))
    }

    fn place(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        let name = self.text(id, "piece")?;
        let piece = self
            .spec
            .find_piece(name)
            .map(|p| self.spec.piece(p))
            .ok_or_else(|| self.malformed(id, "unknown piece"))?;
        let owner = match piece.owner {
            Owner::Player(p) => format!(" for {}", ctx.player(p)),
            Owner::Neutral => String::new(),
        };
        let mut sites = Vec::new();
        for &arg in self.spec.table.slot_all(id, "sites") {
            for item in self.spec.table.flatten(arg) {
                match self.spec.table.node(item).as_text() {
                    Some(label) => sites.push(label.to_string()),
                    None => sites.push(self.node(item, ctx)?),
                }
            }
        }
        let noun = if sites.len() == 1 { "site" } else { "sites" };
        Ok(format!("place a {}{owner} on {noun}: {}", piece.base, join_list(&sites)))
    }

    fn play(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        self.node(self.slot(id, "rule")?, ctx)
    }

    fn end(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        Ok(self.each(id, "rules", ctx)?.join("; "))
    }

    fn then_suffix(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        match self.spec.table.slot(id, "then") {
            Some(t) => Ok(format!(" {}", self.node(t, ctx)?)),
            None => Ok(String::new()),
        }
    }

    fn add(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        let what = if ctx.section == Section::PieceRules { "this piece" } else { "one of your pieces" };
        let to = self.node(self.slot(id, "to")?, ctx)?;
        Ok(format!("add {what} {to}{}", self.then_suffix(id, ctx)?))
    }

    fn direction_words(&self, id: NodeId) -> Result<String, TranslateError> {
        let table = &self.spec.table;
        let Some(arg) = table.slot(id, "directions") else {
            return Ok("in the adjacent direction".into());
        };
        let mut symbols = Vec::new();
        let items = if self.is(arg, "directions") {
            table.slot_all(arg, "directions").iter().flat_map(|&a| table.flatten(a)).collect()
        } else {
            vec![arg]
        };
        for item in items {
            let s = table.node(item).as_symbol().ok_or_else(|| self.malformed(item, "expected a direction"))?;
            symbols.push(direction_word(s));
        }
        let noun = if symbols.len() == 1 { "direction" } else { "directions" };
        Ok(format!("in the {} {noun}", join_or(&symbols)))
    }

    fn step_slide(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        let slide = self.is(id, "move Slide");
        let verb = if slide { "slide" } else { "step" };
        let from = match self.spec.table.slot(id, "from") {
            Some(f) => self.node(f, ctx)?,
            None => "from the location of the piece".into(),
        };
        let dirs = self.direction_words(id)?;
        let to = match self.spec.table.slot(id, "to") {
            Some(t) if slide => format!("through {}", self.node(self.slot(t, "sites")?, ctx)?),
            Some(t) => self.node(t, ctx)?,
            None => "through the set of empty cells".into(),
        };
        Ok(format!("{verb} {from} {dirs} {to}{}", self.then_suffix(id, ctx)?))
    }

    fn shoot(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        let piece = self.slot(id, "piece")?;
        let piece = self.node(piece, &ctx.in_section(Section::Rules))?;
        Ok(format!("shoot {piece}{}", self.then_suffix(id, ctx)?))
    }

    fn to_from(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        let head = if self.is(id, "to") { "to" } else { "from" };
        Ok(format!("{head} {}", self.node(self.slot(id, "sites")?, ctx)?))
    }

    fn directions_node(&self, id: NodeId, _: &TranslationContext) -> Result<String, TranslateError> {
        let table = &self.spec.table;
        let mut words = Vec::new();
        for item in table.slot_all(id, "directions").iter().flat_map(|&a| table.flatten(a)) {
            let s = table.node(item).as_symbol().ok_or_else(|| self.malformed(item, "expected a direction"))?;
            words.push(direction_word(s));
        }
        Ok(format!("the {} directions", join_or(&words)))
    }

    fn then(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        Ok(format!("then {}", self.node(self.slot(id, "consequence")?, ctx)?))
    }

    fn move_again(&self, _: NodeId, _: &TranslationContext) -> Result<String, TranslateError> {
        Ok("move again".into())
    }

    fn for_each_piece(&self, _: NodeId, _: &TranslationContext) -> Result<String, TranslateError> {
        Ok("move one of your pieces".into())
    }

    fn if_(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        let cond = self.node(self.slot(id, "condition")?, ctx)?;
        let then = self.node(self.slot(id, "then")?, ctx)?;
        match self.spec.table.slot(id, "else") {
            Some(e) => Ok(format!("if {cond}, {then}, else {}", self.node(e, ctx)?)),
            None => Ok(format!("if {cond}, {then}")),
        }
    }

    fn or_and(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        let is_or = self.is(id, "or");
        let slot = if is_or { "branches" } else { "conditions" };
        let mut parts = Vec::new();
        for &item in self.spec.table.slot_all(id, slot) {
            let text = self.node(item, ctx)?;
            if self.is(item, "or") || self.is(item, "and") {
                parts.push(format!("({text})"));
            } else {
                parts.push(text);
            }
        }
        let moves =
            self.spec.table.slot_all(id, slot).iter().any(|&i| {
                self.spec.table.descriptor(i).is_some_and(|d| d.starts_with("move ") || d == "forEach Piece")
            });
        Ok(match (is_or, moves) {
            (true, true) => format!("either {}", parts.join(", or ")),
            (true, false) => parts.join(" or "),
            (false, _) => join_list(&parts),
        })
    }

    fn condition(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        Ok(match self.spec.table.descriptor(id) {
            Some("is Line") => {
                let n = self.number(id, "length")?;
                if ctx.section == Section::Aim {
                    format!("a player places {n} of their pieces in an adjacent direction line")
                } else {
                    format!("there is a line of {n} pieces in an adjacent direction")
                }
            }
            Some("is Connected") => {
                format!("the region(s) of {} are connected", ctx.player_ref(self.symbol(id, "who")?))
            }
            Some("is Reached") => {
                format!("{} has a piece in one of their regions", ctx.player_ref(self.symbol(id, "who")?))
            }
            Some("is Even") => format!("{} is even", self.node(self.slot(id, "value")?, ctx)?),
            _ => format!("{} cannot move", ctx.player_ref(self.symbol(id, "who")?)),
        })
    }

    fn count_moves(&self, _: NodeId, _: &TranslationContext) -> Result<String, TranslateError> {
        Ok("the number of moves".into())
    }

    fn result(&self, id: NodeId, ctx: &TranslationContext) -> Result<String, TranslateError> {
        let who = ctx.player_ref(self.symbol(id, "who")?);
        Ok(match self.symbol(id, "outcome")? {
            "Win" => format!("{who} wins"),
            "Loss" => format!("{who} loses"),
            _ => "the game ends in a draw".into(),
        })
    }
}

fn direction_word(symbol: &str) -> String {
    match symbol {
        "FL" => "forward-left".into(),
        "FR" => "forward-right".into(),
        "N" | "NE" | "E" | "SE" | "S" | "SW" | "W" | "NW" => symbol.into(),
        other => other.to_lowercase(),
    }
}

fn join_or(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} or {last}", init.join(", ")),
    }
}
