//! Typed compilation of a validated ludeme tree into a [`GameSpec`].
//!
//! Every rule element keeps the [`NodeId`] of the ludeme it came from, so the
//! engine can report which `(move ...)` or `(end ...)` node produced a move or
//! an ending, and the translator can render that node back to English.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::board::{BoardGraph, Dir, DirClass, Shape, SiteId};
use crate::registry::{CompileError, LudemeTable, NodeId, Registry};
use crate::sexpr::{NodeKind, RawNode};

/// 1-based player index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlayerId(pub u8);

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

impl PlayerId {
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    /// The player after this one in turn order.
    pub fn next(self, players: usize) -> PlayerId {
        PlayerId(self.0 % players as u8 + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Owner {
    Player(PlayerId),
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PieceId(pub usize);

#[derive(Debug, Clone)]
pub struct PieceSpec {
    pub id: PieceId,
    /// Name as declared, e.g. `Queen`.
    pub base: String,
    /// Owner-indexed name, e.g. `Queen1` or `Dot0`.
    pub name: String,
    pub owner: Owner,
    pub rule: Option<MoveRule>,
    /// The `(piece ...)` declaration.
    pub decl: NodeId,
    /// Declared with `Each` and expanded per player.
    pub each: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlayerRef {
    Mover,
    Next,
    Player(PlayerId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    Win,
    Loss,
    Draw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SiteSet {
    Empty,
    /// Empty or occupied by another player's piece.
    NotFriend,
    Fixed(Vec<SiteId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteSetExpr {
    pub id: NodeId,
    pub set: SiteSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirSpec {
    Absolute(Dir),
    Class(DirClass),
    Forward,
    Backward,
    ForwardLeft,
    ForwardRight,
}

#[derive(Debug, Clone)]
pub enum MoveRule {
    Add { id: NodeId, to: SiteSetExpr, again: bool },
    Step { id: NodeId, dirs: Vec<DirSpec>, from: Option<SiteSetExpr>, to: SiteSetExpr, again: bool },
    Slide { id: NodeId, dirs: Vec<DirSpec>, from: Option<SiteSetExpr>, to: Option<SiteSetExpr>, again: bool },
    Shoot { id: NodeId, piece: PieceId, again: bool },
    ForEachPiece { id: NodeId },
    If { id: NodeId, cond: Condition, then: Box<MoveRule>, otherwise: Option<Box<MoveRule>> },
    Or { id: NodeId, branches: Vec<MoveRule> },
}

impl MoveRule {
    pub fn id(&self) -> NodeId {
        match self {
            MoveRule::Add { id, .. }
            | MoveRule::Step { id, .. }
            | MoveRule::Slide { id, .. }
            | MoveRule::Shoot { id, .. }
            | MoveRule::ForEachPiece { id }
            | MoveRule::If { id, .. }
            | MoveRule::Or { id, .. } => *id,
        }
    }

    /// Ids of the `(move ...)` leaves reachable in this rule.
    pub fn move_ludemes(&self, out: &mut Vec<NodeId>) {
        match self {
            MoveRule::Add { id, .. }
            | MoveRule::Step { id, .. }
            | MoveRule::Slide { id, .. }
            | MoveRule::Shoot { id, .. } => out.push(*id),
            MoveRule::ForEachPiece { .. } => {}
            MoveRule::If { then, otherwise, .. } => {
                then.move_ludemes(out);
                if let Some(o) = otherwise {
                    o.move_ludemes(out);
                }
            }
            MoveRule::Or { branches, .. } => branches.iter().for_each(|b| b.move_ludemes(out)),
        }
    }

    /// Conditions tested while generating moves from this rule.
    pub fn conditions(&self) -> Vec<&Condition> {
        let mut out = Vec::new();
        self.collect_conditions(&mut out);
        out
    }

    fn collect_conditions<'a>(&'a self, out: &mut Vec<&'a Condition>) {
        match self {
            MoveRule::If { cond, then, otherwise, .. } => {
                out.push(cond);
                then.collect_conditions(out);
                if let Some(o) = otherwise {
                    o.collect_conditions(out);
                }
            }
            MoveRule::Or { branches, .. } => branches.iter().for_each(|b| b.collect_conditions(out)),
            _ => {}
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    MoveCount { id: NodeId },
}

#[derive(Debug, Clone)]
pub enum Condition {
    Line { id: NodeId, length: usize },
    Connected { id: NodeId, who: PlayerRef },
    Reached { id: NodeId, who: PlayerRef },
    Even { id: NodeId, value: Value },
    NoMoves { id: NodeId, who: PlayerRef },
    Or { id: NodeId, items: Vec<Condition> },
    And { id: NodeId, items: Vec<Condition> },
}

impl Condition {
    pub fn id(&self) -> NodeId {
        match self {
            Condition::Line { id, .. }
            | Condition::Connected { id, .. }
            | Condition::Reached { id, .. }
            | Condition::Even { id, .. }
            | Condition::NoMoves { id, .. }
            | Condition::Or { id, .. }
            | Condition::And { id, .. } => *id,
        }
    }

    /// True when the condition names a specific player rather than a role.
    pub fn names_player(&self) -> bool {
        match self {
            Condition::Connected { who, .. } | Condition::Reached { who, .. } | Condition::NoMoves { who, .. } => {
                matches!(who, PlayerRef::Player(_))
            }
            Condition::Or { items, .. } | Condition::And { items, .. } => items.iter().any(Condition::names_player),
            Condition::Line { .. } | Condition::Even { .. } => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResultSpec {
    pub id: NodeId,
    pub who: PlayerRef,
    pub outcome: Outcome,
}

#[derive(Debug, Clone)]
pub struct EndRule {
    /// The `(if ...)` node of this ending.
    pub id: NodeId,
    pub condition: Condition,
    pub result: ResultSpec,
}

#[derive(Debug, Clone)]
pub struct RegionSpec {
    pub id: NodeId,
    pub name: Option<String>,
    pub owner: PlayerId,
    /// One entry per `(sites ...)` set, in declaration order.
    pub sets: Vec<(NodeId, Vec<SiteId>)>,
}

#[derive(Debug, Clone)]
pub struct Placement {
    pub id: NodeId,
    pub piece: PieceId,
    pub sites: Vec<SiteId>,
}

#[derive(Debug, Clone)]
pub struct GameSpec {
    pub name: String,
    pub players: usize,
    pub board: BoardGraph,
    pub pieces: Vec<PieceSpec>,
    pub regions: Vec<RegionSpec>,
    pub swap: bool,
    pub start: Vec<Placement>,
    pub play: MoveRule,
    pub end: Vec<EndRule>,
    pub table: LudemeTable,
    pub ids: SectionIds,
}

/// Ids of the structural ludemes the translator walks.
#[derive(Debug, Clone, Default)]
pub struct SectionIds {
    pub game: NodeId,
    pub players: NodeId,
    pub board: NodeId,
    pub meta: Option<NodeId>,
    pub start: Option<NodeId>,
    pub play: NodeId,
    pub end: Option<NodeId>,
}

impl GameSpec {
    pub fn piece(&self, id: PieceId) -> &PieceSpec {
        &self.pieces[id.0]
    }

    pub fn player_ids(&self) -> impl Iterator<Item = PlayerId> {
        (1..=self.players as u8).map(PlayerId)
    }

    /// Look up a piece by indexed name (`Queen1`), or by base name when unambiguous.
    pub fn find_piece(&self, name: &str) -> Option<PieceId> {
        if let Some(p) = self.pieces.iter().find(|p| p.name == name) {
            return Some(p.id);
        }
        let mut by_base = self.pieces.iter().filter(|p| p.base == name);
        match (by_base.next(), by_base.next()) {
            (Some(p), None) => Some(p.id),
            _ => None,
        }
    }

    pub fn has_base_piece(&self, base: &str) -> bool {
        self.pieces.iter().any(|p| p.base == base)
    }

    /// Pieces owned by a player, in declaration order.
    pub fn pieces_of(&self, player: PlayerId) -> impl Iterator<Item = &PieceSpec> {
        self.pieces.iter().filter(move |p| p.owner == Owner::Player(player))
    }

    /// Every `(move ...)` ludeme reachable from the play rule or a piece rule.
    pub fn move_ludemes(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        self.play.move_ludemes(&mut out);
        for p in &self.pieces {
            if let Some(rule) = &p.rule {
                rule.move_ludemes(&mut out);
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn region_sites(&self, player: PlayerId) -> Vec<Vec<SiteId>> {
        self.regions.iter().filter(|r| r.owner == player).flat_map(|r| r.sets.iter().map(|(_, s)| s.clone())).collect()
    }
}

/// Compile a parsed `(game ...)` tree with the builtin registry.
pub fn compile(tree: &RawNode) -> Result<GameSpec, CompileError> {
    compile_with(tree, Registry::builtin())
}

pub fn compile_with(tree: &RawNode, registry: &Registry) -> Result<GameSpec, CompileError> {
    if tree.head() != Some("game") {
        return Err(CompileError::Invalid {
            message: format!("expected a top-level (game ...) form, found {}", tree.describe()),
            span: tree.span,
        });
    }
    let table = LudemeTable::build(tree, registry)?;
    Compiler::new(table).run()
}

/// Build a board from a `(board ...)` node.
pub fn build_board(node: &RawNode) -> Result<BoardGraph, CompileError> {
    let table = LudemeTable::build(node, Registry::builtin())?;
    if table.descriptor(NodeId(0)) != Some("board") {
        return Err(CompileError::UnsupportedShape { span: node.span });
    }
    board_from(&table, NodeId(0))
}

fn board_from(table: &LudemeTable, board: NodeId) -> Result<BoardGraph, CompileError> {
    let shape_id = table.slot(board, "shape").expect("board has a shape slot");
    let num = |slot: &str| -> Result<usize, CompileError> {
        let id = table.slot(shape_id, slot).expect("numeric shape slot");
        let n = table.node(id).as_number().unwrap_or(0);
        if !(1..=64).contains(&n) {
            return Err(CompileError::UnsupportedShape { span: table.node(id).span });
        }
        Ok(n as usize)
    };
    let shape = match table.descriptor(shape_id) {
        Some("square") => Shape::Square(num("size")?),
        Some("rectangle") => Shape::Rectangle { rows: num("rows")?, cols: num("columns")? },
        Some("hex Diamond") => Shape::HexDiamond(num("size")?),
        _ => return Err(CompileError::UnsupportedShape { span: table.node(shape_id).span }),
    };
    Ok(BoardGraph::new(shape))
}

struct Compiler {
    table: LudemeTable,
    players: usize,
    board: Option<BoardGraph>,
    pieces: Vec<PieceSpec>,
}

impl Compiler {
    fn new(table: LudemeTable) -> Self {
        Compiler { table, players: 0, board: None, pieces: Vec::new() }
    }

    fn span(&self, id: NodeId) -> crate::sexpr::Span {
        self.table.node(id).span
    }

    fn invalid(&self, id: NodeId, message: impl Into<String>) -> CompileError {
        CompileError::Invalid { message: message.into(), span: self.span(id) }
    }

    fn req(&self, id: NodeId, slot: &str) -> NodeId {
        self.table.slot(id, slot).unwrap_or_else(|| panic!("required slot `{slot}` bound by validation"))
    }

    fn text(&self, id: NodeId) -> String {
        self.table.node(id).as_text().unwrap_or_default().to_string()
    }

    fn symbol(&self, id: NodeId) -> &str {
        self.table.node(id).as_symbol().unwrap_or_default()
    }

    fn board(&self) -> &BoardGraph {
        self.board.as_ref().expect("board compiled before rules")
    }

    fn run(mut self) -> Result<GameSpec, CompileError> {
        let game = NodeId(0);
        let name = self.text(self.req(game, "name"));
        let players_id = self.req(game, "players");
        let count_id = self.req(players_id, "count");
        let count = self.table.node(count_id).as_number().unwrap_or(0);
        if !(1..=8).contains(&count) {
            return Err(self.invalid(count_id, "player count must be between 1 and 8"));
        }
        self.players = count as usize;

        let equipment = self.req(game, "equipment");
        let items = self.table.flatten(self.req(equipment, "items"));
        let boards: Vec<NodeId> =
            items.iter().copied().filter(|&i| self.table.descriptor(i) == Some("board")).collect();
        let board_id = match boards.as_slice() {
            [b] => *b,
            [] => return Err(self.invalid(equipment, "equipment must declare a board")),
            [_, extra, ..] => return Err(self.invalid(*extra, "only one board may be declared")),
        };
        self.board = Some(board_from(&self.table, board_id)?);

        // Declare pieces before compiling any rule so Shoot can reference them.
        let piece_decls: Vec<NodeId> =
            items.iter().copied().filter(|&i| self.table.descriptor(i) == Some("piece")).collect();
        for &decl in &piece_decls {
            self.declare_piece(decl)?;
        }
        for &decl in &piece_decls {
            if let Some(rule_id) = self.table.slot(decl, "rule") {
                let rule = self.move_rule(rule_id)?;
                for p in self.pieces.iter_mut().filter(|p| p.decl == decl) {
                    p.rule = Some(rule.clone());
                }
            }
        }
        let mut regions = Vec::new();
        for &item in items.iter().filter(|&&i| self.table.descriptor(i) == Some("regions")) {
            regions.push(self.region(item)?);
        }

        let rules = self.req(game, "rules");
        let meta = self.table.slot(rules, "meta");
        let swap = meta.is_some_and(|m| {
            self.table.flatten(self.req(m, "rules")).iter().any(|&r| self.table.descriptor(r) == Some("swap"))
        });
        let start_id = self.table.slot(rules, "start");
        let mut start = Vec::new();
        if let Some(s) = start_id {
            for place in self.table.flatten(self.req(s, "placements")) {
                start.push(self.placement(place)?);
            }
        }
        let play_id = self.req(rules, "play");
        let play = self.move_rule(self.req(play_id, "rule"))?;
        let end_id = self.table.slot(rules, "end");
        let mut end = Vec::new();
        if let Some(e) = end_id {
            for rule in self.table.flatten(self.req(e, "rules")) {
                end.push(self.end_rule(rule)?);
            }
        }

        let ids = SectionIds {
            game,
            players: players_id,
            board: board_id,
            meta,
            start: start_id,
            play: play_id,
            end: end_id,
        };
        Ok(GameSpec {
            name,
            players: self.players,
            board: self.board.take().expect("board"),
            pieces: self.pieces,
            regions,
            swap,
            start,
            play,
            end,
            table: self.table,
            ids,
        })
    }

    fn player(&self, id: NodeId) -> Result<PlayerRef, CompileError> {
        let sym = self.symbol(id);
        match sym {
            "Mover" => Ok(PlayerRef::Mover),
            "Next" => Ok(PlayerRef::Next),
            _ => {
                let n: u8 = sym.trim_start_matches('P').parse().unwrap_or(0);
                if n == 0 || n as usize > self.players {
                    return Err(CompileError::PlayerOutOfRange {
                        player: sym.to_string(),
                        count: self.players,
                        span: self.span(id),
                    });
                }
                Ok(PlayerRef::Player(PlayerId(n)))
            }
        }
    }

    fn fixed_player(&self, id: NodeId) -> Result<PlayerId, CompileError> {
        match self.player(id)? {
            PlayerRef::Player(p) => Ok(p),
            _ => Err(self.invalid(id, "a specific player (P1, P2, ...) is required here")),
        }
    }

    fn declare_piece(&mut self, decl: NodeId) -> Result<(), CompileError> {
        let base = self.text(self.req(decl, "name"));
        let owner_sym = self.table.slot(decl, "owner").map(|o| self.symbol(o).to_string());
        let owners: Vec<Owner> = match owner_sym.as_deref() {
            None | Some("Each") => self.players_list().into_iter().map(Owner::Player).collect(),
            Some("Neutral") => vec![Owner::Neutral],
            Some(_) => {
                let o = self.table.slot(decl, "owner").expect("owner");
                vec![Owner::Player(self.fixed_player(o)?)]
            }
        };
        let each = matches!(owner_sym.as_deref(), None | Some("Each"));
        for owner in owners {
            let suffix = match owner {
                Owner::Player(p) => p.0,
                Owner::Neutral => 0,
            };
            let name = format!("{base}{suffix}");
            if self.pieces.iter().any(|p| p.name == name) {
                return Err(self.invalid(decl, format!("piece `{name}` declared twice")));
            }
            self.pieces.push(PieceSpec {
                id: PieceId(self.pieces.len()),
                base: base.clone(),
                name,
                owner,
                rule: None,
                decl,
                each,
            });
        }
        Ok(())
    }

    fn players_list(&self) -> Vec<PlayerId> {
        (1..=self.players as u8).map(PlayerId).collect()
    }

    fn find_piece(&self, name: &str, at: NodeId) -> Result<PieceId, CompileError> {
        if let Some(p) = self.pieces.iter().find(|p| p.name == name) {
            return Ok(p.id);
        }
        let mut by_base = self.pieces.iter().filter(|p| p.base == name);
        match (by_base.next(), by_base.next()) {
            (Some(p), None) => Ok(p.id),
            _ => Err(CompileError::UnknownPiece { name: name.to_string(), span: self.span(at) }),
        }
    }

    fn site_set(&self, id: NodeId) -> Result<SiteSetExpr, CompileError> {
        let set = match self.table.descriptor(id) {
            Some("sites Empty") => SiteSet::Empty,
            Some("sites NotFriend") => SiteSet::NotFriend,
            Some("sites Side") => {
                let side_id = self.req(id, "side");
                let side = self.symbol(side_id);
                let sites = self
                    .board()
                    .side(side)
                    .ok_or_else(|| self.invalid(side_id, format!("side {side} does not exist on this board")))?;
                SiteSet::Fixed(sites)
            }
            Some("sites Row") => {
                let row_id = self.req(id, "row");
                let row = self.table.node(row_id).as_number().unwrap_or(0);
                let sites = usize::try_from(row)
                    .ok()
                    .and_then(|r| self.board().row(r))
                    .ok_or_else(|| self.invalid(row_id, format!("row {row} does not exist on this board")))?;
                SiteSet::Fixed(sites)
            }
            other => return Err(self.invalid(id, format!("unexpected site set {other:?}"))),
        };
        Ok(SiteSetExpr { id, set })
    }

    fn static_sites(&self, id: NodeId) -> Result<Vec<SiteId>, CompileError> {
        match self.site_set(id)?.set {
            SiteSet::Fixed(s) => Ok(s),
            _ => Err(self.invalid(id, "a fixed site set is required here")),
        }
    }

    fn region(&self, id: NodeId) -> Result<RegionSpec, CompileError> {
        let name = self.table.slot(id, "name").map(|n| self.text(n));
        let owner = self.fixed_player(self.req(id, "owner"))?;
        let mut sets = Vec::new();
        for set in self.table.flatten(self.req(id, "sites")) {
            sets.push((set, self.static_sites(set)?));
        }
        Ok(RegionSpec { id, name, owner, sets })
    }

    fn placement(&self, id: NodeId) -> Result<Placement, CompileError> {
        let piece_id = self.req(id, "piece");
        let piece = self.find_piece(&self.text(piece_id), piece_id)?;
        let mut sites = Vec::new();
        for item in self.table.flatten(self.req(id, "sites")) {
            match &self.table.node(item).kind {
                NodeKind::Text(label) => {
                    let site = self
                        .board()
                        .find(label)
                        .ok_or_else(|| CompileError::UnknownSite { label: label.clone(), span: self.span(item) })?;
                    sites.push(site);
                }
                _ => sites.extend(self.static_sites(item)?),
            }
        }
        Ok(Placement { id, piece, sites })
    }

    fn directions(&self, id: NodeId) -> Result<Vec<DirSpec>, CompileError> {
        let symbols = match self.table.descriptor(id) {
            Some("directions") => self.table.flatten(self.req(id, "directions")),
            _ => vec![id],
        };
        let tiling_dirs = self.board().directions(DirClass::Adjacent);
        symbols
            .into_iter()
            .map(|s| {
                let sym = self.symbol(s);
                Ok(match sym {
                    "Adjacent" => DirSpec::Class(DirClass::Adjacent),
                    "Orthogonal" => DirSpec::Class(DirClass::Orthogonal),
                    "Diagonal" => DirSpec::Class(DirClass::Diagonal),
                    "Forward" => DirSpec::Forward,
                    "Backward" => DirSpec::Backward,
                    "FL" => DirSpec::ForwardLeft,
                    "FR" => DirSpec::ForwardRight,
                    _ => {
                        let dir = Dir::from_symbol(sym)
                            .filter(|d| tiling_dirs.contains(d))
                            .ok_or_else(|| self.invalid(s, format!("direction {sym} does not exist on this board")))?;
                        DirSpec::Absolute(dir)
                    }
                })
            })
            .collect()
    }

    fn again(&self, id: NodeId) -> bool {
        self.table
            .slot(id, "then")
            .filter(|&t| self.table.descriptor(t) == Some("then"))
            .map(|t| self.req(t, "consequence"))
            .is_some_and(|c| self.table.descriptor(c) == Some("moveAgain"))
    }

    fn move_rule(&self, id: NodeId) -> Result<MoveRule, CompileError> {
        let again = self.again(id);
        let dirs = |default: DirClass| -> Result<Vec<DirSpec>, CompileError> {
            match self.table.slot(id, "directions") {
                Some(d) => self.directions(d),
                None => Ok(vec![DirSpec::Class(default)]),
            }
        };
        let target = |slot: &str| -> Result<Option<SiteSetExpr>, CompileError> {
            self.table.slot(id, slot).map(|t| self.site_set(self.req(t, "sites"))).transpose()
        };
        Ok(match self.table.descriptor(id) {
            Some("move Add") => MoveRule::Add { id, to: target("to")?.expect("to"), again },
            Some("move Step") => MoveRule::Step {
                id,
                dirs: dirs(DirClass::Adjacent)?,
                from: target("from")?,
                to: target("to")?.expect("to"),
                again,
            },
            Some("move Slide") => {
                MoveRule::Slide { id, dirs: dirs(DirClass::Adjacent)?, from: target("from")?, to: target("to")?, again }
            }
            Some("move Shoot") => {
                let piece_node = self.req(id, "piece");
                let name_id = self.req(piece_node, "name");
                MoveRule::Shoot { id, piece: self.find_piece(&self.text(name_id), name_id)?, again }
            }
            Some("forEach Piece") => MoveRule::ForEachPiece { id },
            Some("if") => {
                let cond = self.condition(self.req(id, "condition"))?;
                let then = Box::new(self.move_rule(self.req(id, "then"))?);
                let otherwise = self.table.slot(id, "else").map(|e| self.move_rule(e)).transpose()?.map(Box::new);
                MoveRule::If { id, cond, then, otherwise }
            }
            Some("or") => {
                let branches =
                    self.table.slot_all(id, "branches").iter().map(|&b| self.move_rule(b)).collect::<Result<_, _>>()?;
                MoveRule::Or { id, branches }
            }
            Some(other) => return Err(self.invalid(id, format!("`{other}` cannot be used as a move rule"))),
            None => return Err(self.invalid(id, "expected a move rule")),
        })
    }

    fn condition(&self, id: NodeId) -> Result<Condition, CompileError> {
        Ok(match self.table.descriptor(id) {
            Some("is Line") => {
                let len_id = self.req(id, "length");
                let length = self.table.node(len_id).as_number().unwrap_or(0);
                if length < 1 {
                    return Err(self.invalid(len_id, "line length must be positive"));
                }
                Condition::Line { id, length: length as usize }
            }
            Some("is Connected") => Condition::Connected { id, who: self.player(self.req(id, "who"))? },
            Some("is Reached") => Condition::Reached { id, who: self.player(self.req(id, "who"))? },
            Some("is Even") => Condition::Even { id, value: Value::MoveCount { id: self.req(id, "value") } },
            Some("no Moves") => Condition::NoMoves { id, who: self.player(self.req(id, "who"))? },
            Some("or") => Condition::Or { id, items: self.conditions(id, "branches")? },
            Some("and") => Condition::And { id, items: self.conditions(id, "conditions")? },
            Some(other) => return Err(self.invalid(id, format!("`{other}` cannot be used as a condition"))),
            None => return Err(self.invalid(id, "expected a condition")),
        })
    }

    fn conditions(&self, id: NodeId, slot: &str) -> Result<Vec<Condition>, CompileError> {
        self.table.slot_all(id, slot).iter().map(|&c| self.condition(c)).collect()
    }

    fn end_rule(&self, id: NodeId) -> Result<EndRule, CompileError> {
        if self.table.descriptor(id) != Some("if") {
            return Err(self.invalid(id, "end rules must have the form (if <condition> (result ...))"));
        }
        if let Some(e) = self.table.slot(id, "else") {
            return Err(self.invalid(e, "end rules cannot have an else branch"));
        }
        let condition = self.condition(self.req(id, "condition"))?;
        let result_id = self.req(id, "then");
        if self.table.descriptor(result_id) != Some("result") {
            return Err(self.invalid(result_id, "end rules must produce a (result ...)"));
        }
        let who = self.player(self.req(result_id, "who"))?;
        let outcome = match self.symbol(self.req(result_id, "outcome")) {
            "Win" => Outcome::Win,
            "Loss" => Outcome::Loss,
            _ => Outcome::Draw,
        };
        Ok(EndRule { id, condition, result: ResultSpec { id: result_id, who, outcome } })
    }
}
