//! Tree-walking interpreter for compiled games.
//!
//! [`legal_moves`] walks the play rule (and per-piece rules reached through
//! `forEach Piece`), [`apply_move`] executes a move's action list and then
//! evaluates the end rules, and [`random_playout`] drives a game to a terminal
//! state with a seeded generator.

mod conditions;
mod movegen;
mod playout;

use serde::Serialize;
use thiserror::Error;

use crate::board::SiteId;
use crate::compiler::{GameSpec, Outcome, PieceId, PlayerId};
use crate::registry::NodeId;

pub use conditions::{check_end, eval_condition, EvalContext};
pub use movegen::legal_moves;
pub use playout::{random_playout, replay, run_playouts, trace_json, PlayoutTrace, PLAYOUT_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Action {
    Add { piece: PieceId, site: SiteId },
    Remove { site: SiteId },
    MoveFromTo { from: SiteId, to: SiteId },
    Score { player: PlayerId, value: i64 },
    SetMoverAgain,
}

/// Name-only view of an [`Action`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ActionType {
    Add,
    Remove,
    Move,
    Score,
    SetMoverAgain,
}

impl ActionType {
    pub fn name(self) -> &'static str {
        match self {
            ActionType::Add => "Add",
            ActionType::Remove => "Remove",
            ActionType::Move => "Move",
            ActionType::Score => "Score",
            ActionType::SetMoverAgain => "SetMoverAgain",
        }
    }
}

impl std::fmt::Display for ActionType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl Action {
    pub fn action_type(&self) -> ActionType {
        match self {
            Action::Add { .. } => ActionType::Add,
            Action::Remove { .. } => ActionType::Remove,
            Action::MoveFromTo { .. } => ActionType::Move,
            Action::Score { .. } => ActionType::Score,
            Action::SetMoverAgain => ActionType::SetMoverAgain,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Move {
    pub mover: PlayerId,
    /// The main piece; `None` for pass-like moves.
    pub piece: Option<PieceId>,
    /// The `(move ...)` ludeme that generated this move.
    pub origin: NodeId,
    pub actions: Vec<Action>,
    pub from: Option<SiteId>,
    pub to: Option<SiteId>,
}

impl Move {
    pub fn action_types(&self) -> Vec<ActionType> {
        self.actions.iter().map(Action::action_type).collect()
    }

    pub fn moves_again(&self) -> bool {
        self.actions.contains(&Action::SetMoverAgain)
    }

    /// True when the main piece changes location.
    pub fn is_displacement(&self) -> bool {
        matches!((self.from, self.to), (Some(f), Some(t)) if f != t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndMatch {
    /// The end rule that fired; `None` for the no-legal-moves draw fallback.
    pub end: Option<NodeId>,
    pub players: Vec<PlayerId>,
    pub outcome: Outcome,
    pub final_move: Move,
    pub winning_sites: Option<Vec<SiteId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    pub contents: Vec<Option<PieceId>>,
    pub mover: PlayerId,
    pub move_count: usize,
    pub scores: Vec<i64>,
    /// Destination of the previous move; Shoot rays start here.
    pub last_to: Option<SiteId>,
    pub terminal: Option<Box<EndMatch>>,
}

impl GameState {
    /// An empty board with player 1 to move.
    pub fn empty(spec: &GameSpec) -> GameState {
        GameState {
            contents: vec![None; spec.board.len()],
            mover: PlayerId(1),
            move_count: 0,
            scores: vec![0; spec.players],
            last_to: None,
            terminal: None,
        }
    }

    pub fn occupied(&self) -> usize {
        self.contents.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_terminal(&self) -> bool {
        self.terminal.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("two pieces placed on site {0}")]
    PlacementConflict(String),
    #[error("move is not legal in this state")]
    IllegalMove,
    #[error("playout with seed {seed} exceeded {limit} moves")]
    PlayoutLimitExceeded { seed: u64, limit: usize },
    #[error("the initial state has no legal moves")]
    NoLegalMoves,
    #[error("ludeme {0} is not a supported condition")]
    UnsupportedCondition(NodeId),
}

/// Apply the start placements to an empty board.
pub fn initial_state(spec: &GameSpec) -> Result<GameState, EngineError> {
    let mut state = GameState::empty(spec);
    for placement in &spec.start {
        for &site in &placement.sites {
            if state.contents[site.0].is_some() {
                return Err(EngineError::PlacementConflict(spec.board.label(site).to_string()));
            }
            state.contents[site.0] = Some(placement.piece);
        }
    }
    Ok(state)
}

/// Apply a move after checking it is legal in `state`.
pub fn apply_move(state: &GameState, mv: &Move, spec: &GameSpec) -> Result<GameState, EngineError> {
    if state.is_terminal() || !legal_moves(spec, state).contains(mv) {
        return Err(EngineError::IllegalMove);
    }
    Ok(apply_unchecked(state, mv, spec))
}

pub(crate) fn apply_unchecked(state: &GameState, mv: &Move, spec: &GameSpec) -> GameState {
    let mut next = state.clone();
    for action in &mv.actions {
        match *action {
            Action::Add { piece, site } => next.contents[site.0] = Some(piece),
            Action::Remove { site } => next.contents[site.0] = None,
            Action::MoveFromTo { from, to } => next.contents[to.0] = next.contents[from.0].take(),
            Action::Score { player, value } => next.scores[player.index()] = value,
            Action::SetMoverAgain => {}
        }
    }
    next.move_count += 1;
    next.last_to = mv.to;
    next.mover = if mv.moves_again() { mv.mover } else { mv.mover.next(spec.players) };
    next.terminal = check_end(spec, &next, mv).map(Box::new);
    next
}
