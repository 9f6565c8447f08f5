use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::compiler::GameSpec;

use super::{apply_move, apply_unchecked, initial_state, legal_moves, Action, EndMatch, EngineError, GameState, Move};

/// Moves after which a playout is abandoned.
pub const PLAYOUT_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayoutTrace {
    pub seed: u64,
    pub moves: Vec<Move>,
    pub outcome: EndMatch,
}

/// Play uniformly random legal moves until the game ends.
///
/// The generator is xoshiro256++ seeded through SplitMix64 from `seed`; the
/// move at index `i` of the (deterministically ordered) legal-move list is
/// chosen with `random_range(0..len)`.
pub fn random_playout(spec: &GameSpec, seed: u64) -> Result<PlayoutTrace, EngineError> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut state = initial_state(spec)?;
    let mut moves = Vec::new();
    loop {
        if moves.len() >= PLAYOUT_CAP {
            return Err(EngineError::PlayoutLimitExceeded { seed, limit: PLAYOUT_CAP });
        }
        let legal = legal_moves(spec, &state);
        if legal.is_empty() {
            return Err(EngineError::NoLegalMoves);
        }
        let mv = legal[rng.random_range(0..legal.len())].clone();
        state = apply_unchecked(&state, &mv, spec);
        moves.push(mv);
        if let Some(end) = state.terminal {
            return Ok(PlayoutTrace { seed, moves, outcome: *end });
        }
    }
}

/// Run `count` playouts with seeds `base_seed + i`. Results are in seed order
/// whether or not they run in parallel.
pub fn run_playouts(
    spec: &GameSpec,
    base_seed: u64,
    count: usize,
    parallel: bool,
) -> Result<Vec<PlayoutTrace>, EngineError> {
    let seeds: Vec<u64> = (0..count as u64).map(|i| base_seed.wrapping_add(i)).collect();
    if parallel {
        seeds.par_iter().map(|&s| random_playout(spec, s)).collect()
    } else {
        seeds.iter().map(|&s| random_playout(spec, s)).collect()
    }
}

/// Apply `moves` from the initial state, checking each one.
pub fn replay(spec: &GameSpec, moves: &[Move]) -> Result<GameState, EngineError> {
    let mut state = initial_state(spec)?;
    for mv in moves {
        state = apply_move(&state, mv, spec)?;
    }
    Ok(state)
}

fn action_json(spec: &GameSpec, action: &Action) -> Value {
    let label = |s: crate::board::SiteId| spec.board.label(s).to_string();
    match *action {
        Action::Add { piece, site } => json!(["Add", spec.piece(piece).name, label(site)]),
        Action::Remove { site } => json!(["Remove", label(site)]),
        Action::MoveFromTo { from, to } => json!(["Move", label(from), label(to)]),
        Action::Score { player, value } => json!(["Score", player.to_string(), value]),
        Action::SetMoverAgain => json!(["SetMoverAgain"]),
    }
}

pub(crate) fn move_json(spec: &GameSpec, mv: &Move) -> Value {
    json!({
        "mover": mv.mover.to_string(),
        "piece": mv.piece.map(|p| spec.piece(p).name.clone()),
        "origin": mv.origin.0,
        "from": mv.from.map(|s| spec.board.label(s).to_string()),
        "to": mv.to.map(|s| spec.board.label(s).to_string()),
        "actions": mv.actions.iter().map(|a| action_json(spec, a)).collect::<Vec<_>>(),
    })
}

/// Debug export of one playout.
pub fn trace_json(spec: &GameSpec, trace: &PlayoutTrace) -> Value {
    let end = &trace.outcome;
    json!({
        "game": spec.name,
        "seed": trace.seed,
        "moves": trace.moves.iter().map(|m| move_json(spec, m)).collect::<Vec<_>>(),
        "outcome": {
            "result": format!("{:?}", end.outcome),
            "players": end.players.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "end_ludeme": end.end.map(|id| id.0),
            "winning_sites": end.winning_sites.as_ref().map(|sites| {
                sites.iter().map(|&s| spec.board.label(s).to_string()).collect::<Vec<_>>()
            }),
        },
    })
}
