//! Move signatures, distinct-move discovery, similar moves and ending examples.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::board::SiteId;
use crate::compiler::{GameSpec, Outcome, Owner, PlayerId};
use crate::engine::{legal_moves, ActionType, GameState, Move, PlayoutTrace};
use crate::english::{sentence, translate_node, Section, TranslateError, TranslationContext};
use crate::registry::NodeId;

/// The four properties that identify a kind of move.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MoveSignature {
    pub mover: Option<PlayerId>,
    /// Base piece name, e.g. `Queen` for both `Queen1` and `Queen2`.
    pub piece: Option<String>,
    pub origin: NodeId,
    pub action_types: Vec<ActionType>,
}

impl MoveSignature {
    /// Stable textual form, used for asset names.
    pub fn canonical(&self) -> String {
        let types: Vec<&str> = self.action_types.iter().map(|t| t.name()).collect();
        format!(
            "{}|{}|{}|{}",
            self.mover.map_or_else(|| "-".to_string(), |p| p.to_string()),
            self.piece.as_deref().unwrap_or("-"),
            self.origin.0,
            types.join(",")
        )
    }
}

/// Playout seed and move index of a move within a batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Exemplar {
    pub seed: u64,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistinctMove {
    pub signature: MoveSignature,
    pub exemplar: Exemplar,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct EndingKey {
    pub outcome: Outcome,
    pub players: Vec<PlayerId>,
    /// The end rule; `None` for the no-moves draw.
    pub end: Option<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndingExample {
    pub key: EndingKey,
    /// Seed of the playout; the ending is its last move.
    pub seed: u64,
    pub text: String,
    pub winning_sites: Option<Vec<SiteId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub move_ludemes: Vec<NodeId>,
    pub unexercised: Vec<NodeId>,
}

/// Whether the mover must be part of a signature to tell players' moves apart.
///
/// True when per-piece rules differ between players after renaming owners,
/// when the play rule names a specific player, or when a piece name is shared
/// by several players (so the piece alone does not identify whose move it is).
pub fn mover_matters(spec: &GameSpec) -> bool {
    let mut rules: BTreeMap<&str, Vec<Option<String>>> = BTreeMap::new();
    let mut owners: BTreeMap<&str, Vec<Owner>> = BTreeMap::new();
    for piece in &spec.pieces {
        let rule = piece.rule.as_ref().map(|r| crate::sexpr::print_canonical(spec.table.node(r.id())));
        rules.entry(&piece.base).or_default().push(rule);
        owners.entry(&piece.base).or_default().push(piece.owner);
    }
    let rules_differ = rules.values().any(|rs| rs.windows(2).any(|w| w[0] != w[1]));
    let play_names_player = spec.play.conditions().iter().any(|c| c.names_player());
    let shared =
        spec.pieces.iter().any(|p| p.each || p.owner == Owner::Neutral) || owners.values().any(|os| os.len() > 1);
    rules_differ || play_names_player || shared
}

fn signature_with(mv: &Move, spec: &GameSpec, with_mover: bool) -> MoveSignature {
    MoveSignature {
        mover: with_mover.then_some(mv.mover),
        piece: mv.piece.map(|p| spec.piece(p).base.clone()),
        origin: mv.origin,
        action_types: mv.action_types(),
    }
}

pub fn move_signature(mv: &Move, spec: &GameSpec) -> MoveSignature {
    signature_with(mv, spec, mover_matters(spec))
}

/// English text for the rule that generated a move.
pub fn rule_text(origin: NodeId, spec: &GameSpec) -> Result<String, TranslateError> {
    let ctx = TranslationContext::new(spec, Section::Rules);
    Ok(sentence(&translate_node(origin, &ctx, spec)?))
}

/// One entry per signature seen in `traces`, sorted by signature. The exemplar
/// is the occurrence with the lowest (seed, index), so trace order is irrelevant.
pub fn collect_distinct(traces: &[PlayoutTrace], spec: &GameSpec) -> Result<Vec<DistinctMove>, TranslateError> {
    let with_mover = mover_matters(spec);
    let mut best: BTreeMap<MoveSignature, Exemplar> = BTreeMap::new();
    for trace in traces {
        for (index, mv) in trace.moves.iter().enumerate() {
            let here = Exemplar { seed: trace.seed, index };
            best.entry(signature_with(mv, spec, with_mover)).and_modify(|e| *e = (*e).min(here)).or_insert(here);
        }
    }
    best.into_iter()
        .map(|(signature, exemplar)| {
            let text = rule_text(signature.origin, spec)?;
            Ok(DistinctMove { signature, exemplar, text })
        })
        .collect()
}

/// Legal moves in `state` with the same signature as `selected`, in legal-move order.
pub fn similar_legal_moves(state: &GameState, selected: &Move, spec: &GameSpec) -> Vec<Move> {
    let with_mover = mover_matters(spec);
    let target = signature_with(selected, spec, with_mover);
    legal_moves(spec, state).into_iter().filter(|m| signature_with(m, spec, with_mover) == target).collect()
}

fn ending_text(key: &EndingKey, spec: &GameSpec) -> Result<String, TranslateError> {
    match key.end {
        Some(id) => Ok(sentence(&translate_node(id, &TranslationContext::new(spec, Section::Aim), spec)?)),
        None => Ok("If the player to move has no legal moves, the game ends in a draw.".into()),
    }
}

/// One example per (outcome, players, end rule), from the lowest seed.
pub fn collect_endings(traces: &[PlayoutTrace], spec: &GameSpec) -> Result<Vec<EndingExample>, TranslateError> {
    let mut best: BTreeMap<EndingKey, &PlayoutTrace> = BTreeMap::new();
    for trace in traces {
        let key = EndingKey {
            outcome: trace.outcome.outcome,
            players: trace.outcome.players.clone(),
            end: trace.outcome.end,
        };
        best.entry(key)
            .and_modify(|t| {
                if trace.seed < t.seed {
                    *t = trace;
                }
            })
            .or_insert(trace);
    }
    best.into_iter()
        .map(|(key, trace)| {
            Ok(EndingExample {
                text: ending_text(&key, spec)?,
                seed: trace.seed,
                winning_sites: trace.outcome.winning_sites.clone(),
                key,
            })
        })
        .collect()
}

/// Move ludemes never seen as the origin of a discovered move.
pub fn coverage(spec: &GameSpec, distinct: &[DistinctMove]) -> Coverage {
    let move_ludemes = spec.move_ludemes();
    let unexercised =
        move_ludemes.iter().copied().filter(|id| !distinct.iter().any(|d| d.signature.origin == *id)).collect();
    Coverage { move_ludemes, unexercised }
}

/// JSON export of the taxonomy.
pub fn taxonomy_json(spec: &GameSpec, distinct: &[DistinctMove], endings: &[EndingExample], cov: &Coverage) -> Value {
    let label = |s: &SiteId| spec.board.label(*s).to_string();
    json!({
        "game": spec.name,
        "mover_in_signature": mover_matters(spec),
        "moves": distinct.iter().map(|d| json!({
            "signature": {
                "mover": d.signature.mover.map(|p| p.to_string()),
                "piece": d.signature.piece,
                "origin": d.signature.origin.0,
                "action_types": d.signature.action_types.iter().map(|t| t.name()).collect::<Vec<_>>(),
            },
            "exemplar": { "seed": d.exemplar.seed, "index": d.exemplar.index },
            "text": d.text,
        })).collect::<Vec<_>>(),
        "endings": endings.iter().map(|e| json!({
            "outcome": format!("{:?}", e.key.outcome),
            "players": e.key.players.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "end": e.key.end.map(|n| n.0),
            "seed": e.seed,
            "text": e.text,
            "winning_sites": e.winning_sites.as_ref().map(|s| s.iter().map(label).collect::<Vec<_>>()),
        })).collect::<Vec<_>>(),
        "coverage": {
            "move_ludemes": cov.move_ludemes.iter().map(|n| n.0).collect::<Vec<_>>(),
            "unexercised": cov.unexercised.iter().map(|n| n.0).collect::<Vec<_>>(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::compile;
    use crate::engine::{apply_move, initial_state, run_playouts, Action};
    use crate::sexpr::parse;

    fn corpus(text: &str) -> GameSpec {
        compile(&parse(text).unwrap()).unwrap()
    }

    fn ttt() -> GameSpec {
        corpus(include_str!("../../../corpus/TicTacToe.lud"))
    }

    fn amazons() -> GameSpec {
        corpus(include_str!("../../../corpus/Amazons.lud"))
    }

    #[test]
    fn action_types_keep_order() {
        let spec = ttt();
        let mv = Move {
            mover: PlayerId(1),
            piece: Some(spec.find_piece("Disc1").unwrap()),
            origin: NodeId(3),
            actions: vec![
                Action::Remove { site: SiteId(1) },
                Action::MoveFromTo { from: SiteId(0), to: SiteId(1) },
                Action::Score { player: PlayerId(1), value: 1 },
            ],
            from: Some(SiteId(0)),
            to: Some(SiteId(1)),
        };
        assert_eq!(move_signature(&mv, &spec).action_types, [ActionType::Remove, ActionType::Move, ActionType::Score]);
        let pass = Move { piece: None, actions: vec![], ..mv };
        assert_eq!(move_signature(&pass, &spec).piece, None);
    }

    #[test]
    fn tic_tac_toe_signature_omits_mover() {
        let spec = ttt();
        assert!(!mover_matters(&spec));
        let state = initial_state(&spec).unwrap();
        let mv = legal_moves(&spec, &state).remove(4);
        let sig = move_signature(&mv, &spec);
        assert_eq!(sig.mover, None);
        assert_eq!(sig.piece.as_deref(), Some("Disc"));
        assert_eq!(spec.table.descriptor(sig.origin), Some("move Add"));
        assert_eq!(sig.action_types, [ActionType::Add]);
    }

    #[test]
    fn shared_pieces_need_the_mover() {
        assert!(mover_matters(&amazons()));
        assert!(mover_matters(&corpus(include_str!("../../../corpus/Hex.lud"))));
    }

    #[test]
    fn distinct_moves() {
        let spec = ttt();
        let traces = run_playouts(&spec, 0, 100, false).unwrap();
        let distinct = collect_distinct(&traces, &spec).unwrap();
        let pieces: Vec<_> = distinct.iter().map(|d| d.signature.piece.clone().unwrap()).collect();
        assert_eq!(pieces, ["Cross", "Disc"]);
        assert_eq!(distinct[0].text, "Add one of your pieces to the set of empty cells.");
        assert_eq!(distinct[1].exemplar, Exemplar { seed: 0, index: 0 });
        assert!(collect_distinct(&[], &spec).unwrap().is_empty());

        let spec = amazons();
        let traces = run_playouts(&spec, 0, 100, false).unwrap();
        let distinct = collect_distinct(&traces, &spec).unwrap();
        assert_eq!(distinct.len(), 4);
        let mut reversed = traces.clone();
        reversed.reverse();
        assert_eq!(collect_distinct(&reversed, &spec).unwrap(), distinct);
        assert!(coverage(&spec, &distinct).unexercised.is_empty());
    }

    #[test]
    fn similar_moves() {
        let spec = ttt();
        let state = initial_state(&spec).unwrap();
        let centre = legal_moves(&spec, &state).remove(4);
        let similar = similar_legal_moves(&state, &centre, &spec);
        assert_eq!(similar, legal_moves(&spec, &state));
        assert_eq!(similar.len(), 9);

        let spec = amazons();
        let state = initial_state(&spec).unwrap();
        let slide = legal_moves(&spec, &state).remove(0);
        let state = apply_move(&state, &slide, &spec).unwrap();
        let shot = legal_moves(&spec, &state).remove(0);
        let shots = similar_legal_moves(&state, &shot, &spec);
        assert_eq!(shots, legal_moves(&spec, &state));
        for m in &shots {
            assert_eq!(similar_legal_moves(&state, m, &spec), shots);
        }
    }

    #[test]
    fn endings() {
        let spec = ttt();
        let traces = run_playouts(&spec, 0, 100, false).unwrap();
        let endings = collect_endings(&traces, &spec).unwrap();
        let keys: Vec<_> = endings.iter().map(|e| (e.key.outcome, e.key.players.clone())).collect();
        assert_eq!(
            keys,
            [
                (Outcome::Win, vec![PlayerId(1)]),
                (Outcome::Win, vec![PlayerId(2)]),
                (Outcome::Draw, vec![PlayerId(1), PlayerId(2)]),
            ]
        );
        assert_eq!(
            endings[0].text,
            "If a player places 3 of their pieces in an adjacent direction line, the moving player wins."
        );
        assert!(endings[0].winning_sites.as_ref().is_some_and(|s| s.len() == 3));
        assert!(collect_endings(&[], &spec).unwrap().is_empty());
    }
}
