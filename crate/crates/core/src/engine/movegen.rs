use crate::board::{Dir, DirClass, SiteId};
use crate::compiler::{DirSpec, GameSpec, MoveRule, Owner, PieceId, PlayerId, SiteSet, SiteSetExpr};

use super::conditions::{eval, EvalContext};
use super::{Action, GameState, Move};

/// Legal moves for the player to move, ordered by site index then direction.
/// A terminal state has none.
pub fn legal_moves(spec: &GameSpec, state: &GameState) -> Vec<Move> {
    if state.is_terminal() {
        return Vec::new();
    }
    let mut out = Vec::new();
    Generator { spec, state, player: state.mover }.rule(&spec.play, None, &mut out);
    out
}

#[derive(Clone, Copy)]
struct PieceAt {
    site: SiteId,
    piece: PieceId,
}

struct Generator<'a> {
    spec: &'a GameSpec,
    state: &'a GameState,
    player: PlayerId,
}

impl Generator<'_> {
    fn owner_of(&self, site: SiteId) -> Option<Owner> {
        self.state.contents[site.0].map(|p| self.spec.piece(p).owner)
    }

    fn is_friend(&self, site: SiteId) -> bool {
        self.owner_of(site) == Some(Owner::Player(self.player))
    }

    fn contains(&self, set: &SiteSetExpr, site: SiteId) -> bool {
        match &set.set {
            SiteSet::Empty => self.state.contents[site.0].is_none(),
            SiteSet::NotFriend => !self.is_friend(site),
            SiteSet::Fixed(sites) => sites.contains(&site),
        }
    }

    /// Absolute directions for a piece owned by `owner`, deduplicated in order.
    fn directions(&self, specs: &[DirSpec], owner: PlayerId) -> Vec<Dir> {
        let board = &self.spec.board;
        let (forward, left, right) = board.forward(owner.0);
        let mut out: Vec<Dir> = Vec::new();
        for spec in specs {
            let dirs = match *spec {
                DirSpec::Absolute(d) => vec![d],
                DirSpec::Class(c) => board.directions(c),
                DirSpec::Forward => vec![forward],
                DirSpec::Backward => vec![forward.opposite()],
                DirSpec::ForwardLeft => vec![left],
                DirSpec::ForwardRight => vec![right],
            };
            for d in dirs {
                if !out.contains(&d) {
                    out.push(d);
                }
            }
        }
        out
    }

    /// The pieces a movement rule applies to: the contextual piece, or every
    /// piece of the mover when the rule sits directly in the play rule.
    fn movers(&self, ctx: Option<PieceAt>, from: Option<&SiteSetExpr>) -> Vec<PieceAt> {
        let all: Vec<PieceAt> = match ctx {
            Some(p) => vec![p],
            None => self
                .spec
                .board
                .site_ids()
                .filter(|&s| self.is_friend(s))
                .map(|site| PieceAt { site, piece: self.state.contents[site.0].expect("friend") })
                .collect(),
        };
        all.into_iter().filter(|p| from.is_none_or(|f| self.contains(f, p.site))).collect()
    }

    fn piece_owner(&self, piece: PieceId) -> PlayerId {
        match self.spec.piece(piece).owner {
            Owner::Player(p) => p,
            Owner::Neutral => self.player,
        }
    }

    fn push(&self, out: &mut Vec<Move>, mut mv: Move, again: bool) {
        if again {
            mv.actions.push(Action::SetMoverAgain);
        }
        out.push(mv);
    }

    fn rule(&self, rule: &MoveRule, ctx: Option<PieceAt>, out: &mut Vec<Move>) {
        match rule {
            MoveRule::Add { id, to, again } => {
                let piece = match ctx {
                    Some(p) => Some(p.piece),
                    None => self.spec.pieces_of(self.player).next().map(|p| p.id),
                };
                let Some(piece) = piece else { return };
                for site in self.spec.board.site_ids() {
                    if self.state.contents[site.0].is_none() && self.contains(to, site) {
                        let mv = Move {
                            mover: self.player,
                            piece: Some(piece),
                            origin: *id,
                            actions: vec![Action::Add { piece, site }],
                            from: Some(site),
                            to: Some(site),
                        };
                        self.push(out, mv, *again);
                    }
                }
            }
            MoveRule::Step { id, dirs, from, to, again } => {
                for at in self.movers(ctx, from.as_ref()) {
                    for dir in self.directions(dirs, self.piece_owner(at.piece)) {
                        let Some(target) = self.spec.board.step(at.site, dir) else { continue };
                        if !self.contains(to, target) || self.is_friend(target) {
                            continue;
                        }
                        let mut actions = Vec::with_capacity(3);
                        if self.state.contents[target.0].is_some() {
                            actions.push(Action::Remove { site: target });
                        }
                        actions.push(Action::MoveFromTo { from: at.site, to: target });
                        let mv = Move {
                            mover: self.player,
                            piece: Some(at.piece),
                            origin: *id,
                            actions,
                            from: Some(at.site),
                            to: Some(target),
                        };
                        self.push(out, mv, *again);
                    }
                }
            }
            MoveRule::Slide { id, dirs, from, to, again } => {
                for at in self.movers(ctx, from.as_ref()) {
                    for dir in self.directions(dirs, self.piece_owner(at.piece)) {
                        for target in self.ray(at.site, dir) {
                            if to.as_ref().is_some_and(|t| !self.contains(t, target)) {
                                break;
                            }
                            let mv = Move {
                                mover: self.player,
                                piece: Some(at.piece),
                                origin: *id,
                                actions: vec![Action::MoveFromTo { from: at.site, to: target }],
                                from: Some(at.site),
                                to: Some(target),
                            };
                            self.push(out, mv, *again);
                        }
                    }
                }
            }
            MoveRule::Shoot { id, piece, again } => {
                let Some(origin) = self.state.last_to else { return };
                for dir in self.spec.board.directions(DirClass::Adjacent) {
                    for site in self.ray(origin, dir) {
                        let mv = Move {
                            mover: self.player,
                            piece: Some(*piece),
                            origin: *id,
                            actions: vec![Action::Add { piece: *piece, site }],
                            from: Some(site),
                            to: Some(site),
                        };
                        self.push(out, mv, *again);
                    }
                }
            }
            MoveRule::ForEachPiece { .. } => {
                for site in self.spec.board.site_ids() {
                    let Some(piece) = self.state.contents[site.0] else { continue };
                    let spec = self.spec.piece(piece);
                    if spec.owner != Owner::Player(self.player) {
                        continue;
                    }
                    if let Some(rule) = &spec.rule {
                        self.rule(rule, Some(PieceAt { site, piece }), out);
                    }
                }
            }
            MoveRule::If { cond, then, otherwise, .. } => {
                let ctx_eval = EvalContext { mover: self.player, last_to: self.state.last_to };
                if eval(self.spec, cond, self.state, &ctx_eval) {
                    self.rule(then, ctx, out);
                } else if let Some(o) = otherwise {
                    self.rule(o, ctx, out);
                }
            }
            MoveRule::Or { branches, .. } => {
                for b in branches {
                    self.rule(b, ctx, out);
                }
            }
        }
    }

    /// Empty sites reachable from `from` in a straight line.
    fn ray(&self, from: SiteId, dir: Dir) -> Vec<SiteId> {
        let mut out = Vec::new();
        let mut cur = from;
        while let Some(next) = self.spec.board.step(cur, dir) {
            if self.state.contents[next.0].is_some() {
                break;
            }
            out.push(next);
            cur = next;
        }
        out
    }
}
