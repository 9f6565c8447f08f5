use std::collections::VecDeque;

use crate::board::{DirClass, SiteId};
use crate::compiler::{Condition, GameSpec, MoveRule, Outcome, Owner, PlayerId, PlayerRef};
use crate::registry::NodeId;

use super::movegen::legal_moves;
use super::{EndMatch, EngineError, GameState, Move};

/// Who is acting and where the last move landed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalContext {
    pub mover: PlayerId,
    pub last_to: Option<SiteId>,
}

impl EvalContext {
    fn resolve(&self, who: PlayerRef, players: usize) -> PlayerId {
        match who {
            PlayerRef::Mover => self.mover,
            PlayerRef::Next => self.mover.next(players),
            PlayerRef::Player(p) => p,
        }
    }
}

fn find_in_condition(cond: &Condition, id: NodeId) -> Option<&Condition> {
    if cond.id() == id {
        return Some(cond);
    }
    match cond {
        Condition::Or { items, .. } | Condition::And { items, .. } => {
            items.iter().find_map(|c| find_in_condition(c, id))
        }
        _ => None,
    }
}

fn find_in_rule(rule: &MoveRule, id: NodeId) -> Option<&Condition> {
    rule.conditions().into_iter().find_map(|c| find_in_condition(c, id))
}

/// Locate the condition compiled from ludeme `id`.
pub(crate) fn find_condition(spec: &GameSpec, id: NodeId) -> Option<&Condition> {
    spec.end
        .iter()
        .find_map(|e| find_in_condition(&e.condition, id))
        .or_else(|| find_in_rule(&spec.play, id))
        .or_else(|| spec.pieces.iter().filter_map(|p| p.rule.as_ref()).find_map(|r| find_in_rule(r, id)))
}

/// Evaluate the condition compiled from ludeme `cond`.
pub fn eval_condition(
    spec: &GameSpec,
    cond: NodeId,
    state: &GameState,
    ctx: &EvalContext,
) -> Result<bool, EngineError> {
    let cond = find_condition(spec, cond).ok_or(EngineError::UnsupportedCondition(cond))?;
    Ok(eval(spec, cond, state, ctx))
}

pub(crate) fn eval(spec: &GameSpec, cond: &Condition, state: &GameState, ctx: &EvalContext) -> bool {
    match cond {
        Condition::Line { length, .. } => line(spec, state, ctx.last_to, *length).is_some(),
        Condition::Connected { who, .. } => connection(spec, state, ctx.resolve(*who, spec.players)).is_some(),
        Condition::Reached { who, .. } => reached(spec, state, ctx.resolve(*who, spec.players)).is_some(),
        Condition::Even { .. } => state.move_count.is_multiple_of(2),
        Condition::NoMoves { who, .. } => {
            let mut probe = state.clone();
            probe.mover = ctx.resolve(*who, spec.players);
            probe.terminal = None;
            legal_moves(spec, &probe).is_empty()
        }
        Condition::Or { items, .. } => items.iter().any(|c| eval(spec, c, state, ctx)),
        Condition::And { items, .. } => items.iter().all(|c| eval(spec, c, state, ctx)),
    }
}

/// Sites that make a condition true, for conditions that have a visual witness.
fn witness(spec: &GameSpec, cond: &Condition, state: &GameState, ctx: &EvalContext) -> Option<Vec<SiteId>> {
    match cond {
        Condition::Line { length, .. } => line(spec, state, ctx.last_to, *length),
        Condition::Connected { who, .. } => connection(spec, state, ctx.resolve(*who, spec.players)),
        Condition::Reached { who, .. } => reached(spec, state, ctx.resolve(*who, spec.players)),
        Condition::Or { items, .. } => {
            items.iter().find(|c| eval(spec, c, state, ctx)).and_then(|c| witness(spec, c, state, ctx))
        }
        Condition::And { items, .. } => {
            let sites: Vec<SiteId> = items.iter().filter_map(|c| witness(spec, c, state, ctx)).flatten().collect();
            (!sites.is_empty()).then_some(sites)
        }
        Condition::Even { .. } | Condition::NoMoves { .. } => None,
    }
}

/// First run of at least `length` same-owner pieces through `site`, scanning
/// axes in board order. Sites are returned from one end of the run to the other.
fn line(spec: &GameSpec, state: &GameState, site: Option<SiteId>, length: usize) -> Option<Vec<SiteId>> {
    let site = site?;
    let owner = state.contents[site.0].map(|p| spec.piece(p).owner)?;
    let same = |s: SiteId| state.contents[s.0].is_some_and(|p| spec.piece(p).owner == owner);
    for axis in spec.board.axes() {
        let mut back = Vec::new();
        let mut cur = site;
        while let Some(n) = spec.board.step(cur, axis.opposite()).filter(|&n| same(n)) {
            back.push(n);
            cur = n;
        }
        back.reverse();
        back.push(site);
        cur = site;
        while let Some(n) = spec.board.step(cur, axis).filter(|&n| same(n)) {
            back.push(n);
            cur = n;
        }
        if back.len() >= length {
            return Some(back);
        }
    }
    None
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// A chain of `player`'s pieces touching all of the player's regions.
/// Returns a shortest such path for two regions, or the joining group otherwise.
fn connection(spec: &GameSpec, state: &GameState, player: PlayerId) -> Option<Vec<SiteId>> {
    let regions = spec.region_sites(player);
    if regions.len() < 2 {
        return None;
    }
    let board = &spec.board;
    let mine = |s: SiteId| state.contents[s.0].is_some_and(|p| spec.piece(p).owner == Owner::Player(player));
    let mut uf = UnionFind::new(board.len());
    for s in board.site_ids().filter(|&s| mine(s)) {
        for n in board.neighbours(s, DirClass::Adjacent) {
            if mine(n) {
                uf.union(s.0, n.0);
            }
        }
    }
    let roots: Vec<Vec<usize>> =
        regions.iter().map(|reg| reg.iter().filter(|&&s| mine(s)).map(|s| uf.find(s.0)).collect()).collect();
    let root = *roots[0].iter().find(|r| roots[1..].iter().all(|rs| rs.contains(r)))?;

    if regions.len() > 2 {
        return Some(board.site_ids().filter(|&s| mine(s) && uf.find(s.0) == root).collect());
    }
    // Breadth-first search inside the joining group for a shortest path.
    let mut prev: Vec<Option<SiteId>> = vec![None; board.len()];
    let mut seen = vec![false; board.len()];
    let mut queue = VecDeque::new();
    for &s in regions[0].iter().filter(|&&s| mine(s) && uf.find(s.0) == root) {
        seen[s.0] = true;
        queue.push_back(s);
    }
    while let Some(s) = queue.pop_front() {
        if regions[1].contains(&s) {
            let mut path = vec![s];
            let mut cur = s;
            while let Some(p) = prev[cur.0] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for n in board.neighbours(s, DirClass::Adjacent) {
            if mine(n) && !seen[n.0] {
                seen[n.0] = true;
                prev[n.0] = Some(s);
                queue.push_back(n);
            }
        }
    }
    None
}

/// Sites in `player`'s regions occupied by that player's pieces.
fn reached(spec: &GameSpec, state: &GameState, player: PlayerId) -> Option<Vec<SiteId>> {
    let mut sites: Vec<SiteId> = spec
        .region_sites(player)
        .into_iter()
        .flatten()
        .filter(|s| state.contents[s.0].is_some_and(|p| spec.piece(p).owner == Owner::Player(player)))
        .collect();
    sites.sort();
    sites.dedup();
    (!sites.is_empty()).then_some(sites)
}

/// Evaluate end rules after `last` produced `state`.
///
/// The first rule (in declaration order) whose condition holds decides the
/// result. Otherwise, if the player to move has no legal moves, the game is a
/// draw for everyone.
pub fn check_end(spec: &GameSpec, state: &GameState, last: &Move) -> Option<EndMatch> {
    let ctx = EvalContext { mover: last.mover, last_to: last.to };
    for rule in &spec.end {
        if eval(spec, &rule.condition, state, &ctx) {
            let players = match rule.result.outcome {
                Outcome::Draw => spec.player_ids().collect(),
                Outcome::Win | Outcome::Loss => vec![ctx.resolve(rule.result.who, spec.players)],
            };
            return Some(EndMatch {
                end: Some(rule.id),
                players,
                outcome: rule.result.outcome,
                final_move: last.clone(),
                winning_sites: witness(spec, &rule.condition, state, &ctx),
            });
        }
    }
    let mut probe = state.clone();
    probe.terminal = None;
    if legal_moves(spec, &probe).is_empty() {
        return Some(EndMatch {
            end: None,
            players: spec.player_ids().collect(),
            outcome: Outcome::Draw,
            final_move: last.clone(),
            winning_sites: None,
        });
    }
    None
}
