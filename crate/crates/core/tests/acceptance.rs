//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use sha2::{Digest, Sha256};

use ludeme_manual::board::SiteId;
use ludeme_manual::cli::{game_dir_name, run, Mode, RunConfig};
use ludeme_manual::compiler::{compile, GameSpec, Outcome, PlayerId};
use ludeme_manual::engine::{eval_condition, initial_state, replay, run_playouts, EvalContext, GameState};
use ludeme_manual::manual::{json_leaves, SECTIONS};
use ludeme_manual::render::{render_ending_pair, render_move_pair, HighlightMode};
use ludeme_manual::sexpr::{parse, RawNode};
use ludeme_manual::strategy::{explain_heuristics, parse_heuristics};
use ludeme_manual::taxonomy::{collect_distinct, collect_endings, MoveSignature};

const CRITERION_1_LIMIT: Duration = Duration::from_secs(1);
const CRITERION_3_LIMIT: Duration = Duration::from_secs(5);
const CRITERION_5_LIMIT: Duration = Duration::from_secs(30);

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus_path(file: &str) -> PathBuf {
    corpus_dir().join(file)
}

fn source(file: &str) -> String {
    fs::read_to_string(corpus_path(file)).unwrap()
}

fn spec(file: &str) -> GameSpec {
    compile(&parse(&source(file)).unwrap()).unwrap()
}

fn normalise(text: &str) -> String {
    text.lines()
        .map(|l| l.split(' ').filter(|w| !w.is_empty()).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
        .trim()
        .to_string()
}

type Outcome_ = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

// ---------------------------------------------------------------------------
// 1, 2: golden translations

const TIC_TAC_TOE: &str = r#"The game "Tic-Tac-Toe" is played by two players on a 3x3 rectangle board with square tiling.
Player one plays with Discs. Player two plays with Crosses.
Players take turns moving.
Rules:
     Add one of your pieces to the set of empty cells.
Aim:
     If a player places 3 of their pieces in an adjacent direction line, the moving player wins.
"#;

const HEX: &str = r#"The game "Hex" is played by two players on a 11x11 diamond board with hexagonal tiling.
Regions:
    RegionP1: the NE side for P1 and RegionP1: the SW side for P1
    RegionP2: the NW side for P2 and RegionP2: the SE side for P2
All players play with Markers.
Players take turns moving.
Rules:
     Add one of your pieces to the set of empty cells.
Aim:
     If the region(s) of the moving player are connected, the moving player wins.
"#;

const AMAZONS: &str = r#"The game "Amazons" is played by two players on a 10x10 rectangle board with square tiling.
All players play with Queens. The following pieces are neutral: Dots.
Rules for Pieces:
     Queens slide from the location of the piece in the adjacent direction through the set of empty cells then move again.
Players take turns moving.
Setup:
     Place a Queen for player one on sites: A4, D1, G1 and J4.
     Place a Queen for player two on sites: A7, D10, G10 and J7.
Rules:
     If the number of moves is even, move one of your pieces, else shoot the piece Dot0.
Aim:
     If the next player cannot move, the moving player wins.
"#;

fn cli_translate(file: &str) -> Result<String, String> {
    let config = RunConfig::new(Mode::Translate, vec![corpus_path(file)]);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&config, &mut out, &mut err);
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)));
    }
    Ok(String::from_utf8(out).unwrap())
}

fn criterion_1() -> Outcome_ {
    let start = Instant::now();
    let text = cli_translate("TicTacToe.lud")?;
    let elapsed = start.elapsed();
    check(normalise(&text) == normalise(TIC_TAC_TOE), format!("text differs:\n{text}"))?;
    check(elapsed < CRITERION_1_LIMIT, format!("took {elapsed:?}"))?;
    Ok(format!("exact match in {elapsed:?} (limit {CRITERION_1_LIMIT:?})"))
}

fn criterion_2() -> Outcome_ {
    for (file, golden) in [("Hex.lud", HEX), ("Amazons.lud", AMAZONS)] {
        let text = cli_translate(file)?;
        check(normalise(&text) == normalise(golden), format!("{file} differs:\n{text}"))?;
    }
    Ok("Hex and Amazons exact match".into())
}

// ---------------------------------------------------------------------------
// 3: taxonomy counts against a structural enumeration over the raw source tree

/// (player, piece base name, preorder index of the move ludeme, action types)
type RawSig = (u8, String, usize, Vec<&'static str>);

struct RawGame {
    players: u8,
    /// (base name, owner symbol, rule node index)
    pieces: Vec<(String, String, Option<usize>)>,
    nodes: Vec<RawNode>,
    play: usize,
}

fn preorder(node: &RawNode, out: &mut Vec<RawNode>) {
    out.push(node.clone());
    for child in node.args() {
        preorder(child, out);
    }
}

fn selector(node: &RawNode) -> String {
    let sel =
        node.args().first().and_then(|a| a.as_symbol()).filter(|s| s.chars().next().is_some_and(char::is_uppercase));
    match (node.head(), sel) {
        (Some(h), Some(s)) => format!("{h} {s}"),
        (Some(h), None) => h.to_string(),
        _ => String::new(),
    }
}

fn raw_game(text: &str) -> RawGame {
    let mut nodes = Vec::new();
    preorder(&parse(text).unwrap(), &mut nodes);
    let find = |name: &str| nodes.iter().position(|n| selector(n) == name);
    let players = nodes[find("players").unwrap()].args()[0].as_number().unwrap() as u8;
    let mut pieces = Vec::new();
    for (i, n) in nodes.iter().enumerate() {
        // Declarations carry an owner symbol; references like `(piece "Dot0")` do not.
        let (Some("piece"), Some(name), Some(owner)) =
            (n.head(), n.args().first().and_then(|a| a.as_text()), n.args().get(1).and_then(|a| a.as_symbol()))
        else {
            continue;
        };
        let rule = n.args().get(2).map(|_| index_of_child(&nodes, i, 2));
        pieces.push((name.to_string(), owner.to_string(), rule));
    }
    let play_node = find("play").unwrap();
    let play = index_of_child(&nodes, play_node, 0);
    RawGame { players, pieces, nodes, play }
}

/// Preorder index of the `k`-th argument of node `i`.
fn index_of_child(nodes: &[RawNode], i: usize, k: usize) -> usize {
    let mut idx = i + 1;
    for arg in &nodes[i].args()[..k] {
        idx += arg.size();
    }
    idx
}

fn has_move_again(node: &RawNode) -> bool {
    node.args().iter().any(|a| a.head() == Some("then") && a.args().iter().any(|c| c.head() == Some("moveAgain")))
}

fn owners(owner: &str, players: u8) -> Vec<u8> {
    match owner {
        "Each" => (1..=players).collect(),
        "Neutral" => vec![],
        p => vec![p[1..].parse().unwrap()],
    }
}

fn enumerate(game: &RawGame, idx: usize, player: u8, piece: Option<&str>, out: &mut BTreeSet<RawSig>) {
    let node = &game.nodes[idx];
    let again = |mut v: Vec<&'static str>| {
        if has_move_again(node) {
            v.push("SetMoverAgain");
        }
        v
    };
    let mine: Vec<&str> = game
        .pieces
        .iter()
        .filter(|(_, o, _)| owners(o, game.players).contains(&player))
        .map(|(b, _, _)| b.as_str())
        .collect();
    match selector(node).as_str() {
        "move Add" => {
            let base = piece.or(mine.first().copied()).unwrap();
            out.insert((player, base.to_string(), idx, again(vec!["Add"])));
        }
        "move Slide" | "move Step" => {
            let captures = source_text(node).contains("NotFriend");
            for base in piece.map_or(mine.clone(), |p| vec![p]) {
                out.insert((player, base.to_string(), idx, again(vec!["Move"])));
                if captures && selector(node) == "move Step" {
                    out.insert((player, base.to_string(), idx, again(vec!["Remove", "Move"])));
                }
            }
        }
        "move Shoot" => {
            let name = node.args()[1].args()[0].as_text().unwrap();
            let base = name.trim_end_matches(|c: char| c.is_ascii_digit());
            out.insert((player, base.to_string(), idx, again(vec!["Add"])));
        }
        "forEach Piece" => {
            for (base, owner, rule) in &game.pieces {
                if let (true, Some(r)) = (owners(owner, game.players).contains(&player), rule) {
                    enumerate(game, *r, player, Some(base), out);
                }
            }
        }
        "if" => {
            for k in 1..node.args().len() {
                enumerate(game, index_of_child(&game.nodes, idx, k), player, piece, out);
            }
        }
        "or" => {
            for k in 0..node.args().len() {
                enumerate(game, index_of_child(&game.nodes, idx, k), player, piece, out);
            }
        }
        other => panic!("oracle does not know `{other}`"),
    }
}

fn source_text(node: &RawNode) -> String {
    ludeme_manual::sexpr::print_canonical(node)
}

fn raw_signatures(text: &str) -> BTreeSet<RawSig> {
    let game = raw_game(text);
    let mut out = BTreeSet::new();
    for p in 1..=game.players {
        enumerate(&game, game.play, p, None, &mut out);
    }
    out
}

/// Compare discovered signatures with the oracle's. When the mover is dropped,
/// dropping it from the oracle set must lose no information.
fn matches_oracle(found: &[MoveSignature], oracle: &BTreeSet<RawSig>) -> Result<(), String> {
    let found: BTreeSet<(Option<u8>, String, usize, Vec<&str>)> = found
        .iter()
        .map(|s| {
            (
                s.mover.map(|p| p.0),
                s.piece.clone().unwrap_or_default(),
                s.origin.0,
                s.action_types.iter().map(|t| t.name()).collect(),
            )
        })
        .collect();
    let with_mover = found.iter().all(|s| s.0.is_some());
    let expected: BTreeSet<(Option<u8>, String, usize, Vec<&str>)> =
        oracle.iter().map(|(p, b, o, a)| (with_mover.then_some(*p), b.clone(), *o, a.clone())).collect();
    check(with_mover || expected.len() == oracle.len(), "dropping the mover merges distinct oracle moves")?;
    check(found == expected, format!("found {found:?}, oracle {expected:?}"))
}

fn criterion_3() -> Outcome_ {
    let start = Instant::now();
    let mut counts = Vec::new();
    for (file, want) in [("TicTacToe.lud", 2), ("Amazons.lud", 4)] {
        let spec = spec(file);
        let traces = run_playouts(&spec, 0, 100, false).map_err(|e| e.to_string())?;
        let distinct = collect_distinct(&traces, &spec).map_err(|e| e.to_string())?;
        let oracle = raw_signatures(&source(file));
        check(oracle.len() == want, format!("{file}: oracle enumerates {}", oracle.len()))?;
        check(distinct.len() == want, format!("{file}: {} distinct moves", distinct.len()))?;
        let sigs: Vec<MoveSignature> = distinct.into_iter().map(|d| d.signature).collect();
        matches_oracle(&sigs, &oracle).map_err(|e| format!("{file}: {e}"))?;
        counts.push(format!("{file}={want}"));
    }
    let elapsed = start.elapsed();
    check(elapsed < CRITERION_3_LIMIT, format!("took {elapsed:?}"))?;
    Ok(format!("{} matching the oracle, in {elapsed:?} (limit {CRITERION_3_LIMIT:?})", counts.join(", ")))
}

// ---------------------------------------------------------------------------
// 4: endings

const TTT_LINES: [[&str; 3]; 8] = [
    ["A1", "B1", "C1"],
    ["A2", "B2", "C2"],
    ["A3", "B3", "C3"],
    ["A1", "A2", "A3"],
    ["B1", "B2", "B3"],
    ["C1", "C2", "C3"],
    ["A1", "B2", "C3"],
    ["C1", "B2", "A3"],
];

/// Brute-force: is there a full line of one owner through `last`?
fn ttt_line_oracle(spec: &GameSpec, state: &GameState, last: &str) -> bool {
    let owner = |l: &str| state.contents[spec.board.find(l).unwrap().0].map(|p| spec.piece(p).owner);
    let Some(me) = owner(last) else { return false };
    TTT_LINES.iter().any(|line| line.contains(&last) && line.iter().all(|&s| owner(s) == Some(me)))
}

fn criterion_4() -> Outcome_ {
    let ttt = spec("TicTacToe.lud");
    let traces = run_playouts(&ttt, 0, 100, false).map_err(|e| e.to_string())?;
    let endings = collect_endings(&traces, &ttt).map_err(|e| e.to_string())?;
    let keys: Vec<(Outcome, Vec<PlayerId>, bool)> =
        endings.iter().map(|e| (e.key.outcome, e.key.players.clone(), e.key.end.is_some())).collect();
    let want = vec![
        (Outcome::Win, vec![PlayerId(1)], true),
        (Outcome::Win, vec![PlayerId(2)], true),
        (Outcome::Draw, vec![PlayerId(1), PlayerId(2)], false),
    ];
    check(keys == want, format!("endings {keys:?}"))?;
    for e in &endings {
        let trace = traces.iter().find(|t| t.seed == e.seed).unwrap();
        let state = replay(&ttt, &trace.moves).map_err(|e| e.to_string())?;
        let last = trace.moves.last().unwrap();
        let label = ttt.board.label(last.to.unwrap()).to_string();
        match e.key.end {
            Some(end) => {
                let rule = ttt.end.iter().find(|r| r.id == end).unwrap();
                let ctx = EvalContext { mover: last.mover, last_to: last.to };
                let holds = eval_condition(&ttt, rule.condition.id(), &state, &ctx).map_err(|e| e.to_string())?;
                check(holds, format!("seed {}: end condition false on replay", e.seed))?;
                check(ttt_line_oracle(&ttt, &state, &label), format!("seed {}: oracle sees no line", e.seed))?;
            }
            None => {
                check(state.occupied() == 9, format!("seed {}: draw before the board is full", e.seed))?;
                check(!ttt_line_oracle(&ttt, &state, &label), format!("seed {}: draw with a line", e.seed))?;
            }
        }
    }

    let hex = spec("Hex.lud");
    let traces = run_playouts(&hex, 0, 50, false).map_err(|e| e.to_string())?;
    let draws = traces.iter().filter(|t| t.outcome.outcome != Outcome::Win).count();
    check(draws == 0, format!("{draws} Hex playouts did not end in a win"))?;
    let hex_endings = collect_endings(&traces, &hex).map_err(|e| e.to_string())?;
    Ok(format!("Tic-Tac-Toe: 3 endings re-evaluated true; Hex: 50/50 wins, {} ending kinds", hex_endings.len()))
}

// ---------------------------------------------------------------------------
// 5: oracle equivalence for lines and connections

const HEX_N: usize = 11;
const HEX_NEIGHBOURS: [(isize, isize); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1)];

fn hex_label(q: usize, r: usize) -> String {
    format!("{}{}", (b'A' + q as u8) as char, r + 1)
}

/// Depth-first search over a q/r grid of owners.
fn hex_oracle(grid: &[[u8; HEX_N]; HEX_N], who: u8) -> bool {
    let starts: Vec<(usize, usize)> =
        (0..HEX_N).map(|i| if who == 1 { (i, 0) } else { (0, i) }).filter(|&(q, r)| grid[q][r] == who).collect();
    let goal = |q: usize, r: usize| if who == 1 { r == HEX_N - 1 } else { q == HEX_N - 1 };
    let mut seen = [[false; HEX_N]; HEX_N];
    let mut stack = starts;
    while let Some((q, r)) = stack.pop() {
        if seen[q][r] {
            continue;
        }
        seen[q][r] = true;
        if goal(q, r) {
            return true;
        }
        for (dq, dr) in HEX_NEIGHBOURS {
            let (nq, nr) = (q as isize + dq, r as isize + dr);
            if (0..HEX_N as isize).contains(&nq) && (0..HEX_N as isize).contains(&nr) {
                let (nq, nr) = (nq as usize, nr as usize);
                if grid[nq][nr] == who && !seen[nq][nr] {
                    stack.push((nq, nr));
                }
            }
        }
    }
    false
}

fn criterion_5() -> Outcome_ {
    let start = Instant::now();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(20240501);

    let ttt = spec("TicTacToe.lud");
    let line = ttt.end[0].condition.id();
    let pieces = [ttt.find_piece("Disc1").unwrap(), ttt.find_piece("Cross2").unwrap()];
    let mut positives = 0;
    for i in 0..10_000 {
        let mut state = initial_state(&ttt).unwrap();
        for cell in state.contents.iter_mut() {
            *cell = match rng.random_range(0..3) {
                0 => None,
                k => Some(pieces[k - 1]),
            };
        }
        let occupied: Vec<usize> = (0..9).filter(|&s| state.contents[s].is_some()).collect();
        if occupied.is_empty() {
            continue;
        }
        let last = SiteId(occupied[rng.random_range(0..occupied.len())]);
        let mover = match state.contents[last.0] {
            Some(p) if p == pieces[0] => PlayerId(1),
            _ => PlayerId(2),
        };
        let engine = eval_condition(&ttt, line, &state, &EvalContext { mover, last_to: Some(last) })
            .map_err(|e| e.to_string())?;
        let oracle = ttt_line_oracle(&ttt, &state, ttt.board.label(last));
        check(engine == oracle, format!("line disagreement on state {i}"))?;
        positives += usize::from(oracle);
    }

    let hex = spec("Hex.lud");
    let connected = hex.end[0].condition.id();
    let markers = [hex.find_piece("Marker1").unwrap(), hex.find_piece("Marker2").unwrap()];
    let mut hex_positives = 0;
    for i in 0..1_000 {
        let density = if i % 2 == 0 { 1.0 } else { rng.random_range(0.3..1.0) };
        let mut grid = [[0u8; HEX_N]; HEX_N];
        let mut state = initial_state(&hex).unwrap();
        for (q, col) in grid.iter_mut().enumerate() {
            for (r, cell) in col.iter_mut().enumerate() {
                let roll: f64 = rng.random();
                *cell = if roll < density / 2.0 {
                    1
                } else if roll < density {
                    2
                } else {
                    0
                };
                let site = hex.board.find(&hex_label(q, r)).unwrap();
                state.contents[site.0] = (*cell > 0).then(|| markers[*cell as usize - 1]);
            }
        }
        let mut winners = 0;
        for who in [1u8, 2] {
            let ctx = EvalContext { mover: PlayerId(who), last_to: None };
            let engine = eval_condition(&hex, connected, &state, &ctx).map_err(|e| e.to_string())?;
            let oracle = hex_oracle(&grid, who);
            check(engine == oracle, format!("connection disagreement on fill {i} for P{who}"))?;
            winners += usize::from(oracle);
        }
        // A full Hex board always has exactly one connected player.
        check(density < 1.0 || winners == 1, format!("full fill {i} has {winners} winners"))?;
        hex_positives += winners;
    }
    let elapsed = start.elapsed();
    check(elapsed < CRITERION_5_LIMIT, format!("took {elapsed:?}"))?;
    Ok(format!(
        "0 disagreements ({positives}/10000 lines, {hex_positives}/2000 connections) in {elapsed:?} (limit {CRITERION_5_LIMIT:?})"
    ))
}

// ---------------------------------------------------------------------------
// 6-8: generated output trees

const GAMES: [&str; 4] = ["TicTacToe.lud", "Hex.lud", "Amazons.lud", "Breakthrough.lud"];

fn generate(out: &Path, parallel: bool) -> Result<(), String> {
    let mut config = RunConfig::new(Mode::Generate, GAMES.iter().map(|g| corpus_path(g)).collect());
    config.out = Some(out.to_path_buf());
    config.parallel = parallel;
    config.json = true;
    let (mut o, mut e) = (Vec::new(), Vec::new());
    match run(&config, &mut o, &mut e) {
        0 => Ok(()),
        code => Err(format!("generate exit {code}: {}", String::from_utf8_lossy(&e))),
    }
}

fn files(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

fn tree_hash(dir: &Path) -> String {
    let mut h = Sha256::new();
    for f in files(dir) {
        h.update(f.strip_prefix(dir).unwrap().to_string_lossy().as_bytes());
        h.update([0]);
        h.update(fs::read(&f).unwrap());
        h.update([0]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn criterion_6(trees: &[PathBuf; 3]) -> Outcome_ {
    let hashes: Vec<String> = trees.iter().map(|t| tree_hash(t)).collect();
    check(hashes[0] == hashes[1], "sequential runs differ")?;
    check(hashes[0] == hashes[2], "parallel run differs from sequential")?;
    Ok(format!("3 runs (2 sequential, 1 parallel), {} files, hash {}", files(&trees[0]).len(), &hashes[0][..16]))
}

fn count_class(svg: &str, class: &str) -> Result<usize, String> {
    let doc = roxmltree::Document::parse(svg).map_err(|e| e.to_string())?;
    Ok(doc.descendants().filter(|n| n.attribute("class") == Some(class)).count())
}

fn criterion_7(tree: &Path) -> Outcome_ {
    let bt = spec("Breakthrough.lud");
    let traces = run_playouts(&bt, 0, 100, false).map_err(|e| e.to_string())?;
    let distinct = collect_distinct(&traces, &bt).map_err(|e| e.to_string())?;
    let step = distinct.iter().find(|d| d.signature.action_types.len() == 1).ok_or("no plain Breakthrough step")?;
    let trace = traces.iter().find(|t| t.seed == step.exemplar.seed).unwrap();
    let state = replay(&bt, &trace.moves[..step.exemplar.index]).map_err(|e| e.to_string())?;
    let (before, _) = render_move_pair(&bt, &state, &trace.moves[step.exemplar.index], HighlightMode::SelectedOnly)
        .map_err(|e| e.to_string())?;
    let arrows = count_class(&before, "highlight arrow red")?;
    check(arrows == 1, format!("{arrows} red arrows in the Breakthrough before image"))?;

    let ttt = spec("TicTacToe.lud");
    let traces = run_playouts(&ttt, 0, 100, false).map_err(|e| e.to_string())?;
    let endings = collect_endings(&traces, &ttt).map_err(|e| e.to_string())?;
    let win = endings.iter().find(|e| e.key.outcome == Outcome::Win).ok_or("no win")?;
    let trace = traces.iter().find(|t| t.seed == win.seed).unwrap();
    let (before, after) = render_ending_pair(&ttt, trace).map_err(|e| e.to_string())?;
    let green = count_class(&after, "highlight dot green")?;
    let red = count_class(&before, "highlight dot red")?;
    check(green == 3, format!("{green} green dots after the winning move"))?;
    check(red == 1, format!("{red} red dots before the winning move"))?;

    let mut svgs = 0;
    for f in files(tree).into_iter().filter(|f| f.extension().is_some_and(|e| e == "svg")) {
        roxmltree::Document::parse(&fs::read_to_string(&f).unwrap()).map_err(|e| format!("{}: {e}", f.display()))?;
        svgs += 1;
    }
    Ok(format!("1 red arrow; 3 green + 1 red dot; {svgs} SVGs well-formed"))
}

fn criterion_8(tree: &Path) -> Outcome_ {
    let mut summary = Vec::new();
    for file in GAMES {
        let spec = spec(file);
        let dir = tree.join(game_dir_name(&spec.name));
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.join("manual.json")).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        let titles: Vec<&str> =
            json["sections"].as_array().ok_or("no sections")?.iter().filter_map(|s| s["title"].as_str()).collect();
        check(titles == SECTIONS, format!("{file}: sections {titles:?}"))?;
        let traces = run_playouts(&spec, 0, 100, false).map_err(|e| e.to_string())?;
        let distinct = collect_distinct(&traces, &spec).map_err(|e| e.to_string())?;
        let leaves = json_leaves(&json);
        check(
            leaves.len() == distinct.len(),
            format!("{file}: {} leaves for {} signatures", leaves.len(), distinct.len()),
        )?;
        let leaf_sigs: BTreeSet<&str> = leaves.iter().filter_map(|l| l["signature"].as_str()).collect();
        let want: Vec<String> = distinct.iter().map(|d| d.signature.canonical()).collect();
        check(
            leaf_sigs.len() == want.len() && want.iter().all(|w| leaf_sigs.contains(w.as_str())),
            format!("{file}: leaf signatures differ"),
        )?;
        for leaf in &leaves {
            for side in ["before", "after"] {
                let src = leaf[side].as_str().unwrap_or_default();
                check(!src.starts_with('/') && dir.join(src).is_file(), format!("{file}: missing {src}"))?;
            }
        }
        let html = fs::read_to_string(dir.join("manual.html")).map_err(|e| e.to_string())?;
        let doc = roxmltree::Document::parse_with_options(
            &html,
            roxmltree::ParsingOptions { allow_dtd: true, ..Default::default() },
        )
        .map_err(|e| format!("{file}: {e}"))?;
        let h2: Vec<&str> = doc.descendants().filter(|n| n.has_tag_name("h2")).filter_map(|n| n.text()).collect();
        check(h2 == SECTIONS, format!("{file}: headings {h2:?}"))?;
        summary.push(format!("{}={}", spec.name, leaves.len()));
    }
    Ok(format!("five sections in order; leaves {}", summary.join(", ")))
}

// ---------------------------------------------------------------------------
// 9: strategy golden

const CHESS_LIKE: &str = r#"(game "Pieces" (players 2)
    (equipment { (board (square 8))
        (piece "Pawn" Each) (piece "Rook" Each) (piece "Bishop" Each)
        (piece "Knight" Each) (piece "Queen" Each) })
    (rules (play (move Add (to (sites Empty))))))"#;

const HEURISTICS: &str = r#"(heuristics {
    (material "Pawn" 0.1)
    (material "Rook" 0.5)
    (material "Bishop" 0.3)
    (material "Knight" 0.25)
    (material "Queen" 1.0)
})"#;

const STRATEGY: [&str; 5] = [
    "Try to maximise the number of Pawn(s) you control (very low importance)",
    "Try to maximise the number of Rook(s) you control (moderate importance)",
    "Try to maximise the number of Bishop(s) you control (low importance)",
    "Try to maximise the number of Knight(s) you control (low importance)",
    "Try to maximise the number of Queen(s) you control (very high importance)",
];

fn criterion_9() -> Outcome_ {
    let spec = compile(&parse(CHESS_LIKE).unwrap()).unwrap();
    let entries = parse_heuristics(HEURISTICS).map_err(|e| e.to_string())?;
    let lines = explain_heuristics(&entries, &spec).map_err(|e| e.to_string())?;
    check(lines == STRATEGY, format!("lines {lines:#?}"))?;
    Ok("five lines match".into())
}

fn main() {
    let tmp = tempfile::tempdir().unwrap();
    let trees = [tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c")];
    let generated =
        generate(&trees[0], false).and_then(|_| generate(&trees[1], false)).and_then(|_| generate(&trees[2], true));

    let on_trees = |f: &dyn Fn() -> Outcome_| match &generated {
        Ok(()) => f(),
        Err(e) => Err(e.clone()),
    };
    let results: Vec<(&str, Outcome_)> = vec![
        ("1 golden translation, Tic-Tac-Toe", criterion_1()),
        ("2 golden translations, Hex and Amazons", criterion_2()),
        ("3 taxonomy counts", criterion_3()),
        ("4 endings coverage", criterion_4()),
        ("5 oracle equivalence", criterion_5()),
        ("6 determinism", on_trees(&|| criterion_6(&trees))),
        ("7 renderer structure", on_trees(&|| criterion_7(&trees[0]))),
        ("8 manual structure", on_trees(&|| criterion_8(&trees[0]))),
        ("9 strategy golden", criterion_9()),
    ];

    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
