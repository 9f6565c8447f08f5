use ludeme_manual::compiler::compile;
use ludeme_manual::english::translate_game;
use ludeme_manual::sexpr::parse;

pub fn normalise(text: &str) -> String {
    text.lines()
        .map(|l| l.split(' ').filter(|w| !w.is_empty()).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
        .trim()
        .to_string()
}

fn translate(source: &str) -> String {
    translate_game(&compile(&parse(source).unwrap()).unwrap()).unwrap()
}

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

#[test]
fn tic_tac_toe_translation() {
    assert_eq!(normalise(&translate(include_str!("../../../corpus/TicTacToe.lud"))), normalise(TIC_TAC_TOE));
}

#[test]
fn hex_translation() {
    assert_eq!(normalise(&translate(include_str!("../../../corpus/Hex.lud"))), normalise(HEX));
}

#[test]
fn amazons_translation() {
    assert_eq!(normalise(&translate(include_str!("../../../corpus/Amazons.lud"))), normalise(AMAZONS));
}

#[test]
fn breakthrough_translation() {
    let text = translate(include_str!("../../../corpus/Breakthrough.lud"));
    assert!(
        text.contains(
            "Pawns either step from the location of the piece in the forward direction to the set of empty cells"
        ),
        "{text}"
    );
    assert!(text.contains("RegionP1: the N side for P1"), "{text}");
    assert!(text.contains("Place a Pawn for player one on sites: row 1 and row 2."), "{text}");
}
