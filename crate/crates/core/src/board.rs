//! Board graphs: sites, coordinate labels and directional adjacency.
//!
//! Sites are indexed row-major from the bottom-left corner, so `A1` is site 0.
//! Labels are a column letter followed by a 1-based row number.
//!
//! A hex diamond board uses axial coordinates (column, row) with the six
//! neighbour offsets E(+1,0), W(-1,0), NE(0,+1), SW(0,-1), NW(-1,+1) and
//! SE(+1,-1). Its four sides are named SW (row 1), NE (last row), NW
//! (column A) and SE (last column).

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SiteId(pub usize);

impl fmt::Display for SiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

impl Dir {
    pub const ALL: [Dir; 8] = [Dir::N, Dir::NE, Dir::E, Dir::SE, Dir::S, Dir::SW, Dir::W, Dir::NW];

    pub fn opposite(self) -> Dir {
        Dir::ALL[(self as usize + 4) % 8]
    }

    pub fn from_symbol(s: &str) -> Option<Dir> {
        Some(match s {
            "N" => Dir::N,
            "NE" => Dir::NE,
            "E" => Dir::E,
            "SE" => Dir::SE,
            "S" => Dir::S,
            "SW" => Dir::SW,
            "W" => Dir::W,
            "NW" => Dir::NW,
            _ => return None,
        })
    }

    fn is_diagonal(self) -> bool {
        matches!(self, Dir::NE | Dir::SE | Dir::SW | Dir::NW)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shape {
    Square(usize),
    Rectangle { rows: usize, cols: usize },
    HexDiamond(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tiling {
    Square,
    Hexagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirClass {
    Orthogonal,
    Diagonal,
    Adjacent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Site {
    pub label: String,
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone)]
pub struct BoardGraph {
    pub shape: Shape,
    pub rows: usize,
    pub cols: usize,
    pub sites: Vec<Site>,
    steps: Vec<[Option<SiteId>; 8]>,
}

/// Spreadsheet-style column letters: A..Z, AA, AB, ...
pub fn column_letters(mut col: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (col % 26) as u8);
        if col < 26 {
            break;
        }
        col = col / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ASCII letters")
}

fn offset(tiling: Tiling, dir: Dir) -> Option<(isize, isize)> {
    // (d_col, d_row)
    match tiling {
        Tiling::Square => Some(match dir {
            Dir::N => (0, 1),
            Dir::NE => (1, 1),
            Dir::E => (1, 0),
            Dir::SE => (1, -1),
            Dir::S => (0, -1),
            Dir::SW => (-1, -1),
            Dir::W => (-1, 0),
            Dir::NW => (-1, 1),
        }),
        Tiling::Hexagonal => match dir {
            Dir::E => Some((1, 0)),
            Dir::W => Some((-1, 0)),
            Dir::NE => Some((0, 1)),
            Dir::SW => Some((0, -1)),
            Dir::NW => Some((-1, 1)),
            Dir::SE => Some((1, -1)),
            Dir::N | Dir::S => None,
        },
    }
}

impl BoardGraph {
    pub fn new(shape: Shape) -> BoardGraph {
        let (rows, cols) = match shape {
            Shape::Square(n) | Shape::HexDiamond(n) => (n, n),
            Shape::Rectangle { rows, cols } => (rows, cols),
        };
        let tiling = match shape {
            Shape::HexDiamond(_) => Tiling::Hexagonal,
            _ => Tiling::Square,
        };
        let mut sites = Vec::with_capacity(rows * cols);
        let mut steps = Vec::with_capacity(rows * cols);
        for row in 0..rows {
            for col in 0..cols {
                sites.push(Site { label: format!("{}{}", column_letters(col), row + 1), row, col });
                let mut table = [None; 8];
                for dir in Dir::ALL {
                    if let Some((dc, dr)) = offset(tiling, dir) {
                        let (c, r) = (col as isize + dc, row as isize + dr);
                        if (0..cols as isize).contains(&c) && (0..rows as isize).contains(&r) {
                            table[dir as usize] = Some(SiteId(r as usize * cols + c as usize));
                        }
                    }
                }
                steps.push(table);
            }
        }
        BoardGraph { shape, rows, cols, sites, steps }
    }

    pub fn tiling(&self) -> Tiling {
        match self.shape {
            Shape::HexDiamond(_) => Tiling::Hexagonal,
            _ => Tiling::Square,
        }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn site_ids(&self) -> impl Iterator<Item = SiteId> {
        (0..self.sites.len()).map(SiteId)
    }

    pub fn site(&self, id: SiteId) -> &Site {
        &self.sites[id.0]
    }

    pub fn label(&self, id: SiteId) -> &str {
        &self.sites[id.0].label
    }

    pub fn find(&self, label: &str) -> Option<SiteId> {
        self.sites.iter().position(|s| s.label == label).map(SiteId)
    }

    pub fn at(&self, col: usize, row: usize) -> Option<SiteId> {
        (col < self.cols && row < self.rows).then(|| SiteId(row * self.cols + col))
    }

    pub fn step(&self, from: SiteId, dir: Dir) -> Option<SiteId> {
        self.steps[from.0][dir as usize]
    }

    /// Directions that exist on this tiling, in canonical order.
    pub fn directions(&self, class: DirClass) -> Vec<Dir> {
        let tiling = self.tiling();
        Dir::ALL
            .into_iter()
            .filter(|&d| offset(tiling, d).is_some())
            .filter(|&d| match (tiling, class) {
                (_, DirClass::Adjacent) => true,
                (Tiling::Hexagonal, DirClass::Orthogonal) => true,
                (Tiling::Hexagonal, DirClass::Diagonal) => false,
                (Tiling::Square, DirClass::Orthogonal) => !d.is_diagonal(),
                (Tiling::Square, DirClass::Diagonal) => d.is_diagonal(),
            })
            .collect()
    }

    pub fn neighbours(&self, site: SiteId, class: DirClass) -> Vec<SiteId> {
        self.directions(class).into_iter().filter_map(|d| self.step(site, d)).collect()
    }

    /// Line axes: one representative per pair of opposite directions.
    pub fn axes(&self) -> Vec<Dir> {
        match self.tiling() {
            Tiling::Square => vec![Dir::E, Dir::N, Dir::NE, Dir::NW],
            Tiling::Hexagonal => vec![Dir::E, Dir::NE, Dir::NW],
        }
    }

    /// Forward, forward-left and forward-right for a player (1-based).
    /// Odd players face north (NE on hex boards), even players face south.
    pub fn forward(&self, player: u8) -> (Dir, Dir, Dir) {
        let north = player % 2 == 1;
        match (self.tiling(), north) {
            (Tiling::Square, true) => (Dir::N, Dir::NW, Dir::NE),
            (Tiling::Square, false) => (Dir::S, Dir::SE, Dir::SW),
            (Tiling::Hexagonal, true) => (Dir::NE, Dir::NW, Dir::E),
            (Tiling::Hexagonal, false) => (Dir::SW, Dir::SE, Dir::W),
        }
    }

    /// Sites along a named side; `None` when the side does not exist for this tiling.
    pub fn side(&self, name: &str) -> Option<Vec<SiteId>> {
        let (rows, cols) = (self.rows, self.cols);
        let pick = |f: &dyn Fn(&Site) -> bool| -> Vec<SiteId> {
            self.sites.iter().enumerate().filter(|(_, s)| f(s)).map(|(i, _)| SiteId(i)).collect()
        };
        match (self.tiling(), name) {
            (Tiling::Square, "N") | (Tiling::Hexagonal, "NE") => Some(pick(&|s| s.row == rows - 1)),
            (Tiling::Square, "S") | (Tiling::Hexagonal, "SW") => Some(pick(&|s| s.row == 0)),
            (Tiling::Square, "E") | (Tiling::Hexagonal, "SE") => Some(pick(&|s| s.col == cols - 1)),
            (Tiling::Square, "W") | (Tiling::Hexagonal, "NW") => Some(pick(&|s| s.col == 0)),
            _ => None,
        }
    }

    /// Sites of a 1-based row.
    pub fn row(&self, row: usize) -> Option<Vec<SiteId>> {
        (1..=self.rows).contains(&row).then(|| (0..self.cols).map(|c| SiteId((row - 1) * self.cols + c)).collect())
    }
}
