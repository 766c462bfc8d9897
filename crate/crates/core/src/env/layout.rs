//! Kitchen layouts: tile grids loaded from a one-character-per-tile text format.
//!
//! Legend:
//!
//! | char | tile                 |
//! |------|----------------------|
//! | `.`  | floor                |
//! | `#`  | counter              |
//! | `=`  | center counter       |
//! | `P`  | pan                  |
//! | `C`  | cutboard             |
//! | `B`  | bread station        |
//! | `M`  | beef (meat) station  |
//! | `L`  | lettuce station      |
//! | `D`  | plate (dish) station |
//! | `S`  | serve spot           |
//! | `F`  | fire extinguisher    |
//! | `1`  | agent spawn (floor)  |
//! | `2`  | human spawn (floor)  |
//!
//! A valid layout has a single connected floor region that encloses every
//! center-counter cell, so chefs can walk a full circuit around the middle.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Grid coordinate. `x` grows to the right, `y` grows downward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn step(self, dir: Direction) -> Cell {
        let (dx, dy) = dir.delta();
        Cell::new(self.x + dx, self.y + dy)
    }

    pub fn manhattan(self, other: Cell) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }

    /// Direction that leads from `self` to an orthogonally adjacent `other`.
    pub fn direction_to(self, other: Cell) -> Option<Direction> {
        Direction::ALL.into_iter().find(|d| self.step(*d) == other)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    /// Fixed order used for every tie-break in the crate.
    pub const ALL: [Direction; 4] = [Direction::Up, Direction::Down, Direction::Left, Direction::Right];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::Up => (0, -1),
            Direction::Down => (0, 1),
            Direction::Left => (-1, 0),
            Direction::Right => (1, 0),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TileKind {
    Floor,
    Counter,
    CenterCounter,
    PanStation,
    CutboardStation,
    BreadStation,
    BeefStation,
    LettuceStation,
    PlateStation,
    ServeSpot,
    ExtinguisherStation,
}

impl TileKind {
    /// Station kinds every playable layout must contain.
    pub const REQUIRED_STATIONS: [TileKind; 8] = [
        TileKind::PanStation,
        TileKind::CutboardStation,
        TileKind::BreadStation,
        TileKind::BeefStation,
        TileKind::LettuceStation,
        TileKind::PlateStation,
        TileKind::ServeSpot,
        TileKind::ExtinguisherStation,
    ];

    pub fn from_char(c: char) -> Option<TileKind> {
        Some(match c {
            '.' | '1' | '2' => TileKind::Floor,
            '#' => TileKind::Counter,
            '=' => TileKind::CenterCounter,
            'P' => TileKind::PanStation,
            'C' => TileKind::CutboardStation,
            'B' => TileKind::BreadStation,
            'M' => TileKind::BeefStation,
            'L' => TileKind::LettuceStation,
            'D' => TileKind::PlateStation,
            'S' => TileKind::ServeSpot,
            'F' => TileKind::ExtinguisherStation,
            _ => return None,
        })
    }

    pub fn to_char(self) -> char {
        match self {
            TileKind::Floor => '.',
            TileKind::Counter => '#',
            TileKind::CenterCounter => '=',
            TileKind::PanStation => 'P',
            TileKind::CutboardStation => 'C',
            TileKind::BreadStation => 'B',
            TileKind::BeefStation => 'M',
            TileKind::LettuceStation => 'L',
            TileKind::PlateStation => 'D',
            TileKind::ServeSpot => 'S',
            TileKind::ExtinguisherStation => 'F',
        }
    }

    /// Surfaces that hold one arbitrary item.
    pub fn is_counter(self) -> bool {
        matches!(self, TileKind::Counter | TileKind::CenterCounter)
    }

    /// Ingredient dispensers; they double as the bin for spoiled plates.
    pub fn is_ingredient_station(self) -> bool {
        matches!(self, TileKind::BreadStation | TileKind::BeefStation | TileKind::LettuceStation)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LayoutError {
    #[error("layout is empty")]
    Empty,
    #[error("non-rectangular grid: row {row} has {found} columns, expected {expected}")]
    NonRectangular { row: usize, expected: usize, found: usize },
    #[error("unknown character {ch:?} at row {row}, column {col}")]
    UnknownChar { row: usize, col: usize, ch: char },
    #[error("no floor ring")]
    NoFloorRing,
    #[error("missing required station {0:?}")]
    MissingStation(TileKind),
    #[error("missing spawn point '{0}'")]
    MissingSpawn(char),
    #[error("duplicate spawn point '{ch}' at row {row}, column {col}")]
    DuplicateSpawn { row: usize, col: usize, ch: char },
    #[error("floor cell at row {row}, column {col} is not connected to the rest of the floor")]
    DisconnectedFloor { row: usize, col: usize },
    #[error("center counter at row {row}, column {col} is not enclosed by the floor ring")]
    CenterNotEnclosed { row: usize, col: usize },
    #[error("station at row {row}, column {col} has no adjacent floor cell")]
    UnreachableStation { row: usize, col: usize },
}

/// A validated kitchen grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    width: usize,
    height: usize,
    tiles: Vec<TileKind>,
    spawn_points: [Cell; 2],
}

/// Bundled default layout.
pub const COUNTER_CIRCUIT: &str = include_str!("../../layouts/counter_circuit.layout");

impl Layout {
    pub fn counter_circuit() -> Layout {
        Layout::parse(COUNTER_CIRCUIT).expect("bundled layout is valid")
    }

    /// Parses and validates a layout file.
    pub fn parse(text: &str) -> Result<Layout, LayoutError> {
        let rows: Vec<&str> = text
            .lines()
            .map(|l| l.trim_end_matches('\r'))
            .filter(|l| !l.trim().is_empty())
            .collect();
        if rows.is_empty() {
            return Err(LayoutError::Empty);
        }
        let width = rows[0].chars().count();
        let height = rows.len();
        let mut tiles = Vec::with_capacity(width * height);
        let mut spawns: [Option<Cell>; 2] = [None, None];

        for (row, line) in rows.iter().enumerate() {
            let found = line.chars().count();
            if found != width {
                return Err(LayoutError::NonRectangular { row, expected: width, found });
            }
            for (col, ch) in line.chars().enumerate() {
                let kind = TileKind::from_char(ch).ok_or(LayoutError::UnknownChar { row, col, ch })?;
                if let Some(slot) = match ch {
                    '1' => Some(0),
                    '2' => Some(1),
                    _ => None,
                } {
                    if spawns[slot].is_some() {
                        return Err(LayoutError::DuplicateSpawn { row, col, ch });
                    }
                    spawns[slot] = Some(Cell::new(col as i32, row as i32));
                }
                tiles.push(kind);
            }
        }

        let layout_partial = |spawn_points| Layout { width, height, tiles: tiles.clone(), spawn_points };
        if !tiles.contains(&TileKind::Floor) {
            return Err(LayoutError::NoFloorRing);
        }
        for kind in TileKind::REQUIRED_STATIONS {
            if !tiles.contains(&kind) {
                return Err(LayoutError::MissingStation(kind));
            }
        }
        let spawn_points = [
            spawns[0].ok_or(LayoutError::MissingSpawn('1'))?,
            spawns[1].ok_or(LayoutError::MissingSpawn('2'))?,
        ];
        let layout = layout_partial(spawn_points);
        layout.check_topology()?;
        Ok(layout)
    }

    fn check_topology(&self) -> Result<(), LayoutError> {
        let floor: Vec<Cell> = self.floor_cells().collect();
        // Floor connectivity.
        let mut seen = vec![false; self.tiles.len()];
        let mut queue = VecDeque::from([floor[0]]);
        seen[self.index(floor[0])] = true;
        while let Some(c) = queue.pop_front() {
            for n in self.neighbors(c) {
                let i = self.index(n);
                if !seen[i] && self.tiles[i] == TileKind::Floor {
                    seen[i] = true;
                    queue.push_back(n);
                }
            }
        }
        if let Some(c) = floor.iter().find(|c| !seen[self.index(**c)]) {
            return Err(LayoutError::DisconnectedFloor { row: c.y as usize, col: c.x as usize });
        }

        // Every center counter must be cut off from the border by floor:
        // flood non-floor cells from the border and make sure none is reached.
        let centers: Vec<Cell> = self.cells_of(TileKind::CenterCounter).collect();
        if centers.is_empty() {
            return Err(LayoutError::NoFloorRing);
        }
        let mut outside = vec![false; self.tiles.len()];
        let mut queue = VecDeque::new();
        for c in self.all_cells() {
            let border = c.x == 0 || c.y == 0 || c.x as usize == self.width - 1 || c.y as usize == self.height - 1;
            if border && self.tile(c) != Some(TileKind::Floor) {
                outside[self.index(c)] = true;
                queue.push_back(c);
            }
        }
        while let Some(c) = queue.pop_front() {
            for n in self.neighbors(c) {
                let i = self.index(n);
                if !outside[i] && self.tiles[i] != TileKind::Floor {
                    outside[i] = true;
                    queue.push_back(n);
                }
            }
        }
        if let Some(c) = centers.iter().find(|c| outside[self.index(**c)]) {
            return Err(LayoutError::CenterNotEnclosed { row: c.y as usize, col: c.x as usize });
        }

        for c in self.all_cells() {
            let t = self.tiles[self.index(c)];
            if t != TileKind::Floor && t != TileKind::Counter && self.adjacent_floor(c).next().is_none() {
                return Err(LayoutError::UnreachableStation { row: c.y as usize, col: c.x as usize });
            }
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn spawn_points(&self) -> [Cell; 2] {
        self.spawn_points
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.x >= 0 && c.y >= 0 && (c.x as usize) < self.width && (c.y as usize) < self.height
    }

    fn index(&self, c: Cell) -> usize {
        c.y as usize * self.width + c.x as usize
    }

    pub fn tile(&self, c: Cell) -> Option<TileKind> {
        self.contains(c).then(|| self.tiles[self.index(c)])
    }

    pub fn is_floor(&self, c: Cell) -> bool {
        self.tile(c) == Some(TileKind::Floor)
    }

    /// Row-major iteration over every cell.
    pub fn all_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.height).flat_map(move |y| (0..self.width).map(move |x| Cell::new(x as i32, y as i32)))
    }

    pub fn cells_of(&self, kind: TileKind) -> impl Iterator<Item = Cell> + '_ {
        self.all_cells().filter(move |c| self.tile(*c) == Some(kind))
    }

    pub fn floor_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells_of(TileKind::Floor)
    }

    /// In-bounds orthogonal neighbours in `Direction::ALL` order.
    pub fn neighbors(&self, c: Cell) -> impl Iterator<Item = Cell> + '_ {
        Direction::ALL.into_iter().map(move |d| c.step(d)).filter(|n| self.contains(*n))
    }

    pub fn adjacent_floor(&self, c: Cell) -> impl Iterator<Item = Cell> + '_ {
        self.neighbors(c).filter(|n| self.is_floor(*n))
    }

    /// Renders the grid back to the file format (spawns included).
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity((self.width + 1) * self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                let c = Cell::new(x as i32, y as i32);
                let ch = if c == self.spawn_points[0] {
                    '1'
                } else if c == self.spawn_points[1] {
                    '2'
                } else {
                    self.tiles[self.index(c)].to_char()
                };
                out.push(ch);
            }
            out.push('\n');
        }
        out
    }

    /// Hex SHA-256 of the canonical text form.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

impl Serialize for Layout {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for Layout {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Layout::parse(&text).map_err(serde::de::Error::custom)
    }
}
