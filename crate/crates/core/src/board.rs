//! N-player Clobber on undirected graphs.
//!
//! A vertex holds `0` (empty) or the number of the player owning the token on
//! it. A move takes one of the mover's tokens onto an adjacent vertex holding
//! a token of any other player; the captured token leaves the game. A player
//! with no legal move is skipped, and the last player to move wins.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Maximum number of players a board string can describe (one digit per cell).
pub const MAX_PLAYERS: u8 = 9;

/// Player number, `1..=N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Player(u8);

impl Player {
    pub fn new(id: u8, players: u8) -> Result<Self> {
        if players < 2 || players > MAX_PLAYERS {
            return Err(Error::PlayerCount(players));
        }
        if id == 0 || id > players {
            return Err(Error::PlayerOutOfRange { id, players });
        }
        Ok(Player(id))
    }

    /// Builds a player id without range checks against N.
    ///
    /// # Panics
    /// Panics on id 0.
    pub const fn from_index(id: u8) -> Self {
        assert!(id != 0, "player ids start at 1");
        Player(id)
    }

    pub const fn id(self) -> u8 {
        self.0
    }

    /// The player succeeding `self` in turn order.
    pub fn next(self, players: u8) -> Player {
        if self.0 >= players {
            Player(1)
        } else {
            Player(self.0 + 1)
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shape used when reading a board string.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Line,
    Grid { rows: usize, cols: usize },
}

/// Symmetric, irreflexive adjacency over `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoardGraph {
    neighbors: Vec<Vec<usize>>,
}

impl BoardGraph {
    /// Path graph `0 - 1 - ... - (n-1)`.
    pub fn line(n: usize) -> Self {
        let neighbors = (0..n)
            .map(|k| {
                let mut adj = Vec::with_capacity(2);
                if k > 0 {
                    adj.push(k - 1);
                }
                if k + 1 < n {
                    adj.push(k + 1);
                }
                adj
            })
            .collect();
        BoardGraph { neighbors }
    }

    /// Rook-adjacency grid, vertices numbered row-major.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut neighbors = vec![Vec::new(); rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                let adj = &mut neighbors[v];
                if r > 0 {
                    adj.push(v - cols);
                }
                if c > 0 {
                    adj.push(v - 1);
                }
                if c + 1 < cols {
                    adj.push(v + 1);
                }
                if r + 1 < rows {
                    adj.push(v + cols);
                }
            }
        }
        BoardGraph { neighbors }
    }

    /// Builds a graph from an edge list, rejecting self-loops and out-of-range vertices.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptyBoard);
        }
        let mut neighbors = vec![Vec::new(); vertex_count];
        for &(a, b) in edges {
            if a == b || a >= vertex_count || b >= vertex_count {
                return Err(Error::BadEdge(a, b));
            }
            if !neighbors[a].contains(&b) {
                neighbors[a].push(b);
                neighbors[b].push(a);
            }
        }
        for adj in &mut neighbors {
            adj.sort_unstable();
        }
        Ok(BoardGraph { neighbors })
    }

    pub fn vertex_count(&self) -> usize {
        self.neighbors.len()
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors.get(a).is_some_and(|adj| adj.contains(&b))
    }
}

/// Cell contents indexed by vertex: 0 is empty, `i >= 1` a token of player `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occupancy(Box<[u8]>);

impl Occupancy {
    pub fn new(cells: Vec<u8>, players: u8) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::EmptyBoard);
        }
        if let Some(&bad) = cells.iter().find(|&&c| c > players) {
            return Err(Error::CellOutOfRange { cell: bad, players });
        }
        Ok(Occupancy(cells.into_boxed_slice()))
    }

    pub(crate) fn from_cells_unchecked(cells: Box<[u8]>) -> Self {
        Occupancy(cells)
    }

    pub fn cells(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.0.iter().filter(|&&c| c != 0).count()
    }

    /// Cell sequence in reverse order (the mirror image of a line board).
    pub fn reversed(&self) -> Occupancy {
        let mut cells = self.0.clone();
        cells.reverse();
        Occupancy(cells)
    }
}

impl fmt::Display for Occupancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in self.0.iter() {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub from: usize,
    pub to: usize,
}

impl Move {
    pub fn new(from: usize, to: usize) -> Self {
        Move { from, to }
    }
}

/// Reads a board string of digits into a graph and its occupancy.
pub fn parse_board(text: &str, shape: Shape, players: u8) -> Result<(BoardGraph, Occupancy)> {
    if !(2..=MAX_PLAYERS).contains(&players) {
        return Err(Error::PlayerCount(players));
    }
    let cells = text
        .chars()
        .map(|ch| {
            ch.to_digit(10)
                .map(|d| d as u8)
                .ok_or_else(|| Error::BadBoardChar(ch))
        })
        .collect::<Result<Vec<u8>>>()?;
    let graph = match shape {
        Shape::Line => BoardGraph::line(cells.len()),
        Shape::Grid { rows, cols } => {
            if rows * cols != cells.len() {
                return Err(Error::ShapeMismatch {
                    expected: rows * cols,
                    found: cells.len(),
                });
            }
            BoardGraph::grid(rows, cols)
        }
    };
    let occupancy = Occupancy::new(cells, players)?;
    Ok((graph, occupancy))
}

/// A Clobber ruleset instance: the board graph plus the number of players.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clobber {
    graph: Arc<BoardGraph>,
    players: u8,
}

impl Clobber {
    pub fn new(graph: BoardGraph, players: u8) -> Result<Self> {
        if !(2..=MAX_PLAYERS).contains(&players) {
            return Err(Error::PlayerCount(players));
        }
        Ok(Clobber {
            graph: Arc::new(graph),
            players,
        })
    }

    pub fn graph(&self) -> &BoardGraph {
        &self.graph
    }

    pub fn players(&self) -> u8 {
        self.players
    }

    /// All moves of `player`, ascending by `(from, to)`.
    pub fn legal_moves(&self, occupancy: &Occupancy, player: Player) -> Vec<Move> {
        let cells = occupancy.cells();
        let me = player.id();
        let mut moves = Vec::new();
        for (from, &c) in cells.iter().enumerate() {
            if c != me {
                continue;
            }
            for &to in self.graph.neighbors(from) {
                let target = cells[to];
                if target != 0 && target != me {
                    moves.push(Move { from, to });
                }
            }
        }
        moves
    }

    pub fn has_move(&self, occupancy: &Occupancy, player: Player) -> bool {
        let cells = occupancy.cells();
        let me = player.id();
        cells.iter().enumerate().any(|(from, &c)| {
            c == me
                && self
                    .graph
                    .neighbors(from)
                    .iter()
                    .any(|&to| cells[to] != 0 && cells[to] != me)
        })
    }

    /// Applies a move made by the owner of `mv.from`.
    pub fn apply_move(&self, occupancy: &Occupancy, mv: Move) -> Result<Occupancy> {
        let cells = occupancy.cells();
        let n = cells.len();
        if mv.from >= n || mv.to >= n || !self.graph.is_adjacent(mv.from, mv.to) {
            return Err(Error::IllegalMove(mv));
        }
        let mover = cells[mv.from];
        let target = cells[mv.to];
        if mover == 0 || target == 0 || target == mover {
            return Err(Error::IllegalMove(mv));
        }
        Ok(apply_unchecked(occupancy, mv))
    }

    /// First player after `after` in rotation (wrapping, `after` itself last) with a legal move.
    pub fn next_active_player(&self, occupancy: &Occupancy, after: Player) -> Option<Player> {
        let mut p = after;
        for _ in 0..self.players {
            p = p.next(self.players);
            if self.has_move(occupancy, p) {
                return Some(p);
            }
        }
        None
    }

    /// The player to act when it is nominally `mover`'s turn: `mover` itself
    /// if it can move, else the next player in rotation that can.
    pub fn active_from(&self, occupancy: &Occupancy, mover: Player) -> Option<Player> {
        let prev = if mover.id() == 1 {
            Player(self.players)
        } else {
            Player(mover.id() - 1)
        };
        self.next_active_player(occupancy, prev)
    }

    pub fn is_terminal(&self, occupancy: &Occupancy) -> bool {
        (1..=self.players).all(|id| !self.has_move(occupancy, Player(id)))
    }

    /// Occupancies reached by each legal move of `player`, in move order.
    pub fn successors(&self, occupancy: &Occupancy, player: Player) -> Vec<Occupancy> {
        self.legal_moves(occupancy, player)
            .into_iter()
            .map(|mv| apply_unchecked(occupancy, mv))
            .collect()
    }
}

fn apply_unchecked(occupancy: &Occupancy, mv: Move) -> Occupancy {
    let mut cells = occupancy.cells().to_vec().into_boxed_slice();
    cells[mv.to] = cells[mv.from];
    cells[mv.from] = 0;
    Occupancy::from_cells_unchecked(cells)
}

/// A board, its occupancy and the player whose turn it nominally is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Position {
    pub game: Clobber,
    pub occupancy: Occupancy,
    pub mover: Player,
}

impl Position {
    /// Line-board position from a digit string.
    pub fn line(text: &str, players: u8, mover: u8) -> Result<Self> {
        Self::parse(text, Shape::Line, players, mover)
    }

    pub fn parse(text: &str, shape: Shape, players: u8, mover: u8) -> Result<Self> {
        let (graph, occupancy) = parse_board(text, shape, players)?;
        Ok(Position {
            game: Clobber::new(graph, players)?,
            occupancy,
            mover: Player::new(mover, players)?,
        })
    }
}
