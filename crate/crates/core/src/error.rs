use thiserror::Error;

use crate::board::Move;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("number of players must be between 2 and 9, got {0}")]
    PlayerCount(u8),
    #[error("player {id} is out of range for {players} players")]
    PlayerOutOfRange { id: u8, players: u8 },
    #[error("board is empty")]
    EmptyBoard,
    #[error("invalid board character {0:?}")]
    BadBoardChar(char),
    #[error("cell value {cell} exceeds the number of players ({players})")]
    CellOutOfRange { cell: u8, players: u8 },
    #[error("board has {found} cells but the shape needs {expected}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("invalid edge ({0}, {1})")]
    BadEdge(usize, usize),
    #[error("illegal move {}->{}", .0.from, .0.to)]
    IllegalMove(Move),
    #[error("no initial move: no player can move in the starting position")]
    NoInitialMove,
    #[error("malformed value at byte {pos}: {msg}")]
    ValueSyntax { pos: usize, msg: String },
    #[error("simple values are only defined for three players")]
    NotThreePlayers,
    #[error("prudent evaluation produced a complex value at a child of {0}")]
    NonSimpleChild(String),
    #[error("simple values {0} span several preference groups")]
    MixedGroups(String),
}
