//! Memoized bottom-up evaluation of Clobber positions.
//!
//! A player with no legal move skips the turn, which wraps the rest of the
//! game in a singleton list. A move into a position where nobody can move is a
//! leaf won by the mover.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::board::{Clobber, Occupancy, Player, Position};
use crate::error::{Error, Result};
use crate::preference::{prudent_choice, PruneMode, Relations};
use crate::rewrite::{Normalizer, Profile};
use crate::value::{GameValue, SimpleValue};

/// How the players choose between options.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PreferenceMode {
    /// Full value tree, canonical form only.
    #[default]
    Raw,
    /// Value tree normalized with the syntactic rewrites.
    Syntactic,
    /// Selfish pruning at every node, then normalization.
    Selfish,
    /// Prudent pruning; always a single simple value for three players.
    Prudent,
    /// Indifferent pruning, reported relative to the starting player.
    Indifferent,
}

impl PreferenceMode {
    pub const ALL: [PreferenceMode; 5] = [
        PreferenceMode::Raw,
        PreferenceMode::Syntactic,
        PreferenceMode::Selfish,
        PreferenceMode::Prudent,
        PreferenceMode::Indifferent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PreferenceMode::Raw => "raw",
            PreferenceMode::Syntactic => "syntactic",
            PreferenceMode::Selfish => "selfish",
            PreferenceMode::Prudent => "prudent",
            PreferenceMode::Indifferent => "indifferent",
        }
    }

    fn needs_simple(self) -> bool {
        matches!(self, PreferenceMode::Prudent | PreferenceMode::Indifferent)
    }
}

impl fmt::Display for PreferenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PreferenceMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "raw" | "unsimplified" => Ok(PreferenceMode::Raw),
            "syntactic" => Ok(PreferenceMode::Syntactic),
            "selfish" => Ok(PreferenceMode::Selfish),
            "prudent" => Ok(PreferenceMode::Prudent),
            "indifferent" => Ok(PreferenceMode::Indifferent),
            _ => Err(format!("unknown mode {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EvalResult {
    Raw(GameValue),
    Simple(SimpleValue),
    /// Indifferent result seen from the starting player: whether the base is
    /// that player, and the exponent.
    Class { mine: bool, exponent: u32 },
}

impl EvalResult {
    pub fn as_value(&self) -> Option<&GameValue> {
        match self {
            EvalResult::Raw(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_simple(&self) -> Option<SimpleValue> {
        match self {
            EvalResult::Simple(s) => Some(*s),
            _ => None,
        }
    }

    /// The value tree, expanding simple values.
    pub fn to_value(&self) -> Option<GameValue> {
        match self {
            EvalResult::Raw(v) => Some(v.clone()),
            EvalResult::Simple(s) => Some(s.expand()),
            EvalResult::Class { .. } => None,
        }
    }
}

impl fmt::Display for EvalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalResult::Raw(v) => write!(f, "{v}"),
            EvalResult::Simple(s) => write!(f, "{s}"),
            EvalResult::Class { mine, exponent } => {
                let who = if *mine { "mine" } else { "other" };
                write!(f, "{who}_{exponent}")
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Tree(GameValue),
    Simple(SimpleValue),
}

/// Builds node values from option values under one preference mode.
struct Combiner {
    mode: PreferenceMode,
    normalizer: Normalizer,
    relations: Relations,
}

impl Combiner {
    fn new(mode: PreferenceMode, profile: Profile, players: u8) -> Result<Self> {
        if mode.needs_simple() && players != 3 {
            return Err(Error::NotThreePlayers);
        }
        Ok(Combiner {
            mode,
            normalizer: Normalizer::new(profile, players),
            relations: Relations::new(),
        })
    }

    fn leaf(&self, winner: Player) -> Node {
        if self.mode.needs_simple() {
            Node::Simple(SimpleValue {
                base: winner,
                exponent: 0,
            })
        } else {
            Node::Tree(GameValue::Leaf(winner))
        }
    }

    fn combine(&mut self, children: Vec<Node>, actor: Player, at: &dyn fmt::Display) -> Result<Node> {
        if self.mode.needs_simple() {
            let mut simples = Vec::with_capacity(children.len());
            for c in children {
                match c {
                    Node::Simple(s) => simples.push(s),
                    Node::Tree(_) => return Err(Error::NonSimpleChild(at.to_string())),
                }
            }
            simples.sort_unstable();
            simples.dedup();
            return Ok(Node::Simple(prudent_choice(&simples, actor)?));
        }
        let mut values: Vec<GameValue> = children
            .into_iter()
            .map(|c| match c {
                Node::Tree(v) => v,
                Node::Simple(s) => s.expand(),
            })
            .collect();
        values.sort_unstable();
        values.dedup();
        let value = match self.mode {
            PreferenceMode::Raw => GameValue::choice(values),
            PreferenceMode::Syntactic => self.normalizer.normalize_node(GameValue::choice(values)),
            PreferenceMode::Selfish => {
                let kept = self.relations.prune(&values, actor, PruneMode::Selfish);
                self.normalizer.normalize_node(GameValue::choice(kept))
            }
            PreferenceMode::Prudent | PreferenceMode::Indifferent => unreachable!(),
        };
        Ok(Node::Tree(value))
    }

    fn finish(&self, node: Node, start: Player) -> EvalResult {
        match (node, self.mode) {
            (Node::Simple(s), PreferenceMode::Indifferent) => EvalResult::Class {
                mine: s.base == start,
                exponent: s.exponent,
            },
            (Node::Simple(s), _) => EvalResult::Simple(s),
            (Node::Tree(v), _) => EvalResult::Raw(v),
        }
    }
}

/// Evaluator for one board graph and one preference mode. The cache maps
/// (occupancy, player nominally to move) to that position's value and is only
/// valid for this graph, mode and profile.
pub struct Solver {
    game: Clobber,
    combiner: Combiner,
    cache: HashMap<(Occupancy, Player), Node>,
}

impl Solver {
    pub fn new(game: Clobber, mode: PreferenceMode, profile: Profile) -> Result<Self> {
        let combiner = Combiner::new(mode, profile, game.players())?;
        Ok(Solver {
            game,
            combiner,
            cache: HashMap::new(),
        })
    }

    pub fn game(&self) -> &Clobber {
        &self.game
    }

    pub fn mode(&self) -> PreferenceMode {
        self.combiner.mode
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    /// Evaluates `occupancy` with `start` nominally to move.
    pub fn evaluate(&mut self, occupancy: &Occupancy, start: Player) -> Result<EvalResult> {
        if self.game.is_terminal(occupancy) {
            return Err(Error::NoInitialMove);
        }
        let node = self.node(occupancy, start)?;
        Ok(self.combiner.finish(node, start))
    }

    /// Value of a non-terminal position with `actor` nominally to move.
    fn node(&mut self, occupancy: &Occupancy, actor: Player) -> Result<Node> {
        if let Some(hit) = self.cache.get(&(occupancy.clone(), actor)) {
            return Ok(hit.clone());
        }
        let players = self.game.players();
        let successors = self.game.successors(occupancy, actor);
        let mut children = Vec::with_capacity(successors.len().max(1));
        if successors.is_empty() {
            children.push(self.node(occupancy, actor.next(players))?);
        }
        for child in &successors {
            let value = if self.game.is_terminal(child) {
                self.combiner.leaf(actor)
            } else {
                self.node(child, actor.next(players))?
            };
            children.push(value);
        }
        let node = self.combiner.combine(children, actor, occupancy)?;
        self.cache.insert((occupancy.clone(), actor), node.clone());
        Ok(node)
    }
}

/// Re-evaluates a value tree under a preference mode, as if it were a game
/// in which `mover` chooses at the root and the turn passes to the next
/// player at every list level.
pub fn evaluate_value(
    value: &GameValue,
    mover: Player,
    players: u8,
    mode: PreferenceMode,
    profile: Profile,
) -> Result<EvalResult> {
    if value.max_player() > players {
        return Err(Error::PlayerOutOfRange {
            id: value.max_player(),
            players,
        });
    }
    let mut combiner = Combiner::new(mode, profile, players)?;
    let node = reduce(&mut combiner, value, mover, players)?;
    Ok(combiner.finish(node, mover))
}

fn reduce(combiner: &mut Combiner, v: &GameValue, mover: Player, players: u8) -> Result<Node> {
    match v {
        GameValue::Leaf(w) => Ok(combiner.leaf(*w)),
        GameValue::Choice(_) => {
            let children = v
                .children()
                .iter()
                .map(|c| reduce(combiner, c, mover.next(players), players))
                .collect::<Result<Vec<_>>>()?;
            combiner.combine(children, mover, v)
        }
    }
}

/// One-shot evaluation of a position.
pub fn evaluate(position: &Position, mode: PreferenceMode, profile: Profile) -> Result<EvalResult> {
    let mut solver = Solver::new(position.game.clone(), mode, profile)?;
    solver.evaluate(&position.occupancy, position.mover)
}

/// Evaluates a board once per starting player, in player order.
pub fn evaluate_all_starts(
    game: &Clobber,
    occupancy: &Occupancy,
    mode: PreferenceMode,
    profile: Profile,
) -> Result<Vec<(Player, EvalResult)>> {
    let mut solver = Solver::new(game.clone(), mode, profile)?;
    (1..=game.players())
        .map(|id| {
            let p = Player::from_index(id);
            solver.evaluate(occupancy, p).map(|r| (p, r))
        })
        .collect()
}
