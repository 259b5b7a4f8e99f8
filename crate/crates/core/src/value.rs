//! Game values: outcome trees whose leaves name a winner and whose inner
//! nodes list the options available to the player choosing there.
//!
//! Canonical form sorts the options of every list under [`Ord`] (leaves
//! before lists, leaves by player, lists by length and then lexicographically),
//! removes duplicates, and identifies `[x]` with `x` when `x` is a leaf.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::board::Player;
use crate::error::{Error, Result};

const MIX: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Clone)]
pub enum GameValue {
    Leaf(Player),
    Choice(Arc<ChoiceNode>),
}

/// The options of a list value, with a structural fingerprint and the set of
/// winners reachable below it cached at construction.
pub struct ChoiceNode {
    fingerprint: u64,
    outcomes: u16,
    children: Box<[GameValue]>,
}

impl ChoiceNode {
    pub fn children(&self) -> &[GameValue] {
        &self.children
    }
}

impl GameValue {
    pub fn leaf(player: Player) -> Self {
        GameValue::Leaf(player)
    }

    /// Builds a list value exactly as given, without canonicalizing.
    ///
    /// # Panics
    /// Panics if `children` is empty.
    pub fn list(children: Vec<GameValue>) -> Self {
        assert!(!children.is_empty(), "a list value needs at least one option");
        let mut fingerprint = 0x51_7cc1_b727_220a_95u64 ^ children.len() as u64;
        let mut outcomes = 0u16;
        for c in &children {
            fingerprint = (fingerprint.rotate_left(7) ^ c.fingerprint()).wrapping_mul(MIX);
            outcomes |= c.outcome_mask();
        }
        GameValue::Choice(Arc::new(ChoiceNode {
            fingerprint,
            outcomes,
            children: children.into_boxed_slice(),
        }))
    }

    /// Canonical list value from options that are already canonical.
    pub fn choice(mut children: Vec<GameValue>) -> Self {
        children.sort_unstable();
        children.dedup();
        if children.len() == 1 && children[0].is_leaf() {
            return children.pop().unwrap();
        }
        GameValue::list(children)
    }

    /// Recursively sorts, deduplicates and collapses leaf singletons.
    pub fn canonicalize(&self) -> GameValue {
        match self {
            GameValue::Leaf(_) => self.clone(),
            GameValue::Choice(node) => {
                GameValue::choice(node.children.iter().map(|c| c.canonicalize()).collect())
            }
        }
    }

    pub fn is_canonical(&self) -> bool {
        match self {
            GameValue::Leaf(_) => true,
            GameValue::Choice(node) => {
                let cs = &node.children;
                !(cs.len() == 1 && cs[0].is_leaf())
                    && cs.windows(2).all(|w| w[0] < w[1])
                    && cs.iter().all(|c| c.is_canonical())
            }
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, GameValue::Leaf(_))
    }

    pub fn as_leaf(&self) -> Option<Player> {
        match self {
            GameValue::Leaf(p) => Some(*p),
            GameValue::Choice(_) => None,
        }
    }

    /// Options of a list value; empty for a leaf.
    pub fn children(&self) -> &[GameValue] {
        match self {
            GameValue::Leaf(_) => &[],
            GameValue::Choice(node) => &node.children,
        }
    }

    /// The sole option of a one-element list.
    pub fn singleton_inner(&self) -> Option<&GameValue> {
        match self.children() {
            [only] => Some(only),
            _ => None,
        }
    }

    pub(crate) fn fingerprint(&self) -> u64 {
        match self {
            GameValue::Leaf(p) => (p.id() as u64 + 1).wrapping_mul(MIX),
            GameValue::Choice(node) => node.fingerprint,
        }
    }

    /// Bit `i` is set when player `i` wins at some leaf.
    pub fn outcome_mask(&self) -> u16 {
        match self {
            GameValue::Leaf(p) => 1 << p.id(),
            GameValue::Choice(node) => node.outcomes,
        }
    }

    /// Winners appearing at the leaves, ascending.
    pub fn outcome_set(&self) -> Vec<Player> {
        let mask = self.outcome_mask();
        (1..16u8)
            .filter(|i| mask & (1 << i) != 0)
            .map(Player::from_index)
            .collect()
    }

    /// True iff some node of `self` equals `other` (a value contains itself).
    pub fn contains(&self, other: &GameValue) -> bool {
        if self == other {
            return true;
        }
        if other.outcome_mask() & !self.outcome_mask() != 0 {
            return false;
        }
        self.children().iter().any(|c| c.contains(other))
    }

    /// Number of nested singleton lists on top of this value.
    pub fn wrapper_depth(&self) -> usize {
        let mut depth = 0;
        let mut v = self;
        while let Some(inner) = v.singleton_inner() {
            depth += 1;
            v = inner;
        }
        depth
    }

    /// Largest player number at any leaf.
    pub fn max_player(&self) -> u8 {
        15 - self.outcome_mask().leading_zeros() as u8
    }

    /// Node count of the tree (shared subtrees counted per occurrence).
    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    /// Bracket text, e.g. `[[1,3],2]`.
    pub fn to_brackets(&self) -> String {
        self.to_string()
    }

    /// Bracket text where every simple sub-value is written as `a_i`
    /// (three players only; other values fall back to brackets).
    pub fn to_bar(&self) -> String {
        let mut out = String::new();
        self.write_bar(&mut out);
        out
    }

    fn write_bar(&self, out: &mut String) {
        if let Some(s) = SimpleValue::from_value_strict(self) {
            out.push_str(&s.to_string());
            return;
        }
        out.push('[');
        for (i, c) in self.children().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            c.write_bar(out);
        }
        out.push(']');
    }

    pub fn render(&self, style: RenderStyle) -> String {
        match style {
            RenderStyle::Brackets => self.to_brackets(),
            RenderStyle::Bar => self.to_bar(),
        }
    }
}

impl PartialEq for GameValue {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (GameValue::Leaf(a), GameValue::Leaf(b)) => a == b,
            (GameValue::Choice(a), GameValue::Choice(b)) => {
                Arc::ptr_eq(a, b) || (a.fingerprint == b.fingerprint && a.children == b.children)
            }
            _ => false,
        }
    }
}

impl Eq for GameValue {}

impl Hash for GameValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.fingerprint());
    }
}

impl Ord for GameValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GameValue::Leaf(a), GameValue::Leaf(b)) => a.cmp(b),
            (GameValue::Leaf(_), GameValue::Choice(_)) => Ordering::Less,
            (GameValue::Choice(_), GameValue::Leaf(_)) => Ordering::Greater,
            (GameValue::Choice(a), GameValue::Choice(b)) => {
                if Arc::ptr_eq(a, b) {
                    return Ordering::Equal;
                }
                a.children
                    .len()
                    .cmp(&b.children.len())
                    .then_with(|| a.children.iter().cmp(b.children.iter()))
            }
        }
    }
}

impl PartialOrd for GameValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GameValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameValue::Leaf(p) => write!(f, "{p}"),
            GameValue::Choice(node) => {
                f.write_str("[")?;
                for (i, c) in node.children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Debug for GameValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<SimpleValue> for GameValue {
    fn from(s: SimpleValue) -> Self {
        s.expand()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RenderStyle {
    #[default]
    Brackets,
    Bar,
}

/// Three-player value `a_i`: `a_0` is an outright win for `a`, and `a_i` is
/// the list of `b_(i-1)` over the two players `b != a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleValue {
    pub base: Player,
    pub exponent: u32,
}

impl SimpleValue {
    /// # Panics
    /// Panics when `base` is not 1, 2 or 3.
    pub fn new(base: u8, exponent: u32) -> Self {
        assert!((1..=3).contains(&base), "simple values have base 1, 2 or 3");
        SimpleValue {
            base: Player::from_index(base),
            exponent,
        }
    }

    /// The two players other than the base.
    pub fn others(&self) -> [Player; 2] {
        match self.base.id() {
            1 => [Player::from_index(2), Player::from_index(3)],
            2 => [Player::from_index(1), Player::from_index(3)],
            _ => [Player::from_index(1), Player::from_index(2)],
        }
    }

    /// The canonical tree this simple value denotes.
    pub fn expand(&self) -> GameValue {
        if self.exponent == 0 {
            return GameValue::Leaf(self.base);
        }
        let children = self
            .others()
            .iter()
            .map(|&b| {
                SimpleValue {
                    base: b,
                    exponent: self.exponent - 1,
                }
                .expand()
            })
            .collect();
        GameValue::choice(children)
    }

    /// Recognizes a value that is literally the expansion of some `a_i`.
    pub fn from_value_strict(v: &GameValue) -> Option<SimpleValue> {
        match v {
            GameValue::Leaf(p) if (1..=3).contains(&p.id()) => Some(SimpleValue {
                base: *p,
                exponent: 0,
            }),
            GameValue::Leaf(_) => None,
            GameValue::Choice(node) => {
                let [a, b] = &node.children[..] else {
                    return None;
                };
                let sa = Self::from_value_strict(a)?;
                let sb = Self::from_value_strict(b)?;
                if sa.exponent != sb.exponent || sa.base == sb.base {
                    return None;
                }
                Some(SimpleValue {
                    base: Player::from_index(6 - sa.base.id() - sb.base.id()),
                    exponent: sa.exponent + 1,
                })
            }
        }
    }
}

impl fmt::Display for SimpleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}_{}", self.base, self.exponent)
        }
    }
}

/// Expansion of a simple value; only defined for three players.
pub fn expand_simple(s: SimpleValue, players: u8) -> Result<GameValue> {
    if players != 3 {
        return Err(Error::NotThreePlayers);
    }
    Ok(s.expand())
}

/// Matches a value against the simple values, looking through singleton
/// wrappers around a simple value (the form Rule 1 would strip).
pub fn match_simple(v: &GameValue) -> Option<SimpleValue> {
    let mut v = v;
    while let Some(inner) = v.singleton_inner() {
        v = inner;
    }
    SimpleValue::from_value_strict(v)
}

/// Parses bracket text (`[1,[2,3]]`), also accepting `a_i` for simple values
/// when `players == 3`. Whitespace is ignored. The result is canonical.
pub fn parse_value(text: &str, players: u8) -> Result<GameValue> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        players,
    };
    let v = parser.value()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(v.canonicalize())
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    players: u8,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::ValueSyntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn value(&mut self) -> Result<GameValue> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let mut children = vec![self.value()?];
                loop {
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            children.push(self.value()?);
                        }
                        Some(b']') => {
                            self.pos += 1;
                            return Ok(GameValue::list(children));
                        }
                        _ => return Err(self.error("expected ',' or ']'")),
                    }
                }
            }
            Some(d) if d.is_ascii_digit() => {
                let id = d - b'0';
                if id == 0 || id > self.players {
                    return Err(self.error("player number out of range"));
                }
                self.pos += 1;
                let player = Player::from_index(id);
                if self.bytes.get(self.pos) != Some(&b'_') {
                    return Ok(GameValue::Leaf(player));
                }
                if self.players != 3 {
                    return Err(self.error("a_i notation needs three players"));
                }
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let exponent: u32 = std::str::from_utf8(&self.bytes[start..self.pos])
                    .ok()
                    .and_then(|s| s.parse().ok())
                    .filter(|&e| e <= 24)
                    .ok_or_else(|| self.error("expected exponent between 0 and 24"))?;
                Ok(SimpleValue {
                    base: player,
                    exponent,
                }
                .expand())
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses `a_i` (or a bare digit) as a simple value.
pub fn parse_simple(text: &str) -> Result<SimpleValue> {
    let v = parse_value(text, 3)?;
    SimpleValue::from_value_strict(&v).ok_or_else(|| Error::ValueSyntax {
        pos: 0,
        msg: format!("{text} is not a simple value"),
    })
}
