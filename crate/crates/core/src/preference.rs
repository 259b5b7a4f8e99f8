//! Player-preference relations over game values.
//!
//! `≤_p` follows the recursive definition
//! `X ≤_p Y ⇔ X = Y ∨ (∀i: x_i ≤_p Y) ∨ (∀i,j: x_i ≤_p y_j)`, with the
//! selfish base cases ranking guaranteed losses below mixed values below a
//! guaranteed win for `p`. Leaves have no options, so any comparison with a
//! leaf is settled by those base cases alone.
//!
//! The prudent relation `<^P_p` extends strict `<_p`: an option is prudently
//! weaker when it can only lead to situations that are weaker than or
//! incomparable with the other's, and at least one is strictly weaker. The
//! check is run between the two option lists, and between each option list
//! and the other value as a whole (the same two levels `≤_p` looks at).
//!
//! For three players every simple value sits on a known chain (see
//! [`chain_coordinate`]), so comparisons of simple values have a closed form.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::board::Player;
use crate::error::{Error, Result};
use crate::value::{GameValue, SimpleValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutcomeClass {
    Loss,
    Mixed,
    Win,
}

/// Win iff `p` is the only winner, Loss iff `p` never wins.
pub fn outcome_class(v: &GameValue, p: Player) -> OutcomeClass {
    let mask = v.outcome_mask();
    let me = 1u16 << p.id();
    if mask == me {
        OutcomeClass::Win
    } else if mask & me == 0 {
        OutcomeClass::Loss
    } else {
        OutcomeClass::Mixed
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl Comparison {
    pub fn reverse(self) -> Comparison {
        match self {
            Comparison::Less => Comparison::Greater,
            Comparison::Greater => Comparison::Less,
            other => other,
        }
    }

    fn from_flags(le: bool, ge: bool) -> Comparison {
        match (le, ge) {
            (true, true) => Comparison::Equal,
            (true, false) => Comparison::Less,
            (false, true) => Comparison::Greater,
            (false, false) => Comparison::Incomparable,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Less => "less",
            Comparison::Greater => "greater",
            Comparison::Equal => "equal",
            Comparison::Incomparable => "incomparable",
        })
    }
}

/// Base rules for `≤_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    /// Each opponent's win is a distinct outcome.
    Selfish,
    /// All of `p`'s losses are one outcome, whoever wins.
    Indifferent,
}

/// How the player to move discards options.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PruneMode {
    Selfish,
    Prudent,
    Indifferent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Leq,
    PrudentLess,
}

/// Memoized relation evaluator. Keep one per worker thread.
#[derive(Default)]
pub struct Relations {
    memo: HashMap<(Kind, u8, GameValue, GameValue), bool>,
}

impl Relations {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn clear(&mut self) {
        self.memo.clear();
    }

    /// Selfish `X ≤_p Y`.
    pub fn leq_selfish(&mut self, x: &GameValue, y: &GameValue, p: Player) -> bool {
        if x == y {
            return true;
        }
        let (cx, cy) = (outcome_class(x, p), outcome_class(y, p));
        if cx != cy {
            return cx < cy;
        }
        if x.is_leaf() || y.is_leaf() {
            return false;
        }
        let key = (Kind::Leq, p.id(), x.clone(), y.clone());
        if let Some(&hit) = self.memo.get(&key) {
            return hit;
        }
        let result = x.children().iter().all(|xi| self.leq_selfish(xi, y, p))
            || x.children()
                .iter()
                .all(|xi| y.children().iter().all(|yj| self.leq_selfish(xi, yj, p)));
        self.memo.insert(key, result);
        result
    }

    /// Selfish strict `X <_p Y`.
    pub fn less_selfish(&mut self, x: &GameValue, y: &GameValue, p: Player) -> bool {
        x != y && self.leq_selfish(x, y, p) && !self.leq_selfish(y, x, p)
    }

    /// `≤_p` under the given base rules.
    pub fn leq(&mut self, x: &GameValue, y: &GameValue, p: Player, base: Base) -> bool {
        match base {
            Base::Selfish => self.leq_selfish(x, y, p),
            Base::Indifferent => matches!(
                self.compare(x, y, p, base),
                Comparison::Less | Comparison::Equal
            ),
        }
    }

    /// Equal / strictly weaker / strictly stronger / incomparable from `p`'s view.
    ///
    /// Under [`Base::Indifferent`] both values are first rewritten from `p`'s
    /// point of view (every opponent's win becomes the same loss outcome) and
    /// then ordered with the prudent relation; values with the same rewritten
    /// form are equal.
    pub fn compare(&mut self, x: &GameValue, y: &GameValue, p: Player, base: Base) -> Comparison {
        match base {
            Base::Selfish => {
                if x == y {
                    return Comparison::Equal;
                }
                let le = self.leq_selfish(x, y, p);
                let ge = self.leq_selfish(y, x, p);
                Comparison::from_flags(le, ge)
            }
            Base::Indifferent => {
                let rx = relabel_for(x, p);
                let ry = relabel_for(y, p);
                self.compare_prudent(&rx, &ry, MINE)
            }
        }
    }

    /// Prudent `X <^P_p Y`.
    pub fn prudent_less(&mut self, x: &GameValue, y: &GameValue, p: Player) -> bool {
        if x == y {
            return false;
        }
        if self.less_selfish(x, y, p) {
            return true;
        }
        if x.is_leaf() || y.is_leaf() {
            return false;
        }
        let key = (Kind::PrudentLess, p.id(), x.clone(), y.clone());
        if let Some(&hit) = self.memo.get(&key) {
            return hit;
        }
        let result = self.dominated(x.children(), y.children(), p)
            || self.dominated(x.children(), std::slice::from_ref(y), p)
            || self.dominated(std::slice::from_ref(x), y.children(), p);
        self.memo.insert(key, result);
        result
    }

    /// Every pair is prudently weaker-or-incomparable, and at least one is weaker.
    fn dominated(&mut self, xs: &[GameValue], ys: &[GameValue], p: Player) -> bool {
        let mut strict = false;
        for xi in xs {
            for yj in ys {
                if self.prudent_less(yj, xi, p) {
                    return false;
                }
                if !strict && self.prudent_less(xi, yj, p) {
                    strict = true;
                }
            }
        }
        strict
    }

    /// Prudent incomparability: neither value is prudently weaker than the other.
    pub fn prudent_incomparable(&mut self, x: &GameValue, y: &GameValue, p: Player) -> bool {
        !self.prudent_less(x, y, p) && !self.prudent_less(y, x, p)
    }

    pub fn compare_prudent(&mut self, x: &GameValue, y: &GameValue, p: Player) -> Comparison {
        if x == y {
            return Comparison::Equal;
        }
        let lt = self.prudent_less(x, y, p);
        let gt = self.prudent_less(y, x, p);
        match (lt, gt) {
            (true, false) => Comparison::Less,
            (false, true) => Comparison::Greater,
            (false, false) => Comparison::Incomparable,
            // the relation is not antisymmetric by construction; report it honestly
            (true, true) => Comparison::Incomparable,
        }
    }

    /// Strict dominance used by pruning.
    pub fn strictly_weaker(&mut self, x: &GameValue, y: &GameValue, p: Player, mode: PruneMode) -> bool {
        match mode {
            PruneMode::Selfish => self.less_selfish(x, y, p),
            PruneMode::Prudent => self.prudent_less(x, y, p),
            PruneMode::Indifferent => {
                self.compare(x, y, p, Base::Indifferent) == Comparison::Less
            }
        }
    }

    /// Drops every option strictly dominated by another option. Under
    /// indifference, options equal to an earlier one are merged into it.
    /// Never returns an empty set.
    pub fn prune(&mut self, options: &[GameValue], p: Player, mode: PruneMode) -> Vec<GameValue> {
        let mut candidates: Vec<GameValue> = Vec::with_capacity(options.len());
        for o in options {
            if candidates.contains(o) {
                continue;
            }
            if mode == PruneMode::Indifferent
                && candidates
                    .iter()
                    .any(|c| self.compare(c, o, p, Base::Indifferent) == Comparison::Equal)
            {
                continue;
            }
            candidates.push(o.clone());
        }
        let keep: Vec<bool> = (0..candidates.len())
            .map(|i| {
                !(0..candidates.len()).any(|j| {
                    i != j && self.strictly_weaker(&candidates[i], &candidates[j], p, mode)
                })
            })
            .collect();
        if !keep.iter().any(|&k| k) {
            // only reachable through a dominance cycle
            return candidates;
        }
        candidates
            .into_iter()
            .zip(keep)
            .filter_map(|(c, k)| k.then_some(c))
            .collect()
    }
}

const MINE: Player = Player::from_index(1);
const OTHER: Player = Player::from_index(2);

/// Rewrites `v` from `p`'s point of view: `p`'s wins become player 1, every
/// other win becomes player 2, and singleton lists are dropped.
pub fn relabel_for(v: &GameValue, p: Player) -> GameValue {
    match v {
        GameValue::Leaf(w) => GameValue::Leaf(if *w == p { MINE } else { OTHER }),
        GameValue::Choice(_) => {
            let mut children: Vec<GameValue> =
                v.children().iter().map(|c| relabel_for(c, p)).collect();
            children.sort_unstable();
            children.dedup();
            if children.len() == 1 {
                children.pop().unwrap()
            } else {
                GameValue::list(children)
            }
        }
    }
}

/// Selfish `≤_p` with a fresh memo table.
pub fn leq(x: &GameValue, y: &GameValue, p: Player, base: Base) -> bool {
    Relations::new().leq(x, y, p, base)
}

pub fn compare(x: &GameValue, y: &GameValue, p: Player, base: Base) -> Comparison {
    Relations::new().compare(x, y, p, base)
}

pub fn prudent_less(x: &GameValue, y: &GameValue, p: Player) -> bool {
    Relations::new().prudent_less(x, y, p)
}

pub fn prudent_incomparable(x: &GameValue, y: &GameValue, p: Player) -> bool {
    Relations::new().prudent_incomparable(x, y, p)
}

pub fn compare_prudent(x: &GameValue, y: &GameValue, p: Player) -> Comparison {
    Relations::new().compare_prudent(x, y, p)
}

pub fn prune(options: &[GameValue], p: Player, mode: PruneMode) -> Vec<GameValue> {
    Relations::new().prune(options, p, mode)
}

/// Position of a simple value on the prudent chain seen by one player.
///
/// From weakest to strongest: `Asc(0) < Asc(1) < ... < Desc(k) < ... < Desc(1) < Top`.
/// Values sharing a coordinate are mutually incomparable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChainCoordinate {
    Asc(u32),
    Desc(u32),
    Top,
}

impl ChainCoordinate {
    fn key(self) -> (u8, i64) {
        match self {
            ChainCoordinate::Asc(k) => (0, k as i64),
            ChainCoordinate::Desc(k) => (1, -(k as i64)),
            ChainCoordinate::Top => (2, 0),
        }
    }
}

impl Ord for ChainCoordinate {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for ChainCoordinate {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

pub fn chain_coordinate(s: SimpleValue, p: Player) -> ChainCoordinate {
    let j = s.exponent;
    if s.base == p {
        match j {
            0 => ChainCoordinate::Top,
            j if j % 2 == 1 => ChainCoordinate::Asc((j - 1) / 2),
            j => ChainCoordinate::Desc(j / 2),
        }
    } else if j % 2 == 0 {
        ChainCoordinate::Asc(j / 2)
    } else {
        ChainCoordinate::Desc((j + 1) / 2)
    }
}

/// Closed-form prudent comparison of two simple values from `p`'s view.
pub fn simple_compare(a: SimpleValue, b: SimpleValue, p: Player) -> Comparison {
    if a == b {
        return Comparison::Equal;
    }
    let (ca, cb) = (chain_coordinate(a, p), chain_coordinate(b, p));
    match ca.cmp(&cb) {
        std::cmp::Ordering::Less => Comparison::Less,
        std::cmp::Ordering::Greater => Comparison::Greater,
        std::cmp::Ordering::Equal => Comparison::Incomparable,
    }
}

/// Merges simple values sharing one chain coordinate into the single simple
/// value listing them: the `p`-based member of the group.
pub fn merge_incomparable_simples(values: &[SimpleValue], p: Player) -> Result<SimpleValue> {
    let first = *values.first().ok_or_else(|| Error::MixedGroups(String::new()))?;
    let coord = chain_coordinate(first, p);
    if values.iter().any(|&v| chain_coordinate(v, p) != coord) {
        let shown: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        return Err(Error::MixedGroups(shown.join(", ")));
    }
    if values.iter().all(|&v| v == first) {
        return Ok(first);
    }
    Ok(match coord {
        ChainCoordinate::Asc(k) => SimpleValue {
            base: p,
            exponent: 2 * k + 1,
        },
        ChainCoordinate::Desc(k) => SimpleValue {
            base: p,
            exponent: 2 * k,
        },
        // Top holds a single value, so distinct members cannot share it
        ChainCoordinate::Top => unreachable!("distinct simple values at the top of the chain"),
    })
}

/// What the player to move keeps from a set of simple options: the strongest
/// chain group, merged into one simple value.
pub fn prudent_choice(options: &[SimpleValue], p: Player) -> Result<SimpleValue> {
    let best = options
        .iter()
        .map(|&s| chain_coordinate(s, p))
        .max()
        .ok_or_else(|| Error::MixedGroups(String::new()))?;
    let group: Vec<SimpleValue> = options
        .iter()
        .copied()
        .filter(|&s| chain_coordinate(s, p) == best)
        .collect();
    merge_incomparable_simples(&group, p)
}

/// Player-relative rendering used by indifferent evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relative {
    Mine,
    Other,
}

impl FromStr for Comparison {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "less" => Ok(Comparison::Less),
            "greater" => Ok(Comparison::Greater),
            "equal" => Ok(Comparison::Equal),
            "incomparable" => Ok(Comparison::Incomparable),
            _ => Err(format!("unknown comparison {s:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::parse_value;

    fn v(text: &str) -> GameValue {
        parse_value(text, 3).unwrap()
    }

    fn s(base: u8, e: u32) -> SimpleValue {
        SimpleValue::new(base, e)
    }

    fn p(id: u8) -> Player {
        Player::from_index(id)
    }

    #[test]
    fn outcome_classes() {
        assert_eq!(outcome_class(&v("[2,3]"), p(1)), OutcomeClass::Loss);
        assert_eq!(outcome_class(&v("[1,3]"), p(1)), OutcomeClass::Mixed);
        assert_eq!(outcome_class(&v("1"), p(1)), OutcomeClass::Win);
    }

    #[test]
    fn selfish_examples() {
        let three_bar_bar = s(3, 2).expand();
        let two_bar = s(2, 1).expand();
        assert!(leq(&three_bar_bar, &two_bar, p(1), Base::Selfish));
        assert_eq!(
            compare(&three_bar_bar, &two_bar, p(1), Base::Selfish),
            Comparison::Less
        );
        let combo = v("[2_1,3_2]");
        assert_eq!(compare(&combo, &two_bar, p(1), Base::Selfish), Comparison::Less);
        let deeper = v("[2_1,[2_1,3_2]]");
        assert_eq!(compare(&deeper, &two_bar, p(1), Base::Selfish), Comparison::Less);

        assert!(!leq(&v("2"), &v("3"), p(1), Base::Selfish));
        assert!(!leq(&v("3"), &v("2"), p(1), Base::Selfish));
        assert_eq!(compare(&v("2"), &v("3"), p(1), Base::Selfish), Comparison::Incomparable);
        assert_eq!(
            compare(&s(2, 1).expand(), &s(2, 2).expand(), p(1), Base::Selfish),
            Comparison::Incomparable
        );
        assert_eq!(
            compare(&s(2, 1).expand(), &s(3, 1).expand(), p(1), Base::Selfish),
            Comparison::Incomparable
        );
    }

    #[test]
    fn base_rules() {
        // guaranteed win beats anything mixed, mixed beats a guaranteed loss
        assert_eq!(compare(&v("[1,2]"), &v("1"), p(1), Base::Selfish), Comparison::Less);
        assert_eq!(compare(&v("[2,3]"), &v("[1,2]"), p(1), Base::Selfish), Comparison::Less);
        assert_eq!(compare(&v("2"), &v("1"), p(1), Base::Selfish), Comparison::Less);
        assert_eq!(compare(&v("2"), &v("3"), p(1), Base::Indifferent), Comparison::Equal);
        assert_eq!(compare(&v("[2,3]"), &v("3"), p(1), Base::Indifferent), Comparison::Equal);
        let x = v("[[1,3],[1,[1,2]],[2,3]]");
        for base in [Base::Selfish, Base::Indifferent] {
            assert_eq!(compare(&x, &x, p(2), base), Comparison::Equal);
        }
    }

    #[test]
    fn prudent_examples() {
        let mut rel = Relations::new();
        assert!(rel.prudent_less(&s(2, 2).expand(), &s(2, 1).expand(), p(1)));
        assert!(!rel.prudent_less(&s(2, 1).expand(), &s(2, 2).expand(), p(1)));
        for i in 0..=8 {
            assert!(rel.prudent_incomparable(&s(2, i).expand(), &s(3, i).expand(), p(1)));
            assert!(rel.prudent_incomparable(&s(1, i + 1).expand(), &s(2, i).expand(), p(1)));
        }
    }

    #[test]
    fn chain_coordinates() {
        use ChainCoordinate::*;
        assert_eq!(chain_coordinate(s(1, 1), p(1)), Asc(0));
        assert_eq!(chain_coordinate(s(2, 0), p(1)), Asc(0));
        assert_eq!(chain_coordinate(s(3, 0), p(1)), Asc(0));
        assert_eq!(chain_coordinate(s(2, 1), p(1)), Desc(1));
        assert_eq!(chain_coordinate(s(1, 2), p(1)), Desc(1));
        assert_eq!(chain_coordinate(s(3, 1), p(1)), Desc(1));
        assert_eq!(chain_coordinate(s(1, 0), p(1)), Top);
        assert!(Asc(7) < Desc(9));
        assert!(Desc(2) < Desc(1));
        assert!(Asc(1) < Asc(2));
        assert!(Desc(1) < Top);
    }

    #[test]
    fn closed_form_comparisons() {
        assert_eq!(simple_compare(s(2, 2), s(2, 1), p(1)), Comparison::Less);
        assert_eq!(simple_compare(s(2, 0), s(3, 0), p(1)), Comparison::Incomparable);
        assert_eq!(simple_compare(s(3, 1), s(1, 0), p(1)), Comparison::Less);
        assert_eq!(simple_compare(s(1, 1), s(1, 1), p(2)), Comparison::Equal);
    }

    #[test]
    fn pruning() {
        let two_bar = s(2, 1).expand();
        let two_bb = s(2, 2).expand();
        let three_bb = s(3, 2).expand();
        assert_eq!(
            prune(&[two_bar.clone(), three_bb], p(1), PruneMode::Selfish),
            vec![two_bar.clone()]
        );
        assert_eq!(
            prune(&[two_bar.clone(), two_bb.clone()], p(1), PruneMode::Selfish),
            vec![two_bar.clone(), two_bb.clone()]
        );
        assert_eq!(
            prune(&[two_bar.clone(), two_bb], p(1), PruneMode::Prudent),
            vec![two_bar]
        );
        assert_eq!(prune(&[v("2"), v("3")], p(1), PruneMode::Indifferent), vec![v("2")]);
        assert_eq!(prune(&[v("2"), v("3")], p(1), PruneMode::Selfish).len(), 2);
    }

    #[test]
    fn merging() {
        let m = |xs: &[SimpleValue]| merge_incomparable_simples(xs, p(1)).unwrap();
        assert_eq!(m(&[s(2, 0), s(3, 0)]), s(1, 1));
        assert_eq!(m(&[s(1, 2), s(2, 1)]), s(1, 2));
        assert_eq!(m(&[s(2, 1), s(3, 1)]), s(1, 2));
        assert_eq!(m(&[s(3, 4)]), s(3, 4));
        assert!(merge_incomparable_simples(&[s(2, 0), s(2, 1)], p(1)).is_err());
        assert_eq!(prudent_choice(&[s(2, 0), s(3, 1), s(2, 2)], p(1)).unwrap(), s(3, 1));
    }

    #[test]
    fn relabeling() {
        assert_eq!(relabel_for(&v("[2,3]"), p(1)), v("2"));
        assert_eq!(relabel_for(&v("[[1,3],[1,2]]"), p(1)), v("[1,2]"));
        assert_eq!(relabel_for(&v("[[1,3],[1,2]]"), p(2)), v("[2,[1,2]]"));
    }
}
