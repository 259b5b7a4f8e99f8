//! Syntactic rewrites that drop choice-free structure from a value.
//!
//! * Rule 1: `[x] => x` for a simple value `x` (three players only).
//! * Rule 2: `N` nested singleton lists around any `x` collapse to `x`.
//! * Rule 3: an option that is `N` bracket levels deep around a list
//!   `[y1..yk]` (that is, `N - 1` singleton wrappers on top of it) is spliced
//!   into its host list.
//!
//! Normalization applies the enabled rules bottom-up to a fixed point, in the
//! order Rule 2, Rule 3, Rule 1 at each node. The `L1T` profile is the
//! exception: it matches Rule 3 only against the last option of a list, in
//! canonical order, and splices at most once per node.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::value::{GameValue, SimpleValue};

/// Which rewrites participate in normalization. Levels are cumulative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub enum Profile {
    /// Deduplication and leaf-singleton collapse only (canonical form).
    L0,
    /// L0 plus Rules 2 and 3.
    L1,
    /// L0 plus Rule 2 and a single tail-position application of Rule 3.
    /// Not idempotent. This is the profile that reproduces the published
    /// counts most closely.
    #[default]
    L1T,
    /// L1 plus Rule 1.
    L2,
}

impl Profile {
    pub const ALL: [Profile; 4] = [Profile::L0, Profile::L1, Profile::L1T, Profile::L2];

    /// Profiles whose normalization is a fixed point.
    pub const IDEMPOTENT: [Profile; 3] = [Profile::L0, Profile::L1, Profile::L2];

    fn rule1(self) -> bool {
        self == Profile::L2
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Profile::L0 => "L0",
            Profile::L1 => "L1",
            Profile::L1T => "L1T",
            Profile::L2 => "L2",
        })
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "L0" => Ok(Profile::L0),
            "L1" => Ok(Profile::L1),
            "L1T" => Ok(Profile::L1T),
            "L2" => Ok(Profile::L2),
            _ => Err(format!("unknown profile {s:?} (expected L0, L1, L1T or L2)")),
        }
    }
}

/// Normalization settings: the profile and the number of players `N`
/// (Rules 2 and 3 strip exactly `N` bracket levels).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Normalizer {
    pub profile: Profile,
    pub players: u8,
}

impl Normalizer {
    pub fn new(profile: Profile, players: u8) -> Self {
        Normalizer { profile, players }
    }

    /// Full bottom-up normalization of a canonical value.
    pub fn normalize(&self, v: &GameValue) -> GameValue {
        if self.profile == Profile::L0 || v.is_leaf() {
            return v.clone();
        }
        let children = v.children().iter().map(|c| self.normalize(c)).collect();
        self.normalize_node(GameValue::choice(children))
    }

    /// Applies the node-level rules at the root of `v`, assuming every option
    /// of `v` is already normalized.
    pub fn normalize_node(&self, mut v: GameValue) -> GameValue {
        if self.profile == Profile::L0 {
            return v;
        }
        let n = self.players as usize;
        loop {
            if v.is_leaf() {
                return v;
            }
            // the stripped value is a normalized descendant, so it is already a fixed point
            if let Some(inner) = strip_wrappers(&v, n) {
                return inner.clone();
            }
            if self.profile == Profile::L1T {
                return splice_tail(&v, n).unwrap_or(v);
            }
            if let Some(spliced) = splice_once(&v, n) {
                v = spliced;
                continue;
            }
            if self.profile.rule1() && self.players == 3 {
                if let Some(inner) = simple_singleton(&v) {
                    return inner.clone();
                }
            }
            return v;
        }
    }
}

/// Normalizes `v` under `profile` for `players` players.
pub fn normalize(v: &GameValue, profile: Profile, players: u8) -> GameValue {
    Normalizer::new(profile, players).normalize(v)
}

/// The value under exactly `levels` nested singleton lists, if present.
fn strip_wrappers(v: &GameValue, levels: usize) -> Option<&GameValue> {
    let mut cur = v;
    for _ in 0..levels {
        cur = cur.singleton_inner()?;
    }
    Some(cur)
}

/// For an option `[[..[Y]..]]` with `n - 1` singleton wrappers around a list
/// `Y`, the options of `Y`.
fn splice_source(option: &GameValue, n: usize) -> Option<&[GameValue]> {
    let inner = strip_wrappers(option, n.checked_sub(1)?)?;
    (!inner.is_leaf()).then(|| inner.children())
}

fn splice_once(host: &GameValue, n: usize) -> Option<GameValue> {
    let children = host.children();
    let idx = children
        .iter()
        .position(|c| splice_source(c, n).is_some())?;
    let mut out = Vec::with_capacity(children.len() + 2);
    for (i, c) in children.iter().enumerate() {
        if i == idx {
            out.extend_from_slice(splice_source(c, n).unwrap());
        } else {
            out.push(c.clone());
        }
    }
    Some(GameValue::choice(out))
}

fn splice_tail(host: &GameValue, n: usize) -> Option<GameValue> {
    let (last, rest) = host.children().split_last()?;
    let ys = splice_source(last, n)?;
    let mut out = rest.to_vec();
    out.extend_from_slice(ys);
    Some(GameValue::choice(out))
}

fn simple_singleton(v: &GameValue) -> Option<&GameValue> {
    let inner = v.singleton_inner()?;
    SimpleValue::from_value_strict(inner).map(|_| inner)
}

fn rebuild_bottom_up(v: &GameValue, f: &dyn Fn(GameValue) -> GameValue) -> GameValue {
    if v.is_leaf() {
        return v.clone();
    }
    let children = v.children().iter().map(|c| rebuild_bottom_up(c, f)).collect();
    f(GameValue::choice(children))
}

/// One bottom-up sweep of Rule 1 (three players only).
pub fn rule1(v: &GameValue, players: u8) -> GameValue {
    if players != 3 {
        return v.clone();
    }
    rebuild_bottom_up(v, &|node| match simple_singleton(&node) {
        Some(inner) => inner.clone(),
        None => node,
    })
}

/// One bottom-up sweep of Rule 2.
pub fn rule2(v: &GameValue, players: u8) -> GameValue {
    let n = players as usize;
    rebuild_bottom_up(v, &|node| match strip_wrappers(&node, n) {
        Some(inner) => inner.clone(),
        None => node,
    })
}

/// One bottom-up sweep of Rule 3, splicing every matching option of each list.
pub fn rule3(v: &GameValue, players: u8) -> GameValue {
    let n = players as usize;
    rebuild_bottom_up(v, &|node| {
        if node.children().iter().all(|c| splice_source(c, n).is_none()) {
            return node;
        }
        let mut out = Vec::new();
        for c in node.children() {
            match splice_source(c, n) {
                Some(ys) => out.extend_from_slice(ys),
                None => out.push(c.clone()),
            }
        }
        GameValue::choice(out)
    })
}
