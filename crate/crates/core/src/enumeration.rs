//! Exhaustive enumeration of three-player 1×n Clobber boards and counts of
//! the distinct starting values under each simplification regime.
//!
//! Only boards that do not already occur at a smaller length are generated:
//! no empty cell at either end, no two adjacent empty cells, only the
//! lexicographically larger of a board and its mirror image, and at least one
//! legal move. Player 1 always starts.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::board::{BoardGraph, Clobber, Occupancy, Player};
use crate::error::{Error, Result};
use crate::rewrite::Profile;
use crate::solver::{EvalResult, PreferenceMode, Solver};
use crate::value::{GameValue, SimpleValue};

const PLAYERS: u8 = 3;

/// Per-worker solver caches are dropped once they hold this many positions.
const CACHE_LIMIT: usize = 4_000_000;

/// One column of the results table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Unsimplified,
    Syntactic,
    Selfish,
    Prudent,
}

impl Regime {
    pub const ALL: [Regime; 4] = [
        Regime::Unsimplified,
        Regime::Syntactic,
        Regime::Selfish,
        Regime::Prudent,
    ];

    pub fn mode(self) -> PreferenceMode {
        match self {
            Regime::Unsimplified => PreferenceMode::Raw,
            Regime::Syntactic => PreferenceMode::Syntactic,
            Regime::Selfish => PreferenceMode::Selfish,
            Regime::Prudent => PreferenceMode::Prudent,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Unsimplified => "unsimplified",
            Regime::Syntactic => "syntactic",
            Regime::Selfish => "selfish",
            Regime::Prudent => "prudent",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "unsimplified" | "raw" => Ok(Regime::Unsimplified),
            "syntactic" => Ok(Regime::Syntactic),
            "selfish" => Ok(Regime::Selfish),
            "prudent" => Ok(Regime::Prudent),
            _ => Err(format!("unknown regime {s:?}")),
        }
    }
}

/// Which boards count as novel at their length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoardFilter {
    pub no_edge_zeros: bool,
    pub no_double_zeros: bool,
    pub mirror_canonical: bool,
    pub movable: bool,
}

impl BoardFilter {
    /// All four filters, as used for the results table.
    pub const NOVEL: BoardFilter = BoardFilter {
        no_edge_zeros: true,
        no_double_zeros: true,
        mirror_canonical: true,
        movable: true,
    };

    pub const NONE: BoardFilter = BoardFilter {
        no_edge_zeros: false,
        no_double_zeros: false,
        mirror_canonical: false,
        movable: false,
    };

    /// Checks a complete board against the enabled filters.
    pub fn accepts(&self, cells: &[u8]) -> bool {
        let n = cells.len();
        if n == 0 || cells.iter().any(|&c| c > PLAYERS) {
            return false;
        }
        if self.no_edge_zeros && (cells[0] == 0 || cells[n - 1] == 0) {
            return false;
        }
        if self.no_double_zeros && cells.windows(2).any(|w| w[0] == 0 && w[1] == 0) {
            return false;
        }
        if self.mirror_canonical && cells.iter().lt(cells.iter().rev()) {
            return false;
        }
        if self.movable && !line_has_move(cells) {
            return false;
        }
        true
    }

    /// Whether `prefix` can still be extended to an accepted board of length `n`.
    fn prefix_ok(&self, prefix: &[u8], n: usize) -> bool {
        let k = prefix.len();
        if k == 0 {
            return true;
        }
        let last = prefix[k - 1];
        if last == 0 {
            if self.no_edge_zeros && (k == 1 || k == n) {
                return false;
            }
            if self.no_double_zeros && k >= 2 && prefix[k - 2] == 0 {
                return false;
            }
        }
        true
    }
}

/// Some player can move on a 1×n board: two adjacent tokens of different players.
pub fn line_has_move(cells: &[u8]) -> bool {
    cells
        .windows(2)
        .any(|w| w[0] != 0 && w[1] != 0 && w[0] != w[1])
}

/// Calls `f` on every accepted board of length `n` starting with `prefix`,
/// in lexicographic order.
pub fn for_each_board_with_prefix(
    n: usize,
    filter: &BoardFilter,
    prefix: &[u8],
    f: &mut dyn FnMut(&[u8]),
) {
    if prefix.len() > n {
        return;
    }
    let mut buf = Vec::with_capacity(n);
    for &c in prefix {
        buf.push(c);
        if !filter.prefix_ok(&buf, n) {
            return;
        }
    }
    extend(n, filter, &mut buf, f);
}

fn extend(n: usize, filter: &BoardFilter, buf: &mut Vec<u8>, f: &mut dyn FnMut(&[u8])) {
    if buf.len() == n {
        if filter.accepts(buf) {
            f(buf);
        }
        return;
    }
    for c in 0..=PLAYERS {
        buf.push(c);
        if filter.prefix_ok(buf, n) {
            extend(n, filter, buf, f);
        }
        buf.pop();
    }
}

pub fn for_each_board(n: usize, filter: &BoardFilter, f: &mut dyn FnMut(&[u8])) {
    for_each_board_with_prefix(n, filter, &[], f);
}

/// Every accepted board of length `n` as a digit string, in lexicographic order.
pub fn generate_boards(n: usize, filter: &BoardFilter) -> Vec<String> {
    let mut out = Vec::new();
    for_each_board(n, filter, &mut |cells| out.push(board_string(cells)));
    out
}

pub fn count_boards(n: usize, filter: &BoardFilter) -> u64 {
    let mut count = 0u64;
    for_each_board(n, filter, &mut |_| count += 1);
    count
}

fn board_string(cells: &[u8]) -> String {
    cells.iter().map(|&c| char::from(b'0' + c)).collect()
}

/// Distinct value under one regime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueKey {
    Tree(GameValue),
    Simple(SimpleValue),
}

impl ValueKey {
    fn from_result(r: EvalResult) -> Self {
        match r {
            EvalResult::Raw(v) => ValueKey::Tree(v),
            EvalResult::Simple(s) => ValueKey::Simple(s),
            EvalResult::Class { .. } => unreachable!("the table has no indifferent column"),
        }
    }

    pub fn to_value(&self) -> GameValue {
        match self {
            ValueKey::Tree(v) => v.clone(),
            ValueKey::Simple(s) => s.expand(),
        }
    }

    pub fn render(&self) -> String {
        match self {
            ValueKey::Tree(v) => v.to_bar(),
            ValueKey::Simple(s) => s.to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationConfig {
    pub regimes: Vec<Regime>,
    pub profile: Profile,
    pub workers: usize,
    pub keep_inventory: bool,
}

impl EnumerationConfig {
    pub fn new(regimes: &[Regime], profile: Profile) -> Self {
        EnumerationConfig {
            regimes: regimes.to_vec(),
            profile,
            workers: 1,
            keep_inventory: false,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn inventory(mut self, keep: bool) -> Self {
        self.keep_inventory = keep;
        self
    }
}

/// One row of the results table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub board_length: usize,
    pub games_analysed: u64,
    pub unique_values: BTreeMap<Regime, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inventory: Option<BTreeMap<Regime, Vec<String>>>,
}

/// Full per-regime sets of distinct values from one enumeration.
#[derive(Clone, Debug, Default)]
pub struct ValueSets {
    pub games: u64,
    pub sets: BTreeMap<Regime, HashSet<ValueKey>>,
}

impl ValueSets {
    fn merge(&mut self, other: ValueSets) {
        self.games += other.games;
        for (regime, set) in other.sets {
            self.sets.entry(regime).or_default().extend(set);
        }
    }

    /// The distinct values of one regime, sorted.
    pub fn sorted(&self, regime: Regime) -> Vec<ValueKey> {
        let mut keys: Vec<ValueKey> = self
            .sets
            .get(&regime)
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default();
        keys.sort();
        keys
    }
}

/// Evaluates every novel board of length `n` under the configured regimes.
pub fn collect_values(n: usize, config: &EnumerationConfig) -> Result<ValueSets> {
    if n < 2 {
        return Ok(ValueSets::default());
    }
    let filter = BoardFilter::NOVEL;
    let prefix_len = n.min(5);
    let mut prefixes = Vec::new();
    for_each_prefix(prefix_len, n, &filter, &mut Vec::new(), &mut prefixes);

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Result<ValueSets>>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..config.workers.max(1) {
            scope.spawn(|| {
                let outcome = run_worker(n, config, &filter, &prefixes, &next);
                results.lock().unwrap().push(outcome);
            });
        }
    });
    let mut total = ValueSets::default();
    for r in results.into_inner().unwrap() {
        total.merge(r?);
    }
    for regime in &config.regimes {
        total.sets.entry(*regime).or_default();
    }
    Ok(total)
}

fn for_each_prefix(
    len: usize,
    n: usize,
    filter: &BoardFilter,
    buf: &mut Vec<u8>,
    out: &mut Vec<Vec<u8>>,
) {
    if buf.len() == len {
        out.push(buf.clone());
        return;
    }
    for c in 0..=PLAYERS {
        buf.push(c);
        if filter.prefix_ok(buf, n) {
            for_each_prefix(len, n, filter, buf, out);
        }
        buf.pop();
    }
}

fn run_worker(
    n: usize,
    config: &EnumerationConfig,
    filter: &BoardFilter,
    prefixes: &[Vec<u8>],
    next: &AtomicUsize,
) -> Result<ValueSets> {
    let game = Clobber::new(BoardGraph::line(n), PLAYERS)?;
    let mut solvers = config
        .regimes
        .iter()
        .map(|&r| Solver::new(game.clone(), r.mode(), config.profile).map(|s| (r, s)))
        .collect::<Result<Vec<_>>>()?;
    let mut local = ValueSets::default();
    let start = Player::from_index(1);
    loop {
        let idx = next.fetch_add(1, Ordering::Relaxed);
        let Some(prefix) = prefixes.get(idx) else {
            break;
        };
        let mut failure: Option<Error> = None;
        for_each_board_with_prefix(n, filter, prefix, &mut |cells| {
            if failure.is_some() {
                return;
            }
            local.games += 1;
            let occupancy = Occupancy::new(cells.to_vec(), PLAYERS).expect("generated cells are in range");
            for (regime, solver) in solvers.iter_mut() {
                if solver.cache_len() > CACHE_LIMIT {
                    *solver = Solver::new(game.clone(), regime.mode(), config.profile)
                        .expect("solver was constructible before");
                }
                match solver.evaluate(&occupancy, start) {
                    Ok(r) => {
                        local
                            .sets
                            .entry(*regime)
                            .or_default()
                            .insert(ValueKey::from_result(r));
                    }
                    Err(e) => failure = Some(e),
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
    }
    Ok(local)
}

/// Evaluates every novel board of length `n` and counts distinct values.
pub fn enumerate(n: usize, config: &EnumerationConfig) -> Result<EnumerationReport> {
    let values = collect_values(n, config)?;
    Ok(report_from(n, &values, config.keep_inventory))
}

pub fn report_from(n: usize, values: &ValueSets, keep_inventory: bool) -> EnumerationReport {
    let unique_values = values
        .sets
        .iter()
        .map(|(r, set)| (*r, set.len()))
        .collect();
    let inventory = keep_inventory.then(|| {
        values
            .sets
            .keys()
            .map(|&r| (r, values.sorted(r).iter().map(|k| k.render()).collect()))
            .collect()
    });
    EnumerationReport {
        board_length: n,
        games_analysed: values.games,
        unique_values,
        inventory,
    }
}

/// One report per board length `2..=max_n`.
pub fn table(max_n: usize, config: &EnumerationConfig) -> Result<Vec<EnumerationReport>> {
    (2..=max_n).map(|n| enumerate(n, config)).collect()
}

/// CSV with columns `n,games` followed by the given regimes.
pub fn to_csv(reports: &[EnumerationReport], regimes: &[Regime]) -> String {
    let mut out = String::from("n,games");
    for r in regimes {
        out.push(',');
        out.push_str(r.name());
    }
    out.push('\n');
    for rep in reports {
        out.push_str(&format!("{},{}", rep.board_length, rep.games_analysed));
        for r in regimes {
            out.push(',');
            if let Some(count) = rep.unique_values.get(r) {
                out.push_str(&count.to_string());
            }
        }
        out.push('\n');
    }
    out
}

pub fn to_json(reports: &[EnumerationReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

/// A row of the published results table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PublishedRow {
    pub n: usize,
    pub games: u64,
    pub unsimplified: usize,
    pub syntactic: usize,
    pub selfish: usize,
    pub prudent: usize,
}

impl PublishedRow {
    pub fn get(&self, regime: Regime) -> usize {
        match regime {
            Regime::Unsimplified => self.unsimplified,
            Regime::Syntactic => self.syntactic,
            Regime::Selfish => self.selfish,
            Regime::Prudent => self.prudent,
        }
    }
}

const fn row(
    n: usize,
    games: u64,
    unsimplified: usize,
    syntactic: usize,
    selfish: usize,
    prudent: usize,
) -> PublishedRow {
    PublishedRow {
        n,
        games,
        unsimplified,
        syntactic,
        selfish,
        prudent,
    }
}

/// Published counts for board lengths 2 through 13.
pub const PUBLISHED: [PublishedRow; 12] = [
    row(2, 3, 2, 2, 2, 2),
    row(3, 15, 3, 3, 3, 3),
    row(4, 60, 7, 7, 4, 4),
    row(5, 243, 21, 21, 5, 5),
    row(6, 924, 77, 77, 7, 7),
    row(7, 3_609, 506, 501, 8, 8),
    row(8, 13_704, 2_408, 2_398, 9, 8),
    row(9, 52_497, 9_777, 9_748, 20, 10),
    row(10, 199_329, 36_407, 36_326, 154, 11),
    row(11, 758_556, 128_345, 128_179, 2_163, 13),
    row(12, 2_878_512, 434_571, 434_274, 30_378, 13),
    row(13, 10_949_499, 1_441_816, 1_441_334, 256_975, 14),
];

pub fn published(n: usize) -> Option<&'static PublishedRow> {
    PUBLISHED.iter().find(|r| r.n == n)
}

/// Profiles tried by [`calibrate_normalization`], in order of preference.
pub const CALIBRATION_CANDIDATES: [Profile; 3] = [Profile::L1, Profile::L1T, Profile::L2];

/// Regimes whose counts depend on the normalization profile.
pub const CALIBRATED_REGIMES: [Regime; 2] = [Regime::Syntactic, Regime::Selfish];

/// Counts of one regime under one profile for one board length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalibrationCell {
    pub n: usize,
    pub profile: Profile,
    pub regime: Regime,
    pub computed: usize,
    pub published: usize,
}

/// How well each candidate profile reproduces one column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnVerdict {
    pub regime: Regime,
    /// Candidates that match every published count in the range.
    pub matching: Vec<Profile>,
    /// Sum of absolute count differences per candidate.
    pub deviation: BTreeMap<Profile, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    pub min_n: usize,
    pub max_n: usize,
    pub cells: Vec<CalibrationCell>,
    pub columns: Vec<ColumnVerdict>,
    /// Fewest unmatched columns, then smallest total deviation, then
    /// candidate order.
    pub chosen: Profile,
}

impl Calibration {
    pub fn all_matched(&self) -> bool {
        self.columns.iter().all(|c| c.matching.contains(&self.chosen))
    }

    fn cell(&self, n: usize, profile: Profile, regime: Regime) -> Option<&CalibrationCell> {
        self.cells
            .iter()
            .find(|c| c.n == n && c.profile == profile && c.regime == regime)
    }

    /// Plain-text report listing every count and each column's verdict.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for verdict in &self.columns {
            let regime = verdict.regime;
            out.push_str(&format!("{regime} (n = {}..{})\n", self.min_n, self.max_n));
            out.push_str("   n  published");
            for p in CALIBRATION_CANDIDATES {
                out.push_str(&format!(" {p:>9}"));
            }
            out.push('\n');
            for n in self.min_n..=self.max_n {
                let published = published(n).map(|r| r.get(regime)).unwrap_or(0);
                out.push_str(&format!("{n:>4} {published:>10}"));
                for p in CALIBRATION_CANDIDATES {
                    match self.cell(n, p, regime) {
                        Some(c) if c.computed == c.published => {
                            out.push_str(&format!(" {:>9}", c.computed))
                        }
                        Some(c) => out.push_str(&format!(" {:>8}*", c.computed)),
                        None => out.push_str(&format!(" {:>9}", "-")),
                    }
                }
                out.push('\n');
            }
            if verdict.matching.is_empty() {
                let closest = CALIBRATION_CANDIDATES
                    .iter()
                    .min_by_key(|p| verdict.deviation[p])
                    .expect("candidates are non-empty");
                out.push_str(&format!(
                    "  DISCREPANCY: no profile reproduces the {regime} column; closest is {closest} \
                     (total deviation {})\n",
                    verdict.deviation[closest]
                ));
            } else {
                let names: Vec<String> = verdict.matching.iter().map(|p| p.to_string()).collect();
                out.push_str(&format!("  matched by {}\n", names.join(", ")));
            }
        }
        out.push_str(&format!("chosen profile: {}\n", self.chosen));
        out
    }
}

/// Runs the profile-dependent columns under every candidate profile for
/// board lengths `min_n..=max_n` and picks the profile that best reproduces
/// the published counts. Starred entries in the report differ from the
/// published value.
pub fn calibrate_normalization(min_n: usize, max_n: usize, workers: usize) -> Result<Calibration> {
    let mut cells = Vec::new();
    for profile in CALIBRATION_CANDIDATES {
        let config = EnumerationConfig::new(&CALIBRATED_REGIMES, profile).workers(workers);
        for n in min_n.max(2)..=max_n {
            let Some(row) = published(n) else { continue };
            let report = enumerate(n, &config)?;
            for regime in CALIBRATED_REGIMES {
                cells.push(CalibrationCell {
                    n,
                    profile,
                    regime,
                    computed: report.unique_values[&regime],
                    published: row.get(regime),
                });
            }
        }
    }
    let columns: Vec<ColumnVerdict> = CALIBRATED_REGIMES
        .iter()
        .map(|&regime| {
            let mut deviation = BTreeMap::new();
            let mut matching = Vec::new();
            for profile in CALIBRATION_CANDIDATES {
                let total: u64 = cells
                    .iter()
                    .filter(|c| c.profile == profile && c.regime == regime)
                    .map(|c| c.computed.abs_diff(c.published) as u64)
                    .sum();
                deviation.insert(profile, total);
                if total == 0 {
                    matching.push(profile);
                }
            }
            ColumnVerdict {
                regime,
                matching,
                deviation,
            }
        })
        .collect();
    let chosen = *CALIBRATION_CANDIDATES
        .iter()
        .min_by_key(|p| {
            let unmatched = columns.iter().filter(|c| !c.matching.contains(p)).count();
            let total: u64 = columns.iter().map(|c| c.deviation[p]).sum();
            (unmatched, total)
        })
        .expect("candidates are non-empty");
    Ok(Calibration {
        min_n,
        max_n,
        cells,
        columns,
        chosen,
    })
}
