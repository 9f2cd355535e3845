//! Exhaustive Builder/Painter search for the bounded game with a
//! transposition table keyed by degree-sorted positions and an optional
//! move-ordering hint table carried over from the previous game.

use std::time::{Duration, Instant};

use std::hash::Hasher;

use hashbrown::HashTable;
use rustc_hash::FxHashMap;

use crate::book::EmitError;
use crate::graph::{
    blue_extends_to_paths, blue_is_target_path, canonical_key, has_c4_with, Colour, ColouredGraph,
    Edge, PositionKey, Relabel, MAX_VERTICES,
};
use crate::rules::{budget_prune, spare_blue_vertex_exists, GameSpec, MoveOrder, RulesError};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error(transparent)]
    Rules(#[from] RulesError),
    #[error("{spec}: {source}")]
    Emit { spec: String, source: EmitError },
}

/// A Builder move in sorted labels, `(a << 8) | b`; `0` means "no winning
/// move". Sorted labels make one entry serve every relabelling of a position.
pub type MoveCode = u16;

#[inline]
pub fn encode_move(a: u8, b: u8) -> MoveCode {
    ((a as u16) << 8) | b as u16
}

#[inline]
pub fn decode_move(m: MoveCode) -> (u8, u8) {
    ((m >> 8) as u8, (m & 0xff) as u8)
}

/// Translates a board label to its sorted label. Labels at or past the
/// used-vertex count are fresh and keep their value.
#[inline]
fn to_sorted(relabel: &Relabel, v: usize, a: u8) -> u8 {
    if (a as usize) < v {
        relabel.to_sorted(a)
    } else {
        a
    }
}

#[inline]
fn to_board(relabel: &Relabel, v: usize, s: u8) -> u8 {
    if (s as usize) < v {
        relabel.to_board(s)
    } else {
        s
    }
}

/// Vertex caps up to this size use the packed table layout.
const PACKED_MAX_VERTICES: usize = 14;
/// Vertex caps from this size up to [`PACKED_MAX_VERTICES`] store 128-bit
/// fingerprints of the packed key instead of the key itself.
const FINGERPRINT_MIN_VERTICES: usize = 14;
const PACKED_ROW_BITS: usize = PACKED_MAX_VERTICES - 1;
const MOVE_SHIFT: u32 = 56;
const KEY_MASK_HI: u64 = (1 << MOVE_SHIFT) - 1;

/// Packs a key of a position on at most 14 vertices into 182 bits (each row
/// without its always-zero diagonal bit), leaving the top byte free.
#[inline]
fn pack_key(key: &PositionKey) -> [u64; 3] {
    let mut words = [0u64; 3];
    for (s, &row) in key.rows()[..PACKED_MAX_VERTICES].iter().enumerate() {
        let row = row as u64;
        let low = row & ((1 << s) - 1);
        let high = row >> (s + 1);
        let bits = low | (high << s);
        let off = s * PACKED_ROW_BITS;
        let (w, b) = (off / 64, off % 64);
        words[w] |= bits << b;
        if b + PACKED_ROW_BITS > 64 {
            words[w + 1] |= bits >> (64 - b);
        }
    }
    words
}

/// Move stored in one byte: sorted labels fit in four bits each and `0`
/// (a loop) doubles as "no winning move".
#[inline]
fn move_to_byte(m: MoveCode) -> u64 {
    let (a, b) = decode_move(m);
    ((a as u64) << 4) | b as u64
}

#[inline]
fn byte_to_move(x: u64) -> MoveCode {
    if x == 0 {
        0
    } else {
        encode_move((x >> 4) as u8, (x & 15) as u8)
    }
}

#[inline]
fn hash_packed(w: &[u64; 3]) -> u64 {
    let mut h = rustc_hash::FxHasher::default();
    h.write_u64(w[0]);
    h.write_u64(w[1]);
    h.write_u64(w[2] & KEY_MASK_HI);
    h.finish()
}

#[inline]
fn fold_mul(a: u64, b: u64) -> u64 {
    let p = (a as u128) * (b as u128);
    (p as u64) ^ ((p >> 64) as u64)
}

/// Two independent 64-bit hashes of a packed key; the top byte is left for
/// the move.
#[inline]
fn fingerprint(w: &[u64; 3]) -> u128 {
    const K: [u64; 4] = [
        0x9e37_79b9_7f4a_7c15,
        0xbf58_476d_1ce4_e5b9,
        0x94d0_49bb_1331_11eb,
        0xd6e8_feb8_6659_fd93,
    ];
    let a = fold_mul(w[0] ^ K[0], w[1] ^ K[1]);
    let a = fold_mul(a ^ w[2] ^ K[2], K[3]);
    let b = fold_mul(w[2] ^ K[3], w[0] ^ K[2]);
    let b = fold_mul(b ^ w[1] ^ K[1], K[0]);
    (((a as u128) << 64) | b as u128) & FP_MASK
}

#[inline]
fn fp_hash(x: u128) -> u64 {
    (x & FP_MASK) as u64
}

const FP_SHIFT: u32 = 120;
const FP_MASK: u128 = (1 << FP_SHIFT) - 1;

#[derive(Clone)]
enum Store {
    /// 24 bytes per entry: packed key with the move in the top byte.
    Packed(HashTable<[u64; 3]>),
    /// 16 bytes per entry: 120-bit key fingerprint with the move on top.
    /// A collision could only confuse two positions; every emitted book is
    /// still checked by the independent verifier.
    Fingerprint(HashTable<u128>),
    Wide(FxHashMap<PositionKey, MoveCode>),
}

/// Analysed positions of one game and their winning moves.
#[derive(Clone)]
pub struct TranspositionTable {
    store: Store,
}

impl Default for TranspositionTable {
    fn default() -> Self {
        Self::for_vertices(MAX_VERTICES)
    }
}

impl TranspositionTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// A table for games on at most `v` vertices.
    pub fn for_vertices(v: usize) -> Self {
        let store = if (FINGERPRINT_MIN_VERTICES..=PACKED_MAX_VERTICES).contains(&v) {
            Store::Fingerprint(HashTable::new())
        } else if v <= PACKED_MAX_VERTICES {
            Store::Packed(HashTable::new())
        } else {
            Store::Wide(FxHashMap::default())
        };
        TranspositionTable { store }
    }

    #[inline]
    pub fn get(&self, key: &PositionKey) -> Option<MoveCode> {
        match &self.store {
            Store::Packed(t) => {
                let p = pack_key(key);
                t.find(hash_packed(&p), |w| {
                    w[0] == p[0] && w[1] == p[1] && w[2] & KEY_MASK_HI == p[2]
                })
                .map(|w| byte_to_move(w[2] >> MOVE_SHIFT))
            }
            Store::Fingerprint(t) => {
                let f = fingerprint(&pack_key(key));
                t.find(fp_hash(f), |&x| x & FP_MASK == f)
                    .map(|&x| byte_to_move((x >> FP_SHIFT) as u64))
            }
            Store::Wide(m) => m.get(key).copied(),
        }
    }

    pub fn len(&self) -> usize {
        match &self.store {
            Store::Packed(t) => t.len(),
            Store::Fingerprint(t) => t.len(),
            Store::Wide(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Board-label move stored for `pos`, if it is a known win.
    pub fn winning_move(&self, pos: &ColouredGraph, v: usize) -> Option<Edge> {
        let (key, relabel) = canonical_key(pos, v);
        match self.get(&key) {
            Some(m) if m != 0 => {
                let (a, b) = decode_move(m);
                Some((to_board(&relabel, v, a), to_board(&relabel, v, b)))
            }
            _ => None,
        }
    }

    /// Drops every losing entry. Used when a finished table only serves as
    /// move hints for the next game.
    pub fn retain_wins(&mut self) {
        match &mut self.store {
            Store::Packed(t) => {
                t.retain(|w| w[2] >> MOVE_SHIFT != 0);
                t.shrink_to_fit(|w| hash_packed(w));
            }
            Store::Fingerprint(t) => {
                t.retain(|x| *x >> FP_SHIFT != 0);
                t.shrink_to_fit(|&x| fp_hash(x));
            }
            Store::Wide(m) => {
                m.retain(|_, v| *v != 0);
                m.shrink_to_fit();
            }
        }
    }

    #[inline]
    fn insert(&mut self, key: PositionKey, m: MoveCode) {
        match &mut self.store {
            Store::Packed(t) => {
                let mut p = pack_key(&key);
                let h = hash_packed(&p);
                p[2] |= move_to_byte(m) << MOVE_SHIFT;
                t.insert_unique(h, p, |w| hash_packed(w));
            }
            Store::Fingerprint(t) => {
                let f = fingerprint(&pack_key(&key));
                let x = f | ((move_to_byte(m) as u128) << FP_SHIFT);
                t.insert_unique(fp_hash(f), x, |&x| fp_hash(x));
            }
            Store::Wide(map) => {
                map.insert(key, m);
            }
        }
    }
}

/// Counters reported after a solve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Positions looked up and not found in the table.
    pub unique_positions: u64,
    /// All positions looked up.
    pub total_positions: u64,
}

/// Switches for the search. Disabling a pruning or the table never turns a
/// Builder win into a loss; it only costs time.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub memo: bool,
    pub budget_prune: bool,
    pub spare_vertex: bool,
    /// Log a progress line every `2^k` unique positions.
    pub progress_every_log2: Option<u32>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            memo: true,
            budget_prune: true,
            spare_vertex: true,
            progress_every_log2: None,
        }
    }
}

/// Search state for one game.
pub struct Solver<'h> {
    spec: GameSpec,
    table: TranspositionTable,
    hints: Option<&'h TranspositionTable>,
    opts: SolveOptions,
    stats: SolveStats,
}

impl<'h> Solver<'h> {
    pub fn new(spec: GameSpec, hints: Option<&'h TranspositionTable>, opts: SolveOptions) -> Self {
        Solver {
            table: TranspositionTable::for_vertices(spec.v),
            spec,
            hints,
            opts,
            stats: SolveStats::default(),
        }
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn stats(&self) -> SolveStats {
        self.stats
    }

    pub fn table(&self) -> &TranspositionTable {
        &self.table
    }

    pub fn into_table(self) -> TranspositionTable {
        self.table
    }

    /// Replaces the start position, keeping the table. Starts of one game
    /// share a table and a book.
    pub fn set_start(&mut self, start: crate::rules::StartPosition) {
        self.spec.start = start;
    }

    /// Solves from the configured start; `true` iff Builder wins.
    pub fn solve(&mut self) -> Result<bool, RulesError> {
        let g = self.spec.validate()?;
        Ok(self.solve_builder(&g, self.spec.start_vertices()))
    }

    /// Builder to move in `pos` with `v` used vertices. Returns `true` iff
    /// Builder has a winning move, memoising the first one found.
    pub fn solve_builder(&mut self, pos: &ColouredGraph, v: usize) -> bool {
        if self.opts.budget_prune && budget_prune(pos, &self.spec) {
            return false;
        }
        let (key, relabel) = canonical_key(pos, v);
        self.stats.total_positions += 1;
        if self.opts.memo {
            if let Some(m) = self.table.get(&key) {
                return m != 0;
            }
        }
        self.stats.unique_positions += 1;
        if let Some(k) = self.opts.progress_every_log2 {
            if self.stats.unique_positions & ((1u64 << k) - 1) == 0 {
                log::info!(
                    "{}: {} unique positions analysed so far",
                    self.spec,
                    self.stats.unique_positions
                );
            }
        }
        if pos.edge_count() >= self.spec.e {
            return false;
        }

        let mut hint = None;
        if let Some(hints) = self.hints {
            if let Some(m) = hints.get(&key).filter(|&m| m != 0) {
                let (a, b) = decode_move(m);
                hint = Some((to_board(&relabel, v, a), to_board(&relabel, v, b)));
            }
        }
        for (a, b) in MoveOrder::new(pos, v, self.spec.v, hint) {
            let next_v = v.max(a as usize + 1).max(b as usize + 1);
            if self.solve_painter(pos, next_v, a, b) {
                let m = encode_move(to_sorted(&relabel, v, a), to_sorted(&relabel, v, b));
                if self.opts.memo {
                    self.table.insert(key, m);
                }
                return true;
            }
        }
        if self.opts.memo {
            self.table.insert(key, 0);
        }
        false
    }

    /// Builder proposed `a-b`. Returns `true` iff every colour Painter may
    /// choose loses for Painter.
    pub fn solve_painter(&mut self, pos: &ColouredGraph, v: usize, a: u8, b: u8) -> bool {
        if !blue_extends_to_paths(pos.blue(), a, b) {
            return false;
        }
        let mut blue_next = *pos;
        blue_next.add_unchecked(a, b, Colour::Blue);
        if self.opts.spare_vertex && !spare_blue_vertex_exists(&blue_next, &self.spec) {
            return false;
        }
        if !has_c4_with(pos.red(), a, b) {
            let mut red_next = *pos;
            red_next.add_unchecked(a, b, Colour::Red);
            if !self.solve_builder(&red_next, v) {
                return false;
            }
        }
        let wins = blue_next.blue_count() == self.spec.n - 1
            && blue_is_target_path(blue_next.blue(), self.spec.n);
        wins || self.solve_builder(&blue_next, v)
    }
}

/// Result of one game of a series: one `rc` per start that fits the cap.
#[derive(Clone, Debug)]
pub struct GameResult {
    pub spec: GameSpec,
    pub starts: Vec<StartResult>,
    pub book: String,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct StartResult {
    pub start: crate::rules::StartPosition,
    pub rc: bool,
    pub stats: SolveStats,
}

/// Solves every game of `games` in order. Game `T` uses the table of game
/// `T-1` for move ordering unless `use_hints` is false. Each finished game
/// is handed to `on_game` before the next one starts. Books are read off the
/// transposition table, so they stay empty when `opts.memo` is off.
pub fn run_game_series(
    games: &[crate::config::SeriesGame],
    use_hints: bool,
    opts: SolveOptions,
    mut on_game: impl FnMut(&GameResult),
) -> Result<Vec<GameResult>, SeriesError> {
    let mut results = Vec::with_capacity(games.len());
    let mut prev: Option<TranspositionTable> = None;
    for game in games {
        let started = Instant::now();
        let hints = if use_hints { prev.as_ref() } else { None };
        let mut solver = Solver::new(game.spec_for(&game.starts[0]), hints, opts);
        let mut book = crate::book::BookWriter::new();
        let mut starts = Vec::new();
        for start in &game.starts {
            let spec = game.spec_for(start);
            if let Some(m) = start.max_vertex() {
                if m as usize >= spec.v {
                    continue;
                }
            }
            spec.validate()?;
            solver.set_start(start.clone());
            let before = solver.stats();
            let rc = solver.solve()?;
            let after = solver.stats();
            log::info!(
                "{spec}={} unique/total positions analysed: {}/{}",
                rc as u8,
                after.unique_positions - before.unique_positions,
                after.total_positions - before.total_positions,
            );
            if opts.memo {
                book.write_game(&mut solver, rc)
                    .map_err(|source| SeriesError::Emit {
                        spec: spec.to_string(),
                        source,
                    })?;
            }
            starts.push(StartResult {
                start: start.clone(),
                rc,
                stats: SolveStats {
                    unique_positions: after.unique_positions - before.unique_positions,
                    total_positions: after.total_positions - before.total_positions,
                },
            });
        }
        let result = GameResult {
            spec: game.spec_for(&game.starts[0]),
            starts,
            book: book.finish(),
            elapsed: started.elapsed(),
        };
        on_game(&result);
        results.push(result);
        let mut table = solver.into_table();
        table.retain_wins();
        prev = Some(table);
    }
    Ok(results)
}
