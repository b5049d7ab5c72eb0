//! Binary linear-code analytics: rank, echelon forms, duals, self-duality,
//! minimum distance and weight enumerators.
//!
//! Codewords are swept in reflected Gray order. The lowest `TABLE_BITS` generator
//! rows are expanded into a table of all their combinations, so the sweep is an
//! outer Gray walk over the remaining rows with an inner, dependency-free pass
//! over the table (XOR + popcount per codeword). Work is split by fixing the top
//! message bits; each segment is independent and results merge additively.

use std::ops::BitXor;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2poly::Poly;

/// Largest dimension accepted by the exhaustive sweeps.
pub const DEFAULT_SWEEP_CEILING: usize = 30;

const TABLE_BITS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCode {
    pub n: usize,
    /// 64-bit words per row.
    pub words: usize,
    /// Generator rows; bit `j` of the packed row is coordinate `j`.
    pub rows: Vec<Vec<u64>>,
}

impl BinaryCode {
    pub fn new(n: usize, rows: Vec<Vec<u64>>) -> Self {
        let words = n.div_ceil(64).max(1);
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.resize(words, 0);
                r
            })
            .collect();
        BinaryCode { n, words, rows }
    }

    pub fn from_polys(n: usize, rows: &[Poly]) -> Self {
        BinaryCode::new(n, rows.iter().map(|p| p.limbs().to_vec()).collect())
    }

    pub fn from_bitstrings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.as_ref().trim().len());
        let mut polys = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_ref().trim();
            if r.len() != n {
                return Err(Error::Parse(format!("row length {} differs from {n}", r.len())));
            }
            polys.push(Poly::from_bitstring(r)?);
        }
        Ok(BinaryCode::from_polys(n, &polys))
    }

    pub fn to_bitstrings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| Poly::from_limbs(r.clone()).to_bitstring(self.n))
            .collect()
    }

    /// Number of generator rows (the dimension, since rows are independent).
    pub fn k(&self) -> usize {
        self.rows.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightEnumerator {
    pub counts: Vec<u64>,
}

impl WeightEnumerator {
    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.counts.iter().skip(1).position(|&c| c != 0).map(|p| p + 1)
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.counts.len() - 1;
        (0..=n).all(|w| self.counts[w] == self.counts[n - w])
    }

    /// Nonzero `(weight, count)` terms.
    pub fn terms(&self) -> Vec<(usize, u64)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(w, &c)| (w, c))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinDistance {
    pub weight: usize,
    /// `true` if the sweep stopped early on a codeword below the abort threshold;
    /// `weight` is then an upper bound witnessed by that codeword.
    pub aborted: bool,
}

fn popcount(row: &[u64]) -> u32 {
    row.iter().map(|w| w.count_ones()).sum()
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Row-echelon rank over GF(2).
pub fn rank_f2(rows: &[Vec<u64>], words: usize) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..words * 64 {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..m.len()).find(|&r| m[r][w] & b != 0) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for r in rank + 1..m.len() {
            if m[r][w] & b != 0 {
                xor_into(&mut m[r], &pivot);
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Reduced row-echelon form with pivots taken in increasing coordinate order;
/// zero rows are dropped. Two codes are equal iff their forms are equal.
pub fn rref(code: &BinaryCode) -> BinaryCode {
    let (rows, _) = rref_with_pivots(&code.rows, code.words, code.n);
    BinaryCode { n: code.n, words: code.words, rows }
}

fn rref_with_pivots(rows: &[Vec<u64>], words: usize, n: usize) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..m.len()).find(|&r| m[r][w] & b != 0) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for r in 0..m.len() {
            if r != rank && m[r][w] & b != 0 {
                xor_into(&mut m[r], &pivot);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    m.truncate(rank);
    debug_assert!(m.iter().all(|r| r.len() == words));
    (m, pivots)
}

/// Basis of the dual code `{ y : <x, y> = 0 for all x in C }`.
pub fn dual_code(code: &BinaryCode) -> BinaryCode {
    let (m, pivots) = rref_with_pivots(&code.rows, code.words, code.n);
    let is_pivot = {
        let mut v = vec![false; code.n];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut out = Vec::new();
    for free in (0..code.n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; code.words];
        v[free / 64] |= 1u64 << (free % 64);
        for (r, &p) in pivots.iter().enumerate() {
            if m[r][free / 64] >> (free % 64) & 1 == 1 {
                v[p / 64] |= 1u64 << (p % 64);
            }
        }
        out.push(v);
    }
    BinaryCode { n: code.n, words: code.words, rows: out }
}

fn inner_parity(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum::<u32>() & 1
}

/// Every pair of generator rows (including each row with itself) has even overlap.
pub fn is_self_orthogonal(code: &BinaryCode) -> bool {
    code.rows.iter().enumerate().all(|(i, a)| {
        code.rows[i..].iter().all(|b| inner_parity(a, b) == 0)
    })
}

/// `n = 2k`, the rows are independent, and `G·G^T = 0`.
pub fn is_self_dual(code: &BinaryCode) -> bool {
    code.n == 2 * code.k() && rank_f2(&code.rows, code.words) == code.k() && is_self_orthogonal(code)
}

/// For a self-orthogonal code: all generator weights are `0 mod 4` and all
/// pairwise overlaps are even (both checked explicitly).
pub fn is_doubly_even(code: &BinaryCode) -> bool {
    code.rows.iter().all(|r| popcount(r) % 4 == 0) && is_self_orthogonal(code)
}

/// A packed codeword that fits in a fixed number of bits.
trait Word: Copy + Send + Sync + Default + BitXor<Output = Self> {
    fn ones(self) -> u32;
}

impl Word for u64 {
    #[inline(always)]
    fn ones(self) -> u32 {
        self.count_ones()
    }
}

impl Word for u128 {
    #[inline(always)]
    fn ones(self) -> u32 {
        self.count_ones()
    }
}

/// Codewords wider than 128 bits.
#[derive(Clone, Copy)]
struct Wide<const N: usize>([u64; N]);

impl<const N: usize> Default for Wide<N> {
    fn default() -> Self {
        Wide([0; N])
    }
}

impl<const N: usize> BitXor for Wide<N> {
    type Output = Self;

    #[inline(always)]
    fn bitxor(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a ^= b;
        }
        self
    }
}

impl<const N: usize> Word for Wide<N> {
    #[inline(always)]
    fn ones(self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
}

/// What a sweep segment reports.
trait Visitor<W: Word>: Send {
    /// Visits a block of codewords `base ^ table[j]`; returns `false` to stop.
    fn block(&mut self, base: W, table: &[W]) -> bool;
}

struct Histogram {
    counts: Vec<u64>,
}

impl<W: Word> Visitor<W> for Histogram {
    #[inline(always)]
    fn block(&mut self, base: W, table: &[W]) -> bool {
        for &t in table {
            self.counts[(base ^ t).ones() as usize] += 1;
        }
        true
    }
}

struct MinWeight<'a> {
    best: u32,
    abort_below: u32,
    stop: &'a AtomicBool,
    skip_zero: bool,
}

impl<W: Word> Visitor<W> for MinWeight<'_> {
    #[inline(always)]
    fn block(&mut self, base: W, table: &[W]) -> bool {
        let start = usize::from(std::mem::take(&mut self.skip_zero));
        let mut best = self.best;
        for &t in &table[start..] {
            best = best.min((base ^ t).ones());
        }
        self.best = best;
        if best < self.abort_below {
            self.stop.store(true, Ordering::Relaxed);
            return false;
        }
        // Poll the shared flag once per block.
        !self.stop.load(Ordering::Relaxed)
    }
}

/// Sweeps the codewords `prefix ^ span(low rows)`.
#[inline(always)]
fn sweep_segment<W: Word, V: Visitor<W>>(table: &[W], outer: &[W], prefix: W, v: &mut V) {
    let mut c = prefix;
    if !v.block(c, table) {
        return;
    }
    let steps = 1u64 << outer.len();
    for i in 1..steps {
        c = c ^ outer[i.trailing_zeros() as usize];
        if !v.block(c, table) {
            return;
        }
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "popcnt")]
unsafe fn sweep_segment_popcnt<W: Word, V: Visitor<W>>(table: &[W], outer: &[W], prefix: W, v: &mut V) {
    sweep_segment(table, outer, prefix, v)
}

fn sweep_dispatch<W: Word, V: Visitor<W>>(table: &[W], outer: &[W], prefix: W, v: &mut V) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("popcnt") {
            // SAFETY: the CPU supports the enabled feature.
            unsafe { sweep_segment_popcnt(table, outer, prefix, v) };
            return;
        }
    }
    sweep_segment(table, outer, prefix, v)
}

/// Split of a `k`-row generator matrix into table rows, Gray rows and prefix rows.
struct Plan<W> {
    table: Vec<W>,
    outer: Vec<W>,
    prefixes: Vec<W>,
}

fn plan<W: Word>(rows: &[W]) -> Plan<W> {
    let k = rows.len();
    let tb = k.min(TABLE_BITS);
    let mut table = vec![W::default(); 1 << tb];
    for j in 1..table.len() {
        let low = j.trailing_zeros() as usize;
        table[j] = table[j & (j - 1)] ^ rows[low];
    }
    let rest = &rows[tb..];
    // Enough prefixes to balance the pool without tiny segments.
    let threads = rayon::current_num_threads().max(1);
    let mut pbits = 0;
    while pbits < rest.len().saturating_sub(12) && (1usize << pbits) < 8 * threads {
        pbits += 1;
    }
    let (outer, top) = rest.split_at(rest.len() - pbits);
    let mut prefixes = vec![W::default(); 1 << pbits];
    for j in 1..prefixes.len() {
        let low = j.trailing_zeros() as usize;
        prefixes[j] = prefixes[j & (j - 1)] ^ top[low];
    }
    Plan { table, outer: outer.to_vec(), prefixes }
}

fn check_ceiling(code: &BinaryCode, ceiling: usize) -> Result<()> {
    if code.k() > ceiling {
        return Err(Error::DimensionTooLarge { k: code.k(), ceiling });
    }
    Ok(())
}

fn histogram_of<W: Word>(rows: &[W], n: usize) -> Vec<u64> {
    let p = plan(rows);
    p.prefixes
        .par_iter()
        .map(|&prefix| {
            let mut h = Histogram { counts: vec![0; n + 1] };
            sweep_dispatch(&p.table, &p.outer, prefix, &mut h);
            h.counts
        })
        .reduce(
            || vec![0; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

fn min_weight_of<W: Word>(rows: &[W], abort_below: Option<u32>) -> MinDistance {
    let p = plan(rows);
    let stop = AtomicBool::new(false);
    let threshold = abort_below.unwrap_or(0);
    let best = p
        .prefixes
        .par_iter()
        .enumerate()
        .map(|(idx, &prefix)| {
            let mut v = MinWeight { best: u32::MAX, abort_below: threshold, stop: &stop, skip_zero: idx == 0 };
            sweep_dispatch(&p.table, &p.outer, prefix, &mut v);
            v.best
        })
        .min()
        .unwrap_or(u32::MAX);
    let aborted = stop.load(Ordering::Relaxed);
    MinDistance { weight: best as usize, aborted }
}

fn to_u64(rows: &[Vec<u64>]) -> Vec<u64> {
    rows.iter().map(|r| r[0]).collect()
}

fn to_u128(rows: &[Vec<u64>]) -> Vec<u128> {
    rows.iter().map(|r| r[0] as u128 | (r.get(1).copied().unwrap_or(0) as u128) << 64).collect()
}

fn to_arr<const N: usize>(rows: &[Vec<u64>]) -> Vec<Wide<N>> {
    rows.iter()
        .map(|r| {
            let mut a = [0u64; N];
            a[..r.len()].copy_from_slice(r);
            Wide(a)
        })
        .collect()
}

macro_rules! by_width {
    ($code:expr, $f:ident ( $($arg:expr),* )) => {{
        let c = $code;
        match c.words {
            1 => $f(&to_u64(&c.rows) $(, $arg)*),
            2 => $f(&to_u128(&c.rows) $(, $arg)*),
            3 | 4 => $f(&to_arr::<4>(&c.rows) $(, $arg)*),
            5..=8 => $f(&to_arr::<8>(&c.rows) $(, $arg)*),
            9..=16 => $f(&to_arr::<16>(&c.rows) $(, $arg)*),
            w => return Err(Error::InvalidArgument(format!("length {} ({w} words) too long", c.n))),
        }
    }};
}

pub fn weight_enumerator(code: &BinaryCode) -> Result<WeightEnumerator> {
    weight_enumerator_with_ceiling(code, DEFAULT_SWEEP_CEILING)
}

pub fn weight_enumerator_with_ceiling(code: &BinaryCode, ceiling: usize) -> Result<WeightEnumerator> {
    check_ceiling(code, ceiling)?;
    let n = code.n;
    let counts = by_width!(code, histogram_of(n));
    Ok(WeightEnumerator { counts })
}

/// Exact minimum nonzero weight, or with `early_abort_below = Some(w)` the first
/// witness of weight `< w` found. A zero-dimensional code reports weight 0.
pub fn min_distance(code: &BinaryCode, early_abort_below: Option<u32>) -> Result<MinDistance> {
    min_distance_with_ceiling(code, early_abort_below, DEFAULT_SWEEP_CEILING)
}

pub fn min_distance_with_ceiling(
    code: &BinaryCode,
    early_abort_below: Option<u32>,
    ceiling: usize,
) -> Result<MinDistance> {
    check_ceiling(code, ceiling)?;
    if code.k() == 0 {
        return Ok(MinDistance { weight: 0, aborted: false });
    }
    Ok(by_width!(code, min_weight_of(early_abort_below)))
}

/// Cheap screen for light codewords: sweeps only the subcode spanned by the
/// first `log2_budget` rows of the reduced echelon form, stopping at the first
/// codeword of weight `< abort_below`. Finding none is evidence, not proof,
/// that `d >= abort_below`; `weight` is the lightest weight seen.
pub fn screen_min_distance(code: &BinaryCode, abort_below: u32, log2_budget: usize) -> Result<MinDistance> {
    let mut sub = rref(code);
    sub.rows.truncate(log2_budget);
    min_distance(&sub, Some(abort_below))
}
