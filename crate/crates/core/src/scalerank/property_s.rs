//! Zero-submatrix analysis: for an m × n nonzero pattern, search for an
//! a × b all-zero submatrix maximizing a/m + b/n. The pattern satisfies the
//! scaling precondition exactly when no such submatrix scores above 1.
//!
//! For a fixed column set W the optimal row set is forced: every row whose
//! support misses W. The search is therefore over column subsets, by branch
//! and bound within the exhaustive budget and by seeded local search above
//! it.

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::depmat::DependencyMatrix;
use crate::exactgeom::field::ExactField;

/// Nonzero mask of a matrix, rows stored as column-index bitsets.
#[derive(Clone, Debug)]
pub struct ZeroPattern {
    nrows: usize,
    ncols: usize,
    blocks: usize,
    rows: Vec<u64>, // nrows × blocks, little-endian bit blocks
}

impl ZeroPattern {
    pub fn from_supports<I, S>(nrows: usize, ncols: usize, supports: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let blocks = ncols.div_ceil(64).max(1);
        let mut rows = vec![0u64; nrows * blocks];
        let mut count = 0;
        for (k, sup) in supports.into_iter().enumerate() {
            for &c in sup.as_ref() {
                assert!(c < ncols);
                rows[k * blocks + c / 64] |= 1u64 << (c % 64);
            }
            count += 1;
        }
        assert_eq!(count, nrows);
        ZeroPattern {
            nrows,
            ncols,
            blocks,
            rows,
        }
    }

    pub fn from_bool_rows(mask: &[Vec<bool>]) -> Self {
        let nrows = mask.len();
        let ncols = mask.first().map_or(0, |r| r.len());
        let supports: Vec<Vec<usize>> = mask
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &v)| v)
                    .map(|(c, _)| c)
                    .collect()
            })
            .collect();
        ZeroPattern::from_supports(nrows, ncols, supports)
    }

    pub fn from_dep_matrix<F: ExactField>(a: &DependencyMatrix<F>) -> Self {
        ZeroPattern::from_supports(a.nrows(), a.ncols, a.rows.iter().map(|r| r.support))
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    fn row_blocks(&self, k: usize) -> &[u64] {
        &self.rows[k * self.blocks..(k + 1) * self.blocks]
    }

    fn row_hits(&self, k: usize, cols: &[u64]) -> bool {
        self.row_blocks(k)
            .iter()
            .zip(cols)
            .any(|(r, w)| r & w != 0)
    }

    /// Rows whose support misses every column of W: the forced maximal U.
    fn zero_rows(&self, cols: &[u64]) -> Vec<usize> {
        (0..self.nrows)
            .filter(|&k| !self.row_hits(k, cols))
            .collect()
    }
}

/// An a × b zero submatrix with its exact score a/m + b/n.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSubmatrixWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub score: BigRational,
}

impl ZeroSubmatrixWitness {
    fn build(pattern: &ZeroPattern, col_words: &[u64]) -> Self {
        let rows = pattern.zero_rows(col_words);
        let cols: Vec<usize> = (0..pattern.ncols)
            .filter(|c| col_words[c / 64] & (1u64 << (c % 64)) != 0)
            .collect();
        let score = score_rational(rows.len(), cols.len(), pattern.nrows, pattern.ncols);
        ZeroSubmatrixWitness { rows, cols, score }
    }

    pub fn a(&self) -> usize {
        self.rows.len()
    }

    pub fn b(&self) -> usize {
        self.cols.len()
    }
}

fn score_rational(a: usize, b: usize, m: usize, n: usize) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(m.max(1)))
        + BigRational::new(BigInt::from(b), BigInt::from(n.max(1)))
}

/// a·n + b·m > m·n ⟺ a/m + b/n > 1, in integers.
fn violates(a: usize, b: usize, m: usize, n: usize) -> bool {
    (a as u128) * (n as u128) + (b as u128) * (m as u128) > (m as u128) * (n as u128)
}

#[derive(Clone, Debug, PartialEq)]
pub enum PropertySVerdict {
    /// No zero submatrix scores above 1; certified by exhaustive search.
    Satisfied { best: ZeroSubmatrixWitness },
    /// A zero submatrix with score > 1, verified exactly.
    Violated { witness: ZeroSubmatrixWitness },
    /// Column count above the exhaustive budget and no violation found.
    Unknown { best: ZeroSubmatrixWitness },
}

impl PropertySVerdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, PropertySVerdict::Satisfied { .. })
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, PropertySVerdict::Violated { .. })
    }

    pub fn witness(&self) -> &ZeroSubmatrixWitness {
        match self {
            PropertySVerdict::Satisfied { best } => best,
            PropertySVerdict::Violated { witness } => witness,
            PropertySVerdict::Unknown { best } => best,
        }
    }
}

struct Search<'a> {
    pattern: &'a ZeroPattern,
    /// Columns ordered for branching; fewer incident rows first.
    order: Vec<usize>,
    best_an_bm: u128, // best a·n + b·m found
    best_words: Vec<u64>,
}

impl<'a> Search<'a> {
    /// Depth-first over include/exclude of order[idx..]; `alive` caches the
    /// current zero-row count. Prune when even taking every remaining column
    /// cannot beat the best (a never grows as W grows).
    fn run(&mut self, idx: usize, words: &mut Vec<u64>, alive: usize, b: usize) {
        let (m, n) = (self.pattern.nrows() as u128, self.pattern.ncols() as u128);
        let score = alive as u128 * n + b as u128 * m;
        if score > self.best_an_bm {
            self.best_an_bm = score;
            self.best_words = words.clone();
        }
        if idx == self.order.len() {
            return;
        }
        let remaining = (self.order.len() - idx) as u128;
        if alive as u128 * n + (b as u128 + remaining) * m <= self.best_an_bm {
            return;
        }
        let col = self.order[idx];
        // Include col.
        words[col / 64] |= 1u64 << (col % 64);
        let new_alive = (0..self.pattern.nrows())
            .filter(|&k| !self.pattern.row_hits(k, words))
            .count();
        self.run(idx + 1, words, new_alive, b + 1);
        words[col / 64] &= !(1u64 << (col % 64));
        // Exclude col.
        self.run(idx + 1, words, alive, b);
    }
}

pub const DEFAULT_BUDGET_COLS: usize = 24;

/// Decide the zero-submatrix score condition for a pattern.
///
/// Within the column budget the verdict is exact (branch and bound explores
/// every column subset not provably dominated). Beyond it, a seeded local
/// search either finds an exactly-verified violation or reports Unknown with
/// the best witness seen.
pub fn property_s(pattern: &ZeroPattern, budget_cols: usize, seed: u64) -> PropertySVerdict {
    let (m, n) = (pattern.nrows(), pattern.ncols());
    assert!(m > 0 && n > 0, "empty pattern");
    if n <= budget_cols {
        let mut order: Vec<usize> = (0..n).collect();
        let mut incidence = vec![0usize; n];
        for k in 0..m {
            for (c, cnt) in incidence.iter_mut().enumerate() {
                if pattern.row_hits(k, &col_word(n, c)) {
                    *cnt += 1;
                }
            }
        }
        order.sort_by_key(|&c| incidence[c]);
        let mut search = Search {
            pattern,
            order,
            best_an_bm: 0,
            best_words: vec![0u64; pattern.blocks],
        };
        let mut words = vec![0u64; pattern.blocks];
        search.run(0, &mut words, m, 0);
        let witness = ZeroSubmatrixWitness::build(pattern, &search.best_words);
        if violates(witness.a(), witness.b(), m, n) {
            PropertySVerdict::Violated { witness }
        } else {
            PropertySVerdict::Satisfied { best: witness }
        }
    } else {
        // Simulated-annealing style bit flips on the column set.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best_witness: Option<ZeroSubmatrixWitness> = None;
        for _restart in 0..8 {
            let mut words = vec![0u64; pattern.blocks];
            let mut current = ZeroSubmatrixWitness::build(pattern, &words);
            for step in 0..200 * n {
                let c = rng.gen_range(0..n);
                words[c / 64] ^= 1u64 << (c % 64);
                let cand = ZeroSubmatrixWitness::build(pattern, &words);
                let temp_accept = step % 7 == 0; // occasional uphill move
                if cand.score >= current.score || temp_accept {
                    current = cand;
                } else {
                    words[c / 64] ^= 1u64 << (c % 64);
                }
                if violates(current.a(), current.b(), m, n) {
                    return PropertySVerdict::Violated { witness: current };
                }
            }
            if best_witness
                .as_ref()
                .is_none_or(|b| current.score > b.score)
            {
                best_witness = Some(current);
            }
        }
        PropertySVerdict::Unknown {
            best: best_witness.expect("at least one restart"),
        }
    }
}

fn col_word(ncols: usize, c: usize) -> Vec<u64> {
    let mut w = vec![0u64; ncols.div_ceil(64).max(1)];
    w[c / 64] |= 1u64 << (c % 64);
    w
}

/// Brute-force oracle over all 2^n column subsets (test harnesses only).
pub fn property_s_bruteforce(pattern: &ZeroPattern) -> PropertySVerdict {
    let (m, n) = (pattern.nrows(), pattern.ncols());
    assert!(n <= 24, "oracle is exponential in the column count");
    let mut best: Option<ZeroSubmatrixWitness> = None;
    for mask in 0..(1u64 << n) {
        let words = vec![mask];
        let w = ZeroSubmatrixWitness::build(pattern, &words);
        if best.as_ref().is_none_or(|b| w.score > b.score) {
            best = Some(w);
        }
    }
    let best = best.unwrap();
    if violates(best.a(), best.b(), m, n) {
        PropertySVerdict::Violated { witness: best }
    } else {
        PropertySVerdict::Satisfied { best }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn column_of_zeros_violates() {
        // [[1,0],[1,0]]: rows zero on column 2 → a=2, b=1, score 3/2.
        let p = ZeroPattern::from_bool_rows(&[vec![true, false], vec![true, false]]);
        let v = property_s(&p, DEFAULT_BUDGET_COLS, 0);
        let PropertySVerdict::Violated { witness } = v else {
            panic!("expected violation")
        };
        assert_eq!(witness.a(), 2);
        assert_eq!(witness.b(), 1);
        assert_eq!(witness.score, score_rational(2, 1, 2, 2));
    }

    #[test]
    fn identity_pattern_satisfied() {
        for n in [2usize, 4, 6] {
            let mask: Vec<Vec<bool>> = (0..n)
                .map(|i| (0..n).map(|j| i == j).collect())
                .collect();
            let p = ZeroPattern::from_bool_rows(&mask);
            assert!(property_s(&p, DEFAULT_BUDGET_COLS, 0).is_satisfied(), "n = {}", n);
        }
    }

    #[test]
    fn branch_and_bound_matches_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..60 {
            let m = rng.gen_range(1..=14usize);
            let n = rng.gen_range(1..=10usize);
            let mask: Vec<Vec<bool>> = (0..m)
                .map(|_| (0..n).map(|_| rng.gen_bool(0.4)).collect())
                .collect();
            let p = ZeroPattern::from_bool_rows(&mask);
            let fast = property_s(&p, DEFAULT_BUDGET_COLS, 0);
            let slow = property_s_bruteforce(&p);
            assert_eq!(fast.is_violated(), slow.is_violated());
            assert_eq!(fast.witness().score, slow.witness().score);
        }
    }

    #[test]
    fn above_budget_finds_planted_violation() {
        // 30 columns, wide zero block on the last 20.
        let mut mask = vec![vec![false; 30]; 10];
        for (k, row) in mask.iter_mut().enumerate() {
            row[k % 10] = true;
        }
        let p = ZeroPattern::from_bool_rows(&mask);
        let v = property_s(&p, 24, 7);
        assert!(v.is_violated());
    }
}
