//! Diagonal Latin squares, the skew pair property, and the derived triple
//! systems used to select collinear triples.
//!
//! Indexing is 1-based throughout this module; conversions to 0-based column
//! indices happen at the call sites that build matrices.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatinError {
    #[error("diagonal Latin squares require r >= 3, got {0}")]
    OrderTooSmallDiagonal(usize),
    #[error("skew diagonal Latin squares require r >= 4, got {0}")]
    OrderTooSmallSkew(usize),
    #[error("triple systems require r >= 3, got {0}")]
    OrderTooSmallTriples(usize),
    #[error("search budget exhausted for order {0}")]
    SearchExhausted(usize),
}

/// An r × r array over [r] in which every row and column is a permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinSquare {
    order: usize,
    entries: Vec<usize>, // row-major, values 1..=r
}

impl LatinSquare {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Self {
        let order = rows.len();
        assert!(rows.iter().all(|r| r.len() == order), "square shape");
        LatinSquare {
            order,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry L_ij with 1-based indices, valued in 1..=r.
    pub fn get(&self, i: usize, j: usize) -> usize {
        assert!(1 <= i && i <= self.order && 1 <= j && j <= self.order);
        self.entries[(i - 1) * self.order + (j - 1)]
    }

    pub fn is_latin(&self) -> bool {
        let r = self.order;
        let mut seen = vec![false; r + 1];
        for i in 1..=r {
            seen.iter_mut().for_each(|s| *s = false);
            for j in 1..=r {
                let v = self.get(i, j);
                if v < 1 || v > r || seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        for j in 1..=r {
            seen.iter_mut().for_each(|s| *s = false);
            for i in 1..=r {
                let v = self.get(i, j);
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        true
    }

    pub fn is_diagonal(&self) -> bool {
        (1..=self.order).all(|i| self.get(i, i) == i)
    }

    /// L_ij ≠ L_ji for all i ≠ j.
    pub fn is_skew(&self) -> bool {
        for i in 1..=self.order {
            for j in i + 1..=self.order {
                if self.get(i, j) == self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.order.to_string().len();
        for i in 1..=self.order {
            let row: Vec<String> = (1..=self.order)
                .map(|j| format!("{:>width$}", self.get(i, j), width = width))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// The explicit order-6 square: diagonal with L_ij ≠ L_ji, covering the one
/// order where no self-orthogonal square exists.
fn six_by_six() -> LatinSquare {
    LatinSquare::from_rows(vec![
        vec![1, 4, 5, 3, 6, 2],
        vec![3, 2, 6, 5, 1, 4],
        vec![2, 5, 3, 6, 4, 1],
        vec![6, 1, 2, 4, 3, 5],
        vec![4, 6, 1, 2, 5, 3],
        vec![5, 3, 4, 1, 2, 6],
    ])
}

/// L_ij = ((2(i−1) − (j−1)) mod r) + 1. Latin for odd r, always diagonal,
/// and skew exactly when 3 does not divide r.
fn linear_square(r: usize) -> LatinSquare {
    let entries = (0..r)
        .flat_map(|i| (0..r).map(move |j| ((2 * i + r - j % r) % r) + 1))
        .collect();
    LatinSquare { order: r, entries }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Arithmetic tables for GF(p^k), elements indexed 0..p^k−1 by base-p digits.
struct SmallField {
    q: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
}

impl SmallField {
    fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }
}

fn factor_prime_power(q: usize) -> Option<(usize, u32)> {
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut m = q;
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            return if m == 1 { Some((p, k)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

fn poly_mod_mul(a: &[usize], b: &[usize], modulus: &[usize], p: usize) -> Vec<usize> {
    let k = modulus.len() - 1;
    let mut raw = vec![0usize; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            raw[i + j] = (raw[i + j] + ai * bj) % p;
        }
    }
    // reduce: x^k = −(lower modulus terms)
    for d in (k..raw.len()).rev() {
        let c = raw[d];
        if c == 0 {
            continue;
        }
        raw[d] = 0;
        for t in 0..k {
            let sub = (c * modulus[t]) % p;
            raw[d - k + t] = (raw[d - k + t] + p * p - sub) % p;
        }
    }
    raw.truncate(k);
    raw.resize(k, 0);
    raw
}

fn find_irreducible(p: usize, k: u32) -> Vec<usize> {
    if k == 1 {
        return vec![0, 1];
    }
    let k = k as usize;
    // Iterate monic polynomials of degree k; test for factors of degree ≤ k/2.
    let count = (p as u64).pow(k as u32);
    'outer: for code in 0..count {
        let mut cand = vec![0usize; k + 1];
        let mut c = code;
        for item in cand.iter_mut().take(k) {
            *item = (c % p as u64) as usize;
            c /= p as u64;
        }
        cand[k] = 1;
        if cand[0] == 0 {
            continue; // divisible by x
        }
        for deg in 1..=k / 2 {
            let dcount = (p as u64).pow(deg as u32);
            for dcode in 0..dcount {
                let mut div = vec![0usize; deg + 1];
                let mut dc = dcode;
                for item in div.iter_mut().take(deg) {
                    *item = (dc % p as u64) as usize;
                    dc /= p as u64;
                }
                div[deg] = 1;
                if poly_rem_is_zero(&cand, &div, p) {
                    continue 'outer;
                }
            }
        }
        return cand;
    }
    unreachable!("irreducible polynomial of degree {} over GF({}) exists", k, p)
}

fn poly_rem_is_zero(num: &[usize], den: &[usize], p: usize) -> bool {
    let mut rem: Vec<usize> = num.to_vec();
    let dd = den.len() - 1;
    let inv_lead = mod_inverse(den[dd], p);
    while rem.len() > dd {
        while rem.last() == Some(&0) && rem.len() > dd {
            rem.pop();
        }
        if rem.len() <= dd {
            break;
        }
        let rd = rem.len() - 1;
        let coef = (rem[rd] * inv_lead) % p;
        let shift = rd - dd;
        for (i, &c) in den.iter().enumerate() {
            let sub = (coef * c) % p;
            rem[shift + i] = (rem[shift + i] + p * p - sub) % p;
        }
    }
    rem.iter().all(|&c| c == 0)
}

fn mod_inverse(a: usize, p: usize) -> usize {
    // p prime, a ≠ 0 mod p
    let mut result = 1usize;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn small_field(q: usize) -> Option<SmallField> {
    let (p, k) = factor_prime_power(q)?;
    let modulus = find_irreducible(p, k);
    let k = k as usize;
    let digits = |mut x: usize| -> Vec<usize> {
        let mut d = vec![0usize; k];
        for item in d.iter_mut() {
            *item = x % p;
            x /= p;
        }
        d
    };
    let index = |d: &[usize]| -> usize {
        let mut x = 0;
        for &c in d.iter().rev() {
            x = x * p + c;
        }
        x
    };
    let mut add = vec![0usize; q * q];
    let mut mul = vec![0usize; q * q];
    for a in 0..q {
        let da = digits(a);
        for b in 0..q {
            let db = digits(b);
            let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[a * q + b] = index(&sum);
            mul[a * q + b] = index(&poly_mod_mul(&da, &db, &modulus, p));
        }
    }
    Some(SmallField { q, add, mul })
}

/// L_xy = a·x + (1−a)·y over GF(q): Latin, diagonal, and skew since
/// a − (1−a) ≠ 0 for the chosen a (automatic in characteristic 2).
fn gf_linear_square(q: usize) -> Option<LatinSquare> {
    let f = small_field(q)?;
    if q < 4 {
        return None;
    }
    let one = 1usize; // index of the unit digit vector
    let a = (2..q).find(|&a| {
        let b = (0..q).find(|&b| f.add(a, b) == one).unwrap(); // b = 1 − a
        a != b && a != 0 && b != 0
    })?;
    let b = (0..q).find(|&b| f.add(a, b) == one).unwrap();
    let entries = (0..q)
        .flat_map(|x| (0..q).map(move |y| (x, y)))
        .map(|(x, y)| f.add(f.mul(a, x), f.mul(b, y)) + 1)
        .collect();
    Some(LatinSquare { order: q, entries })
}

/// Adjoin one symbol along a transversal: cells of the transversal take the
/// new symbol and their displaced values fill the new row and column. The
/// transversal must avoid the diagonal; when it is antisymmetric as a cell
/// set the skew property survives.
fn prolong(base: &LatinSquare, transversal: &[(usize, usize)]) -> LatinSquare {
    let q = base.order;
    let r = q + 1;
    let mut entries = vec![0usize; r * r];
    for i in 1..=q {
        for j in 1..=q {
            entries[(i - 1) * r + (j - 1)] = base.get(i, j);
        }
    }
    for &(i, j) in transversal {
        debug_assert_ne!(i, j);
        let v = base.get(i, j);
        entries[(i - 1) * r + (j - 1)] = r;
        entries[(i - 1) * r + (r - 1)] = v; // displaced value → new column
        entries[(r - 1) * r + (j - 1)] = v; // displaced value → new row
    }
    entries[(r - 1) * r + (r - 1)] = r;
    LatinSquare { order: r, entries }
}

/// Off-diagonal antisymmetric transversal of the linear square of odd order:
/// the broken diagonal j = i + 1.
fn linear_transversal(q: usize) -> Vec<(usize, usize)> {
    debug_assert!(q % 2 == 1);
    (0..q).map(|i| (i + 1, (i + 1) % q + 1)).collect()
}

/// Same for the GF(q) linear square in odd characteristic: y = x + 1.
fn gf_transversal(q: usize) -> Vec<(usize, usize)> {
    let f = small_field(q).expect("prime power");
    (0..q).map(|x| (x + 1, f.add(x, 1) + 1)).collect()
}

/// Direct product: entry ((i,p),(j,q)) ↦ (L_ij, M_pq) with pairs indexed
/// lexicographically; preserves Latin, diagonal and skew.
fn product_square(l: &LatinSquare, m: &LatinSquare) -> LatinSquare {
    let (u, v) = (l.order, m.order);
    let r = u * v;
    let idx = |a: usize, b: usize| (a - 1) * v + b; // 1-based pair index
    let mut entries = vec![0usize; r * r];
    for i in 1..=u {
        for p in 1..=v {
            for j in 1..=u {
                for q in 1..=v {
                    let row = idx(i, p);
                    let col = idx(j, q);
                    entries[(row - 1) * r + (col - 1)] = idx(l.get(i, j), m.get(p, q));
                }
            }
        }
    }
    LatinSquare { order: r, entries }
}

/// Deterministic constructions for skew diagonal squares; `None` when only
/// search applies.
fn skew_constructive(r: usize) -> Option<LatinSquare> {
    if r < 4 {
        return None;
    }
    if gcd(r, 6) == 1 {
        return Some(linear_square(r));
    }
    if r == 6 {
        return Some(six_by_six());
    }
    if let Some((p, k)) = factor_prime_power(r) {
        if k >= 1 && (p == 2 || p > 2) {
            if let Some(sq) = gf_linear_square(r) {
                return Some(sq);
            }
        }
    }
    // Prolongation from an odd base one smaller.
    let q = r - 1;
    if q >= 5 && q % 2 == 1 {
        if gcd(q, 6) == 1 {
            return Some(prolong(&linear_square(q), &linear_transversal(q)));
        }
        if let Some((p, _)) = factor_prime_power(q) {
            if p % 2 == 1 {
                if let Some(base) = gf_linear_square(q) {
                    return Some(prolong(&base, &gf_transversal(q)));
                }
            }
        }
    }
    // Direct product of two smaller constructive squares.
    let mut u = 4;
    while u * u <= r {
        if r % u == 0 {
            let v = r / u;
            if v >= 4 {
                if let (Some(a), Some(b)) = (skew_constructive(u), skew_constructive(v)) {
                    return Some(product_square(&a, &b));
                }
            }
        }
        u += 1;
    }
    None
}

/// Randomized backtracking with minimum-remaining-values cell selection and
/// seeded value order; restarts on budget exhaustion. Diagonal cells are
/// prefilled, the skew constraint (when requested) prunes as cells fill.
fn search_square(r: usize, require_skew: bool, seed: u64) -> Option<LatinSquare> {
    assert!(r <= 64, "bitmask solver supports orders up to 64");
    let full: u64 = if r == 64 { !0 } else { (1u64 << r) - 1 };

    struct State {
        r: usize,
        grid: Vec<u16>, // 0 = empty, else value
        row_used: Vec<u64>,
        col_used: Vec<u64>,
        nodes: u64,
        budget: u64,
        require_skew: bool,
    }

    impl State {
        fn candidates(&self, i: usize, j: usize, full: u64) -> u64 {
            let mut c = full & !self.row_used[i] & !self.col_used[j];
            if self.require_skew {
                let mirror = self.grid[j * self.r + i];
                if mirror != 0 {
                    c &= !(1u64 << (mirror - 1));
                }
            }
            c
        }

        fn solve(&mut self, rng: &mut ChaCha8Rng, full: u64) -> bool {
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            // Minimum-remaining-values cell.
            let mut best: Option<(usize, usize, u64, u32)> = None;
            for i in 0..self.r {
                for j in 0..self.r {
                    if self.grid[i * self.r + j] != 0 {
                        continue;
                    }
                    let c = self.candidates(i, j, full);
                    let k = c.count_ones();
                    if k == 0 {
                        return false;
                    }
                    if best.as_ref().is_none_or(|b| k < b.3) {
                        best = Some((i, j, c, k));
                        if k == 1 {
                            break;
                        }
                    }
                }
                if best.as_ref().is_some_and(|b| b.3 == 1) {
                    break;
                }
            }
            let Some((i, j, cands, _)) = best else {
                return true; // no empty cells left
            };
            let mut values: Vec<u16> = (0..64)
                .filter(|b| cands & (1u64 << b) != 0)
                .map(|b| (b + 1) as u16)
                .collect();
            values.shuffle(rng);
            for v in values {
                let bit = 1u64 << (v - 1);
                self.grid[i * self.r + j] = v;
                self.row_used[i] |= bit;
                self.col_used[j] |= bit;
                if self.solve(rng, full) {
                    return true;
                }
                self.grid[i * self.r + j] = 0;
                self.row_used[i] &= !bit;
                self.col_used[j] &= !bit;
            }
            false
        }
    }

    // Rapid restarts: stuck attempts are abandoned early, a fresh value
    // order usually completes within a few thousand nodes.
    for attempt in 0..400u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9)));
        let mut st = State {
            r,
            grid: vec![0; r * r],
            row_used: vec![0; r],
            col_used: vec![0; r],
            nodes: 0,
            budget: 3_000u64.saturating_mul(r as u64),
            require_skew,
        };
        for i in 0..r {
            let bit = 1u64 << i;
            st.grid[i * r + i] = (i + 1) as u16;
            st.row_used[i] |= bit;
            st.col_used[i] |= bit;
        }
        if st.solve(&mut rng, full) {
            let entries = st.grid.iter().map(|&v| v as usize).collect();
            return Some(LatinSquare { order: r, entries });
        }
    }
    None
}

type MemoKey = (usize, bool);
static SQUARE_MEMO: OnceLock<RwLock<HashMap<MemoKey, Arc<LatinSquare>>>> = OnceLock::new();

fn memo() -> &'static RwLock<HashMap<MemoKey, Arc<LatinSquare>>> {
    SQUARE_MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

fn memoized(r: usize, skew: bool, build: impl FnOnce() -> Result<LatinSquare, LatinError>) -> Result<Arc<LatinSquare>, LatinError> {
    if let Some(sq) = memo().read().unwrap().get(&(r, skew)) {
        return Ok(sq.clone());
    }
    let sq = Arc::new(build()?);
    memo().write().unwrap().insert((r, skew), sq.clone());
    Ok(sq)
}

/// A diagonal Latin square (L_ii = i) of order r ≥ 3: the linear square for
/// odd orders, a prolongation of the one-smaller linear square for even.
pub fn diagonal_square(r: usize) -> Result<Arc<LatinSquare>, LatinError> {
    if r < 3 {
        return Err(LatinError::OrderTooSmallDiagonal(r));
    }
    memoized(r, false, || {
        let sq = if r % 2 == 1 {
            linear_square(r)
        } else {
            prolong(&linear_square(r - 1), &linear_transversal(r - 1))
        };
        assert!(sq.is_latin() && sq.is_diagonal());
        Ok(sq)
    })
}

/// A diagonal Latin square with L_ij ≠ L_ji off the diagonal, order r ≥ 4.
///
/// Construction ladder, every rung verified before use: the linear formula
/// when gcd(r, 6) = 1; the explicit matrix for r = 6; a linear square over
/// GF(p^k) for prime powers; prolongation along an antisymmetric transversal
/// from an odd linear or GF base one smaller; direct products of smaller
/// skew squares; and finally seeded backtracking with restarts.
pub fn skew_diagonal_square(r: usize) -> Result<Arc<LatinSquare>, LatinError> {
    if r < 4 {
        return Err(LatinError::OrderTooSmallSkew(r));
    }
    memoized(r, true, || {
        let sq = match skew_constructive(r) {
            Some(sq) => sq,
            None => search_square(r, true, 0x5CE3_0000 + r as u64)
                .ok_or(LatinError::SearchExhausted(r))?,
        };
        assert!(sq.is_latin() && sq.is_diagonal() && sq.is_skew());
        Ok(sq)
    })
}

/// r² − r ordered triples over [r] with the design properties needed for
/// dependency matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSystem {
    order: usize,
    triples: Vec<[usize; 3]>,
}

impl TripleSystem {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Property 1: each triple has three distinct elements.
    pub fn all_triples_distinct(&self) -> bool {
        self.triples
            .iter()
            .all(|t| t[0] != t[1] && t[0] != t[2] && t[1] != t[2])
    }

    /// Property 2: every unordered pair i ≠ j lies in exactly 6 triples.
    pub fn pair_counts_exactly_six(&self) -> bool {
        let r = self.order;
        let mut counts = vec![0usize; (r + 1) * (r + 1)];
        for t in &self.triples {
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                counts[a * (r + 1) + b] += 1;
            }
        }
        for i in 1..=r {
            for j in i + 1..=r {
                if counts[i * (r + 1) + j] != 6 {
                    return false;
                }
            }
        }
        true
    }

    /// Property 3 (r ≥ 4): every pair has at least two triples whose
    /// remaining elements differ.
    pub fn pairs_have_distinct_thirds(&self) -> bool {
        let r = self.order;
        let mut thirds: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for t in &self.triples {
            for (a, b, c) in [
                (t[0], t[1], t[2]),
                (t[0], t[2], t[1]),
                (t[1], t[2], t[0]),
            ] {
                let key = if a < b { (a, b) } else { (b, a) };
                thirds.entry(key).or_default().push(c);
            }
        }
        for i in 1..=r {
            for j in i + 1..=r {
                match thirds.get(&(i, j)) {
                    Some(v) => {
                        let mut distinct = v.clone();
                        distinct.sort_unstable();
                        distinct.dedup();
                        if distinct.len() < 2 {
                            return false;
                        }
                    }
                    None => return false,
                }
            }
        }
        true
    }
}

/// The triple system {(i, j, L_ij) : i ≠ j} over a skew diagonal square for
/// r ≥ 4 (a plain diagonal square for r = 3), with all properties verified
/// before returning.
pub fn triple_system(r: usize) -> Result<TripleSystem, LatinError> {
    if r < 3 {
        return Err(LatinError::OrderTooSmallTriples(r));
    }
    let square = if r == 3 {
        diagonal_square(3)?
    } else {
        skew_diagonal_square(r)?
    };
    let mut triples = Vec::with_capacity(r * r - r);
    for i in 1..=r {
        for j in 1..=r {
            if i != j {
                triples.push([i, j, square.get(i, j)]);
            }
        }
    }
    let ts = TripleSystem { order: r, triples };
    assert_eq!(ts.len(), r * r - r);
    assert!(ts.all_triples_distinct(), "property 1 failed at r = {}", r);
    assert!(ts.pair_counts_exactly_six(), "property 2 failed at r = {}", r);
    if r >= 4 {
        assert!(
            ts.pairs_have_distinct_thirds(),
            "property 3 failed at r = {}",
            r
        );
    }
    Ok(ts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_three_matches_expected() {
        let sq = diagonal_square(3).unwrap();
        let expect = LatinSquare::from_rows(vec![vec![1, 3, 2], vec![3, 2, 1], vec![2, 1, 3]]);
        assert_eq!(*sq, expect);
        // First row sorted is [r].
        let mut row: Vec<usize> = (1..=3).map(|j| sq.get(1, j)).collect();
        row.sort_unstable();
        assert_eq!(row, vec![1, 2, 3]);
    }

    #[test]
    fn six_matches_explicit_matrix() {
        let sq = skew_diagonal_square(6).unwrap();
        assert_eq!(sq.get(1, 1), 1);
        let first_row: Vec<usize> = (1..=6).map(|j| sq.get(1, j)).collect();
        assert_eq!(first_row, vec![1, 4, 5, 3, 6, 2]);
        assert!(sq.is_latin() && sq.is_diagonal() && sq.is_skew());
    }

    #[test]
    fn linear_formula_orders() {
        for r in [5usize, 7, 11, 25, 35, 49] {
            let sq = skew_diagonal_square(r).unwrap();
            assert!(sq.is_latin() && sq.is_diagonal() && sq.is_skew(), "r = {}", r);
            // gcd(r, 6) = 1 construction is the linear one.
            assert_eq!(sq.get(1, 2), ((2 * 0 + r - 1) % r) + 1);
        }
    }

    #[test]
    fn searched_orders() {
        for r in [4usize, 8, 9, 10, 12] {
            let sq = skew_diagonal_square(r).unwrap();
            assert!(sq.is_latin() && sq.is_diagonal() && sq.is_skew(), "r = {}", r);
        }
        for r in [4usize, 6, 8] {
            let sq = diagonal_square(r).unwrap();
            assert!(sq.is_latin() && sq.is_diagonal(), "r = {}", r);
        }
    }

    #[test]
    fn small_orders_rejected() {
        assert_eq!(diagonal_square(2).unwrap_err(), LatinError::OrderTooSmallDiagonal(2));
        assert_eq!(skew_diagonal_square(3).unwrap_err(), LatinError::OrderTooSmallSkew(3));
        assert_eq!(triple_system(2).unwrap_err(), LatinError::OrderTooSmallTriples(2));
    }

    #[test]
    fn triple_system_three() {
        let ts = triple_system(3).unwrap();
        assert_eq!(ts.len(), 6);
        let with_12 = ts
            .triples()
            .iter()
            .filter(|t| t.contains(&1) && t.contains(&2))
            .count();
        assert_eq!(with_12, 6);
    }

    #[test]
    fn triple_system_six_distinct_thirds() {
        let ts = triple_system(6).unwrap();
        assert!(ts.triples().contains(&[1, 2, 4]));
        assert!(ts.triples().contains(&[2, 1, 3]));
    }

    #[test]
    fn triple_system_ten() {
        let ts = triple_system(10).unwrap();
        assert_eq!(ts.len(), 90);
        assert!(ts.all_triples_distinct());
        assert!(ts.pair_counts_exactly_six());
        assert!(ts.pairs_have_distinct_thirds());
    }

    #[test]
    fn determinism() {
        let a = skew_diagonal_square(12).unwrap();
        let b = skew_diagonal_square(12).unwrap();
        assert_eq!(*a, *b);
    }
}
