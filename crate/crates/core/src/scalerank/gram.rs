//! Exact Gram analysis: cancellation functionals, the off-diagonal sum
//! identity, η-balance, the squares bound, and the diagonal-dominant rank
//! bound.
//!
//! Row normalization to a common ℓ2 norm α is irrational in general, but
//! every quantity here is quadratic per row, so rows carry an exact real
//! *squared* scaling weight w_k instead: the logical matrix is
//! A_ki = √w_k · c_ki and only w_k ever appears.

use std::cmp::Ordering;

use num::complex::Complex64;
use num::{BigInt, BigRational, ToPrimitive};
use thiserror::Error;

use crate::depmat::{DependencyMatrix, LineCertificate};
use crate::exactgeom::field::ExactField;
use crate::exactgeom::matrix::Mat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GramError {
    #[error("matrix must be square and hermitian (violated at ({0}, {1}))")]
    NotHermitian(usize, usize),
    #[error("diagonal entry {0} has modulus below the stated floor")]
    DiagonalBelowFloor(usize),
    #[error("the floor L must be positive")]
    NonPositiveFloor,
    #[error("row {0} is zero and cannot be normalized")]
    ZeroRow(usize),
    #[error("row {0} has support size {1}, expected {2}")]
    NonUniformSupport(usize, usize, usize),
    #[error("columns {0} and {1} share {2} support rows, expected {3}")]
    NonUniformIntersection(usize, usize, usize, usize),
    #[error("row {0} has squared norm different from the stated α²")]
    RowNormMismatch(usize),
    #[error("certificate missing or not certified (achieved {0} of required {1})")]
    MissingCertificate(usize, usize),
    #[error("operation requires line size r >= 4, got {0}")]
    LineTooShort(usize),
}

/// Sparse rows with exact squared row weights.
#[derive(Clone, Debug)]
pub struct RowScaledMatrix<F> {
    ncols: usize,
    rows: Vec<Vec<(usize, F)>>,
    weights: Vec<F>,
}

impl<F: ExactField> RowScaledMatrix<F> {
    pub fn from_rows(ncols: usize, rows: Vec<Vec<(usize, F)>>) -> Self {
        let one = rows
            .iter()
            .flat_map(|r| r.first())
            .map(|(_, v)| v.one_like())
            .next()
            .expect("at least one nonzero entry");
        let weights = vec![one; rows.len()];
        RowScaledMatrix {
            ncols,
            rows,
            weights,
        }
    }

    pub fn from_dep_matrix(a: &DependencyMatrix<F>) -> Self {
        let rows = a
            .rows
            .iter()
            .map(|r| {
                (0..3)
                    .map(|slot| (r.support[slot], r.coeffs[slot].clone()))
                    .collect()
            })
            .collect();
        RowScaledMatrix::from_rows(a.ncols, rows)
    }

    /// Build from a per-line matrix (local column indices).
    pub fn from_line_matrix(line: &crate::depmat::LineDepMatrix<F>) -> Self {
        let rows = line
            .rows
            .iter()
            .map(|r| {
                (0..3)
                    .map(|slot| (r.support[slot], r.coeffs[slot].clone()))
                    .collect()
            })
            .collect();
        RowScaledMatrix::from_rows(line.r, rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    /// Squared ℓ2 norm of logical row k: w_k · Σ |c_ki|².
    pub fn row_norm_sqr(&self, k: usize) -> F {
        let mut acc = self.weights[k].zero_like();
        for (_, c) in &self.rows[k] {
            acc = acc.add(&c.norm_sqr());
        }
        acc.mul(&self.weights[k])
    }

    /// Set w_k so that every logical row has squared norm exactly α².
    pub fn normalize_rows_to(mut self, alpha_sqr: &BigRational) -> Result<Self, GramError> {
        for k in 0..self.rows.len() {
            let mut acc = self.weights[k].zero_like();
            for (_, c) in &self.rows[k] {
                acc = acc.add(&c.norm_sqr());
            }
            if acc.is_zero() {
                return Err(GramError::ZeroRow(k));
            }
            let target = acc.embed_rational(alpha_sqr);
            self.weights[k] = target.div(&acc).expect("nonzero row norm");
        }
        Ok(self)
    }

    /// Logical squared modulus of entry (k, i): w_k·|c_ki|² (zero off
    /// support).
    fn sq_modulus(&self, k: usize, idx_in_row: usize) -> F {
        let (_, c) = &self.rows[k][idx_in_row];
        c.norm_sqr().mul(&self.weights[k])
    }

    fn coeff(&self, k: usize, col: usize) -> Option<&F> {
        self.rows[k]
            .iter()
            .find(|(c, _)| *c == col)
            .map(|(_, v)| v)
    }

    fn rows_containing(&self) -> Vec<Vec<usize>> {
        let mut by_col = vec![Vec::new(); self.ncols];
        for (k, row) in self.rows.iter().enumerate() {
            for (c, _) in row {
                by_col[*c].push(k);
            }
        }
        by_col
    }

    /// Dense Gram matrix M = A*A with M_ij = Σ_k w_k·conj(c_ki)·c_kj.
    pub fn gram(&self) -> Mat<F> {
        let zero = self.weights[0].zero_like();
        let mut g = Mat::fill(self.ncols, self.ncols, zero);
        for (k, row) in self.rows.iter().enumerate() {
            for (ci, vi) in row {
                for (cj, vj) in row {
                    let term = vi.conj().mul(vj).mul(&self.weights[k]);
                    let cur = g.get(*ci, *cj).add(&term);
                    g.set(*ci, *cj, cur);
                }
            }
        }
        g
    }

    /// Σ_{i≠j} |M_ij|², exact.
    pub fn offdiag_square_sum(&self) -> F {
        let zero = self.weights[0].zero_like();
        let by_col = self.rows_containing();
        let mut acc = zero.clone();
        for i in 0..self.ncols {
            for j in 0..self.ncols {
                if i == j {
                    continue;
                }
                // M_ij = Σ over rows containing both columns.
                let mut entry = zero.clone();
                for &k in &by_col[i] {
                    if let (Some(vi), Some(vj)) = (self.coeff(k, i), self.coeff(k, j)) {
                        entry = entry.add(&vi.conj().mul(vj).mul(&self.weights[k]));
                    }
                }
                acc = acc.add(&entry.norm_sqr());
            }
        }
        acc
    }

    /// Cross-row cancellation functional: for every ordered column pair the
    /// sum over row pairs in the pair's common support of
    /// |x_k − x_k'|², x_k = A_ki·conj(A_kj). Zero-product rows contribute
    /// nothing to any column inner product, so the sum runs over the common
    /// support (for a dense matrix this is every row pair).
    pub fn d_functional(&self) -> F {
        let zero = self.weights[0].zero_like();
        let by_col = self.rows_containing();
        let mut acc = zero.clone();
        for i in 0..self.ncols {
            for j in 0..self.ncols {
                if i == j {
                    continue;
                }
                let mut xs: Vec<F> = Vec::new();
                for &k in &by_col[i] {
                    if let (Some(vi), Some(vj)) = (self.coeff(k, i), self.coeff(k, j)) {
                        xs.push(vi.mul(&vj.conj()).mul(&self.weights[k]));
                    }
                }
                for a in 0..xs.len() {
                    for b in a + 1..xs.len() {
                        acc = acc.add(&xs[a].sub(&xs[b]).norm_sqr());
                    }
                }
            }
        }
        acc
    }

    /// Within-row imbalance functional: Σ_k Σ_{i<j ∈ supp(R_k)}
    /// (|A_ki|² − |A_kj|²)², exact.
    pub fn e_functional(&self) -> F {
        let mut acc = self.weights[0].zero_like();
        for k in 0..self.rows.len() {
            let q = self.rows[k].len();
            for a in 0..q {
                let ya = self.sq_modulus(k, a);
                for b in a + 1..q {
                    let yb = self.sq_modulus(k, b);
                    let d = ya.sub(&yb);
                    acc = acc.add(&d.mul(&d));
                }
            }
        }
        acc
    }

    /// Per-row η-balance classification: row k is balanced when every pair
    /// of its support squared moduli differs by at most η (compared via
    /// squares, so η² is the exact parameter).
    pub fn eta_balanced(&self, eta_sqr: &BigRational) -> Vec<bool> {
        let mut out = Vec::with_capacity(self.rows.len());
        for k in 0..self.rows.len() {
            let q = self.rows[k].len();
            let eta2 = self.weights[k].embed_rational(eta_sqr);
            let mut balanced = true;
            'row: for a in 0..q {
                let ya = self.sq_modulus(k, a);
                for b in a + 1..q {
                    let yb = self.sq_modulus(k, b);
                    let d = ya.sub(&yb);
                    if eta2.sub(&d.mul(&d)).real_sign() == Ordering::Less {
                        balanced = false;
                        break 'row;
                    }
                }
            }
            out.push(balanced);
        }
        out
    }
}

/// Both cancellation functionals of a row-scaled matrix; D and E are
/// nonnegative real field elements.
pub fn cancellation_functionals<F: ExactField>(a: &RowScaledMatrix<F>) -> (F, F) {
    (a.d_functional(), a.e_functional())
}

/// Floating-point D and E for dense complex matrices (reports only).
pub fn cancellation_functionals_f64(a: &[Vec<Complex64>]) -> (f64, f64) {
    let m = a.len();
    let n = if m > 0 { a[0].len() } else { 0 };
    let mut d = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let xs: Vec<Complex64> = (0..m)
                .map(|k| a[k][i] * a[k][j].conj())
                .filter(|x| x.norm_sqr() > 0.0)
                .collect();
            for p in 0..xs.len() {
                for q in p + 1..xs.len() {
                    d += (xs[p] - xs[q]).norm_sqr();
                }
            }
        }
    }
    let mut e = 0.0;
    for row in a {
        let sup: Vec<f64> = row
            .iter()
            .map(|z| z.norm_sqr())
            .filter(|&v| v > 0.0)
            .collect();
        for p in 0..sup.len() {
            for q in p + 1..sup.len() {
                e += (sup[p] - sup[q]).powi(2);
            }
        }
    }
    (d, e)
}

/// Exact report for the off-diagonal sum identity
/// Σ_{i≠j}|M_ij|² = (1 − 1/q)·t·m·α⁴ − (D + (t/q)·E).
#[derive(Clone, Debug)]
pub struct IdentityReport<F> {
    pub q: usize,
    pub t: usize,
    pub m: usize,
    pub lhs: F,
    pub residual: F,
    pub residual_is_zero: bool,
    pub d: F,
    pub e: F,
}

/// Verify the structural hypotheses (uniform row support q, uniform column
/// intersection t, uniform squared row norm α²) and evaluate the identity
/// exactly. The residual is exactly zero whenever the hypotheses hold.
pub fn offdiag_identity_check<F: ExactField>(
    a: &RowScaledMatrix<F>,
    alpha_sqr: &BigRational,
) -> Result<IdentityReport<F>, GramError> {
    let m = a.nrows();
    let n = a.ncols();
    assert!(m > 0 && n >= 2);
    let q = a.rows[0].len();
    for (k, row) in a.rows.iter().enumerate() {
        if row.len() != q {
            return Err(GramError::NonUniformSupport(k, row.len(), q));
        }
    }
    let by_col = a.rows_containing();
    let t = {
        let mut t = None;
        for i in 0..n {
            for j in i + 1..n {
                let count = by_col[i]
                    .iter()
                    .filter(|&&k| a.coeff(k, j).is_some())
                    .count();
                match t {
                    None => t = Some(count),
                    Some(expect) if expect != count => {
                        return Err(GramError::NonUniformIntersection(i, j, count, expect))
                    }
                    _ => {}
                }
            }
        }
        t.unwrap_or(0)
    };
    let alpha2 = a.weights[0].embed_rational(alpha_sqr);
    for k in 0..m {
        if a.row_norm_sqr(k) != alpha2 {
            return Err(GramError::RowNormMismatch(k));
        }
    }

    let lhs = a.offdiag_square_sum();
    let d = a.d_functional();
    let e = a.e_functional();

    let alpha4 = alpha2.mul(&alpha2);
    let coef = BigRational::new(
        BigInt::from(((q - 1) * t * m) as i64),
        BigInt::from(q as i64),
    );
    let first = alpha4.scale_rational(&coef);
    let t_over_q = BigRational::new(BigInt::from(t as i64), BigInt::from(q as i64));
    let rhs = first.sub(&d.add(&e.scale_rational(&t_over_q)));
    let residual = lhs.sub(&rhs);
    let residual_is_zero = residual.is_zero();
    Ok(IdentityReport {
        q,
        t,
        m,
        lhs,
        residual,
        residual_is_zero,
        d,
        e,
    })
}

/// The inequality side (no D/E subtraction): Σ ≤ (1 − 1/q)·t·m·α⁴, which
/// follows from the identity since D, E ≥ 0. Exact sign verdict.
pub fn offdiag_inequality_holds<F: ExactField>(
    a: &RowScaledMatrix<F>,
    alpha_sqr: &BigRational,
) -> Result<bool, GramError> {
    let report = offdiag_identity_check(a, alpha_sqr)?;
    let alpha2 = a.weights[0].embed_rational(alpha_sqr);
    let alpha4 = alpha2.mul(&alpha2);
    let coef = BigRational::new(
        BigInt::from(((report.q - 1) * report.t * report.m) as i64),
        BigInt::from(report.q as i64),
    );
    let bound = alpha4.scale_rational(&coef);
    Ok(bound.sub(&report.lhs).real_sign() != Ordering::Less)
}

/// Default constant for the squares bound, from minimizing the balanced /
/// unbalanced split (1−β)/72·(4α/5)² + β·(2/3)(α/10)² at β = 1.
pub fn default_c0() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(150))
}

/// Default balance threshold η = α/10, squared so it stays rational:
/// η² = α²/100.
pub fn default_eta_sqr(alpha_sqr: &BigRational) -> BigRational {
    alpha_sqr / BigRational::from_integer(BigInt::from(100))
}

/// Default refined-bound constant c₁ = c₀/8.
pub fn default_c1() -> BigRational {
    default_c0() / BigRational::from_integer(BigInt::from(8))
}

#[derive(Clone, Debug)]
pub struct SquaresBoundReport {
    pub holds: bool,
    pub lhs_f64: f64,
    pub rhs_f64: f64,
    pub margin_f64: f64,
    /// Exact margin when the field values are rational.
    pub margin_rational: Option<BigRational>,
}

/// Verify Σ_{i≠j}|M_ij|² ≤ 4(r²−r)α⁴ − c₀(r²−r)α² for a certified per-line
/// matrix normalized to row norm α. Requires r ≥ 4 and a passing witness
/// certificate.
pub fn squares_bound_check<F: ExactField>(
    line: &RowScaledMatrix<F>,
    certificate: &LineCertificate,
    alpha_sqr: &BigRational,
    c0: &BigRational,
) -> Result<SquaresBoundReport, GramError> {
    let r = line.ncols();
    if r < 4 {
        return Err(GramError::LineTooShort(r));
    }
    if !certificate.certified {
        return Err(GramError::MissingCertificate(
            certificate.achieved,
            certificate.required.unwrap_or(0),
        ));
    }
    let m = (r * r - r) as i64;
    let lhs = line.offdiag_square_sum();
    let alpha2 = line.weights[0].embed_rational(alpha_sqr);
    let alpha4 = alpha2.mul(&alpha2);
    let four_m = BigRational::from_integer(BigInt::from(4 * m));
    let c0_m = c0 * BigRational::from_integer(BigInt::from(m));
    let rhs = alpha4
        .scale_rational(&four_m)
        .sub(&alpha2.scale_rational(&c0_m));
    let margin = rhs.sub(&lhs);
    let holds = margin.real_sign() != Ordering::Less;
    Ok(SquaresBoundReport {
        holds,
        lhs_f64: lhs.to_c64().re,
        rhs_f64: rhs.to_c64().re,
        margin_f64: margin.to_c64().re,
        margin_rational: margin.as_rational(),
    })
}

/// Diagonal-dominant rank bound n²L² / (nL² + Σ_{i≠j}|M_ij|²) kept as an
/// exact ratio of real field elements for sound comparisons.
#[derive(Clone, Debug)]
pub struct RankBound<F> {
    numerator: F,
    denominator: F,
}

impl<F: ExactField> RankBound<F> {
    pub fn to_f64(&self) -> f64 {
        self.numerator.to_c64().re / self.denominator.to_c64().re
    }

    /// Exact comparison bound ≤ k.
    pub fn le_usize(&self, k: usize) -> bool {
        let k = self
            .denominator
            .embed_rational(&BigRational::from_integer(BigInt::from(k)));
        k.mul(&self.denominator)
            .sub(&self.numerator)
            .real_sign()
            != Ordering::Less
    }

    /// Exact rational value when the field values are rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        Some(self.numerator.as_rational()? / self.denominator.as_rational()?)
    }
}

/// Rank lower bound for an n × n hermitian matrix with |M_ii| ≥ L > 0.
pub fn rank_lower_bound<F: ExactField>(
    m: &Mat<F>,
    floor: &BigRational,
) -> Result<RankBound<F>, GramError> {
    let n = m.nrows();
    assert!(n > 0, "empty matrix");
    if floor <= &BigRational::from_integer(BigInt::from(0)) {
        return Err(GramError::NonPositiveFloor);
    }
    for i in 0..n {
        for j in 0..n {
            if m.get(i, j).conj() != *m.get(j, i) {
                return Err(GramError::NotHermitian(i, j));
            }
        }
    }
    let sample = m.get(0, 0);
    let floor_sq_rat = floor * floor;
    let floor_sq = sample.embed_rational(&floor_sq_rat);
    for i in 0..n {
        // Hermitian diagonal is real; |M_ii| ≥ L ⟺ M_ii² ≥ L².
        let di = m.get(i, i);
        if di.mul(di).sub(&floor_sq).real_sign() == Ordering::Less {
            return Err(GramError::DiagonalBelowFloor(i));
        }
    }
    let mut offdiag = sample.zero_like();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                offdiag = offdiag.add(&m.get(i, j).norm_sqr());
            }
        }
    }
    let n_big = BigRational::from_integer(BigInt::from(n));
    let numerator = sample.embed_rational(&(&n_big * &n_big * &floor_sq_rat));
    let denominator = sample
        .embed_rational(&(&n_big * &floor_sq_rat))
        .add(&offdiag);
    Ok(RankBound {
        numerator,
        denominator,
    })
}

/// Floating-point twin of the rank bound for numerically scaled matrices.
pub fn rank_lower_bound_f64(m: &[Vec<Complex64>], floor: f64) -> f64 {
    let n = m.len();
    let mut offdiag = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                offdiag += m[i][j].norm_sqr();
            }
        }
    }
    let nf = n as f64;
    nf * nf * floor * floor / (nf * floor * floor + offdiag)
}

/// Gram summary for reports: the pieces of the rank-bound pipeline.
#[derive(Clone, Debug)]
pub struct GramSummary {
    pub diag_floor: f64,
    pub offdiag_square_sum: f64,
    pub d: f64,
    pub e: f64,
    pub rank_bound: f64,
}

pub fn gram_summary_f64(a: &[Vec<Complex64>]) -> GramSummary {
    let m = a.len();
    let n = if m > 0 { a[0].len() } else { 0 };
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for row in a {
                acc += row[i].conj() * row[j];
            }
            gram[i][j] = acc;
        }
    }
    let diag_floor = (0..n).map(|i| gram[i][i].re).fold(f64::INFINITY, f64::min);
    let mut offdiag = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                offdiag += gram[i][j].norm_sqr();
            }
        }
    }
    let (d, e) = cancellation_functionals_f64(a);
    let rank_bound = if diag_floor > 0.0 {
        rank_lower_bound_f64(&gram, diag_floor)
    } else {
        0.0
    };
    GramSummary {
        diag_floor,
        offdiag_square_sum: offdiag,
        d,
        e,
        rank_bound,
    }
}

impl<F: ExactField> ToPrimitive for RankBound<F> {
    fn to_i64(&self) -> Option<i64> {
        Some(self.to_f64() as i64)
    }
    fn to_u64(&self) -> Option<u64> {
        Some(self.to_f64() as u64)
    }
    fn to_f64(&self) -> Option<f64> {
        Some(RankBound::to_f64(self))
    }
}
