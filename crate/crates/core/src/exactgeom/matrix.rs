//! Minimal dense matrix over an exact field, with fraction-free rank.

use super::field::ExactField;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    nrows: usize,
    ncols: usize,
    data: Vec<T>,
}

impl<T: Clone> Mat<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Mat {
            nrows,
            ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn fill(nrows: usize, ncols: usize, value: T) -> Self {
        Mat {
            nrows,
            ncols,
            data: vec![value; nrows * ncols],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.ncols)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }
}

impl<T: ExactField> Mat<T> {
    /// Exact rank by fraction-free (Bareiss-style) elimination. The two-term
    /// pivot update divides by the previous pivot, which is exact in any
    /// integral domain and keeps intermediate entries from compounding.
    pub fn rank(&self) -> usize {
        if self.nrows == 0 || self.ncols == 0 {
            return 0;
        }
        let mut m = self.clone();
        let mut prev: Option<T> = None;
        let mut pivot_row = 0;
        for col in 0..m.ncols {
            if pivot_row == m.nrows {
                break;
            }
            let Some(found) = (pivot_row..m.nrows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(pivot_row, found);
            let pivot = m.get(pivot_row, col).clone();
            for i in pivot_row + 1..m.nrows {
                let lead = m.get(i, col).clone();
                for j in col..m.ncols {
                    let mut v = pivot.mul(m.get(i, j)).sub(&lead.mul(m.get(pivot_row, j)));
                    if let Some(p) = &prev {
                        v = v.div(p).expect("Bareiss division is exact");
                    }
                    m.set(i, j, v);
                }
            }
            prev = Some(pivot);
            pivot_row += 1;
        }
        pivot_row
    }

    /// Conjugate transpose times self: the Gram matrix `M = A* A`.
    pub fn gram(&self) -> Mat<T> {
        let zero = match self.data.first() {
            Some(x) => x.zero_like(),
            None => return Mat::from_rows(vec![]),
        };
        let mut g = Mat::fill(self.ncols, self.ncols, zero);
        for i in 0..self.ncols {
            for j in 0..self.ncols {
                let mut acc = g.get(i, j).zero_like();
                for k in 0..self.nrows {
                    acc = acc.add(&self.get(k, i).conj().mul(self.get(k, j)));
                }
                g.set(i, j, acc);
            }
        }
        g
    }
}

/// Incrementally built monic echelon basis of a linear span, for repeated
/// membership tests without re-running a full elimination. Rows are scaled
/// to a unit pivot, so reduction is w ← w − w[p]·row and entries stay small.
#[derive(Clone, Debug)]
pub struct SpanBasis<F> {
    rows: Vec<(usize, Vec<F>)>, // (pivot column, monic reduced row)
}

impl<F: ExactField> SpanBasis<F> {
    pub fn new() -> Self {
        SpanBasis { rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, w: &[F]) -> Vec<F> {
        let mut w = w.to_vec();
        for (pivot, row) in &self.rows {
            if w[*pivot].is_zero() {
                continue;
            }
            let scale = w[*pivot].clone();
            for (wc, rc) in w.iter_mut().zip(row) {
                if !rc.is_zero() {
                    *wc = wc.sub(&scale.mul(rc));
                }
            }
        }
        w
    }

    /// Add a vector to the span; returns false when it was already inside.
    pub fn insert(&mut self, w: &[F]) -> bool {
        let mut reduced = self.reduce(w);
        match reduced.iter().position(|c| !c.is_zero()) {
            None => false,
            Some(pivot) => {
                let inv = reduced[pivot].inv().expect("nonzero pivot");
                for c in reduced.iter_mut() {
                    if !c.is_zero() {
                        *c = c.mul(&inv);
                    }
                }
                self.rows.push((pivot, reduced));
                true
            }
        }
    }

    pub fn contains(&self, w: &[F]) -> bool {
        self.reduce(w).iter().all(|c| c.is_zero())
    }
}

impl<F: ExactField> Default for SpanBasis<F> {
    fn default() -> Self {
        SpanBasis::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::field::GaussianRational;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn rank_of_simple_matrices() {
        let id = Mat::from_rows(vec![
            vec![g(1), g(0), g(0)],
            vec![g(0), g(1), g(0)],
            vec![g(0), g(0), g(1)],
        ]);
        assert_eq!(id.rank(), 3);

        let dependent = Mat::from_rows(vec![
            vec![g(1), g(2), g(3)],
            vec![g(2), g(4), g(6)],
            vec![g(1), g(0), g(1)],
        ]);
        assert_eq!(dependent.rank(), 2);

        let zero = Mat::from_rows(vec![vec![g(0), g(0)], vec![g(0), g(0)]]);
        assert_eq!(zero.rank(), 0);
    }

    #[test]
    fn rank_with_column_skips() {
        let m = Mat::from_rows(vec![
            vec![g(0), g(1), g(2)],
            vec![g(0), g(2), g(4)],
            vec![g(0), g(0), g(0)],
        ]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn span_basis_membership() {
        let rows = [
            vec![g(1), g(0), g(2), g(0)],
            vec![g(0), g(1), g(1), g(0)],
        ];
        let mut basis = SpanBasis::new();
        assert!(basis.insert(&rows[0]));
        assert!(basis.insert(&rows[1]));
        assert_eq!(basis.dim(), 2);
        // combination 3·r0 − 2·r1
        let combo = vec![g(3), g(-2), g(4), g(0)];
        assert!(basis.contains(&combo));
        assert!(!basis.contains(&[g(0), g(0), g(0), g(1)]));
        assert!(!basis.insert(&combo));
    }

    #[test]
    fn gram_is_hermitian() {
        let a = Mat::from_rows(vec![
            vec![GaussianRational::i(), g(1)],
            vec![g(2), GaussianRational::from_parts(0, 1, -1, 2)],
        ]);
        let m = a.gram();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m.get(i, j).conj(), *m.get(j, i));
            }
        }
        assert_eq!(m.rank(), a.rank());
    }
}
