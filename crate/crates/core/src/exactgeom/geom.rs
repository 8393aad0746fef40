//! Point configurations, exact collinearity, line enumeration and incidence
//! statistics.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use super::field::ExactField;
use super::matrix::Mat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("point index {0} out of range (n = {1})")]
    IndexOutOfRange(usize, usize),
    #[error("point indices must be distinct")]
    DuplicateIndices,
    #[error("configuration must be nonempty")]
    Empty,
    #[error("point {0} has {1} coordinates, expected {2}")]
    DimensionMismatch(usize, usize, usize),
    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
}

/// An ordered list of distinct points in ℂ^d with exact coordinates.
/// Indices are identities: the list order is stable.
#[derive(Clone, Debug)]
pub struct PointConfig<F> {
    dim: usize,
    points: Vec<Vec<F>>,
    labels: Option<Vec<String>>,
}

/// Structural equality: dimension and coordinates. Labels are reporting
/// sugar and are not part of a configuration's identity.
impl<F: PartialEq> PartialEq for PointConfig<F> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.points == other.points
    }
}

impl<F: ExactField> PointConfig<F> {
    pub fn new(dim: usize, points: Vec<Vec<F>>) -> Result<Self, GeomError> {
        if points.is_empty() {
            return Err(GeomError::Empty);
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(GeomError::DimensionMismatch(i, p.len(), dim));
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(GeomError::DuplicatePoints(i, j));
                }
            }
        }
        Ok(PointConfig {
            dim,
            points,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.points.len());
        self.labels = Some(labels);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[F] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<F>] {
        &self.points
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("p{}", i),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The configuration with point `i` removed (labels preserved).
    pub fn without_point(&self, i: usize) -> Result<Self, GeomError> {
        if i >= self.len() {
            return Err(GeomError::IndexOutOfRange(i, self.len()));
        }
        let mut points = self.points.clone();
        points.remove(i);
        if points.is_empty() {
            return Err(GeomError::Empty);
        }
        let labels = self.labels.as_ref().map(|l| {
            let mut l = l.clone();
            l.remove(i);
            l
        });
        Ok(PointConfig {
            dim: self.dim,
            points,
            labels,
        })
    }

    /// The n × (d+1) matrix whose i-th row is (v_i, 1).
    pub fn lift(&self) -> Mat<F> {
        let one = self.points[0][0].one_like();
        Mat::from_rows(
            self.points
                .iter()
                .map(|p| {
                    let mut row = p.clone();
                    row.push(one.clone());
                    row
                })
                .collect(),
        )
    }

    /// Affine dimension of the configuration: rank of the lifted matrix minus 1.
    pub fn affine_dim(&self) -> usize {
        self.lift().rank() - 1
    }

    fn check_index(&self, i: usize) -> Result<(), GeomError> {
        if i >= self.len() {
            return Err(GeomError::IndexOutOfRange(i, self.len()));
        }
        Ok(())
    }

    /// Exact collinearity of three distinct points: the 3 × (d+1) lifted
    /// submatrix has rank ≤ 2, equivalently v_s − v_p is proportional to
    /// v_q − v_p.
    pub fn collinear(&self, p: usize, q: usize, s: usize) -> Result<bool, GeomError> {
        if p == q || p == s || q == s {
            return Err(GeomError::DuplicateIndices);
        }
        self.check_index(p)?;
        self.check_index(q)?;
        self.check_index(s)?;
        let (u, pivot) = self.direction(p, q);
        Ok(self.on_line(p, &u, pivot, s))
    }

    fn direction(&self, p: usize, q: usize) -> (Vec<F>, usize) {
        let u: Vec<F> = self.points[q]
            .iter()
            .zip(&self.points[p])
            .map(|(a, b)| a.sub(b))
            .collect();
        let pivot = u
            .iter()
            .position(|c| !c.is_zero())
            .expect("distinct points have a nonzero difference");
        (u, pivot)
    }

    fn on_line(&self, p: usize, u: &[F], pivot: usize, s: usize) -> bool {
        let w: Vec<F> = self.points[s]
            .iter()
            .zip(&self.points[p])
            .map(|(a, b)| a.sub(b))
            .collect();
        u.iter()
            .zip(&w)
            .all(|(uc, wc)| u[pivot].mul(wc) == uc.mul(&w[pivot]))
    }

    /// All point indices on the line spanned by points `p` and `q`, sorted.
    pub fn line_through(&self, p: usize, q: usize) -> Vec<usize> {
        let (u, pivot) = self.direction(p, q);
        let n = self.len();
        let mut members: Vec<usize> = if n >= 32 {
            (0..n)
                .into_par_iter()
                .filter(|&s| s == p || s == q || self.on_line(p, &u, pivot, s))
                .collect()
        } else {
            (0..n)
                .filter(|&s| s == p || s == q || self.on_line(p, &u, pivot, s))
                .collect()
        };
        members.sort_unstable();
        members
    }

    /// Partition of all point pairs into maximal collinear sets, with the
    /// derived t_r profile. Deterministic: lines come out sorted by their
    /// sorted index sets regardless of thread count.
    pub fn enumerate_lines(&self) -> IncidenceStructure {
        let n = self.len();
        let mut covered = vec![false; n * n];
        let mut lines: Vec<Line> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if covered[i * n + j] {
                    continue;
                }
                let members = self.line_through(i, j);
                for a in 0..members.len() {
                    for b in a + 1..members.len() {
                        covered[members[a] * n + members[b]] = true;
                    }
                }
                lines.push(Line {
                    point_indices: members,
                });
            }
        }
        lines.sort_by(|a, b| a.point_indices.cmp(&b.point_indices));
        IncidenceStructure::from_lines(n, lines)
    }

    /// Number of ordinary lines (lines of size exactly 2) through point `i`.
    pub fn ordinary_count_through(&self, i: usize) -> Result<usize, GeomError> {
        self.check_index(i)?;
        Ok(self.enumerate_lines().ordinary_count_through(i))
    }
}

/// One maximal collinear set, stored as a sorted index set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub point_indices: Vec<usize>,
}

impl Line {
    pub fn size(&self) -> usize {
        self.point_indices.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.point_indices.binary_search(&i).is_ok()
    }
}

/// The set of lines determined by a configuration together with the
/// t_r profile (number of lines of each size).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStructure {
    n: usize,
    lines: Vec<Line>,
    t_profile: BTreeMap<usize, usize>,
}

impl IncidenceStructure {
    fn from_lines(n: usize, lines: Vec<Line>) -> Self {
        let mut t_profile = BTreeMap::new();
        for l in &lines {
            *t_profile.entry(l.size()).or_insert(0) += 1;
        }
        IncidenceStructure {
            n,
            lines,
            t_profile,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn t_profile(&self) -> &BTreeMap<usize, usize> {
        &self.t_profile
    }

    /// t_r: the number of lines containing exactly `r` points.
    pub fn t(&self, r: usize) -> usize {
        self.t_profile.get(&r).copied().unwrap_or(0)
    }

    /// Lines with at least three points.
    pub fn special_lines(&self) -> impl Iterator<Item = (usize, &Line)> {
        self.lines
            .iter()
            .enumerate()
            .filter(|(_, l)| l.size() >= 3)
    }

    pub fn ordinary_count_through(&self, i: usize) -> usize {
        self.lines
            .iter()
            .filter(|l| l.size() == 2 && l.contains(i))
            .count()
    }

    pub fn lines_through(&self, i: usize) -> impl Iterator<Item = &Line> {
        self.lines.iter().filter(move |l| l.contains(i))
    }

    /// Σ_r C(r,2)·t_r must equal C(n,2): every pair lies on exactly one line.
    pub fn pair_count_identity_holds(&self) -> bool {
        let covered: usize = self
            .t_profile
            .iter()
            .map(|(r, t)| r * (r - 1) / 2 * t)
            .sum();
        covered == self.n * (self.n - 1) / 2
    }

    /// Σ_{r ≥ lo} weight(r)·t_r for inequality right-hand sides.
    pub fn weighted_tail<W: Fn(usize) -> usize>(&self, lo: usize, weight: W) -> usize {
        self.t_profile
            .iter()
            .filter(|(r, _)| **r >= lo)
            .map(|(r, t)| weight(*r) * t)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::field::GaussianRational;

    fn pt2(x: i64, y: i64) -> Vec<GaussianRational> {
        vec![GaussianRational::from_int(x), GaussianRational::from_int(y)]
    }

    fn config(points: Vec<Vec<GaussianRational>>) -> PointConfig<GaussianRational> {
        PointConfig::new(points[0].len(), points).unwrap()
    }

    #[test]
    fn collinear_basic() {
        let c = config(vec![pt2(0, 0), pt2(1, 1), pt2(2, 2), pt2(1, 0)]);
        assert!(c.collinear(0, 1, 2).unwrap());
        assert!(!c.collinear(0, 1, 3).unwrap());
        assert_eq!(c.collinear(0, 0, 1), Err(GeomError::DuplicateIndices));
    }

    #[test]
    fn triangle_profile() {
        let c = config(vec![pt2(0, 0), pt2(1, 0), pt2(0, 1)]);
        let inc = c.enumerate_lines();
        assert_eq!(inc.t(2), 3);
        assert!(inc.pair_count_identity_holds());
        assert_eq!(inc.ordinary_count_through(0), 2);
    }

    #[test]
    fn four_collinear_plus_one() {
        let c = config(vec![pt2(0, 0), pt2(1, 0), pt2(2, 0), pt2(3, 0), pt2(0, 1)]);
        let inc = c.enumerate_lines();
        assert_eq!(inc.t(4), 1);
        assert_eq!(inc.t(2), 4);
        assert!(inc.pair_count_identity_holds());
        // Line maximality: no point off a line is collinear with two of its points.
        for (_, l) in inc.special_lines() {
            for p in 0..c.len() {
                if !l.contains(p) {
                    assert!(!c
                        .collinear(l.point_indices[0], l.point_indices[1], p)
                        .unwrap());
                }
            }
        }
    }

    #[test]
    fn lift_and_affine_dim() {
        let c = config(vec![pt2(0, 0), pt2(1, 0), pt2(0, 1)]);
        let lifted = c.lift();
        assert_eq!(lifted.nrows(), 3);
        assert_eq!(lifted.ncols(), 3);
        assert!(lifted.rows().all(|r| r[2] == GaussianRational::from_int(1)));
        assert_eq!(c.affine_dim(), 2);

        let single = config(vec![pt2(5, -3)]);
        assert_eq!(single.affine_dim(), 0);

        let seg = config(vec![pt2(0, 0), pt2(2, 2)]);
        assert_eq!(seg.affine_dim(), 1);
    }

    #[test]
    fn enumeration_is_deterministic() {
        let c = config(vec![pt2(0, 0), pt2(1, 2), pt2(2, 4), pt2(5, 1), pt2(3, 3)]);
        let a = c.enumerate_lines();
        let b = c.enumerate_lines();
        assert_eq!(a, b);
    }

    #[test]
    fn removal_consistency() {
        let c = config(vec![pt2(0, 0), pt2(1, 0), pt2(2, 0), pt2(0, 1), pt2(1, 1)]);
        let inc = c.enumerate_lines();
        let reduced = c.without_point(2).unwrap();
        let rinc = reduced.enumerate_lines();
        assert!(rinc.pair_count_identity_holds());
        // Lines not through the removed point survive unchanged (indices shift).
        assert_eq!(inc.n() - 1, rinc.n());
    }

    #[test]
    fn constructor_rejects_duplicates() {
        let err = PointConfig::new(2, vec![pt2(1, 1), pt2(1, 1)]);
        assert_eq!(err.unwrap_err(), GeomError::DuplicatePoints(0, 1));
    }
}
