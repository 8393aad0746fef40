//! The statement checkers.

use std::collections::HashSet;

use num::BigRational;

use super::{rat_frac, rat_int, VerdictReport};
use crate::depmat::{full_dep_matrix, Construction, DepError, DEFAULT_RETRIES};
use crate::exactgeom::field::ExactField;
use crate::exactgeom::geom::{IncidenceStructure, PointConfig};
use crate::exactgeom::matrix::SpanBasis;
use crate::scalerank::{property_s, PropertySVerdict, ZeroPattern};
#[cfg(test)]
use crate::scalerank::DEFAULT_BUDGET_COLS;

fn t2_rat(inc: &IncidenceStructure) -> BigRational {
    rat_int(inc.t(2) as i64)
}

fn line_witness<F: ExactField>(config: &PointConfig<F>, members: &[usize]) -> String {
    let labels: Vec<String> = members.iter().map(|&i| config.label(i)).collect();
    format!("line{{{}}}", labels.join(","))
}

/// t₂ ≥ 3 + Σ_{r≥4}(r−3)·t_r for real planar configurations that are not
/// collinear.
pub fn check_melchior<F: ExactField>(config: &PointConfig<F>) -> VerdictReport {
    let mut rep = VerdictReport::new("melchior");
    let real = config
        .points()
        .iter()
        .all(|p| p.iter().all(|c| c.is_real()));
    rep.hypothesis("all coordinates real", real);
    if !real {
        return rep;
    }
    let adim = config.affine_dim();
    rep.hypothesis("affine dimension exactly 2 (planar, not collinear)", adim == 2);
    if !rep.applicable {
        return rep;
    }
    let inc = config.enumerate_lines();
    let tail = inc.weighted_tail(4, |r| r - 3) as i64;
    rep.conclude(rat_int(3 + tail), t2_rat(&inc));
    rep
}

/// t₂ + (3/4)·t₃ ≥ n + Σ_{r≥5}(2r−9)·t_r for planar complex configurations
/// with t_n = t_{n−1} = t_{n−2} = 0.
pub fn check_hirzebruch<F: ExactField>(config: &PointConfig<F>) -> VerdictReport {
    let mut rep = VerdictReport::new("hirzebruch");
    let adim = config.affine_dim();
    rep.hypothesis("affine dimension exactly 2", adim == 2);
    if !rep.applicable {
        return rep;
    }
    let n = config.len();
    let inc = config.enumerate_lines();
    let no_huge = n < 3 || (inc.t(n) == 0 && inc.t(n - 1) == 0 && inc.t(n - 2) == 0);
    rep.hypothesis("t_n = t_{n-1} = t_{n-2} = 0", no_huge);
    if !rep.applicable {
        return rep;
    }
    let tail = inc.weighted_tail(5, |r| 2 * r - 9) as i64;
    let observed = t2_rat(&inc) + rat_frac(3, 4) * rat_int(inc.t(3) as i64);
    rep.conclude(rat_int(n as i64 + tail), observed);
    rep
}

/// A configuration affinely spanning 3 or more dimensions determines an
/// ordinary line.
pub fn check_kelly<F: ExactField>(config: &PointConfig<F>) -> VerdictReport {
    let mut rep = VerdictReport::new("kelly");
    let adim = config.affine_dim();
    rep.hypothesis("affine dimension at least 3", adim >= 3);
    if !rep.applicable {
        return rep;
    }
    let inc = config.enumerate_lines();
    rep.conclude(rat_int(1), t2_rat(&inc));
    if rep.pass {
        if let Some(l) = inc.lines().iter().find(|l| l.size() == 2) {
            rep.witness(line_witness(config, &l.point_indices));
        }
    }
    rep
}

/// Points whose removal leaves a planar set.
fn coplanar_minus_one<F: ExactField>(config: &PointConfig<F>) -> Option<usize> {
    (0..config.len()).find(|&i| {
        config
            .without_point(i)
            .map(|c| c.affine_dim() <= 2)
            .unwrap_or(false)
    })
}

/// t₂ ≥ 3n/2 for non-planar sets of n ≥ 24 points in ℂ³, unless n−1 points
/// are coplanar, in which case t₂ ≥ n−1.
pub fn check_3n2<F: ExactField>(config: &PointConfig<F>) -> VerdictReport {
    let mut rep = VerdictReport::new("3n2");
    let n = config.len();
    rep.hypothesis("ambient dimension 3", config.dim() == 3);
    rep.hypothesis("n >= 24", n >= 24);
    if !rep.applicable {
        return rep;
    }
    rep.hypothesis("not contained in a plane", config.affine_dim() >= 3);
    if !rep.applicable {
        return rep;
    }
    let inc = config.enumerate_lines();
    match coplanar_minus_one(config) {
        Some(i) => {
            rep.note("branch 2: n-1 points on a plane");
            rep.witness(format!("off-plane point {}", config.label(i)));
            rep.conclude(rat_int(n as i64 - 1), t2_rat(&inc));
        }
        None => {
            rep.note("branch 1: general position bound");
            rep.conclude(rat_frac(3 * n as i64, 2), t2_rat(&inc));
        }
    }
    rep
}

/// Largest count of configuration points on a common plane, with a witness
/// membership list. Exhaustive over affine spans of non-collinear triples.
pub fn max_plane_count<F: ExactField>(config: &PointConfig<F>) -> (usize, Vec<usize>) {
    let n = config.len();
    if config.affine_dim() <= 2 {
        return (n, (0..n).collect());
    }
    if let Some(coords) = integer_view(config) {
        return int_span::max_plane_count(&coords);
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut best: (usize, Vec<usize>) = (0, Vec::new());
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if config.collinear(i, j, k).unwrap() {
                    continue;
                }
                let members = points_in_span(config, &[i, j, k]);
                if seen.insert(members.clone()) && members.len() > best.0 {
                    best = (members.len(), members);
                }
            }
        }
    }
    best
}

/// Largest count of points in a common 3-dimensional affine subspace,
/// exhaustive over spans of affinely independent quadruples.
pub fn max_flat3_count<F: ExactField>(config: &PointConfig<F>) -> (usize, Vec<usize>) {
    let n = config.len();
    if config.affine_dim() <= 3 {
        return (n, (0..n).collect());
    }
    if let Some(coords) = integer_view(config) {
        return int_span::max_flat3_count(&coords);
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut best: (usize, Vec<usize>) = (0, Vec::new());
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if config.collinear(i, j, k).unwrap() {
                    continue;
                }
                for l in k + 1..n {
                    if span_dim(config, &[i, j, k, l]) != 3 {
                        continue;
                    }
                    let members = points_in_span(config, &[i, j, k, l]);
                    if seen.insert(members.clone()) && members.len() > best.0 {
                        best = (members.len(), members);
                    }
                }
            }
        }
    }
    best
}

/// Integer coordinate matrix after clearing denominators, available when
/// every coordinate is a real rational. Uniform scaling is an affine
/// isomorphism, so span structure is unchanged.
fn integer_view<F: ExactField>(config: &PointConfig<F>) -> Option<Vec<Vec<num::BigInt>>> {
    use num::{BigInt, Integer, One};
    let mut rats: Vec<Vec<num::BigRational>> = Vec::with_capacity(config.len());
    for p in config.points() {
        let mut row = Vec::with_capacity(p.len());
        for c in p {
            row.push(c.as_rational()?);
        }
        rats.push(row);
    }
    let mut scale = BigInt::one();
    for row in &rats {
        for c in row {
            scale = scale.lcm(c.denom());
        }
    }
    Some(
        rats.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|c| c.numer() * (&scale / c.denom()))
                    .collect()
            })
            .collect(),
    )
}

/// Fraction-free span enumeration over integer coordinates. Rows are kept
/// primitive (content-stripped) so products stay near machine size; the
/// plane-level reduction of every point is computed once per triple and
/// shared across the flats extending it.
mod int_span {
    use num::{BigInt, Integer, Zero};
    use std::collections::HashSet;

    fn strip(mut v: Vec<BigInt>) -> Vec<BigInt> {
        let mut g = BigInt::zero();
        for c in &v {
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_zero() && g != BigInt::from(1) {
            for c in v.iter_mut() {
                *c = &*c / &g;
            }
        }
        v
    }

    /// One fraction-free elimination step of w against a pivot row.
    fn eliminate(w: &[BigInt], row: &[BigInt], pivot: usize) -> Vec<BigInt> {
        if w[pivot].is_zero() {
            return w.to_vec();
        }
        let lead = &row[pivot];
        let scale = &w[pivot];
        w.iter()
            .zip(row)
            .map(|(wc, rc)| lead * wc - scale * rc)
            .collect()
    }

    fn pivot_of(v: &[BigInt]) -> Option<usize> {
        v.iter().position(|c| !c.is_zero())
    }

    fn diff(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn max_plane_count(coords: &[Vec<BigInt>]) -> (usize, Vec<usize>) {
        let n = coords.len();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut best: (usize, Vec<usize>) = (0, Vec::new());
        for i in 0..n {
            // Differences against the triple's first point, reused below.
            let w: Vec<Vec<BigInt>> = (0..n).map(|x| diff(&coords[x], &coords[i])).collect();
            for j in i + 1..n {
                let r1 = strip(w[j].clone());
                let p1 = pivot_of(&r1).expect("distinct points");
                // Reduce every point by the line basis once per (i, j).
                let red1: Vec<Vec<BigInt>> =
                    (0..n).map(|x| eliminate(&w[x], &r1, p1)).collect();
                for k in j + 1..n {
                    if red1[k].iter().all(|c| c.is_zero()) {
                        continue; // collinear triple
                    }
                    let r2 = strip(red1[k].clone());
                    let p2 = pivot_of(&r2).unwrap();
                    let members: Vec<usize> = (0..n)
                        .filter(|&x| {
                            eliminate(&red1[x], &r2, p2).iter().all(|c| c.is_zero())
                        })
                        .collect();
                    if seen.insert(members.clone()) && members.len() > best.0 {
                        best = (members.len(), members);
                    }
                }
            }
        }
        best
    }

    pub fn max_flat3_count(coords: &[Vec<BigInt>]) -> (usize, Vec<usize>) {
        let n = coords.len();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut best: (usize, Vec<usize>) = (0, Vec::new());
        for i in 0..n {
            let w: Vec<Vec<BigInt>> = (0..n).map(|x| diff(&coords[x], &coords[i])).collect();
            for j in i + 1..n {
                let r1 = strip(w[j].clone());
                let p1 = pivot_of(&r1).expect("distinct points");
                let red1: Vec<Vec<BigInt>> =
                    (0..n).map(|x| eliminate(&w[x], &r1, p1)).collect();
                for k in j + 1..n {
                    if red1[k].iter().all(|c| c.is_zero()) {
                        continue;
                    }
                    let r2 = strip(red1[k].clone());
                    let p2 = pivot_of(&r2).unwrap();
                    let red2: Vec<Vec<BigInt>> = (0..n)
                        .map(|x| strip(eliminate(&red1[x], &r2, p2)))
                        .collect();
                    for l in k + 1..n {
                        if red2[l].iter().all(|c| c.is_zero()) {
                            continue; // l on the plane of (i, j, k)
                        }
                        let r3 = &red2[l];
                        let p3 = pivot_of(r3).unwrap();
                        let members: Vec<usize> = (0..n)
                            .filter(|&x| {
                                eliminate(&red2[x], r3, p3).iter().all(|c| c.is_zero())
                            })
                            .collect();
                        if seen.insert(members.clone()) && members.len() > best.0 {
                            best = (members.len(), members);
                        }
                    }
                }
            }
        }
        best
    }
}

fn span_basis<F: ExactField>(config: &PointConfig<F>, base: &[usize]) -> SpanBasis<F> {
    let p0 = config.point(base[0]);
    let mut basis = SpanBasis::new();
    for &i in &base[1..] {
        let dir: Vec<F> = config
            .point(i)
            .iter()
            .zip(p0)
            .map(|(a, b)| a.sub(b))
            .collect();
        basis.insert(&dir);
    }
    basis
}

fn span_dim<F: ExactField>(config: &PointConfig<F>, base: &[usize]) -> usize {
    span_basis(config, base).dim()
}

/// All point indices inside the affine span of `base`.
fn points_in_span<F: ExactField>(config: &PointConfig<F>, base: &[usize]) -> Vec<usize> {
    let p0 = config.point(base[0]);
    let basis = span_basis(config, base);
    (0..config.len())
        .filter(|&x| {
            if base.contains(&x) {
                return true;
            }
            let w: Vec<F> = config
                .point(x)
                .iter()
                .zip(p0)
                .map(|(a, b)| a.sub(b))
                .collect();
            basis.contains(&w)
        })
        .collect()
}

/// Refined bound in ℂ³ with no plane holding more than 2n/3 points:
/// reports the largest c with t₂ ≥ 3n/2 + c·Σ_{r≥4} r²·t_r, and passes when
/// the fitted c reaches `c_min` (the tail sum 0 passes vacuously).
pub fn check_main<F: ExactField>(config: &PointConfig<F>, c_min: &BigRational) -> VerdictReport {
    let mut rep = VerdictReport::new("rich");
    let n = config.len();
    rep.hypothesis("ambient dimension 3", config.dim() == 3);
    if !rep.applicable {
        return rep;
    }
    let (plane_max, members) = max_plane_count(config);
    let plane_ok = 3 * plane_max <= 2 * n;
    rep.hypothesis("no plane holds more than 2n/3 points", plane_ok);
    if !plane_ok {
        rep.witness(line_witness(config, &members).replace("line{", "plane{"));
        return rep;
    }
    let inc = config.enumerate_lines();
    let tail = inc.weighted_tail(4, |r| r * r) as i64;
    let t2 = t2_rat(&inc);
    let base = rat_frac(3 * n as i64, 2);
    if tail == 0 {
        rep.note("no lines with 4 or more points; fitted c unconstrained");
        rep.conclude(base, t2.clone());
        // c = ∞ ≥ c_min vacuously.
        rep.pass = rep.applicable;
        rep.note("fitted_c = infinity".to_string());
        return rep;
    }
    let fitted = (&t2 - &base) / rat_int(tail);
    rep.note(format!("fitted_c = {}", super::rational_str(&fitted)));
    let claimed = base + c_min * rat_int(tail);
    rep.conclude(claimed, t2);
    rep
}

/// Quadratic lower bound in ℂ⁴: t₂ ≥ n²/12 when no 3-dimensional affine
/// subspace holds more than 2n/3 points.
pub fn check_higherdim<F: ExactField>(config: &PointConfig<F>) -> VerdictReport {
    let mut rep = VerdictReport::new("quad");
    let n = config.len();
    rep.hypothesis("ambient dimension 4", config.dim() == 4);
    if !rep.applicable {
        return rep;
    }
    let (flat_max, members) = max_flat3_count(config);
    let ok = 3 * flat_max <= 2 * n;
    rep.hypothesis("no 3-flat holds more than 2n/3 points", ok);
    if !ok {
        rep.witness(line_witness(config, &members).replace("line{", "flat{"));
        return rep;
    }
    let inc = config.enumerate_lines();
    rep.conclude(rat_frac((n * n) as i64, 12), t2_rat(&inc));
    rep
}

fn dep_pattern_verdict<F: ExactField>(
    config: &PointConfig<F>,
    inc: &IncidenceStructure,
    budget_cols: usize,
    seed: u64,
) -> Result<PropertySVerdict, DepError> {
    let a = full_dep_matrix(config, inc, Construction::V1, seed, DEFAULT_RETRIES)?;
    let pattern = ZeroPattern::from_dep_matrix(&a);
    Ok(property_s(&pattern, budget_cols, seed))
}

/// Dichotomy under a scaling obstruction: when the dependency matrix has a
/// zero submatrix scoring above 1, either some point lies on at least
/// 2(n+1)/3 − b* ordinary lines, or t₂ ≥ n·b*/2.
pub fn check_dichotomy<F: ExactField>(
    config: &PointConfig<F>,
    b_star: i64,
    budget_cols: usize,
    seed: u64,
) -> VerdictReport {
    let mut rep = VerdictReport::new("dichotomy");
    let n = config.len() as i64;
    rep.hypothesis("1 < b* < 2n/3", 1 < b_star && 3 * b_star < 2 * n);
    if !rep.applicable {
        return rep;
    }
    let inc = config.enumerate_lines();
    match dep_pattern_verdict(config, &inc, budget_cols, seed) {
        Err(DepError::NoSpecialLines) => {
            rep.hypothesis("dependency matrix violates the zero-submatrix condition", false);
            rep.note("no special lines: empty dependency matrix satisfies the condition");
        }
        Err(e) => {
            rep.hypothesis(&format!("dependency matrix built ({})", e), false);
        }
        Ok(PropertySVerdict::Satisfied { .. }) => {
            rep.hypothesis("dependency matrix violates the zero-submatrix condition", false);
            rep.note("condition satisfied: statement inapplicable");
        }
        Ok(PropertySVerdict::Unknown { .. }) => {
            rep.hypothesis("dependency matrix violates the zero-submatrix condition", false);
            rep.note("search budget exhausted: violation status unknown");
        }
        Ok(PropertySVerdict::Violated { witness }) => {
            rep.hypothesis("dependency matrix violates the zero-submatrix condition", true);
            rep.note(format!(
                "violation witness: {} rows x {} cols, score {}",
                witness.a(),
                witness.b(),
                super::rational_str(&witness.score)
            ));
            let bound1 = rat_frac(2 * (n + 1), 3) - rat_int(b_star);
            let best_point = (0..config.len())
                .map(|i| (inc.ordinary_count_through(i), i))
                .max()
                .unwrap();
            let d1 = rat_int(best_point.0 as i64) >= bound1;
            let bound2 = rat_frac(n * b_star, 2);
            let t2 = t2_rat(&inc);
            let d2 = t2 >= bound2;
            if d1 {
                rep.note("disjunct 1: a point with many ordinary lines");
                rep.witness(format!(
                    "point {} on {} ordinary lines",
                    config.label(best_point.1),
                    best_point.0
                ));
                rep.conclude(bound1, rat_int(best_point.0 as i64));
            } else if d2 {
                rep.note("disjunct 2: many ordinary lines in total");
                rep.conclude(bound2, t2);
            } else {
                rep.note("neither disjunct holds");
                rep.conclude(bound2, t2);
            }
        }
    }
    rep
}

/// Under a certified scaling condition on the dependency matrix and affine
/// dimension d ≥ 3: t₂ ≥ (d−3)/(2(d+1))·n² + 3n/2.
#[allow(non_snake_case)]
pub fn check_propS_bound<F: ExactField>(
    config: &PointConfig<F>,
    budget_cols: usize,
    seed: u64,
) -> VerdictReport {
    let mut rep = VerdictReport::new("props");
    let d = config.affine_dim() as i64;
    rep.hypothesis("affine dimension at least 3", d >= 3);
    if !rep.applicable {
        return rep;
    }
    let inc = config.enumerate_lines();
    let n = config.len() as i64;
    let certified = match dep_pattern_verdict(config, &inc, budget_cols, seed) {
        Err(DepError::NoSpecialLines) => {
            rep.note("no special lines: the empty dependency matrix satisfies the condition");
            true
        }
        Err(e) => {
            rep.note(format!("dependency matrix construction failed: {}", e));
            false
        }
        Ok(PropertySVerdict::Satisfied { .. }) => true,
        Ok(PropertySVerdict::Violated { witness }) => {
            rep.note(format!(
                "zero-submatrix condition violated: score {}",
                super::rational_str(&witness.score)
            ));
            false
        }
        Ok(PropertySVerdict::Unknown { .. }) => {
            rep.note("search budget exhausted: certification unavailable");
            false
        }
    };
    rep.hypothesis("dependency matrix satisfies the zero-submatrix condition", certified);
    if !rep.applicable {
        return rep;
    }
    let claimed = rat_frac(d - 3, 2 * (d + 1)) * rat_int(n * n) + rat_frac(3 * n, 2);
    rep.conclude(claimed, t2_rat(&inc));
    rep
}

/// Σ_{r≥4}(r²−r)·t_r drops by at most 4(n−1) when one point is removed.
pub fn check_removal_lemma<F: ExactField>(config: &PointConfig<F>, i: usize) -> VerdictReport {
    let mut rep = VerdictReport::new("removal");
    let n = config.len();
    rep.hypothesis("n >= 2", n >= 2);
    rep.hypothesis("valid point index", i < n);
    if !rep.applicable {
        return rep;
    }
    let inc = config.enumerate_lines();
    let before = inc.weighted_tail(4, |r| r * r - r) as i64;
    let reduced = config.without_point(i).expect("n >= 2");
    let after = reduced.enumerate_lines().weighted_tail(4, |r| r * r - r) as i64;
    rep.witness(format!("removed {}", config.label(i)));
    rep.conclude(rat_int(before - 4 * (n as i64 - 1)), rat_int(after));
    rep
}

pub use super::prune::run_prune as run_prune_reexport;

#[allow(unused_imports)]
use crate::scalerank::property_s as _;
