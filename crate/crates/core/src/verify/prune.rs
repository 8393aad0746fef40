//! The pruning algorithm: repeatedly remove a point carrying at least
//! (n − j)/2 ordinary lines in the current set, stopping at the n/3 cap, at
//! the case-2 bound, or when nothing qualifies.

use num::BigRational;

use super::{rat_frac, rat_int, VerdictReport};
use crate::exactgeom::field::ExactField;
use crate::exactgeom::geom::PointConfig;
use crate::verify::checks::{max_flat3_count, max_plane_count};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PruneFloor {
    /// Configuration must stay non-planar; case-2 bound is the refined
    /// 3n/2 + c₁·Σ(r²−r)t_r inequality.
    Plane,
    /// Configuration must stay outside 3-flats; case-2 bound is n²/12.
    Flat3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// No qualifying point, and the current set meets the case-2 bound.
    Case2,
    /// The ⌊n/3⌋ removal cap was reached.
    JCap,
    /// No qualifying point and the case-2 bound also fails (expected only
    /// below the asymptotic regime).
    NoneFound,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StopReason::Case2 => write!(f, "case2"),
            StopReason::JCap => write!(f, "j-cap"),
            StopReason::NoneFound => write!(f, "none-found"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PruneStep {
    /// Index of the removed point in the original configuration.
    pub removed_original_index: usize,
    /// Ordinary-line count through the point at removal time.
    pub ordinary_at_removal: usize,
    /// Points remaining after the removal.
    pub remaining_n: usize,
}

#[derive(Clone, Debug)]
pub struct PruneTrace {
    pub steps: Vec<PruneStep>,
    pub stop: StopReason,
    /// Σ_i max(0, count_i − (i−1)): a lower bound on t₂ of the original
    /// configuration accumulated from the pruned points.
    pub accumulated_bound: usize,
    /// t₂ of the set at stopping time.
    pub t2_at_stop: usize,
}

impl PruneTrace {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "steps": self.steps.iter().map(|s| serde_json::json!({
                "removed": s.removed_original_index,
                "ordinary": s.ordinary_at_removal,
                "remaining": s.remaining_n,
            })).collect::<Vec<_>>(),
            "stop": self.stop.to_string(),
            "accumulated_bound": self.accumulated_bound,
            "t2_at_stop": self.t2_at_stop,
        })
    }
}

fn case2_bound<F: ExactField>(
    current: &PointConfig<F>,
    floor: PruneFloor,
    c1: &BigRational,
) -> (BigRational, BigRational) {
    let inc = current.enumerate_lines();
    let t2 = rat_int(inc.t(2) as i64);
    let nj = current.len() as i64;
    let claimed = match floor {
        PruneFloor::Plane => {
            let tail = inc.weighted_tail(4, |r| r * r - r) as i64;
            rat_frac(3 * nj, 2) + c1 * rat_int(tail)
        }
        PruneFloor::Flat3 => rat_frac(nj * nj, 12),
    };
    (claimed, t2)
}

/// Run the pruning loop and verify its bookkeeping exactly.
///
/// Qualification is checked by direct counting: a point qualifies at step j
/// when it lies on at least (n − j)/2 ordinary lines of the current set
/// (n is the original point count). Among qualifying points the one with
/// the most ordinary lines is removed, ties to the lowest index.
pub fn run_prune<F: ExactField>(
    config: &PointConfig<F>,
    floor: PruneFloor,
    c1: &BigRational,
) -> (PruneTrace, VerdictReport) {
    let mut rep = VerdictReport::new("prune");
    let n = config.len();
    let (required_dim, condition_holds, witness_len) = match floor {
        PruneFloor::Plane => {
            let (count, members) = max_plane_count(config);
            (3usize, 3 * count <= 2 * n, members.len())
        }
        PruneFloor::Flat3 => {
            let (count, members) = max_flat3_count(config);
            (4usize, 3 * count <= 2 * n, members.len())
        }
    };
    rep.hypothesis(
        "no forbidden subspace holds more than 2n/3 points",
        condition_holds,
    );
    if !condition_holds {
        rep.note(format!("heaviest subspace holds {} points", witness_len));
        return (
            PruneTrace {
                steps: Vec::new(),
                stop: StopReason::NoneFound,
                accumulated_bound: 0,
                t2_at_stop: 0,
            },
            rep,
        );
    }

    let cap = n / 3;
    let mut remaining: Vec<usize> = (0..n).collect(); // original indices
    let mut current = config.clone();
    let mut steps: Vec<PruneStep> = Vec::new();
    let stop;
    loop {
        let j = steps.len();
        if j == cap {
            stop = StopReason::JCap;
            break;
        }
        if current.affine_dim() < required_dim {
            rep.note(format!(
                "dimension collapsed below {} after {} removals",
                required_dim, j
            ));
            stop = StopReason::NoneFound;
            break;
        }
        let inc = current.enumerate_lines();
        // Qualify: 2·count ≥ n − j, exact.
        let mut best: Option<(usize, usize)> = None; // (count, current index)
        for i in 0..current.len() {
            let count = inc.ordinary_count_through(i);
            if 2 * count >= n - j && best.as_ref().is_none_or(|(c, _)| count > *c) {
                best = Some((count, i));
            }
        }
        match best {
            None => {
                let (claimed, t2) = case2_bound(&current, floor, c1);
                if t2 >= claimed {
                    stop = StopReason::Case2;
                } else {
                    stop = StopReason::NoneFound;
                    rep.note("no qualifying point and the case-2 bound fails");
                }
                break;
            }
            Some((count, i)) => {
                steps.push(PruneStep {
                    removed_original_index: remaining[i],
                    ordinary_at_removal: count,
                    remaining_n: current.len() - 1,
                });
                remaining.remove(i);
                match current.without_point(i) {
                    Ok(next) => current = next,
                    Err(_) => {
                        stop = StopReason::NoneFound;
                        rep.note("configuration exhausted");
                        break;
                    }
                }
            }
        }
    }

    // Double-counting: each pruned point contributes its ordinary lines at
    // removal time minus at most one line per previously pruned point.
    let mut accumulated = 0usize;
    for (idx, s) in steps.iter().enumerate() {
        accumulated += s.ordinary_at_removal.saturating_sub(idx);
    }
    let t2_original = config.enumerate_lines().t(2);
    let t2_at_stop = current.enumerate_lines().t(2);

    rep.hypothesis("trace length within the n/3 cap", steps.len() <= cap);
    rep.note(format!("stop = {}", stop));
    rep.conclude(rat_int(accumulated as i64), rat_int(t2_original as i64));
    (
        PruneTrace {
            steps,
            stop,
            accumulated_bound: accumulated,
            t2_at_stop,
        },
        rep,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configgen::generators::{coplanar_plus, random_generic};
    use crate::scalerank::default_c1;

    #[test]
    fn generic_30_in_dim4_runs_to_cap() {
        let c = random_generic(30, 4, 1).unwrap();
        let (trace, rep) = run_prune(&c, PruneFloor::Flat3, &default_c1());
        assert_eq!(trace.stop, StopReason::JCap);
        assert_eq!(trace.steps.len(), 10);
        assert!(rep.pass, "bookkeeping identity must hold");
        // Every step found a qualifying point with full ordinary count.
        for (i, s) in trace.steps.iter().enumerate() {
            assert_eq!(s.ordinary_at_removal, 30 - i - 1);
        }
        assert!(trace.accumulated_bound <= c.enumerate_lines().t(2));
    }

    #[test]
    fn no_qualifying_point_stops_early() {
        // 24 generic points in a plane inside C^3 plus 12 off: heavy plane →
        // hypothesis fails outright.
        let c = coplanar_plus(30, 5, 2).unwrap();
        // 25 of 30 on a plane: 3·25 > 60 → inapplicable.
        let (_, rep) = run_prune(&c, PruneFloor::Plane, &default_c1());
        assert!(!rep.applicable);
    }

    #[test]
    fn plane_floor_runs_on_balanced_config() {
        let c = coplanar_plus(12, 5, 3).unwrap(); // 7 on plane ≤ 8 = 2n/3
        let (trace, rep) = run_prune(&c, PruneFloor::Plane, &default_c1());
        assert!(rep.applicable);
        assert!(rep.pass);
        assert!(trace.steps.len() <= 4);
    }

    #[test]
    fn grid_prunes_with_exact_bookkeeping() {
        // The 3×3×3 integer grid is line-rich (49 three-point lines,
        // t2 = 204) yet its edge points still carry enough ordinary lines
        // to qualify, so the run reaches the cap with the accumulated
        // bound staying below t2.
        use crate::exactgeom::field::GaussianRational as G;
        let mut pts = Vec::new();
        for x in 0..3i64 {
            for y in 0..3i64 {
                for z in 0..3i64 {
                    pts.push(vec![G::from_int(x), G::from_int(y), G::from_int(z)]);
                }
            }
        }
        let c = crate::exactgeom::geom::PointConfig::new(3, pts).unwrap();
        let inc = c.enumerate_lines();
        assert_eq!(inc.t(3), 49);
        assert_eq!(inc.t(2), 204);
        let (trace, rep) = run_prune(&c, PruneFloor::Plane, &default_c1());
        assert!(rep.applicable);
        assert_eq!(trace.stop, StopReason::JCap);
        assert_eq!(trace.steps.len(), 9);
        assert!(trace.accumulated_bound <= 204);
        assert!(rep.pass);
    }
}
