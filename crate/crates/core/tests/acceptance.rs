//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use olines::configgen::{
    self, apex_index, coplanar_plus_fermat, fermat, fermat_with_apex, random_generic, AnyConfig,
};
use olines::depmat::{full_dep_matrix, line_dep_matrix, Construction, DEFAULT_RETRIES};
use olines::exactgeom::field::{rat, ExactField, GaussianRational};
use olines::exactgeom::geom::PointConfig;
use olines::exactgeom::matrix::Mat;
use olines::latin::{skew_diagonal_square, triple_system};
use olines::scalerank::{
    default_c0, l2_scale, offdiag_identity_check, property_s, property_s_bruteforce,
    rank_lower_bound, squares_bound_check, RowScaledMatrix, ZeroPattern, DEFAULT_BUDGET_COLS,
};
use olines::verify::{
    check_3n2, check_hirzebruch, check_kelly, check_melchior, check_removal_lemma, run_prune,
    PruneFloor, StopReason,
};

fn announce(criterion: usize, detail: &str) {
    println!("criterion {:2}: PASS - {}", criterion, detail);
}

fn g(n: i64, d: i64) -> GaussianRational {
    GaussianRational::from_ratio(n, d)
}

/// Random Gaussian-rational value with small numerator and denominator.
fn small_gauss(rng: &mut ChaCha8Rng) -> GaussianRational {
    GaussianRational::from_parts(
        rng.gen_range(-20..=20),
        rng.gen_range(1..=4),
        rng.gen_range(-20..=20),
        rng.gen_range(1..=4),
    )
}

/// r distinct collinear points p + t_i·u in ℂ² with rational complex t_i.
fn random_collinear(r: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<GaussianRational>> {
    let p = [small_gauss(rng), small_gauss(rng)];
    let mut u = [small_gauss(rng), small_gauss(rng)];
    while u[0].is_zero() && u[1].is_zero() {
        u = [small_gauss(rng), small_gauss(rng)];
    }
    let mut ts: Vec<GaussianRational> = Vec::new();
    while ts.len() < r {
        let t = small_gauss(rng);
        if !ts.contains(&t) {
            ts.push(t);
        }
    }
    ts.iter()
        .map(|t| vec![p[0].add(&t.mul(&u[0])), p[1].add(&t.mul(&u[1]))])
        .collect()
}

fn fixture(name: &str) -> AnyConfig {
    let dir = std::env::var("OLINES_FIXTURES").unwrap_or_else(|_| {
        format!("{}/../../fixtures", env!("CARGO_MANIFEST_DIR"))
    });
    let path = std::path::Path::new(&dir).join(name);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("fixture {} unreadable: {}", path.display(), e));
    configgen::parse(&text).expect("fixture parses")
}

#[test]
fn criterion_01_fermat_family() {
    let t0 = Instant::now();
    for k in 3..=12u32 {
        let c = fermat(k).unwrap();
        assert_eq!(c.len(), 3 * k as usize);
        let inc = c.enumerate_lines();
        assert_eq!(inc.t(2), 0, "k = {}: ordinary lines must not exist", k);
        if k == 3 {
            assert_eq!(inc.t_profile().clone(), [(3, 12)].into_iter().collect());
        } else {
            let expect = [(3usize, (k * k) as usize), (k as usize, 3)]
                .into_iter()
                .collect();
            assert_eq!(inc.t_profile().clone(), expect, "k = {}", k);
        }
        assert!(inc.pair_count_identity_holds());
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {:?}", elapsed);
    announce(1, &format!("fermat families 3..=12 exact, {:?}", elapsed));
}

#[test]
fn criterion_02_apex_family() {
    for k in 3..=12u32 {
        let c = fermat_with_apex(k).unwrap();
        assert_eq!(c.len(), 3 * k as usize + 1);
        let inc = c.enumerate_lines();
        assert_eq!(inc.t(2), 3 * k as usize, "k = {}", k);
        let apex = apex_index(k);
        for l in inc.lines() {
            if l.size() == 2 {
                assert!(l.contains(apex), "k = {}: ordinary line missing apex", k);
            }
        }
    }
    announce(2, "apex families 3..=12: t2 = 3k, all through the apex");
}

fn fixtures_with_special_lines() -> Vec<(String, AnyConfig)> {
    vec![
        ("hesse.cfg".into(), fixture("hesse.cfg")),
        ("fermat4.cfg".into(), fixture("fermat4.cfg")),
        ("fermat_apex3.cfg".into(), fixture("fermat_apex3.cfg")),
        (
            "fermat(5)".into(),
            AnyConfig::Cyclotomic(fermat(5).unwrap()),
        ),
        (
            "fermat_with_apex(4)".into(),
            AnyConfig::Cyclotomic(fermat_with_apex(4).unwrap()),
        ),
        (
            "coplanar fermat plane".into(),
            AnyConfig::Cyclotomic(coplanar_plus_fermat(3, 10, 1, 7).unwrap()),
        ),
    ]
}

fn for_each_fixture_matrix(
    mut f: impl FnMut(&str, Construction, usize, usize, usize, bool),
) {
    for (name, config) in fixtures_with_special_lines() {
        olines::with_config!(&config, cfg => {
            let inc = cfg.enumerate_lines();
            let n = cfg.len();
            let t2 = inc.t(2);
            for cons in [Construction::V1, Construction::V2] {
                let a = full_dep_matrix(cfg, &inc, cons, 11, DEFAULT_RETRIES).unwrap();
                f(&name, cons, a.nrows(), n, t2, a.annihilates(cfg));
            }
        });
    }
}

#[test]
fn criterion_03_row_count_identity() {
    for_each_fixture_matrix(|name, cons, m, n, t2, _| {
        assert_eq!(
            m,
            n * n - n - 2 * t2,
            "{} ({}): m = n^2 - n - 2 t2 violated",
            name,
            cons
        );
    });
    announce(3, "m = n^2 - n - 2*t2 on all fixtures, both constructions");
}

#[test]
fn criterion_04_exact_annihilation() {
    for_each_fixture_matrix(|name, cons, _, _, _, annihilates| {
        assert!(annihilates, "{} ({}): A·V must vanish exactly", name, cons);
    });
    announce(4, "A·V = 0 exactly for every constructed dependency matrix");
}

#[test]
fn criterion_05_triple_system_suite() {
    let t0 = Instant::now();
    for r in 3..=50usize {
        let ts = triple_system(r).unwrap();
        assert_eq!(ts.len(), r * r - r);
        assert!(ts.all_triples_distinct(), "r = {}", r);
        assert!(ts.pair_counts_exactly_six(), "r = {}", r);
        if r >= 4 {
            assert!(ts.pairs_have_distinct_thirds(), "r = {}", r);
        }
    }
    let expected_six = [
        [1, 4, 5, 3, 6, 2],
        [3, 2, 6, 5, 1, 4],
        [2, 5, 3, 6, 4, 1],
        [6, 1, 2, 4, 3, 5],
        [4, 6, 1, 2, 5, 3],
        [5, 3, 4, 1, 2, 6],
    ];
    let six = skew_diagonal_square(6).unwrap();
    for i in 1..=6 {
        for j in 1..=6 {
            assert_eq!(six.get(i, j), expected_six[i - 1][j - 1], "entry ({},{})", i, j);
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {:?}", elapsed);
    announce(5, &format!("triple systems 3..=50 exhaustive, {:?}", elapsed));
}

#[test]
fn criterion_06_angle_lemma() {
    let mut checked = 0;
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            let pts = random_collinear(4, &mut rng);
            let res = olines::depmat::four_point_angle_case(&pts[0], &pts[1], &pts[2], &pts[3])
                .expect("collinear quadruple");
            assert!(res.sum_is_pi, "angle sum must be exactly pi");
            assert!(!res.cases.is_empty(), "some angle must reach pi/3");
            checked += 1;
        }
    }
    assert_eq!(checked, 1000);
    announce(6, "1000 random collinear quadruples: sum = pi, a case >= pi/3");
}

#[test]
fn criterion_07_property4_density() {
    for r in 4..=20usize {
        for seed in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed * 131 + r as u64);
            let pts = random_collinear(r, &mut rng);
            let m = line_dep_matrix(&pts, seed, DEFAULT_RETRIES).unwrap();
            let required = (r * r - r).div_ceil(3);
            assert_eq!(m.certificate.required, Some(required));
            assert!(
                m.certificate.certified,
                "r = {} seed = {}: only {} of {} rows certified (budget exhausted => Unknown)",
                r, seed, m.certificate.achieved, required
            );
        }
    }
    announce(7, "4 <= r <= 20, 100 seeds each: >= ceil((r^2-r)/3) rows certified");
}

#[test]
fn criterion_08_offdiag_identity() {
    for r in 3..=12usize {
        for seed in 0..3u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(900 + seed * 7 + r as u64);
            let pts = random_collinear(r, &mut rng);
            let line = line_dep_matrix(&pts, seed, DEFAULT_RETRIES).unwrap();
            let a = RowScaledMatrix::from_line_matrix(&line)
                .normalize_rows_to(&rat(1, 1))
                .unwrap();
            let rep = offdiag_identity_check(&a, &rat(1, 1)).unwrap();
            assert_eq!(rep.q, 3);
            assert_eq!(rep.t, 6);
            assert_eq!(rep.m, r * r - r);
            assert!(
                rep.residual_is_zero,
                "r = {} seed = {}: residual must be exactly zero",
                r, seed
            );
        }
    }
    announce(8, "off-diagonal identity residual exactly 0 for 3 <= r <= 12");
}

#[test]
fn criterion_09_squares_bound() {
    let c0 = default_c0();
    assert_eq!(c0, BigRational::new(BigInt::from(1), BigInt::from(150)));
    for r in 4..=12usize {
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(4000 + seed * 17 + r as u64);
            let pts = random_collinear(r, &mut rng);
            let line = line_dep_matrix(&pts, seed, DEFAULT_RETRIES).unwrap();
            let cert = line.certificate.clone();
            let a = RowScaledMatrix::from_line_matrix(&line)
                .normalize_rows_to(&rat(1, 1))
                .unwrap();
            let rep = squares_bound_check(&a, &cert, &rat(1, 1), &c0).unwrap();
            assert!(rep.holds, "r = {} seed = {}: margin {}", r, seed, rep.margin_f64);
        }
    }
    announce(9, "squares bound with c0 = 1/150 holds, 4 <= r <= 12 x 20 seeds");
}

#[test]
fn criterion_10_scaling() {
    let t0 = Instant::now();
    let hesse = fermat(3).unwrap();
    let inc = hesse.enumerate_lines();
    let a = full_dep_matrix(&hesse, &inc, Construction::V1, 0, 0).unwrap();
    let numeric = a.to_complex();
    let epsilon = 1e-6;
    let (scaled, result) = l2_scale(&numeric, epsilon, 100_000).unwrap();
    assert!(result.converged);
    assert!(result.iterations <= 100_000);
    for row in &scaled {
        let s: f64 = row.iter().map(|z| z.norm_sqr()).sum();
        assert!((s - (1.0 + epsilon)).abs() < 1e-9, "row sum {}", s);
    }
    assert!(
        result.min_col_sum >= 72.0 / 9.0 - epsilon,
        "min column sum {}",
        result.min_col_sum
    );
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {:?}", elapsed);
    announce(
        10,
        &format!(
            "72x9 scaling: {} iterations, min col l2^2 = {:.9}",
            result.iterations, result.min_col_sum
        ),
    );
}

#[test]
fn criterion_11_rank_bound_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let mut tested = 0;
    while tested < 500 {
        let n = rng.gen_range(1..=12usize);
        let hermitian = if rng.gen_bool(0.5) {
            // Gram of a random complex matrix (positive semidefinite).
            let k = rng.gen_range(1..=12usize);
            let b = Mat::from_rows(
                (0..k)
                    .map(|_| (0..n).map(|_| small_gauss(&mut rng)).collect())
                    .collect::<Vec<Vec<GaussianRational>>>(),
            );
            b.gram()
        } else {
            // Random hermitian with real diagonal.
            let mut m = Mat::fill(n, n, g(0, 1));
            for i in 0..n {
                for j in i..n {
                    if i == j {
                        m.set(i, i, GaussianRational::from_int(rng.gen_range(-9..=9)));
                    } else {
                        let z = small_gauss(&mut rng);
                        m.set(i, j, z.clone());
                        m.set(j, i, z.conj());
                    }
                }
            }
            m
        };
        // Floor: the smallest diagonal modulus, must be positive.
        let mut floor: Option<BigRational> = None;
        let mut ok = true;
        for i in 0..n {
            let d = hermitian.get(i, i).as_rational().expect("real diagonal");
            let mag = if d < BigRational::from_integer(BigInt::from(0)) {
                -d
            } else {
                d
            };
            if mag == BigRational::from_integer(BigInt::from(0)) {
                ok = false;
                break;
            }
            floor = Some(match floor {
                None => mag,
                Some(f) => f.min(mag),
            });
        }
        if !ok {
            continue;
        }
        let bound = rank_lower_bound(&hermitian, &floor.unwrap()).unwrap();
        let rank = hermitian.rank();
        assert!(
            bound.le_usize(rank),
            "bound {} exceeds exact rank {}",
            bound.to_f64(),
            rank
        );
        tested += 1;
    }
    announce(11, "500 random hermitian matrices: bound never exceeds exact rank");
}

#[test]
fn criterion_12_property_s_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    for case in 0..100 {
        let m = rng.gen_range(1..=16usize);
        let n = rng.gen_range(1..=12usize);
        let density = rng.gen_range(0.15..0.75);
        let mask: Vec<Vec<bool>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_bool(density)).collect())
            .collect();
        let p = ZeroPattern::from_bool_rows(&mask);
        let fast = property_s(&p, DEFAULT_BUDGET_COLS, case);
        let slow = property_s_bruteforce(&p);
        assert_eq!(
            fast.is_violated(),
            slow.is_violated(),
            "case {}: verdicts differ",
            case
        );
        assert_eq!(
            fast.witness().score,
            slow.witness().score,
            "case {}: best scores differ",
            case
        );
    }
    announce(12, "100 sparse patterns: branch-and-bound equals brute force");
}

#[test]
fn criterion_13_theorem_spot_checks() {
    let t0 = Instant::now();

    // 50 random non-planar configurations, n <= 15.
    let mut rng = ChaCha8Rng::seed_from_u64(5150);
    for i in 0..50u64 {
        let n = rng.gen_range(5..=15usize);
        let c = random_generic(n, 3, 9_000 + i).unwrap();
        let rep = check_kelly(&c);
        assert!(rep.applicable && rep.pass, "kelly run {}", i);
    }

    // 50 random real planar configurations.
    for i in 0..50u64 {
        let n = rng.gen_range(3..=15usize);
        let c = random_generic(n, 2, 10_000 + i).unwrap();
        let rep = check_melchior(&c);
        assert!(rep.applicable && rep.pass, "melchior run {}", i);
    }

    // The planar 9-point fixture: margin exactly 0.
    let AnyConfig::Cyclotomic(hesse) = fixture("hesse.cfg") else {
        panic!("hesse fixture is cyclotomic")
    };
    let rep = check_hirzebruch(&hesse);
    assert!(rep.applicable && rep.pass);
    assert_eq!(rep.margin, Some(rat(0, 1)), "margin must be exactly 0");

    // Branch 2 of the 3n/2 statement on the n-1-coplanar family.
    let c = coplanar_plus_fermat(8, 25, 1, 5).unwrap();
    let rep = check_3n2(&c);
    assert!(rep.applicable && rep.pass);
    assert!(rep.notes.iter().any(|n| n.contains("branch 2")));
    assert_eq!(rep.observed, Some(rat(24, 1)));

    // 200 random (configuration, point) removal checks, n <= 15.
    let mut done = 0;
    let mut run = 0u64;
    while done < 200 {
        run += 1;
        let n = rng.gen_range(4..=15usize);
        let d = rng.gen_range(2..=3usize);
        // Mix in configurations with special lines by collapsing one
        // coordinate of a generic sample onto a line through two points.
        let mut c = random_generic(n, d, 20_000 + run).unwrap();
        if run % 3 == 0 && n >= 5 {
            let pts = c.points().to_vec();
            let mut merged = pts.clone();
            // Place point 2 on the line of points 0 and 1 (midpoint).
            let mid: Vec<GaussianRational> = pts[0]
                .iter()
                .zip(&pts[1])
                .map(|(a, b)| a.add(b).scale_rational(&rat(1, 2)))
                .collect();
            if !merged.contains(&mid) {
                merged[2] = mid;
                if let Ok(cfg) = PointConfig::new(d, merged) {
                    c = cfg;
                }
            }
        }
        let i = rng.gen_range(0..c.len());
        let rep = check_removal_lemma(&c, i);
        assert!(rep.applicable && rep.pass, "removal run {}", run);
        done += 1;
    }

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {:?}", elapsed);
    announce(13, &format!("kelly/melchior/hirzebruch/3n2/removal, {:?}", elapsed));
}

#[test]
fn criterion_14_prune_traces() {
    let c = random_generic(30, 4, 1).unwrap();
    let (trace, rep) = run_prune(&c, PruneFloor::Flat3, &olines::scalerank::default_c1());
    assert!(rep.applicable);
    assert_eq!(trace.stop, StopReason::JCap);
    assert_eq!(trace.steps.len(), 10, "cap at j = n/3 = 10");
    // Bookkeeping identity at every step: the running accumulated bound
    // never exceeds the true ordinary-line count of the original set.
    let t2 = c.enumerate_lines().t(2);
    let mut acc = 0usize;
    for (idx, s) in trace.steps.iter().enumerate() {
        acc += s.ordinary_at_removal.saturating_sub(idx);
        assert!(acc <= t2, "step {}: accumulated {} exceeds t2 {}", idx, acc, t2);
    }
    assert_eq!(acc, trace.accumulated_bound);
    assert!(rep.pass);
    announce(
        14,
        &format!("prune run capped at j = 10; accumulated {} <= t2 {}", acc, t2),
    );
}
