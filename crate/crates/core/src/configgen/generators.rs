//! Generators for the example configuration families and random test sets.

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::cyclotomic::{Cyclotomic, CyclotomicField};
use crate::exactgeom::field::{ExactField, GaussianRational};
use crate::exactgeom::geom::PointConfig;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("could not find a generic sample within the attempt budget")]
    SamplingExhausted,
}

/// A recipe fully determining a generated configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigRecipe {
    Fermat { k: u32 },
    FermatAffine { k: u32 },
    FermatWithApex { k: u32 },
    CoplanarPlus { n: usize, k: usize, seed: u64, fermat_plane: Option<u32> },
    RandomGeneric { n: usize, d: usize, seed: u64 },
}

/// A configuration over either supported coordinate field.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyConfig {
    Gaussian(PointConfig<GaussianRational>),
    Cyclotomic(PointConfig<Cyclotomic>),
}

impl AnyConfig {
    pub fn dim(&self) -> usize {
        match self {
            AnyConfig::Gaussian(c) => c.dim(),
            AnyConfig::Cyclotomic(c) => c.dim(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyConfig::Gaussian(c) => c.len(),
            AnyConfig::Cyclotomic(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Dispatch a generic closure over the concrete coordinate field.
#[macro_export]
macro_rules! with_config {
    ($any:expr, $cfg:ident => $body:expr) => {
        match $any {
            $crate::configgen::AnyConfig::Gaussian($cfg) => $body,
            $crate::configgen::AnyConfig::Cyclotomic($cfg) => $body,
        }
    };
}

pub fn generate(recipe: &ConfigRecipe) -> Result<AnyConfig, ConfigError> {
    Ok(match recipe {
        ConfigRecipe::Fermat { k } => AnyConfig::Cyclotomic(fermat(*k)?),
        ConfigRecipe::FermatAffine { k } => AnyConfig::Cyclotomic(fermat_affine(*k)?),
        ConfigRecipe::FermatWithApex { k } => AnyConfig::Cyclotomic(fermat_with_apex(*k)?),
        ConfigRecipe::CoplanarPlus { n, k, seed, fermat_plane } => match fermat_plane {
            None => AnyConfig::Gaussian(coplanar_plus(*n, *k, *seed)?),
            Some(fk) => AnyConfig::Cyclotomic(coplanar_plus_fermat(*fk, *n, *k, *seed)?),
        },
        ConfigRecipe::RandomGeneric { n, d, seed } => {
            AnyConfig::Gaussian(random_generic(*n, *d, *seed)?)
        }
    })
}

/// Homogeneous coordinates of the 3k-point family: three coordinate lines of
/// k points each, every point a unit vector pair with a negated k-th root of
/// unity. Lives in ℚ(ζ_{2k}) so that ω = ζ satisfies ω^k = −1.
fn fermat_projective(k: u32) -> Result<(Vec<Vec<Cyclotomic>>, Vec<String>), ConfigError> {
    if k < 3 {
        return Err(ConfigError::BadParameter(format!(
            "fermat requires k >= 3, got {}",
            k
        )));
    }
    let field = CyclotomicField::get(2 * k);
    let zero = field.zero();
    let one = field.one();
    let mut points = Vec::with_capacity(3 * k as usize);
    let mut labels = Vec::with_capacity(3 * k as usize);
    // -ζ^{2a} ranges over the negated k-th roots of unity as a = 1..k.
    let neg_root = |a: u32| field.zeta_pow(2 * a as i64).neg();
    for a in 1..=k {
        points.push(vec![one.clone(), neg_root(a), zero.clone()]);
        labels.push(format!("A{}", a));
    }
    for b in 1..=k {
        points.push(vec![neg_root(b), zero.clone(), one.clone()]);
        labels.push(format!("B{}", b));
    }
    for c in 1..=k {
        points.push(vec![zero.clone(), one.clone(), neg_root(c)]);
        labels.push(format!("C{}", c));
    }
    Ok((points, labels))
}

/// Deterministic scan for a small-integer linear functional that vanishes on
/// no configuration point: the projective line it cuts out can be sent to
/// infinity.
fn chart_functional(points: &[Vec<Cyclotomic>]) -> [i64; 3] {
    for radius in 1i64..=6 {
        for u in -radius..=radius {
            for v in -radius..=radius {
                for w in -radius..=radius {
                    if u.abs().max(v.abs()).max(w.abs()) != radius {
                        continue;
                    }
                    let cand = [u, v, w];
                    if points.iter().all(|p| !eval_functional(&cand, p).is_zero()) {
                        return cand;
                    }
                }
            }
        }
    }
    unreachable!("a valid chart functional exists with small coefficients")
}

fn eval_functional(f: &[i64; 3], p: &[Cyclotomic]) -> Cyclotomic {
    let mut acc = p[0].zero_like();
    for (c, coord) in f.iter().zip(p) {
        if *c != 0 {
            acc = acc.add(&coord.scale_rational(&BigRational::from_integer(BigInt::from(*c))));
        }
    }
    acc
}

/// The 3k-point configuration with three k-point lines, all other lines of
/// exactly 3 points and no ordinary lines, presented affinely in ℂ³ by
/// rescaling each homogeneous vector onto the chart plane φ = 1.
pub fn fermat(k: u32) -> Result<PointConfig<Cyclotomic>, ConfigError> {
    let (points, labels) = fermat_projective(k)?;
    let chart = chart_functional(&points);
    let rescaled: Vec<Vec<Cyclotomic>> = points
        .iter()
        .map(|p| {
            let scale = eval_functional(&chart, p)
                .inv()
                .expect("chart functional is nonzero on every point");
            p.iter().map(|c| c.mul(&scale)).collect()
        })
        .collect();
    Ok(PointConfig::new(3, rescaled)
        .expect("fermat points are distinct")
        .with_labels(labels))
}

/// The same configuration as an honest planar point set in ℂ²: a projective
/// map sends the chart line (which carries no configuration point) to the
/// line at infinity and the two remaining coordinates chart the plane.
pub fn fermat_affine(k: u32) -> Result<PointConfig<Cyclotomic>, ConfigError> {
    let (points, labels) = fermat_projective(k)?;
    let chart = chart_functional(&points);
    // Complete the chart row to an invertible coordinate change by keeping
    // two unit rows not parallel to it.
    let (c0, c1) = if chart[2] != 0 {
        (0, 1)
    } else if chart[1] != 0 {
        (0, 2)
    } else {
        (1, 2)
    };
    let rescaled: Vec<Vec<Cyclotomic>> = points
        .iter()
        .map(|p| {
            let scale = eval_functional(&chart, p)
                .inv()
                .expect("chart functional is nonzero on every point");
            vec![p[c0].mul(&scale), p[c1].mul(&scale)]
        })
        .collect();
    Ok(PointConfig::new(2, rescaled)
        .expect("fermat points are distinct in the chart")
        .with_labels(labels))
}

/// 3k coplanar points of the no-ordinary-line family plus one apex off their
/// plane; the apex index is `3k` (the last point). All 3k ordinary lines pass
/// through the apex.
pub fn fermat_with_apex(k: u32) -> Result<PointConfig<Cyclotomic>, ConfigError> {
    let planar = fermat(k)?;
    let field = CyclotomicField::get(2 * k);
    let mut points = planar.points().to_vec();
    let mut labels: Vec<String> = (0..planar.len()).map(|i| planar.label(i)).collect();
    // The plane carrying the configuration is φ = 1; the origin misses it.
    points.push(vec![field.zero(), field.zero(), field.zero()]);
    labels.push("apex".to_string());
    Ok(PointConfig::new(3, points)
        .expect("apex is distinct from the plane points")
        .with_labels(labels))
}

pub fn apex_index(k: u32) -> usize {
    3 * k as usize
}

fn int_rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// True when candidate `p` is collinear with some pair of `existing`.
fn collinear_with_existing<F: ExactField>(existing: &[Vec<F>], p: &[F]) -> bool {
    for i in 0..existing.len() {
        let u: Vec<F> = p.iter().zip(&existing[i]).map(|(a, b)| a.sub(b)).collect();
        let Some(pivot) = u.iter().position(|c| !c.is_zero()) else {
            return true; // duplicate point counts as a collision
        };
        for j in i + 1..existing.len() {
            let w: Vec<F> = existing[j]
                .iter()
                .zip(&existing[i])
                .map(|(a, b)| a.sub(b))
                .collect();
            if u.iter()
                .zip(&w)
                .all(|(uc, wc)| u[pivot].mul(wc) == uc.mul(&w[pivot]))
            {
                return true;
            }
        }
    }
    false
}

/// n−k points on the plane z = 0 in generic position within it, k generic
/// points off the plane; no unplanned collinear triples anywhere.
pub fn coplanar_plus(
    n: usize,
    k: usize,
    seed: u64,
) -> Result<PointConfig<GaussianRational>, ConfigError> {
    if !(1 <= k && 2 * k < n) {
        return Err(ConfigError::BadParameter(format!(
            "coplanar_plus requires 1 <= k < n/2, got n={} k={}",
            n, k
        )));
    }
    if n - k < 3 {
        return Err(ConfigError::BadParameter(
            "coplanar_plus requires n - k >= 3".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = 4 * (n as i64) * (n as i64) + 40;
    let mut points: Vec<Vec<GaussianRational>> = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while points.len() < n {
        let on_plane = points.len() < n - k;
        let coord = |rng: &mut ChaCha8Rng| GaussianRational::from_rational(int_rat(rng.gen_range(-range..=range)));
        let mut p = vec![coord(&mut rng), coord(&mut rng)];
        if on_plane {
            p.push(GaussianRational::from_int(0));
        } else {
            let mut z = rng.gen_range(-range..=range);
            while z == 0 {
                z = rng.gen_range(-range..=range);
            }
            p.push(GaussianRational::from_rational(int_rat(z)));
        }
        if points.contains(&p) || collinear_with_existing(&points, &p) {
            attempts += 1;
            if attempts > 10_000 {
                return Err(ConfigError::SamplingExhausted);
            }
            continue;
        }
        labels.push(if on_plane {
            format!("plane{}", points.len())
        } else {
            format!("off{}", points.len() - (n - k))
        });
        points.push(p);
    }
    Ok(PointConfig::new(3, points)
        .expect("sampled points are distinct")
        .with_labels(labels))
}

/// Variant realizing the extremal family: the plane part is the 3·fermat_k
/// no-ordinary-line configuration (embedded on z = 0), plus k generic points
/// off the plane. Requires n = 3·fermat_k + k.
pub fn coplanar_plus_fermat(
    fermat_k: u32,
    n: usize,
    k: usize,
    seed: u64,
) -> Result<PointConfig<Cyclotomic>, ConfigError> {
    if n != 3 * fermat_k as usize + k {
        return Err(ConfigError::BadParameter(format!(
            "fermat plane part needs n = 3*{} + {}, got n={}",
            fermat_k, k, n
        )));
    }
    if !(1 <= k && 2 * k < n) {
        return Err(ConfigError::BadParameter(format!(
            "coplanar_plus requires 1 <= k < n/2, got n={} k={}",
            n, k
        )));
    }
    let planar = fermat_affine(fermat_k)?;
    let field = CyclotomicField::get(2 * fermat_k);
    let mut points: Vec<Vec<Cyclotomic>> = planar
        .points()
        .iter()
        .map(|p| vec![p[0].clone(), p[1].clone(), field.zero()])
        .collect();
    let mut labels: Vec<String> = (0..planar.len()).map(|i| planar.label(i)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = 4 * (n as i64) * (n as i64) + 40;
    let mut attempts = 0usize;
    while points.len() < n {
        let mut z = rng.gen_range(-range..=range);
        while z == 0 {
            z = rng.gen_range(-range..=range);
        }
        let p = vec![
            field.from_rational(int_rat(rng.gen_range(-range..=range))),
            field.from_rational(int_rat(rng.gen_range(-range..=range))),
            field.from_rational(int_rat(z)),
        ];
        if points.contains(&p) || collinear_with_existing(&points, &p) {
            attempts += 1;
            if attempts > 10_000 {
                return Err(ConfigError::SamplingExhausted);
            }
            continue;
        }
        labels.push(format!("off{}", points.len() - 3 * fermat_k as usize));
        points.push(p);
    }
    Ok(PointConfig::new(3, points)
        .expect("sampled points are distinct")
        .with_labels(labels))
}

/// n random rational points in ℂ^d with no 3 collinear; collinearity is
/// verified exactly and colliding samples are redrawn, so the result is
/// generic with certainty, not just with high probability.
pub fn random_generic(
    n: usize,
    d: usize,
    seed: u64,
) -> Result<PointConfig<GaussianRational>, ConfigError> {
    if n < 1 || d < 1 {
        return Err(ConfigError::BadParameter(format!(
            "random_generic requires n >= 1 and d >= 1, got n={} d={}",
            n, d
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = 4 * (n as i64) * (n as i64) + 40;
    let mut points: Vec<Vec<GaussianRational>> = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while points.len() < n {
        let p: Vec<GaussianRational> = (0..d)
            .map(|_| GaussianRational::from_rational(int_rat(rng.gen_range(-range..=range))))
            .collect();
        if points.contains(&p) || collinear_with_existing(&points, &p) {
            attempts += 1;
            if attempts > 10_000 {
                return Err(ConfigError::SamplingExhausted);
            }
            continue;
        }
        points.push(p);
    }
    PointConfig::new(d, points).map_err(|e| ConfigError::BadParameter(e.to_string()))
}
