//! Rational interval arithmetic with verified enclosures of π, cos and sin.
//!
//! Signs of real algebraic numbers presented as rational combinations of
//! roots of unity are decided by evaluating inside intervals with exact
//! rational endpoints, escalating precision until zero is excluded. Interval
//! endpoints are outward-rounded to dyadic rationals after every operation so
//! coefficient sizes stay proportional to the working precision.

use std::cmp::Ordering;

use num::{BigInt, BigRational, One, Signed, Zero};

/// Round down to a multiple of 2^-bits.
fn round_down(q: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = q * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.floor().to_integer(), scale)
}

/// Round up to a multiple of 2^-bits.
fn round_up(q: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = q * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.ceil().to_integer(), scale)
}

/// Closed interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn point(q: BigRational) -> Self {
        RatInterval { lo: q.clone(), hi: q }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn zero() -> Self {
        RatInterval::point(BigRational::zero())
    }

    pub fn outward(&self, bits: u32) -> Self {
        RatInterval {
            lo: round_down(&self.lo, bits),
            hi: round_up(&self.hi, bits),
        }
    }

    pub fn add(&self, rhs: &Self, bits: u32) -> Self {
        RatInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
        .outward(bits)
    }

    pub fn sub(&self, rhs: &Self, bits: u32) -> Self {
        RatInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
        .outward(bits)
    }

    pub fn mul(&self, rhs: &Self, bits: u32) -> Self {
        let cands = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        RatInterval { lo, hi }.outward(bits)
    }

    /// Multiply by an exact rational scalar.
    pub fn scale(&self, q: &BigRational, bits: u32) -> Self {
        let a = &self.lo * q;
        let b = &self.hi * q;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        RatInterval { lo, hi }.outward(bits)
    }

    /// Widen symmetrically by `slack ≥ 0`.
    pub fn widen(&self, slack: &BigRational) -> Self {
        RatInterval {
            lo: &self.lo - slack,
            hi: &self.hi + slack,
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Sign of every number in the interval, if uniform.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn halfwidth(&self) -> BigRational {
        (&self.hi - &self.lo) / BigRational::from_integer(BigInt::from(2))
    }
}

fn pow2_inv(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

/// Enclosure of arctan(1/x) for an integer x ≥ 2, via the alternating Taylor
/// series whose partial sums bracket the limit.
fn atan_inv_enclosure(x: i64, bits: u32) -> RatInterval {
    let eps = pow2_inv(bits + 8);
    let x2 = BigRational::from_integer(BigInt::from(x * x));
    let mut term = BigRational::new(BigInt::one(), BigInt::from(x)); // 1/x
    let mut sum = BigRational::zero();
    let mut k: u64 = 0;
    let mut power = term.clone(); // (1/x)^(2k+1)
    loop {
        term = &power / BigRational::from_integer(BigInt::from(2 * k + 1));
        if term < eps {
            break;
        }
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        power = &power / &x2;
        k += 1;
    }
    // Remaining tail is alternating with decreasing magnitude: |tail| ≤ term.
    RatInterval {
        lo: &sum - &term,
        hi: &sum + &term,
    }
    .outward(bits + 4)
}

/// Verified enclosure of π via Machin's identity
/// π = 16·arctan(1/5) − 4·arctan(1/239).
pub fn pi_enclosure(bits: u32) -> RatInterval {
    let a = atan_inv_enclosure(5, bits + 8);
    let b = atan_inv_enclosure(239, bits + 8);
    let sixteen = BigRational::from_integer(BigInt::from(16));
    let four = BigRational::from_integer(BigInt::from(4));
    a.scale(&sixteen, bits + 4).sub(&b.scale(&four, bits + 4), bits)
}

/// cos and sin of a rational angle, enclosed via Taylor series with an
/// explicit alternating-tail bound.
fn cos_sin_at(t: &BigRational, bits: u32) -> (RatInterval, RatInterval) {
    let eps = pow2_inv(bits + 8);
    let t2 = t * t;
    // cos: Σ (−1)^n t^{2n} / (2n)!   term ratio: t² / ((2n+1)(2n+2))
    let mut cos_sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut n: u64 = 0;
    let (cos_lo, cos_hi);
    loop {
        if n % 2 == 0 {
            cos_sum += &term;
        } else {
            cos_sum -= &term;
        }
        let ratio_den = BigRational::from_integer(BigInt::from((2 * n + 1) * (2 * n + 2)));
        let next = &term * &t2 / ratio_den;
        // Once terms decrease the tail is bounded by the next term.
        if next < term && next < eps {
            cos_lo = &cos_sum - &next;
            cos_hi = &cos_sum + &next;
            break;
        }
        term = next;
        n += 1;
    }
    // sin: Σ (−1)^n t^{2n+1} / (2n+1)!
    let mut sin_sum = BigRational::zero();
    let mut sterm = t.clone();
    let mut k: u64 = 0;
    let (sin_lo, sin_hi);
    loop {
        if k % 2 == 0 {
            sin_sum += &sterm;
        } else {
            sin_sum -= &sterm;
        }
        let ratio_den = BigRational::from_integer(BigInt::from((2 * k + 2) * (2 * k + 3)));
        let next = &sterm * &t2 / ratio_den;
        if next < sterm && next < eps {
            sin_lo = &sin_sum - &next;
            sin_hi = &sin_sum + &next;
            break;
        }
        sterm = next;
        k += 1;
    }
    (
        RatInterval { lo: cos_lo, hi: cos_hi }.outward(bits + 4),
        RatInterval { lo: sin_lo, hi: sin_hi }.outward(bits + 4),
    )
}

/// Enclosures of cos(2πj/m) and sin(2πj/m) for j = 0..m.
#[derive(Clone, Debug)]
pub struct TrigTable {
    pub cos: Vec<RatInterval>,
    pub sin: Vec<RatInterval>,
    pub bits: u32,
}

pub fn trig_table(m: u32, bits: u32) -> TrigTable {
    assert!(m >= 1);
    let two = BigRational::from_integer(BigInt::from(2));
    let m_rat = BigRational::from_integer(BigInt::from(m));
    let theta = pi_enclosure(bits + 10)
        .scale(&(&two / &m_rat), bits + 10);
    let mid = theta.midpoint();
    let slack = theta.halfwidth();
    let (c_mid, s_mid) = cos_sin_at(&mid, bits + 8);
    // |cos x − cos mid| ≤ |x − mid| (Lipschitz constant 1), same for sin.
    let c1 = c_mid.widen(&slack).outward(bits + 6);
    let s1 = s_mid.widen(&slack).outward(bits + 6);

    let mut cos = Vec::with_capacity(m as usize);
    let mut sin = Vec::with_capacity(m as usize);
    cos.push(RatInterval::point(BigRational::one()));
    sin.push(RatInterval::zero());
    for j in 1..m as usize {
        let (pc, ps) = (&cos[j - 1], &sin[j - 1]);
        let nc = pc.mul(&c1, bits + 4).sub(&ps.mul(&s1, bits + 4), bits + 2);
        let ns = ps.mul(&c1, bits + 4).add(&pc.mul(&s1, bits + 4), bits + 2);
        cos.push(nc);
        sin.push(ns);
    }
    TrigTable { cos, sin, bits }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;

    #[test]
    fn pi_enclosure_is_tight_and_correct() {
        let p = pi_enclosure(64);
        let lo = p.lo.to_f64().unwrap();
        let hi = p.hi.to_f64().unwrap();
        assert!(lo <= std::f64::consts::PI && std::f64::consts::PI <= hi);
        assert!((hi - lo) < 1e-15);
    }

    #[test]
    fn trig_table_matches_f64() {
        for m in [3u32, 4, 6, 8, 12, 24] {
            let t = trig_table(m, 64);
            for j in 0..m as usize {
                let ang = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                let c = ang.cos();
                let s = ang.sin();
                assert!(
                    t.cos[j].lo.to_f64().unwrap() - 1e-12 <= c
                        && c <= t.cos[j].hi.to_f64().unwrap() + 1e-12,
                    "cos m={} j={}",
                    m,
                    j
                );
                assert!(
                    t.sin[j].lo.to_f64().unwrap() - 1e-12 <= s
                        && s <= t.sin[j].hi.to_f64().unwrap() + 1e-12,
                    "sin m={} j={}",
                    m,
                    j
                );
            }
        }
    }

    #[test]
    fn interval_sign_resolution() {
        let a = RatInterval::new(
            BigRational::new(BigInt::from(1), BigInt::from(1000)),
            BigRational::new(BigInt::from(2), BigInt::from(1000)),
        );
        assert_eq!(a.sign(), Some(Ordering::Greater));
        let b = RatInterval::new(
            BigRational::new(BigInt::from(-1), BigInt::from(1000)),
            BigRational::new(BigInt::from(2), BigInt::from(1000)),
        );
        assert_eq!(b.sign(), None);
        assert!(b.contains_zero());
    }
}
