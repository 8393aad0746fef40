//! Field abstraction for exact coordinate arithmetic.
//!
//! Geometry never rounds: every predicate reduces to ring operations,
//! conjugation and sign tests inside one exact subfield of the complex
//! numbers. `GaussianRational` covers rational point sets; configurations
//! needing roots of unity use the cyclotomic implementation in `configgen`.

use std::cmp::Ordering;
use std::fmt;

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// An exactly-represented subfield of ℂ, closed under conjugation, with
/// decidable equality and decidable signs of real and imaginary parts.
pub trait ExactField: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Additive identity of the same field instance as `self`.
    fn zero_like(&self) -> Self;
    /// Multiplicative identity of the same field instance as `self`.
    fn one_like(&self) -> Self;
    /// Embed a rational number into the same field instance as `self`.
    fn embed_rational(&self, q: &BigRational) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn is_zero(&self) -> bool;
    /// Complex conjugate (a field automorphism on conjugation-closed fields).
    fn conj(&self) -> Self;

    /// Exact sign of the real part under the canonical complex embedding.
    fn re_sign(&self) -> Ordering;
    /// Exact sign of the imaginary part under the canonical complex embedding.
    fn im_sign(&self) -> Ordering;

    /// Numeric value for reporting and floating-point pipelines.
    fn to_c64(&self) -> Complex64;
    /// The exact rational value when the element lies in ℚ.
    fn as_rational(&self) -> Option<BigRational>;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    /// `self · conj(self)`, a nonnegative real element of the field.
    fn norm_sqr(&self) -> Self {
        self.mul(&self.conj())
    }

    fn scale_rational(&self, q: &BigRational) -> Self {
        self.mul(&self.embed_rational(q))
    }

    /// True when the element is fixed by conjugation.
    fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Exact sign of a real element; panics in debug builds on non-real input.
    fn real_sign(&self) -> Ordering {
        debug_assert!(self.is_real(), "real_sign on non-real element");
        self.re_sign()
    }

    fn sum<'a, I: IntoIterator<Item = &'a Self>>(zero: &Self, items: I) -> Self {
        let mut acc = zero.zero_like();
        for x in items {
            acc = acc.add(x);
        }
        acc
    }
}

/// Element of ℚ(i): exact complex number with rational real and imaginary
/// parts. Denominators are kept positive and reduced by `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussianRational {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        assert!(re_den != 0 && im_den != 0, "zero denominator");
        GaussianRational {
            re: BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            im: BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        GaussianRational {
            re: q,
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }
}

impl ExactField for GaussianRational {
    fn zero_like(&self) -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn one_like(&self) -> Self {
        GaussianRational {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    fn embed_rational(&self, q: &BigRational) -> Self {
        GaussianRational::from_rational(q.clone())
    }

    fn add(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn neg(&self) -> Self {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn inv(&self) -> Option<Self> {
        let n = &self.re * &self.re + &self.im * &self.im;
        if n.is_zero() {
            return None;
        }
        Some(GaussianRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn re_sign(&self) -> Ordering {
        self.re.cmp(&BigRational::zero())
    }

    fn im_sign(&self) -> Ordering {
        self.im.cmp(&BigRational::zero())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().expect("rational out of f64 range"),
            self.im.to_f64().expect("rational out of f64 range"),
        )
    }

    fn as_rational(&self) -> Option<BigRational> {
        if self.im.is_zero() {
            Some(self.re.clone())
        } else {
            None
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Shorthand for building a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> BigRational {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_arithmetic() {
        let a = GaussianRational::from_parts(1, 2, -3, 1); // 1/2 - 3i
        let b = GaussianRational::i();
        let p = a.mul(&b); // (1/2 - 3i)·i = 3 + i/2
        assert_eq!(p, GaussianRational::from_parts(3, 1, 1, 2));
        let inv = a.inv().unwrap();
        assert_eq!(a.mul(&inv), a.one_like());
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn conjugation_and_norm() {
        let a = GaussianRational::from_parts(2, 3, -1, 5);
        let n = a.norm_sqr();
        assert!(n.is_real());
        assert_eq!(n.as_rational().unwrap(), rat(4, 9) + rat(1, 25));
        assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn signs() {
        let a = GaussianRational::from_parts(-1, 2, 3, 4);
        assert_eq!(a.re_sign(), Ordering::Less);
        assert_eq!(a.im_sign(), Ordering::Greater);
        assert_eq!(a.zero_like().re_sign(), Ordering::Equal);
    }

    #[test]
    fn display_round_shapes() {
        assert_eq!(GaussianRational::from_ratio(-3, 2).to_string(), "-3/2");
        assert_eq!(GaussianRational::from_parts(1, 2, -3, 1).to_string(), "1/2-3i");
        assert_eq!(GaussianRational::i().to_string(), "1i");
    }
}
