//! Exact arithmetic in cyclotomic fields ℚ(ζ_m).
//!
//! Elements are polynomials in ζ reduced modulo the m-th cyclotomic
//! polynomial, so equality is decidable by comparing canonical coefficient
//! vectors. Conjugation maps ζ^j to ζ^{m−j}. Signs of real and imaginary
//! parts under the embedding ζ ↦ e^{2πi/m} are decided by verified interval
//! evaluation with escalating precision; a symbolic zero test runs first so
//! the escalation always terminates.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::complex::Complex64;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

use super::enclosure::{trig_table, RatInterval, TrigTable};
use crate::exactgeom::field::ExactField;

type Poly = Vec<BigRational>;

fn ptrim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn pmul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    ptrim(&mut out);
    out
}

fn psub(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    ptrim(&mut out);
    out
}

/// Exact polynomial division; `den` must be nonzero.
fn pdivmod(num: &[BigRational], den: &[BigRational]) -> (Poly, Poly) {
    let mut rem: Poly = num.to_vec();
    ptrim(&mut rem);
    let mut den = den.to_vec();
    ptrim(&mut den);
    assert!(!den.is_empty(), "division by zero polynomial");
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    while rem.len() > dd {
        let rd = rem.len() - 1;
        let coef = &rem[rd] / &lead;
        let shift = rd - dd;
        quot[shift] = coef.clone();
        for (i, c) in den.iter().enumerate() {
            let v = c * &coef;
            rem[shift + i] -= v;
        }
        ptrim(&mut rem);
        if rem.len() <= dd {
            break;
        }
    }
    ptrim(&mut quot);
    (quot, rem)
}

/// Extended Euclid: returns (g, u, v) with u·a + v·b = g.
fn pext_gcd(a: &[BigRational], b: &[BigRational]) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1): (Poly, Poly) = (a.to_vec(), b.to_vec());
    ptrim(&mut r0);
    ptrim(&mut r1);
    let (mut u0, mut u1): (Poly, Poly) = (vec![BigRational::one()], vec![]);
    let (mut v0, mut v1): (Poly, Poly) = (vec![], vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = pdivmod(&r0, &r1);
        let nu = psub(&u0, &pmul(&q, &u1));
        let nv = psub(&v0, &pmul(&q, &v1));
        r0 = std::mem::replace(&mut r1, r);
        u0 = std::mem::replace(&mut u1, nu);
        v0 = std::mem::replace(&mut v1, nv);
    }
    (r0, u0, v0)
}

fn euler_phi(mut m: u32) -> u32 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// m-th cyclotomic polynomial: (x^m − 1) / Π_{d | m, d < m} Φ_d.
fn cyclotomic_modulus(m: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
    if let Some(p) = memo.get(&m) {
        return p.clone();
    }
    let mut num = vec![BigRational::zero(); m as usize + 1];
    num[0] = -BigRational::one();
    num[m as usize] = BigRational::one();
    let mut den = vec![BigRational::one()];
    for d in 1..m {
        if m % d == 0 {
            den = pmul(&den, &cyclotomic_modulus(d, memo));
        }
    }
    let (q, r) = pdivmod(&num, &den);
    assert!(r.is_empty(), "cyclotomic polynomial division must be exact");
    memo.insert(m, q.clone());
    q
}

/// Shared descriptor for ℚ(ζ_m): modulus, reduction rows, conjugation table
/// and cached trigonometric enclosures.
pub struct CyclotomicField {
    order: u32,
    degree: usize,
    modulus: Poly,
    /// x^j reduced mod Φ_m for every exponent produced by multiplication or
    /// conjugation (j < max(m, 2·degree − 1)).
    red_rows: Vec<Vec<BigRational>>,
    /// Reduction of ζ^{(m−j) mod m} for each basis exponent j < degree.
    conj_rows: Vec<Vec<BigRational>>,
    trig: Mutex<BTreeMap<u32, Arc<TrigTable>>>,
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicField(order={})", self.order)
    }
}

static FIELD_CACHE: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();

impl CyclotomicField {
    /// Canonical field instance for the given order (cached process-wide).
    pub fn get(order: u32) -> Arc<CyclotomicField> {
        assert!(order >= 1, "cyclotomic order must be positive");
        let cache = FIELD_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        if let Some(f) = guard.get(&order) {
            return f.clone();
        }
        let f = Arc::new(CyclotomicField::build(order));
        guard.insert(order, f.clone());
        f
    }

    fn build(order: u32) -> CyclotomicField {
        let mut memo = HashMap::new();
        let modulus = cyclotomic_modulus(order, &mut memo);
        let degree = euler_phi(order) as usize;
        assert_eq!(modulus.len(), degree + 1);

        let max_exp = (order as usize).max(2 * degree.max(1) - 1);
        let mut red_rows: Vec<Vec<BigRational>> = Vec::with_capacity(max_exp);
        for j in 0..max_exp {
            if j < degree {
                let mut row = vec![BigRational::zero(); degree];
                row[j] = BigRational::one();
                red_rows.push(row);
            } else {
                // x^j = x · x^{j−1}; shift the previous row and fold the
                // overflow through x^degree = −(lower modulus terms).
                let prev = red_rows[j - 1].clone();
                let mut row = vec![BigRational::zero(); degree];
                for (i, c) in prev.iter().enumerate() {
                    if i + 1 < degree {
                        row[i + 1] += c;
                    } else if !c.is_zero() {
                        for t in 0..degree {
                            row[t] -= c * &modulus[t];
                        }
                    }
                }
                red_rows.push(row);
            }
        }

        let conj_rows: Vec<Vec<BigRational>> = (0..degree)
            .map(|j| {
                let e = ((order as usize) - j) % order as usize;
                red_rows[e].clone()
            })
            .collect();

        CyclotomicField {
            order,
            degree,
            modulus,
            red_rows,
            conj_rows,
            trig: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[BigRational] {
        &self.modulus
    }

    fn trig_at(&self, bits: u32) -> Arc<TrigTable> {
        let mut guard = self.trig.lock().unwrap();
        if let Some(t) = guard.get(&bits) {
            return t.clone();
        }
        let t = Arc::new(trig_table(self.order, bits));
        guard.insert(bits, t.clone());
        t
    }

    fn reduce(&self, raw: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.degree];
        for (j, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j < self.degree {
                out[j] += c;
            } else {
                let row = &self.red_rows[j];
                for t in 0..self.degree {
                    if !row[t].is_zero() {
                        out[t] += c * &row[t];
                    }
                }
            }
        }
        out
    }

    /// Element from coefficients of powers of ζ (any length; reduced).
    pub fn element(self: &Arc<Self>, coeffs: Vec<BigRational>) -> Cyclotomic {
        assert!(
            coeffs.len() <= self.red_rows.len().max(self.degree),
            "coefficient vector too long; reduce exponents mod m first"
        );
        Cyclotomic {
            field: self.clone(),
            coeffs: self.reduce(&coeffs),
        }
    }

    pub fn zero(self: &Arc<Self>) -> Cyclotomic {
        Cyclotomic {
            field: self.clone(),
            coeffs: vec![BigRational::zero(); self.degree],
        }
    }

    pub fn one(self: &Arc<Self>) -> Cyclotomic {
        self.from_rational(BigRational::one())
    }

    pub fn from_rational(self: &Arc<Self>, q: BigRational) -> Cyclotomic {
        let mut coeffs = vec![BigRational::zero(); self.degree];
        coeffs[0] = q;
        Cyclotomic {
            field: self.clone(),
            coeffs,
        }
    }

    /// The distinguished primitive m-th root of unity ζ = e^{2πi/m}.
    pub fn zeta(self: &Arc<Self>) -> Cyclotomic {
        self.zeta_pow(1)
    }

    /// ζ^k with the exponent taken mod m.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> Cyclotomic {
        let m = self.order as i64;
        let e = k.rem_euclid(m) as usize;
        let mut raw = vec![BigRational::zero(); e + 1];
        raw[e] = BigRational::one();
        self.element(raw)
    }
}

/// Element of ℚ(ζ_m) in canonical reduced form.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    /// Canonical coefficients over the basis ζ^0 .. ζ^{φ(m)−1}.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn pow(&self, mut e: u64) -> Cyclotomic {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn assert_same_field(&self, rhs: &Self) {
        assert_eq!(
            self.field.order, rhs.field.order,
            "mixed cyclotomic orders {} and {}",
            self.field.order, rhs.field.order
        );
    }

    /// Exact sign of Σ c_j·table[j] by escalating interval precision.
    fn embedded_sign(&self, imaginary: bool) -> Ordering {
        for bits in [64u32, 128, 256, 512, 1024, 2048, 4096, 8192] {
            let table = self.field.trig_at(bits);
            let mut acc = RatInterval::zero();
            for (j, c) in self.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let cell = if imaginary {
                    &table.sin[j]
                } else {
                    &table.cos[j]
                };
                acc = acc.add(&cell.scale(c, bits + 4), bits + 2);
            }
            if !acc.contains_zero() {
                return if acc.lo.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        unreachable!("interval precision ladder exhausted on a symbolically nonzero value")
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (zeta_{})", self, self.field.order)
    }
}

impl fmt::Display for Cyclotomic {
    /// Canonical text form: terms in descending powers of `w` (= ζ), e.g.
    /// `2/3w^2-w+1/2`; the zero element prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for j in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[j];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if wrote {
                write!(f, "{}", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            if j == 0 {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}", mag)?;
                }
                if j == 1 {
                    write!(f, "w")?;
                } else {
                    write!(f, "w^{}", j)?;
                }
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl ExactField for Cyclotomic {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }

    fn one_like(&self) -> Self {
        self.field.one()
    }

    fn embed_rational(&self, q: &BigRational) -> Self {
        self.field.from_rational(q.clone())
    }

    fn add(&self, rhs: &Self) -> Self {
        self.assert_same_field(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Cyclotomic {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.assert_same_field(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Cyclotomic {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.assert_same_field(rhs);
        if self.field.degree == 0 {
            return self.clone();
        }
        let mut raw = vec![BigRational::zero(); 2 * self.field.degree.max(1) - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.field.reduce(&raw),
        }
    }

    fn neg(&self) -> Self {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut a: Poly = self.coeffs.clone();
        ptrim(&mut a);
        let (g, u, _) = pext_gcd(&a, &self.field.modulus);
        // The modulus is irreducible, so the gcd is a nonzero constant.
        assert_eq!(g.len(), 1, "cyclotomic modulus must be coprime to element");
        let scale = g[0].recip();
        let coeffs = self
            .field
            .reduce(&u.iter().map(|c| c * &scale).collect::<Vec<_>>());
        Some(Cyclotomic {
            field: self.field.clone(),
            coeffs,
        })
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn conj(&self) -> Self {
        let mut out = vec![BigRational::zero(); self.field.degree];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (t, r) in self.field.conj_rows[j].iter().enumerate() {
                if !r.is_zero() {
                    out[t] += c * r;
                }
            }
        }
        Cyclotomic {
            field: self.field.clone(),
            coeffs: out,
        }
    }

    fn re_sign(&self) -> Ordering {
        // Re(z) = 0 exactly iff z = −conj(z).
        if self.add(&self.conj()).is_zero() {
            return Ordering::Equal;
        }
        self.embedded_sign(false)
    }

    fn im_sign(&self) -> Ordering {
        // Im(z) = 0 exactly iff z = conj(z).
        if self.sub(&self.conj()).is_zero() {
            return Ordering::Equal;
        }
        self.embedded_sign(true)
    }

    fn to_c64(&self) -> Complex64 {
        let m = self.field.order as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ang = 2.0 * std::f64::consts::PI * j as f64 / m;
            acc += Complex64::from_polar(1.0, ang) * c.to_f64().expect("coefficient out of range");
        }
        acc
    }

    fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }
}
