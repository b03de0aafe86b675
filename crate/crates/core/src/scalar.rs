//! Exact scalars: arbitrary-precision rationals and the real radical ring
//! ℚ(√m : m squarefree).
//!
//! The Kostant normalization rescales Chevalley root vectors by 1/√B(e_φ,e_{−φ}),
//! so structure constants of the normalized basis live in a multi-quadratic
//! extension of ℚ (a single quadratic extension for simply-laced types, two
//! radicands otherwise). [`Rad`] represents such numbers exactly as finite sums
//! Σ qₘ·√m with qₘ ∈ ℚ and m squarefree, which is closed under +, −, ×, and
//! inversion.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Exact rational scalar.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().expect("rational out of f64 range")
}

/// Split n ≥ 1 into (s, m) with n = s²·m and m squarefree, by trial division.
fn squarefree_split(n: &BigInt) -> (BigInt, u64) {
    assert!(n.is_positive(), "squarefree_split requires n >= 1");
    let mut n = n.clone();
    let mut square = BigInt::one();
    let mut free: u64 = 1;
    let mut p = BigInt::from(2u32);
    while &p * &p <= n {
        let mut count = 0u32;
        while (&n % &p).is_zero() {
            n /= &p;
            count += 1;
        }
        if count > 0 {
            square *= p.pow(count / 2);
            if count % 2 == 1 {
                free = free
                    .checked_mul(p.to_u64().expect("radicand prime too large"))
                    .expect("radicand overflow");
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        free = free
            .checked_mul(n.to_u64().expect("radicand factor too large"))
            .expect("radicand overflow");
    }
    (square, free)
}

/// An exact real number of the form Σ qₘ·√m over squarefree m ≥ 1.
///
/// The representation is canonical: no zero coefficients are stored, so
/// equality is structural. Radicand 1 carries the rational part.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Rad {
    terms: BTreeMap<u64, Rat>,
}

impl Rad {
    pub fn zero() -> Self {
        Rad::default()
    }

    pub fn one() -> Self {
        Rad::from_rat(Rat::one())
    }

    pub fn from_rat(q: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Rad { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Rad::from_rat(rat_int(n))
    }

    /// q·√m, reducing m to its squarefree part.
    pub fn radical(q: Rat, m: u64) -> Self {
        assert!(m >= 1);
        let (s, free) = squarefree_split(&BigInt::from(m));
        let coeff = q * Rat::from(s);
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(free, coeff);
        }
        Rad { terms }
    }

    /// √r for a non-negative rational r, as an exact radical: √(a/b) = √(ab)/b.
    pub fn sqrt_rat(r: &Rat) -> Self {
        assert!(!r.is_negative(), "sqrt of negative rational");
        if r.is_zero() {
            return Rad::zero();
        }
        let a = r.numer().clone();
        let b = r.denom().clone();
        let (s, m) = squarefree_split(&(&a * &b));
        Rad::radical(Rat::new(s, b), m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the value lies in ℚ.
    pub fn is_rational(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|&m| m == 1)
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            if let Some(q) = self.terms.get(&1) {
                return Some(q.clone());
            }
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&m, q)| rat_to_f64(q) * (m as f64).sqrt())
            .sum()
    }

    fn insert(&mut self, m: u64, q: Rat) {
        if q.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(c) => {
                *c += q;
                if c.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, q);
            }
        }
    }

    /// Multiplicative inverse. Panics on zero.
    ///
    /// Rationalizes by conjugating √p ↦ −√p for one prime p at a time:
    /// x = u + √p·v with p absent from u, v, and x·σ(x) = u² − p·v² involves
    /// strictly fewer primes.
    pub fn inv(&self) -> Rad {
        assert!(!self.is_zero(), "division by zero Rad");
        if let Some(q) = self.as_rat() {
            return Rad::from_rat(q.recip());
        }
        if self.terms.len() == 1 {
            let (&m, q) = self.terms.iter().next().unwrap();
            // 1/(q√m) = √m/(q·m)
            return Rad::radical((q * Rat::from(BigInt::from(m))).recip(), m);
        }
        let p = self.smallest_prime_radicand();
        let (u, v) = self.split_by_prime(p);
        // σ(x) = u − √p v;  x σ(x) = u² − p v²
        let sigma = &u - &(&v * &Rad::radical(Rat::one(), p));
        let norm = &(&u * &u) - &(&(&v * &v) * &Rad::from_int(p as i64));
        &sigma * &norm.inv()
    }

    fn smallest_prime_radicand(&self) -> u64 {
        let m = *self
            .terms
            .keys()
            .find(|&&m| m > 1)
            .expect("no irrational term");
        let mut p = 2;
        while m % p != 0 {
            p += 1;
        }
        p
    }

    /// Write self = u + √p·v with p dividing no radicand of u or v.
    fn split_by_prime(&self, p: u64) -> (Rad, Rad) {
        let mut u = Rad::zero();
        let mut v = Rad::zero();
        for (&m, q) in &self.terms {
            if m % p == 0 {
                v.insert(m / p, q.clone());
            } else {
                u.insert(m, q.clone());
            }
        }
        (u, v)
    }
}

impl fmt::Display for Rad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&m, q) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m == 1 {
                write!(f, "{}", q)?;
            } else {
                write!(f, "{}*sqrt({})", q, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Rad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &Rad {
    type Output = Rad;
    fn add(self, rhs: &Rad) -> Rad {
        let mut out = self.clone();
        for (&m, q) in &rhs.terms {
            out.insert(m, q.clone());
        }
        out
    }
}

impl Sub for &Rad {
    type Output = Rad;
    fn sub(self, rhs: &Rad) -> Rad {
        let mut out = self.clone();
        for (&m, q) in &rhs.terms {
            out.insert(m, -q.clone());
        }
        out
    }
}

impl Neg for &Rad {
    type Output = Rad;
    fn neg(self) -> Rad {
        let mut out = Rad::zero();
        for (&m, q) in &self.terms {
            out.terms.insert(m, -q.clone());
        }
        out
    }
}

impl Mul for &Rad {
    type Output = Rad;
    fn mul(self, rhs: &Rad) -> Rad {
        let mut out = Rad::zero();
        for (&m1, q1) in &self.terms {
            for (&m2, q2) in &rhs.terms {
                let g = gcd(m1, m2);
                // √m1·√m2 = g·√(m1 m2 / g²)
                let m = (m1 / g) * (m2 / g);
                out.insert(m, q1 * q2 * Rat::from(BigInt::from(g)));
            }
        }
        out
    }
}

impl AddAssign<&Rad> for Rad {
    fn add_assign(&mut self, rhs: &Rad) {
        for (&m, q) in &rhs.terms {
            self.insert(m, q.clone());
        }
    }
}

impl SubAssign<&Rad> for Rad {
    fn sub_assign(&mut self, rhs: &Rad) {
        for (&m, q) in &rhs.terms {
            self.insert(m, -q.clone());
        }
    }
}

impl MulAssign<&Rad> for Rad {
    fn mul_assign(&mut self, rhs: &Rad) {
        *self = &*self * rhs;
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact complex scalar over the radical ring.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct CRad {
    pub re: Rad,
    pub im: Rad,
}

impl CRad {
    pub fn zero() -> Self {
        CRad::default()
    }

    pub fn from_rad(re: Rad) -> Self {
        CRad {
            re,
            im: Rad::zero(),
        }
    }

    pub fn from_rat(q: Rat) -> Self {
        CRad::from_rad(Rad::from_rat(q))
    }

    pub fn new(re: Rad, im: Rad) -> Self {
        CRad { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> CRad {
        CRad {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn mul(&self, rhs: &CRad) -> CRad {
        CRad {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }

    pub fn add(&self, rhs: &CRad) -> CRad {
        CRad {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    pub fn sub(&self, rhs: &CRad) -> CRad {
        CRad {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    pub fn neg(&self) -> CRad {
        CRad {
            re: -&self.re,
            im: -&self.im,
        }
    }

    pub fn to_c64(&self) -> nalgebra::Complex<f64> {
        nalgebra::Complex::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// Scalars usable as coefficients of Lie algebra elements; the structure
/// constants (stored as [`Rad`]) are lifted through `from_rad`.
pub trait LieScalar: Clone + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rad(r: &Rad) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
}

impl LieScalar for CRad {
    fn zero() -> Self {
        CRad::zero()
    }
    fn is_zero(&self) -> bool {
        CRad::is_zero(self)
    }
    fn from_rad(r: &Rad) -> Self {
        CRad::from_rad(r.clone())
    }
    fn add(&self, rhs: &Self) -> Self {
        CRad::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        CRad::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        CRad::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        CRad::neg(self)
    }
    fn conj(&self) -> Self {
        CRad::conj(self)
    }
}

impl LieScalar for nalgebra::Complex<f64> {
    fn zero() -> Self {
        nalgebra::Complex::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_rad(r: &Rad) -> Self {
        nalgebra::Complex::new(r.to_f64(), 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        nalgebra::Complex::new(self.re, -self.im)
    }
}
