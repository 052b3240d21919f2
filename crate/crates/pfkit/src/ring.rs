//! Exact coefficient rings: arbitrary-precision rationals, real quadratic
//! field elements, integers mod p^m, and finite fields F_{p^e}.
//!
//! All ring values are immutable and all operations are pure. Arithmetic is
//! mediated by a ring object (the [`Ring`] trait) so that polynomials and
//! series can be generic over the coefficient domain while rings that carry
//! runtime data (a modulus, a defining polynomial) remain first-class values.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("denominator not invertible: prime {p} divides a denominator")]
    DenominatorNotInvertible { p: u64 },
    #[error("element is not invertible in this ring")]
    NotInvertible,
    #[error("{0} is not prime (or exceeds the supported range)")]
    NotPrime(u64),
    #[error("quadratic field elements with different d cannot interoperate")]
    MixedFields,
    #[error("division by an integer that is not invertible: prime {p}")]
    IntegerNotInvertible { p: u64 },
}

/// A commutative ring with identity, exposed as an object so instances can
/// carry runtime data (modulus, defining polynomial).
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, RingError>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Canonical image of a signed integer.
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// The prime p for rings of characteristic p (or p^m); None in char 0.
    fn characteristic(&self) -> Option<u64>;
    fn is_field(&self) -> bool;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, RingError> {
        Ok(self.mul(a, &self.inv(b)?))
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

/// The field Q with `BigRational` elements (always reduced, positive
/// denominator — maintained by the `num` crate).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational, RingError> {
        if a.is_zero() {
            return Err(RingError::NotInvertible);
        }
        Ok(a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn characteristic(&self) -> Option<u64> {
        None
    }
    fn is_field(&self) -> bool {
        true
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// Convenience constructor for a rational from a numerator/denominator pair.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

// ---------------------------------------------------------------------------
// Real quadratic field Q(sqrt(d))
// ---------------------------------------------------------------------------

/// An element a + b*sqrt(d) of a real quadratic field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadElem {
    pub a: BigRational,
    pub b: BigRational,
}

/// The field Q(sqrt(d)) for a squarefree d > 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadField {
    pub d: i64,
}

impl QuadField {
    pub fn new(d: i64) -> Self {
        assert!(d > 1 && is_squarefree(d), "d must be squarefree and > 1");
        QuadField { d }
    }
    pub fn sqrt_gen(&self) -> QuadElem {
        QuadElem {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }
    pub fn from_rational(&self, a: BigRational) -> QuadElem {
        QuadElem {
            a,
            b: BigRational::zero(),
        }
    }
    pub fn conjugate(&self, x: &QuadElem) -> QuadElem {
        QuadElem {
            a: x.a.clone(),
            b: -x.b.clone(),
        }
    }
}

fn is_squarefree(mut d: i64) -> bool {
    let mut f = 2i64;
    while f * f <= d {
        if d % (f * f) == 0 {
            return false;
        }
        while d % f == 0 {
            d /= f;
        }
        f += 1;
    }
    true
}

impl Ring for QuadField {
    type Elem = QuadElem;

    fn zero(&self) -> QuadElem {
        QuadElem {
            a: BigRational::zero(),
            b: BigRational::zero(),
        }
    }
    fn one(&self) -> QuadElem {
        QuadElem {
            a: BigRational::one(),
            b: BigRational::zero(),
        }
    }
    fn add(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem {
            a: &x.a + &y.a,
            b: &x.b + &y.b,
        }
    }
    fn sub(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem {
            a: &x.a - &y.a,
            b: &x.b - &y.b,
        }
    }
    fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        let d = BigRational::from_integer(BigInt::from(self.d));
        QuadElem {
            a: &x.a * &y.a + &d * &x.b * &y.b,
            b: &x.a * &y.b + &x.b * &y.a,
        }
    }
    fn neg(&self, x: &QuadElem) -> QuadElem {
        QuadElem {
            a: -x.a.clone(),
            b: -x.b.clone(),
        }
    }
    fn inv(&self, x: &QuadElem) -> Result<QuadElem, RingError> {
        // (a + b sqrt d)^{-1} = (a - b sqrt d) / (a^2 - d b^2)
        let d = BigRational::from_integer(BigInt::from(self.d));
        let norm = &x.a * &x.a - &d * &x.b * &x.b;
        if norm.is_zero() {
            return Err(RingError::NotInvertible);
        }
        Ok(QuadElem {
            a: &x.a / &norm,
            b: -&x.b / &norm,
        })
    }
    fn is_zero(&self, x: &QuadElem) -> bool {
        x.a.is_zero() && x.b.is_zero()
    }
    fn from_i64(&self, n: i64) -> QuadElem {
        QuadElem {
            a: BigRational::from_integer(BigInt::from(n)),
            b: BigRational::zero(),
        }
    }
    fn characteristic(&self) -> Option<u64> {
        None
    }
    fn is_field(&self) -> bool {
        true
    }
    fn fmt_elem(&self, x: &QuadElem) -> String {
        let r = Rationals;
        if x.b.is_zero() {
            r.fmt_elem(&x.a)
        } else if x.a.is_zero() {
            format!("{}*sqrt({})", r.fmt_elem(&x.b), self.d)
        } else {
            let sign = if x.b.is_negative() { "-" } else { "+" };
            format!(
                "{}{}{}*sqrt({})",
                r.fmt_elem(&x.a),
                sign,
                r.fmt_elem(&x.b.abs()),
                self.d
            )
        }
    }
}

// ---------------------------------------------------------------------------
// u64 modular helpers
// ---------------------------------------------------------------------------

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Inverse of a modulo m when gcd(a, m) = 1, via extended Euclid.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// Deterministic primality by trial division; inputs >= 2^20 are rejected
/// (the library's desk-scale envelope).
pub fn is_prime(p: u64) -> Result<bool, RingError> {
    if p >= 1 << 20 {
        return Err(RingError::NotPrime(p));
    }
    if p < 2 {
        return Ok(false);
    }
    let mut f = 2u64;
    while f * f <= p {
        if p % f == 0 {
            return Ok(false);
        }
        f += 1;
    }
    Ok(true)
}

fn assert_prime(p: u64) -> Result<(), RingError> {
    if is_prime(p)? {
        Ok(())
    } else {
        Err(RingError::NotPrime(p))
    }
}

// ---------------------------------------------------------------------------
// Z / p^m
// ---------------------------------------------------------------------------

/// The ring Z/p^m with canonical residues in [0, p^m).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModRing {
    pub p: u64,
    pub m: u32,
    modulus: u64,
}

impl ModRing {
    pub fn new(p: u64, m: u32) -> Result<Self, RingError> {
        assert_prime(p)?;
        assert!(m >= 1);
        let modulus = p
            .checked_pow(m)
            .filter(|&v| v < 1 << 62)
            .ok_or(RingError::NotPrime(p))?;
        Ok(ModRing { p, m, modulus })
    }
    pub fn prime_field(p: u64) -> Result<Self, RingError> {
        Self::new(p, 1)
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    /// Reduce a rational mod p^m; errors when p divides the denominator
    /// (which signals the prime belongs to the bad set S).
    pub fn reduce_rational(&self, q: &BigRational) -> Result<u64, RingError> {
        let m = BigInt::from(self.modulus);
        let num = q.numer().mod_floor_big(&m);
        let den = q.denom().mod_floor_big(&m);
        let den_inv = inv_mod(den, self.modulus)
            .ok_or(RingError::DenominatorNotInvertible { p: self.p })?;
        Ok(mul_mod(num, den_inv, self.modulus))
    }
}

trait ModFloorBig {
    fn mod_floor_big(&self, m: &BigInt) -> u64;
}
impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> u64 {
        use num::Integer;
        let r = self.mod_floor(m);
        let (_, digits) = r.to_u64_digits();
        *digits.first().unwrap_or(&0)
    }
}

impl Ring for ModRing {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.modulus
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.modulus - b % self.modulus) % self.modulus
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.modulus)
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }
    fn inv(&self, a: &u64) -> Result<u64, RingError> {
        inv_mod(*a, self.modulus).ok_or(RingError::NotInvertible)
    }
    fn is_zero(&self, a: &u64) -> bool {
        a % self.modulus == 0
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.modulus as i64) as u64
    }
    fn characteristic(&self) -> Option<u64> {
        Some(self.p)
    }
    fn is_field(&self) -> bool {
        self.m == 1
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Reduce a rational modulo p^m.
pub fn reduce_rational(q: &BigRational, p: u64, m: u32) -> Result<u64, RingError> {
    ModRing::new(p, m)?.reduce_rational(q)
}

// ---------------------------------------------------------------------------
// Quadratic splitting
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

/// Splitting behaviour of the prime p in Q(sqrt(d)) for squarefree d > 1.
/// For odd p this is the Legendre symbol (d|p); p = 2 is classified by
/// d mod 8 (split iff d = 1 mod 8, ramified iff d even, else inert).
pub fn splitting_type(p: u64, d: i64) -> Result<SplittingType, RingError> {
    assert_prime(p)?;
    assert!(d > 1 && is_squarefree(d), "d must be squarefree and > 1");
    if p == 2 {
        return Ok(if d % 2 == 0 {
            SplittingType::Ramified
        } else if d % 8 == 1 {
            SplittingType::Split
        } else {
            SplittingType::Inert
        });
    }
    let dp = (d as i128).rem_euclid(p as i128) as u64;
    if dp == 0 {
        return Ok(SplittingType::Ramified);
    }
    // Euler's criterion.
    Ok(if pow_mod(dp, (p - 1) / 2, p) == 1 {
        SplittingType::Split
    } else {
        SplittingType::Inert
    })
}

// ---------------------------------------------------------------------------
// F_{p^e}
// ---------------------------------------------------------------------------

/// The finite field F_{p^e} presented as F_p[x]/(f) with a monic irreducible
/// defining polynomial f (coefficients ascending; degree e). Elements are
/// coefficient vectors of length e. `e = 1` means the prime field (defining
/// polynomial x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fq {
    pub p: u64,
    /// Monic defining polynomial, ascending coefficients, length e + 1.
    pub defining: Vec<u64>,
}

impl Fq {
    pub fn prime_field(p: u64) -> Result<Self, RingError> {
        assert_prime(p)?;
        Ok(Fq {
            p,
            defining: vec![0, 1],
        })
    }

    pub fn degree(&self) -> usize {
        self.defining.len() - 1
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }

    /// Embed a prime-field residue as a constant.
    pub fn embed(&self, a: u64) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        v[0] = a % self.p;
        v
    }

    /// The generator class x (for e = 1 this is the residue of 0 shifted —
    /// callers should not request it on prime fields).
    pub fn gen(&self) -> Vec<u64> {
        let e = self.degree();
        let mut v = vec![0; e];
        if e > 1 {
            v[1] = 1;
        }
        v
    }

    /// Encode an element as an integer index in [0, p^e) (base-p digits,
    /// constant coefficient least significant). Used by character tables.
    pub fn index(&self, a: &[u64]) -> usize {
        let mut idx = 0usize;
        for &c in a.iter().rev() {
            idx = idx * self.p as usize + c as usize;
        }
        idx
    }

    pub fn from_index(&self, mut idx: usize) -> Vec<u64> {
        let e = self.degree();
        let mut v = vec![0; e];
        for slot in v.iter_mut() {
            *slot = (idx % self.p as usize) as u64;
            idx /= self.p as usize;
        }
        v
    }

    /// Frobenius x -> x^p.
    pub fn frobenius(&self, a: &[u64]) -> Vec<u64> {
        self.pow(&a.to_vec(), self.p)
    }
}

// Dense F_p[x] helpers used for the Fq implementation and the
// irreducibility scan. Coefficients ascending, not necessarily trimmed.
fn fp_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    fp_trim(&mut out);
    out
}

/// Remainder of a modulo the monic polynomial f.
fn fp_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let df = f.len() - 1;
    while r.len() > df {
        let lead = *r.last().unwrap(); // nonzero after trim
        let shift = r.len() - 1 - df;
        for (i, &c) in f.iter().enumerate() {
            r[i + shift] = (r[i + shift] + p - mul_mod(lead, c, p)) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = fp_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_rem(&fp_mul(&acc, &b, p), f, p);
        }
        b = fp_rem(&fp_mul(&b, &b, p), f, p);
        e >>= 1;
    }
    acc
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    fp_trim(&mut r0);
    fp_trim(&mut r1);
    while !r1.is_empty() {
        let r = fp_poly_mod(&r0, &r1, p);
        r0 = r1;
        r1 = r;
    }
    if let Some(&lead) = r0.last() {
        let li = inv_mod(lead, p).unwrap();
        for c in r0.iter_mut() {
            *c = mul_mod(*c, li, p);
        }
    }
    r0
}

/// Remainder modulo an arbitrary nonzero polynomial (made monic internally).
fn fp_poly_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut bb = b.to_vec();
    fp_trim(&mut bb);
    let lead = *bb.last().unwrap();
    if lead != 1 {
        let li = inv_mod(lead, p).unwrap();
        for c in bb.iter_mut() {
            *c = mul_mod(*c, li, p);
        }
    }
    fp_rem(a, &bb, p)
}

/// Is the monic polynomial f irreducible over F_p? Standard criterion:
/// x^{p^e} = x mod f, and gcd(x^{p^{e/q}} - x, f) = 1 for prime q | e.
fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let e = f.len() - 1;
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // x^{p^e} mod f by e-fold p-th powering
    let mut xq = x.clone();
    for _ in 0..e {
        xq = fp_powmod(&xq, p, f, p);
    }
    let mut diff = xq.clone();
    diff.resize(diff.len().max(2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    fp_trim(&mut diff);
    if !diff.is_empty() {
        return false;
    }
    let mut primes = vec![];
    let mut n = e;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            primes.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    for q in primes {
        let mut xq = x.clone();
        for _ in 0..(e / q) {
            xq = fp_powmod(&xq, p, f, p);
        }
        let mut diff = xq.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        fp_trim(&mut diff);
        let g = fp_gcd(&diff, f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Build F_{p^e} with the lexicographically smallest monic irreducible
/// defining polynomial (lex on the coefficient tuple (c_{e-1}, ..., c_0),
/// i.e. enumerating candidates as base-p counters with c_{e-1} most
/// significant). Deterministic, so serialized elements are reproducible.
pub fn build_extension_field(p: u64, e: usize) -> Result<Fq, RingError> {
    assert_prime(p)?;
    assert!(e >= 1);
    if e == 1 {
        return Fq::prime_field(p);
    }
    let total = (p as u128).pow(e as u32);
    let mut counter = 0u128;
    while counter < total {
        // digits of `counter`, most significant digit = coefficient of x^{e-1}
        let mut f = vec![0u64; e + 1];
        f[e] = 1;
        let mut c = counter;
        for i in 0..e {
            f[i] = (c % p as u128) as u64;
            c /= p as u128;
        }
        if fp_is_irreducible(&f, p) {
            return Ok(Fq { p, defining: f });
        }
        counter += 1;
    }
    unreachable!("an irreducible polynomial of each degree always exists")
}

impl Ring for Fq {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }
    fn one(&self) -> Vec<u64> {
        self.embed(1)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.p - y) % self.p)
            .collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let mut r = fp_rem(&fp_mul(a, b, self.p), &self.defining, self.p);
        r.resize(self.degree(), 0);
        r
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| (self.p - x % self.p) % self.p).collect()
    }
    fn inv(&self, a: &Vec<u64>) -> Result<Vec<u64>, RingError> {
        // extended Euclid in F_p[x] against the defining polynomial
        let p = self.p;
        let mut r0 = self.defining.clone();
        let mut r1 = a.clone();
        fp_trim(&mut r1);
        if r1.is_empty() {
            return Err(RingError::NotInvertible);
        }
        let mut t0: Vec<u64> = vec![];
        let mut t1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            // monic division r0 = q r1 + r
            let mut q = vec![0u64; r0.len().saturating_sub(r1.len()) + 1];
            let lead_inv = inv_mod(*r1.last().unwrap(), p).ok_or(RingError::NotInvertible)?;
            let mut rem = r0.clone();
            while rem.len() >= r1.len() && !rem.is_empty() {
                let shift = rem.len() - r1.len();
                let coef = mul_mod(*rem.last().unwrap(), lead_inv, p);
                q[shift] = (q[shift] + coef) % p;
                for (i, &c) in r1.iter().enumerate() {
                    rem[i + shift] = (rem[i + shift] + p - mul_mod(coef, c, p)) % p;
                }
                fp_trim(&mut rem);
            }
            let qt1 = fp_mul(&q, &t1, p);
            let mut tn = t0.clone();
            tn.resize(tn.len().max(qt1.len()), 0);
            for (i, &c) in qt1.iter().enumerate() {
                tn[i] = (tn[i] + p - c) % p;
            }
            fp_trim(&mut tn);
            r0 = r1;
            r1 = rem;
            t0 = t1;
            t1 = tn;
        }
        if r0.len() != 1 {
            return Err(RingError::NotInvertible);
        }
        let li = inv_mod(r0[0], p).ok_or(RingError::NotInvertible)?;
        let mut out: Vec<u64> = t0.iter().map(|&c| mul_mod(c, li, p)).collect();
        out.resize(self.degree(), 0);
        Ok(out)
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c % self.p == 0)
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        self.embed(n.rem_euclid(self.p as i64) as u64)
    }
    fn characteristic(&self) -> Option<u64> {
        Some(self.p)
    }
    fn is_field(&self) -> bool {
        true
    }
    fn fmt_elem(&self, a: &Vec<u64>) -> String {
        format!(
            "[{}]",
            a.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_examples() {
        assert_eq!(splitting_type(11, 5).unwrap(), SplittingType::Split);
        assert_eq!(splitting_type(13, 5).unwrap(), SplittingType::Inert);
        assert_eq!(splitting_type(5, 5).unwrap(), SplittingType::Ramified);
        assert!(splitting_type(12, 5).is_err());
    }

    #[test]
    fn splitting_at_two() {
        assert_eq!(splitting_type(2, 17).unwrap(), SplittingType::Split);
        assert_eq!(splitting_type(2, 5).unwrap(), SplittingType::Inert);
        assert_eq!(splitting_type(2, 6).unwrap(), SplittingType::Ramified);
    }

    #[test]
    fn reduce_rational_examples() {
        assert_eq!(reduce_rational(&rat(21, 400), 13, 1).unwrap(), 6);
        assert_eq!(
            reduce_rational(&rat(1, 2), 2, 1),
            Err(RingError::DenominatorNotInvertible { p: 2 })
        );
        assert_eq!(reduce_rational(&rat(3, 1), 5, 2).unwrap(), 3);
        assert_eq!(reduce_rational(&rat(-1, 3), 7, 1).unwrap(), 2);
    }

    #[test]
    fn reduce_rational_is_homomorphism() {
        let r = ModRing::new(7, 2).unwrap();
        let samples = [rat(3, 5), rat(-11, 4), rat(22, 15), rat(9, 2)];
        for a in &samples {
            for b in &samples {
                let ra = r.reduce_rational(a).unwrap();
                let rb = r.reduce_rational(b).unwrap();
                assert_eq!(r.reduce_rational(&(a + b)).unwrap(), r.add(&ra, &rb));
                assert_eq!(r.reduce_rational(&(a * b)).unwrap(), r.mul(&ra, &rb));
            }
        }
    }

    #[test]
    fn extension_field_canonical_polys() {
        let f = build_extension_field(13, 2).unwrap();
        assert_eq!(f.defining, vec![2, 0, 1]); // x^2 + 2
        let f = build_extension_field(37, 3).unwrap();
        assert_eq!(f.defining, vec![2, 0, 0, 1]); // x^3 + 2
        let f = build_extension_field(7, 1).unwrap();
        assert_eq!(f.defining, vec![0, 1]); // prime-field marker x
    }

    #[test]
    fn fq_field_axioms_and_frobenius() {
        let f = build_extension_field(13, 2).unwrap();
        // inverses and associativity over the whole (small) field
        for i in 1..f.order() as usize {
            let a = f.from_index(i);
            let ai = f.inv(&a).unwrap();
            assert!(f.is_one(&f.mul(&a, &ai)), "inverse failed at {:?}", a);
        }
        // Frobenius is additive/multiplicative and fixes exactly F_p
        let mut fixed = 0;
        for i in 0..f.order() as usize {
            let a = f.from_index(i);
            if f.frobenius(&a) == a {
                fixed += 1;
            }
        }
        assert_eq!(fixed, 13);
        let a = f.from_index(17);
        let b = f.from_index(100);
        assert_eq!(
            f.frobenius(&f.mul(&a, &b)),
            f.mul(&f.frobenius(&a), &f.frobenius(&b))
        );
        assert_eq!(
            f.frobenius(&f.add(&a, &b)),
            f.add(&f.frobenius(&a), &f.frobenius(&b))
        );
    }

    #[test]
    fn quadratic_field_arithmetic() {
        let k = QuadField::new(5);
        let x = QuadElem {
            a: rat(8, 1),
            b: rat(4, 1),
        };
        let xi = k.inv(&x).unwrap();
        assert!(k.is_one(&k.mul(&x, &xi)));
        let s = k.sqrt_gen();
        assert_eq!(k.mul(&s, &s), k.from_i64(5));
    }

    #[test]
    fn mod_ring_p_power() {
        let r = ModRing::new(5, 2).unwrap();
        assert_eq!(r.modulus(), 25);
        assert_eq!(r.inv(&7).unwrap(), 18); // 7*18 = 126 = 1 mod 25
        assert!(r.inv(&10).is_err());
    }
}
