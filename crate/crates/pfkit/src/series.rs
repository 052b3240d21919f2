//! Truncated power series over exact coefficient rings: ring operations,
//! reciprocal, rational-exponent powers, substitution t -> t^p, and the
//! truncation operator.
//!
//! A series knows exactly `order` coefficients (it is known mod t^order) and
//! operations never claim coefficients beyond the provable order.

use crate::poly::Poly;
use crate::ring::{Rationals, Ring, RingError};
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("requested order {requested} exceeds the known order {known}")]
    OrderTooLarge { requested: usize, known: usize },
    #[error("constant term is not invertible")]
    ConstantNotInvertible,
    #[error("pow_rational requires constant term 1")]
    ConstantNotOne,
    #[error("non-invertible binomial denominator at prime {p}")]
    BinomialDenominator { p: u64 },
    #[error("series has no valuation-{0} factor to shift out")]
    ValuationTooSmall(usize),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series<R: Ring> {
    pub ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> Series<R> {
    /// A series from exactly `coeffs.len()` known coefficients.
    pub fn new(ring: R, coeffs: Vec<R::Elem>) -> Self {
        Series { ring, coeffs }
    }

    pub fn one(ring: R, order: usize) -> Self {
        let mut coeffs = vec![ring.zero(); order];
        if order > 0 {
            coeffs[0] = ring.one();
        }
        Series { ring, coeffs }
    }

    pub fn from_poly(p: &Poly<R>, order: usize) -> Self {
        let coeffs = (0..order).map(|i| p.coeff(i)).collect();
        Series {
            ring: p.ring.clone(),
            coeffs,
        }
    }

    /// Number of known coefficients (series known mod t^order).
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &R::Elem {
        &self.coeffs[i]
    }

    /// The truncation operator [.]_m as a polynomial. Never fabricates
    /// zeros: m must not exceed the known order.
    pub fn truncate(&self, m: usize) -> Result<Poly<R>, SeriesError> {
        if m > self.order() {
            return Err(SeriesError::OrderTooLarge {
                requested: m,
                known: self.order(),
            });
        }
        Ok(Poly::new(self.ring.clone(), self.coeffs[..m].to_vec()))
    }

    pub fn shorten(&self, order: usize) -> Self {
        Series {
            ring: self.ring.clone(),
            coeffs: self.coeffs[..order.min(self.order())].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..n)
            .map(|i| self.ring.add(&self.coeffs[i], &other.coeffs[i]))
            .collect();
        Series {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..n)
            .map(|i| self.ring.sub(&self.coeffs[i], &other.coeffs[i]))
            .collect();
        Series {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        Series {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| self.ring.neg(c)).collect(),
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        Series {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|a| self.ring.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut coeffs = vec![self.ring.zero(); n];
        for i in 0..n {
            if self.ring.is_zero(&self.coeffs[i]) {
                continue;
            }
            for j in 0..n - i {
                let t = self.ring.mul(&self.coeffs[i], &other.coeffs[j]);
                coeffs[i + j] = self.ring.add(&coeffs[i + j], &t);
            }
        }
        Series {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn mul_poly(&self, p: &Poly<R>) -> Self {
        self.mul(&Series::from_poly(p, self.order()))
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        if self.order() == 0 {
            return Ok(self.clone());
        }
        let c0 = self
            .ring
            .inv(&self.coeffs[0])
            .map_err(|_| SeriesError::ConstantNotInvertible)?;
        let n = self.order();
        let mut out = vec![self.ring.zero(); n];
        out[0] = c0.clone();
        for i in 1..n {
            let mut s = self.ring.zero();
            for k in 1..=i {
                let t = self.ring.mul(&self.coeffs[k], &out[i - k]);
                s = self.ring.add(&s, &t);
            }
            out[i] = self.ring.neg(&self.ring.mul(&s, &c0));
        }
        Ok(Series {
            ring: self.ring.clone(),
            coeffs: out,
        })
    }

    /// s(t^p); the result is provable to order p * s.order().
    pub fn substitute_power(&self, p: usize) -> Self {
        assert!(p >= 1);
        if p == 1 {
            return self.clone();
        }
        let n = self.order() * p;
        let mut coeffs = vec![self.ring.zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * p] = c.clone();
        }
        Series {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// Explicit valuation shift: divide by t^k, requiring the first k
    /// coefficients to vanish. Keeps order bookkeeping auditable (plain
    /// division by a series with zero constant term is always an error).
    pub fn shift_down(&self, k: usize) -> Result<Self, SeriesError> {
        if self.coeffs[..k.min(self.order())]
            .iter()
            .any(|c| !self.ring.is_zero(c))
            || k > self.order()
        {
            return Err(SeriesError::ValuationTooSmall(k));
        }
        Ok(Series {
            ring: self.ring.clone(),
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Multiply by t^k (order grows by k).
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![self.ring.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Series {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// Termwise derivative d/dt (order drops by one).
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.ring.mul(&self.ring.from_i64(i as i64), c))
            .collect();
        Series {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// Principal-branch rational power of a series with constant term 1.
    /// Uses the logarithmic-derivative recursion n c_n = sum (e(n-k) - k)
    /// a_{n-k} c_k, which requires the integers 1..order to be invertible;
    /// a failure reports the offending prime (feeding S bookkeeping).
    pub fn pow_rational(&self, num: i64, den: i64) -> Result<Self, SeriesError> {
        assert!(den != 0);
        if self.order() == 0 {
            return Ok(self.clone());
        }
        if !self.ring.is_one(&self.coeffs[0]) {
            return Err(SeriesError::ConstantNotOne);
        }
        let n = self.order();
        let mut out = vec![self.ring.zero(); n];
        out[0] = self.ring.one();
        let den_elem = self.ring.from_i64(den);
        let den_inv = self.ring.inv(&den_elem).map_err(|_| {
            let p = self
                .ring
                .characteristic()
                .unwrap_or_else(|| smallest_prime_factor(den.unsigned_abs()));
            SeriesError::BinomialDenominator { p }
        })?;
        for i in 1..n {
            // i * den * c_i = sum_{k<i} (num*(i-k) - den*k) a_{i-k} c_k
            let mut s = self.ring.zero();
            for k in 0..i {
                let w = self
                    .ring
                    .from_i64(num * (i as i64 - k as i64) - den * k as i64);
                let t = self.ring.mul(&w, &self.ring.mul(&self.coeffs[i - k], &out[k]));
                s = self.ring.add(&s, &t);
            }
            let i_elem = self.ring.from_i64(i as i64);
            let i_inv = self.ring.inv(&i_elem).map_err(|_| {
                let p = self
                    .ring
                    .characteristic()
                    .unwrap_or_else(|| smallest_prime_factor(i as u64));
                SeriesError::BinomialDenominator { p }
            })?;
            out[i] = self.ring.mul(&self.ring.mul(&s, &i_inv), &den_inv);
        }
        Ok(Series {
            ring: self.ring.clone(),
            coeffs: out,
        })
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n <= 1 {
        return n;
    }
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            return f;
        }
        f += 1;
    }
    n
}

// ---------------------------------------------------------------------------
// Rational-series extras used by the modular-forms layer
// ---------------------------------------------------------------------------

impl Series<Rationals> {
    /// Termwise antiderivative with constant term 0 (order grows by one).
    pub fn integrate(&self) -> Self {
        let mut coeffs = vec![BigRational::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / BigRational::from_integer((i as i64 + 1).into()));
        }
        Series {
            ring: Rationals,
            coeffs,
        }
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> Self {
        assert!(
            self.coeffs.first().map(|c| c.is_zero()).unwrap_or(true),
            "exp requires zero constant term"
        );
        let n = self.order();
        let mut out = vec![BigRational::zero(); n];
        if n == 0 {
            return Series {
                ring: Rationals,
                coeffs: out,
            };
        }
        out[0] = BigRational::one();
        // out' = self' * out
        let d: Vec<BigRational> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigRational::from_integer((i as i64).into()))
            .collect();
        for i in 1..n {
            let mut s = BigRational::zero();
            for k in 1..=i {
                s += &d[k] * &out[i - k];
            }
            out[i] = s / BigRational::from_integer((i as i64).into());
        }
        Series {
            ring: Rationals,
            coeffs: out,
        }
    }

    /// Reduce the series modulo p^m; errors when p divides a denominator.
    pub fn reduce_mod(
        &self,
        ring: crate::ring::ModRing,
    ) -> Result<Series<crate::ring::ModRing>, RingError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| ring.reduce_rational(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Series::new(ring, coeffs))
    }

    /// The set of primes dividing any coefficient denominator.
    pub fn denominator_support(&self) -> Vec<u64> {
        let mut support = std::collections::BTreeSet::new();
        for c in &self.coeffs {
            let mut d = c.denom().abs();
            let mut f = num::BigInt::from(2u32);
            while &f * &f <= d {
                if (&d % &f).is_zero() {
                    support.insert(to_u64(&f));
                    while (&d % &f).is_zero() {
                        d = &d / &f;
                    }
                }
                f += 1;
            }
            if d > num::BigInt::from(1u32) {
                support.insert(to_u64(&d));
            }
        }
        support.into_iter().collect()
    }
}

fn to_u64(b: &num::BigInt) -> u64 {
    let (_, digits) = b.to_u64_digits();
    *digits.first().unwrap_or(&0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, Fq, ModRing};

    fn geom(order: usize) -> Series<Rationals> {
        Series::new(Rationals, vec![BigRational::one(); order])
    }

    #[test]
    fn truncate_is_strict() {
        let s = geom(5);
        let t = s.truncate(2).unwrap();
        assert_eq!(t.coeffs(), &[rat(1, 1), rat(1, 1)]);
        assert!(s.truncate(6).is_err());
    }

    #[test]
    fn mul_reciprocal_roundtrip() {
        let s = Series::new(
            Rationals,
            vec![rat(1, 1), rat(3, 2), rat(-2, 5), rat(7, 3), rat(0, 1)],
        );
        let inv = s.reciprocal().unwrap();
        let prod = s.mul(&inv);
        assert_eq!(prod, Series::one(Rationals, 5));
        // (1 - t)(1 + t + t^2 + ...) = 1
        let one_minus_t = Series::new(
            Rationals,
            vec![rat(1, 1), rat(-1, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
        );
        assert_eq!(one_minus_t.mul(&geom(5)), Series::one(Rationals, 5));
    }

    #[test]
    fn pow_rational_binomial() {
        // (1 + t)^{1/2} = 1 + t/2 - t^2/8 + t^3/16 - ...
        let one_plus_t = Series::new(
            Rationals,
            vec![rat(1, 1), rat(1, 1), rat(0, 1), rat(0, 1)],
        );
        let sqrt = one_plus_t.pow_rational(1, 2).unwrap();
        assert_eq!(
            sqrt.coeffs(),
            &[rat(1, 1), rat(1, 2), rat(-1, 8), rat(1, 16)]
        );
        // ((1+t)^2)^{1/2} = 1 + t
        let sq = one_plus_t.mul(&one_plus_t);
        assert_eq!(sq.pow_rational(1, 2).unwrap(), one_plus_t);
        // exponent additivity on a sample
        let s = Series::new(Rationals, vec![rat(1, 1), rat(2, 3), rat(-1, 7), rat(4, 5)]);
        let lhs = s.pow_rational(1, 3).unwrap().mul(&s.pow_rational(1, 2).unwrap());
        let rhs = s.pow_rational(5, 6).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pow_rational_reports_denominator_prime() {
        let r = ModRing::prime_field(2).unwrap();
        let s = Series::new(r, vec![1, 1, 0, 0]);
        assert_eq!(
            s.pow_rational(1, 2),
            Err(SeriesError::BinomialDenominator { p: 2 })
        );
    }

    #[test]
    fn substitute_power_examples() {
        let one_plus_t = Series::new(Rationals, vec![rat(1, 1), rat(1, 1)]);
        let s = one_plus_t.substitute_power(3);
        assert_eq!(s.order(), 6);
        assert_eq!(s.coeff(0), &rat(1, 1));
        assert_eq!(s.coeff(3), &rat(1, 1));
        assert_eq!(s.coeff(1), &rat(0, 1));
        assert_eq!(one_plus_t.substitute_power(1), one_plus_t);
        // multiplicativity
        let u = Series::new(Rationals, vec![rat(2, 1), rat(-1, 3)]);
        assert_eq!(
            one_plus_t.mul(&u).substitute_power(2),
            one_plus_t.substitute_power(2).mul(&u.substitute_power(2))
        );
    }

    #[test]
    fn truncation_commutes_with_reduction() {
        let s = Series::new(Rationals, vec![rat(1, 1), rat(21, 400), rat(13041, 640000)]);
        let ring = ModRing::prime_field(13).unwrap();
        let reduced = s.reduce_mod(ring).unwrap();
        let a = reduced.truncate(3).unwrap();
        let b = s.truncate(3).unwrap();
        for i in 0..3 {
            assert_eq!(a.coeff(i), ring.reduce_rational(&b.coeff(i)).unwrap());
        }
    }

    #[test]
    fn shift_down_requires_valuation() {
        let s = Series::new(Rationals, vec![rat(0, 1), rat(5, 1), rat(1, 1)]);
        let shifted = s.shift_down(1).unwrap();
        assert_eq!(shifted.coeffs(), &[rat(5, 1), rat(1, 1)]);
        assert!(s.shift_down(2).is_err());
    }

    #[test]
    fn exp_integrate() {
        // exp(t) coefficients 1/n!
        let t = Series::new(
            Rationals,
            vec![rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
        );
        let e = t.exp();
        assert_eq!(e.coeff(3), &rat(1, 6));
        assert_eq!(e.coeff(4), &rat(1, 24));
        let i = t.integrate();
        assert_eq!(i.coeff(2), &rat(1, 2));
    }

    #[test]
    fn finite_field_series() {
        let f = Fq::prime_field(7).unwrap();
        let s = Series::new(f.clone(), vec![f.embed(1), f.embed(3), f.embed(5)]);
        let inv = s.reciprocal().unwrap();
        assert_eq!(s.mul(&inv), Series::one(f, 3));
    }
}
