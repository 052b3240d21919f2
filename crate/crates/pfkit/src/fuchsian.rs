//! Order-2 Fuchsian operators: singular points, indicial exponents (finite
//! and at infinity), Riemann scheme, exponent normalization, and the
//! Frobenius-method power-series solver.
//!
//! Operators are p(t) y'' + q(t) y' + r(t) y with polynomial coefficients
//! over an exact ring. Exponents are kept exact: rational pairs, or
//! quadratic-irrational conjugate pairs over Q(sqrt(d)).

use crate::poly::{Poly, PolyError};
use crate::ring::{rat, Rationals, Ring, RingError};
use crate::series::Series;
use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuchsError {
    #[error("leading coefficient polynomial must be nonzero")]
    ZeroLeading,
    #[error("operator is not regular singular at t = {0}")]
    IrregularSingularity(String),
    #[error("operator does not satisfy the Fuchsian degree bounds at infinity")]
    IrregularAtInfinity,
    #[error("indicial roots at 0 are not (0, 0)")]
    WrongExponents,
    #[error("recursion leading coefficient is not a unit at index n = {n} (prime {p})")]
    NonUnitLeadingRecursionCoefficient { n: usize, p: u64 },
    #[error("exponent data is not rational or quadratic-irrational")]
    ExponentOutOfScope,
    #[error("first exponent at {0} is not rational; normalization unsupported")]
    NonRationalExponent(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// An exact pair of characteristic exponents: two rationals, or a conjugate
/// pair a +- b sqrt(d).
#[derive(Debug, Clone, PartialEq)]
pub enum ExponentPair {
    Rational(BigRational, BigRational),
    Quadratic {
        d: i64,
        a: BigRational,
        b: BigRational,
    },
}

impl ExponentPair {
    /// Sum of the two exponents (always rational).
    pub fn trace(&self) -> BigRational {
        match self {
            ExponentPair::Rational(x, y) => x + y,
            ExponentPair::Quadratic { a, .. } => a + a,
        }
    }

    pub fn contains_rational(&self, v: &BigRational) -> bool {
        match self {
            ExponentPair::Rational(x, y) => x == v || y == v,
            ExponentPair::Quadratic { .. } => false,
        }
    }

    pub fn describe(&self) -> String {
        let r = Rationals;
        match self {
            ExponentPair::Rational(x, y) => format!("{{{}, {}}}", r.fmt_elem(x), r.fmt_elem(y)),
            ExponentPair::Quadratic { d, a, b } => format!(
                "{{{} +- {}*sqrt({})}}",
                r.fmt_elem(a),
                r.fmt_elem(b),
                d
            ),
        }
    }
}

/// One row of a Riemann scheme. `npoints` is the number of singular points
/// the row accounts for (2 for a conjugate pair of irrational finite
/// singular points), and `contribution` is the exact sum of all exponents
/// over those points.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeRow {
    pub label: String,
    pub npoints: usize,
    pub exponents: String,
    pub contribution: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiemannScheme {
    pub rows: Vec<SchemeRow>,
    /// Number of finite singular points, counted with conjugates.
    pub m: usize,
}

/// Result of checking the Fuchs relation: sum of all local exponents must
/// equal m - 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FuchsCheck {
    pub holds: bool,
    pub discrepancy: BigRational,
}

pub fn fuchs_relation_check(scheme: &RiemannScheme) -> FuchsCheck {
    let total: BigRational = scheme
        .rows
        .iter()
        .map(|r| r.contribution.clone())
        .fold(BigRational::zero(), |a, b| a + b);
    let expected = BigRational::from_integer(BigInt::from(scheme.m as i64 - 1));
    let discrepancy = &total - &expected;
    FuchsCheck {
        holds: discrepancy.is_zero(),
        discrepancy,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuchsianOperator {
    pub p_poly: Poly<Rationals>,
    pub q_poly: Poly<Rationals>,
    pub r_poly: Poly<Rationals>,
}

impl FuchsianOperator {
    pub fn new(
        p_poly: Poly<Rationals>,
        q_poly: Poly<Rationals>,
        r_poly: Poly<Rationals>,
    ) -> Result<Self, FuchsError> {
        if p_poly.is_zero() {
            return Err(FuchsError::ZeroLeading);
        }
        let op = FuchsianOperator {
            p_poly,
            q_poly,
            r_poly,
        };
        op.validate()?;
        Ok(op)
    }

    /// Verify that all singular points (finite and infinite) are regular
    /// singular. At a root of p of multiplicity k this means
    /// ord(q) >= k - 1 and ord(r) >= k - 2; at infinity it is the degree
    /// bounds deg q <= deg p - 1, deg r <= deg p - 2.
    fn validate(&self) -> Result<(), FuchsError> {
        let dp = self.p_poly.degree().unwrap();
        if let Some(dq) = self.q_poly.degree() {
            if dq + 1 > dp {
                return Err(FuchsError::IrregularAtInfinity);
            }
        }
        if let Some(dr) = self.r_poly.degree() {
            if dr + 2 > dp {
                return Err(FuchsError::IrregularAtInfinity);
            }
        }
        for (t0, k) in rational_roots(&self.p_poly) {
            if k >= 2 {
                if root_order(&self.q_poly, &t0) + 1 < k {
                    return Err(FuchsError::IrregularSingularity(fmt_rat(&t0)));
                }
                if k >= 3 && root_order(&self.r_poly, &t0) + 2 < k {
                    return Err(FuchsError::IrregularSingularity(fmt_rat(&t0)));
                }
            }
        }
        // Irrational roots: a repeated irrational root would show up in
        // gcd(p, p') after removing rational factors; require none.
        let g = self.p_poly.gcd(&self.p_poly.derivative())?;
        for (t0, _) in rational_roots(&g) {
            // already validated above; strip them
            let _ = t0;
        }
        let mut rest = g;
        for (t0, k) in rational_roots(&rest.clone()) {
            let lin = linear(&t0);
            for _ in 0..k {
                rest = rest.div_exact(&lin)?;
            }
        }
        if rest.degree().map(|d| d > 0).unwrap_or(false) {
            return Err(FuchsError::IrregularSingularity(
                "an irrational repeated root of p".into(),
            ));
        }
        Ok(())
    }

    /// Characteristic exponents at a finite regular singular point t0
    /// (a root of p): the roots of x(x-1) + a0 x + b0 with
    /// a0 = lim (t-t0) q/p and b0 = lim (t-t0)^2 r/p.
    pub fn exponents_at(&self, t0: &BigRational) -> Result<ExponentPair, FuchsError> {
        let k = root_order(&self.p_poly, t0);
        assert!(k >= 1, "not a singular point");
        let lin = linear(t0);
        let mut u = self.p_poly.clone();
        for _ in 0..k {
            u = u.div_exact(&lin)?;
        }
        let u0 = u.eval(t0);
        let mut qq = self.q_poly.clone();
        for _ in 0..k.saturating_sub(1) {
            qq = qq.div_exact(&lin)?;
        }
        let a0 = qq.eval(t0) / &u0;
        let b0 = if k >= 2 {
            let mut rr = self.r_poly.clone();
            for _ in 0..k - 2 {
                rr = rr.div_exact(&lin)?;
            }
            rr.eval(t0) / &u0
        } else {
            BigRational::zero()
        };
        // x^2 + (a0 - 1) x + b0
        solve_monic_quadratic(&(a0 - BigRational::one()), &b0)
    }

    /// The indicial equation at infinity for an operator in normalized form:
    /// x(x-1) + (2 - sum a_i) x + sum c_i t_i, assembled from symmetric
    /// functions of the coefficients (no factorization of p needed).
    pub fn indicial_at_infinity(&self) -> Result<ExponentPair, FuchsError> {
        let lead = self.p_poly.leading().unwrap().clone();
        let m = self.p_poly.degree().unwrap();
        let sum_a = self.q_poly.coeff(m - 1) / &lead;
        let sum_c = if m >= 1 {
            self.r_poly.coeff(m - 1) / &lead
        } else {
            BigRational::zero()
        };
        // sum of roots of p
        let root_sum = -(self.p_poly.coeff(m - 1) / &lead);
        let sum_ct = if m >= 2 {
            self.r_poly.coeff(m - 2) / &lead + &root_sum * &sum_c
        } else {
            BigRational::zero()
        };
        // x^2 + (1 - sum_a) x + sum_ct
        solve_monic_quadratic(&(BigRational::one() - sum_a), &sum_ct)
    }

    /// Assemble the full Riemann scheme: one row per rational finite
    /// singular point, one merged row per irrational conjugate pair, and the
    /// row at infinity.
    pub fn riemann_scheme(&self) -> Result<RiemannScheme, FuchsError> {
        let mut rows = vec![];
        let mut m = 0usize;
        let mut rest = self.p_poly.clone();
        for (t0, k) in rational_roots(&self.p_poly) {
            let pair = self.exponents_at(&t0)?;
            rows.push(SchemeRow {
                label: format!("t = {}", fmt_rat(&t0)),
                npoints: 1,
                exponents: pair.describe(),
                contribution: pair.trace(),
            });
            m += 1;
            let lin = linear(&t0);
            for _ in 0..k {
                rest = rest.div_exact(&lin)?;
            }
        }
        if rest.degree().map(|d| d > 0).unwrap_or(false) {
            // Simple irrational roots t_i of `rest`: exponents {0, 1 - a_i}
            // with a_i = q(t_i)/p'(t_i). The total contribution over the
            // conjugate orbit is (number of roots) - sum a_i, and
            // sum over these a_i = (sum over all simple roots) - (rational part).
            let n = rest.degree().unwrap();
            let total_sum_a = self.sum_residues_q_over_p()?;
            let mut rational_sum_a = BigRational::zero();
            for (t0, k) in rational_roots(&self.p_poly) {
                if k == 1 {
                    let pair = self.exponents_at(&t0)?;
                    // exponents {0, 1 - a}: a = 1 - trace
                    rational_sum_a += BigRational::one() - pair.trace();
                } else {
                    // contribution of multiple roots to the residue sum is
                    // handled by the partial-fraction residue directly
                    let lin = linear(&t0);
                    let mut u = self.p_poly.clone();
                    for _ in 0..k {
                        u = u.div_exact(&lin)?;
                    }
                    let mut qq = self.q_poly.clone();
                    for _ in 0..k - 1 {
                        qq = qq.div_exact(&lin)?;
                    }
                    rational_sum_a += qq.eval(&t0) / u.eval(&t0);
                }
            }
            let sum_a = total_sum_a - rational_sum_a;
            let contribution =
                BigRational::from_integer(BigInt::from(n as i64)) - sum_a;
            rows.push(SchemeRow {
                label: format!("roots of {}", rest.to_string_in("t")),
                npoints: n,
                exponents: "{0, 1 - a_i} per root".to_string(),
                contribution,
            });
            m += n;
        }
        let inf = self.indicial_at_infinity()?;
        rows.push(SchemeRow {
            label: "t = infinity".to_string(),
            npoints: 1,
            exponents: inf.describe(),
            contribution: inf.trace(),
        });
        Ok(RiemannScheme { rows, m })
    }

    /// Sum of residues of q/p over all roots of p; equals the ratio of the
    /// top coefficients when deg q = deg p - 1.
    fn sum_residues_q_over_p(&self) -> Result<BigRational, FuchsError> {
        let lead = self.p_poly.leading().unwrap().clone();
        let m = self.p_poly.degree().unwrap();
        Ok(self.q_poly.coeff(m - 1) / lead)
    }

    /// Shift exponents so that the first exponent at every finite singular
    /// point is 0. Operators that already satisfy this (all simple rational
    /// and irrational singular points) are returned unchanged.
    pub fn normalize(&self) -> Result<FuchsianOperator, FuchsError> {
        let mut cur = self.clone();
        loop {
            let mut changed = false;
            for (t0, k) in rational_roots(&cur.p_poly) {
                if k < 2 {
                    continue; // 0 is automatically an exponent at simple roots
                }
                let pair = cur.exponents_at(&t0)?;
                let s1 = match &pair {
                    ExponentPair::Rational(x, y) => {
                        if x.is_zero() || y.is_zero() {
                            continue;
                        }
                        if x <= y {
                            x.clone()
                        } else {
                            y.clone()
                        }
                    }
                    ExponentPair::Quadratic { .. } => {
                        return Err(FuchsError::NonRationalExponent(fmt_rat(&t0)))
                    }
                };
                cur = cur.shift_exponent(&t0, &s1)?;
                changed = true;
                break;
            }
            if !changed {
                return Ok(cur);
            }
        }
    }

    /// Conjugate the operator by (t - t0)^{s1}: solutions of the result are
    /// the solutions of self divided by (t - t0)^{s1}.
    fn shift_exponent(
        &self,
        t0: &BigRational,
        s1: &BigRational,
    ) -> Result<FuchsianOperator, FuchsError> {
        let lin = linear(t0);
        let p_over = self.p_poly.div_exact(&lin)?;
        let p_over2 = p_over.div_exact(&lin)?;
        let q_over = self.q_poly.div_exact(&lin)?;
        let two_s1 = s1 + s1;
        let s1s1m1 = s1 * (s1 - BigRational::one());
        let q_new = self.q_poly.add(&p_over.scale(&two_s1));
        let r_new = self
            .r_poly
            .add(&q_over.scale(s1))
            .add(&p_over2.scale(&s1s1m1));
        let mut op = FuchsianOperator {
            p_poly: self.p_poly.clone(),
            q_poly: q_new,
            r_poly: r_new,
        };
        // divide out any common linear factor introduced by the shift
        loop {
            let g = op
                .p_poly
                .gcd(&op.q_poly)
                .and_then(|g| g.gcd(&op.r_poly))?;
            if g.degree().map(|d| d > 0).unwrap_or(false) {
                op = FuchsianOperator {
                    p_poly: op.p_poly.div_exact(&g)?,
                    q_poly: op.q_poly.div_exact(&g)?,
                    r_poly: op.r_poly.div_exact(&g)?,
                };
            } else {
                break;
            }
        }
        Ok(op)
    }

    /// Map the operator's coefficients into another ring.
    pub fn map_ring<S: Ring>(
        &self,
        ring: S,
        reduce: impl Fn(&BigRational) -> Result<S::Elem, RingError>,
    ) -> Result<GenericOperator<S>, RingError> {
        let conv = |p: &Poly<Rationals>| -> Result<Poly<S>, RingError> {
            let coeffs = p
                .coeffs()
                .iter()
                .map(&reduce)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Poly::new(ring.clone(), coeffs))
        };
        Ok(GenericOperator {
            p_poly: conv(&self.p_poly)?,
            q_poly: conv(&self.q_poly)?,
            r_poly: conv(&self.r_poly)?,
        })
    }

    /// The unique series solution 1 + O(t) at a regular singular point 0
    /// with exponent pair (0, 0), over Q.
    pub fn frobenius_solution(&self, order: usize) -> Result<Series<Rationals>, FuchsError> {
        let generic = self
            .map_ring(Rationals, |c| Ok(c.clone()))
            .expect("identity reduction cannot fail");
        generic.frobenius_solution(order)
    }

    /// Apply the operator to a series; exact to the provable order.
    pub fn residual(&self, y: &Series<Rationals>) -> Series<Rationals> {
        let generic = self
            .map_ring(Rationals, |c| Ok(c.clone()))
            .expect("identity reduction cannot fail");
        generic.residual(y)
    }

    /// Extracted recursion coefficient d_k(n): the multiplier of y_{n+1-k}
    /// in the coefficient of t^n of L y.
    pub fn recursion_coefficient(&self, k: usize, n: i64) -> BigRational {
        let nk = BigRational::from_integer(BigInt::from(n + 1 - k as i64));
        let nk1 = BigRational::from_integer(BigInt::from(n - k as i64));
        let mut d = self.p_poly.coeff(k + 1) * &nk * &nk1 + self.q_poly.coeff(k) * &nk;
        if k >= 1 {
            d += self.r_poly.coeff(k - 1);
        }
        d
    }
}

/// An order-2 operator with coefficients in an arbitrary exact ring
/// (typically Z/p^m, obtained by reducing a rational operator).
#[derive(Debug, Clone, PartialEq)]
pub struct GenericOperator<R: Ring> {
    pub p_poly: Poly<R>,
    pub q_poly: Poly<R>,
    pub r_poly: Poly<R>,
}

impl<R: Ring> GenericOperator<R> {
    /// Frobenius-method recursion for the normalized solution
    /// y = 1 + sum y_n t^n. Preconditions: p(0) = 0, and the indicial roots
    /// at 0 are (0, 0) (equivalently q(0) = p'(0) != 0 for a simple zero).
    pub fn frobenius_solution(&self, order: usize) -> Result<Series<R>, FuchsError> {
        let ring = self.p_poly.ring.clone();
        let p0 = self.p_poly.coeff(0);
        let p1 = self.p_poly.coeff(1);
        let q0 = self.q_poly.coeff(0);
        if !ring.is_zero(&p0) || ring.is_zero(&p1) || q0 != p1 {
            return Err(FuchsError::WrongExponents);
        }
        let mut y = vec![ring.one()];
        for n in 1..order {
            // c_n = p_1 n^2  (leading recursion coefficient)
            let n_elem = ring.from_i64(n as i64);
            let c_n = ring.mul(&p1, &ring.mul(&n_elem, &n_elem));
            let c_inv = ring.inv(&c_n).map_err(|_| {
                FuchsError::NonUnitLeadingRecursionCoefficient {
                    n,
                    p: ring.characteristic().unwrap_or(0),
                }
            })?;
            let mut acc = ring.zero();
            // p-part: sum_{i>=2} p_i (n+1-i)(n-i) y_{n+1-i}
            for (i, pi) in self.p_poly.coeffs().iter().enumerate().skip(2) {
                if i > n {
                    break;
                }
                let a = ring.from_i64((n as i64 + 1 - i as i64) * (n as i64 - i as i64));
                acc = ring.add(&acc, &ring.mul(pi, &ring.mul(&a, &y[n + 1 - i])));
            }
            // q-part: sum_{i>=1} q_i (n-i) y_{n-i}
            for (i, qi) in self.q_poly.coeffs().iter().enumerate().skip(1) {
                if i > n {
                    break;
                }
                let a = ring.from_i64(n as i64 - i as i64);
                acc = ring.add(&acc, &ring.mul(qi, &ring.mul(&a, &y[n - i])));
            }
            // r-part: sum_{i>=0} r_i y_{n-1-i}
            for (i, ri) in self.r_poly.coeffs().iter().enumerate() {
                if i + 1 > n {
                    break;
                }
                acc = ring.add(&acc, &ring.mul(ri, &y[n - 1 - i]));
            }
            y.push(ring.neg(&ring.mul(&acc, &c_inv)));
        }
        Ok(Series::new(ring, y))
    }

    /// L applied to a series, exact to order y.order() - 2.
    pub fn residual(&self, y: &Series<R>) -> Series<R> {
        let d1 = y.derivative();
        let d2 = d1.derivative();
        let n = y.order().saturating_sub(2);
        d2.mul_poly(&self.p_poly)
            .shorten(n)
            .add(&d1.mul_poly(&self.q_poly).shorten(n))
            .add(&y.mul_poly(&self.r_poly).shorten(n))
    }
}

// ---------------------------------------------------------------------------
// helpers over Q
// ---------------------------------------------------------------------------

fn fmt_rat(x: &BigRational) -> String {
    Rationals.fmt_elem(x)
}

fn linear(t0: &BigRational) -> Poly<Rationals> {
    Poly::new(Rationals, vec![-t0.clone(), BigRational::one()])
}

fn root_order(p: &Poly<Rationals>, t0: &BigRational) -> usize {
    if p.is_zero() {
        return usize::MAX;
    }
    let lin = linear(t0);
    let mut k = 0;
    let mut cur = p.clone();
    while !cur.is_zero() && cur.eval(t0).is_zero() {
        cur = cur.div_exact(&lin).expect("exact by construction");
        k += 1;
    }
    k
}

/// All rational roots of a rational-coefficient polynomial, with
/// multiplicities (rational root theorem on the primitive integer model).
pub fn rational_roots(p: &Poly<Rationals>) -> Vec<(BigRational, usize)> {
    if p.is_zero() {
        return vec![];
    }
    // clear denominators
    let mut den = BigInt::one();
    for c in p.coeffs() {
        den = num::Integer::lcm(&den, c.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let mut roots = vec![];
    // valuation at 0
    let val = ints.iter().take_while(|c| c.is_zero()).count();
    if val > 0 {
        roots.push((BigRational::zero(), val));
    }
    let trailing = &ints[val];
    let leading = ints.last().unwrap();
    let tds = divisors(&trailing.abs());
    let lds = divisors(&leading.abs());
    let mut seen = std::collections::BTreeSet::new();
    for a in &tds {
        for b in &lds {
            for sign in [1i64, -1] {
                let cand = BigRational::new(a * BigInt::from(sign), b.clone());
                let key = fmt_rat(&cand);
                if seen.contains(&key) {
                    continue;
                }
                seen.insert(key);
                let k = root_order(p, &cand);
                if k > 0 {
                    roots.push((cand, k));
                }
            }
        }
    }
    roots.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    roots
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // small-integer divisor scan; catalog polynomials have tiny coefficients
    let (_, digits) = n.to_u64_digits();
    let v = *digits.first().unwrap_or(&0);
    if digits.len() > 1 || v > 1_000_000 {
        // fall back to 1 and |n| only; rational-root scan stays sound but
        // may miss roots of huge-coefficient inputs (outside desk scale)
        return vec![BigInt::one(), n.clone()];
    }
    let mut out = vec![];
    let mut f = 1u64;
    while f * f <= v.max(1) {
        if v % f == 0 {
            out.push(BigInt::from(f));
            out.push(BigInt::from(v / f));
        }
        f += 1;
    }
    if v == 0 {
        out.push(BigInt::one());
    }
    out.sort();
    out.dedup();
    out
}

/// Exact roots of x^2 + b x + c over Q, or over Q(sqrt(d)) when the
/// discriminant is not a rational square.
fn solve_monic_quadratic(b: &BigRational, c: &BigRational) -> Result<ExponentPair, FuchsError> {
    let disc = b * b - rat(4, 1) * c;
    let half = rat(1, 2);
    if disc.is_zero() {
        let x = -b * &half;
        return Ok(ExponentPair::Rational(x.clone(), x));
    }
    if let Some(s) = rational_sqrt(&disc) {
        let x1 = (-b - &s) * &half;
        let x2 = (-b + &s) * &half;
        let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
        return Ok(ExponentPair::Rational(lo, hi));
    }
    if disc.is_negative() {
        return Err(FuchsError::ExponentOutOfScope);
    }
    // disc = s^2 * d with d squarefree
    let num = disc.numer().clone();
    let den = disc.denom().clone();
    // sqrt(num/den) = sqrt(num * den) / den
    let nd = &num * &den;
    let (s, d) = extract_square(&nd);
    let d_small: i64 = match d.to_string().parse() {
        Ok(v) => v,
        Err(_) => return Err(FuchsError::ExponentOutOfScope),
    };
    Ok(ExponentPair::Quadratic {
        d: d_small,
        a: -b * &half,
        b: BigRational::new(s, den) * half,
    })
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let sn = x.numer().sqrt();
    let sd = x.denom().sqrt();
    if &(&sn * &sn) == x.numer() && &(&sd * &sd) == x.denom() {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// n = s^2 * d with d squarefree (n > 0, desk-scale factorization).
fn extract_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut s = BigInt::one();
    let mut d = n.clone();
    let mut f = BigInt::from(2u32);
    while &(&f * &f) <= &d {
        while (&d % (&f * &f)).is_zero() {
            d = &d / (&f * &f);
            s *= &f;
        }
        f += 1;
    }
    (s, d)
}
