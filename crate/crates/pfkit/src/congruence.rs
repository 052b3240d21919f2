//! Frobenius congruences between solutions: the alpha factors
//! y_j(t)^N = alpha_{p,j}(t) * y_{j'}(t^p)^N mod p, the residue-field index
//! permutation, exact degree predictions, the two-step composition law, and
//! S-integrality audits.

use crate::catalog::CurveFamilyDescriptor;
use crate::fuchsian::FuchsError;
use crate::poly::Poly;
use crate::ring::{splitting_type, ModRing, Rationals, Ring, RingError, SplittingType};
use crate::series::{Series, SeriesError};
use num::rational::BigRational;
use num::{BigInt, One, ToPrimitive};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CongruenceError {
    #[error("prime {0} is in the bad set S of family {1}")]
    BadPrime(u64, String),
    #[error("prime {0} is ramified in the real multiplication field")]
    RamifiedPrime(u64),
    #[error("quotient series does not stabilize to a polynomial (j' = {tried_j_prime}, order {order})")]
    NonStabilizing { tried_j_prime: usize, order: usize },
    #[error("degree formula produced a non-integral value {0}")]
    NonIntegralDegree(String),
    #[error(transparent)]
    Fuchs(#[from] FuchsError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

// ---------------------------------------------------------------------------
// Index permutation
// ---------------------------------------------------------------------------

/// Residue degrees (f_1, ..., f_r) of the primes above p, with sum = g.
#[derive(Debug, Clone, PartialEq)]
pub struct SplittingData {
    pub residue_degrees: Vec<usize>,
}

impl SplittingData {
    pub fn quadratic(ty: SplittingType) -> Self {
        let residue_degrees = match ty {
            SplittingType::Split => vec![1, 1],
            SplittingType::Inert => vec![2],
            SplittingType::Ramified => vec![1],
        };
        SplittingData { residue_degrees }
    }

    /// Trivial splitting for families without real multiplication data.
    pub fn trivial(g: usize) -> Self {
        SplittingData {
            residue_degrees: vec![1; g],
        }
    }

    pub fn genus(&self) -> usize {
        self.residue_degrees.iter().sum()
    }

    /// Number of primes above p.
    pub fn n_p(&self) -> usize {
        self.residue_degrees.len()
    }
}

/// Splitting data of p in the family's real multiplication field (trivial
/// when the descriptor carries none).
pub fn splitting_data(desc: &CurveFamilyDescriptor, p: u64) -> Result<SplittingData, CongruenceError> {
    match desc.rm_disc {
        None => Ok(SplittingData::trivial(desc.genus)),
        Some(d) => {
            let ty = splitting_type(p, d)?;
            if ty == SplittingType::Ramified {
                return Err(CongruenceError::RamifiedPrime(p));
            }
            Ok(SplittingData::quadratic(ty))
        }
    }
}

/// The m-th Frobenius iterate permutation of solution indices {0..g-1}:
/// a cyclic shift by m within each residue-degree block.
pub fn index_permutation(s: &SplittingData, m: usize) -> Vec<usize> {
    let mut perm = Vec::with_capacity(s.genus());
    let mut base = 0;
    for &f in &s.residue_degrees {
        for i in 0..f {
            perm.push(base + (i + m) % f);
        }
        base += f;
    }
    perm
}

// ---------------------------------------------------------------------------
// Degree predictions
// ---------------------------------------------------------------------------

/// Predicted degree of alpha in the t = 1/J coordinate for triangle families
/// with the Hauptmodul pole at the order-m elliptic point.
#[derive(Debug, Clone, PartialEq)]
pub struct TDegree {
    /// The chosen elliptic correction (0 or epsilon_max).
    pub epsilon: u32,
    pub epsilon_max: u32,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreePrediction {
    /// (-chi/2) * N * (p * lambda_{j'} - lambda_j): degree of alpha as a
    /// polynomial in the coordinate with a pole at the cusp.
    pub j_degree: i64,
    /// Triangle-variant degree in t, with the elliptic correction resolved.
    pub t_degree: Option<TDegree>,
}

fn to_i64(x: &BigRational) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Exact degree of alpha_{p,j}; j is 0-based.
pub fn predicted_degree(
    desc: &CurveFamilyDescriptor,
    p: u64,
    j: usize,
) -> Result<DegreePrediction, CongruenceError> {
    let s = splitting_data(desc, p)?;
    let jp = index_permutation(&s, 1)[j];
    let lam_j = &desc.lyapunov[j];
    let lam_jp = &desc.lyapunov[jp];
    let p_rat = BigRational::from_integer(BigInt::from(p));
    let diff = &p_rat * lam_jp - lam_j;
    let half_neg_chi = -&desc.euler_char / BigRational::from_integer(BigInt::from(2));
    let n_big = BigRational::from_integer(BigInt::from(desc.n_exponent() as i64));
    let j_degree_rat = &half_neg_chi * &n_big * &diff;
    let j_degree = to_i64(&j_degree_rat).ok_or_else(|| {
        CongruenceError::NonIntegralDegree(Rationals.fmt_elem(&j_degree_rat))
    })?;

    let t_degree = match desc.triangle {
        None => None,
        Some((n, m)) => {
            let n_r = BigRational::from_integer(BigInt::from(n as i64));
            let m_r = BigRational::from_integer(BigInt::from(m as i64));
            // (mn - m - n) / (2m) * (p lam_j' - lam_j) - (n/m) * eps
            let base = (&m_r * &n_r - &m_r - &n_r)
                / (BigRational::from_integer(BigInt::from(2)) * &m_r)
                * &diff;
            // eps_max = 1 + (lambda_j - 1) * chi * m  (pole order of the
            // embedding derivative at the order-m elliptic point, plus one)
            let eps_max_rat =
                BigRational::one() + (lam_j - BigRational::one()) * &desc.euler_char * &m_r;
            let eps_max = to_i64(&eps_max_rat).ok_or_else(|| {
                CongruenceError::NonIntegralDegree(Rationals.fmt_elem(&eps_max_rat))
            })? as u32;
            let mut chosen = None;
            for eps in [0u32, eps_max] {
                let v = &base
                    - &n_r / &m_r * BigRational::from_integer(BigInt::from(eps as i64));
                if let Some(d) = to_i64(&v) {
                    chosen = Some(TDegree {
                        epsilon: eps,
                        epsilon_max: eps_max,
                        degree: d,
                    });
                    break;
                }
            }
            Some(chosen.ok_or_else(|| {
                CongruenceError::NonIntegralDegree(Rationals.fmt_elem(&base))
            })?)
        }
    };
    Ok(DegreePrediction { j_degree, t_degree })
}

// ---------------------------------------------------------------------------
// Alpha computation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct CongruenceCertificate {
    pub family: String,
    pub p: u64,
    /// 0-based solution indices.
    pub j: usize,
    pub j_prime: usize,
    /// True when j_prime disagrees with the descriptor's predicted
    /// permutation (found by fallback scan).
    pub permutation_mismatch: bool,
    pub n_exponent: u32,
    pub alpha: Poly<ModRing>,
    pub verified_order: usize,
    pub predicted: DegreePrediction,
    pub observed_degree: usize,
    pub degree_match: bool,
}

pub fn series_pow<R: Ring>(s: &Series<R>, e: u32) -> Series<R> {
    let mut acc = Series::one(s.ring.clone(), s.order());
    let mut base = s.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    acc
}

/// Exponent used for the congruence displays: the triangle exponent n when
/// the descriptor is in the t-convention, else N = lcm of elliptic orders.
pub fn congruence_exponent(desc: &CurveFamilyDescriptor) -> u32 {
    desc.triangle.map(|(n, _)| n).unwrap_or(desc.n_exponent())
}

/// The rational solutions y_j of all operators, to the given order.
pub fn solutions(
    desc: &CurveFamilyDescriptor,
    order: usize,
) -> Result<Vec<Series<Rationals>>, CongruenceError> {
    desc.operators
        .iter()
        .map(|op| op.frobenius_solution(order).map_err(Into::into))
        .collect()
}

fn stabilized_alpha(
    y_j: &Series<ModRing>,
    y_jp: &Series<ModRing>,
    n_exp: u32,
    p: u64,
    order: usize,
) -> Option<(Poly<ModRing>, usize)> {
    let lhs = series_pow(y_j, n_exp);
    let rhs = series_pow(&y_jp.substitute_power(p as usize).shorten(order), n_exp);
    let quot = lhs.mul(&rhs.reciprocal().ok()?);
    let coeffs = quot.coeffs();
    let ring = quot.ring;
    let obs = coeffs.iter().rposition(|c| !ring.is_zero(c))?;
    // stabilization: a genuine polynomial value, with at least 2p slack
    if obs + 2 * p as usize > order {
        return None;
    }
    Some((Poly::new(ring, coeffs[..=obs].to_vec()), obs))
}

/// Compute alpha_{p,j} and its certificate; j is 0-based. `order` defaults
/// to max(4p, predicted degree + 2p).
pub fn compute_alpha(
    desc: &CurveFamilyDescriptor,
    p: u64,
    j: usize,
    order: Option<usize>,
) -> Result<CongruenceCertificate, CongruenceError> {
    if desc.bad_primes.contains(&p) {
        return Err(CongruenceError::BadPrime(p, desc.name.clone()));
    }
    let s = splitting_data(desc, p)?;
    let predicted = predicted_degree(desc, p, j)?;
    let pred_deg = predicted
        .t_degree
        .as_ref()
        .map(|t| t.degree)
        .unwrap_or(predicted.j_degree)
        .max(0) as usize;
    let order = order.unwrap_or_else(|| (4 * p as usize).max(pred_deg + 2 * p as usize));
    let n_exp = congruence_exponent(desc);
    let ring = ModRing::prime_field(p)?;
    let sols = solutions(desc, order)?
        .into_iter()
        .map(|y| y.reduce_mod(ring))
        .collect::<Result<Vec<_>, _>>()?;
    let jp_predicted = index_permutation(&s, 1)[j];
    // try the descriptor-predicted j' first, then fall back to scanning
    let mut candidates = vec![jp_predicted];
    candidates.extend((0..desc.genus).filter(|&k| k != jp_predicted));
    for jp in candidates {
        if let Some((alpha, obs)) = stabilized_alpha(&sols[j], &sols[jp], n_exp, p, order) {
            let degree_match = obs == pred_deg && jp == jp_predicted;
            return Ok(CongruenceCertificate {
                family: desc.name.clone(),
                p,
                j,
                j_prime: jp,
                permutation_mismatch: jp != jp_predicted,
                n_exponent: n_exp,
                alpha,
                verified_order: order,
                predicted,
                observed_degree: obs,
                degree_match,
            });
        }
    }
    Err(CongruenceError::NonStabilizing {
        tried_j_prime: jp_predicted,
        order,
    })
}

/// Two Frobenius steps: y_j^N = alpha_{p,j}(t) alpha_{p,j'}(t^p)
/// y_{j''}(t^{p^2})^N mod p, with j'' the permutation applied twice.
pub fn verify_composition(
    desc: &CurveFamilyDescriptor,
    p: u64,
    j: usize,
    order: usize,
) -> Result<bool, CongruenceError> {
    let s = splitting_data(desc, p)?;
    let jp = index_permutation(&s, 1)[j];
    let jpp = index_permutation(&s, 2)[j];
    let cert_j = compute_alpha(desc, p, j, None)?;
    let cert_jp = compute_alpha(desc, p, jp, None)?;
    let n_exp = congruence_exponent(desc);
    let ring = ModRing::prime_field(p)?;
    let sols = solutions(desc, order)?
        .into_iter()
        .map(|y| y.reduce_mod(ring))
        .collect::<Result<Vec<_>, _>>()?;
    let lhs = series_pow(&sols[j], n_exp);
    let alpha_jp_tp = Series::from_poly(&cert_jp.alpha, order)
        .substitute_power(p as usize)
        .shorten(order);
    let y_jpp_tpp = sols[jpp]
        .substitute_power((p * p) as usize)
        .shorten(order);
    let rhs = Series::from_poly(&cert_j.alpha, order)
        .mul(&alpha_jp_tp)
        .mul(&series_pow(&y_jpp_tpp, n_exp));
    Ok(lhs.sub(&rhs).coeffs().iter().all(|&c| c == 0))
}

// ---------------------------------------------------------------------------
// Integrality audit
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralityReport {
    pub support: BTreeSet<u64>,
    pub allowed: BTreeSet<u64>,
    /// Primes observed beyond the allowed set; empty iff `pass`.
    pub enlargement: BTreeSet<u64>,
    pub pass: bool,
    pub order: usize,
}

/// Primes dividing any coefficient denominator among the first `order`
/// coefficients; passes iff contained in `allowed`.
pub fn verify_integrality(
    y: &Series<Rationals>,
    allowed: &BTreeSet<u64>,
    order: usize,
) -> IntegralityReport {
    let support: BTreeSet<u64> = y
        .shorten(order.min(y.order()))
        .denominator_support()
        .into_iter()
        .collect();
    let enlargement: BTreeSet<u64> = support.difference(allowed).copied().collect();
    IntegralityReport {
        pass: enlargement.is_empty(),
        support,
        allowed: allowed.clone(),
        enlargement,
        order,
    }
}

/// Katz-style mod-p solution check: the operator applied to the degree-< p
/// truncation of its solution vanishes mod (p, t^{p-2}).
pub fn katz_truncation_check(
    desc: &CurveFamilyDescriptor,
    j: usize,
    p: u64,
) -> Result<bool, CongruenceError> {
    let ring = ModRing::prime_field(p)?;
    let y = desc.operators[j]
        .frobenius_solution(p as usize)?
        .reduce_mod(ring)?;
    let op = desc.operators[j].map_ring(ring, |c| ring.reduce_rational(c))?;
    let res = op.residual(&y);
    Ok(res.coeffs().iter().all(|&c| c == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_descriptor;

    fn poly_digits(p: &Poly<ModRing>) -> Vec<u64> {
        p.coeffs().to_vec()
    }

    #[test]
    fn permutations() {
        let split = SplittingData::quadratic(SplittingType::Split);
        assert_eq!(index_permutation(&split, 1), vec![0, 1]);
        let inert = SplittingData::quadratic(SplittingType::Inert);
        assert_eq!(index_permutation(&inert, 1), vec![1, 0]);
        assert_eq!(index_permutation(&inert, 2), vec![0, 1]);
        let cubic = SplittingData {
            residue_degrees: vec![2, 1],
        };
        assert_eq!(index_permutation(&cubic, 1), vec![1, 0, 2]);
        // composition: perm(m1 + m2) = perm(m1) o perm(m2)
        for s in [&split, &inert, &cubic] {
            for m1 in 0..4 {
                for m2 in 0..4 {
                    let a = index_permutation(s, m1 + m2);
                    let b1 = index_permutation(s, m1);
                    let b2 = index_permutation(s, m2);
                    let composed: Vec<usize> = (0..s.genus()).map(|i| b1[b2[i]]).collect();
                    assert_eq!(a, composed);
                }
            }
        }
    }

    #[test]
    fn w5_degree_predictions() {
        let w5 = load_descriptor("W5").unwrap();
        // inert p = 13: J-degrees (p-3)/2 = 5 and (3p-1)/2 = 19
        let d1 = predicted_degree(&w5, 13, 0).unwrap();
        let d2 = predicted_degree(&w5, 13, 1).unwrap();
        assert_eq!((d1.j_degree, d2.j_degree), (5, 19));
        assert_eq!(d1.t_degree.unwrap().degree, 1);
        let t2 = d2.t_degree.unwrap();
        assert_eq!((t2.degree, t2.epsilon), (3, 2));
        // split p = 11: 3(p-1)/2 = 15 and (p-1)/2 = 5
        let d1 = predicted_degree(&w5, 11, 0).unwrap();
        let d2 = predicted_degree(&w5, 11, 1).unwrap();
        assert_eq!((d1.j_degree, d2.j_degree), (15, 5));
        assert_eq!(d1.t_degree.unwrap().degree, 3);
        assert_eq!(d2.t_degree.unwrap().degree, 1);
    }

    #[test]
    fn alpha_p11() {
        let w5 = load_descriptor("W5").unwrap();
        // (1-t)(3t+1)^2 = 1 + 5t + 3t^2 - 9t^3
        let c1 = compute_alpha(&w5, 11, 0, None).unwrap();
        assert_eq!(poly_digits(&c1.alpha), vec![1, 5, 3, 11 - 9]);
        assert!(c1.degree_match && !c1.permutation_mismatch);
        let c2 = compute_alpha(&w5, 11, 1, None).unwrap();
        assert_eq!(poly_digits(&c2.alpha), vec![1, 10]);
        assert_eq!(c2.j_prime, 1);
    }

    #[test]
    fn alpha_p13() {
        let w5 = load_descriptor("W5").unwrap();
        let c1 = compute_alpha(&w5, 13, 0, None).unwrap();
        assert_eq!(poly_digits(&c1.alpha), vec![1, 12]);
        assert_eq!(c1.j_prime, 1);
        // 9^{-1} (1-t)(3-t)^2 normalized to constant term 1
        let c2 = compute_alpha(&w5, 13, 1, None).unwrap();
        assert_eq!(poly_digits(&c2.alpha), vec![1, 7, 8, 10]);
        assert_eq!(c2.j_prime, 0);
        assert!(c2.degree_match);
    }

    #[test]
    fn bad_prime_rejected() {
        let w5 = load_descriptor("W5").unwrap();
        assert!(matches!(
            compute_alpha(&w5, 5, 0, None),
            Err(CongruenceError::BadPrime(5, _))
        ));
    }

    #[test]
    fn composition_small() {
        let w5 = load_descriptor("W5").unwrap();
        assert!(verify_composition(&w5, 11, 1, 260).unwrap());
    }

    #[test]
    fn integrality_reports() {
        let w5 = load_descriptor("W5").unwrap();
        let y = w5.operators[0].frobenius_solution(120).unwrap();
        let rep = verify_integrality(&y, &w5.bad_primes, 120);
        assert!(rep.pass, "support {:?}", rep.support);
        let strict: BTreeSet<u64> = [3].into_iter().collect();
        let rep = verify_integrality(&y, &strict, 120);
        assert!(!rep.pass && rep.enlargement.contains(&2));
    }

    #[test]
    fn katz_truncation() {
        let w5 = load_descriptor("W5").unwrap();
        assert!(katz_truncation_check(&w5, 0, 13).unwrap());
        assert!(katz_truncation_check(&w5, 1, 11).unwrap());
    }
}
