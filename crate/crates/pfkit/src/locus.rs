//! Non-ordinary / superspecial / supersingular loci from series truncation:
//! lcm/gcd pipelines in both Hauptmodul conventions, squarefree reduction,
//! the inert/split classification, and exact cardinality bounds.

use crate::catalog::{CurveFamilyDescriptor, PointClass};
use crate::congruence::{
    index_permutation, predicted_degree, series_pow, solutions, splitting_data, CongruenceError,
};
use crate::poly::{Poly, PolyError};
use crate::ring::{build_extension_field, Fq, ModRing, Ring, RingError, SplittingType};
use num::rational::BigRational;
use num::{BigInt, One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LocusError {
    #[error("predicted alpha degree {degree} is not below p = {p}")]
    DegreesTooLarge { degree: i64, p: u64 },
    #[error("truncation has nonzero coefficients beyond the predicted degree {predicted} (observed {observed}); p may lie in S or the descriptor is inconsistent")]
    DanglingCoefficients { predicted: i64, observed: i64 },
    #[error("family '{0}' does not carry the data required for this pipeline")]
    WrongConvention(String),
    #[error("ramified prime {0} is not classified")]
    Ramified(u64),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

fn truncated_powers(
    desc: &CurveFamilyDescriptor,
    p: u64,
    n_exp: u32,
) -> Result<Vec<Poly<ModRing>>, LocusError> {
    if desc.bad_primes.contains(&p) {
        return Err(CongruenceError::BadPrime(p, desc.name.clone()).into());
    }
    let ring = ModRing::prime_field(p)?;
    let sols = solutions(desc, p as usize)?;
    let mut out = vec![];
    for y in &sols {
        let reduced = y.reduce_mod(ring).map_err(CongruenceError::from)?;
        let powered = series_pow(&reduced, n_exp);
        out.push(
            powered
                .truncate(p as usize)
                .expect("order p by construction"),
        );
    }
    Ok(out)
}

/// no_p = monic lcm over j of the order-p truncations of y_j^N, for
/// families whose Hauptmodul has zero and pole at cusps.
pub fn nonordinary_poly_cusp_pole(
    desc: &CurveFamilyDescriptor,
    p: u64,
) -> Result<Poly<ModRing>, LocusError> {
    cusp_pole_combine(desc, p, true)
}

/// sp_p = monic gcd over j of the same truncations.
pub fn superspecial_poly(
    desc: &CurveFamilyDescriptor,
    p: u64,
) -> Result<Poly<ModRing>, LocusError> {
    cusp_pole_combine(desc, p, false)
}

fn cusp_pole_combine(
    desc: &CurveFamilyDescriptor,
    p: u64,
    use_lcm: bool,
) -> Result<Poly<ModRing>, LocusError> {
    if desc.hauptmodul.pole_at != PointClass::Cusp {
        return Err(LocusError::WrongConvention(desc.name.clone()));
    }
    for j in 0..desc.genus {
        let pred = predicted_degree(desc, p, j)?;
        if pred.j_degree >= p as i64 {
            return Err(LocusError::DegreesTooLarge {
                degree: pred.j_degree,
                p,
            });
        }
    }
    let parts = truncated_powers(desc, p, desc.n_exponent())?;
    let mut acc = parts[0].clone();
    for part in &parts[1..] {
        acc = if use_lcm {
            acc.lcm(part)?
        } else {
            acc.gcd(part)?
        };
    }
    Ok(acc.monic()?)
}

/// Per-component data of the triangle pipeline.
#[derive(Debug, Clone)]
pub struct TriangleComponent {
    pub j: usize,
    /// Truncation [y_j(t)^n]_p.
    pub p_poly: Poly<ModRing>,
    /// alpha_{p,j}(J) = J^{n eps} * reverse(P_j)^m.
    pub alpha_j: Poly<ModRing>,
    pub predicted_t_degree: i64,
    pub predicted_j_degree: i64,
    pub epsilon: u32,
}

#[derive(Debug, Clone)]
pub struct TriangleLocus {
    pub p: u64,
    pub splitting: SplittingType,
    pub components: Vec<TriangleComponent>,
    /// lcm of the alpha_j (non-ordinary locus, in J).
    pub no_poly: Poly<ModRing>,
    /// gcd of the alpha_j (superspecial-side locus, in J).
    pub sp_poly: Poly<ModRing>,
    /// Squarefree supersingular polynomial per the inert/split rule.
    pub ss_poly: Poly<ModRing>,
}

/// The t = 1/J pipeline for triangle families (Hauptmodul pole at the
/// order-m elliptic point).
pub fn triangle_locus_poly(
    desc: &CurveFamilyDescriptor,
    p: u64,
) -> Result<TriangleLocus, LocusError> {
    let (n, m) = desc
        .triangle
        .ok_or_else(|| LocusError::WrongConvention(desc.name.clone()))?;
    let split = splitting_data(desc, p)?;
    let splitting = if split.n_p() == desc.genus {
        SplittingType::Split
    } else {
        SplittingType::Inert
    };
    let parts = truncated_powers(desc, p, n)?;
    let ring = ModRing::prime_field(p)?;
    let mut components = vec![];
    for (j, pj) in parts.iter().enumerate() {
        let pred = predicted_degree(desc, p, j)?;
        let t_deg = pred.t_degree.as_ref().expect("triangle family").degree;
        let eps = pred.t_degree.as_ref().unwrap().epsilon;
        let observed = pj.degree().map(|d| d as i64).unwrap_or(-1);
        if observed != t_deg {
            return Err(LocusError::DanglingCoefficients {
                predicted: t_deg,
                observed,
            });
        }
        let reversed = pj.reverse(observed as usize)?;
        let mut alpha_j = reversed.pow(m as usize);
        let shift = (n * eps) as usize;
        if shift > 0 {
            alpha_j = alpha_j.mul(&Poly::monomial(ring, ring.one(), shift));
        }
        debug_assert_eq!(
            alpha_j.degree().map(|d| d as i64),
            Some(pred.j_degree),
            "J-degree bookkeeping"
        );
        components.push(TriangleComponent {
            j,
            p_poly: pj.clone(),
            alpha_j,
            predicted_t_degree: t_deg,
            predicted_j_degree: pred.j_degree,
            epsilon: eps,
        });
    }
    let mut no_poly = components[0].alpha_j.clone();
    let mut sp_poly = components[0].alpha_j.clone();
    for c in &components[1..] {
        no_poly = no_poly.lcm(&c.alpha_j)?;
        sp_poly = sp_poly.gcd(&c.alpha_j)?;
    }
    no_poly = no_poly.monic()?;
    sp_poly = sp_poly.monic()?;
    let ss_source = match splitting {
        SplittingType::Inert => &no_poly,
        SplittingType::Split => &sp_poly,
        SplittingType::Ramified => unreachable!(),
    };
    let ss_poly = ss_source.squarefree_part()?;
    Ok(TriangleLocus {
        p,
        splitting,
        components,
        no_poly,
        sp_poly,
        ss_poly,
    })
}

/// Attach the supersingular polynomial for a cusp-pole genus-2 family, or
/// ss = no for genus 1.
pub fn classify_locus(
    splitting: SplittingType,
    genus: usize,
    no_poly: &Poly<ModRing>,
    sp_poly: &Poly<ModRing>,
) -> Result<Poly<ModRing>, LocusError> {
    if genus == 1 {
        return Ok(no_poly.squarefree_part()?);
    }
    match splitting {
        SplittingType::Inert => Ok(no_poly.squarefree_part()?),
        SplittingType::Split => Ok(sp_poly.squarefree_part()?),
        SplittingType::Ramified => Err(LocusError::Ramified(0)),
    }
}

// ---------------------------------------------------------------------------
// Cardinality bounds
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub p: u64,
    pub n_p: usize,
    pub r_elliptic: usize,
    pub no_lower: i64,
    pub no_upper: i64,
    /// Alternative upper bound with the sum taken inside a single floor;
    /// reported when it differs from `no_upper`.
    pub no_upper_single_floor: i64,
    /// Genus-2 refinements (per splitting type), when applicable.
    pub ss_lower: Option<i64>,
    pub ss_upper: Option<i64>,
    pub sp_upper: Option<i64>,
}

fn floor_rat(x: &BigRational) -> i64 {
    x.floor().to_integer().to_i64().expect("desk-scale bound")
}

pub fn cardinality_bounds(
    desc: &CurveFamilyDescriptor,
    p: u64,
) -> Result<BoundsReport, CongruenceError> {
    let s = splitting_data(desc, p)?;
    let n_p = s.n_p();
    let r = desc.elliptic_count();
    let perm = index_permutation(&s, 1);
    let half = -&desc.euler_char / BigRational::from_integer(BigInt::from(2));
    let p_rat = BigRational::from_integer(BigInt::from(p));
    let diffs: Vec<BigRational> = (0..desc.genus)
        .map(|j| &p_rat * &desc.lyapunov[perm[j]] - &desc.lyapunov[j])
        .collect();
    let max_diff = diffs.iter().max().unwrap().clone();
    let no_lower = floor_rat(&(&half * &max_diff));
    let sum_of_floors: i64 = diffs.iter().map(|d| floor_rat(&(&half * d))).sum();
    let no_upper = n_p as i64 * sum_of_floors + r as i64;
    let total: BigRational = diffs.iter().fold(BigRational::zero(), |a, b| a + b);
    let no_upper_single_floor = n_p as i64 * floor_rat(&(&half * &total)) + r as i64;

    let (mut ss_lower, mut ss_upper, mut sp_upper) = (None, None, None);
    if desc.genus == 2 {
        let lam2 = &desc.lyapunov[1];
        let one = BigRational::one();
        let inert = n_p == 1;
        let common_upper = n_p as i64
            * floor_rat(&((&p_rat - &one) * (&one + lam2) * &half))
            + r as i64;
        if inert {
            let lo = floor_rat(&((&p_rat - lam2) * &half));
            ss_lower = Some(lo);
            ss_upper = Some(common_upper);
            sp_upper = Some(lo + r as i64);
        } else {
            // split: the displayed no-bounds refine part 1; the ss bound is
            // the lambda_2-weighted one
            ss_upper = Some(floor_rat(&(lam2 * (&p_rat - &one) * &half)) + r as i64);
        }
    }
    Ok(BoundsReport {
        p,
        n_p,
        r_elliptic: r,
        no_lower,
        no_upper,
        no_upper_single_floor,
        ss_lower,
        ss_upper,
        sp_upper,
    })
}

// ---------------------------------------------------------------------------
// Factorization / root bookkeeping for reports
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RootTable {
    /// (irreducible-factor degree, product of those factors, roots of that
    /// product in F_{p^degree} as index lists).
    pub by_degree: Vec<(usize, Poly<Fq>, Vec<Vec<u64>>)>,
    /// Total number of distinct geometric roots.
    pub point_count: usize,
}

/// Distinct-degree factorization plus roots in the matching extensions, for
/// a squarefree polynomial over F_p.
pub fn root_table(poly: &Poly<ModRing>, p: u64) -> Result<RootTable, LocusError> {
    let fp = build_extension_field(p, 1)?;
    let coeffs = poly.coeffs().iter().map(|&c| fp.embed(c)).collect();
    let over_fq = Poly::new(fp, coeffs);
    let ddf = over_fq.distinct_degree_factorization()?;
    let mut by_degree = vec![];
    let mut point_count = 0;
    for (deg, part) in ddf {
        let field = build_extension_field(p, deg)?;
        let roots = part
            .roots_in_field(&field)?
            .into_iter()
            .map(|(r, _)| r)
            .collect::<Vec<_>>();
        point_count += part.degree().unwrap_or(0);
        by_degree.push((deg, part, roots));
    }
    Ok(RootTable {
        by_degree,
        point_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_descriptor;

    fn digits(p: &Poly<ModRing>) -> Vec<u64> {
        p.coeffs().to_vec()
    }

    #[test]
    fn w5_ss13() {
        let w5 = load_descriptor("W5").unwrap();
        let locus = triangle_locus_poly(&w5, 13).unwrap();
        assert_eq!(locus.splitting, SplittingType::Inert);
        // J(J-1)(J-9) = J^3 - 10 J^2 + 9 J
        assert_eq!(digits(&locus.ss_poly), vec![0, 9, 3, 1]);
        let table = root_table(&locus.ss_poly, 13).unwrap();
        assert_eq!(table.point_count, 3);
        assert_eq!(table.by_degree.len(), 1);
        let roots: Vec<u64> = table.by_degree[0].2.iter().map(|r| r[0]).collect();
        assert_eq!(roots, vec![0, 1, 9]);
    }

    #[test]
    fn w5_ss37() {
        let w5 = load_descriptor("W5").unwrap();
        let locus = triangle_locus_poly(&w5, 37).unwrap();
        // J(J-1)(J+16)(J^2+J+8)(J^3+22J^2+J+25)
        let ring = ModRing::prime_field(37).unwrap();
        let f = |coeffs: &[i64]| {
            Poly::new(
                ring,
                coeffs.iter().map(|&c| ring.from_i64(c)).collect::<Vec<_>>(),
            )
        };
        let expected = f(&[0, 1])
            .mul(&f(&[-1, 1]))
            .mul(&f(&[16, 1]))
            .mul(&f(&[8, 1, 1]))
            .mul(&f(&[25, 1, 22, 1]));
        assert_eq!(locus.ss_poly, expected.monic().unwrap());
        // a cubic irreducible factor appears
        let table = root_table(&locus.ss_poly, 37).unwrap();
        assert!(table.by_degree.iter().any(|(d, _, _)| *d == 3));
    }

    #[test]
    fn legendre_p7() {
        let leg = load_descriptor("Legendre").unwrap();
        let no = nonordinary_poly_cusp_pole(&leg, 7).unwrap();
        // 1 + 2 lambda + 2 lambda^2 + lambda^3 (monic already)
        assert_eq!(digits(&no), vec![1, 2, 2, 1]);
        let table = root_table(&no.squarefree_part().unwrap(), 7).unwrap();
        let roots: Vec<u64> = table.by_degree[0].2.iter().map(|r| r[0]).collect();
        assert_eq!(roots, vec![2, 4, 6]);
        // g = 1: sp = no
        assert_eq!(superspecial_poly(&leg, 7).unwrap(), no);
    }

    #[test]
    fn sl2z_bounds() {
        let sl2z = load_descriptor("SL2Z").unwrap();
        let b = cardinality_bounds(&sl2z, 11).unwrap();
        assert_eq!(b.no_upper, 2);
        assert_eq!(b.no_lower, 0);
    }

    #[test]
    fn w5_bounds_within() {
        let w5 = load_descriptor("W5").unwrap();
        for p in [11u64, 13] {
            let locus = triangle_locus_poly(&w5, p).unwrap();
            let b = cardinality_bounds(&w5, p).unwrap();
            let ss_count = locus.ss_poly.degree().unwrap() as i64;
            match locus.splitting {
                SplittingType::Inert => {
                    assert!(b.ss_lower.unwrap() <= ss_count && ss_count <= b.ss_upper.unwrap());
                }
                SplittingType::Split => {
                    assert!(ss_count <= b.ss_upper.unwrap());
                    let no_count =
                        locus.no_poly.squarefree_part().unwrap().degree().unwrap() as i64;
                    assert!(b.no_lower <= no_count && no_count <= b.no_upper);
                }
                SplittingType::Ramified => unreachable!(),
            }
        }
    }
}
