//! Absolute Igusa invariants restricted to the quintic family's base curve:
//! exact evaluation over Q(sqrt(5)), evaluation over the pair ring
//! F_p[s]/(s^2 - 5), and the table of invariants at supersingular
//! Hauptmodul values.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::catalog::CurveFamilyDescriptor;
use crate::locus::{root_table, triangle_locus_poly, LocusError};
use crate::oracle::{QuadElem2, QuadExtRing};
use crate::poly::{Poly, PolyError};
use crate::ring::{
    build_extension_field, inv_mod, mul_mod, splitting_type, Fq, Ring, RingError, SplittingType,
};

#[derive(Debug, Error)]
pub enum IgusaError {
    #[error("characteristic {0} is rejected (2, 3, 5 and 7 divide the scaling constants)")]
    BadCharacteristic(u64),
    #[error("sqrt(5) not found in the requested field")]
    SqrtNotFound,
    #[error(transparent)]
    Locus(#[from] LocusError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// The three restricted invariants at a Hauptmodul value J, in any ring in
/// which 2, 3 and 7 are invertible; `sqrt5` is the chosen image of sqrt(5):
/// J1 = 7^5/2^7 J^2, J2 = 7^3/2^7 J^2, J3 = 7^2/(2^7*3) J (5J - 432 sqrt5).
pub fn igusa_restrict<R: Ring>(
    ring: &R,
    sqrt5: &R::Elem,
    j: &R::Elem,
) -> Result<[R::Elem; 3], IgusaError> {
    if let Some(p) = ring.characteristic() {
        if matches!(p, 2 | 3 | 5 | 7) {
            return Err(IgusaError::BadCharacteristic(p));
        }
    }
    let c1 = ring.div(&ring.from_i64(16807), &ring.from_i64(128))?;
    let c2 = ring.div(&ring.from_i64(343), &ring.from_i64(128))?;
    let c3 = ring.div(&ring.from_i64(49), &ring.from_i64(384))?;
    let j_sq = ring.mul(j, j);
    let j1 = ring.mul(&c1, &j_sq);
    let j2 = ring.mul(&c2, &j_sq);
    let inner = ring.sub(
        &ring.mul(&ring.from_i64(5), j),
        &ring.mul(&ring.from_i64(432), sqrt5),
    );
    let j3 = ring.mul(&c3, &ring.mul(j, &inner));
    Ok([j1, j2, j3])
}

/// The pair ring F_p[s]/(s^2 - 5) together with the splitting behavior of p
/// in Q(sqrt(5)). sqrt(5) is kept formal even when 5 is a square mod p, so
/// the symbolic a + b sqrt(5) form of a table entry survives.
pub fn pair_ring(p: u64) -> Result<(QuadExtRing, SplittingType), IgusaError> {
    let st = splitting_type(p, 5)?;
    if st == SplittingType::Ramified {
        return Err(IgusaError::BadCharacteristic(p));
    }
    let base = Fq::prime_field(p)?;
    let xi = base.embed(5);
    Ok((QuadExtRing::new(base, xi, st == SplittingType::Inert), st))
}

/// Coordinates (a, b) of a + b sqrt(5) in the pair ring over a prime field.
pub fn pair_coord(e: &QuadElem2) -> (u64, u64) {
    (e.0[0], e.1[0])
}

fn conj_coord(p: u64, c: (u64, u64)) -> (u64, u64) {
    (c.0, if c.1 == 0 { 0 } else { p - c.1 })
}

/// Flattened triple with the Galois representative chosen deterministically:
/// the lexicographically smaller of (a_i, b_i)_i and its sqrt(5) -> -sqrt(5)
/// conjugate.
pub fn canonical_triple(p: u64, t: &[(u64, u64); 3]) -> [(u64, u64); 3] {
    let conj = [
        conj_coord(p, t[0]),
        conj_coord(p, t[1]),
        conj_coord(p, t[2]),
    ];
    if conj < *t {
        conj
    } else {
        *t
    }
}

#[derive(Debug, Clone)]
pub struct IgusaPoint {
    /// Hauptmodul value as a + b sqrt(5).
    pub j: (u64, u64),
    pub triple: [(u64, u64); 3],
    /// For split p: the triple evaluated at the smaller concrete residue
    /// root of x^2 = 5.
    pub concrete: Option<[u64; 3]>,
}

#[derive(Debug, Clone)]
pub struct IgusaTable {
    pub p: u64,
    pub splitting: SplittingType,
    /// One point per Galois orbit, sorted deterministically.
    pub points: Vec<IgusaPoint>,
    /// Factors whose roots cannot be written as a + b sqrt(5) over F_p.
    pub skipped: Vec<String>,
}

/// Express a supersingular J-root in the basis {1, sqrt(5)}: degree-1 roots
/// directly, degree-2 roots (inert p only) by solving against the smallest
/// root of x^2 - 5 in the canonical F_{p^2}.
fn j_to_pair(
    p: u64,
    st: SplittingType,
    deg: usize,
    coords: &[u64],
) -> Result<Option<(u64, u64)>, IgusaError> {
    match deg {
        1 => Ok(Some((coords[0], 0))),
        2 if st == SplittingType::Inert => {
            let field = build_extension_field(p, 2)?;
            let prime = Fq::prime_field(p)?;
            let x2m5 = Poly::new(
                prime.clone(),
                vec![prime.embed(p - 5 % p), prime.embed(0), prime.embed(1)],
            );
            let mut roots = x2m5.roots_in_field(&field)?;
            roots.sort_by_key(|(r, _)| field.index(r));
            let s = roots.first().ok_or(IgusaError::SqrtNotFound)?.0.clone();
            if s[1] == 0 {
                return Err(IgusaError::SqrtNotFound);
            }
            let b = mul_mod(coords[1], inv_mod(s[1], p).unwrap(), p);
            let a = (coords[0] + p - mul_mod(b, s[0], p)) % p;
            Ok(Some((a, b)))
        }
        _ => Ok(None),
    }
}

/// Invariants of every supersingular fiber of the family whose J-value can
/// be written as a + b sqrt(5) over F_p, one row per Galois orbit.
pub fn igusa_table(desc: &CurveFamilyDescriptor, p: u64) -> Result<IgusaTable, IgusaError> {
    if matches!(p, 2 | 3 | 5 | 7) {
        return Err(IgusaError::BadCharacteristic(p));
    }
    let (ring, st) = pair_ring(p)?;
    let sqrt5 = ring.gen_s();
    let locus = triangle_locus_poly(desc, p)?;
    let rt = root_table(&locus.ss_poly, p)?;
    // concrete sqrt(5) for split p: the smaller residue root
    let concrete_root = if st == SplittingType::Split {
        (1..p).find(|r| mul_mod(*r, *r, p) == 5 % p)
    } else {
        None
    };
    let mut seen = BTreeSet::new();
    let mut points = vec![];
    let mut skipped = vec![];
    for (deg, _, roots) in &rt.by_degree {
        for coords in roots {
            let Some(j_pair) = j_to_pair(p, st, *deg, coords)? else {
                skipped.push(format!(
                    "degree-{} factor root: J is not of the form a + b*sqrt(5) over F_{}",
                    deg, p
                ));
                continue;
            };
            let j_elem = (vec![j_pair.0], vec![j_pair.1]);
            let triple_e = igusa_restrict(&ring, &sqrt5, &j_elem)?;
            let triple = [
                pair_coord(&triple_e[0]),
                pair_coord(&triple_e[1]),
                pair_coord(&triple_e[2]),
            ];
            let canon = canonical_triple(p, &triple);
            let key = (canonical_pair(p, j_pair), canon);
            if !seen.insert(key) {
                continue;
            }
            let concrete = concrete_root.map(|r| {
                [
                    (triple[0].0 + mul_mod(triple[0].1, r, p)) % p,
                    (triple[1].0 + mul_mod(triple[1].1, r, p)) % p,
                    (triple[2].0 + mul_mod(triple[2].1, r, p)) % p,
                ]
            });
            points.push(IgusaPoint {
                j: j_pair,
                triple: canon,
                concrete,
            });
        }
    }
    points.sort_by_key(|pt| (pt.triple, pt.j));
    skipped.sort();
    skipped.dedup();
    Ok(IgusaTable {
        p,
        splitting: st,
        points,
        skipped,
    })
}

fn canonical_pair(p: u64, c: (u64, u64)) -> (u64, u64) {
    let conj = conj_coord(p, c);
    if conj < c {
        conj
    } else {
        c
    }
}

/// Compare a computed table against expected triples, as sets of Galois
/// orbits.
pub fn triples_match(table: &IgusaTable, expected: &[[(u64, u64); 3]]) -> bool {
    let p = table.p;
    let got: BTreeSet<_> = table
        .points
        .iter()
        .map(|pt| canonical_triple(p, &pt.triple))
        .collect();
    let want: BTreeSet<_> = expected.iter().map(|t| canonical_triple(p, t)).collect();
    got == want
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_descriptor;
    use crate::ring::{ModRing, QuadField, Rationals};
    use num::BigRational;

    #[test]
    fn restrict_at_zero_and_the_elliptic_point() {
        let (ring, _) = pair_ring(11).unwrap();
        let s = ring.gen_s();
        let zero = igusa_restrict(&ring, &s, &ring.zero()).unwrap();
        assert!(zero.iter().all(|e| ring.is_zero(e)));
        let one = igusa_restrict(&ring, &s, &ring.one()).unwrap();
        let triple = [
            pair_coord(&one[0]),
            pair_coord(&one[1]),
            pair_coord(&one[2]),
        ];
        assert_eq!(triple, [(3, 0), (5, 0), (8, 4)]);
    }

    #[test]
    fn j1_is_49_times_j2() {
        let (ring, _) = pair_ring(13).unwrap();
        let s = ring.gen_s();
        for a in 0..13u64 {
            let j = (vec![a], vec![(a * 3 + 1) % 13]);
            let t = igusa_restrict(&ring, &s, &j).unwrap();
            assert_eq!(t[0], ring.mul(&ring.from_i64(49), &t[1]));
        }
    }

    #[test]
    fn restriction_commutes_with_reduction() {
        let qf = QuadField::new(5);
        let j_q = qf.from_rational(BigRational::from_integer(9.into()));
        let t_q = igusa_restrict(&qf, &qf.sqrt_gen(), &j_q).unwrap();
        for p in [11u64, 13, 17, 19, 23] {
            let mr = ModRing::prime_field(p).unwrap();
            let (ring, _) = pair_ring(p).unwrap();
            let s = ring.gen_s();
            let j_p = (vec![9 % p], vec![0]);
            let t_p = igusa_restrict(&ring, &s, &j_p).unwrap();
            for (tq, tp) in t_q.iter().zip(t_p.iter()) {
                let a = mr.reduce_rational(&tq.a).unwrap();
                let b = mr.reduce_rational(&tq.b).unwrap();
                assert_eq!(pair_coord(tp), (a, b));
            }
        }
        // also sanity over the rationals ring for a rational J without sqrt5
        let r = Rationals;
        assert!(igusa_restrict(&r, &r.zero(), &r.one()).is_ok());
    }

    #[test]
    fn tables_for_the_four_small_primes() {
        let desc = load_descriptor("W5").unwrap();
        let expected_11 = [[(3, 0), (5, 0), (8, 4)]];
        let expected_13 = [
            [(0, 0), (0, 0), (0, 0)],
            [(1, 0), (4, 0), (9, 5)],
            [(3, 0), (12, 0), (1, 6)],
        ];
        let expected_17 = [
            [(0, 0), (0, 0), (0, 0)],
            [(5, 0), (6, 0), (16, 15)],
            [(3, 0), (7, 0), (13, 13)],
            [(6, 0), (14, 0), (9, 7)],
        ];
        let expected_19 = [
            [(0, 0), (0, 0), (0, 0)],
            [(13, 0), (15, 0), (9, 9)],
        ];
        let t11 = igusa_table(&desc, 11).unwrap();
        assert!(triples_match(&t11, &expected_11), "p=11: {:?}", t11.points);
        let t13 = igusa_table(&desc, 13).unwrap();
        assert!(triples_match(&t13, &expected_13), "p=13: {:?}", t13.points);
        let t17 = igusa_table(&desc, 17).unwrap();
        assert!(triples_match(&t17, &expected_17), "p=17: {:?}", t17.points);
        let t19 = igusa_table(&desc, 19).unwrap();
        assert!(triples_match(&t19, &expected_19), "p=19: {:?}", t19.points);
    }

    #[test]
    fn bad_characteristics_rejected() {
        assert!(matches!(
            pair_ring(5),
            Err(IgusaError::BadCharacteristic(5))
        ));
        let (ring, _) = pair_ring(11).unwrap();
        let _ = ring;
        let desc = load_descriptor("W5").unwrap();
        assert!(igusa_table(&desc, 7).is_err());
    }
}
