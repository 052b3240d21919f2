//! Randomized algebraic-law checks for the exact-arithmetic layers.

use num::rational::BigRational;
use num::{BigInt, One, Zero};
use proptest::prelude::*;

use pfkit::poly::Poly;
use pfkit::ring::{rat, Fq, ModRing, Rationals, Ring};
use pfkit::series::Series;

fn fq_poly(p: u64) -> impl Strategy<Value = Poly<Fq>> {
    prop::collection::vec(0..p, 0..8).prop_map(move |cs| {
        let f = Fq::prime_field(p).unwrap();
        Poly::new(f.clone(), cs.into_iter().map(|c| f.embed(c)).collect())
    })
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-40i64..40, 1i64..20).prop_map(|(n, d)| rat(n, d))
}

fn rat_series(len: usize) -> impl Strategy<Value = Series<Rationals>> {
    prop::collection::vec(rational(), len..=len)
        .prop_map(|cs| Series::new(Rationals, cs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_ring_distributivity(a in fq_poly(13), b in fq_poly(13), c in fq_poly(13)) {
        let lhs = a.mul(&b.add(&c));
        let rhs = a.mul(&b).add(&a.mul(&c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poly_divmod_roundtrip(a in fq_poly(7), b in fq_poly(7)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.divmod(&b).unwrap();
        prop_assert_eq!(q.mul(&b).add(&r), a.clone());
        if let (Some(dr), Some(db)) = (r.degree(), b.degree()) {
            prop_assert!(dr < db);
        }
    }

    #[test]
    fn poly_gcd_divides_both(a in fq_poly(5), b in fq_poly(5)) {
        prop_assume!(!a.is_zero() || !b.is_zero());
        let g = a.gcd(&b).unwrap();
        prop_assert!(!g.is_zero());
        prop_assert!(a.rem(&g).unwrap().is_zero());
        prop_assert!(b.rem(&g).unwrap().is_zero());
    }

    #[test]
    fn poly_derivative_is_leibniz(a in fq_poly(13), b in fq_poly(13)) {
        let lhs = a.mul(&b).derivative();
        let rhs = a.derivative().mul(&b).add(&a.mul(&b.derivative()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn frobenius_is_additive(p in prop::sample::select(vec![3u64, 5, 7]), x in 0u64..7, y in 0u64..7) {
        let f = pfkit::ring::build_extension_field(p, 2).unwrap();
        let a = f.from_index((x % (p * p)) as usize);
        let b = f.from_index((y % (p * p)) as usize);
        let lhs = f.frobenius(&f.add(&a, &b));
        let rhs = f.add(&f.frobenius(&a), &f.frobenius(&b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn series_reciprocal_roundtrip(mut s in rat_series(10)) {
        // force an invertible constant term
        let mut cs = s.coeffs().to_vec();
        if cs[0].is_zero() {
            cs[0] = BigRational::one();
            s = Series::new(Rationals, cs);
        }
        let inv = s.reciprocal().unwrap();
        prop_assert_eq!(s.mul(&inv), Series::one(Rationals, 10));
    }

    #[test]
    fn series_pow_rational_additive(s in rat_series(8)) {
        let mut cs = s.coeffs().to_vec();
        cs[0] = BigRational::one();
        let s = Series::new(Rationals, cs);
        let lhs = s.pow_rational(1, 2).unwrap().mul(&s.pow_rational(1, 3).unwrap());
        let rhs = s.pow_rational(5, 6).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn series_substitution_is_multiplicative(a in rat_series(6), b in rat_series(6), k in 2usize..4) {
        let lhs = a.mul(&b).substitute_power(k);
        let rhs = a.substitute_power(k).mul(&b.substitute_power(k));
        prop_assert_eq!(lhs.shorten(6 * k), rhs.shorten(6 * k));
    }

    #[test]
    fn reduction_is_a_ring_map(a in rational(), b in rational()) {
        let ring = ModRing::prime_field(101).unwrap();
        let ra = ring.reduce_rational(&a).unwrap();
        let rb = ring.reduce_rational(&b).unwrap();
        let sum = ring.reduce_rational(&(&a + &b)).unwrap();
        let prod = ring.reduce_rational(&(&a * &b)).unwrap();
        prop_assert_eq!(sum, ring.add(&ra, &rb));
        prop_assert_eq!(prod, ring.mul(&ra, &rb));
    }

    #[test]
    fn truncation_commutes_with_reduction(cs in prop::collection::vec(rational(), 12)) {
        // denominators above are supported on primes < 20, so 101 never divides
        let s = Series::new(Rationals, cs);
        let ring = ModRing::prime_field(101).unwrap();
        let reduced = s.reduce_mod(ring).unwrap();
        let a = reduced.truncate(7).unwrap();
        let b = s.truncate(7).unwrap();
        for i in 0..7 {
            prop_assert_eq!(a.coeff(i), ring.reduce_rational(&b.coeff(i)).unwrap());
        }
    }

    #[test]
    fn squarefree_part_divides_and_is_squarefree(a in fq_poly(5)) {
        prop_assume!(!a.is_zero());
        let s = a.squarefree_part().unwrap();
        prop_assert!(a.rem(&s).unwrap().is_zero());
        let g = s.gcd(&s.derivative()).unwrap();
        prop_assert_eq!(g.degree(), Some(0));
    }

    #[test]
    fn big_rational_exact_no_drift(n in -1000i64..1000, d in 1i64..1000) {
        // sanity for the exactness premise: (n/d) * d == n
        let q = BigRational::new(BigInt::from(n), BigInt::from(d));
        prop_assert_eq!(q * BigInt::from(d), BigRational::from_integer(BigInt::from(n)));
    }
}
