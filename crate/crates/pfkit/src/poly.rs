//! Univariate polynomials over any exact coefficient ring: arithmetic,
//! gcd/lcm, squarefree decomposition, distinct-degree factorization, root
//! enumeration, and coefficient reversal.
//!
//! Representation is dense ascending with no trailing zero coefficients; the
//! zero polynomial is the empty coefficient list (degree is `None`).

use crate::ring::{Fq, Ring, RingError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("operation requires a field coefficient ring")]
    NotAField,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("zero polynomial rejected")]
    ZeroInput,
    #[error("input must be squarefree")]
    NotSquarefree,
    #[error("reversal degree {given} is smaller than the polynomial degree {need}")]
    ReverseDegreeTooSmall { given: usize, need: usize },
    #[error("field of order {0} exceeds the enumeration envelope")]
    FieldTooLarge(u64),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<R: Ring> {
    pub ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> Poly<R> {
    pub fn new(ring: R, mut coeffs: Vec<R::Elem>) -> Self {
        while coeffs.last().map(|c| ring.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { ring, coeffs }
    }

    pub fn zero(ring: R) -> Self {
        Poly {
            ring,
            coeffs: vec![],
        }
    }

    pub fn constant(ring: R, c: R::Elem) -> Self {
        Poly::new(ring, vec![c])
    }

    pub fn one(ring: R) -> Self {
        let c = ring.one();
        Poly::constant(ring, c)
    }

    pub fn monomial(ring: R, c: R::Elem, k: usize) -> Self {
        let mut coeffs = vec![ring.zero(); k];
        coeffs.push(c);
        Poly::new(ring, coeffs)
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R::Elem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn leading(&self) -> Option<&R::Elem> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.ring.add(&self.coeff(i), &other.coeff(i)))
            .collect();
        Poly::new(self.ring.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.ring.sub(&self.coeff(i), &other.coeff(i)))
            .collect();
        Poly::new(self.ring.clone(), coeffs)
    }

    pub fn neg(&self) -> Self {
        Poly::new(
            self.ring.clone(),
            self.coeffs.iter().map(|c| self.ring.neg(c)).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.ring.clone());
        }
        let mut coeffs = vec![self.ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = self.ring.add(&coeffs[i + j], &self.ring.mul(a, b));
            }
        }
        Poly::new(self.ring.clone(), coeffs)
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        Poly::new(
            self.ring.clone(),
            self.coeffs.iter().map(|a| self.ring.mul(a, c)).collect(),
        )
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Poly::one(self.ring.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &R::Elem) -> R::Elem {
        let mut acc = self.ring.zero();
        for c in self.coeffs.iter().rev() {
            acc = self.ring.add(&self.ring.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.ring.mul(&self.ring.from_i64(i as i64), c))
            .collect();
        Poly::new(self.ring.clone(), coeffs)
    }

    /// Monic normalization (field coefficients).
    pub fn monic(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let li = self.ring.inv(self.leading().unwrap())?;
        Ok(self.scale(&li))
    }

    /// Euclidean division (field coefficients): self = q * div + r.
    pub fn divmod(&self, div: &Self) -> Result<(Self, Self), PolyError> {
        if !self.ring.is_field() {
            return Err(PolyError::NotAField);
        }
        if div.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let dd = div.degree().unwrap();
        let lead_inv = self.ring.inv(div.leading().unwrap())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.ring.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let shift = rem.len() - 1 - dd;
            let c = self.ring.mul(rem.last().unwrap(), &lead_inv);
            quot[shift] = self.ring.add(&quot[shift], &c);
            for (i, dc) in div.coeffs().iter().enumerate() {
                let t = self.ring.mul(&c, dc);
                rem[i + shift] = self.ring.sub(&rem[i + shift], &t);
            }
            while rem.last().map(|c| self.ring.is_zero(c)).unwrap_or(false) {
                rem.pop();
            }
        }
        Ok((
            Poly::new(self.ring.clone(), quot),
            Poly::new(self.ring.clone(), rem),
        ))
    }

    pub fn rem(&self, div: &Self) -> Result<Self, PolyError> {
        Ok(self.divmod(div)?.1)
    }

    pub fn div_exact(&self, div: &Self) -> Result<Self, PolyError> {
        let (q, r) = self.divmod(div)?;
        debug_assert!(r.is_zero(), "division was not exact");
        Ok(q)
    }

    /// Monic gcd (field coefficients); gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Result<Self, PolyError> {
        if !self.ring.is_field() {
            return Err(PolyError::NotAField);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.monic()
        }
    }

    /// Monic lcm.
    pub fn lcm(&self, other: &Self) -> Result<Self, PolyError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.ring.clone()));
        }
        let g = self.gcd(other)?;
        self.mul(other).div_exact(&g)?.monic()
    }

    /// Coefficient reversal: c_k becomes the coefficient of J^{D-k}.
    pub fn reverse(&self, big_d: usize) -> Result<Self, PolyError> {
        let deg = self.degree().unwrap_or(0);
        if big_d < deg {
            return Err(PolyError::ReverseDegreeTooSmall {
                given: big_d,
                need: deg,
            });
        }
        let mut coeffs = vec![self.ring.zero(); big_d + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[big_d - k] = c.clone();
        }
        Ok(Poly::new(self.ring.clone(), coeffs))
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = vec![];
        for (i, c) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(c) {
                continue;
            }
            let cs = self.ring.fmt_elem(c);
            let term = match i {
                0 => cs,
                1 if cs == "1" => var.to_string(),
                1 => format!("{}*{}", cs, var),
                _ if cs == "1" => format!("{}^{}", var, i),
                _ => format!("{}*{}^{}", cs, var, i),
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

impl<R: Ring> Poly<R> {
    /// Squarefree part over a field, handling the characteristic-p
    /// degenerate branch (a' = 0 means a is a p-th power).
    pub fn squarefree_part(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroInput);
        }
        if !self.ring.is_field() {
            return Err(PolyError::NotAField);
        }
        let a = self.monic()?;
        if a.degree() == Some(0) {
            return Ok(a);
        }
        let da = a.derivative();
        match self.ring.characteristic() {
            None => {
                let g = a.gcd(&da)?;
                a.div_exact(&g)?.monic()
            }
            Some(p) => {
                if da.is_zero() {
                    // a(t) = b(t^p): take the p-th root and recurse
                    return a.pth_root(p)?.squarefree_part();
                }
                let g = a.gcd(&da)?;
                let w = a.div_exact(&g)?.monic()?;
                // strip from g every factor already accounted for in w;
                // what remains is a p-th power
                let mut c = g;
                loop {
                    let h = c.gcd(&w)?;
                    if h.degree() == Some(0) {
                        break;
                    }
                    c = c.div_exact(&h)?;
                }
                if c.degree() == Some(0) {
                    Ok(w)
                } else {
                    let rest = c.pth_root(p)?.squarefree_part()?;
                    w.mul(&rest).monic()
                }
            }
        }
    }

    /// The p-th root of a polynomial of the form b(t^p) in characteristic p.
    /// Coefficients are mapped through the inverse Frobenius (c -> c^{q/p}).
    fn pth_root(&self, p: u64) -> Result<Self, PolyError> {
        let mut coeffs = vec![];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % p as usize == 0 {
                coeffs.push(c.clone());
            } else if !self.ring.is_zero(c) {
                return Err(PolyError::NotSquarefree);
            }
        }
        // In F_{p^e} the p-th root of a coefficient is c^{p^{e-1}}; over the
        // prime field this is the identity. We detect the exponent by probing
        // with Frobenius until the root squares back. For the rings used here
        // (prime fields and small extensions) iterating Frobenius e-1 times is
        // exact; we approximate e by fixing c^{p^k} with growing k until
        // (root)^p = c.
        let ring = self.ring.clone();
        let coeffs = coeffs
            .into_iter()
            .map(|c| {
                let mut root = c.clone();
                for _ in 0..64 {
                    if ring.pow(&root, p) == c {
                        return root;
                    }
                    root = ring.pow(&root, p);
                }
                root
            })
            .collect();
        Ok(Poly::new(ring, coeffs))
    }
}

// ---------------------------------------------------------------------------
// Factorization and roots over finite fields
// ---------------------------------------------------------------------------

impl Poly<Fq> {
    /// x^e modulo `modulus` by square-and-multiply in F_q[x]/(modulus).
    pub fn powmod(&self, mut e: u128, modulus: &Poly<Fq>) -> Result<Poly<Fq>, PolyError> {
        let mut acc = Poly::one(self.ring.clone());
        let mut base = self.rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus)?;
            }
            base = base.mul(&base).rem(modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Distinct-degree factorization of a squarefree monic polynomial:
    /// returns (degree k, product of all irreducible factors of degree k)
    /// for the degrees that occur, via the x^{q^k} - x gcd ladder.
    pub fn distinct_degree_factorization(&self) -> Result<Vec<(usize, Poly<Fq>)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroInput);
        }
        let sf = self.squarefree_part()?;
        if sf.degree() != self.monic()?.degree() {
            return Err(PolyError::NotSquarefree);
        }
        let ring = self.ring.clone();
        let q = ring.order() as u128;
        let x = Poly::monomial(ring.clone(), ring.one(), 1);
        let mut rest = self.monic()?;
        let mut power = x.clone();
        let mut out = vec![];
        let mut k = 0usize;
        while rest.degree().map(|d| d > 0).unwrap_or(false) {
            k += 1;
            if 2 * k > rest.degree().unwrap() {
                // what is left is a single irreducible factor
                out.push((rest.degree().unwrap(), rest.clone()));
                break;
            }
            power = power.powmod(q, &rest)?;
            let factor = power.sub(&x).gcd(&rest)?;
            if factor.degree().map(|d| d > 0).unwrap_or(false) {
                rest = rest.div_exact(&factor)?;
                power = power.rem(&rest)?;
                out.push((k, factor));
            }
        }
        Ok(out)
    }

    /// All roots of the polynomial in the given field, with multiplicities.
    /// The polynomial's coefficients must lie in the prime field; they are
    /// embedded canonically. Exhaustive evaluation within the enumeration
    /// envelope; the x^q - x gcd ladder with a deterministic shift sweep
    /// beyond it.
    pub fn roots_in_field(&self, field: &Fq) -> Result<Vec<(Vec<u64>, usize)>, PolyError> {
        let embedded = self.embed_into(field)?;
        embedded.roots_here()
    }

    /// Re-express a prime-field polynomial over an extension of the same
    /// characteristic.
    pub fn embed_into(&self, field: &Fq) -> Result<Poly<Fq>, PolyError> {
        assert_eq!(self.ring.p, field.p, "characteristic mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                assert!(
                    c.iter().skip(1).all(|&x| x == 0),
                    "coefficients must lie in the prime field"
                );
                field.embed(c[0])
            })
            .collect();
        Ok(Poly::new(field.clone(), coeffs))
    }

    fn roots_here(&self) -> Result<Vec<(Vec<u64>, usize)>, PolyError> {
        let field = self.ring.clone();
        let q = field.order();
        let mut roots = vec![];
        if self.is_zero() {
            return Ok(roots);
        }
        if q <= 1 << 22 {
            for idx in 0..q as usize {
                let x = field.from_index(idx);
                if field.is_zero(&self.eval(&x)) {
                    let mult = self.root_multiplicity(&x)?;
                    roots.push((x, mult));
                }
            }
            return Ok(roots);
        }
        // gcd with x^q - x, then deterministic equal-degree splitting
        let x = Poly::monomial(field.clone(), field.one(), 1);
        let xq = x.powmod(q as u128, self)?;
        let linear = xq.sub(&x).gcd(self)?;
        let mut stack = vec![linear];
        let mut found = vec![];
        let mut shift_idx = 0usize;
        while let Some(h) = stack.pop() {
            match h.degree() {
                None | Some(0) => continue,
                Some(1) => {
                    let r = field.neg(&field.div(&h.coeff(0), &h.coeff(1))?);
                    found.push(r);
                    continue;
                }
                _ => {}
            }
            // split h with (x + s)^{(q-1)/2} - 1 for successive shifts s
            loop {
                let s = field.from_index(shift_idx % q as usize);
                shift_idx += 1;
                let shifted = x.add(&Poly::constant(field.clone(), s));
                let half = shifted.powmod(((q - 1) / 2) as u128, &h)?;
                let g = half.sub(&Poly::one(field.clone())).gcd(&h)?;
                let gd = g.degree().unwrap_or(0);
                if gd > 0 && gd < h.degree().unwrap() {
                    let other = h.div_exact(&g)?;
                    stack.push(g);
                    stack.push(other);
                    break;
                }
            }
        }
        for r in found {
            let mult = self.root_multiplicity(&r)?;
            roots.push((r, mult));
        }
        roots.sort_by_key(|(r, _)| field.index(r));
        Ok(roots)
    }

    fn root_multiplicity(&self, x: &Vec<u64>) -> Result<usize, PolyError> {
        let field = self.ring.clone();
        let linear = Poly::new(field.clone(), vec![field.neg(x), field.one()]);
        let mut mult = 0;
        let mut cur = self.clone();
        loop {
            let (quot, rem) = cur.divmod(&linear)?;
            if !rem.is_zero() {
                break;
            }
            mult += 1;
            cur = quot;
            if cur.is_zero() {
                break;
            }
        }
        Ok(mult)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{build_extension_field, rat, Rationals};

    fn fp_poly(p: u64, coeffs: &[i64]) -> Poly<Fq> {
        let f = Fq::prime_field(p).unwrap();
        Poly::new(
            f.clone(),
            coeffs.iter().map(|&c| f.from_i64(c)).collect(),
        )
    }

    #[test]
    fn gcd_and_lcm_basic() {
        // gcd(J(J-1)(J-9)^2, J(J-9)) = J(J-9) over F_13
        let j = fp_poly(13, &[0, 1]);
        let jm1 = fp_poly(13, &[-1, 1]);
        let jm9 = fp_poly(13, &[-9, 1]);
        let a = j.mul(&jm1).mul(&jm9).mul(&jm9);
        let b = j.mul(&jm9);
        assert_eq!(a.gcd(&b).unwrap(), j.mul(&jm9).monic().unwrap());
        // gcd(a, 0) is the monic normalization of a
        let z = Poly::zero(a.ring.clone());
        assert_eq!(a.gcd(&z).unwrap(), a.monic().unwrap());
        // lcm * gcd = a * b up to monic normalization
        let l = a.lcm(&b).unwrap();
        let g = a.gcd(&b).unwrap();
        assert_eq!(l.mul(&g).monic().unwrap(), a.mul(&b).monic().unwrap());
    }

    #[test]
    fn squarefree_part_examples() {
        // (J-1)^2 J over F_13 -> J(J-1)
        let j = fp_poly(13, &[0, 1]);
        let jm1 = fp_poly(13, &[-1, 1]);
        let a = jm1.mul(&jm1).mul(&j);
        assert_eq!(a.squarefree_part().unwrap(), j.mul(&jm1));
        // t^p over F_p -> t (pure p-th power branch)
        let f = Fq::prime_field(5).unwrap();
        let tp = Poly::monomial(f.clone(), f.one(), 5);
        let t = Poly::monomial(f.clone(), f.one(), 1);
        assert_eq!(tp.squarefree_part().unwrap(), t);
        // zero input rejected
        assert!(Poly::<Fq>::zero(f).squarefree_part().is_err());
    }

    #[test]
    fn distinct_degree_examples() {
        // irreducible quadratic over F_5: x^2 + 2 (since 3 is a non-residue)
        let a = fp_poly(5, &[2, 0, 1]);
        let dd = a.distinct_degree_factorization().unwrap();
        assert_eq!(dd.len(), 1);
        assert_eq!(dd[0].0, 2);
        assert_eq!(dd[0].1, a);
        // x^3 - x over F_5 splits completely
        let b = fp_poly(5, &[0, -1, 0, 1]);
        let dd = b.distinct_degree_factorization().unwrap();
        assert_eq!(dd.len(), 1);
        assert_eq!(dd[0].0, 1);
        assert_eq!(dd[0].1.degree(), Some(3));
        // non-squarefree input rejected
        let c = fp_poly(5, &[0, 0, 1]);
        assert!(c.distinct_degree_factorization().is_err());
    }

    #[test]
    fn roots_examples() {
        // J(J-1)(J-9) over F_13 -> {0, 1, 9}
        let a = fp_poly(13, &[0, 1])
            .mul(&fp_poly(13, &[-1, 1]))
            .mul(&fp_poly(13, &[-9, 1]));
        let f13 = Fq::prime_field(13).unwrap();
        let roots: Vec<u64> = a
            .roots_in_field(&f13)
            .unwrap()
            .into_iter()
            .map(|(r, m)| {
                assert_eq!(m, 1);
                r[0]
            })
            .collect();
        assert_eq!(roots, vec![0, 1, 9]);
        // x^2 - 5 over F_11 -> {4, 7}
        let b = fp_poly(11, &[-5, 0, 1]);
        let f11 = Fq::prime_field(11).unwrap();
        let roots: Vec<u64> = b
            .roots_in_field(&f11)
            .unwrap()
            .into_iter()
            .map(|(r, _)| r[0])
            .collect();
        assert_eq!(roots, vec![4, 7]);
        // J^3 + 22J^2 + J + 25: no roots in F_37, three in F_37^3
        let c = fp_poly(37, &[25, 1, 22, 1]);
        let f37 = Fq::prime_field(37).unwrap();
        assert!(c.roots_in_field(&f37).unwrap().is_empty());
        let f373 = build_extension_field(37, 3).unwrap();
        assert_eq!(c.roots_in_field(&f373).unwrap().len(), 3);
    }

    #[test]
    fn roots_embed_in_larger_fields() {
        let a = fp_poly(13, &[-1, 0, 1]); // x^2 - 1
        let f13 = Fq::prime_field(13).unwrap();
        let f169 = build_extension_field(13, 2).unwrap();
        let small: Vec<_> = a.roots_in_field(&f13).unwrap();
        let large: Vec<_> = a.roots_in_field(&f169).unwrap();
        assert_eq!(small.len(), 2);
        assert_eq!(large.len(), 2);
        for (r, _) in small {
            assert!(large.iter().any(|(s, _)| s[0] == r[0] && s[1] == 0));
        }
    }

    #[test]
    fn reverse_examples() {
        let r = Rationals;
        let a = Poly::new(r, vec![rat(1, 1), rat(2, 1)]);
        let rev = a.reverse(1).unwrap();
        assert_eq!(rev.coeffs(), &[rat(2, 1), rat(1, 1)]);
        let rev3 = a.reverse(3).unwrap();
        assert_eq!(
            rev3.coeffs(),
            &[rat(0, 1), rat(0, 1), rat(2, 1), rat(1, 1)]
        );
        assert!(a.reverse(0).is_err());
        // reverse(reverse(a, D), D) = a when a(0) != 0
        assert_eq!(rev3.reverse(3).unwrap(), a);
    }

    #[test]
    fn divmod_roundtrip() {
        let a = fp_poly(7, &[3, 0, 2, 5, 1]);
        let b = fp_poly(7, &[1, 4, 2]);
        let (q, r) = a.divmod(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < b.degree().unwrap());
    }
}
