//! Independent verification oracle for hyperelliptic fibers y^2 = f(x):
//! naive point counting over small finite fields, Cartier-Manin matrices,
//! p-rank computation, and whole-family scans that classify every fiber
//! over F_{p^e} as ordinary / non-ordinary / supersingular / superspecial.
//!
//! Everything here is computed directly from the fiber equations, never from
//! the series solutions of the differential operators, so the outputs can be
//! compared against the truncation-based locus polynomials as a genuinely
//! independent cross-check.

use thiserror::Error;

use crate::catalog::{CurveFamilyDescriptor, FiberFamily};
use crate::poly::{Poly, PolyError};
use crate::ring::{build_extension_field, inv_mod, mul_mod, pow_mod, Fq, ModRing, Ring, RingError};
use num::BigRational;

/// Largest field order we will enumerate exhaustively (character tables,
/// affine point counts, root sweeps).
pub const COUNTING_ENVELOPE: u64 = 1 << 22;

/// Largest field order for the generic (coefficient-by-coefficient) family
/// scan; the single-linear-parameter fast path goes up to the full envelope.
pub const GENERIC_SCAN_ENVELOPE: u64 = 1 << 18;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("field of order {0} exceeds the enumeration envelope")]
    FieldTooLarge(u64),
    #[error("y^2 = f(x) with deg f = {0} is not a genus-1 or genus-2 model")]
    UnsupportedDegree(usize),
    #[error("fiber is singular (f is not squarefree)")]
    SingularFiber,
    #[error("prime {0} is a bad prime for this family")]
    BadPrime(u64),
    #[error("descriptor carries no fiber family")]
    MissingFiber,
    #[error("no embedding between the given fields")]
    NoEmbedding,
    #[error("fiber coefficients do not have the required shape: {0}")]
    UnsupportedShape(String),
    #[error("no square root found for a claimed square")]
    NoSquareRoot,
    #[error("independent routes disagree: {0}")]
    RouteMismatch(String),
    #[error("parity failure in the second power-sum identity")]
    OddParity,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Genus of y^2 = f(x) for squarefree f.
pub fn hyperelliptic_genus(deg: usize) -> Result<usize, OracleError> {
    match deg {
        3 | 4 => Ok(1),
        5 | 6 => Ok(2),
        d => Err(OracleError::UnsupportedDegree(d)),
    }
}

// ---------------------------------------------------------------------------
// Field embeddings
// ---------------------------------------------------------------------------

/// An explicit embedding F_{p^e} -> F_{p^E} (e | E), realized by sending the
/// generator of the small field to the lexicographically smallest root of its
/// defining polynomial in the big field. Deterministic.
#[derive(Debug, Clone)]
pub struct FieldEmbedding {
    pub from: Fq,
    pub to: Fq,
    gen_image: Vec<u64>,
}

impl FieldEmbedding {
    pub fn new(from: &Fq, to: &Fq) -> Result<Self, OracleError> {
        assert_eq!(from.p, to.p, "characteristic mismatch");
        if to.degree() % from.degree() != 0 {
            return Err(OracleError::NoEmbedding);
        }
        let prime = Fq::prime_field(from.p)?;
        let def = Poly::new(
            prime.clone(),
            from.defining.iter().map(|&c| prime.embed(c)).collect(),
        );
        let mut roots = def.roots_in_field(to)?;
        roots.sort_by_key(|(r, _)| to.index(r));
        let gen_image = roots
            .first()
            .ok_or(OracleError::NoEmbedding)?
            .0
            .clone();
        Ok(FieldEmbedding {
            from: from.clone(),
            to: to.clone(),
            gen_image,
        })
    }

    /// Image of an element (coefficient vector over the small field).
    pub fn map(&self, a: &[u64]) -> Vec<u64> {
        let mut acc = self.to.zero();
        for &c in a.iter().rev() {
            acc = self.to.mul(&acc, &self.gen_image);
            acc = self.to.add(&acc, &self.to.embed(c));
        }
        acc
    }

    pub fn map_poly(&self, f: &Poly<Fq>) -> Poly<Fq> {
        let coeffs = f.coeffs().iter().map(|c| self.map(c)).collect();
        Poly::new(self.to.clone(), coeffs)
    }
}

// ---------------------------------------------------------------------------
// Point counting
// ---------------------------------------------------------------------------

/// Number of projective points of the smooth model of y^2 = f(x) over the
/// coefficient field of f, by exhaustive evaluation with a quadratic
/// character table. One point at infinity for odd deg f; for even deg f two
/// or zero according to whether the leading coefficient is a square.
pub fn count_points(f: &Poly<Fq>) -> Result<u64, OracleError> {
    let field = f.ring.clone();
    let q = field.order();
    if q > COUNTING_ENVELOPE {
        return Err(OracleError::FieldTooLarge(q));
    }
    let deg = f.degree().ok_or(OracleError::UnsupportedDegree(0))?;
    let mut chi = vec![-1i8; q as usize];
    chi[0] = 0;
    for idx in 0..q as usize {
        let x = field.from_index(idx);
        let sq = field.mul(&x, &x);
        let si = field.index(&sq);
        if si != 0 {
            chi[si] = 1;
        }
    }
    let mut n: u64 = 0;
    for idx in 0..q as usize {
        let x = field.from_index(idx);
        let v = f.eval(&x);
        n += (1 + chi[field.index(&v)] as i64) as u64;
    }
    if deg % 2 == 1 {
        n += 1;
    } else if chi[field.index(f.leading().unwrap())] == 1 {
        n += 2;
    }
    Ok(n)
}

// ---------------------------------------------------------------------------
// Cartier-Manin matrices and p-rank
// ---------------------------------------------------------------------------

/// g x g matrix over the coefficient field: entry (i, j) is the coefficient
/// of x^{ip - j} in f^{(p-1)/2}, for i, j = 1..g.
pub fn cartier_manin(f: &Poly<Fq>) -> Result<Vec<Vec<Vec<u64>>>, OracleError> {
    let field = f.ring.clone();
    let p = field.p as usize;
    let deg = f.degree().ok_or(OracleError::UnsupportedDegree(0))?;
    let g = hyperelliptic_genus(deg)?;
    let n = (p - 1) / 2;
    let fh = f.pow(n);
    let m = (1..=g)
        .map(|i| (1..=g).map(|j| fh.coeff(i * p - j)).collect())
        .collect();
    Ok(m)
}

fn mat_mul<R: Ring>(ring: &R, a: &[Vec<R::Elem>], b: &[Vec<R::Elem>]) -> Vec<Vec<R::Elem>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = ring.zero();
                    for (k, row) in b.iter().enumerate() {
                        acc = ring.add(&acc, &ring.mul(&a[i][k], &row[j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn mat_apply<R: Ring>(
    _ring: &R,
    a: &[Vec<R::Elem>],
    f: impl Fn(&R::Elem) -> R::Elem,
) -> Vec<Vec<R::Elem>> {
    a.iter().map(|row| row.iter().map(&f).collect()).collect()
}

pub fn mat_is_zero<R: Ring>(ring: &R, a: &[Vec<R::Elem>]) -> bool {
    a.iter().all(|row| row.iter().all(|e| ring.is_zero(e)))
}

/// Rank over a field by Gaussian elimination.
pub fn mat_rank<R: Ring>(ring: &R, a: &[Vec<R::Elem>]) -> Result<usize, RingError> {
    let mut m: Vec<Vec<R::Elem>> = a.to_vec();
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut rank = 0usize;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let piv = (rank..rows).find(|&r| !ring.is_zero(&m[r][col]));
        let Some(pr) = piv else { continue };
        m.swap(rank, pr);
        let inv = ring.inv(&m[rank][col])?;
        for c in col..cols {
            m[rank][c] = ring.mul(&m[rank][c], &inv);
        }
        for r in 0..rows {
            if r != rank && !ring.is_zero(&m[r][col]) {
                let factor = m[r][col].clone();
                for c in col..cols {
                    let t = ring.mul(&factor, &m[rank][c]);
                    m[r][c] = ring.sub(&m[r][c], &t);
                }
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// Stable rank of the semilinear iteration A <- A^(sigma) M starting at
/// A = M, where sigma is the entrywise x -> x^p Frobenius. This is the
/// p-rank of the Jacobian when M is the Cartier-Manin matrix of a smooth
/// fiber. Ranks are non-increasing and freeze once two consecutive iterates
/// agree.
pub fn stable_rank<R: Ring, F: Fn(&R::Elem) -> R::Elem>(
    ring: &R,
    m: &[Vec<R::Elem>],
    frob: F,
) -> Result<usize, RingError> {
    let mut cur = m.to_vec();
    let mut rank = mat_rank(ring, &cur)?;
    for _ in 0..(2 * m.len() + 2) {
        let next = mat_mul(ring, &mat_apply(ring, &cur, &frob), m);
        let r2 = mat_rank(ring, &next)?;
        if r2 == rank {
            return Ok(r2);
        }
        rank = r2;
        cur = next;
    }
    Ok(rank)
}

// ---------------------------------------------------------------------------
// Quadratic extensions as pairs a + b s with s^2 = xi
// ---------------------------------------------------------------------------

/// The ring F_q[s] / (s^2 - xi). A field exactly when xi is a nonsquare in
/// F_q; for square xi callers should specialize s to an actual square root
/// instead. Used to track fibers whose natural parameter generates a
/// quadratic extension of the scan field without constructing that extension
/// explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadExtRing {
    pub base: Fq,
    pub xi: Vec<u64>,
    /// s^p = sp * s (that is, xi^{(p-1)/2}); cached for the Frobenius.
    sp: Vec<u64>,
    field_flag: bool,
}

pub type QuadElem2 = (Vec<u64>, Vec<u64>);

impl QuadExtRing {
    pub fn new(base: Fq, xi: Vec<u64>, xi_is_nonsquare: bool) -> Self {
        let sp = base.pow(&xi, (base.p - 1) / 2);
        QuadExtRing {
            base,
            xi,
            sp,
            field_flag: xi_is_nonsquare,
        }
    }

    pub fn embed_base(&self, a: Vec<u64>) -> QuadElem2 {
        (a, self.base.zero())
    }

    pub fn gen_s(&self) -> QuadElem2 {
        (self.base.zero(), self.base.one())
    }

    /// The x -> x^p Frobenius of F_{q^2} in the pair representation.
    pub fn frobenius_p(&self, a: &QuadElem2) -> QuadElem2 {
        let a0 = self.base.frobenius(&a.0);
        let a1 = self.base.frobenius(&a.1);
        (a0, self.base.mul(&a1, &self.sp))
    }
}

impl Ring for QuadExtRing {
    type Elem = QuadElem2;

    fn zero(&self) -> QuadElem2 {
        (self.base.zero(), self.base.zero())
    }
    fn one(&self) -> QuadElem2 {
        (self.base.one(), self.base.zero())
    }
    fn add(&self, a: &QuadElem2, b: &QuadElem2) -> QuadElem2 {
        (self.base.add(&a.0, &b.0), self.base.add(&a.1, &b.1))
    }
    fn sub(&self, a: &QuadElem2, b: &QuadElem2) -> QuadElem2 {
        (self.base.sub(&a.0, &b.0), self.base.sub(&a.1, &b.1))
    }
    fn mul(&self, a: &QuadElem2, b: &QuadElem2) -> QuadElem2 {
        let cross = self.base.add(
            &self.base.mul(&a.0, &b.1),
            &self.base.mul(&a.1, &b.0),
        );
        let diag = self.base.add(
            &self.base.mul(&a.0, &b.0),
            &self.base.mul(&self.xi, &self.base.mul(&a.1, &b.1)),
        );
        (diag, cross)
    }
    fn neg(&self, a: &QuadElem2) -> QuadElem2 {
        (self.base.neg(&a.0), self.base.neg(&a.1))
    }
    fn inv(&self, a: &QuadElem2) -> Result<QuadElem2, RingError> {
        // (a0 + a1 s)^{-1} = (a0 - a1 s) / (a0^2 - xi a1^2)
        let norm = self.base.sub(
            &self.base.mul(&a.0, &a.0),
            &self.base.mul(&self.xi, &self.base.mul(&a.1, &a.1)),
        );
        let ninv = self.base.inv(&norm)?;
        Ok((
            self.base.mul(&a.0, &ninv),
            self.base.neg(&self.base.mul(&a.1, &ninv)),
        ))
    }
    fn is_zero(&self, a: &QuadElem2) -> bool {
        self.base.is_zero(&a.0) && self.base.is_zero(&a.1)
    }
    fn from_i64(&self, n: i64) -> QuadElem2 {
        (self.base.from_i64(n), self.base.zero())
    }
    fn characteristic(&self) -> Option<u64> {
        Some(self.base.p)
    }
    fn is_field(&self) -> bool {
        self.field_flag
    }
    fn fmt_elem(&self, a: &QuadElem2) -> String {
        format!("{} + ({})*s", self.base.fmt_elem(&a.0), self.base.fmt_elem(&a.1))
    }
}

/// Deterministic square root in F_q (q odd) via the gcd ladder on x^2 - a
/// with an increasing shift sweep. Returns an error if a is a nonsquare.
pub fn fq_sqrt(field: &Fq, a: &[u64]) -> Result<Vec<u64>, OracleError> {
    let av = a.to_vec();
    if field.is_zero(&av) {
        return Ok(field.zero());
    }
    let q = field.order() as u128;
    let modulus = Poly::new(
        field.clone(),
        vec![field.neg(&av), field.zero(), field.one()],
    );
    for s_idx in 0..field.order().min(400) {
        let s = field.from_index(s_idx as usize);
        let base = Poly::new(field.clone(), vec![s, field.one()]);
        let h = base.powmod((q - 1) / 2, &modulus)?;
        let h1 = h.sub(&Poly::one(field.clone()));
        let g = h1.gcd(&modulus)?;
        if g.degree() == Some(1) {
            let r = field
                .div(&field.neg(&g.coeff(0)), &g.coeff(1))
                .map_err(OracleError::Ring)?;
            debug_assert_eq!(field.mul(&r, &r), av);
            return Ok(r);
        }
    }
    Err(OracleError::NoSquareRoot)
}

// ---------------------------------------------------------------------------
// Fiber classification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberClass {
    /// p-rank equals the genus.
    Ordinary,
    /// p-rank strictly between 0 and the genus (genus 2 only).
    NonOrdinary,
    /// p-rank 0 with a nonzero Cartier-Manin matrix.
    Supersingular,
    /// Cartier-Manin matrix identically zero.
    Superspecial,
    /// Singular fiber or parameter pole; excluded from the loci.
    Degenerate,
}

impl FiberClass {
    pub fn is_supersingular(&self) -> bool {
        matches!(self, FiberClass::Supersingular | FiberClass::Superspecial)
    }
    pub fn is_nonordinary(&self) -> bool {
        matches!(
            self,
            FiberClass::NonOrdinary | FiberClass::Supersingular | FiberClass::Superspecial
        )
    }
    pub fn label(&self) -> &'static str {
        match self {
            FiberClass::Ordinary => "ordinary",
            FiberClass::NonOrdinary => "non-ordinary",
            FiberClass::Supersingular => "supersingular",
            FiberClass::Superspecial => "superspecial",
            FiberClass::Degenerate => "degenerate",
        }
    }
}

fn class_from_cartier(g: usize, p_rank: usize, zero_matrix: bool) -> FiberClass {
    if zero_matrix {
        FiberClass::Superspecial
    } else if p_rank == g {
        FiberClass::Ordinary
    } else if p_rank == 0 {
        FiberClass::Supersingular
    } else {
        FiberClass::NonOrdinary
    }
}

/// Frobenius symmetric functions recovered from point counts: c1 over F_q,
/// and for genus 2 also c2 from the count over F_{q^2}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LData {
    pub q: u64,
    /// q = p^d.
    pub d: u32,
    /// c1 (genus 1) or c1, c2 (genus 2).
    pub coeffs: Vec<i64>,
}

fn val_p(x: i64, p: u64) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    let mut x = x.unsigned_abs();
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

impl LData {
    pub fn genus1(q: u64, d: u32, n1: u64) -> LData {
        LData {
            q,
            d,
            coeffs: vec![n1 as i64 - q as i64 - 1],
        }
    }

    pub fn genus2(q: u64, d: u32, n1: u64, n2: u64) -> Result<LData, OracleError> {
        let c1 = n1 as i64 - q as i64 - 1;
        let num = n2 as i128 - (q as i128) * (q as i128) - 1 + (c1 as i128) * (c1 as i128);
        if num % 2 != 0 {
            return Err(OracleError::OddParity);
        }
        let c2 = (num / 2) as i64;
        // sanity: the Jacobian has a positive number of points
        let l1 = 1 + c1 as i128 + c2 as i128 + (q as i128) * c1 as i128
            + (q as i128) * (q as i128);
        if l1 <= 0 {
            return Err(OracleError::RouteMismatch(format!(
                "nonpositive Jacobian order {l1} from counts {n1}, {n2}"
            )));
        }
        Ok(LData {
            q,
            d,
            coeffs: vec![c1, c2],
        })
    }

    /// p-rank read off from which symmetric functions are p-adic units.
    pub fn p_rank(&self, p: u64) -> usize {
        match self.coeffs.as_slice() {
            [c1] => usize::from(c1.rem_euclid(p as i64) != 0),
            [c1, c2] => {
                if c2.rem_euclid(p as i64) != 0 {
                    2
                } else if c1.rem_euclid(p as i64) != 0 {
                    1
                } else {
                    0
                }
            }
            _ => unreachable!(),
        }
    }

    /// All Frobenius slopes equal 1/2, read off from p-adic valuations.
    pub fn newton_supersingular(&self, p: u64) -> bool {
        match self.coeffs.as_slice() {
            [c1] => 2 * val_p(*c1, p).min(1 << 20) >= self.d,
            [c1, c2] => {
                2 * val_p(*c1, p).min(1 << 20) >= self.d
                    && val_p(*c2, p).min(1 << 20) >= self.d
            }
            _ => unreachable!(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FiberClassification {
    pub genus: usize,
    pub p_rank: usize,
    pub superspecial: bool,
    pub class: FiberClass,
    /// "cartier" or "cartier+count" when the exhaustive count also ran.
    pub route: String,
    pub l_data: Option<LData>,
}

/// Classify a single smooth fiber y^2 = f(x) over the coefficient field of
/// f. The Cartier-Manin matrix decides the class (for genus <= 2 the p-rank
/// determines the Newton polygon); when the field is small enough the
/// exhaustive point count runs as well and any disagreement is an error.
pub fn classify_curve(f: &Poly<Fq>, try_count: bool) -> Result<FiberClassification, OracleError> {
    let field = f.ring.clone();
    let p = field.p;
    let d = field.degree();
    let deg = f.degree().ok_or(OracleError::UnsupportedDegree(0))?;
    let g = hyperelliptic_genus(deg)?;
    let sf = f.squarefree_part()?;
    if sf.degree() != Some(deg) {
        return Err(OracleError::SingularFiber);
    }
    let m = cartier_manin(f)?;
    let zero = mat_is_zero(&field, &m);
    let p_rank = if zero {
        0
    } else {
        stable_rank(&field, &m, |x| field.frobenius(x))?
    };
    let class = class_from_cartier(g, p_rank, zero);
    let mut route = String::from("cartier");
    let mut l_data = None;
    if try_count {
        let q = field.order();
        let n2_feasible = q.checked_mul(q).map_or(false, |qq| qq <= COUNTING_ENVELOPE);
        let feasible = q <= COUNTING_ENVELOPE && (g == 1 || n2_feasible);
        if feasible {
            let n1 = count_points(f)?;
            let ld = if g == 1 {
                LData::genus1(q, d as u32, n1)
            } else {
                let big = build_extension_field(p, 2 * d)?;
                let emb = FieldEmbedding::new(&field, &big)?;
                let n2 = count_points(&emb.map_poly(f))?;
                LData::genus2(q, d as u32, n1, n2)?
            };
            if ld.p_rank(p) != p_rank {
                return Err(OracleError::RouteMismatch(format!(
                    "count gives p-rank {} but the Cartier matrix gives {}",
                    ld.p_rank(p),
                    p_rank
                )));
            }
            if ld.newton_supersingular(p) != class.is_supersingular() {
                return Err(OracleError::RouteMismatch(
                    "Newton slopes from counts disagree with the Cartier class".into(),
                ));
            }
            route = String::from("cartier+count");
            l_data = Some(ld);
        }
    }
    Ok(FiberClassification {
        genus: g,
        p_rank,
        superspecial: zero,
        class,
        route,
        l_data,
    })
}

// ---------------------------------------------------------------------------
// Family scans
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct FiberEntry {
    /// Display form of the base parameter value.
    pub param: String,
    /// The J-coordinate (fast path) or the parameter value itself (generic
    /// path), in the scan field; None at poles.
    pub j_value: Option<Vec<u64>>,
    pub class: FiberClass,
    pub p_rank: Option<usize>,
    pub route: String,
    /// The natural parameter of this fiber generates the quadratic extension
    /// of the scan field (its square lies in the scan field but it does not).
    pub eta_in_quadratic_extension: bool,
    pub l_data: Option<LData>,
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub family: String,
    pub p: u64,
    pub ext: usize,
    pub field: Fq,
    /// Number of fibers minimal at this extension degree that were examined.
    pub fiber_count: usize,
    pub ordinary_count: usize,
    /// Non-ordinary and degenerate fibers, in deterministic order.
    pub entries: Vec<FiberEntry>,
    /// Supersingular (including superspecial) J / parameter values, sorted
    /// by field index.
    pub supersingular_values: Vec<Vec<u64>>,
    pub superspecial_values: Vec<Vec<u64>>,
    pub notes: Vec<String>,
}

/// Scan the descriptor's primary fiber family over F_{p^ext}.
pub fn scan(
    desc: &CurveFamilyDescriptor,
    p: u64,
    ext: usize,
) -> Result<ScanReport, OracleError> {
    let fiber = desc.fiber.as_ref().ok_or(OracleError::MissingFiber)?;
    scan_family(desc, fiber, p, ext)
}

/// Classify every fiber of the family over F_{p^ext}, skipping fibers whose
/// parameter already lives in a proper subfield (those are reported by the
/// scan at the smaller extension degree).
pub fn scan_family(
    desc: &CurveFamilyDescriptor,
    fiber: &FiberFamily,
    p: u64,
    ext: usize,
) -> Result<ScanReport, OracleError> {
    if desc.bad_primes.contains(&p) {
        return Err(OracleError::BadPrime(p));
    }
    if p == 2 {
        return Err(OracleError::BadPrime(2));
    }
    let field = build_extension_field(p, ext)?;
    if field.order() > COUNTING_ENVELOPE {
        return Err(OracleError::FieldTooLarge(field.order()));
    }
    let mut report = ScanReport {
        family: desc.name.clone(),
        p,
        ext,
        field: field.clone(),
        fiber_count: 0,
        ordinary_count: 0,
        entries: vec![],
        supersingular_values: vec![],
        superspecial_values: vec![],
        notes: vec![],
    };
    if fiber.dedup_by_param_square {
        scan_fast_path(desc, fiber, &field, &mut report)?;
    } else {
        scan_generic(fiber, &field, &mut report)?;
    }
    report
        .supersingular_values
        .sort_by_key(|v| field.index(v));
    report
        .superspecial_values
        .sort_by_key(|v| field.index(v));
    Ok(report)
}

fn reduce_poly_mod(poly: &Poly<crate::ring::Rationals>, mr: &ModRing) -> Result<Vec<u64>, OracleError> {
    poly.coeffs()
        .iter()
        .map(|c| mr.reduce_rational(c).map_err(OracleError::Ring))
        .collect()
}

fn proper_divisors(e: usize) -> Vec<usize> {
    (1..e).filter(|d| e % d == 0).collect()
}

fn frob_iter(field: &Fq, a: &[u64], times: usize) -> Vec<u64> {
    let mut v = a.to_vec();
    for _ in 0..times {
        v = field.frobenius(&v);
    }
    v
}

fn is_minimal(field: &Fq, a: &[u64], divs: &[usize]) -> bool {
    divs.iter()
        .all(|&d| frob_iter(field, a, d) != a.to_vec())
}

/// Evaluate a polynomial with only even-degree terms at the square of its
/// variable; the coefficient list is already reduced mod p.
fn eval_even(field: &Fq, red: &[u64], xi: &[u64]) -> Vec<u64> {
    let xiv = xi.to_vec();
    let mut acc = field.zero();
    for k in (0..red.len()).step_by(2).rev() {
        acc = field.mul(&acc, &xiv);
        acc = field.add(&acc, &field.embed(red[k]));
    }
    acc
}

fn fq_scale(field: &Fq, v: &[u64], s: u64) -> Vec<u64> {
    v.iter().map(|&c| mul_mod(c, s, field.p)).collect()
}

/// Note attached to every supersingular fiber of a square-parameter family:
/// where the parameter actually lives, and what the sign-reversed Hauptmodul
/// convention J = (eta^2 - 1)^{-1} would have claimed instead. The two
/// conventions assign different parameter squares to the same J, and can
/// disagree about whether the parameter lies in the scan field at all.
fn convention_note(
    field: &Fq,
    parameter: &str,
    j_val: &Vec<u64>,
    xi: &Vec<u64>,
    square: bool,
    sqrt_tab: &[u32],
) -> Option<String> {
    let p = field.p;
    let ext = field.degree();
    let jinv = field.inv(j_val).ok()?;
    let xi_alt = field.add(&field.one(), &jinv);
    let alt_square = sqrt_tab[field.index(&xi_alt)] != u32::MAX;
    let describe = |sq: bool| {
        if sq {
            format!("a square, so {parameter} lies in F_{p}^{ext}")
        } else {
            format!("a nonsquare, so {parameter} would generate the quadratic extension")
        }
    };
    let mut note = format!(
        "J = {}: {}^2 = {} is {}; the sign-reversed Hauptmodul convention would give {}^2 = {} ({})",
        field.fmt_elem(j_val),
        parameter,
        field.fmt_elem(xi),
        describe(square),
        parameter,
        field.fmt_elem(&xi_alt),
        describe(alt_square),
    );
    if square != alt_square {
        note.push_str(" - the conventions disagree about the field of definition of the parameter");
    }
    Some(note)
}

/// Fast path for families whose parameter enters exactly one x-coefficient,
/// linearly and without constant term, and whose fibers at s and -s are
/// isomorphic. The half-power of the constant part is precomputed once and
/// each fiber's Cartier entries come from a short binomial sum in the pair
/// ring F_q[s]/(s^2 - xi), so the scan never constructs quadratic
/// extension fields except to double-check non-ordinary fibers.
fn scan_fast_path(
    _desc: &CurveFamilyDescriptor,
    fiber: &FiberFamily,
    field: &Fq,
    report: &mut ScanReport,
) -> Result<(), OracleError> {
    let p = field.p;
    let ext = field.degree();
    let q = field.order();
    let mr = ModRing::prime_field(p)?;
    let prime = Fq::prime_field(p)?;

    // shape: exactly one varying coefficient, of the form c * param
    let varying: Vec<usize> = fiber
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.degree().map(|d| d >= 1).unwrap_or(false))
        .map(|(i, _)| i)
        .collect();
    if varying.len() != 1 {
        return Err(OracleError::UnsupportedShape(
            "expected a single parameter-dependent coefficient".into(),
        ));
    }
    let i0 = varying[0];
    let cpoly = &fiber.coeffs[i0];
    if cpoly.degree() != Some(1) || !cpoly.ring.is_zero(&cpoly.coeff(0)) {
        return Err(OracleError::UnsupportedShape(
            "parameter-dependent coefficient must be linear without constant term".into(),
        ));
    }
    let cred = mr.reduce_rational(&cpoly.coeff(1))?;

    // constant part A over the prime field
    let mut a_coeffs: Vec<Vec<u64>> = vec![];
    for (i, c) in fiber.coeffs.iter().enumerate() {
        let v = if i == i0 {
            0
        } else {
            mr.reduce_rational(&c.coeff(0))?
        };
        a_coeffs.push(prime.embed(v));
    }
    let a_poly = Poly::new(prime.clone(), a_coeffs);
    let gen_deg = (fiber.coeffs.len() - 1).max(i0);
    let g = hyperelliptic_genus(gen_deg)?;
    let n = ((p - 1) / 2) as usize;

    // powers A^0 .. A^n over the prime field (u64 coefficient access)
    let mut a_pows: Vec<Poly<Fq>> = Vec::with_capacity(n + 1);
    a_pows.push(Poly::one(prime.clone()));
    for _ in 1..=n {
        a_pows.push(a_pows.last().unwrap().mul(&a_poly));
    }
    // binomials C(n, k) and c^k mod p
    let mut binom = vec![1u64; n + 1];
    for k in 1..=n {
        let num = (n - k + 1) as u64 % p;
        binom[k] = mul_mod(binom[k - 1], num, p);
        binom[k] = mul_mod(binom[k], inv_mod(k as u64 % p, p).unwrap(), p);
    }
    let cpows: Vec<u64> = (0..=n as u64).map(|k| pow_mod(cred, k, p)).collect();
    let degrees: Vec<(usize, usize)> = (1..=g)
        .flat_map(|i| (1..=g).map(move |j| (i, j)))
        .collect();

    // J = num / den, both even polynomials in the parameter
    let (num_red, den_red) = match &fiber.param_to_j {
        Some((num, den)) => (reduce_poly_mod(num, &mr)?, reduce_poly_mod(den, &mr)?),
        None => {
            return Err(OracleError::UnsupportedShape(
                "fast-path family must carry a J-coordinate map".into(),
            ))
        }
    };
    for red in [&num_red, &den_red] {
        if red.iter().skip(1).step_by(2).any(|&c| c != 0) {
            return Err(OracleError::UnsupportedShape(
                "J-coordinate map must be even in the parameter".into(),
            ));
        }
    }

    // square-root table: index of a square root per field index, or MAX
    let mut sqrt_tab = vec![u32::MAX; q as usize];
    for idx in 0..q as usize {
        let x = field.from_index(idx);
        let si = field.index(&field.mul(&x, &x));
        if sqrt_tab[si] == u32::MAX {
            sqrt_tab[si] = idx as u32;
        }
    }

    // parameter-at-infinity fiber, scanned once at extension degree 1
    if ext == 1 {
        if let Some(model) = &fiber.infinity_model {
            let coeffs: Vec<Vec<u64>> = model
                .iter()
                .map(|c| {
                    if c.degree().map(|d| d >= 1).unwrap_or(false) {
                        return Err(OracleError::UnsupportedShape(
                            "infinity model must have constant coefficients".into(),
                        ));
                    }
                    Ok(field.embed(mr.reduce_rational(&c.coeff(0))?))
                })
                .collect::<Result<_, _>>()?;
            let f_inf = Poly::new(field.clone(), coeffs);
            let j_inf = {
                // J -> leading behavior of num/den as the parameter grows
                let dn = num_red.iter().rposition(|&c| c != 0);
                let dd = den_red.iter().rposition(|&c| c != 0);
                match (dn, dd) {
                    (Some(a), Some(b)) if a < b => Some(field.zero()),
                    (Some(a), Some(b)) if a == b => Some(
                        field.embed(mul_mod(num_red[a], inv_mod(den_red[b], p).unwrap(), p)),
                    ),
                    _ => None,
                }
            };
            let cls = classify_curve(&f_inf, true)?;
            report.fiber_count += 1;
            record_entry(
                report,
                field,
                FiberEntry {
                    param: format!("{} = infinity", fiber.parameter),
                    j_value: j_inf,
                    class: cls.class.clone(),
                    p_rank: Some(cls.p_rank),
                    route: cls.route,
                    eta_in_quadratic_extension: false,
                    l_data: cls.l_data,
                },
            );
        }
    }

    // lazily built F_{p^{2 ext}} data for double-checking non-ordinary
    // fibers whose parameter is a nonsquare times the scan field
    let mut big_data: Option<(Fq, FieldEmbedding)> = None;

    let divs = proper_divisors(ext);
    let a_emb = {
        let coeffs = a_poly
            .coeffs()
            .iter()
            .map(|c| field.embed(c[0]))
            .collect::<Vec<_>>();
        Poly::new(field.clone(), coeffs)
    };

    for idx in 0..q as usize {
        let xi = field.from_index(idx);
        if !is_minimal(field, &xi, &divs) {
            continue;
        }
        report.fiber_count += 1;
        let param_desc = format!("{}^2 = {}", fiber.parameter, field.fmt_elem(&xi));

        // J-coordinate (pole check first)
        let den_val = eval_even(field, &den_red, &xi);
        if field.is_zero(&den_val) {
            record_entry(
                report,
                field,
                FiberEntry {
                    param: param_desc,
                    j_value: None,
                    class: FiberClass::Degenerate,
                    p_rank: None,
                    route: "pole".into(),
                    eta_in_quadratic_extension: false,
                    l_data: None,
                },
            );
            continue;
        }
        let num_val = eval_even(field, &num_red, &xi);
        let j_val = field.div(&num_val, &den_val)?;

        let root_idx = sqrt_tab[idx];
        let square = root_idx != u32::MAX;

        // Cartier entries in the pair ring: sum_k C(n,k) c^k eta^k
        // [x^{d - k i0}] A^{n-k}, split into even and odd k.
        let mut xi_pows: Vec<Vec<u64>> = Vec::with_capacity(n / 2 + 1);
        xi_pows.push(field.one());
        for _ in 1..=(n / 2) {
            xi_pows.push(field.mul(xi_pows.last().unwrap(), &xi));
        }
        let entry_at = |d: usize| -> QuadElem2 {
            let mut even_acc = field.zero();
            let mut odd_acc = field.zero();
            for k in 0..=n {
                if k * i0 > d {
                    break;
                }
                let c0 = {
                    let c = a_pows[n - k].coeff(d - k * i0);
                    c[0]
                };
                if c0 == 0 {
                    continue;
                }
                let s = mul_mod(mul_mod(binom[k], cpows[k], p), c0, p);
                if k % 2 == 0 {
                    let t = fq_scale(field, &xi_pows[k / 2], s);
                    even_acc = field.add(&even_acc, &t);
                } else {
                    let t = fq_scale(field, &xi_pows[k / 2], s);
                    odd_acc = field.add(&odd_acc, &t);
                }
            }
            (even_acc, odd_acc)
        };
        let pair_entries: Vec<Vec<QuadElem2>> = (0..g)
            .map(|i| {
                (0..g)
                    .map(|j| entry_at(degrees[i * g + j].0 * p as usize - degrees[i * g + j].1))
                    .collect()
            })
            .collect();

        if square {
            // eta lies in the scan field: specialize s to a square root
            let r = field.from_index(root_idx as usize);
            let specialize = |e: &QuadElem2| field.add(&e.0, &field.mul(&e.1, &r));
            let mat: Vec<Vec<Vec<u64>>> = pair_entries
                .iter()
                .map(|row| row.iter().map(&specialize).collect())
                .collect();
            let det = if g == 1 {
                mat[0][0].clone()
            } else {
                field.sub(
                    &field.mul(&mat[0][0], &mat[1][1]),
                    &field.mul(&mat[0][1], &mat[1][0]),
                )
            };
            // build the concrete fiber to test smoothness
            let mut coeffs = a_emb.coeffs().to_vec();
            coeffs.resize(gen_deg + 1, field.zero());
            coeffs[i0] = field.add(&coeffs[i0], &field.mul(&field.embed(cred), &r));
            let f_s = Poly::new(field.clone(), coeffs);
            let smooth = f_s
                .squarefree_part()
                .map(|sf| sf.degree() == f_s.degree())
                .unwrap_or(false);
            if !smooth {
                record_entry(
                    report,
                    field,
                    FiberEntry {
                        param: param_desc,
                        j_value: Some(j_val),
                        class: FiberClass::Degenerate,
                        p_rank: None,
                        route: "singular".into(),
                        eta_in_quadratic_extension: false,
                        l_data: None,
                    },
                );
                continue;
            }
            if !field.is_zero(&det) {
                report.ordinary_count += 1;
                continue;
            }
            // non-ordinary: authoritative classification from the fiber
            let cls = classify_curve(&f_s, true)?;
            let matrix_direct = cartier_manin(&f_s)?;
            if matrix_direct != mat {
                return Err(OracleError::RouteMismatch(
                    "binomial-sum Cartier entries disagree with the direct expansion".into(),
                ));
            }
            if cls.class.is_supersingular() {
                if let Some(note) =
                    convention_note(field, &fiber.parameter, &j_val, &xi, true, &sqrt_tab)
                {
                    report.notes.push(note);
                }
            }
            record_entry(
                report,
                field,
                FiberEntry {
                    param: param_desc,
                    j_value: Some(j_val),
                    class: cls.class.clone(),
                    p_rank: Some(cls.p_rank),
                    route: cls.route,
                    eta_in_quadratic_extension: false,
                    l_data: cls.l_data,
                },
            );
        } else {
            // eta generates the quadratic extension: work in the pair field
            let pair_ring = QuadExtRing::new(field.clone(), xi.clone(), true);
            // smoothness of the fiber over the pair field
            let mut coeffs: Vec<QuadElem2> = a_emb
                .coeffs()
                .iter()
                .map(|c| pair_ring.embed_base(c.clone()))
                .collect();
            coeffs.resize(gen_deg + 1, pair_ring.zero());
            let c_eta = (
                field.zero(),
                field.embed(cred),
            );
            coeffs[i0] = pair_ring.add(&coeffs[i0], &c_eta);
            let f_pair = Poly::new(pair_ring.clone(), coeffs);
            let smooth = f_pair
                .squarefree_part()
                .map(|sf| sf.degree() == f_pair.degree())
                .unwrap_or(false);
            if !smooth {
                record_entry(
                    report,
                    field,
                    FiberEntry {
                        param: param_desc,
                        j_value: Some(j_val),
                        class: FiberClass::Degenerate,
                        p_rank: None,
                        route: "singular".into(),
                        eta_in_quadratic_extension: true,
                        l_data: None,
                    },
                );
                continue;
            }
            let det = if g == 1 {
                pair_entries[0][0].clone()
            } else {
                pair_ring.sub(
                    &pair_ring.mul(&pair_entries[0][0], &pair_entries[1][1]),
                    &pair_ring.mul(&pair_entries[0][1], &pair_entries[1][0]),
                )
            };
            if !pair_ring.is_zero(&det) {
                report.ordinary_count += 1;
                continue;
            }
            let zero = mat_is_zero(&pair_ring, &pair_entries);
            let p_rank = if zero {
                0
            } else {
                stable_rank(&pair_ring, &pair_entries, |x| pair_ring.frobenius_p(x))?
            };
            let class = class_from_cartier(g, p_rank, zero);
            // double-check in the concrete quadratic extension field
            if big_data.is_none() {
                let big = build_extension_field(p, 2 * ext)?;
                let emb = FieldEmbedding::new(field, &big)?;
                big_data = Some((big, emb));
            }
            let (big, emb) = big_data.as_ref().unwrap();
            let xi_big = emb.map(&xi);
            let r_big = fq_sqrt(big, &xi_big)?;
            let mut bcoeffs: Vec<Vec<u64>> = a_emb.coeffs().iter().map(|c| emb.map(c)).collect();
            bcoeffs.resize(gen_deg + 1, big.zero());
            bcoeffs[i0] = big.add(&bcoeffs[i0], &big.mul(&big.embed(cred), &r_big));
            let f_big = Poly::new(big.clone(), bcoeffs);
            let cls = classify_curve(&f_big, true)?;
            if cls.class != class || cls.p_rank != p_rank {
                return Err(OracleError::RouteMismatch(format!(
                    "pair-ring class {:?} (p-rank {}) vs concrete-field class {:?} (p-rank {})",
                    class, p_rank, cls.class, cls.p_rank
                )));
            }
            if class.is_supersingular() {
                if let Some(note) =
                    convention_note(field, &fiber.parameter, &j_val, &xi, false, &sqrt_tab)
                {
                    report.notes.push(note);
                }
            }
            record_entry(
                report,
                field,
                FiberEntry {
                    param: param_desc,
                    j_value: Some(j_val),
                    class,
                    p_rank: Some(p_rank),
                    route: cls.route,
                    eta_in_quadratic_extension: true,
                    l_data: cls.l_data,
                },
            );
        }
    }
    Ok(())
}

/// Generic scan: evaluate every coefficient polynomial at each parameter
/// value of the scan field and classify the resulting fiber directly.
fn scan_generic(
    fiber: &FiberFamily,
    field: &Fq,
    report: &mut ScanReport,
) -> Result<(), OracleError> {
    let p = field.p;
    let q = field.order();
    if q > GENERIC_SCAN_ENVELOPE {
        return Err(OracleError::FieldTooLarge(q));
    }
    let mr = ModRing::prime_field(p)?;
    let red: Vec<Vec<u64>> = fiber
        .coeffs
        .iter()
        .map(|c| reduce_poly_mod(c, &mr))
        .collect::<Result<_, _>>()?;
    let gen_deg = red
        .iter()
        .rposition(|c| c.iter().any(|&x| x != 0))
        .ok_or_else(|| OracleError::UnsupportedShape("zero fiber family".into()))?;
    hyperelliptic_genus(gen_deg)?;
    let divs = proper_divisors(field.degree());
    for idx in 0..q as usize {
        let t = field.from_index(idx);
        if !is_minimal(field, &t, &divs) {
            continue;
        }
        report.fiber_count += 1;
        let param_desc = format!("{} = {}", fiber.parameter, field.fmt_elem(&t));
        let coeffs: Vec<Vec<u64>> = red
            .iter()
            .map(|c| {
                let mut acc = field.zero();
                for &ck in c.iter().rev() {
                    acc = field.mul(&acc, &t);
                    acc = field.add(&acc, &field.embed(ck));
                }
                acc
            })
            .collect();
        let f = Poly::new(field.clone(), coeffs);
        let smooth = f.degree() == Some(gen_deg)
            && f.squarefree_part()
                .map(|sf| sf.degree() == f.degree())
                .unwrap_or(false);
        if !smooth {
            record_entry(
                report,
                field,
                FiberEntry {
                    param: param_desc,
                    j_value: Some(t.clone()),
                    class: FiberClass::Degenerate,
                    p_rank: None,
                    route: "singular".into(),
                    eta_in_quadratic_extension: false,
                    l_data: None,
                },
            );
            continue;
        }
        let cls = classify_curve(&f, true)?;
        if cls.class == FiberClass::Ordinary {
            report.ordinary_count += 1;
            continue;
        }
        record_entry(
            report,
            field,
            FiberEntry {
                param: param_desc,
                j_value: Some(t.clone()),
                class: cls.class.clone(),
                p_rank: Some(cls.p_rank),
                route: cls.route,
                eta_in_quadratic_extension: false,
                l_data: cls.l_data,
            },
        );
    }
    Ok(())
}

fn record_entry(report: &mut ScanReport, _field: &Fq, entry: FiberEntry) {
    if entry.class.is_supersingular() {
        if let Some(j) = &entry.j_value {
            report.supersingular_values.push(j.clone());
            if entry.class == FiberClass::Superspecial {
                report.superspecial_values.push(j.clone());
            }
        }
    }
    report.entries.push(entry);
}

// ---------------------------------------------------------------------------
// The Cartier entry as a polynomial in the base parameter (genus 1)
// ---------------------------------------------------------------------------

/// For a genus-1 family over a parameter line, the (1,1) Cartier-Manin entry
/// [x^{p-1}] f_t(x)^{(p-1)/2} is a polynomial in t of degree < p; recover it
/// exactly by Lagrange interpolation from its values at every t in F_p.
pub fn hasse_witt_polynomial(
    desc: &CurveFamilyDescriptor,
    fiber: &FiberFamily,
    p: u64,
) -> Result<Poly<ModRing>, OracleError> {
    if desc.bad_primes.contains(&p) || p == 2 {
        return Err(OracleError::BadPrime(p));
    }
    let mr = ModRing::prime_field(p)?;
    let field = Fq::prime_field(p)?;
    let red: Vec<Vec<u64>> = fiber
        .coeffs
        .iter()
        .map(|c| reduce_poly_mod(c, &mr))
        .collect::<Result<_, _>>()?;
    let gen_deg = red
        .iter()
        .rposition(|c| c.iter().any(|&x| x != 0))
        .ok_or_else(|| OracleError::UnsupportedShape("zero fiber family".into()))?;
    if hyperelliptic_genus(gen_deg)? != 1 {
        return Err(OracleError::UnsupportedShape(
            "interpolated Cartier entry requires a genus-1 family".into(),
        ));
    }
    let n = ((p - 1) / 2) as usize;
    let mut values = Vec::with_capacity(p as usize);
    for tv in 0..p {
        let t = field.embed(tv);
        let coeffs: Vec<Vec<u64>> = red
            .iter()
            .map(|c| {
                let mut acc = field.zero();
                for &ck in c.iter().rev() {
                    acc = field.mul(&acc, &t);
                    acc = field.add(&acc, &field.embed(ck));
                }
                acc
            })
            .collect();
        let f = Poly::new(field.clone(), coeffs);
        let entry = f.pow(n).coeff(p as usize - 1);
        values.push(entry[0]);
    }
    Ok(lagrange_interpolate(mr, &values))
}

/// Interpolate the polynomial of degree < len(values) with value values[i]
/// at i, over F_p.
fn lagrange_interpolate(mr: ModRing, values: &[u64]) -> Poly<ModRing> {
    let p = mr.modulus();
    let mut acc = Poly::zero(mr);
    for (i, &yi) in values.iter().enumerate() {
        if yi == 0 {
            continue;
        }
        let mut num = Poly::one(mr);
        let mut denom = 1u64;
        for (j, _) in values.iter().enumerate() {
            if j == i {
                continue;
            }
            num = num.mul(&Poly::new(mr, vec![mr.neg(&(j as u64 % p)), 1]));
            let diff = ((i as i64 - j as i64).rem_euclid(p as i64)) as u64;
            denom = mul_mod(denom, diff, p);
        }
        let s = mul_mod(yi, inv_mod(denom, p).unwrap(), p);
        acc = acc.add(&num.scale(&s));
    }
    acc
}

/// Two polynomials agree up to a nonzero scalar factor.
pub fn equal_up_to_scalar(a: &Poly<ModRing>, b: &Poly<ModRing>) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    if a.degree() != b.degree() {
        return false;
    }
    let mr = a.ring;
    let la = a.leading().unwrap();
    let lb = b.leading().unwrap();
    let Ok(inv_lb) = mr.inv(lb) else { return false };
    let s = mr.mul(la, &inv_lb);
    let scaled = b.scale(&s);
    *a == scaled
}

/// Apery-style binomial coefficient of the interpolation route, kept here so
/// callers can reduce exact rationals without importing num directly.
pub fn reduce_rational_mod(q: &BigRational, p: u64) -> Result<u64, OracleError> {
    let mr = ModRing::prime_field(p)?;
    mr.reduce_rational(q).map_err(OracleError::Ring)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_descriptor;

    fn fp(p: u64) -> Fq {
        Fq::prime_field(p).unwrap()
    }

    #[test]
    fn count_points_cubic_over_f5() {
        // y^2 = x^3 - x over F_5 has 8 projective points
        let field = fp(5);
        let f = Poly::new(
            field.clone(),
            vec![field.zero(), field.embed(4), field.zero(), field.embed(1)],
        );
        assert_eq!(count_points(&f).unwrap(), 8);
    }

    #[test]
    fn cartier_matrix_of_quintic_over_f13() {
        // y^2 = x^5 - 1 over F_13: matrix [[0, 0], [7, 0]], p-rank 0,
        // supersingular but not superspecial
        let field = fp(13);
        let mut coeffs = vec![field.zero(); 6];
        coeffs[0] = field.embed(12);
        coeffs[5] = field.embed(1);
        let f = Poly::new(field.clone(), coeffs);
        let m = cartier_manin(&f).unwrap();
        assert_eq!(m[0][0], field.embed(0));
        assert_eq!(m[0][1], field.embed(0));
        assert_eq!(m[1][0], field.embed(7));
        assert_eq!(m[1][1], field.embed(0));
        let cls = classify_curve(&f, true).unwrap();
        assert_eq!(cls.p_rank, 0);
        assert!(!cls.superspecial);
        assert_eq!(cls.class, FiberClass::Supersingular);
        assert_eq!(cls.route, "cartier+count");
        let ld = cls.l_data.unwrap();
        assert_eq!(ld.coeffs.len(), 2);
        assert!(ld.coeffs.iter().all(|c| c % 13 == 0));
    }

    #[test]
    fn sqrt_roundtrip_in_extension() {
        let field = build_extension_field(13, 2).unwrap();
        for idx in [1usize, 5, 17, 100, 150] {
            let a = field.from_index(idx);
            let sq = field.mul(&a, &a);
            let r = fq_sqrt(&field, &sq).unwrap();
            assert_eq!(field.mul(&r, &r), sq);
        }
    }

    #[test]
    fn field_embedding_is_a_homomorphism() {
        let small = build_extension_field(13, 2).unwrap();
        let big = build_extension_field(13, 4).unwrap();
        let emb = FieldEmbedding::new(&small, &big).unwrap();
        let a = small.from_index(37);
        let b = small.from_index(101);
        assert_eq!(
            emb.map(&small.mul(&a, &b)),
            big.mul(&emb.map(&a), &emb.map(&b))
        );
        assert_eq!(
            emb.map(&small.add(&a, &b)),
            big.add(&emb.map(&a), &emb.map(&b))
        );
    }

    #[test]
    fn quintic_family_scan_f13() {
        let desc = load_descriptor("W5").unwrap();
        let report = scan(&desc, 13, 1).unwrap();
        let field = &report.field;
        let ss: Vec<usize> = report
            .supersingular_values
            .iter()
            .map(|v| field.index(v))
            .collect();
        assert_eq!(ss, vec![0, 1, 9]);
        // J = 1 comes from eta = 0; J = 9 from eta^2 = 11, a nonsquare
        let e1 = report
            .entries
            .iter()
            .find(|e| e.j_value.as_ref().map(|j| field.index(j)) == Some(1))
            .unwrap();
        assert!(!e1.eta_in_quadratic_extension);
        assert!(e1.class.is_supersingular());
        let e9 = report
            .entries
            .iter()
            .find(|e| e.j_value.as_ref().map(|j| field.index(j)) == Some(9))
            .unwrap();
        assert!(e9.eta_in_quadratic_extension);
        assert!(e9.class.is_supersingular());
        // the sign-reversed convention disagrees about the J = 1 parameter
        let note = report
            .notes
            .iter()
            .find(|n| n.starts_with("J = [1]:"))
            .unwrap();
        assert!(note.contains("disagree"));
        // eta = 0 kills the whole Cartier matrix
        assert_eq!(e1.class, FiberClass::Superspecial);
        // no further supersingular J over F_169
        let report2 = scan(&desc, 13, 2).unwrap();
        assert!(report2.supersingular_values.is_empty());
    }

    #[test]
    fn quintic_family_scan_f37_degree_one_part() {
        let desc = load_descriptor("W5").unwrap();
        let report = scan(&desc, 37, 1).unwrap();
        let field = &report.field;
        let ss: Vec<usize> = report
            .supersingular_values
            .iter()
            .map(|v| field.index(v))
            .collect();
        assert_eq!(ss, vec![0, 1, 21]);
    }

    #[test]
    fn legendre_scan_f7() {
        let desc = load_descriptor("Legendre").unwrap();
        let fiber = desc.fiber.clone().unwrap();
        let report = scan_family(&desc, &fiber, 7, 1).unwrap();
        let field = &report.field;
        let ss: Vec<usize> = report
            .supersingular_values
            .iter()
            .map(|v| field.index(v))
            .collect();
        assert_eq!(ss, vec![2, 4, 6]);
        for e in &report.entries {
            if e.class.is_supersingular() {
                assert_eq!(e.route, "cartier+count");
            }
        }
        // lambda = 0 and 1 are the degenerate fibers
        let degenerate: Vec<usize> = report
            .entries
            .iter()
            .filter(|e| e.class == FiberClass::Degenerate)
            .map(|e| field.index(e.j_value.as_ref().unwrap()))
            .collect();
        assert_eq!(degenerate, vec![0, 1]);
    }

    #[test]
    fn hasse_witt_interpolation_matches_deuring() {
        let desc = load_descriptor("Legendre").unwrap();
        let fiber = desc.fiber.clone().unwrap();
        let hw = hasse_witt_polynomial(&desc, &fiber, 7).unwrap();
        let mr = ModRing::prime_field(7).unwrap();
        let expected = Poly::new(mr, vec![1, 2, 2, 1]);
        assert!(equal_up_to_scalar(&hw, &expected));
    }

    #[test]
    fn l_data_rank_and_newton() {
        // supersingular elliptic curve over F_p: c1 = 0
        let ld = LData::genus1(13, 1, 14);
        assert_eq!(ld.p_rank(13), 0);
        assert!(ld.newton_supersingular(13));
        // ordinary elliptic curve
        let ld = LData::genus1(13, 1, 10);
        assert_eq!(ld.p_rank(13), 1);
        assert!(!ld.newton_supersingular(13));
    }
}
