//! Curve-family catalog: descriptor records loaded from JSON data files,
//! plus concrete constructors (Gauss hypergeometric series, the triangle
//! operator pair, the Apery operator and its binomial-sum oracle).

use crate::fuchsian::{fuchs_relation_check, FuchsError, FuchsianOperator};
use crate::poly::Poly;
use crate::ring::{Rationals, Ring, RingError};
use crate::series::Series;
use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("descriptor parse error: {0}")]
    Parse(String),
    #[error("descriptor invariant violated: {0}")]
    Invalid(String),
    #[error(transparent)]
    Fuchs(#[from] FuchsError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

// ---------------------------------------------------------------------------
// JSON schema (rationals as strings)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
struct OperatorData {
    p: Vec<String>,
    q: Vec<String>,
    r: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum PointClassData {
    Named(String),
    Elliptic { elliptic: u32 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct HauptmodulData {
    zero_at: PointClassData,
    pole_at: PointClassData,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TriangleData {
    n: u32,
    m: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RationalMapData {
    num: Vec<String>,
    den: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FiberData {
    parameter: String,
    coeffs: Vec<Vec<String>>,
    infinity_model: Option<Vec<Vec<String>>>,
    param_to_j: Option<RationalMapData>,
    dedup_by_param_square: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DescriptorFile {
    name: String,
    genus: usize,
    rm_disc: Option<i64>,
    euler_char: String,
    lyapunov: Vec<String>,
    elliptic_orders: Vec<u32>,
    cusp_count: u32,
    bad_primes: Vec<u64>,
    operators: Vec<OperatorData>,
    hauptmodul: HauptmodulData,
    triangle: Option<TriangleData>,
    weights: Option<Vec<String>>,
    fiber: Option<FiberData>,
    #[serde(default)]
    fiber_alternate: Option<FiberData>,
}

// ---------------------------------------------------------------------------
// Parsed descriptor
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum PointClass {
    Cusp,
    Elliptic(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HauptmodulConvention {
    pub zero_at: PointClass,
    pub pole_at: PointClass,
}

/// A family of hyperelliptic fibers y^2 = f(x) whose x^i coefficients are
/// polynomials in the base parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberFamily {
    pub parameter: String,
    pub coeffs: Vec<Poly<Rationals>>,
    /// Separate model for the parameter-at-infinity fiber, if the family
    /// extends there (plain x-coefficient list).
    pub infinity_model: Option<Vec<Poly<Rationals>>>,
    /// J = num(param) / den(param), when the base carries a J-coordinate.
    pub param_to_j: Option<(Poly<Rationals>, Poly<Rationals>)>,
    /// Parameters s and -s give isomorphic fibers; scan over s^2.
    pub dedup_by_param_square: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveFamilyDescriptor {
    pub name: String,
    pub genus: usize,
    pub rm_disc: Option<i64>,
    pub euler_char: BigRational,
    pub lyapunov: Vec<BigRational>,
    pub elliptic_orders: Vec<u32>,
    pub cusp_count: u32,
    pub bad_primes: BTreeSet<u64>,
    pub operators: Vec<FuchsianOperator>,
    pub hauptmodul: HauptmodulConvention,
    /// Triangle-group exponents (n, m): solutions taken to power n, locus
    /// polynomials in the degree-m coordinate reversal.
    pub triangle: Option<(u32, u32)>,
    /// Weights k_j of the weight-one-per-component generator system.
    pub weights: Option<Vec<BigRational>>,
    pub fiber: Option<FiberFamily>,
    pub fiber_alternate: Option<FiberFamily>,
    /// SHA-256 of the source JSON, embedded in every report.
    pub source_hash: String,
}

impl CurveFamilyDescriptor {
    /// Exponent N: least common multiple of the elliptic orders (1 when
    /// there is no torsion).
    pub fn n_exponent(&self) -> u32 {
        self.elliptic_orders
            .iter()
            .fold(1u32, |acc, &e| num::Integer::lcm(&acc, &e))
    }

    /// Number of elliptic points.
    pub fn elliptic_count(&self) -> usize {
        self.elliptic_orders.len()
    }

    /// Run the structural validation: operator regularity, lambda bounds,
    /// Fuchs relation of every operator's Riemann scheme.
    pub fn validate(&self) -> Result<(), CatalogError> {
        if self.lyapunov.len() != self.genus || self.operators.len() != self.genus {
            return Err(CatalogError::Invalid(
                "lyapunov and operator counts must equal the genus".into(),
            ));
        }
        if self.lyapunov[0] != BigRational::one() {
            return Err(CatalogError::Invalid("lambda_1 must be 1".into()));
        }
        for l in &self.lyapunov {
            if !l.is_positive() || l > &BigRational::one() {
                return Err(CatalogError::Invalid("lambda_j must lie in (0, 1]".into()));
            }
        }
        if !self.euler_char.is_negative() {
            return Err(CatalogError::Invalid("Euler characteristic must be negative".into()));
        }
        for op in &self.operators {
            let scheme = op.riemann_scheme()?;
            let check = fuchs_relation_check(&scheme);
            if !check.holds {
                return Err(CatalogError::Invalid(format!(
                    "Fuchs relation fails with discrepancy {}",
                    Rationals.fmt_elem(&check.discrepancy)
                )));
            }
        }
        Ok(())
    }
}

fn parse_rat(s: &str) -> Result<BigRational, CatalogError> {
    BigRational::from_str(s.trim())
        .map_err(|e| CatalogError::Parse(format!("bad rational '{s}': {e}")))
}

fn parse_poly(coeffs: &[String]) -> Result<Poly<Rationals>, CatalogError> {
    Ok(Poly::new(
        Rationals,
        coeffs.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>, _>>()?,
    ))
}

fn parse_point(p: &PointClassData) -> Result<PointClass, CatalogError> {
    match p {
        PointClassData::Named(s) if s == "cusp" => Ok(PointClass::Cusp),
        PointClassData::Named(s) => Err(CatalogError::Parse(format!("unknown point class '{s}'"))),
        PointClassData::Elliptic { elliptic } => Ok(PointClass::Elliptic(*elliptic)),
    }
}

fn parse_fiber(f: &FiberData) -> Result<FiberFamily, CatalogError> {
    let coeffs = f
        .coeffs
        .iter()
        .map(|c| parse_poly(c))
        .collect::<Result<Vec<_>, _>>()?;
    let infinity_model = match &f.infinity_model {
        Some(m) => Some(
            m.iter()
                .map(|c| parse_poly(c))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };
    let param_to_j = match &f.param_to_j {
        Some(m) => Some((parse_poly(&m.num)?, parse_poly(&m.den)?)),
        None => None,
    };
    Ok(FiberFamily {
        parameter: f.parameter.clone(),
        coeffs,
        infinity_model,
        param_to_j,
        dedup_by_param_square: f.dedup_by_param_square,
    })
}

pub fn parse_descriptor(json: &str) -> Result<CurveFamilyDescriptor, CatalogError> {
    let file: DescriptorFile =
        serde_json::from_str(json).map_err(|e| CatalogError::Parse(e.to_string()))?;
    let mut operators = vec![];
    for op in &file.operators {
        operators.push(FuchsianOperator::new(
            parse_poly(&op.p)?,
            parse_poly(&op.q)?,
            parse_poly(&op.r)?,
        )?);
    }
    let hash = {
        let mut h = Sha256::new();
        h.update(json.as_bytes());
        format!("{:x}", h.finalize())
    };
    let desc = CurveFamilyDescriptor {
        name: file.name.clone(),
        genus: file.genus,
        rm_disc: file.rm_disc,
        euler_char: parse_rat(&file.euler_char)?,
        lyapunov: file
            .lyapunov
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<_>, _>>()?,
        elliptic_orders: file.elliptic_orders.clone(),
        cusp_count: file.cusp_count,
        bad_primes: file.bad_primes.iter().copied().collect(),
        operators,
        hauptmodul: HauptmodulConvention {
            zero_at: parse_point(&file.hauptmodul.zero_at)?,
            pole_at: parse_point(&file.hauptmodul.pole_at)?,
        },
        triangle: file.triangle.as_ref().map(|t| (t.n, t.m)),
        weights: match &file.weights {
            Some(w) => Some(w.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>, _>>()?),
            None => None,
        },
        fiber: match &file.fiber {
            Some(f) => Some(parse_fiber(f)?),
            None => None,
        },
        fiber_alternate: match &file.fiber_alternate {
            Some(f) => Some(parse_fiber(f)?),
            None => None,
        },
        source_hash: hash,
    };
    Ok(desc)
}

const W5_JSON: &str = include_str!("../data/w5.json");
const GAMMA1_5_JSON: &str = include_str!("../data/gamma1_5.json");
const LEGENDRE_JSON: &str = include_str!("../data/legendre.json");
const SL2Z_JSON: &str = include_str!("../data/sl2z.json");

pub const BUILTIN_NAMES: [&str; 4] = ["W5", "Gamma1_5", "Legendre", "SL2Z"];

/// Load a descriptor by name: a file `<name lowercased>.json` under
/// $PFKIT_DATA takes precedence; otherwise the built-in copy is used.
pub fn load_descriptor(name: &str) -> Result<CurveFamilyDescriptor, CatalogError> {
    if let Ok(dir) = std::env::var("PFKIT_DATA") {
        let path = std::path::Path::new(&dir).join(format!("{}.json", name.to_lowercase()));
        if let Ok(text) = std::fs::read_to_string(&path) {
            return parse_descriptor(&text);
        }
    }
    let builtin = match name {
        "W5" => W5_JSON,
        "Gamma1_5" => GAMMA1_5_JSON,
        "Legendre" => LEGENDRE_JSON,
        "SL2Z" => SL2Z_JSON,
        _ => return Err(CatalogError::UnknownFamily(name.to_string())),
    };
    parse_descriptor(builtin)
}

pub fn builtin_descriptors() -> Vec<CurveFamilyDescriptor> {
    BUILTIN_NAMES
        .iter()
        .map(|n| load_descriptor(n).expect("built-in descriptors must parse"))
        .collect()
}

// ---------------------------------------------------------------------------
// Concrete constructors
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricParams {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

impl HypergeometricParams {
    pub fn new(a: BigRational, b: BigRational, c: BigRational) -> Self {
        assert!(
            !(c.is_integer() && !c.is_positive()),
            "c must not be a non-positive integer"
        );
        HypergeometricParams { a, b, c }
    }
}

/// The Gauss series sum (a)_n (b)_n / ((c)_n n!) t^n over any ring, via the
/// contiguous coefficient ratio; reduction failures carry the offending
/// prime.
pub fn gauss_2f1<R: Ring>(
    params: &HypergeometricParams,
    order: usize,
    ring: R,
    reduce: impl Fn(&BigRational) -> Result<R::Elem, RingError>,
) -> Result<Series<R>, RingError> {
    let mut coeffs = Vec::with_capacity(order);
    let mut term = BigRational::one();
    for n in 0..order {
        coeffs.push(reduce(&term)?);
        let nn = BigRational::from_integer(BigInt::from(n as i64));
        let num = (&params.a + &nn) * (&params.b + &nn);
        let den = (&params.c + &nn) * (&nn + BigRational::one());
        term = term * num / den;
    }
    Ok(Series::new(ring, coeffs))
}

pub fn gauss_2f1_q(params: &HypergeometricParams, order: usize) -> Series<Rationals> {
    gauss_2f1(params, order, Rationals, |c| Ok(c.clone())).expect("rational reduction is total")
}

/// The hypergeometric operator pair of the (2, 5, infinity) triangle curve:
/// t(1-t) y'' + (1 - 3t/2) y' - (25 - 4 j^2)/400 y for j = 1, 2.
pub fn triangle_operators_2_5() -> (FuchsianOperator, FuchsianOperator) {
    let desc = load_descriptor("W5").unwrap();
    (desc.operators[0].clone(), desc.operators[1].clone())
}

/// Hypergeometric parameters of the triangle operator L_j:
/// a = (5-2j)/20, b = (5+2j)/20, c = 1.
pub fn triangle_params_2_5(j: usize) -> HypergeometricParams {
    let j = BigInt::from(j as i64);
    HypergeometricParams::new(
        BigRational::new(BigInt::from(5) - 2 * &j, BigInt::from(20)),
        BigRational::new(BigInt::from(5) + 2 * &j, BigInt::from(20)),
        BigRational::one(),
    )
}

/// t(t^2 + 11t - 1) y'' + (3t^2 + 22t - 1) y' + (t + 3) y.
pub fn apery_operator() -> FuchsianOperator {
    load_descriptor("Gamma1_5").unwrap().operators[0].clone()
}

/// a_n = sum_k C(n,k)^2 C(n+k,k), by direct binomial summation.
pub fn apery_numbers(count: usize) -> Vec<BigInt> {
    (0..count)
        .map(|n| {
            (0..=n)
                .map(|k| {
                    let c1 = binomial(n, k);
                    &c1 * &c1 * binomial(n + k, k)
                })
                .fold(BigInt::zero(), |a, b| a + b)
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from((n - i) as u64) / BigInt::from((i + 1) as u64);
    }
    acc
}
