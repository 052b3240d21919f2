//! t-expansion engine for the twisted-modular-form layer: Wronskian units,
//! the Hauptmodul derivative t'(t), embedding derivatives phi_j'(t),
//! Rankin-Cohen brackets, operator-coefficient recovery, ring generators
//! Q_l, and the twisted power congruences between solutions.

use crate::catalog::CurveFamilyDescriptor;
use crate::congruence::{
    compute_alpha, congruence_exponent, series_pow, solutions, CongruenceError,
};
use crate::fuchsian::{FuchsError, FuchsianOperator};
use crate::poly::Poly;
use crate::ring::{ModRing, Rationals, RingError};
use crate::series::{Series, SeriesError};
use num::rational::BigRational;
use num::{BigInt, One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModformsError {
    #[error("operator shape unsupported: {0}")]
    ShapeUnsupported(String),
    #[error("descriptor {0} carries no weight data")]
    MissingWeights(String),
    #[error("non-integral twisted exponent {0}")]
    NonIntegralExponent(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Fuchs(#[from] FuchsError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A t-expansion tagged with its weight vector (one component per solution
/// index) and a display label.
#[derive(Debug, Clone)]
pub struct TExpansion {
    pub series: Series<Rationals>,
    pub weight: Vec<BigRational>,
    pub label: String,
}

fn weight_vec(g: usize, entries: &[(usize, i64)]) -> Vec<BigRational> {
    let mut w = vec![BigRational::zero(); g];
    for &(i, v) in entries {
        w[i] = BigRational::from_integer(BigInt::from(v));
    }
    w
}

/// Unit part of the Wronskian of a second-order operator p y'' + q y' + r y:
/// W with W'/W = -(q/p - a_1/t) and W(0) = 1, the exact power t^{-a_1}
/// already factored out (a_1 = q(0)/p'(0) when p has a simple zero at 0;
/// a_1 = 0 when p(0) is a unit).
pub fn wronskian_unit(
    op: &FuchsianOperator,
    order: usize,
) -> Result<Series<Rationals>, ModformsError> {
    let p = &op.p_poly;
    let q = &op.q_poly;
    if !p.coeff(0).is_zero() {
        let s = Series::from_poly(q, order).mul(&Series::from_poly(p, order).reciprocal()?);
        return Ok(s.integrate().neg().exp().shorten(order));
    }
    let p1 = p.coeff(1);
    if p1.is_zero() {
        return Err(ModformsError::ShapeUnsupported(
            "p(t) has a zero of order >= 2 at t = 0".into(),
        ));
    }
    let a1 = q.coeff(0) / &p1;
    let p2 = Poly::new(Rationals, p.coeffs()[1..].to_vec());
    // s = q / p2 = t * (q/p); the regular part of q/p - a1/t is s[1..]
    let s = Series::from_poly(q, order + 1)
        .mul(&Series::from_poly(&p2, order + 1).reciprocal()?);
    if s.coeff(0) != &a1 {
        return Err(ModformsError::ShapeUnsupported(
            "local exponent data at t = 0 is inconsistent".into(),
        ));
    }
    let reg = Series::new(Rationals, s.coeffs()[1..].to_vec());
    Ok(reg.integrate().neg().exp().shorten(order))
}

/// t'(t) = t * y_1(t)^2 / W_unit(t), normalized to t' = t + O(t^2);
/// weight (2, 0, ..., 0).
pub fn hauptmodul_derivative(
    y1: &Series<Rationals>,
    w_unit: &Series<Rationals>,
    g: usize,
) -> Result<TExpansion, ModformsError> {
    let series = y1.mul(y1).mul(&w_unit.reciprocal()?).shift_up(1);
    Ok(TExpansion {
        series,
        weight: weight_vec(g, &[(0, 2)]),
        label: "tprime".into(),
    })
}

/// phi_j'(t) = (W_j / W_1) * (y_1 / y_j)^2 with leading coefficient 1;
/// weight (2, 0, ..., -2, ..., 0) with the -2 in slot j. j is 0-based and
/// j = 0 degenerates to the constant 1.
pub fn modular_embedding_derivative(
    j: usize,
    y1: &Series<Rationals>,
    yj: &Series<Rationals>,
    w1: &Series<Rationals>,
    wj: &Series<Rationals>,
    g: usize,
    order: usize,
) -> Result<TExpansion, ModformsError> {
    let series = if j == 0 {
        Series::one(Rationals, order)
    } else {
        wj.mul(&w1.reciprocal()?)
            .mul(&y1.mul(y1))
            .mul(&yj.mul(yj).reciprocal()?)
    };
    let mut weight = weight_vec(g, &[(0, 2)]);
    if j > 0 {
        weight[j] = BigRational::from_integer((-2).into());
    }
    Ok(TExpansion {
        series,
        weight,
        label: format!("phi{}prime", j + 1),
    })
}

fn dtau(tprime: &Series<Rationals>, f: &Series<Rationals>) -> Series<Rationals> {
    tprime.mul(&f.derivative())
}

/// Rankin-Cohen bracket with tau-derivatives realized as t' d/dt:
/// [f,g]_1 = k f g' - l f' g and
/// [f,g]_2 = k(k+1)/2 f g'' - (k+1)(l+1) f' g' + l(l+1)/2 f'' g,
/// where k, l are the first weight components.
pub fn rankin_cohen(
    f: &TExpansion,
    g: &TExpansion,
    bracket: u8,
    tprime: &Series<Rationals>,
) -> TExpansion {
    assert!(bracket == 1 || bracket == 2);
    let k = f.weight[0].clone();
    let l = g.weight[0].clone();
    let one = BigRational::one();
    let series = if bracket == 1 {
        dtau(tprime, &g.series)
            .mul(&f.series)
            .scale(&k)
            .sub(&dtau(tprime, &f.series).mul(&g.series).scale(&l))
    } else {
        let two = BigRational::from_integer(2.into());
        let c1 = &k * (&k + &one) / &two;
        let c2 = (&k + &one) * (&l + &one);
        let c3 = &l * (&l + &one) / &two;
        let df = dtau(tprime, &f.series);
        let dg = dtau(tprime, &g.series);
        let ddf = dtau(tprime, &df);
        let ddg = dtau(tprime, &dg);
        ddg.mul(&f.series)
            .scale(&c1)
            .sub(&df.mul(&dg).scale(&c2))
            .add(&ddf.mul(&g.series).scale(&c3))
    };
    let mut weight: Vec<BigRational> = f
        .weight
        .iter()
        .zip(&g.weight)
        .map(|(a, b)| a + b)
        .collect();
    weight[0] += BigRational::from_integer(if bracket == 1 { 2 } else { 4 }.into());
    TExpansion {
        series,
        weight,
        label: format!("[{},{}]_{}", f.label, g.label, bracket),
    }
}

/// The basic expansions of a descriptor: solutions y_j, Wronskian units,
/// t', and the phi_j'.
#[derive(Debug, Clone)]
pub struct BasicExpansions {
    pub solutions: Vec<Series<Rationals>>,
    pub wronskian_units: Vec<Series<Rationals>>,
    pub tprime: TExpansion,
    pub phi_primes: Vec<TExpansion>,
}

pub fn basic_expansions(
    desc: &CurveFamilyDescriptor,
    order: usize,
) -> Result<BasicExpansions, ModformsError> {
    let sols = solutions(desc, order)?;
    let w: Vec<Series<Rationals>> = desc
        .operators
        .iter()
        .map(|op| wronskian_unit(op, order))
        .collect::<Result<_, _>>()?;
    let tprime = hauptmodul_derivative(&sols[0], &w[0], desc.genus)?;
    let phi_primes = (0..desc.genus)
        .map(|j| {
            modular_embedding_derivative(j, &sols[0], &sols[j], &w[0], &w[j], desc.genus, order)
        })
        .collect::<Result<_, _>>()?;
    Ok(BasicExpansions {
        solutions: sols,
        wronskian_units: w,
        tprime,
        phi_primes,
    })
}

/// Coefficient recovery: from h_j = (phi_j')^{1/2} y_j alone, the bracket
/// combinations A_j = t [h,t']_1 / (t'^2 h) and B_j from -[h,h]_2/(2(t'h)^2)
/// with the (phi_j')^{-1/2} correction reproduce q/p and r/p of operator j.
/// The report compares A*p against q and B*p against r as series.
#[derive(Debug, Clone)]
pub struct DemoReport {
    pub family: String,
    pub j: usize,
    pub a_times_p: Series<Rationals>,
    pub b_times_p: Series<Rationals>,
    pub q_match: bool,
    pub r_match: bool,
    pub order: usize,
}

pub fn demo_roundtrip(
    desc: &CurveFamilyDescriptor,
    j: usize,
    order: usize,
) -> Result<DemoReport, ModformsError> {
    let buf = order + 8;
    let basic = basic_expansions(desc, buf)?;
    let op = &desc.operators[j];
    if !op.p_poly.coeff(0).is_zero() {
        return Err(ModformsError::ShapeUnsupported(
            "recovery assumes a simple zero of p at t = 0".into(),
        ));
    }
    let tp = &basic.tprime;
    let phi = &basic.phi_primes[j];
    let g = phi.series.pow_rational(1, 2)?.mul(&basic.solutions[j]);
    let g_exp = TExpansion {
        series: g.clone(),
        weight: {
            let mut w = weight_vec(desc.genus, &[(0, 1)]);
            if j > 0 {
                w[j] = BigRational::zero();
            }
            w
        },
        label: "h".into(),
    };
    let u = tp.series.shift_down(1)?; // t'/t, constant term 1
    let ug = u.mul(&g);
    // t*A = [h,t']_1 / (t * (t'/t)^2 * h)
    let br1 = rankin_cohen(&g_exp, tp, 1, &tp.series);
    let ta = br1
        .series
        .shift_down(1)?
        .mul(&u.mul(&ug).reciprocal()?);
    // t*B0 = -(1/2) [h,h]_2 / (t * (t'/t * h)^2)
    let br2 = rankin_cohen(&g_exp, &g_exp, 2, &tp.series);
    let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
    let tb0 = br2
        .series
        .scale(&half)
        .shift_down(1)?
        .mul(&ug.mul(&ug).reciprocal()?);
    // correction by w = (phi_j')^{-1/2}: B = B0 - w''/w - (2 h'/h + A) w'/w
    let w_ser = phi.series.pow_rational(-1, 2)?;
    let wp = w_ser.derivative();
    let wpp = wp.derivative();
    let winv = w_ser.reciprocal()?;
    let t_wppw = wpp.mul(&winv).shift_up(1);
    let two = BigRational::from_integer(2.into());
    let tgpg = g.derivative().mul(&g.reciprocal()?).shift_up(1);
    let corr = tgpg.scale(&two).add(&ta).mul(&wp.mul(&winv));
    let tb = tb0.sub(&t_wppw.add(&corr));
    // multiply by p2 = p/t to clear the simple pole
    let p2 = Poly::new(Rationals, op.p_poly.coeffs()[1..].to_vec());
    let a_p = ta.mul_poly(&p2).shorten(order);
    let b_p = tb.mul_poly(&p2).shorten(order);
    let q_ser = Series::from_poly(&op.q_poly, order);
    let r_ser = Series::from_poly(&op.r_poly, order);
    let q_match = a_p.order() >= order && a_p == q_ser;
    let r_match = b_p.order() >= order && b_p == r_ser;
    Ok(DemoReport {
        family: desc.name.clone(),
        j,
        a_times_p: a_p,
        b_times_p: b_p,
        q_match,
        r_match,
        order,
    })
}

/// Ring generators Q_l with Q_l^3 = y_l^{k_l}, where k_l is the descriptor's
/// weight exponent for solution l; leading coefficients 1.
pub fn q_generators(
    desc: &CurveFamilyDescriptor,
    order: usize,
) -> Result<Vec<TExpansion>, ModformsError> {
    let weights = desc
        .weights
        .as_ref()
        .ok_or_else(|| ModformsError::MissingWeights(desc.name.clone()))?;
    let sols = solutions(desc, order)?;
    let mut out = Vec::with_capacity(desc.genus);
    for (l, (y, k)) in sols.iter().zip(weights).enumerate() {
        if !k.is_integer() {
            return Err(ModformsError::NonIntegralExponent(k.to_string()));
        }
        let e: u32 = k
            .to_integer()
            .try_into()
            .map_err(|_| ModformsError::NonIntegralExponent(k.to_string()))?;
        let series = series_pow(y, e).pow_rational(1, 3)?;
        let mut weight = vec![BigRational::zero(); desc.genus];
        weight[l] = k / BigRational::from_integer(3.into());
        out.push(TExpansion {
            series,
            weight,
            label: format!("Q{}", l + 1),
        });
    }
    Ok(out)
}

/// Twisted power congruence: with k_l the weight exponents, M = lcm(k_l),
/// and N the family congruence exponent, verifies
/// y_j(t)^{NM} = alpha_{p,j}(t)^M * y_{j'}(t^p)^{NM} mod p.
#[derive(Debug, Clone)]
pub struct TwistedCertificate {
    pub family: String,
    pub p: u64,
    pub j: usize,
    pub j_prime: usize,
    /// M = lcm of the weight exponents.
    pub m: u32,
    /// The common power N*M applied to both solutions.
    pub total_exponent: u32,
    pub verified_order: usize,
    pub pass: bool,
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    let mut g = a;
    let mut h = b;
    while h != 0 {
        let t = g % h;
        g = h;
        h = t;
    }
    a / g * b
}

pub fn twisted_congruence(
    desc: &CurveFamilyDescriptor,
    p: u64,
    j: usize,
    order: usize,
) -> Result<TwistedCertificate, ModformsError> {
    let weights = desc
        .weights
        .as_ref()
        .ok_or_else(|| ModformsError::MissingWeights(desc.name.clone()))?;
    let ks: Vec<u32> = weights
        .iter()
        .map(|k| {
            if !k.is_integer() {
                return Err(ModformsError::NonIntegralExponent(k.to_string()));
            }
            k.to_integer()
                .try_into()
                .map_err(|_| ModformsError::NonIntegralExponent(k.to_string()))
        })
        .collect::<Result<_, _>>()?;
    let m = ks.iter().copied().fold(1, lcm_u32);
    let n = congruence_exponent(desc);
    let nm = n * m;
    for k in &ks {
        if nm % k != 0 {
            return Err(ModformsError::NonIntegralExponent(format!(
                "{} does not divide {}",
                k, nm
            )));
        }
    }
    let cert = compute_alpha(desc, p, j, None)?;
    let ring = ModRing::prime_field(p)?;
    let sols = solutions(desc, order)?
        .into_iter()
        .map(|y| y.reduce_mod(ring))
        .collect::<Result<Vec<_>, _>>()?;
    let lhs = series_pow(&sols[j], nm);
    let alpha_m = series_pow(&Series::from_poly(&cert.alpha, order), m);
    let rhs = alpha_m.mul(&series_pow(
        &sols[cert.j_prime].substitute_power(p as usize).shorten(order),
        nm,
    ));
    let pass = lhs == rhs;
    Ok(TwistedCertificate {
        family: desc.name.clone(),
        p,
        j,
        j_prime: cert.j_prime,
        m,
        total_exponent: nm,
        verified_order: order,
        pass,
    })
}
