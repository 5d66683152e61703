//! Turning `||P(alpha_1^n, ..., alpha_k^n)|| < theta^n` into an exponential sum.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::spec::{Budget, ExpSumSpec};
use crate::algnum::{is_root_of_unity, AlgebraicNumber};
use crate::error::{Error, Result};
use crate::lattice::{find_int_relation_reverified, LatticeConfig};
use crate::numkernel::{interval_ln, IntervalReal};

/// Height of the exponent vectors searched by [`multiplicative_relation`].
pub const DEPENDENCE_HEIGHT: i64 = 1000;

/// `prod alpha_i^{c_i}` with signed exponents.
fn signed_product(alphas: &[AlgebraicNumber], c: &[BigInt]) -> Result<AlgebraicNumber> {
    let mut num = AlgebraicNumber::from_int(1);
    let mut den = AlgebraicNumber::from_int(1);
    for (a, ci) in alphas.iter().zip(c) {
        let e = ci.magnitude().to_u64().ok_or_else(|| Error::Unsupported("exponent too large".into()))?;
        if e == 0 {
            continue;
        }
        let p = a.pow(e)?;
        if ci.sign() == num_bigint::Sign::Minus {
            den = den.mul(&p)?;
        } else {
            num = num.mul(&p)?;
        }
    }
    num.div(&den)
}

/// An exact relation `prod alpha_i^{c_i} = 1` with `|c_i|` bounded by
/// [`DEPENDENCE_HEIGHT`] times a root-of-unity order, if one is found.
///
/// Candidates come from a relation search on `ln |alpha_i|` and are accepted
/// only after the product is shown to be a root of unity exactly. A candidate
/// with `|prod| = 1` that is not a root of unity makes the check inconclusive.
pub fn multiplicative_relation(alphas: &[AlgebraicNumber]) -> Result<Option<Vec<i64>>> {
    if alphas.iter().any(|a| a.is_zero()) {
        return Err(Error::InvalidInput("zero base".into()));
    }
    for (i, a) in alphas.iter().enumerate() {
        if let Some(m) = is_root_of_unity(a) {
            let mut c = vec![0; alphas.len()];
            c[i] = m as i64;
            return Ok(Some(c));
        }
    }
    if alphas.len() < 2 {
        return Ok(None);
    }
    let h = BigInt::from(DEPENDENCE_HEIGHT);
    let cfg = LatticeConfig::default();
    let prec = cfg.needed_bits(alphas.len(), &h) + 64;
    let eval = |p: u32| -> Result<Vec<IntervalReal>> {
        alphas
            .iter()
            .map(|a| {
                let m = a.enclosure(p + 16)?.with_prec(p + 16).modulus();
                interval_ln(&m, p + 8)
            })
            .collect()
    };
    let rep = find_int_relation_reverified(eval, prec, &h, &cfg)?;
    let Some(c) = rep.found else {
        return Ok(None);
    };
    let prod = signed_product(alphas, &c)?;
    match is_root_of_unity(&prod) {
        Some(m) => Ok(Some(c.iter().map(|x| x.to_i64().unwrap() * m as i64).collect())),
        None if prod.cmp_modulus_one()? == std::cmp::Ordering::Equal => Err(Error::Unsupported(
            "independence check inconclusive: a product of the bases has modulus one but is not a root of unity".into(),
        )),
        None => Ok(None),
    }
}

/// Expand `sum_I a_I (alpha^I)^n + a_0`: one term per nonzero monomial, the
/// constant term becoming `beta`.
pub fn expand_poly_power_sum(
    poly: &BTreeMap<Vec<u32>, BigRational>,
    alphas: &[AlgebraicNumber],
    theta: AlgebraicNumber,
    budget: Option<Budget>,
) -> Result<ExpSumSpec> {
    if let Some(c) = multiplicative_relation(alphas)? {
        return Err(Error::MultiplicativeDependence(c));
    }
    let mut bases = Vec::new();
    let mut coeffs = Vec::new();
    let mut beta = BigRational::zero();
    for (idx, a) in poly {
        if idx.len() != alphas.len() {
            return Err(Error::InvalidInput(format!("monomial {idx:?} has the wrong number of exponents")));
        }
        if a.is_zero() {
            continue;
        }
        if idx.iter().all(|&e| e == 0) {
            beta += a;
            continue;
        }
        let mut b = AlgebraicNumber::from_int(1);
        for (al, &e) in alphas.iter().zip(idx) {
            if e > 0 {
                b = b.mul(&al.pow(e as u64)?)?;
            }
        }
        bases.push(b);
        coeffs.push(AlgebraicNumber::from_rational(a));
    }
    if bases.is_empty() {
        return Err(Error::InvalidInput("polynomial has no nonconstant monomial".into()));
    }
    ExpSumSpec::new(bases, coeffs, AlgebraicNumber::from_rational(&beta), theta, budget)
}
