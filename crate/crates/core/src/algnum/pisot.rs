//! Pisot and pseudo-Pisot tests, traces of powers, and the Weil height.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::field::NumberField;
use super::number::{modulus_vs_one, AlgebraicNumber};
use super::poly::IntPolynomial;
use super::roots::{isolate_roots, refine_root, ComplexBox, MAX_ISOLATION_PREC};
use super::is_irreducible;
use crate::error::{precision, Error, Result};
use crate::numkernel::{interval_ln, IntervalReal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PisotClass {
    Pisot,
    NotPisot,
}

/// Outcome of [`classify_pisot`] together with the enclosures that decided it.
#[derive(Clone, Debug, Serialize)]
pub struct PisotWitness {
    pub verdict: PisotClass,
    pub reason: String,
    /// The root of modulus greater than one, if there is exactly one.
    pub dominant: Option<ComplexBox>,
    /// Largest modulus among the remaining roots.
    pub max_other_modulus: Option<IntervalReal>,
    /// Comparison of every conjugate's modulus with 1.
    pub conjugates: Vec<ConjugateModulus>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugateModulus {
    pub root: ComplexBox,
    pub modulus: IntervalReal,
    /// Sign of `|root| - 1`.
    pub vs_one: i8,
}

fn ord_code(o: Ordering) -> i8 {
    match o {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Exact comparison of every root modulus of the irreducible `p` with 1.
pub fn conjugate_moduli(p: &IntPolynomial, prec: u32) -> Result<Vec<ConjugateModulus>> {
    isolate_roots(p, prec)?
        .into_iter()
        .map(|b| {
            let o = modulus_vs_one(p, &b)?;
            let modulus = b.modulus();
            Ok(ConjugateModulus { root: b, modulus, vs_one: ord_code(o) })
        })
        .collect()
}

/// Is the (irreducible) polynomial the minimal polynomial of a Pisot number?
pub fn classify_pisot(p: &IntPolynomial) -> Result<PisotWitness> {
    if p.degree() == 0 {
        return Err(Error::InvalidInput("constant polynomial".into()));
    }
    if !is_irreducible(p) {
        return Err(Error::InvalidInput(format!("{p} is not irreducible over the rationals")));
    }
    let p = if p.lead().is_negative() { p.neg() } else { p.clone() };
    let conj = conjugate_moduli(&p, 64)?;
    let not = |reason: &str, conjugates: Vec<ConjugateModulus>| PisotWitness {
        verdict: PisotClass::NotPisot,
        reason: reason.to_string(),
        dominant: None,
        max_other_modulus: None,
        conjugates,
    };
    if !p.is_monic() {
        return Ok(not("not an algebraic integer", conj));
    }
    let big: Vec<usize> = (0..conj.len()).filter(|&i| conj[i].vs_one > 0).collect();
    if big.len() != 1 {
        let why = if big.is_empty() { "no conjugate of modulus > 1" } else { "several conjugates of modulus > 1" };
        return Ok(not(why, conj));
    }
    let dom = &conj[big[0]];
    if !dom.root.is_real() || !dom.root.re.is_positive() {
        return Ok(not("the conjugate of modulus > 1 is not a positive real", conj));
    }
    if conj.iter().any(|c| c.vs_one == 0) {
        return Ok(not("a conjugate lies on the unit circle", conj));
    }
    let max_other = conj
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != big[0])
        .map(|(_, c)| c.modulus.clone())
        .reduce(|a, b| a.max_with(&b));
    Ok(PisotWitness {
        verdict: PisotClass::Pisot,
        reason: "one real conjugate > 1, all others inside the unit disk".into(),
        dominant: Some(dom.root.clone()),
        max_other_modulus: max_other,
        conjugates: conj,
    })
}

/// Conjugate of a tuple entry that is not itself in the tuple.
#[derive(Clone, Debug, Serialize)]
pub struct ExtraConjugate {
    pub minpoly: IntPolynomial,
    pub root: ComplexBox,
    pub modulus: IntervalReal,
    pub below_one: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PseudoPisotVerdict {
    pub pseudo_pisot: bool,
    /// Pseudo-Pisot with every entry an algebraic integer.
    pub pisot: bool,
    /// `sum beta_i + sum_{beta in B} beta`, which is always rational.
    #[serde(serialize_with = "crate::algnum::pisot::ser_rational")]
    pub total: BigRational,
    pub total_is_integer: bool,
    /// The set B.
    pub others: Vec<ExtraConjugate>,
}

pub(crate) fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Test whether the tuple is pseudo-Pisot (and Pisot).
pub fn pseudo_pisot_tuple(elems: &[AlgebraicNumber]) -> Result<PseudoPisotVerdict> {
    if elems.is_empty() {
        return Err(Error::InvalidInput("empty tuple".into()));
    }
    if elems.iter().any(|e| e.is_zero()) {
        return Err(Error::InvalidInput("tuple entries must be nonzero".into()));
    }
    for i in 0..elems.len() {
        for j in 0..i {
            if elems[i].same_as(&elems[j])? {
                return Err(Error::InvalidInput("tuple entries must be distinct".into()));
            }
        }
    }
    // group entries by minimal polynomial: the union of conjugates is the union of their root sets
    let mut groups: Vec<(IntPolynomial, Vec<&AlgebraicNumber>)> = Vec::new();
    for e in elems {
        match groups.iter_mut().find(|(f, _)| f == e.minpoly()) {
            Some(g) => g.1.push(e),
            None => groups.push((e.minpoly().clone(), vec![e])),
        }
    }
    let mut total = BigRational::zero();
    let mut others = Vec::new();
    for (f, members) in &groups {
        total += f.root_sum();
        for b in unmatched_roots(f, members)? {
            let o = modulus_vs_one(f, &b)?;
            others.push(ExtraConjugate {
                minpoly: f.clone(),
                modulus: b.modulus(),
                root: b,
                below_one: o == Ordering::Less,
            });
        }
    }
    let total_is_integer = total.is_integer();
    let pseudo = total_is_integer && others.iter().all(|o| o.below_one);
    let pisot = pseudo && elems.iter().all(|e| e.is_algebraic_integer());
    Ok(PseudoPisotVerdict { pseudo_pisot: pseudo, pisot, total, total_is_integer, others })
}

/// Roots of `f` other than the given members, as boxes.
fn unmatched_roots(f: &IntPolynomial, members: &[&AlgebraicNumber]) -> Result<Vec<ComplexBox>> {
    let mut prec = 32;
    loop {
        let boxes = isolate_roots(f, prec)?;
        let encl: Vec<ComplexBox> = members.iter().map(|m| m.enclosure(prec)).collect::<Result<_>>()?;
        let mut used = vec![false; boxes.len()];
        let mut clean = true;
        for e in &encl {
            let hits: Vec<usize> = (0..boxes.len()).filter(|&i| boxes[i].overlaps(e)).collect();
            if hits.len() == 1 {
                used[hits[0]] = true;
            } else {
                clean = false;
            }
        }
        if clean {
            return Ok(boxes.into_iter().zip(used).filter(|(_, u)| !u).map(|(b, _)| b).collect());
        }
        if prec >= MAX_ISOLATION_PREC / 4 {
            return Err(precision("could not match tuple entries with conjugates"));
        }
        prec *= 2;
    }
}

/// `Tr(a^n)` over the rationals, i.e. the sum of the n-th powers of all conjugates.
pub fn power_trace(a: &AlgebraicNumber, n: u64) -> BigRational {
    if let Some(r) = a.as_rational() {
        return num_traits::pow::pow(r, n as usize);
    }
    if n <= 1024 {
        return a.minpoly().to_qpoly().power_sums(n as usize).pop().unwrap();
    }
    // long exponents: square-and-multiply in Q[y]/(f)
    NumberField::new(a.clone()).y().pow(n).trace()
}

/// Absolute logarithmic Weil height `h(a)` from the Mahler measure.
pub fn weil_height(a: &AlgebraicNumber, prec: u32) -> Result<IntervalReal> {
    if a.is_zero() {
        return Err(Error::Domain("height of zero".into()));
    }
    let f = a.minpoly();
    let w = prec + 16 + 2 * (64 - (f.degree() as u64).leading_zeros());
    let lead = IntervalReal::from_int(f.lead().abs(), w);
    let mut sum = interval_ln(&lead, w)?;
    for b in isolate_roots(f, 32)? {
        if modulus_vs_one(f, &b)? == Ordering::Greater {
            let m = refine_root(f, &b, w)?.with_prec(w).modulus();
            sum = &sum + &interval_ln(&m, w)?;
        }
    }
    sum.div_int(&BigInt::from(f.degree()))
}

/// Both readings of "quadratic Pisot unit whose conjugate is `a^{-1}`".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticUnitReport {
    /// Conjugate equals `a^{-1}`: constant term `+1`.
    pub strict: bool,
    /// Conjugate equals `±a^{-1}`: constant term `±1`.
    pub up_to_sign: bool,
}

/// Strict reading: monic quadratic with constant term 1 and a real root > 1.
pub fn quadratic_pisot_unit_check(a: &AlgebraicNumber) -> bool {
    quadratic_pisot_unit_report(a).strict
}

pub fn quadratic_pisot_unit_report(a: &AlgebraicNumber) -> QuadraticUnitReport {
    let f = a.minpoly();
    let no = QuadraticUnitReport { strict: false, up_to_sign: false };
    if f.degree() != 2 || !f.is_monic() || !a.is_real() {
        return no;
    }
    // a > 1 for a real quadratic irrational is decided by its enclosure once refined away from 1
    let above = match a.real_enclosure(64) {
        Ok(x) => x.lo() > &crate::numkernel::Dyadic::one(),
        Err(_) => false,
    };
    if !above {
        return no;
    }
    let c0 = f.coeff(0);
    QuadraticUnitReport { strict: c0.is_one(), up_to_sign: c0.abs().is_one() }
}
