//! Structural checks on a hit, from pseudo-Pisot tuples down to traces.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::scan::Hit;
use super::spec::ExpSumSpec;
use crate::algnum::field::FieldElement;
use crate::algnum::pisot::{conjugate_moduli, ConjugateModulus};
use crate::algnum::roots::refine_root;
use crate::algnum::{pseudo_pisot_tuple, AlgebraicNumber, IntPolynomial, PseudoPisotVerdict};
use crate::error::Result;
use crate::numkernel::{dist_nearest_int, IntervalReal};

/// Conjugates of one base.
#[derive(Clone, Debug, Serialize)]
pub struct BaseConjugates {
    pub index: usize,
    pub minpoly: IntPolynomial,
    pub algebraic_integer: bool,
    /// Every conjugate other than the base itself lies inside the unit disc.
    pub others_below_one: bool,
    pub conjugates: Vec<ConjugateModulus>,
}

/// Independent prediction of the nearest integer from traces.
#[derive(Clone, Debug, Serialize)]
pub struct TraceCheck {
    /// Pseudo-Pisot total of the tuple.
    #[serde(serialize_with = "crate::algnum::pisot::ser_rational")]
    pub total: BigRational,
    /// Sum of the conjugates outside the tuple, from certified root enclosures.
    pub outside_sum: IntervalReal,
    #[serde(serialize_with = "crate::ser::int")]
    pub predicted_nearest: BigInt,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HitAnalysis {
    pub n: u64,
    /// Distinct nonzero entries of `(q_1 alpha_1^n, ..., q_k alpha_k^n, beta)`,
    /// equal entries merged.
    pub tuple: Vec<AlgebraicNumber>,
    pub pseudo_pisot: PseudoPisotVerdict,
    pub bases: Vec<BaseConjugates>,
    pub coefficients_integral: Vec<bool>,
    /// Units additionally have norm `±1`; reported beside integrality.
    pub coefficients_units: Vec<bool>,
    /// `sum Tr(q_i alpha_i^n) + Tr(beta)` over the entries' own fields.
    #[serde(serialize_with = "crate::algnum::pisot::ser_rational")]
    pub trace_sum: BigRational,
    pub trace_sum_is_integer: bool,
    /// Present when every coefficient is rational and every base an algebraic integer.
    pub trace_check: Option<TraceCheck>,
    /// A hit although some coefficient is not an algebraic integer.
    pub integrality_escape: bool,
}

fn is_unit(q: &AlgebraicNumber) -> bool {
    let f = q.minpoly();
    f.is_monic() && f.coeff(0).abs() == BigInt::from(1)
}

fn base_conjugates(i: usize, a: &AlgebraicNumber) -> Result<BaseConjugates> {
    let conj = conjugate_moduli(a.minpoly(), 32)?;
    let mut prec = 32;
    let own = loop {
        let e = a.enclosure(prec)?;
        let hits: Vec<usize> = (0..conj.len()).filter(|&j| refine_root(a.minpoly(), &conj[j].root, prec).map(|b| b.overlaps(&e)).unwrap_or(false)).collect();
        if hits.len() == 1 || prec > 4096 {
            break hits.first().copied();
        }
        prec *= 2;
    };
    let others_below_one = own.is_some() && conj.iter().enumerate().all(|(j, c)| Some(j) == own || c.vs_one < 0);
    Ok(BaseConjugates {
        index: i + 1,
        minpoly: a.minpoly().clone(),
        algebraic_integer: a.is_algebraic_integer(),
        others_below_one,
        conjugates: conj,
    })
}

/// Merge equal entries and drop zeros, keeping exact field elements.
fn tuple_elements(spec: &ExpSumSpec, n: u64) -> Vec<FieldElement> {
    let mut out: Vec<FieldElement> = Vec::new();
    let entries = (0..spec.k()).map(|i| spec.term(i, n)).chain(std::iter::once(spec.beta_element().clone()));
    for e in entries {
        if e.is_zero() {
            continue;
        }
        match out.iter_mut().find(|x| **x == e) {
            Some(x) => *x = x.add(&e),
            None => out.push(e),
        }
    }
    out.retain(|e| !e.is_zero());
    out
}

/// Check a hit against the structure predicted for solutions.
pub fn analyze_hit(spec: &ExpSumSpec, hit: &Hit) -> Result<HitAnalysis> {
    let n = hit.n;
    let els = tuple_elements(spec, n);
    let tuple: Vec<AlgebraicNumber> = els.iter().map(|e| spec.field().to_algebraic(e)).collect::<Result<_>>()?;
    let pseudo_pisot = pseudo_pisot_tuple(&tuple)?;
    let bases = spec.alphas().iter().enumerate().map(|(i, a)| base_conjugates(i, a)).collect::<Result<Vec<_>>>()?;
    let coefficients_integral: Vec<bool> = spec.qs().iter().map(|q| q.is_algebraic_integer()).collect();
    let coefficients_units: Vec<bool> = spec.qs().iter().map(is_unit).collect();
    let trace_sum: BigRational = tuple.iter().map(|t| t.minpoly().root_sum()).fold(BigRational::zero(), |a, b| a + b);
    let trace_sum_is_integer = trace_sum.is_integer();
    let shortcut = spec.qs().iter().all(|q| q.is_rational()) && spec.alphas().iter().all(|a| a.is_algebraic_integer());
    let trace_check = if shortcut { Some(trace_check(&pseudo_pisot, &hit.nearest)?) } else { None };
    Ok(HitAnalysis {
        n,
        tuple,
        pseudo_pisot,
        bases,
        integrality_escape: coefficients_integral.iter().any(|b| !b),
        coefficients_integral,
        coefficients_units,
        trace_sum,
        trace_sum_is_integer,
        trace_check,
    })
}

fn trace_check(pp: &PseudoPisotVerdict, nearest: &BigInt) -> Result<TraceCheck> {
    let prec = 128;
    let mut s = IntervalReal::zero(prec);
    for o in &pp.others {
        let b = refine_root(&o.minpoly, &o.root, prec)?;
        s = &s + &b.re.with_prec(prec);
    }
    let predicted = (-&s).add_rational(&pp.total);
    let nd = dist_nearest_int(&predicted)?;
    Ok(TraceCheck {
        total: pp.total.clone(),
        agrees: nd.nearest == *nearest,
        predicted_nearest: nd.nearest,
        outside_sum: s,
    })
}
