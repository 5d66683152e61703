use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::lll::{lll_reduce, IntLattice};
use crate::algnum::factor::irreducible_factors;
use crate::algnum::roots::isolate_roots;
use crate::algnum::{ComplexBox, IntPolynomial};
use crate::error::{precision, Error, Result};
use crate::numkernel::{Dyadic, IntervalReal};

/// Tunables for relation search.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeConfig {
    /// Required input bits per (degree × height bit); the anti-false-positive guard.
    pub guard_factor: f64,
    /// Lovász parameter.
    pub delta: (i64, i64),
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig { guard_factor: 1.5, delta: (99, 100) }
    }
}

impl LatticeConfig {
    fn delta(&self) -> BigRational {
        BigRational::new(self.delta.0.into(), self.delta.1.into())
    }

    /// Input bits demanded for relations of `terms` entries of height `h`.
    pub fn needed_bits(&self, terms: usize, h: &BigInt) -> u32 {
        (self.guard_factor * terms as f64 * h.bits() as f64).ceil() as u32
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    RelationFound,
    NoneWithinBounds,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub verdict: Verdict,
    #[serde(serialize_with = "crate::ser::opt_ints")]
    pub found: Option<Vec<BigInt>>,
    /// For minimal-polynomial searches: the verified irreducible polynomial.
    pub polynomial: Option<IntPolynomial>,
    #[serde(serialize_with = "crate::ser::int")]
    pub height_bound_searched: BigInt,
    pub degree_searched: usize,
    /// Bits of precision carried by the input enclosures.
    pub precision_used: u32,
    pub guard_factor: f64,
    /// The reduced basis proves no relation within the bounds exists.
    pub exclusion_certified: bool,
    /// Precision at which a found relation was recomputed and still held.
    pub reverified_bits: Option<u32>,
}

/// Bits of absolute precision in an enclosure (`-log2 width`).
pub fn precision_bits(x: &IntervalReal) -> u32 {
    match x.width_log2() {
        None => x.prec().max(64) * 4,
        Some(e) => (-e).max(0) as u32,
    }
}

/// Reduced relation lattice for quantities with several real components each.
///
/// Returns the reduced basis, the scaling exponent and the per-entry rounding error bound.
fn relation_lattice(vals: &[Vec<IntervalReal>], cfg: &LatticeConfig) -> Result<(IntLattice, Dyadic)> {
    let n = vals.len();
    let comps = vals[0].len();
    let wmax = vals.iter().flatten().map(|v| v.width()).max().unwrap();
    // scale so that N * width stays below 2^-8
    let k = if wmax.is_zero() {
        vals.iter().flatten().map(|v| v.prec() as i64).max().unwrap()
    } else {
        -wmax.magnitude() - 8
    };
    let mut rows = Vec::with_capacity(n);
    for (i, v) in vals.iter().enumerate() {
        let mut row = vec![BigInt::zero(); n + comps];
        row[i] = BigInt::one();
        for (c, x) in v.iter().enumerate() {
            row[n + c] = x.midpoint().mul_pow2(k).add(&Dyadic::pow2(-1)).floor();
        }
        rows.push(row);
    }
    let lat = lll_reduce(&IntLattice::new(rows)?, &cfg.delta())?;
    // |round(N mid) - N value| <= 1/2 + N width
    let err = Dyadic::pow2(-1).add(&wmax.mul_pow2(k));
    Ok((lat, err))
}

/// Does the reduced basis exclude every relation of height at most `h`?
fn exclusion(lat: &IntLattice, n: usize, comps: usize, h: &BigInt, err: &Dyadic) -> bool {
    let min_gs = lat.gso_norms().into_iter().min().unwrap();
    let hq = BigRational::from_integer(h.clone());
    let e = err.to_rational() * &hq * BigRational::from_integer(BigInt::from(n));
    let bound = &hq * &hq * BigRational::from_integer(BigInt::from(n)) + e.clone() * e * BigRational::from_integer(BigInt::from(comps));
    min_gs > bound
}

fn normalize_sign(mut c: Vec<BigInt>) -> Vec<BigInt> {
    if c.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        c.iter_mut().for_each(|x| *x = -x.clone());
    }
    c
}

fn height(c: &[BigInt]) -> BigInt {
    c.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
}

/// Search for an integer polynomial of degree at most `max_deg` and height at
/// most `max_height` vanishing at the number enclosed by `x`.
pub fn guess_min_poly(x: &IntervalReal, max_deg: usize, max_height: &BigInt) -> Result<RelationReport> {
    guess_min_poly_with(x, max_deg, max_height, &LatticeConfig::default())
}

pub fn guess_min_poly_with(
    x: &IntervalReal,
    max_deg: usize,
    max_height: &BigInt,
    cfg: &LatticeConfig,
) -> Result<RelationReport> {
    if max_deg == 0 || max_deg > 11 {
        return Err(Error::InvalidInput("max_deg must lie in 1..=11".into()));
    }
    let bits = precision_bits(x);
    let needed = cfg.needed_bits(max_deg, max_height);
    if bits < needed {
        return Err(precision(format!(
            "input carries {bits} bits but degree {max_deg} and height {max_height} need {needed}"
        )));
    }
    let w = bits + 16;
    let xw = x.with_prec(w.max(x.prec()));
    let mut report = RelationReport {
        verdict: Verdict::NoneWithinBounds,
        found: None,
        polynomial: None,
        height_bound_searched: max_height.clone(),
        degree_searched: max_deg,
        precision_used: bits,
        guard_factor: cfg.guard_factor,
        exclusion_certified: false,
        reverified_bits: None,
    };
    let powers: Vec<IntervalReal> = (0..=max_deg as u64).map(|i| xw.powi(i)).collect();
    for d in 1..=max_deg {
        let vals: Vec<Vec<IntervalReal>> = powers[..=d].iter().map(|p| vec![p.clone()]).collect();
        let (lat, err) = relation_lattice(&vals, cfg)?;
        if d == max_deg {
            report.exclusion_certified = exclusion(&lat, d + 1, 1, max_height, &err);
        }
        for row in &lat.basis {
            let c: Vec<BigInt> = row[..=d].to_vec();
            if c.iter().all(|v| v.is_zero()) || height(&c) > *max_height {
                continue;
            }
            if let Some(f) = verify_poly(&c, x, bits)? {
                report.verdict = Verdict::RelationFound;
                report.found = Some(normalize_sign(f.coeffs().to_vec()));
                report.polynomial = Some(f);
                report.exclusion_certified = false;
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Irreducible factor of `c` with exactly one certified root meeting `x`.
fn verify_poly(c: &[BigInt], x: &IntervalReal, bits: u32) -> Result<Option<IntPolynomial>> {
    let p = IntPolynomial::new(c.to_vec());
    if p.degree() == 0 {
        return Ok(None);
    }
    let target = ComplexBox::real(x.clone());
    for f in irreducible_factors(&p) {
        let boxes = isolate_roots(&f, bits + 8)?;
        let hits = boxes.iter().filter(|b| b.overlaps(&target)).count();
        if hits == 1 {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// Integer relation `sum c_i x_i = 0` with `|c_i| <= max_height`.
pub fn find_int_relation(xs: &[IntervalReal], max_height: &BigInt) -> Result<RelationReport> {
    find_int_relation_with(xs, max_height, &LatticeConfig::default())
}

pub fn find_int_relation_with(xs: &[IntervalReal], max_height: &BigInt, cfg: &LatticeConfig) -> Result<RelationReport> {
    let vals: Vec<Vec<IntervalReal>> = xs.iter().map(|x| vec![x.clone()]).collect();
    find_vector_relation(&vals, max_height, cfg)
}

/// Relation search over quantities that can be recomputed at any precision.
///
/// `eval(prec)` must return enclosures at `prec` bits. A relation found at
/// `prec` is accepted only if it still encloses 0 at `2 prec`, with width
/// below the cancellation threshold `2^{-prec}`.
pub fn find_int_relation_reverified<F>(eval: F, prec: u32, max_height: &BigInt, cfg: &LatticeConfig) -> Result<RelationReport>
where
    F: Fn(u32) -> Result<Vec<IntervalReal>>,
{
    let xs = eval(prec)?;
    let mut rep = find_int_relation_with(&xs, max_height, cfg)?;
    if let Some(c) = rep.found.clone() {
        let fine = eval(2 * prec)?;
        let s = fine.iter().zip(&c).fold(IntervalReal::zero(2 * prec), |acc, (x, ci)| &acc + &x.mul_int(ci));
        if s.contains_zero() && s.width() < Dyadic::pow2(-(prec as i64)) {
            rep.reverified_bits = Some(2 * prec);
        } else {
            rep.verdict = Verdict::NoneWithinBounds;
            rep.found = None;
        }
    }
    Ok(rep)
}

/// Relation among quantities with several real components (e.g. real and imaginary parts).
pub fn find_vector_relation(vals: &[Vec<IntervalReal>], max_height: &BigInt, cfg: &LatticeConfig) -> Result<RelationReport> {
    if vals.len() < 2 || vals.len() > 13 {
        return Err(Error::InvalidInput("relation search needs 2..=13 quantities".into()));
    }
    search_vector_relation(vals, max_height, cfg)
}

/// As [`find_vector_relation`] without the cap on the number of quantities.
pub(crate) fn search_vector_relation(
    vals: &[Vec<IntervalReal>],
    max_height: &BigInt,
    cfg: &LatticeConfig,
) -> Result<RelationReport> {
    let comps = vals[0].len();
    if comps == 0 || vals.iter().any(|v| v.len() != comps) {
        return Err(Error::InvalidInput("quantities must have the same number of components".into()));
    }
    let bits = vals.iter().flatten().map(precision_bits).min().unwrap();
    let needed = cfg.needed_bits(vals.len() - 1, max_height);
    if bits < needed {
        return Err(precision(format!("input carries {bits} bits, relation search needs {needed}")));
    }
    let n = vals.len();
    let (lat, err) = relation_lattice(vals, cfg)?;
    let mut report = RelationReport {
        verdict: Verdict::NoneWithinBounds,
        found: None,
        polynomial: None,
        height_bound_searched: max_height.clone(),
        degree_searched: 0,
        precision_used: bits,
        guard_factor: cfg.guard_factor,
        exclusion_certified: exclusion(&lat, n, comps, max_height, &err),
        reverified_bits: None,
    };
    for row in &lat.basis {
        let c: Vec<BigInt> = row[..n].to_vec();
        if c.iter().all(|v| v.is_zero()) || height(&c) > *max_height {
            continue;
        }
        // the combination must enclose 0 in every component
        let ok = (0..comps).all(|k| {
            let prec = vals[0][k].prec();
            let s = vals.iter().zip(&c).fold(IntervalReal::zero(prec), |acc, (v, ci)| &acc + &v[k].mul_int(ci));
            s.contains_zero()
        });
        if ok {
            report.verdict = Verdict::RelationFound;
            report.found = Some(normalize_sign(c));
            report.exclusion_certified = false;
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{interval_ln, interval_nth_root};

    fn h(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn recovers_quadratics() {
        let s2 = interval_nth_root(&IntervalReal::from_int(2, 220), 2, 220).unwrap();
        let r = guess_min_poly(&s2, 4, &h(1_000_000)).unwrap();
        assert_eq!(r.verdict, Verdict::RelationFound);
        assert_eq!(r.polynomial.unwrap(), IntPolynomial::parse("x^2 - 2").unwrap());
        let s5 = interval_nth_root(&IntervalReal::from_int(5, 220), 2, 220).unwrap();
        let phi = (&s5 + &IntervalReal::one(220)).mul_pow2(-1);
        let r = guess_min_poly(&phi, 4, &h(1_000_000)).unwrap();
        assert_eq!(r.polynomial.unwrap(), IntPolynomial::parse("x^2 - x - 1").unwrap());
    }

    #[test]
    fn refuses_thin_input() {
        let x = IntervalReal::from_rational_bounds(&BigRational::new(14.into(), 10.into()), &BigRational::new(15.into(), 10.into()), 64);
        assert!(guess_min_poly(&x, 4, &h(1000)).is_err());
    }

    #[test]
    fn simple_relations() {
        let s5 = interval_nth_root(&IntervalReal::from_int(5, 200), 2, 200).unwrap();
        let phi = (&s5 + &IntervalReal::one(200)).mul_pow2(-1);
        let r = find_int_relation(&[IntervalReal::one(200), phi.clone(), phi.square()], &h(100)).unwrap();
        assert_eq!(r.found.unwrap(), vec![h(1), h(1), h(-1)]);
        let l2 = interval_ln(&IntervalReal::from_int(2, 200), 200).unwrap();
        let l4 = interval_ln(&IntervalReal::from_int(4, 200), 200).unwrap();
        let r = find_int_relation(&[l2, l4], &h(100)).unwrap();
        assert_eq!(r.found.unwrap(), vec![h(2), h(-1)]);
        let s2 = interval_nth_root(&IntervalReal::from_int(2, 200), 2, 200).unwrap();
        let r = find_int_relation(&[IntervalReal::one(200), s2], &h(1_000_000)).unwrap();
        assert_eq!(r.verdict, Verdict::NoneWithinBounds);
        assert!(r.exclusion_certified);
    }

    #[test]
    fn reverified_relation() {
        let eval = |p: u32| -> Result<Vec<IntervalReal>> {
            Ok(vec![interval_ln(&IntervalReal::from_int(2, p), p)?, interval_ln(&IntervalReal::from_int(8, p), p)?])
        };
        let r = find_int_relation_reverified(eval, 128, &h(100), &LatticeConfig::default()).unwrap();
        assert_eq!(r.found.unwrap(), vec![h(3), h(-1)]);
        assert_eq!(r.reverified_bits, Some(256));
    }
}
