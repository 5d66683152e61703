//! Exact evaluation of exponential sums and the hit scanner.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::spec::{ExpSumSpec, ScanConfig};
use crate::algnum::field::FieldElement;
use crate::error::{precision, Error, Result};
use crate::numkernel::{dist_nearest_int, Dyadic, IntervalReal};

/// A certified solution `||S_n|| < theta^n`.
#[derive(Clone, Debug, Serialize)]
pub struct Hit {
    pub n: u64,
    pub value: IntervalReal,
    pub dist: IntervalReal,
    #[serde(serialize_with = "crate::ser::int")]
    pub nearest: BigInt,
    /// The coefficient heights fit the budget at n.
    pub height_ok: bool,
    /// `theta^n`.
    pub threshold: IntervalReal,
}

/// An exponent where `||S_n||` and `theta^n` could not be separated below the precision cap.
#[derive(Clone, Debug, Serialize)]
pub struct Undecided {
    pub n: u64,
    pub value: IntervalReal,
    pub dist: IntervalReal,
    pub threshold: IntervalReal,
    pub prec: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub hits: Vec<Hit>,
    pub undecided: Vec<Undecided>,
    pub scanned: usize,
    /// No hit or undecided exponent at or beyond this one, within the scan.
    pub n0: u64,
    /// Certified lower bound of `||S_n||` over the scanned exponents `n >= n0`.
    #[serde(serialize_with = "crate::ser::opt_lower")]
    pub min_dist_beyond_n0: Option<Dyadic>,
    /// Where that minimum was attained.
    pub min_dist_at: Option<u64>,
}

pub(crate) enum Outcome {
    Hit(Hit),
    Miss { n: u64, dist_lo: Dyadic },
    Undecided(Undecided),
}

/// Embed a real field element; certifies realness when the field has no real generator.
pub(crate) fn embed_real(spec: &ExpSumSpec, e: &FieldElement, prec: u32) -> Result<IntervalReal> {
    let b = spec.field().embed(e, prec)?;
    if !spec.field().gen().is_real() && !b.im.is_point() {
        if !b.im.contains_zero() || !spec.field().to_algebraic(e)?.is_real() {
            return Err(Error::InvalidInput("the exponential sum takes a non-real value".into()));
        }
    }
    Ok(b.re)
}

/// Enclosure of `S_n = sum q_i alpha_i^n + beta` with width at most `2^{-prec}`.
pub fn eval_exp_sum(spec: &ExpSumSpec, n: u64, prec: u32) -> Result<IntervalReal> {
    embed_real(spec, &spec.value_element(n), prec)
}

/// `S_n - m` as an exact field element.
pub fn exact_offset(spec: &ExpSumSpec, n: u64, m: &BigInt) -> FieldElement {
    let s = spec.value_element(n);
    s.sub(&s.rational(&BigRational::from_integer(m.clone())))
}

/// Bits of `-log2 theta`, rounded up, from a coarse enclosure.
fn theta_bits(spec: &ExpSumSpec) -> Result<u32> {
    let t = spec.theta().real_enclosure(32)?;
    Ok((-t.hi().to_f64().log2()).ceil().max(1.0) as u32)
}

fn theta_pow(spec: &ExpSumSpec, n: u64, prec: u32) -> Result<IntervalReal> {
    let extra = 64 - n.leading_zeros() + 8;
    let t = spec.theta().real_enclosure(prec + extra)?.with_prec(prec + extra);
    Ok(t.powi(n))
}

pub(crate) fn decide(spec: &ExpSumSpec, n: u64, cfg: &ScanConfig) -> Result<Outcome> {
    let s = spec.value_element(n);
    let mut p = cfg.prec.max((n as u32).saturating_mul(theta_bits(spec)?) + 32);
    loop {
        let v = embed_real(spec, &s, p)?;
        let nd = dist_nearest_int(&v)?;
        let t = theta_pow(spec, n, p)?;
        if nd.dist.hi() < t.lo() {
            return Ok(Outcome::Hit(Hit {
                n,
                value: v,
                dist: nd.dist,
                nearest: nd.nearest,
                height_ok: spec.height_ok(n),
                threshold: t,
            }));
        }
        if nd.dist.lo() > t.hi() {
            return Ok(Outcome::Miss { n, dist_lo: nd.dist.lo().clone() });
        }
        if p >= cfg.prec_cap {
            return Ok(Outcome::Undecided(Undecided { n, value: v, dist: nd.dist, threshold: t, prec: p }));
        }
        p = (2 * p).min(cfg.prec_cap);
    }
}

#[cfg(feature = "parallel")]
fn run_all(spec: &ExpSumSpec, ns: &[u64], cfg: &ScanConfig) -> Result<Vec<Outcome>> {
    use rayon::prelude::*;
    ns.par_iter().map(|&n| decide(spec, n, cfg)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_all(spec: &ExpSumSpec, ns: &[u64], cfg: &ScanConfig) -> Result<Vec<Outcome>> {
    ns.iter().map(|&n| decide(spec, n, cfg)).collect()
}

/// Largest supported scan range.
pub const MAX_N: u64 = 100_000;

/// Every exponent in the configured range with certified `||S_n|| < theta^n`.
pub fn scan_hits(spec: &ExpSumSpec, cfg: &ScanConfig) -> Result<ScanResult> {
    if cfg.n_max > MAX_N {
        return Err(Error::Unsupported(format!("n_max above {MAX_N}")));
    }
    if cfg.prec_cap < cfg.prec {
        return Err(precision("precision cap is below the starting precision"));
    }
    let ns = cfg.exponents();
    let outcomes = run_all(spec, &ns, cfg)?;
    let mut hits = Vec::new();
    let mut undecided = Vec::new();
    let mut misses = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Hit(h) => hits.push(h),
            Outcome::Undecided(u) => undecided.push(u),
            Outcome::Miss { n, dist_lo } => misses.push((n, dist_lo)),
        }
    }
    let last = hits.iter().map(|h| h.n).chain(undecided.iter().map(|u| u.n)).max();
    let n0 = last.map_or(cfg.n_min, |l| l + 1);
    let min = misses.iter().filter(|(n, _)| *n >= n0).min_by(|a, b| a.1.cmp(&b.1));
    Ok(ScanResult {
        scanned: ns.len(),
        n0,
        min_dist_beyond_n0: min.map(|m| m.1.clone()),
        min_dist_at: min.map(|m| m.0),
        hits,
        undecided,
    })
}

/// Exact test of `||S_n|| = c theta^n` given the nearest integer `m`:
/// `(S_n - m)^2 = c^2 theta^{2n}` in a field containing `theta`.
pub fn dist_equals_scaled_theta_power(spec: &ExpSumSpec, n: u64, m: &BigInt, c: &BigRational) -> Result<bool> {
    let off = exact_offset(spec, n, m);
    let k = spec.field();
    let (off, th) = match k.find(spec.theta())? {
        Some(t) => (off, t),
        None => {
            let (l, img_gen, img_t) = k.compositum(spec.theta())?;
            (l.from_qpoly(&off.substitute(&img_gen).to_qpoly()), img_t)
        }
    };
    let lhs = off.mul(&off);
    let rhs = th.pow(2 * n).scale(&(c * c));
    Ok(lhs == rhs)
}
