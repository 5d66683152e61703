//! Exact orbits of `x_{n+1} = P(x_n)` and the substitution
//! `y_n = a_d^{1/(d-1)} (x_n + a_{d-1} / (d a_d))`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::algnum::factor::squarefree_decomposition;
use crate::algnum::roots::{isolate_roots, refine_root};
use crate::algnum::{parse_poly, IntPolynomial, QPoly};
use crate::error::{Error, Result};
use crate::numkernel::{interval_nth_root, rational_nth_root, Dyadic, IntervalReal};

/// Caps on orbit length and term size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitLimits {
    pub max_count: usize,
    /// Largest permitted term, in bits.
    pub max_bits: u64,
}

impl Default for OrbitLimits {
    fn default() -> Self {
        OrbitLimits { max_count: 24, max_bits: 1 << 24 }
    }
}

/// A polynomial recursion with its starting term `x_{seed_index} = seed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionSpec {
    coeffs: Vec<BigRational>,
    seed: BigInt,
    seed_index: usize,
}

impl RecursionSpec {
    /// Coefficients `a_0..=a_d`; requires `d >= 2` and `a_d > 0`.
    pub fn new(coeffs: Vec<BigRational>, seed: BigInt, seed_index: usize) -> Result<Self> {
        let p = QPoly::new(coeffs);
        match p.degree() {
            Some(d) if d >= 2 => {}
            _ => return Err(Error::InvalidInput("P must have degree at least 2".into())),
        }
        if !p.lead().is_positive() {
            return Err(Error::InvalidInput("leading coefficient of P must be positive".into()));
        }
        Ok(RecursionSpec { coeffs: p.coeffs().to_vec(), seed, seed_index })
    }

    pub fn from_poly(p: &QPoly, seed: impl Into<BigInt>, seed_index: usize) -> Result<Self> {
        RecursionSpec::new(p.coeffs().to_vec(), seed.into(), seed_index)
    }

    /// Parse `P = <polynomial in x>; x0 = <integer>` (or `x1 = ...`).
    pub fn parse(s: &str) -> Result<Self> {
        let mut poly = None;
        let mut seed = None;
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (lhs, rhs) = part.split_once('=').ok_or_else(|| Error::Parse(format!("expected `name = value` in {part:?}")))?;
            let (lhs, rhs) = (lhs.trim(), rhs.trim());
            if lhs == "P" || lhs == "P(x)" {
                poly = Some(parse_poly(rhs, "x")?);
            } else if let Some(idx) = lhs.strip_prefix('x') {
                let idx: usize = idx.trim_matches(['_', '{', '}']).parse().map_err(|_| Error::Parse(format!("bad seed name {lhs:?}")))?;
                let v: BigInt = rhs.parse().map_err(|_| Error::Parse(format!("seed must be an integer, got {rhs:?}")))?;
                seed = Some((v, idx));
            } else {
                return Err(Error::Parse(format!("unknown field {lhs:?}")));
            }
        }
        let poly = poly.ok_or_else(|| Error::Parse("missing `P = ...`".into()))?;
        let (v, idx) = seed.ok_or_else(|| Error::Parse("missing seed `x0 = ...`".into()))?;
        RecursionSpec::from_poly(&poly, v, idx)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn poly(&self) -> QPoly {
        QPoly::new(self.coeffs.clone())
    }

    pub fn seed(&self) -> &BigInt {
        &self.seed
    }

    pub fn seed_index(&self) -> usize {
        self.seed_index
    }

    pub fn with_seed(&self, seed: BigInt, seed_index: usize) -> Self {
        RecursionSpec { coeffs: self.coeffs.clone(), seed, seed_index }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `a_d`.
    pub fn lead(&self) -> &BigRational {
        self.coeffs.last().unwrap()
    }

    /// `a_i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// The shift `c = a_{d-1} / (d a_d)`.
    pub fn shift(&self) -> BigRational {
        let d = self.degree();
        self.coeff(d - 1) / (BigRational::from_integer(BigInt::from(d)) * self.lead())
    }

    /// `a_d^{1/(d-1)}` when it is rational.
    pub fn rational_scale(&self) -> Option<BigRational> {
        rational_nth_root(self.lead(), self.degree() as u32 - 1)
    }

    /// Enclosure of `s = a_d^{1/(d-1)}`.
    pub fn scale(&self, prec: u32) -> Result<IntervalReal> {
        match self.rational_scale() {
            Some(r) => Ok(IntervalReal::from_rational(&r, prec)),
            None => interval_nth_root(&IntervalReal::from_rational(self.lead(), prec + 8), self.degree() as u32 - 1, prec),
        }
    }

    /// Coefficients `r_j` of `P(X - c) + c = a_d X^d + sum_{j <= d-2} r_j X^j`.
    pub fn centered(&self) -> QPoly {
        let c = self.shift();
        let lin = QPoly::new(vec![-c.clone(), BigRational::one()]);
        self.poly().compose(&lin).add(&QPoly::constant(c))
    }

    /// Upper bound for `C(P) = sum_{j <= d-2} |r_j| s^{1-j} + 1`, so that
    /// `|y_{n+1} - y_n^d| <= C(P) y_n^{d-2}` whenever `y_n >= 1`.
    pub fn substitution_constant(&self) -> Result<Dyadic> {
        let prec = 64;
        let q = self.centered();
        let s = self.scale(prec)?;
        let mut sum = IntervalReal::one(prec);
        for j in 0..self.degree() - 1 {
            let r = q.coeff(j).abs();
            if r.is_zero() {
                continue;
            }
            // s^{1-j}
            let f = if j == 0 { s.clone() } else { s.powi(j as u64 - 1).recip()? };
            sum = &sum + &f.mul_rational(&r);
        }
        Ok(sum.hi().clone())
    }
}

impl fmt::Display for RecursionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P = {}; x{} = {}", self.poly(), self.seed_index, self.seed)
    }
}

impl FromStr for RecursionSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RecursionSpec::parse(s)
    }
}

impl Serialize for RecursionSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RecursionSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        RecursionSpec::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// An exact orbit; `terms[i]` is `x_{seed_index + i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    #[serde(serialize_with = "ser_ints")]
    pub terms: Vec<BigInt>,
    pub seed_index: usize,
    /// First index from which the orbit provably increases to infinity.
    pub divergence_verified_from: Option<usize>,
}

fn ser_ints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl Orbit {
    /// `x_n` by absolute index.
    pub fn term(&self, n: usize) -> Option<&BigInt> {
        n.checked_sub(self.seed_index).and_then(|i| self.terms.get(i))
    }

    /// Last absolute index.
    pub fn last_index(&self) -> usize {
        self.seed_index + self.terms.len() - 1
    }
}

/// `P(x)` for an integer `x`, with the integrality check.
pub(crate) fn step(spec: &RecursionSpec, x: &BigInt, index: usize) -> Result<BigInt> {
    // integer Horner over the common denominator; rational Horner would reduce
    // huge fractions at every step
    let den = spec.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let mut acc = BigInt::zero();
    for c in spec.coeffs.iter().rev() {
        acc = acc * x + c.numer() * (&den / c.denom());
    }
    let (q, r) = acc.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::OrbitIntegrality { index });
    }
    Ok(q)
}

fn coeff_bits(spec: &RecursionSpec) -> u64 {
    spec.coeffs.iter().map(|c| c.numer().bits() + c.denom().bits()).max().unwrap_or(0)
}

/// The exact orbit `x_{n0}, ..., x_{n0 + count}` under the default limits.
pub fn iterate_orbit(spec: &RecursionSpec, count: usize) -> Result<Orbit> {
    iterate_orbit_with(spec, count, &OrbitLimits::default())
}

pub fn iterate_orbit_with(spec: &RecursionSpec, count: usize, limits: &OrbitLimits) -> Result<Orbit> {
    if count == 0 {
        return Err(Error::InvalidInput("count must be positive".into()));
    }
    if count > limits.max_count {
        return Err(Error::InvalidInput(format!("count {count} exceeds the limit {}", limits.max_count)));
    }
    let b = escape_bound(spec)?;
    let d = spec.degree() as u64;
    let cb = coeff_bits(spec);
    let mut terms = vec![spec.seed.clone()];
    for i in 0..count {
        let x = &terms[i];
        if d * x.bits() + cb > limits.max_bits {
            return Err(Error::Unsupported(format!(
                "x_{} would exceed {} bits; lower the count or raise the size limit",
                spec.seed_index + i + 1,
                limits.max_bits
            )));
        }
        let next = step(spec, x, spec.seed_index + i + 1)?;
        terms.push(next);
    }
    let divergence_verified_from = terms.iter().position(|x| *x > b).map(|i| i + spec.seed_index);
    Ok(Orbit { terms, seed_index: spec.seed_index, divergence_verified_from })
}

/// Smallest integer `B >= 1` with `a_d B^d - B - sum_{i<d} |a_i| B^i > 0`.
pub fn crude_escape_bound(spec: &RecursionSpec) -> BigInt {
    let d = spec.degree();
    let f = |b: &BigInt| -> bool {
        let b = BigRational::from_integer(b.clone());
        let mut v = spec.lead() * num_traits::pow::pow(b.clone(), d) - &b;
        for i in 0..d {
            v -= spec.coeff(i).abs() * num_traits::pow::pow(b.clone(), i);
        }
        v.is_positive()
    };
    // the left side is increasing once positive; double then bisect
    let mut hi = BigInt::one();
    while !f(&hi) {
        hi *= 2;
    }
    let mut lo: BigInt = &hi / 2;
    if lo.is_zero() {
        return hi;
    }
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi) / 2;
        if f(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Ceiling of the largest real root of `p`, or `None` without real roots.
fn ceil_largest_real_root(p: &QPoly) -> Result<Option<BigInt>> {
    if p.deg() == 0 {
        return Ok(None);
    }
    let ip = p.to_int_primitive().squarefree_part();
    let boxes = isolate_roots(&ip, 32)?;
    let real: Vec<_> = boxes.into_iter().filter(|b| b.is_real()).collect();
    let top = match real.iter().max_by(|a, b| a.re.lo().cmp(b.re.lo())) {
        Some(b) => b.clone(),
        None => return Ok(None),
    };
    let mut b = top;
    let mut prec = 32;
    loop {
        let (lo, hi) = (b.re.lo().ceil(), b.re.hi().ceil());
        if lo == hi {
            return Ok(Some(hi));
        }
        // the box straddles an integer: an exact check settles roots at it
        let n = b.re.lo().ceil();
        if ip.eval(&n).is_zero() {
            return Ok(Some(n));
        }
        prec *= 2;
        b = refine_root(&ip, &b, prec)?;
    }
}

/// Least integer `B` with `x > B => P(x) > x` and `P` increasing on `[B, oo)`.
pub fn escape_bound(spec: &RecursionSpec) -> Result<BigInt> {
    let p = spec.poly();
    let fixed = p.sub(&QPoly::x());
    let r1 = ceil_largest_real_root(&fixed)?;
    // P is increasing right of the last sign change of P'
    let dp = p.derivative().to_int_primitive();
    let odd: Vec<IntPolynomial> = squarefree_decomposition(&dp).into_iter().filter(|(_, m)| m % 2 == 1).map(|(f, _)| f).collect();
    let mut r2: Option<BigInt> = None;
    for f in odd {
        if let Some(c) = ceil_largest_real_root(&f.to_qpoly())? {
            r2 = Some(r2.map_or(c.clone(), |r: BigInt| r.max(c)));
        }
    }
    match (r1, r2) {
        (Some(a), Some(b)) => Ok(a.max(b)),
        (Some(a), None) | (None, Some(a)) => Ok(a),
        // even degree without fixed points and monotone: cannot happen for d >= 2
        (None, None) => Ok(crude_escape_bound(spec)),
    }
}

/// First index at which the orbit exceeds the escape bound, within `probe` steps.
pub fn divergence_check(spec: &RecursionSpec, probe: usize) -> Result<Option<usize>> {
    if probe == 0 || probe > 10_000 {
        return Err(Error::InvalidInput("probe must lie in 1..=10000".into()));
    }
    let b = escape_bound(spec)?;
    let limits = OrbitLimits::default();
    let d = spec.degree() as u64;
    let cb = coeff_bits(spec);
    let mut x = spec.seed.clone();
    let mut seen = std::collections::HashSet::new();
    for i in 0..=probe {
        if x > b {
            return Ok(Some(spec.seed_index + i));
        }
        if i == probe || !seen.insert(x.clone()) {
            // reached the probe limit or entered a cycle below the bound
            return Ok(None);
        }
        if d * x.bits() + cb > limits.max_bits {
            return Ok(None);
        }
        x = step(spec, &x, spec.seed_index + i + 1)?;
    }
    Ok(None)
}

/// Enclosures of `y_n = s (x_n + c)` for every orbit term.
pub fn to_y_sequence(spec: &RecursionSpec, orbit: &Orbit, prec: u32) -> Result<Vec<IntervalReal>> {
    if orbit.terms.is_empty() {
        return Err(Error::InvalidInput("empty orbit".into()));
    }
    let c = spec.shift();
    if let Some(s) = spec.rational_scale() {
        return Ok(orbit
            .terms
            .iter()
            .map(|x| {
                let y = (BigRational::from_integer(x.clone()) + &c) * &s;
                IntervalReal::from_rational(&y, prec)
            })
            .collect());
    }
    let s = spec.scale(prec + 8)?;
    Ok(orbit
        .terms
        .iter()
        .map(|x| {
            let v = BigRational::from_integer(x.clone()) + &c;
            s.mul_rational(&v).with_prec(prec)
        })
        .collect())
}
