//! Certified growth constants `alpha = lim x_n^{d^{-n}}` and checks of
//! `x_n = a_d^{-1/(d-1)} alpha^{d^n} - a_{d-1}/(d a_d) + O(alpha^{-d^n})`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{precision, Error, Result};
use crate::numkernel::{dist_nearest_int, interval_exp, interval_ln, Dyadic, IntervalReal, Round};
use crate::recursion::{self, escape_bound, OrbitLimits, Orbit, RecursionSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthMethod {
    LogSeries,
    DirectRoot,
    ProductFormula,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthResult {
    pub alpha: IntervalReal,
    pub log_alpha: IntervalReal,
    /// Index K of the last orbit term used.
    pub terms_used: usize,
    /// Certified bound on the neglected part of the log series.
    pub tail_bound: Dyadic,
    pub method: GrowthMethod,
    /// Substitution constant `C(P)` used in the tail bound.
    pub constant: Dyadic,
}

/// Does index `k` with value `y_k` satisfy the tail-bound hypotheses?
/// Returns `(16/7) C / (d^{k+1} y_k^2)` rounded up when it does.
fn tail_at(y: &IntervalReal, d: u64, k: usize, c: &Dyadic) -> Option<Dyadic> {
    let ylo = y.lo();
    if ylo < &Dyadic::one() {
        return None;
    }
    let y2 = ylo.mul(ylo);
    if y2 < c.mul_int(&BigInt::from(2)) {
        return None;
    }
    let yd1 = (IntervalReal::point(ylo.clone(), 64)).powi(d - 1);
    if yd1.lo() < &Dyadic::from_int(4) {
        return None;
    }
    let dk = num_traits::pow::pow(BigInt::from(d), k + 1);
    let num = c.mul_int(&BigInt::from(16));
    let den = y2.mul_int(&(dk * 7));
    Some(Dyadic::div(&num, &den, 64, Round::Up))
}

/// Certified alpha from the log series
/// `log alpha = log y_0 + sum_k d^{-k-1} log(y_{k+1} / y_k^d)`.
///
/// The partial sum through `K` telescopes to `d^{-K} log y_K`, which is what
/// gets evaluated; the tail is bounded by `(16/7) C(P) / (d^{K+1} y_K^2)`.
pub fn growth_constant(spec: &RecursionSpec, prec: u32) -> Result<GrowthResult> {
    growth_constant_with(spec, prec, &OrbitLimits::default())
}

pub fn growth_constant_with(spec: &RecursionSpec, prec: u32, limits: &OrbitLimits) -> Result<GrowthResult> {
    let b = escape_bound(spec)?;
    let d = spec.degree() as u64;
    let c = spec.substitution_constant()?;
    let target = Dyadic::pow2(-(prec as i64) - 4);
    let w = prec + 24;
    let mut x = spec.seed().clone();
    let mut k = spec.seed_index();
    let mut diverging = false;
    let cb: u64 = spec.coeffs().iter().map(|q| q.numer().bits() + q.denom().bits()).max().unwrap_or(0);
    loop {
        diverging |= x > b;
        if diverging {
            let y = y_value(spec, &x, w)?;
            if let Some(t) = tail_at(&y, d, k, &c) {
                if t <= target {
                    return finish(spec, &y, k, t, c, w, prec);
                }
            }
        }
        if k - spec.seed_index() >= 10_000 {
            return Err(Error::DivergenceNotEstablished("orbit stays below the escape bound".into()));
        }
        if d * x.bits() + cb > limits.max_bits {
            return Err(if diverging {
                precision(format!("orbit terms reach the {}-bit size limit before the tail is small enough", limits.max_bits))
            } else {
                Error::DivergenceNotEstablished("orbit grows without passing the escape bound".into())
            });
        }
        if !diverging && k - spec.seed_index() > 64 {
            // bounded or slow start: decide with the probe
            if recursion::divergence_check(spec, 10_000)?.is_none() {
                return Err(Error::DivergenceNotEstablished(format!("no term of {spec} exceeds the escape bound {b}")));
            }
        }
        x = recursion::step(spec, &x, k + 1)?;
        k += 1;
    }
}

fn y_value(spec: &RecursionSpec, x: &BigInt, w: u32) -> Result<IntervalReal> {
    let v = BigRational::from_integer(x.clone()) + spec.shift();
    match spec.rational_scale() {
        Some(s) => Ok(IntervalReal::from_rational(&(v * s), w)),
        None => Ok(spec.scale(w + 8)?.mul_rational(&v).with_prec(w)),
    }
}

fn finish(spec: &RecursionSpec, y: &IntervalReal, k: usize, t: Dyadic, c: Dyadic, w: u32, prec: u32) -> Result<GrowthResult> {
    let d = spec.degree() as u64;
    let dk = num_traits::pow::pow(BigInt::from(d), k);
    let head = interval_ln(y, w)?.div_int(&dk)?;
    let log_alpha = &head + &IntervalReal::symmetric(t.clone(), w);
    let alpha = interval_exp(&log_alpha, w)?;
    let limit = alpha.hi().mul_pow2(8 - prec as i64);
    if alpha.width() > limit {
        return Err(precision("alpha enclosure wider than requested"));
    }
    Ok(GrowthResult {
        alpha: alpha.with_prec(prec),
        log_alpha: log_alpha.with_prec(prec),
        terms_used: k,
        tail_bound: t,
        method: GrowthMethod::LogSeries,
        constant: c,
    })
}

/// `x_n^{d^{-n}}`, which tends to alpha but is not an enclosure of it.
#[derive(Clone, Debug, Serialize)]
pub struct DirectRoot {
    pub value: IntervalReal,
    pub n: usize,
    /// Always set: the value approximates alpha only as n grows.
    pub convergence_caveat: bool,
}

pub fn direct_root_alpha(spec: &RecursionSpec, n: usize, prec: u32) -> Result<DirectRoot> {
    if n < spec.seed_index() {
        return Err(Error::InvalidInput("index precedes the seed".into()));
    }
    let orbit = if n == spec.seed_index() {
        Orbit { terms: vec![spec.seed().clone()], seed_index: n, divergence_verified_from: None }
    } else {
        recursion::iterate_orbit(spec, n - spec.seed_index())?
    };
    let x = orbit.term(n).unwrap();
    if *x < BigInt::one() {
        return Err(Error::Domain(format!("x_{n} = {x} is below 1")));
    }
    let w = prec + 16;
    let dn = num_traits::pow::pow(BigInt::from(spec.degree()), n);
    let l = interval_ln(&IntervalReal::from_int(x.clone(), w), w)?.div_int(&dn)?;
    let value = interval_exp(&l, w)?.with_prec(prec);
    Ok(DirectRoot { value, n, convergence_caveat: true })
}

/// One index of the asymptotic check.
#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub n: usize,
    /// `r_n = x_n - (a_d^{-1/(d-1)} alpha^{d^n} - a_{d-1}/(d a_d))`.
    pub residual: IntervalReal,
    /// `|r_n| alpha^{d^n}`.
    pub scaled: IntervalReal,
    /// Nearest integer of the main term equals `x_n`.
    pub rounds_to_term: bool,
    /// Bracket readings of `x_n = [a_d^{-1/(d-1)} alpha^{d^n}]`: nearest integer.
    pub bracket_nearest: bool,
    /// Same with the floor.
    pub bracket_floor: bool,
    /// `|| M d a_d a_d^{-1/(d-1)} alpha^{d^n} ||`.
    pub integer_distance: IntervalReal,
    /// `integer_distance * alpha^{d^n}`.
    pub integer_distance_scaled: IntervalReal,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticReport {
    pub residuals: Vec<Residual>,
    /// Upper bound of `|r_n| alpha^{d^n}` over the range.
    pub c_fit: Dyadic,
    /// Same for the integer-distance form.
    pub c_fit_integer_distance: Dyadic,
    /// Least n in the range from which the nearest-integer reading holds throughout.
    pub rounding_from: Option<usize>,
    /// Least n from which each bracket reading holds throughout.
    pub bracket_nearest_from: Option<usize>,
    pub bracket_floor_from: Option<usize>,
    /// Smallest positive integer M with `M d a_d` and `M a_{d-1}` integral.
    #[serde(serialize_with = "crate::ser::int")]
    pub multiplier: BigInt,
}

/// Residuals of the asymptotic formula for `n` in `range` (absolute indices).
pub fn asymptotic_check(
    spec: &RecursionSpec,
    orbit: &Orbit,
    alpha: &IntervalReal,
    range: std::ops::RangeInclusive<usize>,
) -> Result<AsymptoticReport> {
    let d = spec.degree();
    let w = alpha.prec();
    let s = spec.scale(w + 8)?;
    let sinv = s.recip()?;
    let c = spec.shift();
    let dad = BigRational::from_integer(BigInt::from(d)) * spec.lead();
    let mult = dad.denom().lcm(spec.coeff(d - 1).denom());
    let coef = sinv.mul_rational(&(&dad * BigRational::from_integer(mult.clone())));
    let quarter = Dyadic::pow2(-2);
    let mut out = Vec::new();
    for n in range {
        let x = orbit.term(n).ok_or_else(|| Error::InvalidInput(format!("orbit has no term x_{n}")))?;
        let e = num_traits::pow::pow(BigInt::from(d), n);
        let e: u64 = e.try_into().map_err(|_| Error::Unsupported("exponent too large".into()))?;
        let big = alpha.powi(e);
        let main = (&sinv * &big).add_rational(&-c.clone());
        if main.width() >= quarter {
            return Err(precision(format!("alpha^{{d^{n}}} is wider than 1/4; raise the precision of alpha")));
        }
        let residual = (&IntervalReal::from_int(x.clone(), w) - &main).with_prec(w);
        let scaled = &residual.abs() * &big;
        let near = dist_nearest_int(&main)?;
        let rounds_to_term = near.nearest == *x && near.dist.hi() < &Dyadic::pow2(-1);
        let unshifted = &sinv * &big;
        let bracket_nearest = {
            let b = dist_nearest_int(&unshifted)?;
            b.nearest == *x && b.dist.hi() < &Dyadic::pow2(-1)
        };
        let bracket_floor = unshifted.lo().floor() == *x && unshifted.hi().floor() == *x;
        let m = &coef * &big;
        if m.width() >= quarter {
            return Err(precision(format!("integer-distance form at n = {n} is wider than 1/4")));
        }
        let dist = dist_nearest_int(&m)?.dist;
        let dscaled = &dist * &big;
        out.push(Residual {
            n,
            residual,
            scaled,
            rounds_to_term,
            bracket_nearest,
            bracket_floor,
            integer_distance: dist,
            integer_distance_scaled: dscaled,
        });
    }
    let c_fit = out.iter().map(|r| r.scaled.hi().clone()).max().unwrap_or_else(Dyadic::zero);
    let c_int = out.iter().map(|r| r.integer_distance_scaled.hi().clone()).max().unwrap_or_else(Dyadic::zero);
    let from = |ok: &dyn Fn(&Residual) -> bool| -> Option<usize> {
        let last_bad = out.iter().rposition(|r| !ok(r));
        match last_bad {
            None => out.first().map(|r| r.n),
            Some(i) => out.get(i + 1).map(|r| r.n),
        }
    };
    let rounding_from = from(&|r| r.rounds_to_term);
    let bracket_nearest_from = from(&|r| r.bracket_nearest);
    let bracket_floor_from = from(&|r| r.bracket_floor);
    Ok(AsymptoticReport {
        residuals: out,
        c_fit,
        c_fit_integer_distance: c_int,
        rounding_from,
        bracket_nearest_from,
        bracket_floor_from,
        multiplier: mult,
    })
}

/// Working precision that lets `alpha` survive the power `d^n`.
pub fn precision_for_power(spec: &RecursionSpec, orbit: &Orbit, n: usize) -> u32 {
    let bits = orbit.term(n).map(|x| x.bits()).unwrap_or(64);
    let d = spec.degree() as u64;
    let e_bits = 64 - d.pow(n as u32).leading_zeros() as u64;
    (2 * bits + e_bits + 64) as u32
}

/// `kappa = prod_{k >= 0} (1 + 1/x_k^2)^{1/2^{k+1}}` for `x_{k+1} = x_k^2 + 1` from `x_0 = 1`.
pub fn kappa_product(spec: &RecursionSpec, prec: u32) -> Result<ProductResult> {
    let want = RecursionSpec::parse("P = x^2 + 1; x0 = 1").unwrap();
    if *spec != want {
        return Err(Error::Unsupported("the product formula needs P = x^2 + 1 with x0 = 1".into()));
    }
    let w = prec + 24;
    let target = Dyadic::pow2(-(prec as i64) - 4);
    let mut x = BigInt::one();
    let mut log = IntervalReal::zero(w);
    let mut k = 0usize;
    loop {
        // factor k
        let x2 = &x * &x;
        let f = IntervalReal::from_rational(&(BigRational::from_integer(&x2 + 1) / BigRational::from_integer(x2)), w);
        log = &log + &interval_ln(&f, w)?.mul_pow2(-(k as i64) - 1);
        x = &x * &x + 1;
        k += 1;
        // tail over factors k.. with x_k = x: 2^{-k-1} / x^2 * 8/7
        let x2 = &x * &x;
        let tail = Dyadic::div(&Dyadic::from_int(8), &Dyadic::from_int(x2 * 7).mul_pow2(k as i64 + 1), 64, Round::Up);
        if tail <= target {
            let tail_iv = IntervalReal::new(Dyadic::zero(), tail.clone(), w);
            let value = interval_exp(&(&log + &tail_iv), w)?.with_prec(prec);
            return Ok(ProductResult { value, factors: k, tail_bound: tail });
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductResult {
    pub value: IntervalReal,
    /// Number of factors multiplied out.
    pub factors: usize,
    pub tail_bound: Dyadic,
}

/// The first `count` factors multiplied out, without the tail.
pub fn kappa_partial(count: usize, prec: u32) -> Result<IntervalReal> {
    let w = prec + 16;
    let mut x = BigInt::one();
    let mut log = IntervalReal::zero(w);
    for k in 0..count {
        let x2 = &x * &x;
        let f = IntervalReal::from_rational(&(BigRational::from_integer(&x2 + 1) / BigRational::from_integer(x2)), w);
        log = &log + &interval_ln(&f, w)?.mul_pow2(-(k as i64) - 1);
        x = &x * &x + 1;
    }
    Ok(interval_exp(&log, w)?.with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::interval_nth_root;
    use crate::recursion::iterate_orbit;

    fn spec(s: &str) -> RecursionSpec {
        RecursionSpec::parse(s).unwrap()
    }

    fn sqrt(v: i64, prec: u32) -> IntervalReal {
        interval_nth_root(&IntervalReal::from_int(v, prec + 8), 2, prec + 8).unwrap()
    }

    #[test]
    fn golden_ratio_from_lucas_orbit() {
        let g = growth_constant(&spec("P = x^2 - 2; x1 = 3"), 200).unwrap();
        let phi = (&sqrt(5, 220) + &IntervalReal::one(220)).mul_pow2(-1);
        assert!(g.alpha.overlaps(&phi));
        assert!(g.alpha.width() <= g.alpha.hi().mul_pow2(8 - 200));
        assert!(interval_exp(&g.log_alpha, 220).unwrap().overlaps(&g.alpha));
    }

    #[test]
    fn example_two_root_of_two() {
        let g = growth_constant(&spec("P = 2*x^3; x0 = 1"), 128).unwrap();
        assert!(g.alpha.overlaps(&sqrt(2, 140)));
        let g = growth_constant(&spec("P = 4*x^3; x0 = 1"), 128).unwrap();
        assert!(g.alpha.overlaps(&IntervalReal::from_int(2, 128)));
    }

    #[test]
    fn sylvester_matches_direct_root() {
        let sp = spec("P = x^2 - x + 1; x0 = 2");
        let g = growth_constant(&sp, 128).unwrap();
        let dr = direct_root_alpha(&sp, 20, 128).unwrap();
        assert!(g.alpha.overlaps(&dr.value));
        assert!((g.alpha.to_f64() - 1.5979102180).abs() < 1e-9);
        // the partial roots approach gamma
        let g = growth_constant(&sp, 3200).unwrap();
        let gap = |n| (&direct_root_alpha(&sp, n, 3200).unwrap().value - &g.alpha).abs();
        let (d10, d12) = (gap(10), gap(12));
        assert!(d10.hi() < &Dyadic::pow2(-10));
        assert!(d12.hi() < d10.lo());
    }

    #[test]
    fn direct_roots() {
        let r = direct_root_alpha(&spec("P = 2*x^2; x0 = 1"), 3, 64).unwrap();
        // 128^{1/8} = 2^{7/8}
        let want = interval_nth_root(&IntervalReal::from_int(128, 80), 8, 80).unwrap();
        assert!(r.value.overlaps(&want) && r.convergence_caveat);
        let r = direct_root_alpha(&spec("P = x^2; x0 = 3"), 0, 64).unwrap();
        assert!(r.value.contains(&Dyadic::from_int(3)));
    }

    #[test]
    fn lucas_residuals_are_conjugate_powers() {
        let sp = spec("P = x^2 - 2; x1 = 3");
        let orbit = iterate_orbit(&sp, 7).unwrap();
        let prec = precision_for_power(&sp, &orbit, 8);
        let g = growth_constant(&sp, prec).unwrap();
        let rep = asymptotic_check(&sp, &orbit, &g.alpha, 1..=8).unwrap();
        let w = prec + 32;
        let conj = (&IntervalReal::one(w) - &sqrt(5, w)).mul_pow2(-1);
        for r in &rep.residuals {
            assert!(r.residual.overlaps(&conj.powi(1 << r.n)), "n = {}", r.n);
            assert!(r.rounds_to_term);
        }
        assert_eq!(rep.rounding_from, Some(1));
        assert!(rep.c_fit <= Dyadic::from_f64(1.0001));
    }

    #[test]
    fn pure_power_residuals_vanish() {
        let sp = spec("P = 2*x^3; x0 = 1");
        let orbit = iterate_orbit(&sp, 5).unwrap();
        let g = growth_constant(&sp, precision_for_power(&sp, &orbit, 5)).unwrap();
        let rep = asymptotic_check(&sp, &orbit, &g.alpha, 0..=5).unwrap();
        assert!(rep.residuals.iter().all(|r| r.residual.contains_zero()));
    }

    #[test]
    fn sylvester_residuals_bounded() {
        let sp = spec("P = x^2 - x + 1; x0 = 2");
        let orbit = iterate_orbit(&sp, 12).unwrap();
        let g = growth_constant(&sp, precision_for_power(&sp, &orbit, 12)).unwrap();
        let rep = asymptotic_check(&sp, &orbit, &g.alpha, 0..=12).unwrap();
        assert!(rep.c_fit <= Dyadic::one());
        // gamma^{2^n} is about x_n - 1/2: nearest integer works, floor does not
        assert_eq!(rep.multiplier, BigInt::one());
        assert!(rep.residuals.iter().all(|r| r.rounds_to_term && r.bracket_nearest && !r.bracket_floor));
        assert_eq!(rep.rounding_from, Some(0));
        assert_eq!(rep.bracket_floor_from, None);
    }

    #[test]
    fn kappa() {
        assert!(kappa_partial(1, 64).unwrap().overlaps(&sqrt(2, 64)));
        // oracle: 2^{1/2} (5/4)^{1/4} (26/25)^{1/8} (677/676)^{1/16} = 1.50283669858264568...
        let p4 = kappa_partial(4, 64).unwrap();
        assert!((p4.to_f64() - 1.5028366985826457).abs() < 1e-15);
        let sp = spec("P = x^2 + 1; x0 = 1");
        let k = kappa_product(&sp, 200).unwrap();
        let g = growth_constant(&sp, 200).unwrap();
        assert!(k.value.overlaps(&g.alpha));
        assert!(kappa_product(&spec("P = x^2 + 1; x0 = 2"), 64).is_err());
    }

    #[test]
    fn divergence_required() {
        let e = growth_constant(&spec("P = x^2 - 2; x0 = 1"), 64).unwrap_err();
        assert!(matches!(e, Error::DivergenceNotEstablished(_)));
    }
}
