//! Certified `ln`, `exp` and n-th roots on [`IntervalReal`].
//!
//! `ln` reduces a point `v = m * 2^k` with `m` in `[2/3, 4/3)` and sums the
//! `atanh` series for `ln m` and `ln 2` with an explicit tail term. `exp`
//! halves the argument until it is tiny, sums Taylor terms with a remainder
//! bound, then squares back. Interval versions evaluate the monotone point
//! functions at both endpoints.

use num_bigint::BigInt;

use num_traits::{One, Signed};

use super::dyadic::{Dyadic, Round};
use super::interval::IntervalReal;
use crate::error::{Error, Result};

fn guard_bits(prec: u32) -> u32 {
    prec + 24 + (64 - (prec as u64).leading_zeros())
}

/// `atanh(t)` for a point interval `t` with `|t| <= 1/3`, at precision `w`.
fn atanh_series(t: &IntervalReal, w: u32) -> IntervalReal {
    let t = t.with_prec(w);
    let t2 = t.square();
    let tmag = t.mag();
    if tmag.is_zero() {
        return IntervalReal::zero(w);
    }
    let mut sum = IntervalReal::zero(w);
    let mut power = t.clone();
    let mut j: u64 = 0;
    // stop when |t|^(2j+1) drops below 2^-(w+2)
    let threshold = Dyadic::pow2(-(w as i64) - 2);
    loop {
        let term = power.div_int(&BigInt::from(2 * j + 1)).expect("odd denominator");
        sum = &sum + &term;
        power = &power * &t2;
        j += 1;
        if power.mag() < threshold {
            break;
        }
    }
    // remaining terms: Σ_{i>=j} |t|^(2i+1)/(2i+1) <= |t|^(2j+1) / (1 - t^2)
    let tail_num = power.mag();
    let one_minus = Dyadic::one().sub(&t2.hi().clone());
    let tail = Dyadic::div(&tail_num, &one_minus, 32, Round::Up);
    &sum + &IntervalReal::symmetric(tail, w)
}

/// Enclosure of `ln 2` at working precision `w`.
pub fn ln2(w: u32) -> IntervalReal {
    let third = IntervalReal::from_int(1, w).div_int(&BigInt::from(3)).unwrap();
    atanh_series(&third, w).mul_pow2(1)
}

fn ln_point(v: &Dyadic, w: u32) -> Result<IntervalReal> {
    if !v.is_positive() {
        return Err(Error::Domain("logarithm of a nonpositive number".into()));
    }
    if *v == Dyadic::one() {
        return Ok(IntervalReal::zero(w));
    }
    // v = mant * 2^exp = (mant / 2^bits) * 2^(bits + exp), fraction in [1/2, 1)
    let bits = v.bits() as i64;
    let mut k = v.exponent() + bits;
    let mut m = Dyadic::new(v.mantissa().clone(), -bits);
    if m.mul_int(&BigInt::from(3)) < Dyadic::from(2) {
        m = m.mul_pow2(1);
        k -= 1;
    }
    let mi = IntervalReal::point(m, w);
    let one = IntervalReal::one(w);
    let t = (&mi - &one).div(&(&mi + &one))?;
    let ln_m = atanh_series(&t, w).mul_pow2(1);
    if k == 0 {
        return Ok(ln_m);
    }
    let wk = w + 64 - (k.unsigned_abs()).leading_zeros();
    let ln_k = ln2(wk).mul_int(&BigInt::from(k));
    Ok(&ln_m + &ln_k)
}

/// Certified natural logarithm of an interval with positive lower endpoint.
pub fn interval_ln(x: &IntervalReal, prec: u32) -> Result<IntervalReal> {
    if !x.lo().is_positive() {
        return Err(Error::Domain("ln of an interval that is not strictly positive".into()));
    }
    let w = guard_bits(prec);
    let lo = ln_point(x.lo(), w)?;
    let hi = if x.is_point() { lo.clone() } else { ln_point(x.hi(), w)? };
    Ok(IntervalReal::new(lo.lo().clone(), hi.hi().clone(), prec))
}

fn exp_point(v: &Dyadic, w: u32) -> Result<IntervalReal> {
    if v.is_zero() {
        return Ok(IntervalReal::one(w));
    }
    let mag = v.magnitude();
    if mag > 40 {
        return Err(Error::Domain("exp argument too large".into()));
    }
    // r = v / 2^s with |r| < 2^-8
    let s = (mag + 8).max(0);
    let ws = w + s as u32 + 8;
    let r = IntervalReal::point(v.mul_pow2(-s), ws);
    let mut sum = IntervalReal::one(ws);
    let mut term = IntervalReal::one(ws);
    let mut k: u64 = 1;
    let threshold = Dyadic::pow2(-(ws as i64) - 2);
    loop {
        term = (&term * &r).div_int(&BigInt::from(k))?;
        sum = &sum + &term;
        k += 1;
        if term.mag() < threshold {
            break;
        }
    }
    // remainder of Σ_{j>=k} r^j/j! <= 2 |r|^k / k! <= 2 |last term| for |r| < 1/2
    let tail = term.mag().mul_pow2(1);
    let mut e = &sum + &IntervalReal::symmetric(tail, ws);
    for _ in 0..s {
        e = e.square();
    }
    Ok(e)
}

/// Certified exponential.
pub fn interval_exp(x: &IntervalReal, prec: u32) -> Result<IntervalReal> {
    let w = guard_bits(prec);
    let lo = exp_point(x.lo(), w)?;
    let hi = if x.is_point() { lo.clone() } else { exp_point(x.hi(), w)? };
    Ok(IntervalReal::new(lo.lo().clone(), hi.hi().clone(), prec))
}

/// `v^(1/n)` for a nonnegative point, rounded in direction `dir` to `prec` bits.
fn root_point(v: &Dyadic, n: u32, prec: u32, dir: Round) -> Dyadic {
    if v.is_zero() || n == 1 {
        return v.round(prec, dir);
    }
    let n64 = n as i64;
    // rescale mantissa so the integer root carries prec+2 bits and the
    // leftover exponent is divisible by n
    let target = n64 * (prec as i64 + 2);
    let mut shift = (target - v.bits() as i64).max(0);
    shift += (v.exponent() - shift).rem_euclid(n64);
    let m: BigInt = v.mantissa() << (shift as usize);
    let r = num_integer::Roots::nth_root(&m, n);
    let exact = num_traits::pow::pow(r.clone(), n as usize) == m;
    let r = if dir == Round::Up && !exact { r + BigInt::one() } else { r };
    Dyadic::new(r, (v.exponent() - shift) / n64).round(prec, dir)
}

/// Certified `x^(1/n)` for `x >= 0`.
pub fn interval_nth_root(x: &IntervalReal, n: u32, prec: u32) -> Result<IntervalReal> {
    if n == 0 {
        return Err(Error::InvalidInput("root index must be positive".into()));
    }
    if x.lo().is_negative() {
        return Err(Error::Domain("n-th root of an interval with negative part".into()));
    }
    let w = prec + 4;
    let lo = root_point(x.lo(), n, w, Round::Down);
    let hi = root_point(x.hi(), n, w, Round::Up);
    Ok(IntervalReal::new(lo, hi, prec))
}

/// Exact rational n-th root when both numerator and denominator are perfect powers.
pub fn rational_nth_root(r: &num_rational::BigRational, n: u32) -> Option<num_rational::BigRational> {
    if r.is_negative() {
        return None;
    }
    let num = num_integer::Roots::nth_root(r.numer(), n);
    let den = num_integer::Roots::nth_root(r.denom(), n);
    let ok = num_traits::pow::pow(num.clone(), n as usize) == *r.numer()
        && num_traits::pow::pow(den.clone(), n as usize) == *r.denom();
    ok.then(|| num_rational::BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    /// Independent ln 2 oracle: ln 2 = Σ_{k>=0} 2/(2k+1) (1/3)^(2k+1), summed exactly in
    /// rationals with remainder bound (1/3)^(2K+3) * 9/8 * 2.
    fn ln2_oracle(terms: u32) -> (BigRational, BigRational) {
        let third = BigRational::new(1.into(), 3.into());
        let mut s = BigRational::zero();
        let mut p = third.clone();
        for k in 0..terms {
            s += &p * BigRational::new(2.into(), (2 * k + 1).into());
            p = &p * &third * &third;
        }
        let tail = &p * BigRational::new(9.into(), 4.into());
        (&s - &tail, &s + &tail)
    }

    #[test]
    fn ln_of_one_is_zero() {
        let r = interval_ln(&IntervalReal::one(64), 64).unwrap();
        assert!(r.contains(&Dyadic::zero()));
        assert!(r.width() <= Dyadic::pow2(3 - 64));
    }

    #[test]
    fn ln_two_matches_series_oracle() {
        let r = interval_ln(&IntervalReal::from_int(2, 64), 64).unwrap();
        let (lo, hi) = ln2_oracle(40);
        assert!(r.lo().to_rational() <= hi && lo <= r.hi().to_rational());
        assert!(r.width() <= Dyadic::pow2(3 - 64));
        assert!((r.to_f64() - 0.6931471805599453).abs() < 1e-15);
    }

    #[test]
    fn ln_power_identity() {
        let y = IntervalReal::from_int(3, 128);
        let a = interval_ln(&y.powi(4), 128).unwrap();
        let b = interval_ln(&y, 128).unwrap().mul_int(&BigInt::from(4));
        assert!(a.overlaps(&b));
    }

    #[test]
    fn ln_nonpositive_is_domain_error() {
        assert!(matches!(interval_ln(&IntervalReal::zero(32), 32), Err(Error::Domain(_))));
    }

    #[test]
    fn exp_inverts_ln() {
        for v in [1i64, 2, 7, 1000] {
            let x = IntervalReal::from_int(v, 200);
            let e = interval_exp(&interval_ln(&x, 200).unwrap(), 200).unwrap();
            assert!(e.contains(&Dyadic::from(v)));
            assert!(e.width() <= Dyadic::pow2(20 - 200).mul_int(&BigInt::from(v)));
        }
    }

    #[test]
    fn exact_square_root() {
        let r = interval_nth_root(&IntervalReal::from_int(4, 64), 2, 64).unwrap();
        assert!(r.contains(&Dyadic::from(2)));
        assert!(r.width() <= Dyadic::pow2(3 - 64));
        let one = interval_nth_root(&IntervalReal::one(64), 7, 64).unwrap();
        assert!(one.contains(&Dyadic::one()));
    }

    /// Oracle: integer Newton iteration for floor(sqrt(2 * 4^p)).
    fn isqrt_newton(n: &BigInt) -> BigInt {
        let mut x = n.clone();
        let mut y: BigInt = (&x + BigInt::one()) >> 1u32;
        while y < x {
            x = y.clone();
            y = (&x + n / &x) >> 1u32;
        }
        x
    }

    #[test]
    fn sqrt_two_matches_newton_oracle() {
        let r = interval_nth_root(&IntervalReal::from_int(2, 64), 2, 64).unwrap();
        let p = 70usize;
        let s = isqrt_newton(&(BigInt::from(2) << (2 * p)));
        let lo = Dyadic::new(s.clone(), -(p as i64));
        let hi = Dyadic::new(s + 1, -(p as i64));
        assert!(r.lo() <= &hi && &lo <= r.hi());
        assert!((r.to_f64() - 1.4142135623730951).abs() < 1e-15);
    }

    #[test]
    fn negative_root_is_domain_error() {
        let x = IntervalReal::from_int(-1, 32);
        assert!(matches!(interval_nth_root(&x, 2, 32), Err(Error::Domain(_))));
    }
}
