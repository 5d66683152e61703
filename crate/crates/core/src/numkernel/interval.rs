use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// A certified enclosure `[lo, hi]` of a real number.
///
/// Every arithmetic operation rounds outward to `prec` significant bits, so
/// the exact image of the inputs is always contained in the result.
#[derive(Clone, PartialEq, Eq)]
pub struct IntervalReal {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl IntervalReal {
    /// Interval from endpoints that are already known to bracket the value.
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        IntervalReal {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn point(d: Dyadic, prec: u32) -> Self {
        IntervalReal::new(d.clone(), d, prec)
    }

    pub fn from_int(v: impl Into<BigInt>, prec: u32) -> Self {
        IntervalReal::point(Dyadic::from_int(v), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        IntervalReal {
            lo: Dyadic::from_rational(r, prec, Round::Down),
            hi: Dyadic::from_rational(r, prec, Round::Up),
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        IntervalReal::point(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        IntervalReal::point(Dyadic::one(), prec)
    }

    /// `[-r, r]`.
    pub fn symmetric(r: Dyadic, prec: u32) -> Self {
        let r = r.abs();
        IntervalReal::new(r.neg(), r, prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Same enclosure, new working precision for subsequent operations.
    pub fn with_prec(&self, prec: u32) -> Self {
        IntervalReal::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn radius(&self) -> Dyadic {
        self.width().mul_pow2(-1)
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().greater(&self.hi.abs()).clone()
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            self.lo.abs().lesser(&self.hi.abs()).clone()
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    /// True when `other` lies inside `self`.
    pub fn encloses(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        if !self.overlaps(other) {
            return None;
        }
        Some(IntervalReal {
            lo: self.lo.greater(&other.lo).clone(),
            hi: self.hi.lesser(&other.hi).clone(),
            prec: self.prec.max(other.prec),
        })
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Self) -> Self {
        IntervalReal {
            lo: self.lo.lesser(&other.lo).clone(),
            hi: self.hi.greater(&other.hi).clone(),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Certainly less than `other` at every point.
    pub fn lt(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    pub fn gt(&self, other: &Self) -> bool {
        self.lo > other.hi
    }

    pub fn abs(&self) -> Self {
        if self.lo.is_negative() && self.hi.is_positive() {
            IntervalReal { lo: Dyadic::zero(), hi: self.mag(), prec: self.prec }
        } else if self.hi.is_negative() || (self.hi.is_zero() && self.lo.is_negative()) {
            -self
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Self {
        let a = self.abs();
        IntervalReal {
            lo: a.lo.mul(&a.lo).round(self.prec, Round::Down),
            hi: a.hi.mul(&a.hi).round(self.prec, Round::Up),
            prec: self.prec,
        }
    }

    pub fn mul_pow2(&self, e: i64) -> Self {
        IntervalReal { lo: self.lo.mul_pow2(e), hi: self.hi.mul_pow2(e), prec: self.prec }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        let a = self.lo.mul_int(k);
        let b = self.hi.mul_int(k);
        let (lo, hi) = if k.is_negative() { (b, a) } else { (a, b) };
        IntervalReal::new(lo, hi, self.prec)
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        self * &IntervalReal::from_rational(r, self.prec)
    }

    pub fn add_rational(&self, r: &BigRational) -> Self {
        self + &IntervalReal::from_rational(r, self.prec)
    }

    pub fn recip(&self) -> Result<Self> {
        IntervalReal::one(self.prec).div(self)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::Domain("interval division by an interval containing zero".into()));
        }
        let prec = self.prec.max(other.prec);
        let cands = [(&self.lo, &other.lo), (&self.lo, &other.hi), (&self.hi, &other.lo), (&self.hi, &other.hi)];
        let lo = cands
            .iter()
            .map(|(a, b)| Dyadic::div(a, b, prec, Round::Down))
            .min()
            .unwrap();
        let hi = cands
            .iter()
            .map(|(a, b)| Dyadic::div(a, b, prec, Round::Up))
            .max()
            .unwrap();
        Ok(IntervalReal { lo, hi, prec })
    }

    pub fn div_int(&self, k: &BigInt) -> Result<Self> {
        self.div(&IntervalReal::from_int(k.clone(), self.prec))
    }

    /// Natural power.
    pub fn powi(&self, n: u64) -> Self {
        if n == 0 {
            return IntervalReal::one(self.prec);
        }
        let pow_dir = |d: &Dyadic, dir: Round| -> Dyadic {
            // d >= 0; monotone in each squaring step
            let mut base = d.clone();
            let mut acc = Dyadic::one();
            let mut k = n;
            while k > 0 {
                if k & 1 == 1 {
                    acc = acc.mul(&base).round(self.prec, dir);
                }
                k >>= 1;
                if k > 0 {
                    base = base.mul(&base).round(self.prec, dir);
                }
            }
            acc
        };
        if !self.lo.is_negative() {
            IntervalReal { lo: pow_dir(&self.lo, Round::Down), hi: pow_dir(&self.hi, Round::Up), prec: self.prec }
        } else if !self.hi.is_positive() {
            let a = (-self).powi(n);
            if n % 2 == 0 {
                a
            } else {
                -&a
            }
        } else if n % 2 == 0 {
            IntervalReal { lo: Dyadic::zero(), hi: pow_dir(&self.mag(), Round::Up), prec: self.prec }
        } else {
            IntervalReal {
                lo: pow_dir(&self.lo.abs(), Round::Up).neg(),
                hi: pow_dir(&self.hi, Round::Up),
                prec: self.prec,
            }
        }
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.lo.is_negative() {
            return Err(Error::Domain("square root of a negative interval".into()));
        }
        Ok(IntervalReal {
            lo: self.lo.sqrt(self.prec, Round::Down),
            hi: self.hi.sqrt(self.prec, Round::Up),
            prec: self.prec,
        })
    }

    pub fn max_with(&self, other: &Self) -> Self {
        IntervalReal {
            lo: self.lo.greater(&other.lo).clone(),
            hi: self.hi.greater(&other.hi).clone(),
            prec: self.prec.max(other.prec),
        }
    }

    /// Does the interval contain an integer?
    pub fn contains_integer(&self) -> bool {
        let c = self.lo.ceil();
        Dyadic::from_int(c) <= self.hi
    }

    /// `log2` of the width, rounded up; `None` for a point interval.
    pub fn width_log2(&self) -> Option<i64> {
        let w = self.width();
        if w.is_zero() {
            None
        } else {
            Some(w.magnitude())
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    /// Closed interval from rational endpoints.
    pub fn from_rational_bounds(lo: &BigRational, hi: &BigRational, prec: u32) -> Self {
        IntervalReal {
            lo: Dyadic::from_rational(lo, prec, Round::Down),
            hi: Dyadic::from_rational(hi, prec, Round::Up),
            prec,
        }
    }

    pub fn is_exact_integer(&self) -> Option<BigInt> {
        if self.is_point() && self.lo.is_integer() {
            Some(self.lo.floor())
        } else {
            None
        }
    }
}

impl<'a> Add<&'a IntervalReal> for &'a IntervalReal {
    type Output = IntervalReal;
    fn add(self, o: &IntervalReal) -> IntervalReal {
        let prec = self.prec.max(o.prec);
        IntervalReal {
            lo: self.lo.add(&o.lo).round(prec, Round::Down),
            hi: self.hi.add(&o.hi).round(prec, Round::Up),
            prec,
        }
    }
}

impl<'a> Sub<&'a IntervalReal> for &'a IntervalReal {
    type Output = IntervalReal;
    fn sub(self, o: &IntervalReal) -> IntervalReal {
        let prec = self.prec.max(o.prec);
        IntervalReal {
            lo: self.lo.sub(&o.hi).round(prec, Round::Down),
            hi: self.hi.sub(&o.lo).round(prec, Round::Up),
            prec,
        }
    }
}

impl<'a> Mul<&'a IntervalReal> for &'a IntervalReal {
    type Output = IntervalReal;
    fn mul(self, o: &IntervalReal) -> IntervalReal {
        let prec = self.prec.max(o.prec);
        let p = [self.lo.mul(&o.lo), self.lo.mul(&o.hi), self.hi.mul(&o.lo), self.hi.mul(&o.hi)];
        let lo = p.iter().min().unwrap().round(prec, Round::Down);
        let hi = p.iter().max().unwrap().round(prec, Round::Up);
        IntervalReal { lo, hi, prec }
    }
}

impl Neg for &IntervalReal {
    type Output = IntervalReal;
    fn neg(self) -> IntervalReal {
        IntervalReal { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<IntervalReal> for IntervalReal {
            type Output = IntervalReal;
            fn $m(self, o: IntervalReal) -> IntervalReal {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a IntervalReal> for IntervalReal {
            type Output = IntervalReal;
            fn $m(self, o: &IntervalReal) -> IntervalReal {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntervalReal {
    type Output = IntervalReal;
    fn neg(self) -> IntervalReal {
        -&self
    }
}

impl fmt::Debug for IntervalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

impl fmt::Display for IntervalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::decimal::to_mid_rad(self))
    }
}

/// `Σ` of a slice of intervals, at the precision of the first term.
pub fn sum(items: &[IntervalReal], prec: u32) -> IntervalReal {
    items.iter().fold(IntervalReal::zero(prec), |acc, x| &acc + x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn third_times_three_contains_one() {
        let t = IntervalReal::from_rational(&q(1, 3), 64);
        let r = &t * &IntervalReal::from_int(3, 64);
        assert!(r.contains(&Dyadic::one()));
        assert!(!r.is_point());
    }

    #[test]
    fn division_by_zero_interval_fails() {
        let z = IntervalReal::new(Dyadic::from(-1), Dyadic::from(1), 32);
        assert!(IntervalReal::one(32).div(&z).is_err());
    }

    #[test]
    fn odd_power_of_mixed_interval() {
        let x = IntervalReal::new(Dyadic::from(-2), Dyadic::from(3), 32);
        let c = x.powi(3);
        assert!(c.contains(&Dyadic::from(-8)) && c.contains(&Dyadic::from(27)));
        let e = x.powi(2);
        assert_eq!(e.lo(), &Dyadic::zero());
    }

    #[test]
    fn sqrt_two_bracket() {
        let s = IntervalReal::from_int(2, 80).sqrt().unwrap();
        let sq = s.square();
        assert!(sq.contains(&Dyadic::from(2)));
        assert!(s.width().magnitude() <= -77);
    }

    #[test]
    fn abs_of_negative() {
        let x = IntervalReal::new(Dyadic::from(-3), Dyadic::from(-1), 16);
        assert_eq!(x.abs().lo(), &Dyadic::from(1));
    }
}
