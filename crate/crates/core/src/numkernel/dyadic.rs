use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rounding direction for a single endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
    Nearest,
}

/// An exact number `mantissa * 2^exponent`.
///
/// Values are kept normalized: the mantissa is odd, or zero with exponent zero,
/// so structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: e }
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.mant.trailing_zeros() {
            if tz > 0 {
                self.mant >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Bit length of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Position of the leading bit: `2^(mag-1) <= |x| < 2^mag`. Zero maps to `i64::MIN`.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    /// Mantissas of both operands aligned to the smaller exponent.
    fn aligned(&self, other: &Self) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        let a = &self.mant << ((self.exp - e) as usize);
        let b = &other.mant << ((other.exp - e) as usize);
        (a, b, e)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Dyadic::new(&self.mant * k, self.exp)
    }

    pub fn mul_pow2(&self, e: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + e }
    }

    /// Round to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.mant.bits();
        let prec = prec.max(2) as u64;
        if bits <= prec {
            return self.clone();
        }
        let shift = bits - prec;
        let m = match dir {
            Round::Down => &self.mant >> shift,
            Round::Up => -((-&self.mant) >> shift),
            Round::Nearest => {
                let half = BigInt::one() << (shift - 1);
                (&self.mant + half) >> shift
            }
        };
        Dyadic::new(m, self.exp + shift as i64)
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as usize)
        } else {
            &self.mant >> ((-self.exp) as u64)
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0 || self.is_zero()
    }

    /// Quotient `a / b` rounded to `prec` significant bits.
    pub fn div(a: &Self, b: &Self, prec: u32, dir: Round) -> Self {
        assert!(!b.is_zero(), "dyadic division by zero");
        if a.is_zero() {
            return Dyadic::zero();
        }
        let prec = prec.max(2) as i64;
        // numerator shifted so the integer quotient carries prec+2 bits
        let shift = (prec + 2 + b.mant.bits() as i64 - a.mant.bits() as i64).max(0);
        let num = &a.mant << (shift as usize);
        let den = &b.mant;
        let (q, r) = num.div_mod_floor(den);
        let q = match dir {
            Round::Down => q,
            Round::Up => {
                if r.is_zero() {
                    q
                } else {
                    q + 1
                }
            }
            Round::Nearest => {
                let twice: BigInt = &r * 2;
                if twice.abs() >= den.abs() {
                    q + 1
                } else {
                    q
                }
            }
        };
        Dyadic::new(q, a.exp - b.exp - shift).round(prec as u32, dir)
    }

    /// Rational `r` rounded to `prec` significant bits.
    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> Self {
        Dyadic::div(
            &Dyadic::from_int(r.numer().clone()),
            &Dyadic::from_int(r.denom().clone()),
            prec,
            dir,
        )
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as usize))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as usize))
        }
    }

    /// Approximate conversion, saturating to infinity for large magnitudes.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(60, Round::Nearest);
        let m: f64 = num_traits::ToPrimitive::to_f64(&r.mant).unwrap_or(f64::NAN);
        let e = r.exp.clamp(-2200, 2200) as i32;
        m * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 || !v.is_finite() {
            return Dyadic::zero();
        }
        let bits = v.to_bits();
        let sign = if (bits >> 63) != 0 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & 0xf_ffff_ffff_ffff) as i64;
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), raw_exp - 1075)
        };
        Dyadic::new(BigInt::from(sign * mant), exp)
    }

    pub fn lesser<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn greater<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Integer square root bound: sqrt of a nonnegative value, rounded.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Self {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let target = 2 * (prec as i64 + 2);
        let mut shift = (target - self.mant.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << (shift as usize);
        let r = num_integer::Roots::sqrt(&m);
        let exact = &r * &r == m;
        let r = if dir == Round::Up && !exact { r + 1 } else { r };
        Dyadic::new(r, (self.exp - shift) / 2).round(prec, dir)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same sign: compare magnitudes first
        let (ma, mb) = (self.magnitude(), other.magnitude());
        if ma != mb {
            let c = ma.cmp(&mb);
            return if sa > 0 { c } else { c.reverse() };
        }
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}
