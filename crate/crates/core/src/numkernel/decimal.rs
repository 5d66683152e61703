//! Decimal `midpoint±radius` rendering and parsing of enclosures.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::IntervalReal;
use crate::error::{Error, Result};

const MAX_DIGITS: i64 = 4000;

fn pow10(k: u32) -> BigInt {
    num_traits::pow::pow(BigInt::from(10), k as usize)
}

/// Round a rational to `k` fractional digits (nearest), returning the scaled integer.
fn scaled_nearest(r: &BigRational, k: u32) -> BigInt {
    let s = r * BigRational::from_integer(pow10(k));
    let two = BigInt::from(2);
    // floor(s + 1/2)
    let num = s.numer() * &two + s.denom();
    let den = s.denom() * &two;
    num.div_floor(&den)
}

fn format_scaled(v: &BigInt, k: u32) -> String {
    let neg = v.is_negative();
    let digits = v.abs().to_string();
    let k = k as usize;
    let body = if k == 0 {
        digits
    } else if digits.len() > k {
        format!("{}.{}", &digits[..digits.len() - k], &digits[digits.len() - k..])
    } else {
        format!("0.{}{}", "0".repeat(k - digits.len()), digits)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// floor(log10(r)) for r > 0.
fn floor_log10(r: &BigRational) -> i64 {
    let est = {
        let bits = r.numer().bits() as f64 - r.denom().bits() as f64;
        (bits * std::f64::consts::LOG10_2).floor() as i64
    };
    let mut e = est - 1;
    let ten = BigRational::from_integer(BigInt::from(10));
    let pow = |e: i64| -> BigRational {
        if e >= 0 {
            num_traits::pow::pow(ten.clone(), e as usize)
        } else {
            num_traits::pow::pow(ten.clone(), (-e) as usize).recip()
        }
    };
    while &pow(e + 1) <= r {
        e += 1;
    }
    while &pow(e) > r {
        e -= 1;
    }
    e
}

/// Scientific notation with three significant digits, rounded away from zero
/// (so a printed upper bound stays an upper bound), e.g. `3.21e-905`.
pub fn to_sci(d: &super::dyadic::Dyadic) -> String {
    sci(d, true)
}

/// As [`to_sci`] but rounded toward zero, for printing lower bounds of magnitudes.
pub fn to_sci_toward_zero(d: &super::dyadic::Dyadic) -> String {
    sci(d, false)
}

fn sci(d: &super::dyadic::Dyadic, away: bool) -> String {
    let r = d.to_rational();
    if r.is_zero() {
        return "0".into();
    }
    let a = r.abs();
    let e = floor_log10(&a);
    let unit = |k: i64| {
        if k >= 0 {
            BigRational::from_integer(pow10(k as u32))
        } else {
            BigRational::new(BigInt::one(), pow10((-k) as u32))
        }
    };
    let scaled = &a / unit(e - 2);
    let mut m = if away { scaled.ceil() } else { scaled.floor() }.to_integer();
    let mut e = e;
    if m >= BigInt::from(1000) {
        m = (m + 9) / 10;
        e += 1;
    }
    let ds = m.to_string();
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{}.{}e{e}", &ds[..1], &ds[1..])
}

/// Render as `mid±rad`, e.g. `1.6180339887498949±3e-17`. The rendered
/// interval always contains the original one.
pub fn to_mid_rad(x: &IntervalReal) -> String {
    let mid = x.midpoint().to_rational();
    let rad = x.radius().to_rational();
    if rad.is_zero() {
        // exact dyadic: print all digits when short enough
        let e = -x.midpoint().exponent().min(0);
        if e <= MAX_DIGITS {
            let k = e as u32;
            return format!("{}±0", format_scaled(&scaled_nearest(&mid, k), k));
        }
    }
    let e10 = if rad.is_zero() { -MAX_DIGITS } else { floor_log10(&rad) };
    let k = (1 - e10).clamp(0, MAX_DIGITS) as u32;
    let scaled = scaled_nearest(&mid, k);
    let printed = BigRational::new(scaled.clone(), pow10(k));
    let total = rad + (&printed - &mid).abs();
    // round total up to one significant digit
    let te = floor_log10(&total);
    let unit = if te >= 0 {
        BigRational::from_integer(pow10(te as u32))
    } else {
        BigRational::new(BigInt::one(), pow10((-te) as u32))
    };
    let digit = (&total / &unit).ceil().to_integer();
    let (digit, te) = if digit >= BigInt::from(10) { (BigInt::one(), te + 1) } else { (digit, te) };
    format!("{}±{}e{}", format_scaled(&scaled, k), digit, te)
}

/// Parse a plain decimal (`-12.5`, `3`, `1e-3`) or fraction (`7/3`) into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(Error::Parse(format!("bad number {s:?}")));
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad number {s:?}")));
    }
    let digits: BigInt = format!("{ip}{fp}0").parse::<BigInt>().unwrap() / 10;
    let e = exp - fp.len() as i64;
    let mut r = if e >= 0 {
        BigRational::from_integer(digits * pow10(e as u32))
    } else {
        BigRational::new(digits, pow10((-e) as u32))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Number of fractional digits written in a decimal literal.
pub fn fractional_digits(s: &str) -> u32 {
    let s = s.trim();
    let mant = s.split(['e', 'E']).next().unwrap_or(s);
    let exp: i64 = s.split(['e', 'E']).nth(1).and_then(|e| e.parse().ok()).unwrap_or(0);
    let f = mant.split_once('.').map(|(_, f)| f.len() as i64).unwrap_or(0);
    (f - exp).max(0) as u32
}

/// Parse `mid±rad` (or `mid+-rad`) back into an enclosure at `prec` bits.
pub fn parse_mid_rad(s: &str, prec: u32) -> Result<IntervalReal> {
    let (m, r) = s
        .split_once('±')
        .or_else(|| s.split_once("+-"))
        .ok_or_else(|| Error::Parse(format!("expected mid±rad, got {s:?}")))?;
    let mid = parse_rational(m)?;
    let rad = parse_rational(r)?.abs();
    Ok(IntervalReal::from_rational_bounds(&(&mid - &rad), &(&mid + &rad), prec))
}

/// A decimal literal read as the interval of numbers that round to it:
/// `1.4142` becomes `1.4142 ± 0.00005`.
pub fn parse_decimal_enclosure(s: &str, prec: u32) -> Result<IntervalReal> {
    let mid = parse_rational(s)?;
    if s.contains('/') {
        return Ok(IntervalReal::from_rational(&mid, prec));
    }
    let k = fractional_digits(s);
    let half = BigRational::new(BigInt::one(), pow10(k) * 2);
    Ok(IntervalReal::from_rational_bounds(&(&mid - &half), &(&mid + &half), prec))
}
