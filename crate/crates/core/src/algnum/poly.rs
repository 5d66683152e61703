//! Dense univariate polynomials over the integers and the rationals.
//!
//! Coefficients are stored lowest degree first.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numkernel::{decimal::parse_rational, Dyadic, IntervalReal};

/// A polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Self {
        QPoly::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        QPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        QPoly::new(v)
    }

    pub fn pow(&self, mut k: u32) -> QPoly {
        let mut acc = QPoly::constant(BigRational::one());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        let lead_inv = d.lead().recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (QPoly::constant(BigRational::one()), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::constant(BigRational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let inv = r0.lead().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// `self(other(x))`.
    pub fn compose(&self, other: &QPoly) -> QPoly {
        self.coeffs.iter().rev().fold(QPoly::zero(), |acc, c| acc.mul(other).add(&QPoly::constant(c.clone())))
    }

    pub fn eval_interval(&self, x: &IntervalReal) -> IntervalReal {
        let prec = x.prec();
        self.coeffs
            .iter()
            .rev()
            .fold(IntervalReal::zero(prec), |acc, c| &(&acc * x) + &IntervalReal::from_rational(c, prec))
    }

    /// Squarefree part `p / gcd(p, p')`, monic.
    pub fn squarefree(&self) -> QPoly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }

    /// Scale to a primitive integer polynomial with positive leading coefficient.
    pub fn to_int_primitive(&self) -> IntPolynomial {
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        IntPolynomial::new(ints).primitive_part()
    }

    /// Power sums `p_0..=p_count` of the roots (with multiplicity), via Newton's identities.
    pub fn power_sums(&self, count: usize) -> Vec<BigRational> {
        let m = self.monic();
        let n = m.deg();
        // c[j] coefficient of x^j in the monic polynomial
        let c = &m.coeffs;
        let mut p = Vec::with_capacity(count + 1);
        p.push(BigRational::from_integer(BigInt::from(n)));
        for k in 1..=count {
            let mut s = BigRational::zero();
            for i in 1..k.min(n + 1) {
                s += &c[n - i] * &p[k - i];
            }
            if k <= n {
                s += &c[n - k] * BigRational::from_integer(BigInt::from(k));
            }
            p.push(-s);
        }
        p
    }

    /// Monic polynomial of degree `n` with power sums `p[1..=n]`.
    pub fn from_power_sums(p: &[BigRational], n: usize) -> QPoly {
        let mut c = vec![BigRational::zero(); n + 1];
        c[n] = BigRational::one();
        for k in 1..=n {
            let mut s = p[k].clone();
            for i in 1..k {
                s += &c[n - i] * &p[k - i];
            }
            c[n - k] = -s / BigRational::from_integer(BigInt::from(k));
        }
        QPoly::new(c)
    }
}

/// A polynomial with integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x - r` scaled to integers, for rational `r`.
    pub fn linear_for(r: &BigRational) -> Self {
        IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()]).primitive_part()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().abs().is_one()
    }

    /// gcd of the coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        IntPolynomial::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn derivative(&self) -> Self {
        IntPolynomial::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return IntPolynomial::new(vec![]);
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPolynomial::new(v)
    }

    /// Exact quotient over the integers, if `d` divides `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.to_qpoly().div_rem(&d.to_qpoly());
        if !r.is_zero() || q.coeffs().iter().any(|c| !c.is_integer()) {
            return None;
        }
        Some(IntPolynomial::new(q.coeffs().iter().map(|c| c.to_integer()).collect()))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.to_qpoly().eval(x)
    }

    pub fn eval_interval(&self, x: &IntervalReal) -> IntervalReal {
        let prec = x.prec();
        self.coeffs
            .iter()
            .rev()
            .fold(IntervalReal::zero(prec), |acc, c| &(&acc * x) + &IntervalReal::from_int(c.clone(), prec))
    }

    /// `x^n p(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPolynomial::new(c)
    }

    /// `p(x) = ±x^n p(1/x)`: roots closed under `z -> 1/z`.
    pub fn is_reciprocal(&self) -> bool {
        let r = self.reversed();
        r.coeffs.len() == self.coeffs.len() && (r == *self || r == self.neg())
    }

    pub fn neg(&self) -> Self {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// Primitive squarefree part.
    pub fn squarefree_part(&self) -> Self {
        self.to_qpoly().squarefree().to_int_primitive()
    }

    pub fn is_squarefree(&self) -> bool {
        self.to_qpoly().is_squarefree()
    }

    /// Trace of a root: sum of all roots, `-a_{n-1}/a_n`.
    pub fn root_sum(&self) -> BigRational {
        let n = self.degree();
        -BigRational::new(self.coeff(n - 1), self.lead())
    }

    /// Maximum absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Euclidean norm squared of the coefficient vector.
    pub fn norm2_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let q = parse_poly(s, "x")?;
        if q.coeffs().iter().any(|c| !c.is_integer()) {
            return Err(Error::Parse(format!("integer coefficients required in {s:?}")));
        }
        Ok(IntPolynomial::new(q.coeffs().iter().map(|c| c.to_integer()).collect()))
    }

    /// Upper bound on the modulus of every root (Cauchy).
    pub fn root_bound(&self) -> Dyadic {
        let lead = BigRational::from_integer(self.lead().abs());
        let m = self.coeffs[..self.degree()]
            .iter()
            .map(|c| BigRational::from_integer(c.abs()) / &lead)
            .max()
            .unwrap_or_else(BigRational::zero);
        Dyadic::from_rational(&(m + BigRational::one()), 32, crate::numkernel::Round::Up)
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn write_terms<T: fmt::Display + Signed + Zero + One + PartialEq>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[T],
    var: &str,
) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        let show_coeff = k == 0 || !a.is_one();
        if show_coeff {
            write!(f, "{a}")?;
            if k > 0 {
                write!(f, "*")?;
            }
        }
        match k {
            0 => {}
            1 => write!(f, "{var}")?,
            _ => write!(f, "{var}^{k}")?,
        }
    }
    Ok(())
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, "x")
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, "x")
    }
}

struct InVar<'a, T>(&'a [T], &'a str);

impl<T: fmt::Display + Signed + Zero + One + PartialEq> fmt::Display for InVar<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.0, self.1)
    }
}

impl QPoly {
    /// Render with a variable name other than `x`.
    pub fn to_string_in(&self, var: &str) -> String {
        InVar(&self.coeffs, var).to_string()
    }
}

impl IntPolynomial {
    pub fn to_string_in(&self, var: &str) -> String {
        InVar(&self.coeffs, var).to_string()
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        IntPolynomial::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Parse a univariate polynomial such as `x^2 - x + 1`, `2x^3`, `-3/2*x^2 + 1/2`.
///
/// Coefficients are integers or `num/den` fractions; a coefficient may be
/// followed by the variable directly or via `*`.
pub fn parse_poly(s: &str, var: &str) -> Result<QPoly> {
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // split into signed terms
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut prev: Option<char> = None;
    for ch in src.chars() {
        if (ch == '+' || ch == '-') && !matches!(prev, None | Some('^') | Some('e') | Some('E')) {
            if cur.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {s:?}")));
            }
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && prev.is_none() {
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
        prev = Some(ch);
    }
    if cur.is_empty() {
        return Err(Error::Parse(format!("dangling sign in {s:?}")));
    }
    terms.push((neg, cur));

    let mut coeffs: Vec<BigRational> = Vec::new();
    for (neg, t) in terms {
        let (coef, power) = match t.find(var) {
            None => (parse_rational(&t)?, 0usize),
            Some(i) => {
                let c = t[..i].trim_end_matches('*');
                let coef = if c.is_empty() { BigRational::one() } else { parse_rational(c)? };
                let rest = &t[i + var.len()..];
                let power = if rest.is_empty() {
                    1
                } else if let Some(p) = rest.strip_prefix('^') {
                    p.parse::<usize>().map_err(|_| Error::Parse(format!("bad exponent in term {t:?}")))?
                } else {
                    return Err(Error::Parse(format!("unexpected {rest:?} after variable in {t:?}")));
                };
                (coef, power)
            }
        };
        if power > 4096 {
            return Err(Error::Parse("exponent too large".into()));
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigRational::zero());
        }
        coeffs[power] += if neg { -coef } else { coef };
    }
    Ok(QPoly::new(coeffs))
}
