//! Certified complex root isolation.
//!
//! Approximations come from Aberth iteration in rounded dyadic arithmetic.
//! Certification uses the inclusion disk `|z - root| <= n |p(z)/p'(z)|`:
//! when the enclosing boxes of all `n` disks are pairwise disjoint, each holds
//! exactly one root. A disk centered on the real axis that isolates a root
//! proves that root real, since the conjugate root would lie in the same disk.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::poly::IntPolynomial;
use crate::error::{precision, Result};
use crate::numkernel::{to_mid_rad, Dyadic, IntervalReal, Round};

/// Upper limit for internal precision escalation.
pub const MAX_ISOLATION_PREC: u32 = 1 << 16;

/// A complex rectangle `re × im` with interval sides.
#[derive(Clone, PartialEq, Eq)]
pub struct ComplexBox {
    pub re: IntervalReal,
    pub im: IntervalReal,
}

impl ComplexBox {
    pub fn new(re: IntervalReal, im: IntervalReal) -> Self {
        ComplexBox { re, im }
    }

    pub fn real(re: IntervalReal) -> Self {
        let p = re.prec();
        ComplexBox { re, im: IntervalReal::zero(p) }
    }

    pub fn from_int(v: impl Into<BigInt>, prec: u32) -> Self {
        ComplexBox::real(IntervalReal::from_int(v, prec))
    }

    pub fn zero(prec: u32) -> Self {
        ComplexBox::from_int(0, prec)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Imaginary side is exactly zero: the enclosed number is certified real.
    pub fn is_real(&self) -> bool {
        self.im.is_point() && self.im.lo().is_zero()
    }

    pub fn overlaps(&self, o: &ComplexBox) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn contains_box(&self, o: &ComplexBox) -> bool {
        self.re.encloses(&o.re) && self.im.encloses(&o.im)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// Larger side length.
    pub fn diameter(&self) -> Dyadic {
        self.re.width().greater(&self.im.width()).clone()
    }

    pub fn add(&self, o: &ComplexBox) -> ComplexBox {
        ComplexBox { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &ComplexBox) -> ComplexBox {
        ComplexBox { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn neg(&self) -> ComplexBox {
        ComplexBox { re: -&self.re, im: -&self.im }
    }

    pub fn conj(&self) -> ComplexBox {
        ComplexBox { re: self.re.clone(), im: -&self.im }
    }

    pub fn mul(&self, o: &ComplexBox) -> ComplexBox {
        if self.is_real() && o.is_real() {
            return ComplexBox::real(&self.re * &o.re);
        }
        ComplexBox {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    pub fn scale(&self, k: &IntervalReal) -> ComplexBox {
        if self.is_real() {
            return ComplexBox::real(&self.re * k);
        }
        ComplexBox { re: &self.re * k, im: &self.im * k }
    }

    /// `|z|^2`.
    pub fn norm_sq(&self) -> IntervalReal {
        &self.re.square() + &self.im.square()
    }

    /// `|z|`.
    pub fn modulus(&self) -> IntervalReal {
        if self.is_real() {
            return self.re.abs();
        }
        self.norm_sq().sqrt().expect("sum of squares is nonnegative")
    }

    pub fn recip(&self) -> Result<ComplexBox> {
        if self.is_real() {
            return Ok(ComplexBox::real(self.re.recip()?));
        }
        let n = self.norm_sq();
        Ok(ComplexBox { re: self.re.div(&n)?, im: (-&self.im).div(&n)? })
    }

    pub fn div(&self, o: &ComplexBox) -> Result<ComplexBox> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn powi(&self, n: u64) -> ComplexBox {
        if self.is_real() {
            return ComplexBox::real(self.re.powi(n));
        }
        let mut acc = ComplexBox::from_int(1, self.prec());
        let mut base = self.clone();
        let mut k = n;
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

    pub fn with_prec(&self, prec: u32) -> ComplexBox {
        ComplexBox { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn midpoint(&self) -> ComplexBox {
        let p = self.prec();
        ComplexBox { re: IntervalReal::point(self.re.midpoint(), p), im: IntervalReal::point(self.im.midpoint(), p) }
    }
}

impl fmt::Debug for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", to_mid_rad(&self.re))
        } else {
            write!(f, "({}) + ({})i", to_mid_rad(&self.re), to_mid_rad(&self.im))
        }
    }
}

impl Serialize for ComplexBox {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ComplexBox", 2)?;
        st.serialize_field("re", &self.re)?;
        st.serialize_field("im", &self.im)?;
        st.end()
    }
}

/// Horner evaluation of `p` on a box.
pub fn eval_box(p: &IntPolynomial, z: &ComplexBox) -> ComplexBox {
    let prec = z.prec();
    p.coeffs().iter().rev().fold(ComplexBox::zero(prec), |acc, c| {
        acc.mul(z).add(&ComplexBox::from_int(c.clone(), prec))
    })
}

// ---- approximate complex arithmetic used by the iteration ----

#[derive(Clone, Debug)]
struct Cx {
    re: Dyadic,
    im: Dyadic,
}

impl Cx {
    fn r(d: Dyadic, w: u32) -> Dyadic {
        d.round(w, Round::Nearest)
    }
    fn add(&self, o: &Cx, w: u32) -> Cx {
        Cx { re: Cx::r(self.re.add(&o.re), w), im: Cx::r(self.im.add(&o.im), w) }
    }
    fn sub(&self, o: &Cx, w: u32) -> Cx {
        Cx { re: Cx::r(self.re.sub(&o.re), w), im: Cx::r(self.im.sub(&o.im), w) }
    }
    fn mul(&self, o: &Cx, w: u32) -> Cx {
        Cx {
            re: Cx::r(self.re.mul(&o.re).sub(&self.im.mul(&o.im)), w),
            im: Cx::r(self.re.mul(&o.im).add(&self.im.mul(&o.re)), w),
        }
    }
    fn norm2(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
    fn div(&self, o: &Cx, w: u32) -> Option<Cx> {
        let n = o.norm2();
        if n.is_zero() {
            return None;
        }
        let num = Cx { re: self.re.mul(&o.re).add(&self.im.mul(&o.im)), im: self.im.mul(&o.re).sub(&self.re.mul(&o.im)) };
        Some(Cx { re: Dyadic::div(&num.re, &n, w, Round::Nearest), im: Dyadic::div(&num.im, &n, w, Round::Nearest) })
    }
    /// Rough `log2 |z|`.
    fn mag(&self) -> i64 {
        let a = self.re.magnitude();
        let b = self.im.magnitude();
        a.max(b)
    }
}

fn eval_with_derivative(p: &[BigInt], z: &Cx, w: u32) -> (Cx, Cx) {
    let zero = Cx { re: Dyadic::zero(), im: Dyadic::zero() };
    let mut v = zero.clone();
    let mut d = zero;
    for c in p.iter().rev() {
        d = d.mul(z, w).add(&v, w);
        v = v.mul(z, w).add(&Cx { re: Dyadic::from_int(c.clone()), im: Dyadic::zero() }, w);
    }
    (v, d)
}

fn log2_abs(c: &BigInt) -> f64 {
    let bits = c.bits();
    if bits < 1000 {
        c.abs().to_f64().unwrap().log2()
    } else {
        let shifted: BigInt = c.abs() >> (bits - 60);
        shifted.to_f64().unwrap().log2() + (bits - 60) as f64
    }
}

fn initial_points(p: &IntPolynomial) -> Vec<Cx> {
    let n = p.degree();
    let ln = log2_abs(&p.lead());
    // Fujiwara-type radius 2 max |a_{n-k}/a_n|^{1/k}
    let mut r = f64::NEG_INFINITY;
    for k in 1..=n {
        let c = p.coeff(n - k);
        if !c.is_zero() {
            r = r.max((log2_abs(&c) - ln) / k as f64);
        }
    }
    let r = if r.is_finite() { r } else { 0.0 };
    let radius_exp = r.floor() as i64;
    let frac = 2f64.powf(r - radius_exp as f64);
    (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            let re = Dyadic::from_f64(frac * t.cos()).mul_pow2(radius_exp);
            let im = Dyadic::from_f64(frac * t.sin()).mul_pow2(radius_exp);
            Cx { re, im }
        })
        .collect()
}

/// Aberth iteration until corrections drop below `2^{-w+8}` relative, or the cap.
fn aberth(p: &IntPolynomial, zs: &mut [Cx], w: u32, max_iter: usize) {
    let n = zs.len();
    let coeffs = p.coeffs();
    let one = Cx { re: Dyadic::one(), im: Dyadic::zero() };
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (v, d) = eval_with_derivative(coeffs, &zs[k], w);
            if v.re.is_zero() && v.im.is_zero() {
                done[k] = true;
                continue;
            }
            let Some(newton) = v.div(&d, w) else {
                // perturb off a critical point
                zs[k] = zs[k].add(&Cx { re: Dyadic::pow2(zs[k].mag().max(0) - 20), im: Dyadic::pow2(-20) }, w);
                all = false;
                continue;
            };
            let mut s = Cx { re: Dyadic::zero(), im: Dyadic::zero() };
            for j in 0..n {
                if j != k {
                    if let Some(t) = one.div(&zs[k].sub(&zs[j], w), w) {
                        s = s.add(&t, w);
                    }
                }
            }
            let denom = one.sub(&newton.mul(&s, w), w);
            let corr = newton.div(&denom, w).unwrap_or(newton);
            zs[k] = zs[k].sub(&corr, w);
            let scale = zs[k].mag().max(0);
            if corr.mag() < scale - w as i64 + 8 || (corr.re.is_zero() && corr.im.is_zero()) {
                done[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
}

/// Certified disk radius at the exact point `c`, or `None` when `p'(c)` cannot be bounded away from 0.
fn inclusion_radius(p: &IntPolynomial, dp: &IntPolynomial, c: &ComplexBox, w: u32) -> Option<Dyadic> {
    let v = eval_box(p, c).modulus();
    let d = eval_box(dp, c).modulus();
    if !d.lo().is_positive() {
        return None;
    }
    let n = Dyadic::from_int(p.degree() as i64);
    Some(Dyadic::div(&n.mul(v.hi()), d.lo(), w.min(64), Round::Up))
}

fn try_certify(p: &IntPolynomial, zs: &[Cx], prec: u32, w: u32) -> Option<Vec<ComplexBox>> {
    let dp = p.derivative();
    let target = Dyadic::pow2(-(prec as i64) - 2);
    let mut boxes = Vec::with_capacity(zs.len());
    for z in zs {
        let center = ComplexBox::new(IntervalReal::point(z.re.clone(), w), IntervalReal::point(z.im.clone(), w));
        let r = inclusion_radius(p, &dp, &center, w)?;
        if r > target {
            return None;
        }
        // a disk reaching the real axis is first tried as a real-centered disk
        let b = if z.im.abs() <= r {
            let c = ComplexBox::real(IntervalReal::point(z.re.clone(), w));
            match inclusion_radius(p, &dp, &c, w) {
                Some(rr) if rr <= target => {
                    ComplexBox::real(IntervalReal::new(z.re.sub(&rr), z.re.add(&rr), w))
                }
                _ => return None,
            }
        } else {
            ComplexBox::new(
                IntervalReal::new(z.re.sub(&r), z.re.add(&r), w),
                IntervalReal::new(z.im.sub(&r), z.im.add(&r), w),
            )
        };
        boxes.push(b);
    }
    // real boxes are thin: widen them vertically for the disjointness test
    let fat: Vec<ComplexBox> = boxes
        .iter()
        .map(|b| {
            if b.is_real() {
                let r = b.re.radius();
                ComplexBox::new(b.re.clone(), IntervalReal::symmetric(r, w))
            } else {
                b.clone()
            }
        })
        .collect();
    for i in 0..fat.len() {
        for j in i + 1..fat.len() {
            if fat[i].overlaps(&fat[j]) {
                return None;
            }
        }
    }
    Some(boxes)
}

/// Isolating boxes of all roots of the squarefree part of `p`, each of diameter at most `2^{-prec}`.
///
/// Real roots come first in increasing order, followed by the non-real roots
/// sorted by real part, then imaginary part.
pub fn isolate_roots(p: &IntPolynomial, prec: u32) -> Result<Vec<ComplexBox>> {
    let q = p.squarefree_part();
    let n = q.degree();
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        let r = num_rational::BigRational::new(-q.coeff(0), q.coeff(1));
        return Ok(vec![ComplexBox::real(IntervalReal::from_rational(&r, prec.max(2) + 2))]);
    }
    let mut w = (prec + 32 + q.root_bound().magnitude().clamp(0, 1 << 20) as u32).max(64);
    let mut zs = initial_points(&q);
    aberth(&q, &mut zs, 53, 40 * n + 200);
    loop {
        aberth(&q, &mut zs, w, 20 * n + 100);
        if let Some(mut boxes) = try_certify(&q, &zs, prec, w) {
            sort_boxes(&mut boxes);
            return Ok(boxes);
        }
        if w >= MAX_ISOLATION_PREC {
            return Err(precision(format!("root isolation of {q} did not certify at {w} bits")));
        }
        w = (w * 2).min(MAX_ISOLATION_PREC);
    }
}

fn sort_boxes(boxes: &mut [ComplexBox]) {
    boxes.sort_by(|a, b| {
        b.is_real()
            .cmp(&a.is_real())
            .then_with(|| a.re.midpoint().cmp(&b.re.midpoint()))
            .then_with(|| a.im.midpoint().cmp(&b.im.midpoint()))
    });
}

/// Bits above the binary point needed for the box's largest coordinate.
fn box_magnitude(b: &ComplexBox) -> u32 {
    let m = b.re.mag().greater(&b.im.mag()).magnitude();
    m.clamp(0, 1 << 20) as u32
}

/// Sign of `p` at an exact dyadic point, if certified.
fn sign_at(p: &IntPolynomial, x: &Dyadic, w: u32) -> i32 {
    let v = p.eval_interval(&IntervalReal::point(x.clone(), w));
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Shrink an isolating box of an irreducible (squarefree) `p` to diameter `2^{-prec}`.
///
/// Tries Newton refinement inside the box first; falls back to full isolation
/// with the unique overlapping box.
pub fn refine_root(p: &IntPolynomial, b: &ComplexBox, prec: u32) -> Result<ComplexBox> {
    if b.diameter() <= Dyadic::pow2(-(prec as i64)) {
        return Ok(b.clone());
    }
    if let Some(nb) = newton_refine(p, b, prec) {
        return Ok(nb);
    }
    let mut pr = prec;
    loop {
        let boxes = isolate_roots(p, pr)?;
        let hits: Vec<&ComplexBox> = boxes.iter().filter(|c| c.overlaps(b)).collect();
        if hits.len() == 1 {
            return Ok(hits[0].clone());
        }
        if pr >= MAX_ISOLATION_PREC / 2 {
            return Err(precision("refinement could not select a unique root"));
        }
        pr *= 2;
    }
}

fn newton_refine(p: &IntPolynomial, b: &ComplexBox, prec: u32) -> Option<ComplexBox> {
    let w = prec + 32 + box_magnitude(b);
    let dp = p.derivative();
    let mut z = Cx { re: b.re.midpoint(), im: if b.is_real() { Dyadic::zero() } else { b.im.midpoint() } };
    for _ in 0..64 {
        let (v, d) = eval_with_derivative(p.coeffs(), &z, w);
        let step = v.div(&d, w)?;
        let step = if b.is_real() { Cx { re: step.re, im: Dyadic::zero() } } else { step };
        z = z.sub(&step, w);
        if step.mag() < z.mag().max(0) - w as i64 + 4 || (step.re.is_zero() && step.im.is_zero()) {
            break;
        }
    }
    let eps = Dyadic::pow2(-(prec as i64) - 2);
    if b.is_real() {
        let lo = z.re.sub(&eps);
        let hi = z.re.add(&eps);
        let nb = ComplexBox::real(IntervalReal::new(lo.clone(), hi.clone(), w));
        // a sign change inside the old interval pins the unique real root there
        let (sl, sh) = (sign_at(p, &lo, w), sign_at(p, &hi, w));
        if b.re.encloses(&nb.re) && sl != 0 && sh != 0 && sl != sh {
            return Some(nb);
        }
        return None;
    }
    let center = ComplexBox::new(IntervalReal::point(z.re.clone(), w), IntervalReal::point(z.im.clone(), w));
    let r = inclusion_radius(p, &dp, &center, w)?;
    if r > eps {
        return None;
    }
    let nb = ComplexBox::new(
        IntervalReal::new(z.re.sub(&r), z.re.add(&r), w),
        IntervalReal::new(z.im.sub(&r), z.im.add(&r), w),
    );
    b.contains_box(&nb).then_some(nb)
}
