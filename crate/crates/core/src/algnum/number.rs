use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::composed;
use super::factor::{irreducible_factors, is_irreducible};
use super::poly::IntPolynomial;
use super::roots::{isolate_roots, refine_root, ComplexBox, MAX_ISOLATION_PREC};
use crate::error::{precision, Error, Result};
use crate::numkernel::{Dyadic, IntervalReal};

/// An algebraic number: its minimal polynomial and a box isolating one root.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraicNumber {
    minpoly: IntPolynomial,
    root: ComplexBox,
}

impl AlgebraicNumber {
    /// Checked constructor: `minpoly` must be irreducible and `root` must
    /// isolate exactly one of its roots.
    pub fn new(minpoly: IntPolynomial, root: ComplexBox) -> Result<Self> {
        if minpoly.degree() == 0 {
            return Err(Error::InvalidInput("minimal polynomial must have positive degree".into()));
        }
        if !is_irreducible(&minpoly) {
            return Err(Error::InvalidInput(format!("{minpoly} is not irreducible over the rationals")));
        }
        let minpoly = minpoly.primitive_part();
        let mut prec = 32;
        loop {
            let boxes = isolate_roots(&minpoly, prec)?;
            let inside = boxes.iter().filter(|b| root.contains_box(b)).count();
            let touching = boxes.iter().filter(|b| b.overlaps(&root)).count();
            if inside == 1 && touching == 1 {
                // a real root may be given with a box that has nonzero height
                let hit = boxes.into_iter().find(|b| b.overlaps(&root)).unwrap();
                let root = if hit.is_real() && !root.is_real() { hit } else { root };
                return Ok(AlgebraicNumber { minpoly, root });
            }
            if touching == 0 {
                return Err(Error::InvalidInput(format!("box {root} contains no root of {minpoly}")));
            }
            if inside >= 2 {
                return Err(Error::InvalidInput(format!("box {root} contains several roots of {minpoly}")));
            }
            if prec >= MAX_ISOLATION_PREC / 4 {
                return Err(precision("could not decide whether the box isolates a root"));
            }
            prec *= 2;
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        AlgebraicNumber {
            minpoly: IntPolynomial::linear_for(r),
            root: ComplexBox::real(IntervalReal::from_rational(r, 64)),
        }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        AlgebraicNumber::from_rational(&BigRational::from_integer(v.into()))
    }

    /// All roots of the irreducible factors of `p`.
    pub fn roots_of(p: &IntPolynomial) -> Result<Vec<AlgebraicNumber>> {
        let mut out = Vec::new();
        for f in irreducible_factors(p) {
            for b in isolate_roots(&f, 32)? {
                out.push(AlgebraicNumber { minpoly: f.clone(), root: b });
            }
        }
        Ok(out)
    }

    /// The root of the irreducible polynomial `p` nearest to `re + i im`.
    ///
    /// Refuses when two roots are nearly equidistant from the hint.
    pub fn nearest_root(p: &IntPolynomial, re: &BigRational, im: &BigRational) -> Result<Self> {
        if !is_irreducible(p) {
            return Err(Error::InvalidInput(format!("{p} is not irreducible over the rationals")));
        }
        let p = p.primitive_part();
        let boxes = isolate_roots(&p, 64)?;
        let hint = ComplexBox::new(IntervalReal::from_rational(re, 128), IntervalReal::from_rational(im, 128));
        let mut d: Vec<(f64, usize)> = boxes
            .iter()
            .enumerate()
            .map(|(i, b)| (b.sub(&hint).modulus().to_f64(), i))
            .collect();
        d.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if d.len() > 1 && d[1].0 - d[0].0 < 1e-9 * (1.0 + d[0].0) {
            return Err(Error::InvalidInput(format!("root hint is ambiguous for {p}")));
        }
        Ok(AlgebraicNumber { minpoly: p, root: boxes[d[0].1].clone() })
    }

    /// The unique real root of `p` in the given rational interval.
    pub fn real_root_in(p: &IntPolynomial, lo: &BigRational, hi: &BigRational) -> Result<Self> {
        let b = ComplexBox::real(IntervalReal::from_rational_bounds(lo, hi, 128));
        let mut prec = 32;
        let p = p.primitive_part();
        loop {
            let hits: Vec<ComplexBox> = isolate_roots(&p, prec)?.into_iter().filter(|r| r.is_real() && r.overlaps(&b)).collect();
            let inside = hits.iter().filter(|r| b.contains_box(r)).count();
            if hits.len() == 1 && inside == 1 {
                let f = irreducible_factors(&p)
                    .into_iter()
                    .find(|f| crate::algnum::roots::eval_box(f, &hits[0].with_prec(prec + 64)).contains_zero())
                    .unwrap();
                return AlgebraicNumber::new(f, hits[0].clone());
            }
            if hits.is_empty() {
                return Err(Error::InvalidInput(format!("no real root of {p} in the interval")));
            }
            if inside >= 2 {
                return Err(Error::InvalidInput(format!("several real roots of {p} in the interval")));
            }
            if prec > 4096 {
                return Err(precision("root on the boundary of the given interval"));
            }
            prec *= 2;
        }
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn root_box(&self) -> &ComplexBox {
        &self.root
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    pub fn is_real(&self) -> bool {
        self.root.is_real()
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| BigRational::new(-self.minpoly.coeff(0), self.minpoly.coeff(1)))
    }

    pub fn is_zero(&self) -> bool {
        self.is_rational() && self.minpoly.coeff(0).is_zero()
    }

    pub fn is_algebraic_integer(&self) -> bool {
        self.minpoly.is_monic()
    }

    /// Box of diameter at most `2^{-prec}` around the number.
    pub fn enclosure(&self, prec: u32) -> Result<ComplexBox> {
        if let Some(r) = self.as_rational() {
            let bits = (r.numer().bits() as i64 - r.denom().bits() as i64 + 2).max(0) as u32;
            return Ok(ComplexBox::real(IntervalReal::from_rational(&r, prec + 2 + bits)));
        }
        refine_root(&self.minpoly, &self.root, prec)
    }

    /// Same number with a tighter stored box.
    pub fn refined(&self, prec: u32) -> Result<Self> {
        Ok(AlgebraicNumber { minpoly: self.minpoly.clone(), root: self.enclosure(prec)? })
    }

    /// Real enclosure; fails for non-real numbers.
    pub fn real_enclosure(&self, prec: u32) -> Result<IntervalReal> {
        if !self.is_real() {
            return Err(Error::Domain("number is not real".into()));
        }
        Ok(self.enclosure(prec)?.re)
    }

    /// All conjugates (this number included), each as an algebraic number.
    pub fn conjugates(&self) -> Result<Vec<AlgebraicNumber>> {
        Ok(isolate_roots(&self.minpoly, 32)?
            .into_iter()
            .map(|b| AlgebraicNumber { minpoly: self.minpoly.clone(), root: b })
            .collect())
    }

    /// Conjugate boxes at the given precision.
    pub fn conjugate_boxes(&self, prec: u32) -> Result<Vec<ComplexBox>> {
        isolate_roots(&self.minpoly, prec)
    }

    /// Numerically the same number (exact test: same minimal polynomial and overlapping boxes after refinement).
    pub fn same_as(&self, o: &AlgebraicNumber) -> Result<bool> {
        if self.minpoly != o.minpoly {
            return Ok(false);
        }
        let mut prec = 32;
        loop {
            let a = self.enclosure(prec)?;
            let b = o.enclosure(prec)?;
            if !a.overlaps(&b) {
                return Ok(false);
            }
            // roots of one polynomial are separated; once boxes are smaller than half the separation they decide
            let boxes = isolate_roots(&self.minpoly, prec)?;
            if boxes.iter().filter(|c| c.overlaps(&a) || c.overlaps(&b)).count() == 1 {
                return Ok(true);
            }
            if prec > MAX_ISOLATION_PREC / 4 {
                return Err(precision("could not separate conjugates"));
            }
            prec *= 2;
        }
    }

    pub fn neg(&self) -> AlgebraicNumber {
        let p = composed::scale_roots(&self.minpoly, &-BigRational::one());
        AlgebraicNumber { minpoly: p, root: self.root.neg() }
    }

    pub fn recip(&self) -> Result<AlgebraicNumber> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        let p = composed::reciprocal(&self.minpoly);
        select_root(&p, |prec| self.enclosure(prec + 8)?.with_prec(prec + 8).recip())
    }

    pub fn scale(&self, q: &BigRational) -> Result<AlgebraicNumber> {
        if q.is_zero() {
            return Ok(AlgebraicNumber::from_int(0));
        }
        let p = composed::scale_roots(&self.minpoly, q);
        select_root(&p, |prec| {
            let e = self.enclosure(prec + 8)?;
            Ok(e.scale(&IntervalReal::from_rational(q, prec + 8)))
        })
    }

    pub fn add(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        self.lin_comb(o, &BigRational::one())
    }

    pub fn sub(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        self.lin_comb(o, &-BigRational::one())
    }

    /// `self + c o`.
    pub fn lin_comb(&self, o: &AlgebraicNumber, c: &BigRational) -> Result<AlgebraicNumber> {
        let p = composed::composed_sum(&self.minpoly, &o.minpoly, c);
        select_root(&p, |prec| {
            let a = self.enclosure(prec + 8)?;
            let b = o.enclosure(prec + 8)?;
            Ok(a.add(&b.scale(&IntervalReal::from_rational(c, prec + 8))))
        })
    }

    pub fn mul(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        if self.is_zero() || o.is_zero() {
            return Ok(AlgebraicNumber::from_int(0));
        }
        let p = composed::composed_product(&self.minpoly, &o.minpoly);
        select_root(&p, |prec| {
            let a = self.enclosure(prec + 8)?;
            let b = o.enclosure(prec + 8)?;
            Ok(a.mul(&b))
        })
    }

    pub fn div(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        self.mul(&o.recip()?)
    }

    pub fn pow(&self, m: u64) -> Result<AlgebraicNumber> {
        if m == 0 {
            return Ok(AlgebraicNumber::from_int(1));
        }
        if let Some(r) = self.as_rational() {
            return Ok(AlgebraicNumber::from_rational(&num_traits::pow::pow(r, m as usize)));
        }
        let p = composed::power_poly(&self.minpoly, m as usize);
        select_root(&p, |prec| {
            // relative error grows by a factor m
            let extra = 64 - (m.leading_zeros() as u32) + 8;
            let a = self.enclosure(prec + extra)?.with_prec(prec + extra);
            Ok(a.powi(m))
        })
    }

    /// Upper bound of the modulus as `f64` (display and heuristics only).
    pub fn approx(&self) -> (f64, f64) {
        self.root.to_c64()
    }

    /// `|self|` compared with 1: `Less`, `Equal` or `Greater`, decided exactly.
    pub fn cmp_modulus_one(&self) -> Result<std::cmp::Ordering> {
        modulus_vs_one(&self.minpoly, &self.root)
    }
}

/// Decide `|z|` versus 1 for the root of irreducible `p` in box `b`.
///
/// Unit-modulus roots of an irreducible polynomial force it to be reciprocal
/// (or linear `x ± 1`); in that case `|z| = 1` exactly when `1/z` and `conj z`
/// are the same root.
pub fn modulus_vs_one(p: &IntPolynomial, b: &ComplexBox) -> Result<std::cmp::Ordering> {
    use std::cmp::Ordering;
    let one = Dyadic::one();
    let recip = p.is_reciprocal();
    let mut prec = 32u32;
    loop {
        let z = refine_root(p, b, prec)?;
        let m = z.modulus();
        if m.hi() < &one {
            return Ok(Ordering::Less);
        }
        if m.lo() > &one {
            return Ok(Ordering::Greater);
        }
        if p.degree() == 1 {
            // rational: exact comparison
            let r = BigRational::new(-p.coeff(0), p.coeff(1)).abs();
            return Ok(r.cmp(&BigRational::one()));
        }
        if recip {
            // 1/z and conj z are both roots of p; same root iff |z| = 1
            let boxes = isolate_roots(p, prec)?;
            let inv = z.recip()?;
            let cj = z.conj();
            let a: Vec<usize> = (0..boxes.len()).filter(|&i| boxes[i].overlaps(&inv)).collect();
            let c: Vec<usize> = (0..boxes.len()).filter(|&i| boxes[i].overlaps(&cj)).collect();
            if a.len() == 1 && c.len() == 1 {
                if a[0] == c[0] {
                    return Ok(Ordering::Equal);
                }
            }
        }
        if prec >= MAX_ISOLATION_PREC / 4 {
            return Err(precision("modulus comparison with 1 undecided at the precision cap"));
        }
        prec *= 2;
    }
}

/// Pick the irreducible factor of `p` and its root matching a numeric enclosure.
pub(crate) fn select_root<F>(p: &IntPolynomial, numeric: F) -> Result<AlgebraicNumber>
where
    F: Fn(u32) -> Result<ComplexBox>,
{
    let factors = irreducible_factors(p);
    let mut prec = 32u32;
    loop {
        let target = numeric(prec)?;
        let mut hits = Vec::new();
        for f in &factors {
            // cheap exclusion: the factor must vanish on the target box
            if !crate::algnum::roots::eval_box(f, &target).contains_zero() {
                continue;
            }
            for b in isolate_roots(f, prec)? {
                if b.overlaps(&target) {
                    hits.push((f.clone(), b));
                }
            }
        }
        if hits.len() == 1 {
            let (f, b) = hits.pop().unwrap();
            return Ok(AlgebraicNumber { minpoly: f, root: b });
        }
        if hits.is_empty() && prec > 256 {
            return Err(Error::Domain("numeric value matches no root of the composed polynomial".into()));
        }
        if prec >= MAX_ISOLATION_PREC / 4 {
            return Err(precision("could not single out a root of the composed polynomial"));
        }
        prec *= 2;
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} near {}", self.minpoly, self.root)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "root of {} near {}", self.minpoly, self.root),
        }
    }
}

impl Serialize for AlgebraicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AlgebraicNumber", 2)?;
        st.serialize_field("minpoly", &self.minpoly)?;
        st.serialize_field("root", &self.root)?;
        st.end()
    }
}
