//! Number fields `Q[y]/(f)` with a chosen complex embedding.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::composed::composed_sum;
use super::number::{select_root, AlgebraicNumber};
use super::poly::{IntPolynomial, QPoly};
use super::roots::ComplexBox;
use crate::error::{precision, Error, Result};
use crate::numkernel::{Dyadic, IntervalReal};

#[derive(Debug)]
struct Ctx {
    poly: IntPolynomial,
    modulus: QPoly,
    /// `Tr(y^j)` for `j < 2n`.
    traces: Vec<BigRational>,
}

impl Ctx {
    fn new(poly: &IntPolynomial) -> Arc<Ctx> {
        let poly = poly.primitive_part();
        let modulus = poly.to_qpoly().monic();
        let traces = modulus.power_sums(2 * poly.degree());
        Arc::new(Ctx { poly, modulus, traces })
    }
}

/// An element of `Q[y]/(f)` in power-basis coordinates.
#[derive(Clone)]
pub struct FieldElement {
    ctx: Arc<Ctx>,
    coords: Vec<BigRational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &Self) -> bool {
        self.ctx.poly == o.ctx.poly && self.coords == o.coords
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    fn from_ctx(ctx: &Arc<Ctx>, p: &QPoly) -> Self {
        let r = p.rem(&ctx.modulus);
        let n = ctx.poly.degree();
        let coords = (0..n).map(|i| r.coeff(i)).collect();
        FieldElement { ctx: ctx.clone(), coords }
    }

    /// Element with the given coordinates in `Q[y]/(field)`.
    pub fn new(field: &IntPolynomial, coords: Vec<BigRational>) -> Self {
        let ctx = Ctx::new(field);
        FieldElement::from_ctx(&ctx, &QPoly::new(coords))
    }

    pub fn field(&self) -> &IntPolynomial {
        &self.ctx.poly
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.coords.clone())
    }

    fn same(&self, o: &Self) {
        assert!(
            Arc::ptr_eq(&self.ctx, &o.ctx) || self.ctx.poly == o.ctx.poly,
            "field elements from different fields"
        );
    }

    fn lift(&self, p: &QPoly) -> Self {
        FieldElement::from_ctx(&self.ctx, p)
    }

    pub fn rational(&self, r: &BigRational) -> Self {
        self.lift(&QPoly::constant(r.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.coords.iter().skip(1).all(|c| c.is_zero()).then(|| self.coords.first().cloned().unwrap_or_else(BigRational::zero))
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same(o);
        FieldElement { ctx: self.ctx.clone(), coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same(o);
        FieldElement { ctx: self.ctx.clone(), coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Self {
        FieldElement { ctx: self.ctx.clone(), coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        FieldElement { ctx: self.ctx.clone(), coords: self.coords.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same(o);
        self.lift(&self.to_qpoly().mul(&o.to_qpoly()))
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = self.rational(&BigRational::one());
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

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero in a number field".into()));
        }
        let (g, s, _) = self.to_qpoly().ext_gcd(&self.ctx.modulus);
        if g.deg() != 0 {
            return Err(Error::Domain("defining polynomial is reducible".into()));
        }
        Ok(self.lift(&s))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inverse()?))
    }

    /// Trace from the field to the rationals.
    pub fn trace(&self) -> BigRational {
        self.coords.iter().zip(&self.ctx.traces).map(|(c, t)| c * t).sum()
    }

    /// Characteristic polynomial of multiplication by the element, primitive.
    pub fn charpoly(&self) -> IntPolynomial {
        let n = self.ctx.poly.degree();
        let mut p = vec![BigRational::from_integer(BigInt::from(n))];
        let mut u = self.rational(&BigRational::one());
        for _ in 0..n {
            u = u.mul(self);
            p.push(u.trace());
        }
        QPoly::from_power_sums(&p, n).to_int_primitive()
    }

    /// Minimal polynomial over the rationals, primitive with positive leading coefficient.
    pub fn minpoly(&self) -> IntPolynomial {
        if let Some(r) = self.as_rational() {
            return IntPolynomial::linear_for(&r);
        }
        self.charpoly().squarefree_part()
    }

    /// Field norm: product of all conjugates.
    pub fn norm(&self) -> BigRational {
        let m = self.charpoly().to_qpoly().monic();
        let n = m.deg();
        let c0 = m.coeff(0);
        if n % 2 == 0 {
            c0
        } else {
            -c0
        }
    }

    pub fn is_algebraic_integer(&self) -> bool {
        self.minpoly().is_monic()
    }

    /// Evaluate at a box enclosing a root of the defining polynomial.
    pub fn embed_box(&self, root: &ComplexBox) -> ComplexBox {
        let w = root.prec();
        self.coords.iter().rev().fold(ComplexBox::zero(w), |acc, c| {
            acc.mul(root).add(&ComplexBox::real(IntervalReal::from_rational(c, w)))
        })
    }

    /// Image under the embedding sending `y` to `gen`, of diameter at most `2^{-prec}`.
    pub fn embed(&self, gen: &AlgebraicNumber, prec: u32) -> Result<ComplexBox> {
        if let Some(r) = self.as_rational() {
            return AlgebraicNumber::from_rational(&r).enclosure(prec);
        }
        let target = Dyadic::pow2(-(prec as i64));
        let mag = gen.root_box().modulus().hi().magnitude().max(0) as u32;
        let coeff_bits = self
            .coords
            .iter()
            .map(|c| (c.numer().bits() as i64 - c.denom().bits() as i64).max(0) as u32)
            .max()
            .unwrap_or(0);
        let n = self.coords.len() as u32;
        let mut w = prec + 16 + n * mag + coeff_bits + 2 * (32 - n.leading_zeros());
        for _ in 0..12 {
            let g = gen.enclosure(w)?.with_prec(w);
            let b = self.embed_box(&g);
            if b.diameter() <= target {
                return Ok(b);
            }
            w *= 2;
        }
        Err(precision("embedding did not reach the requested width"))
    }

    /// The element as an algebraic number under the embedding `y -> gen`.
    pub fn to_algebraic(&self, gen: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        if let Some(r) = self.as_rational() {
            return Ok(AlgebraicNumber::from_rational(&r));
        }
        let m = self.minpoly();
        select_root(&m, |prec| self.embed(gen, prec))
    }

    /// Substitute `y -> image`, where `image` lives in another field and is a root of this element's field polynomial.
    pub fn substitute(&self, image: &FieldElement) -> FieldElement {
        self.coords.iter().rev().fold(image.rational(&BigRational::zero()), |acc, c| acc.mul(image).add(&image.rational(c)))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} mod {}", self.field().to_string_in("y"))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_qpoly().to_string_in("y"))
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FieldElement", 2)?;
        st.serialize_field("field", &self.field().to_string_in("y"))?;
        st.serialize_field("coords", &self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>())?;
        st.end()
    }
}

/// `Q(gen)` together with that embedding.
#[derive(Clone, Debug)]
pub struct NumberField {
    gen: AlgebraicNumber,
    ctx: Arc<Ctx>,
}

impl NumberField {
    pub fn new(gen: AlgebraicNumber) -> Self {
        let ctx = Ctx::new(gen.minpoly());
        NumberField { gen, ctx }
    }

    /// The rationals, generated by 0.
    pub fn rationals() -> Self {
        NumberField::new(AlgebraicNumber::from_int(0))
    }

    pub fn gen(&self) -> &AlgebraicNumber {
        &self.gen
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.ctx.poly
    }

    pub fn degree(&self) -> usize {
        self.ctx.poly.degree()
    }

    pub fn element(&self, coords: Vec<BigRational>) -> FieldElement {
        FieldElement::from_ctx(&self.ctx, &QPoly::new(coords))
    }

    pub fn from_qpoly(&self, p: &QPoly) -> FieldElement {
        FieldElement::from_ctx(&self.ctx, p)
    }

    pub fn rational(&self, r: &BigRational) -> FieldElement {
        self.from_qpoly(&QPoly::constant(r.clone()))
    }

    pub fn one(&self) -> FieldElement {
        self.rational(&BigRational::one())
    }

    pub fn zero(&self) -> FieldElement {
        self.rational(&BigRational::zero())
    }

    /// The generator `y` itself.
    pub fn y(&self) -> FieldElement {
        if self.degree() == 1 {
            // Q with generator a rational r: y reduces to r
            return self.rational(&self.gen.as_rational().unwrap());
        }
        self.from_qpoly(&QPoly::x())
    }

    /// Re-home an element whose field polynomial equals ours (fresh context).
    pub fn adopt(&self, e: &FieldElement) -> Result<FieldElement> {
        if e.field() != self.poly() {
            return Err(Error::InvalidInput(format!(
                "element lives in Q[y]/({}) but the field is Q[y]/({})",
                e.field().to_string_in("y"),
                self.poly().to_string_in("y")
            )));
        }
        Ok(self.element(e.coords.clone()))
    }

    pub fn embed(&self, e: &FieldElement, prec: u32) -> Result<ComplexBox> {
        e.embed(&self.gen, prec)
    }

    pub fn to_algebraic(&self, e: &FieldElement) -> Result<AlgebraicNumber> {
        e.to_algebraic(&self.gen)
    }

    /// `L = Q(gen, a)` with a primitive element `gen + c a`, plus the images of
    /// `gen` and `a` in `L`.
    pub fn compositum(&self, a: &AlgebraicNumber) -> Result<(NumberField, FieldElement, FieldElement)> {
        if let Some(r) = a.as_rational() {
            let y = self.y();
            return Ok((self.clone(), y, self.rational(&r)));
        }
        if self.degree() == 1 {
            let l = NumberField::new(a.clone());
            let r = self.gen.as_rational().unwrap();
            let (img_gen, img_a) = (l.rational(&r), l.y());
            return Ok((l, img_gen, img_a));
        }
        let f = self.poly().clone();
        let g = a.minpoly().clone();
        let mut chosen = None;
        for c in [1i64, -1, 2, -2, 3, -3, 5, -5, 7, -7, 11, 13] {
            let c = BigRational::from_integer(BigInt::from(c));
            let r = composed_sum(&f, &g, &c);
            if r.is_squarefree() {
                chosen = Some((c, r));
                break;
            }
        }
        let (c, r) = chosen.ok_or_else(|| Error::Unsupported("no small primitive-element multiplier found".into()))?;
        let gen = self.gen.clone();
        let theta = select_root(&r, |prec| {
            let x = gen.enclosure(prec + 8)?;
            let y = a.enclosure(prec + 8)?;
            Ok(x.add(&y.scale(&IntervalReal::from_rational(&c, prec + 8))))
        })?;
        let l = NumberField::new(theta);
        // a is the unique common root of g(t) and f(theta - c t)
        let t = l.y();
        let lin = vec![t, l.rational(&-c.clone())];
        let mut fp: Vec<FieldElement> = vec![l.zero()];
        for coef in f.coeffs().iter().rev() {
            fp = poly_add(&poly_mul(&fp, &lin), &[l.rational(&BigRational::from_integer(coef.clone()))]);
        }
        let gp: Vec<FieldElement> =
            g.coeffs().iter().map(|x| l.rational(&BigRational::from_integer(x.clone()))).collect();
        let h = poly_gcd(gp, fp)?;
        if h.len() != 2 {
            return Err(Error::Domain("compositum gcd is not linear".into()));
        }
        let img_a = h[0].neg().div(&h[1])?;
        let img_gen = l.y().sub(&img_a.scale(&c));
        Ok((l, img_gen, img_a))
    }

    /// Element of this field equal to `a`, if `a` lies in it.
    pub fn find(&self, a: &AlgebraicNumber) -> Result<Option<FieldElement>> {
        if let Some(r) = a.as_rational() {
            return Ok(Some(self.rational(&r)));
        }
        if self.degree() % a.degree() != 0 {
            return Ok(None);
        }
        let (l, img_gen, img_a) = self.compositum(a)?;
        if l.degree() != self.degree() {
            return Ok(None);
        }
        // same field, new generator: write a in powers of img_gen
        let n = self.degree();
        let mut cols = Vec::with_capacity(n);
        let mut p = l.one();
        for _ in 0..n {
            cols.push(p.coords.clone());
            p = p.mul(&img_gen);
        }
        let x = solve_columns(&cols, &img_a.coords).ok_or_else(|| Error::Domain("change of basis is singular".into()))?;
        Ok(Some(self.element(x)))
    }
}

fn poly_trim(mut v: Vec<FieldElement>) -> Vec<FieldElement> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_add(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let n = a.len().max(b.len());
    let z = if !a.is_empty() { a[0].rational(&BigRational::zero()) } else { b[0].rational(&BigRational::zero()) };
    poly_trim((0..n).map(|i| a.get(i).unwrap_or(&z).add(b.get(i).unwrap_or(&z))).collect())
}

fn poly_mul(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let z = a[0].rational(&BigRational::zero());
    let mut v = vec![z; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] = v[i + j].add(&x.mul(y));
        }
    }
    poly_trim(v)
}

fn poly_rem(a: Vec<FieldElement>, b: &[FieldElement]) -> Result<Vec<FieldElement>> {
    let mut r = poly_trim(a);
    let db = b.len() - 1;
    let inv = b[db].inverse()?;
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap().mul(&inv);
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = r[k + j].sub(&c.mul(bj));
        }
        r.pop();
        r = poly_trim(r);
    }
    Ok(r)
}

/// Monic gcd over the field.
fn poly_gcd(a: Vec<FieldElement>, b: Vec<FieldElement>) -> Result<Vec<FieldElement>> {
    let (mut a, mut b) = (poly_trim(a), poly_trim(b));
    while !b.is_empty() {
        let r = poly_rem(a, &b)?;
        a = b;
        b = r;
    }
    let inv = a.last().unwrap().inverse()?;
    Ok(a.iter().map(|c| c.mul(&inv)).collect())
}

/// Solve `sum_j x_j cols[j] = rhs` over the rationals (square system).
pub(crate) fn solve_columns(cols: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = cols.len();
    // augmented row-major matrix
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| cols[j].get(i).cloned().unwrap_or_else(BigRational::zero)).collect();
            row.push(rhs.get(i).cloned().unwrap_or_else(BigRational::zero));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for k in col..=n {
            m[col][k] = &m[col][k] * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in col..=n {
                    let v = &f * &m[col][k];
                    m[r][k] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPolynomial {
        IntPolynomial::parse(s).unwrap()
    }

    fn real_root(s: &str, lo: i64, hi: i64) -> AlgebraicNumber {
        AlgebraicNumber::real_root_in(&p(s), &BigRational::from_integer(lo.into()), &BigRational::from_integer(hi.into())).unwrap()
    }

    #[test]
    fn arithmetic_mod_f() {
        let k = NumberField::new(real_root("x^2 - x - 1", 1, 2));
        let y = k.y();
        // y^2 = y + 1
        assert_eq!(y.mul(&y), y.add(&k.one()));
        let inv = y.inverse().unwrap();
        assert_eq!(inv, y.sub(&k.one()));
        assert_eq!(y.trace(), BigRational::one());
        assert_eq!(y.norm(), -BigRational::one());
        assert_eq!(y.pow(4).trace(), BigRational::from_integer(7.into()));
        assert_eq!(y.mul(&y).minpoly(), p("x^2 - 3*x + 1"));
    }

    #[test]
    fn compositum_of_square_roots() {
        let s2 = real_root("x^2 - 2", 1, 2);
        let s3 = real_root("x^2 - 3", 1, 2);
        let k = NumberField::new(s2.clone());
        let (l, a, b) = k.compositum(&s3).unwrap();
        assert_eq!(l.degree(), 4);
        assert_eq!(a.mul(&a).as_rational(), Some(BigRational::from_integer(2.into())));
        assert_eq!(b.mul(&b).as_rational(), Some(BigRational::from_integer(3.into())));
        // embeddings agree with the chosen roots
        assert!(l.embed(&a, 40).unwrap().overlaps(&s2.enclosure(40).unwrap()));
        assert!(l.embed(&b, 40).unwrap().overlaps(&s3.enclosure(40).unwrap()));
    }

    #[test]
    fn membership() {
        let phi = real_root("x^2 - x - 1", 1, 2);
        let s5 = real_root("x^2 - 5", 2, 3);
        let k = NumberField::new(phi);
        let e = k.find(&s5).unwrap().unwrap();
        // sqrt5 = 2 phi - 1
        assert_eq!(e, k.y().scale(&BigRational::from_integer(2.into())).sub(&k.one()));
        assert!(k.find(&real_root("x^2 - 2", 1, 2)).unwrap().is_none());
    }

    #[test]
    fn cube_root_closure() {
        let c = real_root("x^3 - 2", 1, 2);
        let w = AlgebraicNumber::roots_of(&p("x^2 + x + 1")).unwrap().remove(0);
        let (l, _, z) = NumberField::new(c).compositum(&w).unwrap();
        assert_eq!(l.degree(), 6);
        assert_eq!(z.pow(3).as_rational(), Some(BigRational::one()));
    }
}
