//! Roots of unity in the Galois closure of the field generated by roots of
//! given polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::factor::{irreducible_factors, is_irreducible};
use super::field::{FieldElement, NumberField};
use super::modp::{odd_primes, Field};
use super::number::AlgebraicNumber;
use super::poly::IntPolynomial;
use super::unity::{cyclotomic, euler_phi};
use crate::error::{Error, Result};
use crate::lattice::relation::{search_vector_relation, LatticeConfig};
use crate::numkernel::IntervalReal;

/// Largest splitting-field degree the closure step will build.
pub const MAX_CLOSURE_DEGREE: usize = 24;

/// `zeta_q = g(y)` in the closure, verified by `Phi_q(g(y)) = 0 mod f(y)`.
#[derive(Clone, Debug, Serialize)]
pub struct UnityWitness {
    pub order: u64,
    pub element: FieldElement,
}

/// Proof that `zeta_q` is not in the closure.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Exclusion {
    /// The closure has a real embedding, so only `±1` are roots of unity in it.
    RealEmbedding { order: u64 },
    /// `f mod p` is squarefree and has an irreducible factor whose degree is
    /// not a multiple of the order of `p` modulo `q`.
    Frobenius { order: u64, prime: u64, factor_degrees: Vec<usize>, order_of_prime: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionReport {
    /// Number of roots of unity found (a lower bound unless `certified`).
    pub h: u64,
    pub certified: bool,
    pub closure_degree: usize,
    pub closure_poly: IntPolynomial,
    pub closure_poly_irreducible: bool,
    /// One witness per maximal prime-power order dividing h.
    pub witnesses: Vec<UnityWitness>,
    pub exclusions: Vec<Exclusion>,
    /// Orders neither verified nor excluded.
    pub unresolved: Vec<u64>,
}

/// Splitting field of the given polynomials, as a single number field.
pub fn splitting_field(generators: &[IntPolynomial]) -> Result<NumberField> {
    let mut k = NumberField::rationals();
    for g in generators {
        for f in irreducible_factors(g) {
            if f.degree() == 1 {
                continue;
            }
            for r in AlgebraicNumber::roots_of(&f)? {
                if k.degree() % r.degree() == 0 && k.find(&r)?.is_some() {
                    continue;
                }
                let (l, _, _) = k.compositum(&r)?;
                if l.degree() > MAX_CLOSURE_DEGREE {
                    return Err(Error::Unsupported(format!(
                        "Galois closure has degree above {MAX_CLOSURE_DEGREE}"
                    )));
                }
                k = l;
            }
        }
    }
    Ok(k)
}

fn multiplicative_order(p: u64, q: u64) -> u64 {
    let mut x = p % q;
    let mut k = 1;
    while x != 1 {
        x = x * p % q;
        k += 1;
    }
    k
}

fn small_primes(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)).collect()
}

/// `Phi_q(e) == 0` in the field of `e`.
fn is_primitive_root(e: &FieldElement, q: u64) -> bool {
    let phi = cyclotomic(q);
    let v = phi
        .coeffs()
        .iter()
        .rev()
        .fold(e.rational(&BigRational::zero()), |acc, c| acc.mul(e).add(&e.rational(&BigRational::from_integer(c.clone()))));
    v.is_zero()
}

/// Try to prove `zeta_q` is absent using Frobenius degrees.
fn frobenius_exclusion(f: &IntPolynomial, q: u64) -> Option<Exclusion> {
    let lc = f.lead();
    for p in odd_primes().take(400) {
        if q % p == 0 || (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = Field::new(p);
        let red = fp.from_ints(f.coeffs());
        if !fp.is_squarefree(&red) {
            continue;
        }
        let ord = multiplicative_order(p, q);
        let degs = fp.factor_degrees(&red);
        if degs.iter().any(|&d| d as u64 % ord != 0) {
            return Some(Exclusion::Frobenius { order: q, prime: p, factor_degrees: degs, order_of_prime: ord });
        }
    }
    None
}

/// Search numerically for `zeta_q` in the power basis of `k`, then verify exactly.
fn find_unity(k: &NumberField, q: u64) -> Result<Option<FieldElement>> {
    let d = k.degree();
    let angle = 2.0 * std::f64::consts::PI / q as f64;
    let hint = (BigRational::from_float(angle.cos()).unwrap(), BigRational::from_float(angle.sin()).unwrap());
    let zeta = AlgebraicNumber::nearest_root(&cyclotomic(q), &hint.0, &hint.1)?;
    let theta = k.gen();
    let mag = theta.root_box().modulus().hi().magnitude().max(0) as u32;
    let cfg = LatticeConfig::default();
    for hb in [16u32, 32, 64, 128, 256] {
        let w = (cfg.guard_factor * (d + 1) as f64 * hb as f64).ceil() as u32 + 64;
        let t = theta.enclosure(w + d as u32 * mag + 16)?.with_prec(w + d as u32 * mag + 16);
        let z = zeta.enclosure(w)?;
        let mut vals = vec![vec![z.re.clone(), z.im.clone()]];
        let mut pw = super::roots::ComplexBox::from_int(1, t.prec());
        for _ in 0..d {
            vals.push(vec![pw.re.clone(), pw.im.clone()]);
            pw = pw.mul(&t);
        }
        let h = BigInt::one() << hb;
        let vals: Vec<Vec<IntervalReal>> = vals;
        let rep = search_vector_relation(&vals, &h, &cfg)?;
        if let Some(c) = rep.found {
            if c[0].is_zero() {
                continue;
            }
            let c0 = BigRational::from_integer(c[0].clone());
            let coords: Vec<BigRational> = c[1..].iter().map(|x| -BigRational::from_integer(x.clone()) / &c0).collect();
            let g = k.element(coords);
            if is_primitive_root(&g, q) {
                return Ok(Some(g));
            }
        }
    }
    Ok(None)
}

/// Number of roots of unity in the Galois closure of `Q(roots of generators)`.
pub fn torsion_order(generators: &[IntPolynomial], degree_cap: usize) -> Result<TorsionReport> {
    let total: usize = generators.iter().map(|g| g.degree().max(1)).product();
    if total > degree_cap {
        return Err(Error::Unsupported(format!("product of degrees {total} exceeds the cap {degree_cap}")));
    }
    let k = splitting_field(generators)?;
    torsion_of_field(&k)
}

/// Torsion of a Galois number field.
pub fn torsion_of_field(k: &NumberField) -> Result<TorsionReport> {
    let d = k.degree();
    let f = k.poly().clone();
    let mut rep = TorsionReport {
        h: 2,
        certified: true,
        closure_degree: d,
        closure_poly_irreducible: is_irreducible(&f),
        closure_poly: f.clone(),
        witnesses: vec![UnityWitness { order: 2, element: k.rational(&-BigRational::one()) }],
        exclusions: Vec::new(),
        unresolved: Vec::new(),
    };
    let real = k.gen().is_real();
    for l in small_primes(d as u64 + 1) {
        if (d as u64) % (l - 1) != 0 {
            continue;
        }
        let mut e = if l == 2 { 2 } else { 1 };
        loop {
            let q = l.pow(e);
            if (d as u64) % euler_phi(q) != 0 {
                break;
            }
            if real {
                rep.exclusions.push(Exclusion::RealEmbedding { order: q });
                break;
            }
            if let Some(x) = frobenius_exclusion(&f, q) {
                rep.exclusions.push(x);
                break;
            }
            match find_unity(k, q)? {
                Some(g) => {
                    rep.witnesses.retain(|w| w.order % l != 0);
                    rep.witnesses.push(UnityWitness { order: q, element: g });
                }
                None => {
                    rep.unresolved.push(q);
                    rep.certified = false;
                    break;
                }
            }
            e += 1;
        }
    }
    rep.h = rep.witnesses.iter().map(|w| w.order).product();
    rep.witnesses.sort_by_key(|w| w.order);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPolynomial {
        IntPolynomial::parse(s).unwrap()
    }

    #[test]
    fn quadratic_fields() {
        let r = torsion_order(&[p("x^2 - 2")], 12).unwrap();
        assert_eq!((r.h, r.certified), (2, true));
        let r = torsion_order(&[p("x^2 + 1")], 12).unwrap();
        assert_eq!((r.h, r.certified), (4, true));
        let r = torsion_order(&[p("x^2 + 3")], 12).unwrap();
        assert_eq!(r.h, 6);
    }

    #[test]
    fn cube_root_of_two_closure() {
        let r = torsion_order(&[p("x^3 - 2")], 12).unwrap();
        assert_eq!(r.closure_degree, 6);
        assert!(r.closure_poly_irreducible);
        assert_eq!((r.h, r.certified), (6, true));
        let w3 = r.witnesses.iter().find(|w| w.order == 3).unwrap();
        assert!(is_primitive_root(&w3.element, 3));
    }

    #[test]
    fn cyclotomic_field() {
        let r = torsion_order(&[p("x^4 + 1")], 12).unwrap();
        assert_eq!((r.h, r.certified), (8, true));
        let r = torsion_order(&[p("x^4 - x^2 + 1")], 12).unwrap();
        assert_eq!(r.h, 12);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(torsion_order(&[p("x^5 - 2"), p("x^3 - 3")], 12), Err(Error::Unsupported(_))));
    }
}
