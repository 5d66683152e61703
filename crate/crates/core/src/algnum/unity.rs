//! Roots of unity and the reduction of degenerate exponential sums.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::number::AlgebraicNumber;
use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// Euler's totient.
pub fn euler_phi(mut m: u64) -> u64 {
    let mut r = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if m > 1 {
        r -= r / m;
    }
    r
}

/// The m-th cyclotomic polynomial.
pub fn cyclotomic(m: u64) -> IntPolynomial {
    assert!(m >= 1);
    let mut xm = vec![BigInt::zero(); m as usize + 1];
    xm[0] = -BigInt::one();
    xm[m as usize] = BigInt::one();
    let mut p = IntPolynomial::new(xm);
    for d in 1..m {
        if m % d == 0 {
            p = p.exact_div(&cyclotomic(d)).expect("cyclotomic divisors divide x^m - 1");
        }
    }
    p
}

/// Orders m with `phi(m) = n`.
pub fn orders_with_totient(n: u64) -> Vec<u64> {
    // phi(m) >= sqrt(m / 2), so m <= 2 n^2
    (1..=(2 * n * n).max(2)).filter(|&m| euler_phi(m) == n).collect()
}

/// Order of `a` as a root of unity, if it is one.
pub fn is_root_of_unity(a: &AlgebraicNumber) -> Option<u64> {
    cyclotomic_index(a.minpoly())
}

/// `m` such that `f` is the m-th cyclotomic polynomial (up to sign).
pub fn cyclotomic_index(f: &IntPolynomial) -> Option<u64> {
    let f = f.primitive_part();
    let f = if f.lead() < BigInt::zero() { f.neg() } else { f };
    if !f.is_monic() || !f.coeff(0).magnitude().is_one() {
        return None;
    }
    orders_with_totient(f.degree() as u64).into_iter().find(|&m| cyclotomic(m) == f)
}

/// Order of `a / b` as a root of unity, if it is one.
pub fn ratio_root_of_unity(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<Option<u64>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidInput("zero entry".into()));
    }
    // equal moduli are necessary; a cheap float screen avoids composing unrelated polynomials
    let (ar, ai) = a.approx();
    let (br, bi) = b.approx();
    let (ma, mb) = (ar.hypot(ai), br.hypot(bi));
    if (ma - mb).abs() > 1e-6 * ma.max(mb) {
        return Ok(None);
    }
    Ok(is_root_of_unity(&a.div(b)?))
}

/// One residue class `n = residue + h m` of a reduced sum.
#[derive(Clone, Debug, Serialize)]
pub struct ResidueClass {
    pub residue: u64,
    /// Bases `alpha_j^h` of the merged terms.
    pub bases: Vec<AlgebraicNumber>,
    /// Coefficients `sum_j q_j alpha_j^residue` over each merged group.
    pub coeffs: Vec<AlgebraicNumber>,
    /// Original indices merged into each term.
    pub sources: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Reduction {
    /// Period h; 1 when the input was already non-degenerate.
    pub period: u64,
    pub classes: Vec<ResidueClass>,
}

impl Reduction {
    pub fn is_trivial(&self) -> bool {
        self.period == 1
    }
}

/// Split `sum q_i alpha_i^n` into residue classes modulo the lcm h of the
/// root-of-unity orders of the ratios `alpha_i / alpha_j`, merging terms with
/// equal h-th powers. Terms whose merged coefficient vanishes are dropped.
pub fn reduce_degenerate(alphas: &[AlgebraicNumber], qs: &[AlgebraicNumber]) -> Result<Reduction> {
    if alphas.len() != qs.len() {
        return Err(Error::InvalidInput("bases and coefficients differ in length".into()));
    }
    let k = alphas.len();
    // union-find over degenerate pairs
    let mut group: Vec<usize> = (0..k).collect();
    let mut h = 1u64;
    for i in 0..k {
        for j in 0..i {
            if let Some(m) = ratio_root_of_unity(&alphas[i], &alphas[j])? {
                h = h.lcm(&m);
                let (gi, gj) = (group[i], group[j]);
                for g in group.iter_mut() {
                    if *g == gi {
                        *g = gj;
                    }
                }
            }
        }
    }
    let mut reps: Vec<usize> = group.clone();
    reps.sort();
    reps.dedup();
    if h == 1 {
        return Ok(Reduction {
            period: 1,
            classes: vec![ResidueClass {
                residue: 0,
                bases: alphas.to_vec(),
                coeffs: qs.to_vec(),
                sources: (0..k).map(|i| vec![i]).collect(),
            }],
        });
    }
    let bases: Vec<AlgebraicNumber> = reps.iter().map(|&r| alphas[r].pow(h)).collect::<Result<_>>()?;
    let mut classes = Vec::new();
    for a in 0..h {
        let mut cls = ResidueClass { residue: a, bases: Vec::new(), coeffs: Vec::new(), sources: Vec::new() };
        for (gi, &r) in reps.iter().enumerate() {
            let members: Vec<usize> = (0..k).filter(|&i| group[i] == r).collect();
            let mut c = AlgebraicNumber::from_int(0);
            for &i in &members {
                c = c.add(&qs[i].mul(&alphas[i].pow(a)?)?)?;
            }
            if !c.is_zero() {
                cls.bases.push(bases[gi].clone());
                cls.coeffs.push(c);
                cls.sources.push(members);
            }
        }
        classes.push(cls);
    }
    Ok(Reduction { period: h, classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn p(s: &str) -> IntPolynomial {
        IntPolynomial::parse(s).unwrap()
    }

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic(1), p("x - 1"));
        assert_eq!(cyclotomic(6), p("x^2 - x + 1"));
        assert_eq!(cyclotomic(12), p("x^4 - x^2 + 1"));
        assert_eq!(euler_phi(36), 12);
        assert_eq!(orders_with_totient(2), vec![3, 4, 6]);
    }

    #[test]
    fn unity_orders() {
        assert_eq!(is_root_of_unity(&AlgebraicNumber::from_int(-1)), Some(2));
        let z6 = AlgebraicNumber::roots_of(&p("x^2 - x + 1")).unwrap().remove(0);
        assert_eq!(is_root_of_unity(&z6), Some(6));
        let phi = AlgebraicNumber::real_root_in(&p("x^2 - x - 1"), &q(1), &q(2)).unwrap();
        assert_eq!(is_root_of_unity(&phi), None);
    }

    #[test]
    fn reduce_opposite_pair() {
        let phi = AlgebraicNumber::real_root_in(&p("x^2 - x - 1"), &q(1), &q(2)).unwrap();
        let one = AlgebraicNumber::from_int(1);
        let r = reduce_degenerate(&[phi.clone(), phi.neg()], &[one.clone(), one]).unwrap();
        assert_eq!(r.period, 2);
        assert_eq!(r.classes[0].coeffs[0].as_rational(), Some(BigRational::from_integer(2.into())));
        assert_eq!(r.classes[0].bases[0].minpoly(), &p("x^2 - 3*x + 1"));
        assert!(r.classes[1].coeffs.is_empty());
    }

    #[test]
    fn non_degenerate_unchanged() {
        let a = AlgebraicNumber::real_root_in(&p("x^2 - 2"), &q(1), &q(2)).unwrap();
        let b = AlgebraicNumber::from_int(3);
        let one = AlgebraicNumber::from_int(1);
        let r = reduce_degenerate(&[a, b], &[one.clone(), one]).unwrap();
        assert!(r.is_trivial());
        assert_eq!(r.classes[0].bases.len(), 2);
    }
}
