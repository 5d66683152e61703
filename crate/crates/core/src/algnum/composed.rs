//! Polynomials whose roots are combinations of the roots of given
//! polynomials. Everything is computed exactly from power sums.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{IntPolynomial, QPoly};

fn binomials(k: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for i in 0..k {
        let next = &row[i] * BigInt::from(k - i) / BigInt::from(i + 1);
        row.push(next);
    }
    row
}

/// Roots `a + c b` over all pairs of roots `a` of `f`, `b` of `g`.
pub fn composed_sum(f: &IntPolynomial, g: &IntPolynomial, c: &BigRational) -> IntPolynomial {
    let n = f.degree() * g.degree();
    let pf = f.to_qpoly().power_sums(n);
    let pg = g.to_qpoly().power_sums(n);
    let mut cpow = vec![BigRational::one()];
    for i in 0..n {
        let next = &cpow[i] * c;
        cpow.push(next);
    }
    let mut p = vec![BigRational::from_integer(BigInt::from(n))];
    for k in 1..=n {
        let b = binomials(k);
        let mut s = BigRational::zero();
        for l in 0..=k {
            if cpow[k - l].is_zero() && k > l {
                continue;
            }
            s += BigRational::from_integer(b[l].clone()) * &cpow[k - l] * &pf[l] * &pg[k - l];
        }
        p.push(s);
    }
    QPoly::from_power_sums(&p, n).to_int_primitive()
}

/// Roots `a b`.
pub fn composed_product(f: &IntPolynomial, g: &IntPolynomial) -> IntPolynomial {
    let n = f.degree() * g.degree();
    let pf = f.to_qpoly().power_sums(n);
    let pg = g.to_qpoly().power_sums(n);
    let p: Vec<BigRational> = (0..=n).map(|k| &pf[k] * &pg[k]).collect();
    QPoly::from_power_sums(&p, n).to_int_primitive()
}

/// Roots `1/a`; requires `f(0) != 0`.
pub fn reciprocal(f: &IntPolynomial) -> IntPolynomial {
    f.reversed().primitive_part()
}

/// Roots `a / b`.
pub fn composed_ratio(f: &IntPolynomial, g: &IntPolynomial) -> IntPolynomial {
    composed_product(f, &reciprocal(g))
}

/// Roots `a^m`.
pub fn power_poly(f: &IntPolynomial, m: usize) -> IntPolynomial {
    let n = f.degree();
    let pf = f.to_qpoly().power_sums(n * m.max(1));
    let p: Vec<BigRational> = (0..=n).map(|k| pf[k * m].clone()).collect();
    let mut p = p;
    p[0] = BigRational::from_integer(BigInt::from(n));
    QPoly::from_power_sums(&p, n).to_int_primitive()
}

/// Roots `q a` for rational `q != 0`.
pub fn scale_roots(f: &IntPolynomial, q: &BigRational) -> IntPolynomial {
    // f(x/q) scaled: coefficient a_i q^{n-i}
    let n = f.degree();
    let mut acc = BigRational::one();
    let mut v = vec![BigRational::zero(); n + 1];
    for i in (0..=n).rev() {
        v[i] = BigRational::from_integer(f.coeff(i)) * &acc;
        acc *= q;
    }
    QPoly::new(v).to_int_primitive()
}

/// Roots `a + r` for rational `r`.
pub fn shift_roots(f: &IntPolynomial, r: &BigRational) -> IntPolynomial {
    // f(x - r)
    let lin = QPoly::new(vec![-r.clone(), BigRational::one()]);
    f.to_qpoly().compose(&lin).to_int_primitive()
}
