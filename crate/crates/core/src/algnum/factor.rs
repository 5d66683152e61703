//! Factorization over the integers in the Zassenhaus style. Squarefree parts
//! are factored modulo a small prime, lifted, then recombined.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp::{odd_primes, Field, Fp};
use super::poly::IntPolynomial;

/// `f = content * prod g_i^{e_i}` with each `g_i` primitive, irreducible, positive leading coefficient.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub content: BigInt,
    pub factors: Vec<(IntPolynomial, usize)>,
}

/// Yun's squarefree decomposition over the rationals; output primitive.
pub fn squarefree_decomposition(f: &IntPolynomial) -> Vec<(IntPolynomial, usize)> {
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let a = f.to_qpoly();
    let mut c = a.gcd(&a.derivative());
    let mut w = a.div_rem(&c).0;
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0;
        if z.deg() > 0 {
            out.push((z.to_int_primitive(), i));
        }
        i += 1;
        c = c.div_rem(&y).0;
        w = y;
    }
    out
}

pub fn factor(f: &IntPolynomial) -> Factorization {
    let mut content = f.content();
    if f.lead().is_negative() {
        content = -content;
    }
    let mut factors = Vec::new();
    for (g, e) in squarefree_decomposition(&f.primitive_part()) {
        for h in factor_squarefree(&g) {
            factors.push((h, e));
        }
    }
    factors.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.coeffs().cmp(b.0.coeffs())));
    Factorization { content, factors }
}

/// Distinct irreducible factors, ignoring multiplicity and content.
pub fn irreducible_factors(f: &IntPolynomial) -> Vec<IntPolynomial> {
    factor(f).factors.into_iter().map(|(g, _)| g).collect()
}

/// Irreducible over the rationals (content ignored).
pub fn is_irreducible(f: &IntPolynomial) -> bool {
    if f.degree() == 0 {
        return false;
    }
    let fz = factor(f);
    fz.factors.len() == 1 && fz.factors[0].1 == 1
}

/// Irreducible factors of a primitive squarefree polynomial.
fn factor_squarefree(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut f = f.primitive_part();
    let mut out = Vec::new();
    if f.coeff(0).is_zero() {
        out.push(IntPolynomial::from_i64(&[0, 1]));
        f = IntPolynomial::new(f.coeffs()[1..].to_vec());
    }
    if f.degree() == 0 {
        return out;
    }
    if f.degree() == 1 {
        out.push(f);
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    // best of a few admissible primes: fewest modular factors
    let lc = f.lead();
    let mut best: Option<(Field, Vec<Fp>)> = None;
    let mut tried = 0;
    for p in odd_primes().take(2000) {
        if (&lc % p).is_zero() {
            continue;
        }
        let fp = Field::new(p);
        let g = fp.from_ints(f.coeffs());
        if !fp.is_squarefree(&g) {
            continue;
        }
        let facs = fp.factor_squarefree(&fp.monic(&g), &mut rng);
        if facs.len() == 1 {
            out.push(f);
            return out;
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((fp, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (fp, facs) = best.expect("no admissible prime for a squarefree polynomial");
    let p = BigInt::from(fp.p);
    // coefficient bound for lc * (any factor normalized to leading coefficient lc)
    let n = f.degree() as u32;
    let norm = f.norm2_sq().sqrt() + 1u32;
    let bound = (BigInt::one() << (n as usize + 1)) * lc.abs() * norm;
    let mut m = p.clone();
    while m <= bound {
        m *= &p;
    }
    let lifted = hensel_lift(fp, f.coeffs(), &facs, &m);
    out.extend(recombine(&f, lifted, &m));
    out
}

fn modp_to_int(v: &Fp) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

fn trim_z(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn reduce(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    trim_z(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn mul_m(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    reduce(&v, m)
}

fn sub_m(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    reduce(&(0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect::<Vec<_>>(), m)
}

fn add_m(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    reduce(&(0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect::<Vec<_>>(), m)
}

/// Division by a monic polynomial modulo `m`.
fn divrem_monic_m(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    let mut r = reduce(a, m);
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].mod_floor(m);
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] -= &c * bj;
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    (reduce(&q, m), reduce(&r, m))
}

/// Lift `f ≡ lc(f) * prod facs (mod p)` to monic factors modulo `target`.
fn hensel_lift(fp: Field, f: &[BigInt], facs: &[Fp], target: &BigInt) -> Vec<Vec<BigInt>> {
    let lc = f.last().unwrap().clone();
    if facs.len() == 1 {
        let inv = lc.modinv(target).expect("leading coefficient invertible");
        let v: Vec<BigInt> = f.iter().map(|c| c * &inv).collect();
        return vec![reduce(&v, target)];
    }
    let half = facs.len() / 2;
    let (a, b) = facs.split_at(half);
    let lcp = fp.reduce_int(&lc);
    let g0 = a.iter().fold(vec![lcp], |acc, u| fp.mul(&acc, u));
    let h0 = b.iter().fold(vec![1u64], |acc, u| fp.mul(&acc, u));
    let (_, s0, t0) = fp.ext_gcd(&g0, &h0);

    let p = BigInt::from(fp.p);
    let (mut g, mut h, mut s, mut t) = (modp_to_int(&g0), modp_to_int(&h0), modp_to_int(&s0), modp_to_int(&t0));
    let mut m = p;
    while &m < target {
        let m2 = &m * &m;
        let e = sub_m(f, &mul_m(&g, &h, &m2), &m2);
        let (q, r) = divrem_monic_m(&mul_m(&s, &e, &m2), &h, &m2);
        let g1 = add_m(&add_m(&g, &mul_m(&t, &e, &m2), &m2), &mul_m(&q, &g, &m2), &m2);
        let h1 = add_m(&h, &r, &m2);
        let bb = sub_m(&add_m(&mul_m(&s, &g1, &m2), &mul_m(&t, &h1, &m2), &m2), &[BigInt::one()], &m2);
        let (c, d) = divrem_monic_m(&mul_m(&s, &bb, &m2), &h1, &m2);
        s = sub_m(&s, &d, &m2);
        t = sub_m(&sub_m(&t, &mul_m(&t, &bb, &m2), &m2), &mul_m(&c, &g1, &m2), &m2);
        g = g1;
        h = h1;
        m = m2;
    }
    let g = reduce(&g, target);
    let h = reduce(&h, target);
    let mut out = hensel_lift(fp, &g, a, target);
    out.extend(hensel_lift(fp, &h, b, target));
    out
}

fn symmetric(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    trim_z(
        v.iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect(),
    )
}

/// Combine lifted modular factors into true factors, trying subsets by size.
fn recombine(f: &IntPolynomial, mut us: Vec<Vec<BigInt>>, m: &BigInt) -> Vec<IntPolynomial> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut s = 1;
    'outer: while 2 * s <= us.len() {
        let b = rest.lead();
        let r = us.len();
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let prod = idx.iter().fold(vec![b.clone()], |acc, &i| mul_m(&acc, &us[i], m));
            let g = IntPolynomial::new(symmetric(&prod, m)).primitive_part();
            if let Some(q) = rest.exact_div(&g) {
                out.push(g);
                rest = q.primitive_part();
                for &i in idx.iter().rev() {
                    us.remove(i);
                }
                continue 'outer;
            }
            // next combination
            let mut k = s;
            loop {
                if k == 0 {
                    s += 1;
                    continue 'outer;
                }
                k -= 1;
                if idx[k] < r - s + k {
                    idx[k] += 1;
                    for j in k + 1..s {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    if rest.degree() > 0 {
        out.push(rest);
    }
    out
}

/// Product of the factors, used to check a factorization.
pub fn expand(fz: &Factorization) -> IntPolynomial {
    let mut acc = IntPolynomial::new(vec![fz.content.clone()]);
    for (g, e) in &fz.factors {
        for _ in 0..*e {
            acc = acc.mul(g);
        }
    }
    acc
}

/// Rational roots of `f` (each listed once).
pub fn rational_roots(f: &IntPolynomial) -> Vec<num_rational::BigRational> {
    irreducible_factors(f)
        .into_iter()
        .filter(|g| g.degree() == 1)
        .map(|g| num_rational::BigRational::new(-g.coeff(0), g.coeff(1)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPolynomial {
        IntPolynomial::parse(s).unwrap()
    }

    #[test]
    fn factors_small_polynomials() {
        let f = p("x^4 - 1");
        let fz = factor(&f);
        assert_eq!(fz.factors.len(), 3);
        assert_eq!(expand(&fz), f);
        assert!(is_irreducible(&p("x^2 - x - 1")));
        assert!(is_irreducible(&p("x^3 - 2")));
        assert!(!is_irreducible(&p("x^2 - 4")));
    }

    #[test]
    fn swinnerton_dyer_needs_recombination() {
        // minimal polynomial of sqrt2 + sqrt3: irreducible but splits mod every prime
        let f = p("x^4 - 10*x^2 + 1");
        assert!(is_irreducible(&f));
        let g = f.mul(&p("x^2 - 3"));
        let fz = factor(&g);
        assert_eq!(fz.factors.len(), 2);
        assert_eq!(expand(&fz), g);
    }

    #[test]
    fn multiplicities_and_content() {
        let f = p("6*x^5 + 6*x^4 - 6*x - 6"); // 6 (x+1)(x^4 - 1)
        let fz = factor(&f);
        assert_eq!(fz.content, BigInt::from(6));
        assert!(fz.factors.iter().any(|(g, e)| *g == p("x + 1") && *e == 2));
        assert_eq!(expand(&fz), f);
    }

    #[test]
    fn non_monic_factor() {
        let f = p("2*x - 1").mul(&p("3*x^2 + 1")).mul(&p("x^3 - x - 1"));
        let fz = factor(&f);
        assert_eq!(fz.factors.len(), 3);
        assert_eq!(expand(&fz), f);
    }

    #[test]
    fn cyclotomic_splitting() {
        let f = p("x^12 - 1");
        assert_eq!(factor(&f).factors.len(), 6);
    }
}
