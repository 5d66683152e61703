//! Polynomials over a prime field `F_p` with word-size `p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Fp = Vec<u64>;

#[derive(Clone, Copy, Debug)]
pub struct Field {
    pub p: u64,
}

impl Field {
    pub fn new(p: u64) -> Self {
        Field { p }
    }

    fn mul_s(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow_s(a, self.p - 2)
    }

    fn pow_s(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_s(r, a);
            }
            a = self.mul_s(a, a);
            e >>= 1;
        }
        r
    }

    pub fn reduce_int(&self, c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    pub fn from_ints(&self, c: &[BigInt]) -> Fp {
        trim(c.iter().map(|x| self.reduce_int(x)).collect())
    }

    pub fn add(&self, a: &Fp, b: &Fp) -> Fp {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % self.p).collect())
    }

    pub fn sub(&self, a: &Fp, b: &Fp) -> Fp {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| (a.get(i).copied().unwrap_or(0) + self.p - b.get(i).copied().unwrap_or(0)) % self.p)
                .collect(),
        )
    }

    pub fn mul(&self, a: &Fp, b: &Fp) -> Fp {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut v = vec![0u128; a.len() + b.len() - 1];
        let p = self.p as u128;
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                v[i + j] = (v[i + j] + x as u128 * y as u128) % p;
            }
        }
        trim(v.into_iter().map(|x| x as u64).collect())
    }

    pub fn scale(&self, a: &Fp, k: u64) -> Fp {
        trim(a.iter().map(|&x| self.mul_s(x, k)).collect())
    }

    pub fn monic(&self, a: &Fp) -> Fp {
        match a.last() {
            None => vec![],
            Some(&l) => self.scale(a, self.inv(l)),
        }
    }

    pub fn div_rem(&self, a: &Fp, b: &Fp) -> (Fp, Fp) {
        assert!(!b.is_empty());
        let db = b.len() - 1;
        if a.len() <= db {
            return (vec![], a.clone());
        }
        let li = self.inv(*b.last().unwrap());
        let mut r = a.clone();
        let mut q = vec![0u64; a.len() - db];
        for i in (0..q.len()).rev() {
            let c = self.mul_s(r[i + db], li);
            if c != 0 {
                for (j, &bj) in b.iter().enumerate() {
                    r[i + j] = (r[i + j] + self.p - self.mul_s(c, bj)) % self.p;
                }
            }
            q[i] = c;
        }
        r.truncate(db);
        (trim(q), trim(r))
    }

    pub fn rem(&self, a: &Fp, b: &Fp) -> Fp {
        self.div_rem(a, b).1
    }

    pub fn gcd(&self, a: &Fp, b: &Fp) -> Fp {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Extended gcd `(g, s, t)` with `s a + t b = g` monic.
    pub fn ext_gcd(&self, a: &Fp, b: &Fp) -> (Fp, Fp, Fp) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (vec![1u64], vec![]);
        let (mut t0, mut t1) = (vec![], vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.div_rem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let li = self.inv(*r0.last().unwrap());
        (self.scale(&r0, li), self.scale(&s0, li), self.scale(&t0, li))
    }

    pub fn derivative(&self, a: &Fp) -> Fp {
        trim(a.iter().enumerate().skip(1).map(|(i, &c)| self.mul_s(c, i as u64 % self.p)).collect())
    }

    /// `base^e mod m`.
    pub fn powmod(&self, base: &Fp, e: &BigInt, m: &Fp) -> Fp {
        let mut r = vec![1u64];
        let b = self.rem(base, m);
        for i in (0..e.bits()).rev() {
            r = self.rem(&self.mul(&r, &r), m);
            if e.bit(i) {
                r = self.rem(&self.mul(&r, &b), m);
            }
        }
        self.rem(&r, m)
    }

    pub fn is_squarefree(&self, a: &Fp) -> bool {
        let d = self.derivative(a);
        !d.is_empty() && self.gcd(a, &d).len() == 1
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// pairs `(product of all degree-d factors, d)`.
    pub fn distinct_degree(&self, f: &Fp) -> Vec<(Fp, usize)> {
        let mut out = Vec::new();
        let mut f = f.clone();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let mut d = 0;
        let p = BigInt::from(self.p);
        while f.len() > 1 {
            d += 1;
            if 2 * d > f.len() - 1 {
                let deg = f.len() - 1;
                out.push((f.clone(), deg));
                break;
            }
            h = self.powmod(&h, &p, &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            if g.len() > 1 {
                f = self.div_rem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((g, d));
            }
        }
        out
    }

    /// Split a monic product of distinct degree-`d` irreducibles (odd `p`).
    pub fn equal_degree(&self, f: &Fp, d: usize, rng: &mut ChaCha8Rng) -> Vec<Fp> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.clone()];
        }
        let e = (num_traits::pow::pow(BigInt::from(self.p), d) - 1u32) / 2u32;
        loop {
            let a: Fp = trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if a.len() < 2 {
                continue;
            }
            let g = self.gcd(&a, f);
            let split = if g.len() > 1 && g.len() < f.len() {
                Some(g)
            } else {
                let b = self.sub(&self.powmod(&a, &e, f), &vec![1]);
                let g = self.gcd(&b, f);
                (g.len() > 1 && g.len() < f.len()).then_some(g)
            };
            if let Some(g) = split {
                let h = self.div_rem(f, &g).0;
                let mut v = self.equal_degree(&g, d, rng);
                v.extend(self.equal_degree(&self.monic(&h), d, rng));
                return v;
            }
        }
    }

    /// Monic irreducible factors of a monic squarefree polynomial.
    pub fn factor_squarefree(&self, f: &Fp, rng: &mut ChaCha8Rng) -> Vec<Fp> {
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(f) {
            out.extend(self.equal_degree(&g, d, rng));
        }
        out
    }

    /// Degrees of the irreducible factors of a squarefree polynomial.
    pub fn factor_degrees(&self, f: &Fp) -> Vec<usize> {
        let mut v = Vec::new();
        for (g, d) in self.distinct_degree(&self.monic(f)) {
            for _ in 0..(g.len() - 1) / d {
                v.push(d);
            }
        }
        v
    }
}

pub fn trim(mut v: Fp) -> Fp {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Small odd primes by trial division.
pub fn odd_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| (3..).step_by(2).take_while(|k| k * k <= n).all(|k| n % k != 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn factors_mod_seven() {
        let f = Field::new(7);
        // x^4 - 1 = (x-1)(x+1)(x^2+1) mod 7
        let poly = vec![6, 0, 0, 0, 1];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut degs: Vec<usize> = f.factor_squarefree(&poly, &mut rng).iter().map(|g| g.len() - 1).collect();
        degs.sort();
        assert_eq!(degs, vec![1, 1, 2]);
        assert_eq!(f.factor_degrees(&poly), vec![1, 1, 2]);
    }

    #[test]
    fn primes_start_right() {
        let v: Vec<u64> = odd_primes().take(5).collect();
        assert_eq!(v, vec![3, 5, 7, 11, 13]);
    }
}
