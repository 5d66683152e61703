use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A lattice given by a row basis of integer vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntLattice {
    #[serde(serialize_with = "crate::ser::int_rows")]
    pub basis: Vec<Vec<BigInt>>,
}

impl IntLattice {
    pub fn new(basis: Vec<Vec<BigInt>>) -> Result<Self> {
        let m = basis.first().map(|r| r.len()).unwrap_or(0);
        if basis.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidInput("lattice rows have different lengths".into()));
        }
        Ok(IntLattice { basis })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntLattice { basis: rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect() }
    }

    /// Number of basis vectors.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dimension(&self) -> usize {
        self.basis.first().map(|r| r.len()).unwrap_or(0)
    }

    /// Gram determinant `det(B B^T)`; zero iff the rows are dependent.
    pub fn gram_determinant(&self) -> BigInt {
        let d = gram_schmidt_ds(&self.basis);
        d.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Squared Gram–Schmidt norms `|b*_i|^2`, exactly.
    pub fn gso_norms(&self) -> Vec<BigRational> {
        let d = gram_schmidt_ds(&self.basis);
        (0..self.basis.len()).map(|i| BigRational::new(d[i + 1].clone(), d[i].clone())).collect()
    }

    /// Check size reduction and the Lovász condition exactly.
    pub fn is_lll_reduced(&self, delta: &BigRational) -> bool {
        let n = self.basis.len();
        let (mu, bstar) = rational_gso(&self.basis);
        let half = BigRational::new(1.into(), 2.into());
        for i in 0..n {
            for j in 0..i {
                if mu[i][j].abs() > half {
                    return false;
                }
            }
        }
        for k in 1..n {
            let lhs = &bstar[k];
            let rhs = (delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bstar[k - 1];
            if *lhs < rhs {
                return false;
            }
        }
        true
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `d_0 = 1, d_i = det Gram(b_1..b_i)` via fraction-free elimination.
fn gram_schmidt_ds(b: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = b.len();
    let mut g: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| dot(&b[i], &b[j])).collect()).collect();
    // Bareiss on the Gram matrix: leading principal minors
    let mut d = vec![BigInt::one()];
    let mut prev = BigInt::one();
    for k in 0..n {
        if g[k][k].is_zero() {
            d.extend(std::iter::repeat_n(BigInt::zero(), n - k));
            return d;
        }
        d.push(g[k][k].clone());
        for i in k + 1..n {
            for j in k + 1..n {
                g[i][j] = (&g[i][j] * &g[k][k] - &g[i][k] * &g[k][j]) / &prev;
            }
        }
        prev = g[k][k].clone();
    }
    d
}

fn rational_gso(b: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = b.len();
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    let mut bs: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut norms: Vec<BigRational> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut v: Vec<BigRational> = b[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
        for j in 0..i {
            if norms[j].is_zero() {
                continue;
            }
            let num: BigRational = (0..m).map(|t| BigRational::from_integer(b[i][t].clone()) * &bs[j][t]).sum();
            mu[i][j] = num / &norms[j];
            for t in 0..m {
                let s = &mu[i][j] * &bs[j][t];
                v[t] -= s;
            }
        }
        let nn: BigRational = v.iter().map(|x| x * x).sum();
        norms.push(nn);
        bs.push(v);
    }
    (mu, norms)
}

/// Round `a / b` to the nearest integer (`b > 0`).
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

/// Exact integral LLL (fraction-free Gram–Schmidt) with parameter `delta`.
pub fn lll_reduce(lat: &IntLattice, delta: &BigRational) -> Result<IntLattice> {
    let quarter = BigRational::new(1.into(), 4.into());
    if *delta <= quarter || *delta >= BigRational::one() {
        return Err(Error::InvalidInput("delta must lie in (1/4, 1)".into()));
    }
    let n = lat.basis.len();
    let mut b = lat.basis.clone();
    if n <= 1 {
        return Ok(IntLattice { basis: b });
    }
    let (dp, dq) = (delta.numer().clone(), delta.denom().clone());
    // 1-based d with d[0] = 1; lambda[k][j] for j < k
    let mut d = vec![BigInt::zero(); n + 1];
    d[0] = BigInt::one();
    let mut lam = vec![vec![BigInt::zero(); n]; n];

    let gso_row = |b: &Vec<Vec<BigInt>>, d: &mut Vec<BigInt>, lam: &mut Vec<Vec<BigInt>>, k: usize| -> Result<()> {
        for j in 0..=k {
            let mut u = dot(&b[k], &b[j]);
            for i in 0..j {
                u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
            }
            if j < k {
                lam[k][j] = u;
            } else {
                if u.is_zero() {
                    return Err(Error::InvalidInput("lattice basis is linearly dependent".into()));
                }
                d[k + 1] = u;
            }
        }
        Ok(())
    };

    gso_row(&b, &mut d, &mut lam, 0)?;
    let mut kmax = 0;
    let mut k = 1;
    while k < n {
        if k > kmax {
            kmax = k;
            gso_row(&b, &mut d, &mut lam, k)?;
        }
        loop {
            red(&mut b, &mut lam, &d, k, k - 1);
            // Lovász: q d_k d_{k-2} < p d_{k-1}^2 - q lambda^2 triggers a swap (1-based d indices)
            let lhs = &dq * &d[k + 1] * &d[k - 1];
            let rhs = &dp * &d[k] * &d[k] - &dq * &lam[k][k - 1] * &lam[k][k - 1];
            if lhs < rhs {
                swap(&mut b, &mut lam, &mut d, k, kmax);
                if k > 1 {
                    k -= 1;
                }
            } else {
                for l in (0..k.saturating_sub(1)).rev() {
                    red(&mut b, &mut lam, &d, k, l);
                }
                k += 1;
                break;
            }
        }
    }
    Ok(IntLattice { basis: b })
}

fn red(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    let two_l: BigInt = &lam[k][l] * 2;
    if two_l.abs() > d[l + 1] {
        let q = round_div(&lam[k][l], &d[l + 1]);
        let bl = b[l].clone();
        for (x, y) in b[k].iter_mut().zip(&bl) {
            *x -= &q * y;
        }
        lam[k][l] -= &q * &d[l + 1];
        for i in 0..l {
            let v = &q * &lam[l][i];
            lam[k][i] -= v;
        }
    }
}

fn swap(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &mut [BigInt], k: usize, kmax: usize) {
    b.swap(k, k - 1);
    for j in 0..k.saturating_sub(1) {
        let t = lam[k][j].clone();
        lam[k][j] = lam[k - 1][j].clone();
        lam[k - 1][j] = t;
    }
    let l = lam[k][k - 1].clone();
    let bb = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
    for i in k + 1..=kmax {
        let t = lam[i][k].clone();
        lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
        lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k + 1];
    }
    d[k] = bb;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta() -> BigRational {
        BigRational::new(99.into(), 100.into())
    }

    fn norm2(v: &[BigInt]) -> BigInt {
        dot(v, v)
    }

    #[test]
    fn identity_is_fixed() {
        let id = IntLattice::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(lll_reduce(&id, &delta()).unwrap(), id);
    }

    #[test]
    fn two_dimensional_examples() {
        let l = lll_reduce(&IntLattice::from_i64(&[&[1, 0], &[4, 1]]), &delta()).unwrap();
        assert_eq!(norm2(&l.basis[0]), BigInt::from(1));
        let orig = IntLattice::from_i64(&[&[201, 37], &[1648, 297]]);
        let l = lll_reduce(&orig, &delta()).unwrap();
        assert_eq!(l.gram_determinant(), orig.gram_determinant());
        assert!(l.is_lll_reduced(&delta()));
        // exhaustive minimum over small coefficient vectors
        let mut best: Option<BigInt> = None;
        for a in -60i64..=60 {
            for c in -60i64..=60 {
                if a == 0 && c == 0 {
                    continue;
                }
                let v: Vec<BigInt> = (0..2).map(|t| &orig.basis[0][t] * a + &orig.basis[1][t] * c).collect();
                let n = norm2(&v);
                if best.as_ref().is_none_or(|b| n < *b) {
                    best = Some(n);
                }
            }
        }
        assert_eq!(norm2(&l.basis[0]), best.unwrap());
    }

    #[test]
    fn dependent_rows_rejected() {
        let l = IntLattice::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(lll_reduce(&l, &delta()).is_err());
    }
}
