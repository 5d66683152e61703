use growthlab::algnum::{is_irreducible, AlgebraicNumber, IntPolynomial};
use growthlab::lattice::{guess_min_poly, lll_reduce, IntLattice, LatticeConfig, Verdict};
use growthlab::numkernel::{Dyadic, IntervalReal};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).fold(BigRational::zero(), |s, t| s + t)
}

/// Textbook Gram–Schmidt over the rationals, written independently of the library.
fn gso(rows: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let b: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect()).collect();
    let n = b.len();
    let mut star: Vec<Vec<BigRational>> = Vec::new();
    let mut norms = Vec::new();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&b[i], &star[j]) / &norms[j];
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * y;
            }
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (mu, norms)
}

fn gram_det(rows: &[Vec<BigInt>]) -> BigRational {
    gso(rows).1.iter().fold(BigRational::one(), |a, b| a * b)
}

fn basis() -> impl Strategy<Value = Vec<Vec<BigInt>>> {
    (2usize..=6)
        .prop_flat_map(|n| (Just(n), n..=n + 2))
        .prop_flat_map(|(n, m)| prop::collection::vec(prop::collection::vec(-60i64..=60, m), n))
        .prop_map(|rows| rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect::<Vec<Vec<BigInt>>>())
        .prop_filter("independent", |rows| !gram_det(rows).is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lll_output_is_reduced_and_preserves_the_lattice(rows in basis()) {
        let delta = BigRational::new(99.into(), 100.into());
        let red = lll_reduce(&IntLattice::new(rows.clone()).unwrap(), &delta).unwrap();
        let (mu, norms) = gso(&red.basis);
        let half = BigRational::new(1.into(), 2.into());
        for i in 0..mu.len() {
            for j in 0..i {
                prop_assert!(mu[i][j].abs() <= half);
            }
            if i > 0 {
                let lhs = &delta * &norms[i - 1];
                let rhs = &norms[i] + &mu[i][i - 1] * &mu[i][i - 1] * &norms[i - 1];
                prop_assert!(lhs <= rhs, "Lovász fails at {i}");
            }
        }
        prop_assert!(red.is_lll_reduced(&delta));
        prop_assert_eq!(gram_det(&red.basis), gram_det(&rows));
        prop_assert_eq!(BigRational::from_integer(red.gram_determinant()), gram_det(&rows));
    }
}

fn same_up_to_sign(a: &IntPolynomial, b: &IntPolynomial) -> bool {
    a == b || *a == b.neg()
}

/// Enclosure of `x` widened so its absolute width is about `2^{-bits}`.
fn blur(x: &IntervalReal, bits: u32) -> IntervalReal {
    let r = Dyadic::pow2(-(bits as i64) - 1);
    let p = x.prec().max(bits + 64);
    IntervalReal::new(x.lo().sub(&r), x.hi().add(&r), p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Rationals given to just the guarded precision, with an enclosure widened by noise.
    #[test]
    fn no_false_relations(a in -5000i64..=5000, b in 1i64..=5000, extra in 0u32..24) {
        let h = BigInt::from(10_000);
        let deg = 4;
        let bits = LatticeConfig::default().needed_bits(deg + 1, &h) + extra;
        let r = BigRational::new(a.into(), b.into());
        let x = blur(&IntervalReal::from_rational(&r, bits + 64), bits);
        let rep = guess_min_poly(&x, deg, &h).unwrap();
        let truth = IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()]);
        match rep.verdict {
            Verdict::RelationFound => {
                let p = rep.polynomial.unwrap();
                prop_assert!(same_up_to_sign(&p, &truth), "spurious {p} for {r}");
            }
            // the true linear relation lies within the bounds, so it must be found
            Verdict::NoneWithinBounds => prop_assert!(false, "missed {r}"),
        }
    }
}

fn small_poly() -> impl Strategy<Value = IntPolynomial> {
    (2usize..=5)
        .prop_flat_map(|d| (prop::collection::vec(-1_000_000i64..=1_000_000, d), 1i64..=1_000_000))
        .prop_map(|(mut c, lead)| {
            c.push(lead);
            IntPolynomial::from_i64(&c).primitive_part()
        })
        .prop_filter("irreducible with a real root", |p| {
            is_irreducible(p) && AlgebraicNumber::roots_of(p).map(|r| r.iter().any(|z| z.is_real())).unwrap_or(false)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degree_capped_completeness(p in small_poly(), cap_extra in 0usize..=1) {
        let h = BigInt::from(1_000_000);
        let deg = (p.degree() + cap_extra).min(5);
        let root = AlgebraicNumber::roots_of(&p).unwrap().into_iter().find(|z| z.is_real()).unwrap();
        let bits = LatticeConfig::default().needed_bits(deg + 1, &h) + 16;
        let x = root.real_enclosure(bits).unwrap();
        let rep = guess_min_poly(&x, deg, &h).unwrap();
        prop_assert_eq!(rep.verdict, Verdict::RelationFound);
        let found = rep.polynomial.unwrap();
        prop_assert!(same_up_to_sign(&found, &p), "found {found}, expected {p}");
    }
}
