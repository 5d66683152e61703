use growthlab::algnum::roots::ComplexBox;
use growthlab::algnum::{
    classify_pisot, cyclotomic, is_irreducible, is_root_of_unity, power_trace, pseudo_pisot_tuple, reduce_degenerate,
    AlgebraicNumber, IntPolynomial, PisotClass,
};
use growthlab::numkernel::{dist_nearest_int, Dyadic, IntervalReal};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// Random irreducible integer polynomials of degree 1..=5 with small coefficients.
fn irreducible() -> impl Strategy<Value = IntPolynomial> {
    (1usize..=5)
        .prop_flat_map(|d| (prop::collection::vec(-6i64..=6, d), 1i64..=3))
        .prop_map(|(mut c, lead)| {
            c.push(lead);
            IntPolynomial::from_i64(&c)
        })
        .prop_filter("irreducible", |p| p.coeff(0) != BigInt::from(0) && is_irreducible(p))
}

/// `x^d - a x^{d-1} + ...` with `a > 1 + sum |lower|`: exactly one root outside the unit disk.
fn pisot_poly() -> impl Strategy<Value = IntPolynomial> {
    pisot_poly_of_degree(2..=5)
}

fn pisot_poly_of_degree(degrees: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = IntPolynomial> {
    degrees
        .prop_flat_map(|d| (prop::collection::vec(-2i64..=2, d - 1), 0i64..4))
        .prop_map(|(low, extra)| {
            let s: i64 = low.iter().map(|a| a.abs()).sum();
            let mut c = low;
            c.push(-(s + 2 + extra));
            c.push(1);
            IntPolynomial::from_i64(&c)
        })
        .prop_filter("irreducible", |p| p.coeff(0) != BigInt::from(0) && is_irreducible(p))
}

fn sum_boxes(v: impl IntoIterator<Item = ComplexBox>, prec: u32) -> ComplexBox {
    v.into_iter().fold(ComplexBox::zero(prec), |a, b| a.add(&b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_is_sum_of_conjugate_powers(p in irreducible(), n in 0u64..=64) {
        let a = &AlgebraicNumber::roots_of(&p).unwrap()[0];
        let t = power_trace(a, n);
        let prec = 96 + 4 * n as u32;
        let s = sum_boxes(a.conjugate_boxes(prec).unwrap().iter().map(|b| b.powi(n)), prec);
        prop_assert!(s.re.contains_rational(&t), "{t} not in {}", s.re);
        prop_assert!(s.im.contains_zero());
    }

    #[test]
    fn pisot_powers_approach_their_traces(p in pisot_poly()) {
        let w = classify_pisot(&p).unwrap();
        prop_assert_eq!(w.verdict, PisotClass::Pisot);
        let a = AlgebraicNumber::roots_of(&p)
            .unwrap()
            .into_iter()
            .find(|r| r.cmp_modulus_one().unwrap().is_gt())
            .unwrap();
        let x = a.real_enclosure(512).unwrap();
        let mut last_miss = None;
        let mut dists = Vec::new();
        for n in 1..=48u64 {
            let nd = dist_nearest_int(&x.powi(n)).unwrap();
            if BigRational::from_integer(nd.nearest.clone()) != power_trace(&a, n) {
                last_miss = Some(n);
            }
            dists.push(nd.dist.hi().clone());
        }
        // the identity holds on a tail, and the distance decays
        prop_assert!(last_miss.map_or(true, |m| m < 40), "miss at {:?}", last_miss);
        prop_assert!(dists[47] < Dyadic::pow2(-2));
        prop_assert!(dists[47] <= dists[7] || dists[47] < Dyadic::pow2(-8));

        let v = pseudo_pisot_tuple(std::slice::from_ref(&a)).unwrap();
        prop_assert!(v.pseudo_pisot && v.pisot && v.total_is_integer);
    }

    #[test]
    fn root_of_unity_order_means_cyclotomic(p in irreducible()) {
        for r in AlgebraicNumber::roots_of(&p).unwrap() {
            if let Some(m) = is_root_of_unity(&r) {
                prop_assert_eq!(r.minpoly(), &cyclotomic(m));
            }
        }
    }
}

#[test]
fn cyclotomic_roots_are_recognised() {
    for m in 1..=30u64 {
        for r in AlgebraicNumber::roots_of(&cyclotomic(m)).unwrap() {
            assert_eq!(is_root_of_unity(&r), Some(m));
            assert_eq!(r.minpoly(), &cyclotomic(m));
        }
    }
}

fn rat(a: i64, b: i64) -> AlgebraicNumber {
    AlgebraicNumber::from_rational(&BigRational::new(a.into(), b.into()))
}

/// Complex enclosure of `sum c_j b_j^e`.
fn eval_sum(bases: &[AlgebraicNumber], coeffs: &[AlgebraicNumber], e: u64, prec: u32) -> ComplexBox {
    let terms = bases.iter().zip(coeffs).map(|(b, c)| c.enclosure(prec).unwrap().mul(&b.enclosure(prec).unwrap().powi(e)));
    sum_boxes(terms, prec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Bases mixing a Pisot number with its rotations by roots of unity.
    #[test]
    fn reduction_preserves_values(
        p in pisot_poly_of_degree(2..=3),
        rotations in prop::sample::subsequence(vec![2u64, 3, 4, 6], 1..=2),
        q in prop::collection::vec((-5i64..=5, 1i64..=4), 4),
        seed: u64,
    ) {
        let base = AlgebraicNumber::roots_of(&p)
            .unwrap()
            .into_iter()
            .find(|r| r.cmp_modulus_one().unwrap().is_gt())
            .unwrap();
        let mut alphas = vec![base.clone()];
        for m in &rotations {
            let z = &AlgebraicNumber::roots_of(&cyclotomic(*m)).unwrap()[0];
            alphas.push(base.mul(z).unwrap());
        }
        // an unrelated base stays in its own class
        alphas.push(AlgebraicNumber::from_int(3));
        let qs: Vec<AlgebraicNumber> = q[..alphas.len()].iter().map(|&(a, b)| rat(a, b)).collect();
        let red = reduce_degenerate(&alphas, &qs).unwrap();
        let h = red.period;
        prop_assert!(h > 1);
        prop_assert_eq!(red.classes.len() as u64, h);
        let mut rng = seed;
        for cls in &red.classes {
            for _ in 0..20 {
                rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let m = (rng >> 33) % (40 / h + 1);
                let n = cls.residue + h * m;
                let prec = 128 + 4 * n as u32;
                let orig = eval_sum(&alphas, &qs, n, prec);
                let reduced = eval_sum(&cls.bases, &cls.coeffs, m, prec);
                prop_assert!(orig.overlaps(&reduced), "n = {n}: {orig:?} vs {reduced:?}");
            }
        }
    }
}

#[test]
fn trace_of_real_quadratic_matches_interval_oracle() {
    // (1 + sqrt 5)/2 with its conjugate, summed by hand
    let s5 = growthlab::numkernel::interval_nth_root(&IntervalReal::from_int(5, 256), 2, 256).unwrap();
    let half = BigRational::new(1.into(), 2.into());
    let phi = s5.add_rational(&BigRational::from_integer(1.into())).mul_rational(&half);
    let psi = (-&s5).add_rational(&BigRational::from_integer(1.into())).mul_rational(&half);
    let a = &AlgebraicNumber::roots_of(&IntPolynomial::from_i64(&[-1, -1, 1])).unwrap()[0];
    for n in 0..=40u64 {
        let sum = &phi.powi(n) + &psi.powi(n);
        assert!(sum.contains_rational(&power_trace(a, n)));
    }
}
