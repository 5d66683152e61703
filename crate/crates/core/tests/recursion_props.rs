use growthlab::growth::{asymptotic_check, direct_root_alpha, growth_constant, precision_for_power};
use growthlab::numkernel::{dist_nearest_int, interval_exp, interval_ln, Dyadic, IntervalReal};
use growthlab::recursion::{
    divergence_check, iterate_orbit, iterate_orbit_with, to_y_sequence, OrbitLimits, RecursionSpec,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

fn spec(coeffs: &[i64], seed: i64) -> RecursionSpec {
    let c = coeffs.iter().map(|&a| BigRational::from_integer(a.into())).collect();
    RecursionSpec::new(c, seed.into(), 0).unwrap()
}

/// Integer recursions of degree 2 or 3 whose seed starts above every fixed point.
fn diverging() -> impl Strategy<Value = RecursionSpec> {
    (2usize..=3, 1i64..=3, prop::collection::vec(-4i64..=4, 3), 0i64..20).prop_map(|(d, lead, low, extra)| {
        let mut c: Vec<i64> = low[..d].to_vec();
        c.push(lead);
        let s: i64 = c.iter().map(|a| a.abs()).sum();
        spec(&c, s + 2 + extra)
    })
}

/// Monic quadratics from arbitrary small seeds; some of them stay bounded.
fn quadratic() -> impl Strategy<Value = RecursionSpec> {
    (-3i64..=3, -4i64..=4, -6i64..=12).prop_map(|(b, c, seed)| spec(&[c, b, 1], seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbits_are_deterministic(s in diverging()) {
        let n = if s.degree() == 2 { 7 } else { 5 };
        let a = iterate_orbit(&s, n).unwrap();
        let b = iterate_orbit(&s, n).unwrap();
        prop_assert_eq!(&a, &b);
        for w in a.terms.windows(2) {
            let x = BigRational::from_integer(w[0].clone());
            prop_assert_eq!(s.eval(&x), BigRational::from_integer(w[1].clone()));
        }
    }

    #[test]
    fn substitution_constant_bounds_the_defect(s in diverging()) {
        let d = s.degree() as u64;
        let n = if d == 2 { 6 } else { 4 };
        let orbit = iterate_orbit(&s, n).unwrap();
        let bits = orbit.terms.last().unwrap().bits() as u32;
        let ys = to_y_sequence(&s, &orbit, 3 * bits + 64).unwrap();
        let c = IntervalReal::point(s.substitution_constant().unwrap(), 64);
        for w in ys.windows(2) {
            if w[0].lo() < &Dyadic::one() {
                continue;
            }
            let defect = (&w[1] - &w[0].powi(d)).abs();
            let allowed = &c * &w[0].powi(d - 2);
            prop_assert!(defect.lo() <= allowed.hi(), "defect {} above {}", defect, allowed);
        }
    }

    #[test]
    fn precision_doubling_tightens_alpha(s in diverging(), p in 64u32..256) {
        let a = growth_constant(&s, p).unwrap();
        let b = growth_constant(&s, 2 * p).unwrap();
        prop_assert!(a.alpha.lo() > &Dyadic::one());
        prop_assert!(a.alpha.overlaps(&b.alpha));
        prop_assert!(b.alpha.width().mul_pow2(p as i64 - 16) <= a.alpha.width());
        prop_assert!(interval_exp(&a.log_alpha, p + 8).unwrap().overlaps(&a.alpha));
        prop_assert!(a.tail_bound <= Dyadic::pow2(-(p as i64) - 4));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn escape_bound_is_sound(s in quadratic()) {
        let Some(n0) = divergence_check(&s, 200).unwrap() else {
            return Ok(());
        };
        let limits = OrbitLimits { max_count: 256, max_bits: 1 << 27 };
        let orbit = iterate_orbit_with(&s, n0 - s.seed_index() + 20, &limits).unwrap();
        let tail = &orbit.terms[n0 - s.seed_index()..];
        prop_assert_eq!(tail.len(), 21);
        for w in tail.windows(2) {
            prop_assert!(w[1] > w[0]);
        }
    }

    /// For `x^2 + c` the direct root differs from alpha by at most the log-series tail.
    #[test]
    fn direct_root_agrees_with_log_series(c in -3i64..=3, seed in 3i64..12) {
        let s = spec(&[c, 0, 1], seed);
        let p = 160;
        let alpha = growth_constant(&s, p).unwrap();
        let n = alpha.terms_used;
        let direct = direct_root_alpha(&s, n, p).unwrap();
        let slack = IntervalReal::symmetric(alpha.tail_bound.clone(), p + 16);
        let widened = interval_exp(&(&interval_ln(&direct.value, p + 16).unwrap() + &slack), p + 16).unwrap();
        prop_assert!(widened.overlaps(&alpha.alpha), "{} vs {}", direct.value, alpha.alpha);
    }

    /// Independent rounding oracle for monic quadratics with even linear term:
    /// `x_n` is the nearest integer to `alpha^{2^n} - b/2`.
    #[test]
    fn rounding_identity_from_reported_index(h in -2i64..=2, c in -4i64..=4, seed in 4i64..12) {
        let s = spec(&[c, 2 * h, 1], seed);
        let orbit = iterate_orbit(&s, 5).unwrap();
        let w = precision_for_power(&s, &orbit, 5);
        let alpha = growth_constant(&s, w).unwrap().alpha;
        let rep = asymptotic_check(&s, &orbit, &alpha, 0..=5).unwrap();
        let Some(n0) = rep.rounding_from else {
            return Ok(());
        };
        let mut power = alpha.clone();
        for n in 0..=5usize {
            if n >= n0 {
                let main = power.add_rational(&BigRational::from_integer(BigInt::from(-h)));
                let near = dist_nearest_int(&main).unwrap();
                prop_assert_eq!(&near.nearest, &orbit.terms[n]);
                prop_assert!(near.dist.hi() < &Dyadic::pow2(-1));
            }
            power = power.square();
        }
        prop_assert!(n0 <= 5);
        prop_assert!(rep.multiplier.is_positive());
    }
}
