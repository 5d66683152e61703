use growthlab::numkernel::{dist_nearest_int, interval_exp, interval_ln, interval_nth_root, IntervalReal};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Expr {
    Leaf(BigRational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u64),
    Neg(Box<Expr>),
}

fn leaf() -> impl Strategy<Value = Expr> {
    (-10_000i64..10_000, 1i64..10_000, -40i32..40).prop_map(|(a, b, e)| {
        let scale = BigRational::from_integer(BigInt::from(1) << e.unsigned_abs());
        let r = BigRational::new(a.into(), b.into());
        Expr::Leaf(if e >= 0 { r * scale } else { r / scale })
    })
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner.clone(), 0u64..5).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
            inner.prop_map(|a| Expr::Neg(Box::new(a))),
        ]
    })
}

fn exact(e: &Expr) -> Option<BigRational> {
    Some(match e {
        Expr::Leaf(r) => r.clone(),
        Expr::Add(a, b) => exact(a)? + exact(b)?,
        Expr::Sub(a, b) => exact(a)? - exact(b)?,
        Expr::Mul(a, b) => exact(a)? * exact(b)?,
        Expr::Div(a, b) => {
            let d = exact(b)?;
            if d.is_zero() {
                return None;
            }
            exact(a)? / d
        }
        Expr::Pow(a, k) => num_traits::pow(exact(a)?, *k as usize),
        Expr::Neg(a) => -exact(a)?,
    })
}

/// None when a divisor enclosure contains zero.
fn eval(e: &Expr, p: u32) -> Option<IntervalReal> {
    Some(match e {
        Expr::Leaf(r) => IntervalReal::from_rational(r, p),
        Expr::Add(a, b) => &eval(a, p)? + &eval(b, p)?,
        Expr::Sub(a, b) => &eval(a, p)? - &eval(b, p)?,
        Expr::Mul(a, b) => &eval(a, p)? * &eval(b, p)?,
        Expr::Div(a, b) => eval(a, p)?.div(&eval(b, p)?).ok()?,
        Expr::Pow(a, k) => eval(a, p)?.powi(*k),
        Expr::Neg(a) => -&eval(a, p)?,
    })
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn containment(e in expr(), p in 16u32..300) {
        if let (Some(v), Some(x)) = (exact(&e), eval(&e, p)) {
            prop_assert!(x.contains_rational(&v), "{x} misses {v}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn doubling_precision_refines(e in expr(), p in 16u32..200) {
        if let (Some(v), Some(lo), Some(hi)) = (exact(&e), eval(&e, p), eval(&e, 2 * p)) {
            prop_assert!(lo.overlaps(&hi));
            prop_assert!(hi.width() <= lo.width());
            prop_assert!(hi.contains_rational(&v));
        }
    }

    #[test]
    fn rational_arithmetic_is_exact(a in prop::collection::vec(any::<u32>(), 16), b in prop::collection::vec(any::<u32>(), 16), sa: bool, sb: bool) {
        let a = BigInt::from_slice(if sa { Sign::Minus } else { Sign::Plus }, &a);
        let b = BigInt::from_slice(if sb { Sign::Minus } else { Sign::Plus }, &b);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a.clone());
            let (ra, rb) = (BigRational::new(a.clone(), b.clone()), BigRational::new(b.clone(), a.clone() + 1));
            prop_assert_eq!(&(&ra * &rb) / &rb, ra.clone());
            prop_assert_eq!(&(&ra + &rb) - &rb, ra);
        }
    }

    #[test]
    fn nearest_integer_distance_contains_truth(a in -1_000_000i64..1_000_000, b in 1i64..1000, p in 32u32..128) {
        let r = rat(a, b);
        let x = IntervalReal::from_rational(&r, p);
        if let Ok(nd) = dist_nearest_int(&x) {
            let m = BigRational::from_integer(nd.nearest.clone());
            let d = (&r - &m).abs();
            prop_assert!(nd.dist.contains_rational(&d));
            prop_assert!(d <= rat(1, 2));
        }
    }

    #[test]
    fn elementary_functions_invert(a in 1i64..100_000, b in 1i64..1000, n in 2u32..7, p in 32u32..256) {
        let r = rat(a, b);
        let x = IntervalReal::from_rational(&r, p);
        let l = interval_ln(&x, p).unwrap();
        prop_assert!(interval_exp(&l, p).unwrap().contains_rational(&r));
        let root = interval_nth_root(&x, n, p).unwrap();
        prop_assert!(root.powi(n as u64).contains_rational(&r));
        let y = IntervalReal::from_rational(&rat(b, 7), p);
        let lxy = interval_ln(&(&x * &y), p).unwrap();
        prop_assert!(lxy.overlaps(&(&l + &interval_ln(&y, p).unwrap())));
    }
}
