use num_bigint::BigInt;
use num_integer::Integer;

use super::dyadic::Dyadic;
use super::interval::IntervalReal;
use crate::error::{precision, Result};

/// Distance to the nearest integer, `||x||`, with the integer itself.
#[derive(Debug, Clone)]
pub struct NearestInt {
    pub dist: IntervalReal,
    pub nearest: BigInt,
    /// The midpoint sits exactly halfway between two integers; `nearest` is the even one.
    pub tie: bool,
}

/// Exact `||d||` of a dyadic point, and the integer attaining it (ties to even).
fn point_dist(d: &Dyadic) -> (Dyadic, BigInt, bool) {
    let f = d.floor();
    let frac = d.sub(&Dyadic::from_int(f.clone()));
    let half = Dyadic::pow2(-1);
    match frac.cmp(&half) {
        std::cmp::Ordering::Less => (frac, f, false),
        std::cmp::Ordering::Greater => (Dyadic::one().sub(&frac), f + 1, false),
        std::cmp::Ordering::Equal => {
            let n = if f.is_even() { f } else { f + 1 };
            (half, n, true)
        }
    }
}

/// Certified enclosure of `||x||`.
///
/// Fails with precision-insufficient when `x` is at least 1/4 wide.
pub fn dist_nearest_int(x: &IntervalReal) -> Result<NearestInt> {
    if x.width() >= Dyadic::pow2(-2) {
        return Err(precision("interval too wide to determine the nearest integer"));
    }
    let (_, nearest, tie) = point_dist(&x.midpoint());
    let (dlo, _, _) = point_dist(x.lo());
    let (dhi, _, _) = point_dist(x.hi());
    let lo = if x.contains_integer() { Dyadic::zero() } else { dlo.lesser(&dhi).clone() };
    // a half-integer strictly inside the interval is the maximum of ||.||
    let shifted = IntervalReal::new(x.lo().add(&Dyadic::pow2(-1)), x.hi().add(&Dyadic::pow2(-1)), x.prec());
    let hi = if shifted.contains_integer() { Dyadic::pow2(-1) } else { dlo.greater(&dhi).clone() };
    Ok(NearestInt { dist: IntervalReal::new(lo, hi, x.prec().max(8)), nearest, tie })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_point() {
        let r = dist_nearest_int(&IntervalReal::from_int(7, 32)).unwrap();
        assert!(r.dist.contains(&Dyadic::zero()) && r.dist.is_point());
        assert_eq!(r.nearest, BigInt::from(7));
        assert!(!r.tie);
    }

    #[test]
    fn exact_half_ties_to_even() {
        let r = dist_nearest_int(&IntervalReal::point(Dyadic::pow2(-1), 32)).unwrap();
        assert_eq!(r.nearest, BigInt::from(0));
        assert!(r.tie && r.dist.contains(&Dyadic::pow2(-1)));
        let r = dist_nearest_int(&IntervalReal::point(Dyadic::new(3.into(), -1), 32)).unwrap();
        assert_eq!(r.nearest, BigInt::from(2));
    }

    #[test]
    fn wide_interval_is_rejected() {
        let x = IntervalReal::new(Dyadic::zero(), Dyadic::pow2(-1), 32);
        assert!(dist_nearest_int(&x).is_err());
    }

    #[test]
    fn straddling_half_integer_reaches_half() {
        let x = IntervalReal::new(Dyadic::new(7.into(), -4), Dyadic::new(9.into(), -4), 32);
        let r = dist_nearest_int(&x).unwrap();
        assert_eq!(r.dist.hi(), &Dyadic::pow2(-1));
        assert_eq!(r.dist.lo(), &Dyadic::new(7.into(), -4));
    }
}
