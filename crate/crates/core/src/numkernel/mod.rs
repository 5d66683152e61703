//! Exact rationals plus certified real intervals with dyadic endpoints.

pub mod decimal;
pub mod dyadic;
pub mod elementary;
pub mod interval;
pub mod nearest;

pub use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;

pub use decimal::{parse_decimal_enclosure, parse_mid_rad, parse_rational, to_mid_rad, to_sci, to_sci_toward_zero};
pub use dyadic::{Dyadic, Round};
pub use elementary::{interval_exp, interval_ln, interval_nth_root, ln2, rational_nth_root};
pub use interval::IntervalReal;
pub use nearest::{dist_nearest_int, NearestInt};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

impl Serialize for IntervalReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_mid_rad(self))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_sci(self))
    }
}

impl<'de> Deserialize<'de> for IntervalReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        // enough bits to hold the printed digits
        let prec = (s.len() as f64 * 3.33) as u32 + 32;
        parse_mid_rad(&s, prec).map_err(serde::de::Error::custom)
    }
}

/// `2^e` as a rational.
pub fn rational_pow2(e: i64) -> Rational {
    let one = BigInt::from(1);
    if e >= 0 {
        Rational::from_integer(one << (e as usize))
    } else {
        Rational::new(one, BigInt::from(1) << ((-e) as usize))
    }
}
