//! Serde helpers: big numbers travel as decimal strings.

use num_bigint::BigInt;
use serde::Serializer;

pub(crate) fn int<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn opt_ints<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(xs) => s.collect_seq(xs.iter().map(|x| x.to_string())),
        None => s.serialize_none(),
    }
}

pub(crate) fn int_rows<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
}

/// A certified lower bound, printed so that it stays one.
pub(crate) fn opt_lower<S: Serializer>(v: &Option<crate::numkernel::Dyadic>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(d) => s.serialize_str(&crate::numkernel::to_sci_toward_zero(d)),
        None => s.serialize_none(),
    }
}
