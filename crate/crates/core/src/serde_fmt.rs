//! Serialization helpers for probabilities in reports: a JSON number with
//! 17 significant digits.

use serde::ser::Error as _;
use serde::Serializer;
use serde_json::value::RawValue;

use crate::prob::format_sig17;

pub(crate) fn sig17<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    let raw = RawValue::from_string(format_sig17(*x)).map_err(S::Error::custom)?;
    s.serialize_some(&raw)
}

pub(crate) fn sig17_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        let raw = RawValue::from_string(format_sig17(*x)).map_err(S::Error::custom)?;
        seq.serialize_element(&raw)?;
    }
    seq.end()
}
