//! Serde helpers encoding `Complex64` as a two-element `[re, im]` array.
//! Used for every complex scalar crossing the JSON boundary (configs and
//! reports), so that values round-trip bit-exactly and diffs stay readable.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(v: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&v.re)?;
    t.serialize_element(&v.im)?;
    t.end()
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
    let arr = <[f64; 2]>::deserialize(d)?;
    Ok(Complex64::new(arr[0], arr[1]))
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|z| [z.re, z.im]))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|a| Complex64::new(a[0], a[1]))
            .collect())
    }
}

pub mod opt_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Complex64>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(list) => s.serialize_some(&list.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<Vec<Complex64>>, D::Error> {
        let raw = Option::<Vec<[f64; 2]>>::deserialize(d)?;
        Ok(raw.map(|v| v.into_iter().map(|a| Complex64::new(a[0], a[1])).collect()))
    }
}

pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(z) => s.serialize_some(&[z.re, z.im]),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        let raw = Option::<[f64; 2]>::deserialize(d)?;
        Ok(raw.map(|a| Complex64::new(a[0], a[1])))
    }
}

/// Plain conversion for ad-hoc JSON values in reports.
pub fn to_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn from_pair(a: [f64; 2]) -> Complex64 {
    Complex64::new(a[0], a[1])
}

/// Parses either `[re, im]` or a bare number from a JSON value.
pub fn from_json(v: &serde_json::Value) -> Result<Complex64, String> {
    if let Some(x) = v.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    let arr = v
        .as_array()
        .ok_or_else(|| format!("expected [re, im] array, got {v}"))?;
    if arr.len() != 2 {
        return Err(format!("expected [re, im] array of length 2, got {v}"));
    }
    let re = arr[0]
        .as_f64()
        .ok_or_else(|| "non-numeric real part".to_string())?;
    let im = arr[1]
        .as_f64()
        .ok_or_else(|| "non-numeric imaginary part".to_string())?;
    Ok(Complex64::new(re, im))
}
