//! Decimal-string serialization for `BigInt` fields.

use num_bigint::BigInt;
use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Str(String),
        Int(i64),
    }
    match Repr::deserialize(d)? {
        Repr::Str(s) => s.trim().parse().map_err(D::Error::custom),
        Repr::Int(i) => Ok(BigInt::from(i)),
    }
}
