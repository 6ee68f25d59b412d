//! Serde adapters that write big integers as decimal strings so JSON
//! consumers never lose precision.

use num_bigint::{BigInt, BigUint};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

fn parse<T: std::str::FromStr, E: serde::de::Error>(s: &str) -> Result<T, E> {
    s.parse()
        .map_err(|_| E::custom(format!("invalid decimal integer {s:?}")))
}

pub mod biguint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        v.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        parse(&String::deserialize(d)?)
    }
}

pub mod vec_biguint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|x| parse(x))
            .collect()
    }
}

pub mod vec_bigint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|x| parse(x))
            .collect()
    }
}

/// `[(prime, exponent)]` as `[["prime", exponent], ...]`.
pub mod factor_list {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[(BigUint, u32)], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|(p, e)| (p.to_string(), *e))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Vec<(BigUint, u32)>, D::Error> {
        Vec::<(String, u32)>::deserialize(d)?
            .into_iter()
            .map(|(p, e)| {
                let p: BigUint = parse(&p)?;
                if e == 0 {
                    return Err(D::Error::custom("zero exponent in factor list"));
                }
                Ok((p, e))
            })
            .collect()
    }
}
