//! Interchange encodings for big numbers: rationals as `"p/q"` strings, integers as JSON
//! numbers when they fit in an `i64` and as decimal strings otherwise.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

#[derive(Deserialize)]
#[serde(untagged)]
enum NumRepr {
    Int(i64),
    Str(String),
}

/// Parses `"p/q"`, `"p"`, or a plain integer.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn bigint_repr(v: &BigInt) -> NumOut {
    match v.to_i64() {
        Some(x) => NumOut::Int(x),
        None => NumOut::Str(v.to_string()),
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum NumOut {
    Int(i64),
    Str(String),
}

fn bigint_from_repr<E: de::Error>(r: NumRepr) -> Result<BigInt, E> {
    match r {
        NumRepr::Int(x) => Ok(BigInt::from(x)),
        NumRepr::Str(s) => s.trim().parse().map_err(|_| E::custom(format!("bad integer {s:?}"))),
    }
}

fn rational_from_repr<E: de::Error>(r: NumRepr) -> Result<BigRational, E> {
    match r {
        NumRepr::Int(x) => Ok(BigRational::from_integer(x.into())),
        NumRepr::Str(s) => parse_rational(&s).ok_or_else(|| E::custom(format!("bad rational {s:?}"))),
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        rational_from_repr(NumRepr::deserialize(d)?)
    }
}

pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rational_to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<NumRepr>::deserialize(d)?.into_iter().map(rational_from_repr).collect()
    }
}

pub mod rational_opt {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&rational_to_string(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Option::<NumRepr>::deserialize(d)?.map(rational_from_repr).transpose()
    }
}

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        bigint_repr(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        bigint_from_repr(NumRepr::deserialize(d)?)
    }
}

pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(bigint_repr))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<NumRepr>::deserialize(d)?.into_iter().map(bigint_from_repr).collect()
    }
}

pub mod bigint_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|r| r.iter().map(bigint_repr).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<NumRepr>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(bigint_from_repr).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Probe {
        #[serde(with = "rational")]
        q: BigRational,
        #[serde(with = "bigint_vec")]
        v: Vec<BigInt>,
    }

    #[test]
    fn round_trip() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let p = Probe {
            q: BigRational::new((-4).into(), 3.into()),
            v: vec![BigInt::from(7), big],
        };
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"q":"-4/3","v":[7,"123456789012345678901234567890"]}"#);
        assert_eq!(serde_json::from_str::<Probe>(&s).unwrap(), p);
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational(" 6/4 "), Some(BigRational::new(3.into(), 2.into())));
        assert_eq!(parse_rational("-5"), Some(BigRational::from_integer((-5).into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
