//! Serde adapters writing rationals as `"p/q"` strings.

use serde::ser::SerializeSeq;
use serde::Serializer;

use crate::arith::Rational;

pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(
        x: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.collect_str(x),
            None => s.serialize_none(),
        }
    }
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }
}

pub mod pair {
    use super::*;

    pub fn serialize<S: Serializer>(
        p: &(Rational, Rational),
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&p.0.to_string())?;
        seq.serialize_element(&p.1.to_string())?;
        seq.end()
    }
}

pub mod pair_vec {
    use super::*;

    pub fn serialize<S: Serializer>(
        ps: &[(Rational, Rational)],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(ps.len()))?;
        for (a, b) in ps {
            seq.serialize_element(&[a.to_string(), b.to_string()])?;
        }
        seq.end()
    }
}
