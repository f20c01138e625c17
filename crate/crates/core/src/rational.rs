//! Exact scalars.
//!
//! Every number in the crate is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. Values that
//! may be infinite (support functions, conjugates, LP optima) use
//! [`Extended`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::FarkasError;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zeros(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = zeros(n);
    v[i] = one();
    v
}

pub fn rats(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| rat(v)).collect()
}

/// Parses `"p"`, `"-p"` or `"p/q"` with `q > 0`.
pub fn parse_rational(s: &str) -> Result<Rational, FarkasError> {
    let s = s.trim();
    let bad = || FarkasError::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if !q.is_positive() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Always `p/q`, including integers (`3/1`).
pub fn format_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn format_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(zero(), |acc, (x, y)| acc + x * y)
}

pub fn add_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(s: &Rational, v: &[Rational]) -> Vec<Rational> {
    v.iter().map(|x| s * x).collect()
}

pub fn neg_vec(v: &[Rational]) -> Vec<Rational> {
    v.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// A rational extended by `±∞`.
///
/// Addition treats `-∞` as absorbing first (it stands for a supremum over
/// the empty set), then `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extended {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Extended {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn into_finite(self) -> Option<Rational> {
        match self {
            Extended::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn neg(&self) -> Extended {
        match self {
            Extended::NegInf => Extended::PosInf,
            Extended::PosInf => Extended::NegInf,
            Extended::Finite(v) => Extended::Finite(-v),
        }
    }
}

impl From<Rational> for Extended {
    fn from(v: Rational) -> Self {
        Extended::Finite(v)
    }
}

impl Add for Extended {
    type Output = Extended;

    fn add(self, rhs: Extended) -> Extended {
        match (self, rhs) {
            (Extended::NegInf, _) | (_, Extended::NegInf) => Extended::NegInf,
            (Extended::PosInf, _) | (_, Extended::PosInf) => Extended::PosInf,
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        use Extended::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::PosInf => f.write_str("+inf"),
            Extended::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Serde adapters writing rationals as strings.
pub mod serde_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }
    }

    pub mod opt_vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                None => s.serialize_none(),
                Some(v) => super::vec::serialize(v, s),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_normalizes() {
        assert_eq!(parse_rational("6/4").unwrap(), frac(3, 2));
        assert_eq!(parse_rational(" -3 ").unwrap(), rat(-3));
        assert_eq!(parse_rational("-2/6").unwrap(), frac(-1, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("x").is_err());
        let r = frac(10, -4);
        assert_eq!(r.numer(), &BigInt::from(-5));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn pq_format_always_has_denominator() {
        assert_eq!(format_pq(&rat(0)), "0/1");
        assert_eq!(format_pq(&frac(-1, 3)), "-1/3");
        assert_eq!(format_rational(&rat(7)), "7");
    }

    #[test]
    fn extended_arithmetic_and_order() {
        let a = Extended::Finite(rat(2));
        assert_eq!(a.clone() + Extended::Finite(rat(3)), Extended::Finite(rat(5)));
        assert_eq!(a.clone() + Extended::PosInf, Extended::PosInf);
        assert_eq!(Extended::PosInf + Extended::NegInf, Extended::NegInf);
        assert!(Extended::NegInf < a && a < Extended::PosInf);
        assert_eq!(a.neg(), Extended::Finite(rat(-2)));
    }
}
