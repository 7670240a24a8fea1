//! Exact rational vectors in the fundamental-coweight basis.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational scalar used throughout the crate.
pub type Q = Rational64;

/// Shorthand for an integral rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// Shorthand for `n/d`.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_q(q: &Q) -> String {
    q.to_string()
}

/// Parses `p` or `p/q`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<i64>().ok().map(Q::from_integer),
    }
}

/// A point or vector of the model apartment, written as `Σ x_i ϖ_i∨`.
///
/// Coordinate `i` is the pairing with the simple root `α_i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coweight(pub Vec<Q>);

impl Coweight {
    pub fn zero(rank: usize) -> Self {
        Coweight(vec![Q::zero(); rank])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Coweight(v.iter().map(|&x| qi(x)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn scale(&self, c: Q) -> Self {
        Coweight(self.0.iter().map(|x| x * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// Membership in P∨.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    /// All coordinates nonnegative, i.e. the vector lies in the closed dominant chamber.
    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    pub fn is_regular_dominant(&self) -> bool {
        self.0.iter().all(|x| x.is_positive())
    }

    /// Integer coordinates, if integral.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
            .collect()
    }

    /// Pairing with a root given by its simple-root coefficients.
    pub fn pair(&self, root: &[i64]) -> Q {
        let mut s = Q::zero();
        for (c, x) in root.iter().zip(&self.0) {
            if *c != 0 {
                s += x * *c;
            }
        }
        s
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &Coweight, c: Q) -> Coweight {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a + b * c).collect())
    }

    /// Least common multiple of coordinate denominators.
    pub fn denominator(&self) -> i64 {
        self.0.iter().fold(1i64, |acc, x| acc.lcm(x.denom()))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(fmt_q).collect()
    }
}

impl fmt::Debug for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_strings().join(","))
    }
}

impl Index<usize> for Coweight {
    type Output = Q;
    fn index(&self, i: usize) -> &Q {
        &self.0[i]
    }
}

impl Add for &Coweight {
    type Output = Coweight;
    fn add(self, rhs: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Coweight {
    type Output = Coweight;
    fn sub(self, rhs: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Coweight {
    type Output = Coweight;
    fn neg(self) -> Coweight {
        Coweight(self.0.iter().map(|a| -a).collect())
    }
}

impl Serialize for Coweight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coweight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter()
            .map(|s| parse_q(s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s}"))))
            .collect::<Result<Vec<_>, _>>()
            .map(Coweight)
    }
}

/// Serde helper writing a rational as a `p/q` string.
pub mod q_string {
    use super::{fmt_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s}")))
    }
}

/// Sign of a rational as -1, 0, 1.
pub fn sign(q: &Q) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

pub fn is_int(q: &Q) -> bool {
    q.is_integer()
}

pub fn one() -> Q {
    Q::one()
}
