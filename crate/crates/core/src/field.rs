//! Exact scalars: arbitrary-precision rationals and residues modulo a prime.
//!
//! Every scalar carries its field, so a [`FieldScalar`] can be combined with
//! another scalar without external context. Mixing fields in arithmetic is a
//! programming error and panics, the same way mismatched matrix shapes do.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};

const PRIME_BOUND: u64 = 1 << 31;

/// The ground field: ℚ or GF(p) with `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FieldSpecRepr", into = "FieldSpecRepr")]
pub enum FieldSpec {
    Rational,
    /// Use [`FieldSpec::prime`] to construct; it checks primality.
    Prime(u64),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum FieldSpecRepr {
    Rational,
    Prime { p: u64 },
}

impl TryFrom<FieldSpecRepr> for FieldSpec {
    type Error = Error;

    fn try_from(repr: FieldSpecRepr) -> Result<Self> {
        match repr {
            FieldSpecRepr::Rational => Ok(FieldSpec::Rational),
            FieldSpecRepr::Prime { p } => FieldSpec::prime(p),
        }
    }
}

impl From<FieldSpec> for FieldSpecRepr {
    fn from(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rational => FieldSpecRepr::Rational,
            FieldSpec::Prime(p) => FieldSpecRepr::Prime { p },
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if p >= PRIME_BOUND || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldScalar {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldScalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldScalar {
        match *self {
            FieldSpec::Rational => FieldScalar::Rational(BigRational::from_integer(n.into())),
            FieldSpec::Prime(p) => FieldScalar::Prime {
                residue: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    /// `numer / denom` as an element of this field.
    pub fn from_ratio(&self, numer: i64, denom: i64) -> Result<FieldScalar> {
        match self {
            FieldSpec::Rational => canonicalize(numer.into(), denom.into()),
            FieldSpec::Prime(_) => self.from_int(numer).checked_div(&self.from_int(denom)),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldScalar {
        match *self {
            FieldSpec::Rational => FieldScalar::Rational(BigRational::from_integer(n.clone())),
            FieldSpec::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                FieldScalar::Prime {
                    residue: r.to_u64().expect("residue below p"),
                    p,
                }
            }
        }
    }

    /// Decodes a scalar from its JSON form: `"num/den"` strings (or plain
    /// integers) for ℚ, integers for GF(p).
    pub fn parse_scalar(&self, value: &Value) -> Result<FieldScalar> {
        match (self, value) {
            (_, Value::Number(n)) => {
                let n = n
                    .as_i64()
                    .ok_or_else(|| Error::Parse(format!("{n} is not an integer")))?;
                Ok(self.from_int(n))
            }
            (FieldSpec::Rational, Value::String(s)) => parse_rational(s),
            (FieldSpec::Prime(_), Value::String(s)) => {
                let n: BigInt = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("{s:?} is not an integer")))?;
                Ok(self.from_bigint(&n))
            }
            (_, other) => Err(Error::Parse(format!("{other} is not a scalar"))),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

fn parse_rational(s: &str) -> Result<FieldScalar> {
    let bad = || Error::Parse(format!("{s:?} is not a rational"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    canonicalize(n, d)
}

/// Reduces `numerator / denominator` to lowest terms with a positive
/// denominator.
pub fn canonicalize(numerator: BigInt, denominator: BigInt) -> Result<FieldScalar> {
    if denominator.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(FieldScalar::Rational(BigRational::new(numerator, denominator)))
}

/// An exact element of ℚ or GF(p).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rational(BigRational),
    Prime { residue: u64, p: u64 },
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i64) as u64
}

impl FieldScalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            FieldScalar::Rational(_) => FieldSpec::Rational,
            FieldScalar::Prime { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(q) => q.is_zero(),
            FieldScalar::Prime { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rational(q) => q.is_one(),
            FieldScalar::Prime { residue, .. } => *residue == 1,
        }
    }

    pub fn inv(&self) -> Result<FieldScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldScalar::Rational(q) => FieldScalar::Rational(q.recip()),
            FieldScalar::Prime { residue, p } => FieldScalar::Prime {
                residue: inv_mod(*residue, *p),
                p: *p,
            },
        })
    }

    pub fn checked_div(&self, rhs: &FieldScalar) -> Result<FieldScalar> {
        Ok(self * &rhs.inv()?)
    }

    pub fn square(&self) -> FieldScalar {
        self * self
    }

    /// Bit length of numerator plus denominator; 0 over GF(p).
    pub fn height(&self) -> u64 {
        match self {
            FieldScalar::Rational(q) => q.numer().bits() + q.denom().bits(),
            FieldScalar::Prime { .. } => 0,
        }
    }

    /// Canonical JSON encoding.
    pub fn to_json(&self) -> Value {
        match self {
            FieldScalar::Rational(q) => Value::String(format!("{}/{}", q.numer(), q.denom())),
            FieldScalar::Prime { residue, .. } => Value::from(*residue),
        }
    }

    fn same_field(&self, rhs: &FieldScalar) -> u64 {
        match (self, rhs) {
            (FieldScalar::Rational(_), FieldScalar::Rational(_)) => 0,
            (FieldScalar::Prime { p, .. }, FieldScalar::Prime { p: q, .. }) if p == q => *p,
            _ => panic!("arithmetic across fields {} and {}", self.field(), rhs.field()),
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            FieldScalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            FieldScalar::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

impl Serialize for FieldScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FieldScalar::Rational(q) => {
                serializer.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
            }
            FieldScalar::Prime { residue, .. } => serializer.serialize_u64(*residue),
        }
    }
}

/// Total order used only for canonical sorting: rationals by value, residues
/// by representative, and all rationals before all residues.
impl Ord for FieldScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => a.cmp(b),
            (FieldScalar::Prime { residue: a, p }, FieldScalar::Prime { residue: b, p: q }) => {
                (p, a).cmp(&(q, b))
            }
            (FieldScalar::Rational(_), FieldScalar::Prime { .. }) => Ordering::Less,
            (FieldScalar::Prime { .. }, FieldScalar::Rational(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for FieldScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;

    fn add(self, rhs: &FieldScalar) -> FieldScalar {
        match (self, rhs) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a + b),
            (FieldScalar::Prime { residue: a, .. }, FieldScalar::Prime { residue: b, .. }) => {
                let p = self.same_field(rhs);
                FieldScalar::Prime {
                    residue: (a + b) % p,
                    p,
                }
            }
            _ => {
                self.same_field(rhs);
                unreachable!()
            }
        }
    }
}

impl<'a> Sub<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;

    fn sub(self, rhs: &FieldScalar) -> FieldScalar {
        match (self, rhs) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a - b),
            (FieldScalar::Prime { residue: a, .. }, FieldScalar::Prime { residue: b, .. }) => {
                let p = self.same_field(rhs);
                FieldScalar::Prime {
                    residue: (a + p - b) % p,
                    p,
                }
            }
            _ => {
                self.same_field(rhs);
                unreachable!()
            }
        }
    }
}

impl<'a> Mul<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;

    fn mul(self, rhs: &FieldScalar) -> FieldScalar {
        match (self, rhs) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a * b),
            (FieldScalar::Prime { residue: a, .. }, FieldScalar::Prime { residue: b, .. }) => {
                let p = self.same_field(rhs);
                FieldScalar::Prime {
                    residue: (a * b) % p,
                    p,
                }
            }
            _ => {
                self.same_field(rhs);
                unreachable!()
            }
        }
    }
}

impl<'a> Div<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;

    /// Panics on a zero divisor; use [`FieldScalar::checked_div`] when the
    /// divisor is data-dependent.
    fn div(self, rhs: &FieldScalar) -> FieldScalar {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;

    fn neg(self) -> FieldScalar {
        match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(-a),
            FieldScalar::Prime { residue, p } => FieldScalar::Prime {
                residue: (p - residue) % p,
                p: *p,
            },
        }
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;

    fn neg(self) -> FieldScalar {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: FieldScalar) -> FieldScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: &FieldScalar) -> FieldScalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<FieldScalar> for &'a FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: FieldScalar) -> FieldScalar {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add add, Sub sub, Mul mul, Div div);

/// Product of a slice of scalars; the empty product is `one`.
pub fn product<'a>(one: &FieldScalar, items: impl IntoIterator<Item = &'a FieldScalar>) -> FieldScalar {
    items.into_iter().fold(one.clone(), |acc, x| &acc * x)
}

/// Whether the rational value is strictly negative. Always false in GF(p).
pub fn is_negative(x: &FieldScalar) -> bool {
    matches!(x, FieldScalar::Rational(q) if q.is_negative())
}
