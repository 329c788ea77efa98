use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{FieldDesc, FieldKind, ValResult};
use crate::error::{Error, Result};

/// Bound carried by zeros that are exact (literal `0`, products with them).
pub const EXACT_ZERO: i64 = i64::MAX;

fn sat_add(a: i64, b: i64) -> i64 {
    if a == EXACT_ZERO || b == EXACT_ZERO {
        EXACT_ZERO
    } else {
        a.saturating_add(b).min(EXACT_ZERO - 1)
    }
}

pub(crate) fn ppow(p: u32, n: u32) -> BigUint {
    num_traits::pow(BigUint::from(p), n as usize)
}

pub(crate) fn inv_mod_p(a: u32, p: u32) -> u32 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "{a} not invertible mod {p}");
    t.rem_euclid(p as i64) as u32
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Unit {
    /// Unit of `Z_p` known modulo `p^precision`, stored in `[0, p^precision)`.
    PAdic { value: BigUint, precision: u32 },
    /// Coefficients over `F_p`; `digits[0] != 0`.
    Laurent { digits: Vec<u32> },
}

impl Unit {
    fn precision(&self) -> u32 {
        match self {
            Unit::PAdic { precision, .. } => *precision,
            Unit::Laurent { digits } => digits.len() as u32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// Indistinguishable from zero: valuation is at least `at_least`.
    Zero {
        at_least: i64,
    },
    Nonzero {
        valuation: i64,
        unit: Unit,
    },
}

/// An element of `Q_p` or `F_p((t))` with finite relative precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LFElement {
    field: FieldDesc,
    repr: Repr,
}

impl LFElement {
    pub fn exact_zero(field: FieldDesc) -> Self {
        Self::zero_like(field, EXACT_ZERO)
    }

    /// The sentinel "valuation >= at_least".
    pub fn zero_like(field: FieldDesc, at_least: i64) -> Self {
        Self {
            field,
            repr: Repr::Zero { at_least },
        }
    }

    pub fn from_integer(field: FieldDesc, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::exact_zero(field);
        }
        let prec = field.default_precision;
        match field.kind {
            FieldKind::Padic => {
                let p = BigUint::from(field.p);
                let mut mag = n.magnitude().clone();
                let mut v = 0i64;
                while (&mag % &p).is_zero() {
                    mag /= &p;
                    v += 1;
                }
                let modulus = ppow(field.p, prec);
                let mut value = mag % &modulus;
                if n.sign() == Sign::Minus {
                    value = &modulus - value;
                }
                Self {
                    field,
                    repr: Repr::Nonzero {
                        valuation: v,
                        unit: Unit::PAdic {
                            value,
                            precision: prec,
                        },
                    },
                }
            }
            FieldKind::Laurent => {
                let r = n.mod_floor(&BigInt::from(field.p)).to_u32().unwrap();
                if r == 0 {
                    return Self::exact_zero(field);
                }
                let mut digits = vec![0; prec as usize];
                digits[0] = r;
                Self {
                    field,
                    repr: Repr::Nonzero {
                        valuation: 0,
                        unit: Unit::Laurent { digits },
                    },
                }
            }
        }
    }

    /// `pi^k`.
    pub fn uniformizer_pow(field: FieldDesc, k: i64) -> Self {
        let prec = field.default_precision;
        let unit = match field.kind {
            FieldKind::Padic => Unit::PAdic {
                value: BigUint::one(),
                precision: prec,
            },
            FieldKind::Laurent => {
                let mut digits = vec![0; prec as usize];
                digits[0] = 1;
                Unit::Laurent { digits }
            }
        };
        Self {
            field,
            repr: Repr::Nonzero { valuation: k, unit },
        }
    }

    pub fn from_rational(field: FieldDesc, num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DenominatorZero);
        }
        let n = Self::from_integer(field, num);
        let d = Self::from_integer(field, den);
        n.div(&d)
    }

    /// `pi^valuation * sum digits[i] pi^i` with `digits.len()` significant digits.
    pub fn from_digits(field: FieldDesc, valuation: i64, digits: &[u32]) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d >= field.p) {
            return Err(Error::Precondition(format!(
                "digit {d} out of range for p = {}",
                field.p
            )));
        }
        let Some(lead) = digits.iter().position(|&d| d != 0) else {
            return Ok(Self::zero_like(field, valuation + digits.len() as i64));
        };
        let digits = &digits[lead..];
        let valuation = valuation + lead as i64;
        let unit = match field.kind {
            FieldKind::Padic => {
                let mut value = BigUint::zero();
                for &d in digits.iter().rev() {
                    value = value * field.p + d;
                }
                Unit::PAdic {
                    value,
                    precision: digits.len() as u32,
                }
            }
            FieldKind::Laurent => Unit::Laurent {
                digits: digits.to_vec(),
            },
        };
        Ok(Self {
            field,
            repr: Repr::Nonzero { valuation, unit },
        })
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn valuation(&self) -> ValResult {
        match &self.repr {
            Repr::Zero { at_least } => ValResult::AtLeast(*at_least),
            Repr::Nonzero { valuation, .. } => ValResult::Exact(*valuation),
        }
    }

    /// Number of significant digits; `None` for zero-like elements.
    pub fn precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { unit, .. } => Some(unit.precision()),
        }
    }

    /// The element is known modulo `pi^absolute_precision`.
    pub fn absolute_precision(&self) -> i64 {
        match &self.repr {
            Repr::Zero { at_least } => *at_least,
            Repr::Nonzero { valuation, unit } => valuation + unit.precision() as i64,
        }
    }

    pub fn is_zero_like(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { at_least } if at_least == EXACT_ZERO)
    }

    /// Residue digits of the unit part, lowest first. Empty for zero-like elements.
    pub fn digits(&self) -> Vec<u32> {
        match &self.repr {
            Repr::Zero { .. } => Vec::new(),
            Repr::Nonzero { unit, .. } => match unit {
                Unit::Laurent { digits } => digits.clone(),
                Unit::PAdic { value, precision } => {
                    let mut out = Vec::with_capacity(*precision as usize);
                    let mut rest = value.clone();
                    let p = BigUint::from(self.field.p);
                    for _ in 0..*precision {
                        let (q, r) = rest.div_rem(&p);
                        out.push(r.to_u32().unwrap());
                        rest = q;
                    }
                    out
                }
            },
        }
    }

    /// Digits with trailing zeros dropped.
    pub fn significant_digits(&self) -> Vec<u32> {
        let mut d = self.digits();
        while d.last() == Some(&0) {
            d.pop();
        }
        d
    }

    /// Leading digit of the unit part.
    pub fn leading_digit(&self) -> Option<u32> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { unit, .. } => Some(match unit {
                Unit::Laurent { digits } => digits[0],
                Unit::PAdic { value, .. } => (value % self.field.p).to_u32().unwrap(),
            }),
        }
    }

    /// Image in the residue field for integral elements.
    pub fn residue(&self) -> Option<u32> {
        match &self.repr {
            Repr::Zero { at_least } if *at_least >= 1 => Some(0),
            Repr::Zero { .. } => None,
            Repr::Nonzero { valuation, .. } if *valuation > 0 => Some(0),
            Repr::Nonzero { valuation: 0, .. } => self.leading_digit(),
            Repr::Nonzero { .. } => None,
        }
    }

    /// Unit part of a `Q_p` element as an integer in `[0, p^precision)`.
    pub fn padic_unit_value(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Nonzero {
                unit: Unit::PAdic { value, .. },
                ..
            } => Some(value),
            _ => None,
        }
    }

    fn check_field(&self, other: &Self) {
        assert!(
            self.field.same_field(&other.field),
            "mixed-field arithmetic: {} vs {}",
            self.field,
            other.field
        );
    }

    fn normalize_padic(field: FieldDesc, valuation: i64, mut value: BigUint, k: u32) -> Self {
        if value.is_zero() {
            return Self::zero_like(field, valuation + k as i64);
        }
        let p = BigUint::from(field.p);
        let mut shift = 0u32;
        loop {
            let (q, r) = value.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            value = q;
            shift += 1;
        }
        Self {
            field,
            repr: Repr::Nonzero {
                valuation: valuation + shift as i64,
                unit: Unit::PAdic {
                    value,
                    precision: k - shift,
                },
            },
        }
    }

    fn normalize_laurent(field: FieldDesc, valuation: i64, digits: Vec<u32>) -> Self {
        match digits.iter().position(|&d| d != 0) {
            None => Self::zero_like(field, valuation + digits.len() as i64),
            Some(lead) => Self {
                field,
                repr: Repr::Nonzero {
                    valuation: valuation + lead as i64,
                    unit: Unit::Laurent {
                        digits: digits[lead..].to_vec(),
                    },
                },
            },
        }
    }

    /// Forget everything at or beyond `pi^abs`.
    pub fn truncate_absolute(&self, abs: i64) -> Self {
        match &self.repr {
            Repr::Zero { at_least } => Self::zero_like(self.field, (*at_least).min(abs)),
            Repr::Nonzero { valuation, unit } => {
                if abs <= *valuation {
                    return Self::zero_like(self.field, abs);
                }
                let keep =
                    (abs.saturating_sub(*valuation) as u64).min(unit.precision() as u64) as u32;
                self.with_unit_precision(keep)
            }
        }
    }

    /// Re-declare the relative precision, padding with zero digits or truncating.
    pub fn with_relative_precision(&self, n: u32) -> Self {
        assert!(n > 0);
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero { .. } => self.with_unit_precision(n),
        }
    }

    fn with_unit_precision(&self, n: u32) -> Self {
        let Repr::Nonzero { valuation, unit } = &self.repr else {
            unreachable!()
        };
        let unit = match unit {
            Unit::PAdic { value, precision } => {
                let value = if n < *precision {
                    value % ppow(self.field.p, n)
                } else {
                    value.clone()
                };
                Unit::PAdic {
                    value,
                    precision: n,
                }
            }
            Unit::Laurent { digits } => {
                let mut d = digits.clone();
                d.resize(n as usize, 0);
                Unit::Laurent { digits: d }
            }
        };
        Self {
            field: self.field,
            repr: Repr::Nonzero {
                valuation: *valuation,
                unit,
            },
        }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.check_field(other);
        let field = self.field;
        match (&self.repr, &other.repr) {
            (Repr::Zero { at_least: a }, Repr::Zero { at_least: b }) => {
                Self::zero_like(field, (*a).min(*b))
            }
            (Repr::Zero { at_least }, Repr::Nonzero { valuation, .. })
            | (Repr::Nonzero { valuation, .. }, Repr::Zero { at_least }) => {
                let nonzero = if self.is_zero_like() { other } else { self };
                if *valuation < *at_least {
                    nonzero.truncate_absolute(*at_least)
                } else {
                    Self::zero_like(field, *at_least)
                }
            }
            (
                Repr::Nonzero {
                    valuation: v1,
                    unit: u1,
                },
                Repr::Nonzero {
                    valuation: v2,
                    unit: u2,
                },
            ) => {
                let abs = (v1 + u1.precision() as i64).min(v2 + u2.precision() as i64);
                let vmin = (*v1).min(*v2);
                if abs <= vmin {
                    return Self::zero_like(field, abs);
                }
                let k = (abs - vmin) as u32;
                let s1 = (v1 - vmin) as u32;
                let s2 = (v2 - vmin) as u32;
                match (u1, u2) {
                    (Unit::PAdic { value: a, .. }, Unit::PAdic { value: b, .. }) => {
                        let modulus = ppow(field.p, k);
                        let mut sum = BigUint::zero();
                        for (val, s) in [(a, s1), (b, s2)] {
                            if s < k {
                                sum += val * ppow(field.p, s);
                            }
                        }
                        Self::normalize_padic(field, vmin, sum % modulus, k)
                    }
                    (Unit::Laurent { digits: a }, Unit::Laurent { digits: b }) => {
                        let p = field.p;
                        let mut out = vec![0u32; k as usize];
                        for (src, s) in [(a, s1), (b, s2)] {
                            for (i, &d) in src.iter().enumerate() {
                                let idx = i + s as usize;
                                if idx >= k as usize {
                                    break;
                                }
                                out[idx] = (out[idx] + d) % p;
                            }
                        }
                        Self::normalize_laurent(field, vmin, out)
                    }
                    _ => unreachable!("field kinds checked"),
                }
            }
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.check_field(other);
        let field = self.field;
        match (&self.repr, &other.repr) {
            (Repr::Zero { at_least: a }, Repr::Zero { at_least: b }) => {
                Self::zero_like(field, sat_add(*a, *b))
            }
            (Repr::Zero { at_least }, Repr::Nonzero { valuation, .. })
            | (Repr::Nonzero { valuation, .. }, Repr::Zero { at_least }) => {
                Self::zero_like(field, sat_add(*at_least, *valuation))
            }
            (
                Repr::Nonzero {
                    valuation: v1,
                    unit: u1,
                },
                Repr::Nonzero {
                    valuation: v2,
                    unit: u2,
                },
            ) => {
                let n = u1.precision().min(u2.precision());
                let unit = match (u1, u2) {
                    (Unit::PAdic { value: a, .. }, Unit::PAdic { value: b, .. }) => {
                        let modulus = ppow(field.p, n);
                        Unit::PAdic {
                            value: (a * b) % modulus,
                            precision: n,
                        }
                    }
                    (Unit::Laurent { digits: a }, Unit::Laurent { digits: b }) => {
                        let p = field.p as u64;
                        let n = n as usize;
                        let mut out = vec![0u64; n];
                        for (i, &x) in a.iter().take(n).enumerate() {
                            if x == 0 {
                                continue;
                            }
                            for (j, &y) in b.iter().take(n - i).enumerate() {
                                out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
                            }
                        }
                        Unit::Laurent {
                            digits: out.into_iter().map(|d| d as u32).collect(),
                        }
                    }
                    _ => unreachable!("field kinds checked"),
                };
                Self {
                    field,
                    repr: Repr::Nonzero {
                        valuation: v1 + v2,
                        unit,
                    },
                }
            }
        }
    }

    pub fn neg_ref(&self) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero { valuation, unit } => {
                let unit = match unit {
                    Unit::PAdic { value, precision } => Unit::PAdic {
                        value: ppow(self.field.p, *precision) - value,
                        precision: *precision,
                    },
                    Unit::Laurent { digits } => Unit::Laurent {
                        digits: digits
                            .iter()
                            .map(|&d| (self.field.p - d) % self.field.p)
                            .collect(),
                    },
                };
                Self {
                    field: self.field,
                    repr: Repr::Nonzero {
                        valuation: *valuation,
                        unit,
                    },
                }
            }
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn inv(&self) -> Result<Self> {
        let Repr::Nonzero { valuation, unit } = &self.repr else {
            return Err(Error::DivisionByZeroLike);
        };
        let p = self.field.p;
        let unit = match unit {
            Unit::PAdic { value, precision } => {
                let modulus = BigInt::from(ppow(p, *precision));
                let a = BigInt::from(value.clone());
                let g = a.extended_gcd(&modulus);
                debug_assert!(g.gcd.is_one());
                let inv = g.x.mod_floor(&modulus);
                Unit::PAdic {
                    value: inv.magnitude().clone(),
                    precision: *precision,
                }
            }
            Unit::Laurent { digits } => {
                let n = digits.len();
                let pp = p as u64;
                let lead_inv = inv_mod_p(digits[0], p) as u64;
                let mut w = vec![0u64; n];
                w[0] = lead_inv;
                for i in 1..n {
                    let mut acc = 0u64;
                    for j in 1..=i {
                        acc = (acc + digits[j] as u64 * w[i - j]) % pp;
                    }
                    w[i] = (pp - acc) % pp * lead_inv % pp;
                }
                Unit::Laurent {
                    digits: w.into_iter().map(|d| d as u32).collect(),
                }
            }
        };
        Ok(Self {
            field: self.field,
            repr: Repr::Nonzero {
                valuation: -valuation,
                unit,
            },
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }

    /// Integer power by binary exponentiation; negative exponents invert first.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = LFElement::from_integer(self.field, &BigInt::one());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_ref(&sq);
            }
        }
        Ok(acc)
    }

    /// `self - other` is indistinguishable from zero.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.sub_ref(other).is_zero_like()
    }

    pub fn agrees_with_int(&self, n: i64) -> bool {
        self.agrees_with(&self.field.from_int(n))
    }

    /// Exact integer value for elements of `Q_p` that are small integers
    /// (reconstructed from the balanced residue); used for display of traces.
    pub fn as_small_integer(&self) -> Option<i64> {
        if self.is_exact_zero() {
            return Some(0);
        }
        let Repr::Nonzero { valuation, unit } = &self.repr else {
            return None;
        };
        if *valuation < 0 {
            return None;
        }
        match unit {
            Unit::PAdic { value, precision } => {
                let modulus = ppow(self.field.p, *precision);
                let half = &modulus >> 1;
                let signed = if *value > half {
                    -BigInt::from(&modulus - value)
                } else {
                    BigInt::from(value.clone())
                };
                let scaled = signed * BigInt::from(ppow(self.field.p, *valuation as u32));
                let n = scaled.to_i64()?;
                (n.abs() < 1 << 20).then_some(n)
            }
            Unit::Laurent { digits } => {
                if *valuation == 0 && digits[1..].iter().all(|&d| d == 0) {
                    let d = digits[0] as i64;
                    let p = self.field.p as i64;
                    Some(if d > p / 2 { d - p } else { d })
                } else {
                    None
                }
            }
        }
    }
}

impl serde::Serialize for LFElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for LFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::format_element(self))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&LFElement> for &LFElement {
            type Output = LFElement;
            fn $method(self, rhs: &LFElement) -> LFElement {
                self.$imp(rhs)
            }
        }
        impl $tr<LFElement> for LFElement {
            type Output = LFElement;
            fn $method(self, rhs: LFElement) -> LFElement {
                self.$imp(&rhs)
            }
        }
        impl $tr<&LFElement> for LFElement {
            type Output = LFElement;
            fn $method(self, rhs: &LFElement) -> LFElement {
                self.$imp(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for &LFElement {
    type Output = LFElement;
    fn neg(self) -> LFElement {
        self.neg_ref()
    }
}

impl Neg for LFElement {
    type Output = LFElement;
    fn neg(self) -> LFElement {
        self.neg_ref()
    }
}
