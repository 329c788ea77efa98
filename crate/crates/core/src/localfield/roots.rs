//! Squares, square roots and the roots of `x^2 - t x + 1`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::element::ppow;
use super::{FieldKind, LFElement, ValResult};
use crate::error::{Error, Result};

/// Legendre symbol `(a | p)` for an odd prime `p`: 1, -1, or 0.
pub fn legendre_symbol(a: u64, p: u32) -> i32 {
    let p = p as u64;
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let mut result = 1u64;
    let mut base = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// Splitting behaviour of `x^2 - t x + 1` over the field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuadraticRoots {
    /// Both roots lie in the field; the first has the smaller valuation.
    Split(LFElement, LFElement),
    NonSplit,
}

impl LFElement {
    /// Unit part `x / pi^v(x)`.
    fn unit_part(&self) -> Result<(i64, LFElement)> {
        let ValResult::Exact(v) = self.valuation() else {
            return Err(Error::ZeroLikeInput);
        };
        let u = self.mul_ref(&self.field().uniformizer_pow(-v));
        Ok((v, u))
    }

    /// Decides whether the element is a square. `Err(Indeterminate)` when the
    /// tracked digits do not decide it (`Q_2` units with fewer than 3 digits).
    pub fn is_square(&self) -> Result<bool> {
        if self.is_zero_like() {
            return Err(Error::ZeroLikeInput);
        }
        let (v, u) = self.unit_part()?;
        if v.rem_euclid(2) == 1 {
            return Ok(false);
        }
        let field = self.field();
        let lead = u.leading_digit().expect("unit");
        if field.p != 2 {
            return Ok(legendre_symbol(lead as u64, field.p) == 1);
        }
        match field.kind {
            FieldKind::Padic => {
                if u.precision().unwrap_or(0) < 3 {
                    return Err(Error::Indeterminate(
                        "2-adic square test needs at least 3 unit digits".into(),
                    ));
                }
                let value = u.padic_unit_value().expect("padic unit");
                Ok((value % 8u32).to_u32() == Some(1))
            }
            // Frobenius is additive in characteristic 2: squares have no odd-degree terms.
            FieldKind::Laurent => Ok(u.digits().iter().skip(1).step_by(2).all(|&d| d == 0)),
        }
    }

    /// Square root by Hensel lifting. For odd `p` returns the root whose leading
    /// digit is the smaller integer; in `Q_2` the root congruent to 1 mod 4.
    pub fn sqrt(&self) -> Result<LFElement> {
        if !self.is_square()? {
            return Err(Error::NotASquare);
        }
        let field = self.field();
        let (v, u) = self.unit_part()?;
        let prec = u.precision().expect("unit");
        let root_unit = match (field.kind, field.p) {
            (_, p) if p != 2 => {
                let lead = u.leading_digit().unwrap() as u64;
                let r = (1..p as u64)
                    .find(|r| r * r % p as u64 == lead)
                    .expect("residue is a square");
                let r = r.min(p as u64 - r);
                let half = field.from_int(2).inv()?;
                let mut y = field.from_int(r as i64).with_relative_precision(prec);
                // quadratic convergence: 2^k correct digits after k steps
                let steps = 64 - (prec as u64).leading_zeros() + 1;
                for _ in 0..steps {
                    y = (&y + &u.div(&y)?) * &half;
                }
                y
            }
            (FieldKind::Padic, _) => {
                if prec < 3 {
                    return Err(Error::PrecisionExhausted("2-adic square root".into()));
                }
                let target = u.padic_unit_value().unwrap();
                let mut y = BigUint::one();
                // invariant: y^2 = target mod 2^(j+1) after step j
                for j in 3..prec {
                    let m = ppow(2, j + 1);
                    if !((&y * &y + &m - (target % &m)) % &m).is_zero() {
                        y += ppow(2, j - 1);
                    }
                }
                let keep = prec - 1;
                let m = ppow(2, keep);
                y %= &m;
                if (&y % 4u32).to_u32() == Some(3) {
                    y = &m - y;
                }
                let digits: Vec<u32> = (0..keep)
                    .map(|i| ((&y >> i) % 2u32).to_u32().unwrap())
                    .collect();
                LFElement::from_digits(field, 0, &digits)?
            }
            (FieldKind::Laurent, _) => {
                let d = u.digits();
                let half: Vec<u32> = d.iter().step_by(2).copied().collect();
                LFElement::from_digits(field, 0, &half)?
            }
        };
        Ok(root_unit.mul_ref(&field.uniformizer_pow(v / 2)))
    }
}

/// Roots of `x^2 - t x + 1`, the characteristic polynomial of a matrix with trace `t`.
pub fn quadratic_roots(t: &LFElement) -> Result<QuadraticRoots> {
    let field = t.field();
    let one = field.one();
    match t.valuation() {
        ValResult::Exact(n) if n < 0 => {
            // Newton polygon slopes +-n: the large root is the fixed point of
            // x -> t - 1/x, contracting by |x|^-2 per step.
            let mut lambda = t.clone();
            let steps = field.default_precision as i64 / (-2 * n) + 3;
            for _ in 0..steps {
                lambda = t - &lambda.inv()?;
            }
            let mu = lambda.inv()?;
            Ok(QuadraticRoots::Split(lambda, mu))
        }
        ValResult::AtLeast(n) if n < 0 => Err(Error::Indeterminate(
            "trace valuation not determined".into(),
        )),
        _ => {
            let disc = &(t * t) - &field.from_int(4);
            if disc.is_zero_like() {
                return Err(Error::Indeterminate(
                    "t^2 - 4 is indistinguishable from zero (repeated eigenvalue)".into(),
                ));
            }
            if field.p == 2 {
                // residue polynomial x^2 + x + 1 is irreducible over F_2
                if t.residue() == Some(1) {
                    return Ok(QuadraticRoots::NonSplit);
                }
                if field.kind == FieldKind::Laurent {
                    return Err(Error::Indeterminate(
                        "residue polynomial (x + 1)^2 is inseparable".into(),
                    ));
                }
            }
            if !disc.is_square()? {
                return Ok(QuadraticRoots::NonSplit);
            }
            let s = disc.sqrt()?;
            let half = field.from_int(2).inv()?;
            let lambda = (t + &s) * &half;
            let mu = (t - &s) * &half;
            debug_assert!((&lambda * &mu).agrees_with(&one));
            Ok(QuadraticRoots::Split(lambda, mu))
        }
    }
}
