use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::localfield::{
    format_element, parse_element, quadratic_roots, FieldDesc, LFElement, QuadraticRoots, ValResult,
};
use crate::sl2core::Mat2;

/// A point of `P^1(K)`, i.e. an end of the tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum End {
    Infinity,
    Finite(LFElement),
}

impl End {
    /// The end `[x : y]`.
    pub fn from_vector(x: &LFElement, y: &LFElement) -> Result<End> {
        if y.is_zero_like() {
            if x.is_zero_like() {
                return Err(Error::Indeterminate("zero-like projective vector".into()));
            }
            return Ok(End::Infinity);
        }
        Ok(End::Finite(x.div(y)?))
    }

    /// Equality at working precision.
    pub fn same_as(&self, other: &End) -> bool {
        match (self, other) {
            (End::Infinity, End::Infinity) => true,
            (End::Finite(a), End::Finite(b)) => a.agrees_with(b),
            _ => false,
        }
    }

    /// Moebius image `g . xi`.
    pub fn image(&self, g: &Mat2) -> Result<End> {
        match self {
            End::Infinity => End::from_vector(g.a(), g.c()),
            End::Finite(z) => End::from_vector(&(&(g.a() * z) + g.b()), &(&(g.c() * z) + g.d())),
        }
    }

    pub fn parse(src: &str, field: FieldDesc) -> Result<End> {
        match src.trim() {
            "inf" | "infinity" | "∞" => Ok(End::Infinity),
            s => Ok(End::Finite(parse_element(s, field)?)),
        }
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            End::Infinity => write!(f, "inf"),
            End::Finite(x) => write!(f, "{}", format_element(x)),
        }
    }
}

impl Serialize for End {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Fixed points of `g` on `P^1(K)`. For a split hyperbolic element the
/// attracting end comes first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "ends", rename_all = "snake_case")]
pub enum FixedEnds {
    None,
    One(End),
    Two(End, End),
    All,
}

impl FixedEnds {
    pub fn ends(&self) -> Vec<&End> {
        match self {
            FixedEnds::One(e) => vec![e],
            FixedEnds::Two(a, b) => vec![a, b],
            _ => vec![],
        }
    }
}

fn eigen_end(g: &Mat2, lambda: &LFElement) -> Result<End> {
    let v1 = (g.b().clone(), lambda - g.a());
    let v2 = (lambda - g.d(), g.c().clone());
    let size = |v: &(LFElement, LFElement)| v.0.valuation().min(v.1.valuation());
    let pick = match (size(&v1), size(&v2)) {
        (ValResult::Exact(a), ValResult::Exact(b)) => {
            if a <= b {
                v1
            } else {
                v2
            }
        }
        (ValResult::Exact(_), _) => v1,
        (_, ValResult::Exact(_)) => v2,
        _ => {
            return Err(Error::Indeterminate(
                "eigenvector lost to cancellation".into(),
            ))
        }
    };
    End::from_vector(&pick.0, &pick.1)
}

pub fn fixed_ends(g: &Mat2) -> Result<FixedEnds> {
    if g.is_central_like() {
        return Ok(FixedEnds::All);
    }
    let f = g.field();
    let t = g.trace();
    for s in [2, -2] {
        if (&t - &f.from_int(s)).is_zero_like() {
            return Ok(FixedEnds::One(eigen_end(g, &f.from_int(s / 2))?));
        }
    }
    match quadratic_roots(&t)? {
        QuadraticRoots::NonSplit => Ok(FixedEnds::None),
        QuadraticRoots::Split(l, m) => {
            let (att, rep) = if l.valuation().lower_bound() <= m.valuation().lower_bound() {
                (l, m)
            } else {
                (m, l)
            };
            Ok(FixedEnds::Two(eigen_end(g, &att)?, eigen_end(g, &rep)?))
        }
    }
}

pub fn common_fixed_end(a: &Mat2, b: &Mat2) -> Result<Option<End>> {
    let (fa, fb) = (fixed_ends(a)?, fixed_ends(b)?);
    Ok(match (&fa, &fb) {
        (FixedEnds::All, FixedEnds::All) => Some(End::Infinity),
        (FixedEnds::All, x) | (x, FixedEnds::All) => x.ends().first().map(|e| (*e).clone()),
        _ => fa
            .ends()
            .into_iter()
            .find(|e| fb.ends().iter().any(|o| e.same_as(o)))
            .cloned(),
    })
}

/// Whether `g` preserves the unordered pair `{e1, e2}`.
pub fn stabilizes_end_pair(g: &Mat2, e1: &End, e2: &End) -> Result<bool> {
    let (i1, i2) = (e1.image(g)?, e2.image(g)?);
    Ok((i1.same_as(e1) && i2.same_as(e2)) || (i1.same_as(e2) && i2.same_as(e1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: u32) -> FieldDesc {
        FieldDesc::padic(p).unwrap()
    }

    #[test]
    fn diagonal_ends() {
        let f = q(5);
        let c = Mat2::from_literals(f, [["p", "0"], ["0", "1/p"]]).unwrap();
        match fixed_ends(&c).unwrap() {
            FixedEnds::Two(att, rep) => {
                assert!(att.same_as(&End::Finite(f.zero())));
                assert_eq!(rep, End::Infinity);
            }
            other => panic!("{other:?}"),
        }
        let inv = c.inv();
        match fixed_ends(&inv).unwrap() {
            FixedEnds::Two(att, _) => assert_eq!(att, End::Infinity),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parabolic_and_elliptic() {
        let f = q(7);
        let u = Mat2::from_literals(f, [["1", "p"], ["0", "1"]]).unwrap();
        assert_eq!(fixed_ends(&u).unwrap(), FixedEnds::One(End::Infinity));
        let s = Mat2::from_ints(f, [[0, -1], [1, 0]]).unwrap();
        assert_eq!(fixed_ends(&s).unwrap(), FixedEnds::None);
        assert_eq!(
            fixed_ends(&Mat2::identity(f).neg()).unwrap(),
            FixedEnds::All
        );
    }

    #[test]
    fn images_and_pairs() {
        let f = q(5);
        let g = Mat2::from_literals(f, [["p", "1"], ["-1", "0"]]).unwrap();
        for e in match fixed_ends(&g).unwrap() {
            FixedEnds::Two(a, b) => [a, b],
            other => panic!("{other:?}"),
        } {
            assert!(e.image(&g).unwrap().same_as(&e));
        }
        let c = Mat2::from_literals(f, [["p", "0"], ["0", "1/p"]]).unwrap();
        let w = Mat2::from_ints(f, [[0, -1], [1, 0]]).unwrap();
        let zero = End::Finite(f.zero());
        assert!(stabilizes_end_pair(&w, &zero, &End::Infinity).unwrap());
        assert!(stabilizes_end_pair(&c, &zero, &End::Infinity).unwrap());
        let u = Mat2::from_ints(f, [[1, 1], [0, 1]]).unwrap();
        assert!(!stabilizes_end_pair(&u, &zero, &End::Infinity).unwrap());
        assert_eq!(common_fixed_end(&c, &u).unwrap(), Some(End::Infinity));
        assert_eq!(common_fixed_end(&c, &w).unwrap(), None);
    }
}
