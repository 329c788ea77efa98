//! The Bruhat-Tits tree of `SL2(K)`.
//!
//! A vertex is the homothety class of the lattice spanned by `(pi^m, 0)` and
//! `(b, 1)`, stored canonically as `(m, b mod pi^m)`. Equivalently it is the
//! closed ball `{x : v(x - b) >= m}` of `K`: children are the `p` sub-balls of
//! radius `m + 1`, the parent is the ball of radius `m - 1`, and the ends of
//! the tree are the points of `P^1(K)` with `Infinity` reached by growing the
//! ball.

mod axis;
mod ends;

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::localfield::{FieldDesc, LFElement, ValResult};
use crate::sl2core::Mat2;

pub use axis::{
    axis_vertices, fixed_overlap_on_axis, hyperbolic_axis, step_toward_end, AxisData, Overlap,
};
pub use ends::{common_fixed_end, fixed_ends, stabilizes_end_pair, End, FixedEnds};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Vertex {
    level: i64,
    offset: LFElement,
}

impl Vertex {
    /// Reduces `offset` modulo `pi^level`; fails if the offset is not known that far.
    pub fn new(level: i64, offset: &LFElement) -> Result<Self> {
        if offset.absolute_precision() < level {
            return Err(Error::PrecisionExhausted(format!(
                "vertex offset known only modulo pi^{}, level {level} needed",
                offset.absolute_precision()
            )));
        }
        Ok(Self {
            level,
            offset: offset.truncate_absolute(level),
        })
    }

    /// The class of the standard lattice `O^2`.
    pub fn base(field: FieldDesc) -> Self {
        Self {
            level: 0,
            offset: LFElement::zero_like(field, 0),
        }
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    /// Canonical offset, reduced modulo `pi^level`.
    pub fn offset(&self) -> &LFElement {
        &self.offset
    }

    pub fn field(&self) -> FieldDesc {
        self.offset.field()
    }

    /// The canonical offset as an exact value: digits past `pi^level` are zero.
    pub fn offset_exact(&self) -> LFElement {
        match self.offset.valuation() {
            ValResult::AtLeast(_) => self.field().zero(),
            ValResult::Exact(v) => {
                let depth = (self.level - v).max(0) as u32;
                self.offset
                    .with_relative_precision(depth + self.field().default_precision)
            }
        }
    }

    /// `(p+1)` neighbours: the `p` children first, then the parent.
    pub fn neighbors(&self) -> Vec<Vertex> {
        let field = self.field();
        let b = self.offset_exact();
        let step = field.uniformizer_pow(self.level);
        let mut out: Vec<Vertex> = (0..field.p as i64)
            .map(|c| {
                let child = &b + &(&field.from_int(c) * &step);
                Vertex::new(self.level + 1, &child).expect("exact offsets")
            })
            .collect();
        out.push(self.parent());
        out
    }

    pub fn parent(&self) -> Vertex {
        Vertex::new(self.level - 1, &self.offset_exact()).expect("exact offsets")
    }

    pub fn is_ancestor_of(&self, other: &Vertex) -> bool {
        self.level <= other.level
            && (&other.offset_exact() - &self.offset_exact())
                .valuation()
                .lower_bound()
                >= self.level
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.level, self.offset)
    }
}

/// Tree distance, `v(det h) - 2 min v(h_ij)` for the transition matrix `h = g_u^-1 g_v`.
pub fn vertex_distance(u: &Vertex, v: &Vertex) -> u64 {
    let dm = v.level - u.level;
    let diff = &v.offset_exact() - &u.offset_exact();
    let mut lowest = dm.min(0);
    if let ValResult::Exact(e) = diff.valuation() {
        lowest = lowest.min(e - u.level);
    }
    (dm - 2 * lowest) as u64
}

/// Acts on the lattice class and brings the result back to canonical form.
pub fn apply(g: &Mat2, vertex: &Vertex) -> Result<Vertex> {
    let field = vertex.field();
    let b = vertex.offset_exact();
    let pm = field.uniformizer_pow(vertex.level);
    // g * [[pi^m, b], [0, 1]]
    let (mut x, mut z) = (g.a() * &pm, g.c() * &pm);
    let (mut y, mut w) = (&(g.a() * &b) + g.b(), &(g.c() * &b) + g.d());
    let swap = match (z.valuation(), w.valuation()) {
        (ValResult::Exact(vz), ValResult::Exact(vw)) => vz < vw,
        (ValResult::Exact(vz), ValResult::AtLeast(n)) if vz < n => true,
        (ValResult::AtLeast(n), ValResult::Exact(vw)) if vw <= n => false,
        _ => {
            return Err(Error::Indeterminate(
                "cannot choose a pivot in the bottom row at working precision".into(),
            ))
        }
    };
    if swap {
        std::mem::swap(&mut x, &mut y);
        std::mem::swap(&mut z, &mut w);
    }
    let _ = (x, z);
    let k = w.valuation().exact().expect("pivot is exact");
    let level = vertex.level - 2 * k;
    let offset = y.div(&w)?;
    Vertex::new(level, &offset)
}

/// `d(v, g v)`.
pub fn displacement(g: &Mat2, v: &Vertex) -> Result<u64> {
    Ok(vertex_distance(v, &apply(g, v)?))
}

pub fn fixes_vertex(g: &Mat2, v: &Vertex) -> Result<bool> {
    Ok(displacement(g, v)? == 0)
}

pub fn neighbors(v: &Vertex) -> Vec<Vertex> {
    v.neighbors()
}

/// All vertices within `radius` of `center`, in breadth-first order.
pub fn ball(center: &Vertex, radius: u32) -> Vec<Vertex> {
    let mut out = vec![center.clone()];
    let mut frontier = vec![(center.clone(), None::<Vertex>)];
    for _ in 0..radius {
        let mut next = Vec::new();
        for (v, from) in &frontier {
            for w in v.neighbors() {
                if from.as_ref() != Some(&w) {
                    next.push((w, Some(v.clone())));
                }
            }
        }
        out.extend(next.iter().map(|(w, _)| w.clone()));
        frontier = next;
    }
    out
}

/// Geodesic from `u` to `v` by greedy descent of the distance to `v`.
pub fn path_between(u: &Vertex, v: &Vertex) -> Vec<Vertex> {
    let mut path = vec![u.clone()];
    let mut cur = u.clone();
    let mut remaining = vertex_distance(u, v);
    let mut seen = HashSet::new();
    while remaining > 0 {
        let next = cur
            .neighbors()
            .into_iter()
            .find(|w| vertex_distance(w, v) + 1 == remaining)
            .expect("some neighbour is closer in a tree");
        debug_assert!(seen.insert(next.clone()));
        remaining -= 1;
        path.push(next.clone());
        cur = next;
    }
    path
}
