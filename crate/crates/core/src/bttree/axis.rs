use serde::Serialize;

use super::{displacement, fixes_vertex, End, FixedEnds, Vertex};
use crate::error::{Error, Result};
use crate::localfield::ValResult;
use crate::sl2core::{classify, ElementKind, Mat2};

use super::fixed_ends;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxisData {
    pub repelling: End,
    pub attracting: End,
    pub base_point: Vertex,
    pub length: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "length", rename_all = "snake_case")]
pub enum Overlap {
    SegmentLength(u64),
    ExceedsRadius,
    Empty,
}

/// The neighbour of `v` on the ray from `v` to `xi`.
pub fn step_toward_end(v: &Vertex, xi: &End) -> Result<Vertex> {
    match xi {
        End::Infinity => Ok(v.parent()),
        End::Finite(c) => {
            let diff = c - &v.offset_exact();
            let inside = match diff.valuation() {
                ValResult::Exact(e) => e >= v.level(),
                ValResult::AtLeast(n) if n >= v.level() => true,
                ValResult::AtLeast(_) => {
                    return Err(Error::Indeterminate(
                        "end not known precisely enough to choose a branch".into(),
                    ))
                }
            };
            if !inside {
                return Ok(v.parent());
            }
            Vertex::new(v.level() + 1, c)
                .map_err(|_| Error::Indeterminate("end digits exhausted while descending".into()))
        }
    }
}

/// A vertex on the geodesic joining two distinct ends.
fn join_point(e1: &End, e2: &End) -> Result<Vertex> {
    match (e1, e2) {
        (End::Infinity, End::Finite(c)) | (End::Finite(c), End::Infinity) => Vertex::new(0, c),
        (End::Finite(c1), End::Finite(c2)) => match (c1 - c2).valuation() {
            ValResult::Exact(e) => Vertex::new(e, c1),
            ValResult::AtLeast(_) => {
                Err(Error::Indeterminate("axis ends agree at precision".into()))
            }
        },
        _ => Err(Error::Indeterminate("axis ends coincide".into())),
    }
}

pub fn hyperbolic_axis(g: &Mat2) -> Result<AxisData> {
    let length = match classify(g).kind {
        ElementKind::Hyperbolic { length } => length,
        other => return Err(Error::Precondition(format!("not hyperbolic: {other:?}"))),
    };
    let (attracting, repelling) = match fixed_ends(g)? {
        FixedEnds::Two(a, r) => (a, r),
        other => {
            return Err(Error::Indeterminate(format!(
                "hyperbolic element with fixed ends {other:?}"
            )))
        }
    };
    let base_point = join_point(&attracting, &repelling)?;
    let d = displacement(g, &base_point)?;
    if d != length {
        return Err(Error::Indeterminate(format!(
            "axis base point displaced by {d}, expected {length}"
        )));
    }
    Ok(AxisData {
        repelling,
        attracting,
        base_point,
        length,
    })
}

/// `2 radius + 1` consecutive axis vertices, from the repelling side to the attracting side.
pub fn axis_vertices(axis: &AxisData, radius: u32) -> Result<Vec<Vertex>> {
    let walk = |end: &End| -> Result<Vec<Vertex>> {
        let mut out = Vec::with_capacity(radius as usize);
        let mut cur = axis.base_point.clone();
        for _ in 0..radius {
            cur = step_toward_end(&cur, end)?;
            out.push(cur.clone());
        }
        Ok(out)
    };
    let mut back = walk(&axis.repelling)?;
    back.reverse();
    back.push(axis.base_point.clone());
    back.extend(walk(&axis.attracting)?);
    Ok(back)
}

/// Length of `Fix(A)` intersected with the axis of `B`, searched within `radius` of its base point.
pub fn fixed_overlap_on_axis(a: &Mat2, b: &Mat2, radius: u32) -> Result<Overlap> {
    let axis = hyperbolic_axis(b)?;
    let verts = axis_vertices(&axis, radius)?;
    let mut fixed = Vec::new();
    for (i, v) in verts.iter().enumerate() {
        if fixes_vertex(a, v)? {
            fixed.push(i);
        }
    }
    let (Some(&lo), Some(&hi)) = (fixed.first(), fixed.last()) else {
        return Ok(Overlap::Empty);
    };
    if hi - lo + 1 != fixed.len() {
        return Err(Error::Indeterminate(
            "fixed vertices on the axis are not contiguous".into(),
        ));
    }
    if lo == 0 || hi == verts.len() - 1 {
        return Ok(Overlap::ExceedsRadius);
    }
    Ok(Overlap::SegmentLength((hi - lo) as u64))
}
