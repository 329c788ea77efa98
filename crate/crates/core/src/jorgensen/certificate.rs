use std::fmt;

use serde::{Serialize, Serializer};

use crate::bttree::{
    common_fixed_end, displacement, fixed_ends, fixes_vertex, stabilizes_end_pair, End, FixedEnds,
    Vertex,
};
use crate::error::Result;
use crate::sl2core::{classify, commutator, Mat2};

/// A word in the generators; letter `(i, true)` is the inverse of generator `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word(pub Vec<(usize, bool)>);

impl Word {
    pub fn evaluate(&self, gens: &[Mat2]) -> Mat2 {
        let f = gens[0].field();
        self.0.iter().fold(Mat2::identity(f), |acc, &(i, inv)| {
            acc.mul(&if inv { gens[i].inv() } else { gens[i].clone() })
        })
    }
}

fn letter_name(i: usize) -> char {
    (b'A' + (i % 26) as u8) as char
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(i, inv)| {
                let c = letter_name(i);
                if inv {
                    format!("{c}^-1")
                } else {
                    c.to_string()
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NonElementary {
    Certified {
        h1: Word,
        h2: Word,
        ends: Box<[End; 4]>,
    },
    Inconclusive,
}

/// Freely reduced words of length `1..=max_len`, shortest first.
fn reduced_words(gens: usize, max_len: usize) -> Vec<Word> {
    let letters: Vec<(usize, bool)> = (0..gens).flat_map(|i| [(i, false), (i, true)]).collect();
    let mut layer: Vec<Word> = vec![Word(vec![])];
    let mut out = Vec::new();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.0.last().is_some_and(|&(i, inv)| i == l.0 && inv != l.1) {
                    continue;
                }
                let mut v = w.0.clone();
                v.push(l);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Looks for two hyperbolic words whose four fixed ends are pairwise distinct.
pub fn nonelementary_certificate(gens: &[Mat2], word_length: usize) -> NonElementary {
    if gens.is_empty() {
        return NonElementary::Inconclusive;
    }
    let mut axes: Vec<(Word, End, End)> = Vec::new();
    for w in reduced_words(gens.len(), word_length) {
        let m = w.evaluate(gens);
        if !classify(&m).is_hyperbolic() {
            continue;
        }
        let Ok(FixedEnds::Two(e1, e2)) = fixed_ends(&m) else {
            continue;
        };
        for (h1, a1, a2) in &axes {
            let distinct = [a1, a2].iter().all(|a| !a.same_as(&e1) && !a.same_as(&e2));
            if distinct {
                return NonElementary::Certified {
                    h1: h1.clone(),
                    h2: w,
                    ends: Box::new([a1.clone(), a2.clone(), e1, e2]),
                };
            }
        }
        axes.push((w, e1, e2));
    }
    NonElementary::Inconclusive
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum VertexSearch {
    Found {
        vertex: Vertex,
    },
    /// Descent stopped at a local minimum, so no common fixed vertex exists.
    NoneExists,
    RadiusExhausted,
    Indeterminate {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementaryEvidence {
    pub common_fixed_vertex: VertexSearch,
    pub common_fixed_end: Option<End>,
    pub stabilized_end_pair: Option<(End, End)>,
    pub caveats: Vec<String>,
}

impl ElementaryEvidence {
    pub fn any_detected(&self) -> bool {
        matches!(self.common_fixed_vertex, VertexSearch::Found { .. })
            || self.common_fixed_end.is_some()
            || self.stabilized_end_pair.is_some()
    }
}

/// Steps to a neighbour lowering `score` while staying inside `allowed`.
fn descend(
    start: Vertex,
    radius: u32,
    score: impl Fn(&Vertex) -> Result<u64>,
    allowed: impl Fn(&Vertex) -> Result<bool>,
) -> Result<(Vertex, u64, bool)> {
    let mut cur = start;
    let mut s = score(&cur)?;
    for _ in 0..radius {
        if s == 0 {
            return Ok((cur, 0, false));
        }
        let mut moved = false;
        for w in cur.neighbors() {
            if !allowed(&w)? {
                continue;
            }
            let t = score(&w)?;
            if t < s {
                cur = w;
                s = t;
                moved = true;
                break;
            }
        }
        if !moved {
            return Ok((cur, s, false));
        }
    }
    Ok((cur, s, s != 0))
}

/// Fixed sets are convex, so descending `d(v, A v)` and then `d(v, B v)`
/// inside `Fix(A)` reaches a common fixed vertex whenever one exists.
fn common_vertex(a: &Mat2, b: &Mat2, radius: u32) -> Result<VertexSearch> {
    let start = Vertex::base(a.field());
    let (v, s, capped) = descend(start, radius, |v| displacement(a, v), |_| Ok(true))?;
    if s != 0 {
        return Ok(if capped {
            VertexSearch::RadiusExhausted
        } else {
            VertexSearch::NoneExists
        });
    }
    let (v, s, capped) = descend(v, radius, |v| displacement(b, v), |w| fixes_vertex(a, w))?;
    Ok(match (s, capped) {
        (0, _) => VertexSearch::Found { vertex: v },
        (_, true) => VertexSearch::RadiusExhausted,
        _ => VertexSearch::NoneExists,
    })
}

/// Observed elementary behaviour: a common fixed vertex, a common fixed end, or
/// an end pair preserved by both generators. Absence proves nothing.
pub fn elementary_evidence(a: &Mat2, b: &Mat2, radius: u32) -> ElementaryEvidence {
    let mut caveats = Vec::new();
    let common_fixed_vertex =
        common_vertex(a, b, radius).unwrap_or_else(|e| VertexSearch::Indeterminate {
            reason: e.to_string(),
        });
    let common_fixed_end = common_fixed_end(a, b).unwrap_or_else(|e| {
        caveats.push(format!("common end: {e}"));
        None
    });
    let mut stabilized_end_pair = None;
    for m in [a.clone(), b.clone(), a.mul(b), commutator(a, b)] {
        if let Ok(FixedEnds::Two(e1, e2)) = fixed_ends(&m) {
            let both = [a, b]
                .iter()
                .all(|g| stabilizes_end_pair(g, &e1, &e2).unwrap_or(false));
            if both {
                stabilized_end_pair = Some((e1, e2));
                break;
            }
        }
    }
    if !matches!(common_fixed_vertex, VertexSearch::Found { .. }) || common_fixed_end.is_none() {
        caveats.push("absence of evidence is not a proof of non-elementarity".into());
    }
    if common_fixed_end.is_some() || stabilized_end_pair.is_some() {
        caveats.push("end equality holds at working precision".into());
    }
    ElementaryEvidence {
        common_fixed_vertex,
        common_fixed_end,
        stabilized_end_pair,
        caveats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::FieldDesc;

    fn q(p: u32) -> FieldDesc {
        FieldDesc::padic(p).unwrap()
    }

    #[test]
    fn word_enumeration() {
        let words = reduced_words(2, 3);
        assert_eq!(words.len(), 4 + 12 + 36);
        assert_eq!(words[0].to_string(), "A");
        assert_eq!(words[1].to_string(), "A^-1");
    }

    #[test]
    fn amalgam_pair_is_nonelementary() {
        let f = q(5);
        let s = Mat2::from_ints(f, [[0, -1], [1, 0]]).unwrap();
        let b = Mat2::from_literals(f, [["0", "-1/p"], ["p", "1"]]).unwrap();
        assert!(matches!(
            nonelementary_certificate(&[s, b], 3),
            NonElementary::Certified { .. }
        ));
    }

    #[test]
    fn single_axis_is_inconclusive() {
        let f = q(5);
        let c = Mat2::from_literals(f, [["p", "0"], ["0", "1/p"]]).unwrap();
        assert_eq!(
            nonelementary_certificate(&[c], 4),
            NonElementary::Inconclusive
        );
    }

    #[test]
    fn evidence() {
        let f = q(5);
        let a1 = Mat2::from_literals(f, [["1", "p"], ["0", "1"]]).unwrap();
        let a2 = Mat2::from_literals(f, [["1", "p^2"], ["0", "1"]]).unwrap();
        let c = Mat2::from_literals(f, [["p", "0"], ["0", "1/p"]]).unwrap();
        let ev = elementary_evidence(&a1, &c, 6);
        assert_eq!(ev.common_fixed_end, Some(End::Infinity));
        assert_eq!(ev.common_fixed_vertex, VertexSearch::NoneExists);
        let ev = elementary_evidence(&a1, &a2, 6);
        assert_eq!(
            ev.common_fixed_vertex,
            VertexSearch::Found {
                vertex: Vertex::base(f)
            }
        );
        let w = Mat2::from_ints(f, [[0, -1], [1, 0]]).unwrap();
        let ev = elementary_evidence(&c, &w, 6);
        assert!(ev.stabilized_end_pair.is_some());
        assert_eq!(ev.common_fixed_end, None);
    }

    #[test]
    fn vertex_search_moves_off_base() {
        let f = q(3);
        let c = Mat2::from_literals(f, [["p", "0"], ["0", "1/p"]]).unwrap();
        let w = Mat2::from_ints(f, [[0, -1], [1, 0]]).unwrap();
        let a = w.conjugate_by(&c.pow(2));
        let b = Mat2::from_ints(f, [[1, 1], [0, 1]])
            .unwrap()
            .conjugate_by(&c.pow(2));
        match elementary_evidence(&a, &b, 6).common_fixed_vertex {
            VertexSearch::Found { vertex } => {
                assert!(fixes_vertex(&a, &vertex).unwrap() && fixes_vertex(&b, &vertex).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }
}
