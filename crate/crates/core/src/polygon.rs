//! Dissections of a convex polygon by non-crossing chords.
//!
//! Vertices are `0..n` in counterclockwise order; boundary edge `t` joins
//! `t` and `t + 1 (mod n)`.

use crate::quiver::{ColouredQuiver, QuiverError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("chord {0:?} is degenerate or a boundary edge")]
    BadChord((usize, usize)),
    #[error("chords do not form a planar dissection")]
    NotPlanar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolySide {
    Boundary(usize),
    Chord(usize),
}

/// A face traversed counterclockwise: side `s` runs from `corners[s]` to
/// `corners[s + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyFace {
    pub corners: Vec<usize>,
    pub sides: Vec<PolySide>,
}

/// Interior faces of the dissection of an `n`-gon by `chords`.
pub fn dissect(n: usize, chords: &[(usize, usize)]) -> Result<Vec<PolyFace>, PolygonError> {
    let mut adj: Vec<Vec<(usize, PolySide)>> = vec![Vec::new(); n];
    for t in 0..n {
        adj[t].push(((t + 1) % n, PolySide::Boundary(t)));
        adj[(t + 1) % n].push((t, PolySide::Boundary(t)));
    }
    for (idx, &(a, b)) in chords.iter().enumerate() {
        let gap = (b + n - a) % n;
        if a >= n || b >= n || gap <= 1 || gap == n - 1 {
            return Err(PolygonError::BadChord((a, b)));
        }
        adj[a].push((b, PolySide::Chord(idx)));
        adj[b].push((a, PolySide::Chord(idx)));
    }
    let offset = |from: usize, to: usize| (to + n - from) % n;
    for (i, &(a, b)) in chords.iter().enumerate() {
        let inside = |x: usize| offset(a, x) > 0 && offset(a, x) < offset(a, b);
        for &(c, d) in &chords[..i] {
            let shared = c == a || c == b || d == a || d == b;
            if !shared && inside(c) != inside(d) {
                return Err(PolygonError::NotPlanar);
            }
        }
    }
    for (v, list) in adj.iter_mut().enumerate() {
        list.sort_by_key(|&(w, _)| offset(v, w));
        if list.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(PolygonError::NotPlanar);
        }
    }

    // Directed edges bounding interior faces: boundary edges forwards and
    // chords in both directions.
    let mut starts: Vec<(usize, usize, PolySide)> = (0..n)
        .map(|t| (t, (t + 1) % n, PolySide::Boundary(t)))
        .collect();
    for (idx, &(a, b)) in chords.iter().enumerate() {
        starts.push((a, b, PolySide::Chord(idx)));
        starts.push((b, a, PolySide::Chord(idx)));
    }
    let mut seen = std::collections::HashSet::new();
    let mut faces = Vec::new();
    let budget = n + 2 * chords.len();
    for &(a0, b0, s0) in &starts {
        if seen.contains(&(a0, b0)) {
            continue;
        }
        let mut corners = Vec::new();
        let mut sides = Vec::new();
        let (mut a, mut b, mut side) = (a0, b0, s0);
        loop {
            if !seen.insert((a, b)) || corners.len() > budget {
                return Err(PolygonError::NotPlanar);
            }
            corners.push(a);
            sides.push(side);
            // Turn as far left as possible: the neighbour just before `a`
            // in counterclockwise order around `b`.
            let back = offset(b, a);
            let &(c, s) = adj[b]
                .iter()
                .rev()
                .find(|&&(c, _)| offset(b, c) < back && offset(b, c) > 0)
                .ok_or(PolygonError::NotPlanar)?;
            a = b;
            b = c;
            side = s;
            if (a, b) == (a0, b0) {
                break;
            }
        }
        faces.push(PolyFace { corners, sides });
    }
    Ok(faces)
}

/// A dissection of a convex `n`-gon, the quiver vertices being its chords.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonDissection {
    pub n: usize,
    pub m: u32,
    pub chords: Vec<(usize, usize)>,
}

impl PolygonDissection {
    pub fn faces(&self) -> Result<Vec<PolyFace>, PolygonError> {
        dissect(self.n, &self.chords)
    }

    /// Whether every face is an `(m + 2)`-gon.
    pub fn is_angulation(&self) -> bool {
        self.faces()
            .map(|fs| fs.iter().all(|f| f.sides.len() == self.m as usize + 2))
            .unwrap_or(false)
    }

    pub fn quiver(&self) -> Result<ColouredQuiver, QuiverError> {
        let faces = self.faces().map_err(|_| QuiverError::Malformed)?;
        ColouredQuiver::from_faces(
            self.chords.len(),
            self.m,
            faces.iter().map(|f| {
                f.sides
                    .iter()
                    .map(|s| match *s {
                        PolySide::Chord(i) => Some(i),
                        PolySide::Boundary(_) => None,
                    })
                    .collect()
            }),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_polygon_has_one_face() {
        let f = dissect(5, &[]).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].corners, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn fan_triangulation() {
        let d = PolygonDissection {
            n: 6,
            m: 1,
            chords: vec![(0, 2), (0, 3), (0, 4)],
        };
        let faces = d.faces().unwrap();
        assert_eq!(faces.len(), 4);
        assert!(d.is_angulation());
        let q = d.quiver().unwrap();
        // Consecutive fan chords share a triangle; (0,2) is counterclockwise
        // after (0,3) around the triangle 0-2-3.
        assert_eq!(q.arrow(1, 0), Some((0, 1)));
        assert_eq!(q.arrow(0, 1), Some((1, 1)));
        assert_eq!(q.arrow(0, 2), None);
    }

    #[test]
    fn rejects_crossing_chords() {
        assert!(dissect(6, &[(0, 3), (1, 4)]).is_err());
        assert!(dissect(6, &[(0, 1)]).is_err());
    }

    #[test]
    fn quadrangulation() {
        let d = PolygonDissection {
            n: 8,
            m: 2,
            chords: vec![(0, 3), (0, 5)],
        };
        assert!(d.is_angulation());
        let d = PolygonDissection {
            n: 8,
            m: 2,
            chords: vec![(0, 2), (0, 5)],
        };
        assert!(!d.is_angulation());
    }
}
