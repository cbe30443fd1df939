//! The annulus `P_{p,q,m}` and its diagonals.
//!
//! Diagonals are homotopy classes of arcs and are modelled through their
//! lifts to the universal cover, a strip `R × [0, 1]`. The outer boundary
//! lifts to the line `y = 0` with the outer vertex of lift index `u` at
//! `x = u / (mp)`; the inner boundary lifts to `y = 1` with the inner vertex
//! of lift index `v` at `x = -v / (mq)`. Outer labels run counterclockwise
//! and inner labels clockwise, so both label systems follow the boundary
//! orientation of the annulus and the inner one runs backwards along the
//! strip. The deck transformation adds one full turn, which in lift indices
//! is `(u, v) ↦ (u + mp, v - mq)`.
//!
//! A spanning arc `Spanning { u, v }` is the projection of the straight
//! segment between its two lifted endpoints. It is stored with the
//! representative `0 ≤ u < mp`, so structural equality is equality of
//! homotopy classes. Peripheral arcs are identified by their start vertex
//! and the number `k` of boundary vertices of the boundary path they are
//! homotopic to.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("invalid annulus parameters p={p}, q={q}, m={m} (need p ≥ 2, q ≥ 2, m ≥ 1)")]
    InvalidConfig { p: i64, q: i64, m: i64 },
    #[error("peripheral diagonal {0} must pass through at least 3 boundary vertices")]
    SpanTooShort(Diagonal),
    #[error("{0} is not an m-diagonal")]
    NotMDiagonal(Diagonal),
}

/// Parameters of the annulus `P_{p,q,m}`: `mp` marked points on the outer
/// boundary and `mq` on the inner one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AnnulusConfig {
    pub p: i64,
    pub q: i64,
    pub m: i64,
}

/// A diagonal of the annulus up to homotopy relative to its endpoints.
///
/// The derived ordering (variant, then fields) is the one used by canonical
/// serialisations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "t")]
pub enum Diagonal {
    /// Type 1: joins `O_{u mod mp}` to `I_{v mod mq}`.
    #[serde(rename = "S")]
    Spanning { u: i64, v: i64 },
    /// Type 2: homotopic to the counterclockwise outer boundary path from
    /// `O_i` through `k` vertices.
    #[serde(rename = "O")]
    OuterPeripheral { i: i64, k: i64 },
    /// Type 3: homotopic to the clockwise inner boundary path from `I_i`
    /// through `k` vertices.
    #[serde(rename = "I")]
    InnerPeripheral { i: i64, k: i64 },
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Diagonal::Spanning { u, v } => write!(f, "S({u},{v})"),
            Diagonal::OuterPeripheral { i, k } => write!(f, "O({i},{k})"),
            Diagonal::InnerPeripheral { i, k } => write!(f, "I({i},{k})"),
        }
    }
}

impl Diagonal {
    pub fn is_spanning(&self) -> bool {
        matches!(self, Diagonal::Spanning { .. })
    }

    pub fn is_peripheral(&self) -> bool {
        !self.is_spanning()
    }

    pub(crate) fn tag(&self) -> u8 {
        match self {
            Diagonal::Spanning { .. } => b'S',
            Diagonal::OuterPeripheral { .. } => b'O',
            Diagonal::InnerPeripheral { .. } => b'I',
        }
    }
}

/// A rational number `num / den` with `den > 0`, used for exact lift
/// coordinates.
#[derive(Debug, Clone, Copy)]
pub struct Frac {
    pub num: i64,
    pub den: i64,
}

impl Frac {
    pub fn new(num: i64, den: i64) -> Self {
        debug_assert!(den != 0);
        if den < 0 {
            Frac {
                num: -num,
                den: -den,
            }
        } else {
            Frac { num, den }
        }
    }

    pub fn floor(self) -> i64 {
        self.num.div_euclid(self.den)
    }

    pub fn ceil(self) -> i64 {
        -(-self.num).div_euclid(self.den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frac {}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

/// Number of integers strictly between `a` and `b`.
fn integers_strictly_between(a: Frac, b: Frac) -> i64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    (hi.ceil() - lo.floor() - 1).max(0)
}

/// Number of integers `n` in `[lo, hi]` with `n ≡ r (mod modulus)`.
fn count_residue(lo: i64, hi: i64, r: i64, modulus: i64) -> i64 {
    if hi < lo {
        return 0;
    }
    (hi - r).div_euclid(modulus) - (lo - 1 - r).div_euclid(modulus)
}

/// Crossings between the interval `(a1, b1)` and all translates of
/// `(a2, b2)` by multiples of `period`, all on one boundary line.
/// Two intervals cross iff they interleave: one endpoint strictly inside
/// the other interval and the other endpoint strictly outside it.
fn interleavings(a1: i64, b1: i64, a2: i64, b2: i64, period: i64) -> i64 {
    // Translates by t·period can only interleave when they overlap.
    let t_lo = (a1 - b2).div_euclid(period);
    let t_hi = Frac::new(b1 - a2, period).ceil();
    (t_lo..=t_hi)
        .filter(|t| {
            let (c, d) = (a2 + t * period, b2 + t * period);
            (a1 < c && c < b1 && d > b1) || (c < a1 && a1 < d && b1 > d)
        })
        .count() as i64
}

impl AnnulusConfig {
    pub fn new(p: i64, q: i64, m: i64) -> Result<Self, GeometryError> {
        if p < 2 || q < 2 || m < 1 {
            return Err(GeometryError::InvalidConfig { p, q, m });
        }
        Ok(AnnulusConfig { p, q, m })
    }

    /// Number of outer marked points, `mp`.
    pub fn outer_len(&self) -> i64 {
        self.m * self.p
    }

    /// Number of inner marked points, `mq`.
    pub fn inner_len(&self) -> i64 {
        self.m * self.q
    }

    /// Number of diagonals in any angulation, `p + q`.
    pub fn rank(&self) -> usize {
        (self.p + self.q) as usize
    }

    /// The annulus with the roles of the two boundaries exchanged.
    pub fn flipped(&self) -> AnnulusConfig {
        AnnulusConfig {
            p: self.q,
            q: self.p,
            m: self.m,
        }
    }

    pub fn spanning(&self, u: i64, v: i64) -> Diagonal {
        let t = u.div_euclid(self.outer_len());
        Diagonal::Spanning {
            u: u - t * self.outer_len(),
            v: v + t * self.inner_len(),
        }
    }

    pub fn outer(&self, i: i64, k: i64) -> Diagonal {
        Diagonal::OuterPeripheral {
            i: i.rem_euclid(self.outer_len()),
            k,
        }
    }

    pub fn inner(&self, i: i64, k: i64) -> Diagonal {
        Diagonal::InnerPeripheral {
            i: i.rem_euclid(self.inner_len()),
            k,
        }
    }

    /// Brings a diagonal to its stored representative.
    pub fn normalize(&self, d: Diagonal) -> Diagonal {
        match d {
            Diagonal::Spanning { u, v } => self.spanning(u, v),
            Diagonal::OuterPeripheral { i, k } => self.outer(i, k),
            Diagonal::InnerPeripheral { i, k } => self.inner(i, k),
        }
    }

    /// Checks that a diagonal is well formed (peripheral spans pass through
    /// at least three vertices).
    pub fn check(&self, d: &Diagonal) -> Result<(), GeometryError> {
        match *d {
            Diagonal::Spanning { .. } => Ok(()),
            Diagonal::OuterPeripheral { k, .. } | Diagonal::InnerPeripheral { k, .. } => {
                if k >= 3 {
                    Ok(())
                } else {
                    Err(GeometryError::SpanTooShort(*d))
                }
            }
        }
    }

    /// Minimal number of interior intersection points of two diagonals.
    pub fn crossing_number(&self, a: &Diagonal, b: &Diagonal) -> i64 {
        use Diagonal::*;
        let (mp, mq) = (self.outer_len(), self.inner_len());
        match (*a, *b) {
            (Spanning { u: u1, v: v1 }, Spanning { u: u2, v: v2 }) => {
                // Segment (x1, y1) against the translates (x2 + t, y2 + t):
                // they cross iff t lies strictly between the two offsets.
                integers_strictly_between(Frac::new(u1 - u2, mp), Frac::new(v2 - v1, mq))
            }
            (Spanning { u, .. }, OuterPeripheral { i, k })
            | (OuterPeripheral { i, k }, Spanning { u, .. }) => {
                count_residue(i + 1, i + k - 2, u, mp)
            }
            (Spanning { v, .. }, InnerPeripheral { i, k })
            | (InnerPeripheral { i, k }, Spanning { v, .. }) => {
                count_residue(i + 1, i + k - 2, v, mq)
            }
            (OuterPeripheral { i: i1, k: k1 }, OuterPeripheral { i: i2, k: k2 }) => {
                interleavings(i1, i1 + k1 - 1, i2, i2 + k2 - 1, mp)
            }
            (InnerPeripheral { i: i1, k: k1 }, InnerPeripheral { i: i2, k: k2 }) => {
                interleavings(i1, i1 + k1 - 1, i2, i2 + k2 - 1, mq)
            }
            (OuterPeripheral { .. }, InnerPeripheral { .. })
            | (InnerPeripheral { .. }, OuterPeripheral { .. }) => 0,
        }
    }

    /// Whether the diagonal crosses itself: only peripheral arcs running
    /// more than once around their boundary do.
    pub fn self_crosses(&self, d: &Diagonal) -> bool {
        match *d {
            Diagonal::Spanning { .. } => false,
            Diagonal::OuterPeripheral { k, .. } => k > self.outer_len() + 1,
            Diagonal::InnerPeripheral { k, .. } => k > self.inner_len() + 1,
        }
    }

    /// `[s]`: rotate the outer polygon `s` steps clockwise and the inner
    /// polygon `s` steps counterclockwise. `shift(·, m)` is `τ`.
    pub fn shift(&self, d: &Diagonal, s: i64) -> Diagonal {
        self.rotate_inner(&self.rotate_outer(d, s), s)
    }

    /// `r_O^s`: rotate the outer polygon `s` steps clockwise.
    pub fn rotate_outer(&self, d: &Diagonal, s: i64) -> Diagonal {
        match *d {
            Diagonal::Spanning { u, v } => self.spanning(u - s, v),
            Diagonal::OuterPeripheral { i, k } => self.outer(i - s, k),
            inner @ Diagonal::InnerPeripheral { .. } => inner,
        }
    }

    /// `r_I^s`: rotate the inner polygon `s` steps counterclockwise.
    pub fn rotate_inner(&self, d: &Diagonal, s: i64) -> Diagonal {
        match *d {
            Diagonal::Spanning { u, v } => self.spanning(u, v - s),
            Diagonal::InnerPeripheral { i, k } => self.inner(i - s, k),
            outer @ Diagonal::OuterPeripheral { .. } => outer,
        }
    }

    /// `ε`: exchange the two boundaries, producing a diagonal of
    /// `P_{q,p,m}` (see [`AnnulusConfig::flipped`]).
    ///
    /// The strip is reflected in the line `y = 1/2`, keeping every point
    /// over the same angular position. This reverses orientation, so face
    /// orientations (and hence quiver arrows) are reversed. In labels,
    /// outer `x ↦` inner `-x` and inner `y ↦` outer `-y`.
    pub fn flip(&self, d: &Diagonal) -> Diagonal {
        let target = self.flipped();
        match *d {
            Diagonal::Spanning { u, v } => target.spanning(-v, -u),
            Diagonal::OuterPeripheral { i, k } => target.inner(-(i + k - 1), k),
            Diagonal::InnerPeripheral { i, k } => target.outer(-(i + k - 1), k),
        }
    }

    /// Orientation-preserving exchange of the two boundaries: the half-turn
    /// `(x, y) ↦ (-x, 1 - y)` of the strip. In labels outer `x ↦` inner `x`
    /// and inner `y ↦` outer `y`; it is `ε` composed with a mirror and keeps
    /// quivers unchanged.
    pub fn swap_boundaries(&self, d: &Diagonal) -> Diagonal {
        let target = self.flipped();
        match *d {
            Diagonal::Spanning { u, v } => target.spanning(v, u),
            Diagonal::OuterPeripheral { i, k } => target.inner(i, k),
            Diagonal::InnerPeripheral { i, k } => target.outer(i, k),
        }
    }

    /// The m-diagonal restrictions: spanning arcs join `O_i` and `I_j` with
    /// `i ≡ j (mod m)`; peripheral arcs pass through `km + 2` vertices.
    pub fn is_m_diagonal(&self, d: &Diagonal) -> bool {
        let m = self.m;
        match *d {
            Diagonal::Spanning { u, v } => (u - v).rem_euclid(m) == 0,
            Diagonal::OuterPeripheral { k, .. } | Diagonal::InnerPeripheral { k, .. } => {
                k >= m + 2 && (k - 2).rem_euclid(m) == 0
            }
        }
    }

    /// Level of an m-diagonal: the residue mod `m` of its outer (resp.
    /// start) index. Preserved by `τ` and by elementary moves.
    pub fn level(&self, d: &Diagonal) -> Result<i64, GeometryError> {
        if !self.is_m_diagonal(d) {
            return Err(GeometryError::NotMDiagonal(*d));
        }
        Ok(match *d {
            Diagonal::Spanning { u, .. } => u.rem_euclid(self.m),
            Diagonal::OuterPeripheral { i, .. } | Diagonal::InnerPeripheral { i, .. } => {
                i.rem_euclid(self.m)
            }
        })
    }

    /// Horizontal displacement (in turns) from the outer to the inner
    /// endpoint of a spanning arc, `-v/(mq) - u/(mp)`. Deck invariant.
    pub fn displacement(&self, d: &Diagonal) -> Option<Frac> {
        match *d {
            Diagonal::Spanning { u, v } => {
                let (mp, mq) = (self.outer_len(), self.inner_len());
                Some(Frac::new(-v * mp - u * mq, mp * mq))
            }
            _ => None,
        }
    }

    /// Signed twist of a spanning arc: the floor of its displacement.
    /// The unsigned winding number is its absolute value up to the choice
    /// of normalisation.
    pub fn twist(&self, d: &Diagonal) -> Option<i64> {
        self.displacement(d).map(Frac::floor)
    }
}
