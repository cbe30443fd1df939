//! `(m+2)`-angulations of the annulus.
//!
//! Faces are found by cutting the annulus along a spanning diagonal `c`,
//! which unfolds it into a convex polygon with `mp + mq + 2` vertices:
//! positions `0..=mp` are the outer lifts `u0..=u0 + mp`, position `mp`
//! to `mp + 1` is the translated copy of `c`, positions `mp + 1..` are the
//! inner lifts `v0 - mq..=v0`, and the closing edge is `c` itself. Every
//! other diagonal becomes a chord of this polygon.

use crate::geometry::{AnnulusConfig, Diagonal, GeometryError};
use crate::polygon::{dissect, PolySide, PolygonDissection};
use crate::quiver::{ColouredQuiver, QuiverError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Why a list of diagonals is not an angulation. Checks run in the order
/// of the variants below and the first failure is reported.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error(transparent)]
    Config(#[from] GeometryError),
    #[error("expected {expected} diagonals, found {found}")]
    Count { expected: usize, found: usize },
    #[error("diagonal #{0} is not an m-diagonal")]
    NotMDiagonal(usize),
    #[error("diagonals #{0} and #{1} coincide")]
    Duplicate(usize, usize),
    #[error("diagonal #{0} crosses itself")]
    SelfCrossing(usize),
    #[error("diagonals #{0} and #{1} cross {2} time(s)")]
    Crossing(usize, usize, i64),
    #[error("no spanning diagonal")]
    NoSpanning,
    #[error("face {face} has {sides} sides, expected {expected}")]
    FaceSize {
        face: usize,
        sides: usize,
        expected: usize,
    },
    #[error("found {found} faces, expected {expected}")]
    FaceCount { expected: usize, found: usize },
    #[error("diagonals do not unfold to a planar dissection")]
    NotPlanar,
}

/// A lifted marked point: outer lift index or inner lift index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Corner {
    Outer(i64),
    Inner(i64),
}

/// A side of a face: an outer boundary edge `O_j O_{j+1}`, an inner
/// boundary edge `I_j I_{j+1}`, or a diagonal (by index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Outer(i64),
    Inner(i64),
    Diagonal(usize),
}

/// A face listed counterclockwise; side `s` runs from `corners[s]` to
/// `corners[s + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub corners: Vec<Corner>,
    pub sides: Vec<Side>,
}

/// Face structure of a set of non-crossing diagonals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceMap {
    /// Index of the spanning diagonal the annulus was cut along.
    pub cut: usize,
    pub polygon_size: usize,
    pub faces: Vec<Face>,
    /// For each diagonal, the faces it bounds.
    pub adjacency: Vec<Vec<usize>>,
}

struct Unfolding {
    cfg: AnnulusConfig,
    u0: i64,
    v0: i64,
}

impl Unfolding {
    fn size(&self) -> usize {
        (self.cfg.outer_len() + self.cfg.inner_len() + 2) as usize
    }

    fn corner(&self, pos: usize) -> Corner {
        let mp = self.cfg.outer_len();
        let pos = pos as i64;
        if pos <= mp {
            Corner::Outer(self.u0 + pos)
        } else {
            Corner::Inner(self.v0 - self.cfg.inner_len() + (pos - mp - 1))
        }
    }

    fn outer_pos(&self, x: i64) -> usize {
        (x - self.u0) as usize
    }

    fn inner_pos(&self, y: i64) -> usize {
        (self.cfg.outer_len() + 1 + (y - self.v0 + self.cfg.inner_len())) as usize
    }

    /// Chord of the unfolded polygon carrying `d`, if `d` fits between the
    /// two copies of the cut.
    fn chord(&self, d: &Diagonal) -> Option<(usize, usize)> {
        let (mp, mq) = (self.cfg.outer_len(), self.cfg.inner_len());
        let (u0, v0) = (self.u0, self.v0);
        match *d {
            Diagonal::Spanning { u, v } => (-1..=2)
                .map(|t| (u + t * mp, v - t * mq))
                .find(|&(x, y)| {
                    (u0..=u0 + mp).contains(&x)
                        && (v0 - mq..=v0).contains(&y)
                        && (x, y) != (u0, v0)
                        && (x, y) != (u0 + mp, v0 - mq)
                })
                .map(|(x, y)| (self.outer_pos(x), self.inner_pos(y))),
            Diagonal::OuterPeripheral { i, k } => {
                let a = u0 + (i - u0).rem_euclid(mp);
                (a + k - 1 <= u0 + mp).then(|| (self.outer_pos(a), self.outer_pos(a + k - 1)))
            }
            Diagonal::InnerPeripheral { i, k } => {
                let b = v0 - mq + (i - v0 + mq).rem_euclid(mq);
                (b + k - 1 <= v0).then(|| (self.inner_pos(b), self.inner_pos(b + k - 1)))
            }
        }
    }
}

impl FaceMap {
    /// Cuts along `diagonals[cut]` (which must be spanning) and extracts
    /// the faces. The diagonals are assumed normalised and pairwise
    /// non-crossing.
    pub fn build(
        cfg: &AnnulusConfig,
        diagonals: &[Diagonal],
        cut: usize,
    ) -> Result<FaceMap, Rejection> {
        let Some(Diagonal::Spanning { u: u0, v: v0 }) = diagonals.get(cut).copied() else {
            return Err(Rejection::NoSpanning);
        };
        let unf = Unfolding { cfg: *cfg, u0, v0 };
        let n = unf.size();
        let mut owners = Vec::new();
        let mut chords = Vec::new();
        for (idx, d) in diagonals.iter().enumerate() {
            if idx == cut {
                continue;
            }
            chords.push(unf.chord(d).ok_or(Rejection::NotPlanar)?);
            owners.push(idx);
        }
        let poly = dissect(n, &chords).map_err(|_| Rejection::NotPlanar)?;
        let (mp, mq) = (cfg.outer_len(), cfg.inner_len());
        let mut faces = Vec::with_capacity(poly.len());
        let mut adjacency = vec![Vec::new(); diagonals.len()];
        for (fi, pf) in poly.iter().enumerate() {
            let corners: Vec<Corner> = pf.corners.iter().map(|&c| unf.corner(c)).collect();
            let sides: Vec<Side> = pf
                .sides
                .iter()
                .map(|s| match *s {
                    PolySide::Chord(k) => Side::Diagonal(owners[k]),
                    PolySide::Boundary(t) => {
                        let t = t as i64;
                        if t < mp {
                            Side::Outer((u0 + t).rem_euclid(mp))
                        } else if t == mp || t == n as i64 - 1 {
                            Side::Diagonal(cut)
                        } else {
                            Side::Inner((v0 - mq + (t - mp - 1)).rem_euclid(mq))
                        }
                    }
                })
                .collect();
            for s in &sides {
                if let Side::Diagonal(d) = *s {
                    adjacency[d].push(fi);
                }
            }
            faces.push(Face { corners, sides });
        }
        Ok(FaceMap {
            cut,
            polygon_size: n,
            faces,
            adjacency,
        })
    }
}

/// A boundary edge of the annulus: `O_j O_{j+1}` or `I_j I_{j+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryEdge {
    Outer(i64),
    Inner(i64),
}

/// Result of factoring out a diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factored {
    /// A close-to-border diagonal was demoted to a boundary edge.
    Annulus(Angulation),
    /// The annulus was cut along a spanning diagonal.
    Polygon(PolygonDissection),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("diagonal index {0} out of range")]
    OutOfRange(usize),
    #[error(
        "{0} is peripheral but not close to the border; factoring it out disconnects the quiver"
    )]
    Disconnects(Diagonal),
    #[error("the smaller annulus would have fewer than 2m marked points on a boundary")]
    TooSmall,
    #[error(transparent)]
    Invalid(#[from] Rejection),
}

/// A validated `(m+2)`-angulation. With `strict` unset the diagonals need
/// not satisfy the m-diagonal congruences.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "AngulationJson", try_from = "AngulationJson")]
pub struct Angulation {
    cfg: AnnulusConfig,
    strict: bool,
    diagonals: Vec<Diagonal>,
}

#[derive(Serialize, Deserialize)]
struct AngulationJson {
    p: i64,
    q: i64,
    m: i64,
    strict: bool,
    diagonals: Vec<Diagonal>,
}

impl From<Angulation> for AngulationJson {
    fn from(a: Angulation) -> Self {
        AngulationJson {
            p: a.cfg.p,
            q: a.cfg.q,
            m: a.cfg.m,
            strict: a.strict,
            diagonals: a.diagonals,
        }
    }
}

impl TryFrom<AngulationJson> for Angulation {
    type Error = Rejection;

    fn try_from(j: AngulationJson) -> Result<Self, Rejection> {
        let cfg = AnnulusConfig::new(j.p, j.q, j.m)?;
        Angulation::new(cfg, j.diagonals, j.strict)
    }
}

/// Order-preserving byte encoding of an `i64`.
fn push_i64(out: &mut Vec<u8>, x: i64) {
    out.extend(((x as u64) ^ (1 << 63)).to_be_bytes());
}

fn encode(cfg: &AnnulusConfig, diagonals: &mut [Diagonal]) -> Vec<u8> {
    diagonals.sort_unstable();
    let mut out = Vec::with_capacity(3 * 8 + diagonals.len() * 17);
    for x in [cfg.p, cfg.q, cfg.m] {
        push_i64(&mut out, x);
    }
    for d in diagonals.iter() {
        out.push(d.tag());
        let (a, b) = match *d {
            Diagonal::Spanning { u, v } => (u, v),
            Diagonal::OuterPeripheral { i, k } | Diagonal::InnerPeripheral { i, k } => (i, k),
        };
        push_i64(&mut out, a);
        push_i64(&mut out, b);
    }
    out
}

impl Angulation {
    /// Validates `diagonals` as an angulation of `cfg`.
    pub fn new(
        cfg: AnnulusConfig,
        diagonals: Vec<Diagonal>,
        strict: bool,
    ) -> Result<Angulation, Rejection> {
        let cfg = AnnulusConfig::new(cfg.p, cfg.q, cfg.m)?;
        let diagonals: Vec<Diagonal> = diagonals.into_iter().map(|d| cfg.normalize(d)).collect();
        for d in &diagonals {
            cfg.check(d)?;
        }
        let expected = cfg.rank();
        if diagonals.len() != expected {
            return Err(Rejection::Count {
                expected,
                found: diagonals.len(),
            });
        }
        if strict {
            if let Some(i) = diagonals.iter().position(|d| !cfg.is_m_diagonal(d)) {
                return Err(Rejection::NotMDiagonal(i));
            }
        }
        for i in 0..diagonals.len() {
            for j in 0..i {
                if diagonals[i] == diagonals[j] {
                    return Err(Rejection::Duplicate(j, i));
                }
            }
        }
        if let Some(i) = diagonals.iter().position(|d| cfg.self_crosses(d)) {
            return Err(Rejection::SelfCrossing(i));
        }
        for i in 0..diagonals.len() {
            for j in 0..i {
                let e = cfg.crossing_number(&diagonals[j], &diagonals[i]);
                if e > 0 {
                    return Err(Rejection::Crossing(j, i, e));
                }
            }
        }
        let a = Angulation {
            cfg,
            strict,
            diagonals,
        };
        let fm = a.faces_checked()?;
        let expected_sides = cfg.m as usize + 2;
        if let Some((face, f)) = fm
            .faces
            .iter()
            .enumerate()
            .find(|(_, f)| f.sides.len() != expected_sides)
        {
            return Err(Rejection::FaceSize {
                face,
                sides: f.sides.len(),
                expected: expected_sides,
            });
        }
        if fm.faces.len() != expected {
            return Err(Rejection::FaceCount {
                expected,
                found: fm.faces.len(),
            });
        }
        Ok(a)
    }

    /// The distinguished angulation `Δ⁰`: only spanning m-diagonals, with
    /// vertex `0` the source and `p + q - 1` the sink of its quiver; the
    /// branch `1..p-1` is the fan at `I_0` and `p..p+q-2` the fan at `O_0`.
    pub fn delta0(cfg: AnnulusConfig) -> Angulation {
        let (p, q, m) = (cfg.p, cfg.q, cfg.m);
        let mq = cfg.inner_len();
        let mut ds = vec![cfg.spanning(0, mq)];
        ds.extend((1..p).map(|t| cfg.spanning((p - t) * m, 0)));
        ds.extend((0..q - 1).map(|s| cfg.spanning(0, mq - (s + 1) * m)));
        ds.push(cfg.spanning(0, 0));
        Angulation::new(cfg, ds, true).expect("Δ⁰ is an angulation")
    }

    pub fn cfg(&self) -> &AnnulusConfig {
        &self.cfg
    }

    pub fn strict(&self) -> bool {
        self.strict
    }

    pub fn diagonals(&self) -> &[Diagonal] {
        &self.diagonals
    }

    /// Index of the least spanning diagonal.
    fn least_spanning(&self) -> Option<usize> {
        self.diagonals
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_spanning())
            .min_by_key(|(_, d)| **d)
            .map(|(i, _)| i)
    }

    fn faces_checked(&self) -> Result<FaceMap, Rejection> {
        let cut = self.least_spanning().ok_or(Rejection::NoSpanning)?;
        FaceMap::build(&self.cfg, &self.diagonals, cut)
    }

    /// Faces, cutting along the least spanning diagonal.
    pub fn faces(&self) -> FaceMap {
        self.faces_checked().expect("validated angulation unfolds")
    }

    pub fn quiver(&self) -> ColouredQuiver {
        quiver_of_faces(&self.faces(), self.diagonals.len(), self.cfg.m as u32)
            .expect("angulation faces give a coloured quiver")
    }

    /// Mutation at `idx`: the diagonal is replaced by the next diameter of
    /// the `(2m+2)`-gon formed by its two faces. Both endpoints advance one
    /// corner counterclockwise around that polygon, which is the direction
    /// matching coloured quiver mutation under our colour convention.
    pub fn mutate(&self, idx: usize) -> Result<Angulation, Rejection> {
        self.rotate_diameter(idx, 1)
    }

    /// Inverse of [`Angulation::mutate`].
    pub fn mutate_inverse(&self, idx: usize) -> Result<Angulation, Rejection> {
        self.rotate_diameter(idx, -1)
    }

    fn rotate_diameter(&self, idx: usize, dir: i64) -> Result<Angulation, Rejection> {
        let (mp, mq) = (self.cfg.outer_len(), self.cfg.inner_len());
        let m = self.cfg.m as usize;
        let fm = self.faces();
        let adj = &fm.adjacency[idx];
        if adj.len() != 2 || adj[0] == adj[1] {
            return Err(Rejection::NotPlanar);
        }
        let (f1, f2) = (&fm.faces[adj[0]], &fm.faces[adj[1]]);
        let len = m + 2;
        let pos = |f: &Face| {
            f.sides
                .iter()
                .position(|s| *s == Side::Diagonal(idx))
                .unwrap()
        };
        let (s1, s2) = (pos(f1), pos(f2));
        let p = f1.corners[s1];
        let q = f1.corners[(s1 + 1) % len];
        // Translate f2 so that its copy of the diagonal runs Q → P.
        let q2 = f2.corners[s2];
        let turns = match (q, q2) {
            (Corner::Outer(x), Corner::Outer(x2)) => (x - x2) / mp,
            (Corner::Inner(y), Corner::Inner(y2)) => (y2 - y) / mq,
            _ => return Err(Rejection::NotPlanar),
        };
        let shift = |c: Corner| match c {
            Corner::Outer(x) => Corner::Outer(x + turns * mp),
            Corner::Inner(y) => Corner::Inner(y - turns * mq),
        };
        if shift(q2) != q || shift(f2.corners[(s2 + 1) % len]) != p {
            return Err(Rejection::NotPlanar);
        }
        let mut merged: Vec<Corner> = (0..=m + 1)
            .map(|k| f1.corners[(s1 + 1 + k) % len])
            .collect();
        merged.extend((0..m).map(|k| shift(f2.corners[(s2 + 2 + k) % len])));
        let n = merged.len() as i64;
        let at = |k: i64| merged[k.rem_euclid(n) as usize];
        let (a, b) = (at(dir), at(m as i64 + 1 + dir));
        let replacement = match (a, b) {
            (Corner::Outer(x), Corner::Outer(y)) => self.cfg.outer(x.min(y), (x - y).abs() + 1),
            (Corner::Inner(x), Corner::Inner(y)) => self.cfg.inner(x.min(y), (x - y).abs() + 1),
            (Corner::Outer(x), Corner::Inner(y)) | (Corner::Inner(y), Corner::Outer(x)) => {
                self.cfg.spanning(x, y)
            }
        };
        let mut ds = self.diagonals.clone();
        ds[idx] = replacement;
        Angulation::new(self.cfg, ds, self.strict)
    }

    /// Factors out diagonal `idx` (see [`Factored`]). The remaining
    /// diagonals keep their relative order.
    pub fn factor_out(&self, idx: usize) -> Result<Factored, FactorError> {
        let d = *self
            .diagonals
            .get(idx)
            .ok_or(FactorError::OutOfRange(idx))?;
        let m = self.cfg.m;
        let rest = || {
            self.diagonals
                .iter()
                .enumerate()
                .filter(move |&(j, _)| j != idx)
                .map(|(_, d)| *d)
        };
        match d {
            Diagonal::Spanning { u, v } => {
                let fm = FaceMap::build(&self.cfg, &self.diagonals, idx)?;
                let unf = Unfolding {
                    cfg: self.cfg,
                    u0: u,
                    v0: v,
                };
                let chords = rest()
                    .map(|d| unf.chord(&d).ok_or(Rejection::NotPlanar))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Factored::Polygon(PolygonDissection {
                    n: fm.polygon_size,
                    m: m as u32,
                    chords,
                }))
            }
            Diagonal::OuterPeripheral { i, k } if k == m + 2 => {
                if self.cfg.p <= 2 {
                    return Err(FactorError::TooSmall);
                }
                let small =
                    AnnulusConfig::new(self.cfg.p - 1, self.cfg.q, m).map_err(Rejection::from)?;
                let f = Relabel {
                    base: i,
                    old: self.cfg.outer_len(),
                    new: small.outer_len(),
                    m,
                };
                let ds = rest()
                    .map(|d| match d {
                        Diagonal::Spanning { u, v } => small.spanning(f.squeeze(u), v),
                        Diagonal::OuterPeripheral { i, k } => {
                            let a = f.squeeze(i);
                            small.outer(a, f.squeeze(i + k - 1) - a + 1)
                        }
                        inner => inner,
                    })
                    .collect();
                Ok(Factored::Annulus(Angulation::new(small, ds, self.strict)?))
            }
            Diagonal::InnerPeripheral { i, k } if k == m + 2 => {
                if self.cfg.q <= 2 {
                    return Err(FactorError::TooSmall);
                }
                let small =
                    AnnulusConfig::new(self.cfg.p, self.cfg.q - 1, m).map_err(Rejection::from)?;
                let f = Relabel {
                    base: i,
                    old: self.cfg.inner_len(),
                    new: small.inner_len(),
                    m,
                };
                let ds = rest()
                    .map(|d| match d {
                        Diagonal::Spanning { u, v } => small.spanning(u, f.squeeze(v)),
                        Diagonal::InnerPeripheral { i, k } => {
                            let a = f.squeeze(i);
                            small.inner(a, f.squeeze(i + k - 1) - a + 1)
                        }
                        outer => outer,
                    })
                    .collect();
                Ok(Factored::Annulus(Angulation::new(small, ds, self.strict)?))
            }
            other => Err(FactorError::Disconnects(other)),
        }
    }

    /// `Δ(e)`: inserts `m` marked points inside the boundary edge `e` and
    /// adds the close-to-border diagonal over them as the last diagonal.
    pub fn extend(&self, e: BoundaryEdge) -> Result<Angulation, Rejection> {
        let m = self.cfg.m;
        match e {
            BoundaryEdge::Outer(j) => {
                let big = AnnulusConfig::new(self.cfg.p + 1, self.cfg.q, m)?;
                let f = Relabel {
                    base: j,
                    old: self.cfg.outer_len(),
                    new: big.outer_len(),
                    m,
                };
                let mut ds: Vec<Diagonal> = self
                    .diagonals
                    .iter()
                    .map(|&d| match d {
                        Diagonal::Spanning { u, v } => big.spanning(f.stretch(u), v),
                        Diagonal::OuterPeripheral { i, k } => {
                            let a = f.stretch(i);
                            big.outer(a, f.stretch(i + k - 1) - a + 1)
                        }
                        inner => inner,
                    })
                    .collect();
                ds.push(big.outer(j, m + 2));
                Angulation::new(big, ds, self.strict)
            }
            BoundaryEdge::Inner(j) => {
                let big = AnnulusConfig::new(self.cfg.p, self.cfg.q + 1, m)?;
                let f = Relabel {
                    base: j,
                    old: self.cfg.inner_len(),
                    new: big.inner_len(),
                    m,
                };
                let mut ds: Vec<Diagonal> = self
                    .diagonals
                    .iter()
                    .map(|&d| match d {
                        Diagonal::Spanning { u, v } => big.spanning(u, f.stretch(v)),
                        Diagonal::InnerPeripheral { i, k } => {
                            let a = f.stretch(i);
                            big.inner(a, f.stretch(i + k - 1) - a + 1)
                        }
                        outer => outer,
                    })
                    .collect();
                ds.push(big.inner(j, m + 2));
                Angulation::new(big, ds, self.strict)
            }
        }
    }

    /// `r_O^i r_I^j ε^k Δ` with `k = 1` iff `flip`.
    pub fn apply_symmetry(&self, i: i64, j: i64, flip: bool) -> Result<Angulation, Rejection> {
        let (cfg, ds) = self.symmetry_image(i, j, flip);
        let strict = self.strict && (i - j).rem_euclid(self.cfg.m) == 0;
        Angulation::new(cfg, ds, strict)
    }

    fn symmetry_image(&self, i: i64, j: i64, flip: bool) -> (AnnulusConfig, Vec<Diagonal>) {
        let (cfg, base) = if flip {
            self.flip().into_parts()
        } else {
            self.clone().into_parts()
        };
        let ds = base
            .iter()
            .map(|d| cfg.rotate_inner(&cfg.rotate_outer(d, i), j))
            .collect();
        (cfg, ds)
    }

    fn into_parts(self) -> (AnnulusConfig, Vec<Diagonal>) {
        (self.cfg, self.diagonals)
    }

    /// The same diagonals with every diagonal shifted by `[s]`.
    pub fn shift(&self, s: i64) -> Angulation {
        Angulation {
            cfg: self.cfg,
            strict: self.strict,
            diagonals: self
                .diagonals
                .iter()
                .map(|d| self.cfg.shift(d, s))
                .collect(),
        }
    }

    /// `ε Δ`, an angulation of `P_{q,p,m}`.
    pub fn flip(&self) -> Angulation {
        Angulation {
            cfg: self.cfg.flipped(),
            strict: self.strict,
            diagonals: self.diagonals.iter().map(|d| self.cfg.flip(d)).collect(),
        }
    }

    /// `ε` followed by the mirror `x ↦ -x` of both boundaries: exchanges
    /// the boundaries preserving orientation, so the quiver is unchanged.
    pub fn swap_boundaries(&self) -> Angulation {
        Angulation {
            cfg: self.cfg.flipped(),
            strict: self.strict,
            diagonals: self
                .diagonals
                .iter()
                .map(|d| self.cfg.swap_boundaries(d))
                .collect(),
        }
    }

    /// Canonical form under the rotations `r_O^i r_I^j`, and for `p = q`
    /// with `use_flip` also under [`Angulation::swap_boundaries`].
    /// Each spanning diagonal `(u, v)` determines the unique rotation
    /// `r_O^u r_I^v` carrying it to `S(0, 0)`; the least encoding wins.
    pub fn canonical_form(&self, use_flip: bool) -> Vec<u8> {
        let mut images = vec![self.clone()];
        if use_flip && self.cfg.p == self.cfg.q {
            images.push(self.swap_boundaries());
        }
        let mut best: Option<Vec<u8>> = None;
        for image in images {
            let (cfg, base) = image.into_parts();
            for d in &base {
                let Diagonal::Spanning { u, v } = *d else {
                    continue;
                };
                let mut ds: Vec<Diagonal> = base
                    .iter()
                    .map(|x| cfg.rotate_inner(&cfg.rotate_outer(x, u), v))
                    .collect();
                let enc = encode(&cfg, &mut ds);
                if best.as_ref().is_none_or(|b| enc < *b) {
                    best = Some(enc);
                }
            }
        }
        best.expect("angulations contain a spanning diagonal")
    }

    /// Whether the quiver is isomorphic to its reversal (`p = q` only).
    pub fn is_reflection_symmetric(&self) -> Result<bool, Rejection> {
        if self.cfg.p != self.cfg.q {
            return Err(Rejection::Config(GeometryError::InvalidConfig {
                p: self.cfg.p,
                q: self.cfg.q,
                m: self.cfg.m,
            }));
        }
        Ok(self.quiver().is_reflection_symmetric())
    }
}

/// Piecewise-linear relabelling of one boundary around the edge starting at
/// `base` when `m` marked points are removed from (or inserted into) it.
struct Relabel {
    base: i64,
    old: i64,
    new: i64,
    m: i64,
}

impl Relabel {
    /// Label of lift `x` after deleting the `m` points after `base`.
    fn squeeze(&self, x: i64) -> i64 {
        let off = x - self.base;
        let (t, r) = (off.div_euclid(self.old), off.rem_euclid(self.old));
        self.base + t * self.new + if r == 0 { 0 } else { r - self.m }
    }

    /// Label of lift `x` after inserting `m` points after `base`.
    fn stretch(&self, x: i64) -> i64 {
        let off = x - self.base;
        let (t, r) = (off.div_euclid(self.old), off.rem_euclid(self.old));
        self.base + t * self.new + if r == 0 { 0 } else { r + self.m }
    }
}

/// Coloured quiver of the faces in `fm`, one vertex per diagonal.
pub fn quiver_of_faces(fm: &FaceMap, n: usize, m: u32) -> Result<ColouredQuiver, QuiverError> {
    ColouredQuiver::from_faces(
        n,
        m,
        fm.faces.iter().map(|f| {
            f.sides
                .iter()
                .map(|s| match *s {
                    Side::Diagonal(d) => Some(d),
                    _ => None,
                })
                .collect()
        }),
    )
}
