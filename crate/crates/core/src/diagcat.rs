//! The translation quiver of m-diagonals: elementary moves, `τ = [m]`,
//! levels, components and the labelling by objects of the m-cluster
//! category.
//!
//! Labels follow `F(O_{im,jm+2}[d]) = Q_i^j[d]` and
//! `F(τ^s α_i[d]) = τ^s P_i[d]`, where `α_i` is diagonal `i` of `Δ⁰`.
//! Since `O_{x,k}[d] = O_{x-d,k}`, an outer arc `O_{x, jm+2}` has degree
//! `d = -x mod m` and quasi-simple index `(x + d)/m mod p`.

use crate::angulation::Angulation;
use crate::geometry::{AnnulusConfig, Diagonal, GeometryError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagCatError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("could not express {0} as a translate of a Δ⁰ diagonal")]
    NoDecomposition(Diagonal),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ARLabel {
    /// `τ^power P_vertex[degree]`.
    Transjective {
        vertex: usize,
        power: i64,
        degree: i64,
    },
    /// `Q_index^length[degree]` in a tube of rank `p`.
    TubeP {
        index: i64,
        length: i64,
        degree: i64,
    },
    /// The same in a tube of rank `q`.
    TubeQ {
        index: i64,
        length: i64,
        degree: i64,
    },
}

impl fmt::Display for ARLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ARLabel::Transjective {
                vertex,
                power,
                degree,
            } => {
                write!(f, "S^{degree}:tau^{power} P_{vertex}")
            }
            ARLabel::TubeP {
                index,
                length,
                degree,
            } => write!(f, "Tp^{degree}:Q({index},{length})"),
            ARLabel::TubeQ {
                index,
                length,
                degree,
            } => write!(f, "Tq^{degree}:Q({index},{length})"),
        }
    }
}

/// Elementary moves out of an m-diagonal.
pub fn elementary_moves(a: &Diagonal, cfg: &AnnulusConfig) -> Result<Vec<Diagonal>, DiagCatError> {
    if !cfg.is_m_diagonal(a) {
        return Err(GeometryError::NotMDiagonal(*a).into());
    }
    let m = cfg.m;
    Ok(match *a {
        Diagonal::Spanning { u, v } => vec![cfg.spanning(u + m, v), cfg.spanning(u, v + m)],
        Diagonal::OuterPeripheral { i, k } => {
            let mut out = vec![cfg.outer(i, k + m)];
            if k > m + 2 {
                out.push(cfg.outer(i + m, k - m));
            }
            out
        }
        Diagonal::InnerPeripheral { i, k } => {
            let mut out = vec![cfg.inner(i, k + m)];
            if k > m + 2 {
                out.push(cfg.inner(i + m, k - m));
            }
            out
        }
    })
}

/// `τ = [m]`.
pub fn tau(a: &Diagonal, cfg: &AnnulusConfig) -> Diagonal {
    cfg.shift(a, cfg.m)
}

fn has_move(a: &Diagonal, b: &Diagonal, cfg: &AnnulusConfig) -> bool {
    elementary_moves(a, cfg)
        .map(|ms| ms.contains(b))
        .unwrap_or(false)
}

/// Whether `a → b` is a move exactly when `τ b → a` is.
pub fn translate_dual_check(a: &Diagonal, b: &Diagonal, cfg: &AnnulusConfig) -> bool {
    has_move(a, b, cfg) == has_move(&tau(b, cfg), a, cfg)
}

/// The label of an m-diagonal in the AR-quiver of the m-cluster category.
pub fn functor_label(a: &Diagonal, cfg: &AnnulusConfig) -> Result<ARLabel, DiagCatError> {
    if !cfg.is_m_diagonal(a) {
        return Err(GeometryError::NotMDiagonal(*a).into());
    }
    let m = cfg.m;
    let tube = |x: i64, k: i64, rank: i64| {
        let degree = (-x).rem_euclid(m);
        (
            (x + degree).div_euclid(m).rem_euclid(rank),
            (k - 2) / m,
            degree,
        )
    };
    Ok(match *a {
        Diagonal::OuterPeripheral { i, k } => {
            let (index, length, degree) = tube(i, k, cfg.p);
            ARLabel::TubeP {
                index,
                length,
                degree,
            }
        }
        Diagonal::InnerPeripheral { i, k } => {
            let (index, length, degree) = tube(i, k, cfg.q);
            ARLabel::TubeQ {
                index,
                length,
                degree,
            }
        }
        Diagonal::Spanning { u, v } => {
            // The residues u_i - v_i of Δ⁰ run over p + q consecutive
            // multiples of m, so exactly one α_i is a translate of a.
            let period = m * (cfg.p + cfg.q);
            let delta0 = Angulation::delta0(*cfg);
            let found = delta0.diagonals().iter().enumerate().find_map(|(idx, d)| {
                let Diagonal::Spanning { u: ui, v: vi } = *d else {
                    return None;
                };
                let diff = (ui - vi) - (u - v);
                (diff % period == 0).then(|| {
                    let t = diff / period;
                    (idx, ui - u - t * cfg.outer_len())
                })
            });
            let (vertex, sigma) = found.ok_or(DiagCatError::NoDecomposition(*a))?;
            ARLabel::Transjective {
                vertex,
                power: sigma.div_euclid(m),
                degree: sigma.rem_euclid(m),
            }
        }
    })
}

/// Bounds of the finite piece of the AR-quiver that is built: spanning
/// arcs with twist in `[-twist, twist]`, peripheral arcs of quasi-length
/// at most `length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub twist: i64,
    pub length: i64,
}

impl Window {
    fn contains(&self, a: &Diagonal, cfg: &AnnulusConfig) -> bool {
        match *a {
            Diagonal::Spanning { .. } => cfg.twist(a).is_some_and(|t| t.abs() <= self.twist),
            Diagonal::OuterPeripheral { k, .. } | Diagonal::InnerPeripheral { k, .. } => {
                (k - 2) / cfg.m <= self.length
            }
        }
    }

    /// The inner half, used to ignore components created by truncation.
    fn core(&self, a: &Diagonal, cfg: &AnnulusConfig) -> bool {
        Window {
            twist: self.twist / 2,
            length: self.length / 2,
        }
        .contains(a, cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentKind {
    S,
    Tp,
    Tq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub kind: ComponentKind,
    pub level: i64,
    pub size: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ARNode {
    pub diagonal: Diagonal,
    pub label: ARLabel,
    pub level: i64,
    pub component: usize,
}

/// A finite piece of the translation quiver of m-diagonals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ARQuiver {
    pub cfg: AnnulusConfig,
    pub window: Window,
    /// Vertices sorted by diagonal.
    pub nodes: Vec<ARNode>,
    /// Elementary moves between vertices of the window.
    pub moves: Vec<(usize, usize)>,
    /// `(a, τ a)` for vertices whose translate is in the window.
    pub tau: Vec<(usize, usize)>,
    /// Components meeting the inner half of the window.
    pub components: Vec<Component>,
}

fn window_vertices(cfg: &AnnulusConfig, w: &Window) -> Vec<Diagonal> {
    let (mp, mq, m) = (cfg.outer_len(), cfg.inner_len(), cfg.m);
    let mut out = BTreeSet::new();
    for u in 0..mp {
        // twist ∈ [-W, W]  ⇔  -v/mq ∈ [u/mp - W, u/mp + W + 1)
        let lo = -(w.twist + 2) * mq;
        let hi = (w.twist + 1) * mq;
        for v in lo..=hi {
            let d = cfg.spanning(u, v);
            if (u - v).rem_euclid(m) == 0 && w.contains(&d, cfg) {
                out.insert(d);
            }
        }
    }
    for j in 1..=w.length {
        for i in 0..mp {
            out.insert(cfg.outer(i, j * m + 2));
        }
        for i in 0..mq {
            out.insert(cfg.inner(i, j * m + 2));
        }
    }
    out.into_iter().collect()
}

/// Builds the window of the AR-quiver with labels and components.
pub fn build_ar_quiver(cfg: &AnnulusConfig, window: Window) -> Result<ARQuiver, DiagCatError> {
    let verts = window_vertices(cfg, &window);
    let index: HashMap<Diagonal, usize> = verts.iter().enumerate().map(|(i, d)| (*d, i)).collect();
    let mut moves = Vec::new();
    let mut tau_edges = Vec::new();
    for (i, d) in verts.iter().enumerate() {
        for t in elementary_moves(d, cfg)? {
            if let Some(&j) = index.get(&t) {
                moves.push((i, j));
            }
        }
        if let Some(&j) = index.get(&tau(d, cfg)) {
            tau_edges.push((i, j));
        }
    }

    // Undirected components of the move graph.
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for &(a, b) in &moves {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let roots: Vec<usize> = (0..verts.len()).map(|i| find(&mut parent, i)).collect();
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in &roots {
        *sizes.entry(r).or_default() += 1;
    }
    let kept: BTreeSet<usize> = verts
        .iter()
        .enumerate()
        .filter(|(_, d)| window.core(d, cfg))
        .map(|(i, _)| roots[i])
        .collect();
    let component_ids: BTreeMap<usize, usize> =
        kept.iter().enumerate().map(|(n, &r)| (r, n)).collect();
    let mut components = Vec::new();
    for &r in &kept {
        let d = &verts[r];
        let kind = match d {
            Diagonal::Spanning { .. } => ComponentKind::S,
            Diagonal::OuterPeripheral { .. } => ComponentKind::Tp,
            Diagonal::InnerPeripheral { .. } => ComponentKind::Tq,
        };
        components.push(Component {
            kind,
            level: cfg.level(d)?,
            size: sizes[&r],
        });
    }

    let nodes = verts
        .iter()
        .enumerate()
        .map(|(i, d)| {
            Ok(ARNode {
                diagonal: *d,
                label: functor_label(d, cfg)?,
                level: cfg.level(d)?,
                component: component_ids.get(&roots[i]).copied().unwrap_or(usize::MAX),
            })
        })
        .collect::<Result<Vec<_>, DiagCatError>>()?;
    Ok(ARQuiver {
        cfg: *cfg,
        window,
        nodes,
        moves,
        tau: tau_edges,
        components,
    })
}

impl ARQuiver {
    pub fn in_degree(&self, v: usize) -> usize {
        self.moves.iter().filter(|&&(_, b)| b == v).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.moves.iter().filter(|&&(a, _)| a == v).count()
    }

    /// Number of components of each kind, in the order S, Tp, Tq.
    pub fn summary(&self) -> BTreeMap<ComponentKind, usize> {
        let mut out = BTreeMap::new();
        for c in &self.components {
            *out.entry(c.kind).or_default() += 1;
        }
        out
    }

    /// Graphviz rendering; `τ` is drawn dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph AR {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\\n{}\"];", n.label, n.diagonal);
        }
        for &(a, b) in &self.moves {
            let _ = writeln!(s, "  n{a} -> n{b};");
        }
        for &(a, b) in &self.tau {
            let _ = writeln!(s, "  n{a} -> n{b} [style=dashed];");
        }
        s.push_str("}\n");
        s
    }
}
