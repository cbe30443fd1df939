//! Coloured quivers and their mutation.
//!
//! Arrows are stored per ordered pair of vertices as `(colour, multiplicity)`.
//! Both an arrow and its dual (`j → i` of colour `m - c`) are stored, and
//! [`ColouredQuiver::check_axioms`] verifies they agree.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("colour {colour} out of range 0..={m} on {from}->{to}")]
    ColourOutOfRange {
        from: usize,
        to: usize,
        colour: u32,
        m: u32,
    },
    #[error("zero multiplicity on {0}->{1}")]
    ZeroMultiplicity(usize, usize),
    #[error("arrows {0}->{1} carry two different colours")]
    ConflictingColours(usize, usize),
    #[error("arrows {0}->{1} have no matching dual")]
    MissingDual(usize, usize),
    #[error("more than two colours meet on {0}->{1} during mutation")]
    TooManyColours(usize, usize),
    #[error("face structure is not a valid source of a quiver")]
    Malformed,
}

/// A coloured quiver with colours in `0..=m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "QuiverJson", try_from = "QuiverJson")]
pub struct ColouredQuiver {
    n: usize,
    m: u32,
    arrows: BTreeMap<(usize, usize), (u32, u32)>,
}

#[derive(Serialize, Deserialize)]
struct ArrowJson {
    from: usize,
    to: usize,
    colour: u32,
    mult: u32,
}

#[derive(Serialize, Deserialize)]
struct QuiverJson {
    n: usize,
    m: u32,
    arrows: Vec<ArrowJson>,
}

impl From<ColouredQuiver> for QuiverJson {
    fn from(q: ColouredQuiver) -> Self {
        QuiverJson {
            n: q.n,
            m: q.m,
            arrows: q
                .arrows
                .iter()
                .map(|(&(from, to), &(colour, mult))| ArrowJson {
                    from,
                    to,
                    colour,
                    mult,
                })
                .collect(),
        }
    }
}

impl TryFrom<QuiverJson> for ColouredQuiver {
    type Error = QuiverError;

    fn try_from(j: QuiverJson) -> Result<Self, Self::Error> {
        let mut arrows = BTreeMap::new();
        for a in j.arrows {
            if arrows.insert((a.from, a.to), (a.colour, a.mult)).is_some() {
                return Err(QuiverError::ConflictingColours(a.from, a.to));
            }
        }
        ColouredQuiver::new(j.n, j.m, arrows)
    }
}

impl ColouredQuiver {
    /// Builds a quiver from explicit arrow data (duals included) and checks
    /// the axioms.
    pub fn new(
        n: usize,
        m: u32,
        arrows: BTreeMap<(usize, usize), (u32, u32)>,
    ) -> Result<Self, QuiverError> {
        let q = ColouredQuiver { n, m, arrows };
        q.check_axioms()?;
        Ok(q)
    }

    /// Builds a quiver from arrows of colour `c` given once; the duals are
    /// added.
    pub fn from_arrows(
        n: usize,
        m: u32,
        arrows: impl IntoIterator<Item = (usize, usize, u32, u32)>,
    ) -> Result<Self, QuiverError> {
        let mut map = BTreeMap::new();
        for (i, j, c, r) in arrows {
            if c > m {
                return Err(QuiverError::ColourOutOfRange {
                    from: i,
                    to: j,
                    colour: c,
                    m,
                });
            }
            for (key, val) in [((i, j), (c, r)), ((j, i), (m - c, r))] {
                if let Some(old) = map.insert(key, val) {
                    if old != val {
                        return Err(QuiverError::ConflictingColours(key.0, key.1));
                    }
                }
            }
        }
        ColouredQuiver::new(n, m, map)
    }

    /// Quiver of a dissection whose faces are given as counterclockwise
    /// lists of sides; `Some(v)` marks a side that is quiver vertex `v`.
    /// The colour of `i → j` is the number of sides strictly between `i`
    /// and `j`, counterclockwise from `i`; arrows accumulate over faces.
    pub fn from_faces(
        n: usize,
        m: u32,
        faces: impl IntoIterator<Item = Vec<Option<usize>>>,
    ) -> Result<Self, QuiverError> {
        let mut map: BTreeMap<(usize, usize), (u32, u32)> = BTreeMap::new();
        for face in faces {
            let len = face.len();
            for (si, a) in face.iter().enumerate() {
                for (sj, b) in face.iter().enumerate() {
                    let (Some(i), Some(j)) = (*a, *b) else {
                        continue;
                    };
                    if si == sj {
                        continue;
                    }
                    if i == j {
                        return Err(QuiverError::Malformed);
                    }
                    let colour = ((sj + len - si - 1) % len) as u32;
                    if colour > m {
                        return Err(QuiverError::ColourOutOfRange {
                            from: i,
                            to: j,
                            colour,
                            m,
                        });
                    }
                    let e = map.entry((i, j)).or_insert((colour, 0));
                    if e.0 != colour {
                        return Err(QuiverError::ConflictingColours(i, j));
                    }
                    e.1 += 1;
                }
            }
        }
        ColouredQuiver::new(n, m, map)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `(colour, multiplicity)` of the arrows `i → j`, if any.
    pub fn arrow(&self, i: usize, j: usize) -> Option<(u32, u32)> {
        self.arrows.get(&(i, j)).copied()
    }

    /// All arrows as `(from, to, colour, multiplicity)`, duals included.
    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize, u32, u32)> + '_ {
        self.arrows.iter().map(|(&(i, j), &(c, r))| (i, j, c, r))
    }

    /// No loops, colours in range, positive multiplicities, one colour per
    /// ordered pair (by construction of the map) and `(c, m - c)` duality.
    pub fn check_axioms(&self) -> Result<(), QuiverError> {
        for (&(i, j), &(c, r)) in &self.arrows {
            if i >= self.n {
                return Err(QuiverError::VertexOutOfRange(i));
            }
            if j >= self.n {
                return Err(QuiverError::VertexOutOfRange(j));
            }
            if i == j {
                return Err(QuiverError::Loop(i));
            }
            if c > self.m {
                return Err(QuiverError::ColourOutOfRange {
                    from: i,
                    to: j,
                    colour: c,
                    m: self.m,
                });
            }
            if r == 0 {
                return Err(QuiverError::ZeroMultiplicity(i, j));
            }
            if self.arrows.get(&(j, i)) != Some(&(self.m - c, r)) {
                return Err(QuiverError::MissingDual(i, j));
            }
        }
        Ok(())
    }

    /// Coloured mutation at `j`.
    pub fn mutate(&self, j: usize) -> Result<ColouredQuiver, QuiverError> {
        if j >= self.n {
            return Err(QuiverError::VertexOutOfRange(j));
        }
        let modulus = self.m + 1;
        let mut work: BTreeMap<(usize, usize), BTreeMap<u32, u32>> = BTreeMap::new();
        for (&key, &(c, r)) in &self.arrows {
            work.entry(key).or_default().insert(c, r);
        }

        // (1) Compose through colour-0 arrows leaving j.
        let into_j: Vec<(usize, u32, u32)> = self
            .arrows
            .iter()
            .filter(|(&(_, t), _)| t == j)
            .map(|(&(i, _), &(c, r))| (i, c, r))
            .collect();
        let out_of_j: Vec<(usize, u32)> = self
            .arrows
            .iter()
            .filter(|(&(s, _), &(c, _))| s == j && c == 0)
            .map(|(&(_, k), &(_, r))| (k, r))
            .collect();
        for &(i, c, r) in &into_j {
            for &(k, s) in &out_of_j {
                if i == k {
                    continue;
                }
                *work.entry((i, k)).or_default().entry(c).or_insert(0) += r * s;
                *work
                    .entry((k, i))
                    .or_default()
                    .entry(self.m - c)
                    .or_insert(0) += r * s;
            }
        }

        // (2) Cancel mixed colours.
        let mut arrows = BTreeMap::new();
        for ((a, b), colours) in work {
            let mut live: Vec<(u32, u32)> = colours.into_iter().filter(|&(_, r)| r > 0).collect();
            match live.len() {
                0 => continue,
                1 => {}
                2 => {
                    let cut = live[0].1.min(live[1].1);
                    live.iter_mut().for_each(|e| e.1 -= cut);
                    live.retain(|&(_, r)| r > 0);
                    if live.is_empty() {
                        continue;
                    }
                }
                _ => return Err(QuiverError::TooManyColours(a, b)),
            }
            arrows.insert((a, b), live[0]);
        }

        // (3) Recolour arrows at j.
        for (&(a, b), val) in arrows.iter_mut() {
            if b == j {
                val.0 = (val.0 + 1) % modulus;
            } else if a == j {
                val.0 = (val.0 + self.m) % modulus;
            }
        }
        ColouredQuiver::new(self.n, self.m, arrows)
    }

    /// The quiver with every arrow reversed, colours kept.
    pub fn reverse(&self) -> ColouredQuiver {
        ColouredQuiver {
            n: self.n,
            m: self.m,
            arrows: self
                .arrows
                .iter()
                .map(|(&(i, j), &v)| ((j, i), v))
                .collect(),
        }
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> ColouredQuiver {
        ColouredQuiver {
            n: self.n,
            m: self.m,
            arrows: self
                .arrows
                .iter()
                .map(|(&(i, j), &v)| ((perm[i], perm[j]), v))
                .collect(),
        }
    }

    /// Removes `v` and its arrows; later vertices move down by one.
    pub fn delete_vertex(&self, v: usize) -> Result<ColouredQuiver, QuiverError> {
        if v >= self.n {
            return Err(QuiverError::VertexOutOfRange(v));
        }
        let idx = |x: usize| if x > v { x - 1 } else { x };
        Ok(ColouredQuiver {
            n: self.n - 1,
            m: self.m,
            arrows: self
                .arrows
                .iter()
                .filter(|(&(i, j), _)| i != v && j != v)
                .map(|(&(i, j), &val)| ((idx(i), idx(j)), val))
                .collect(),
        })
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in self.arrows.keys() {
            adj[i].push(j);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn entry_code(&self, i: usize, j: usize) -> [u8; 2] {
        match self.arrow(i, j) {
            None => [0, 0],
            Some((c, r)) => [c as u8 + 1, r.min(255) as u8],
        }
    }

    /// Stable partition of the vertices by iterated colour-profile
    /// refinement. Returns a cell index per vertex, cells ordered by a
    /// labelling-independent key.
    fn refined_cells(&self) -> Vec<usize> {
        let mut cell = vec![0usize; self.n];
        let mut count = 1;
        loop {
            let signatures: Vec<(usize, Vec<(usize, [u8; 2])>)> = (0..self.n)
                .map(|v| {
                    let mut nb: Vec<(usize, [u8; 2])> = (0..self.n)
                        .filter(|&w| w != v && self.arrow(v, w).is_some())
                        .map(|w| (cell[w], self.entry_code(v, w)))
                        .collect();
                    nb.sort_unstable();
                    (cell[v], nb)
                })
                .collect();
            let mut distinct = signatures.clone();
            distinct.sort();
            distinct.dedup();
            let next: Vec<usize> = signatures
                .iter()
                .map(|s| distinct.binary_search(s).expect("present"))
                .collect();
            let stable = distinct.len() == count;
            cell = next;
            count = distinct.len();
            if stable {
                return cell;
            }
        }
    }

    fn canonical_search(&self) -> (Vec<u8>, Vec<usize>) {
        let cells = self.refined_cells();
        let mut slots: Vec<usize> = cells.clone();
        slots.sort_unstable();
        let mut search = CanonSearch {
            q: self,
            cells: &cells,
            slots: &slots,
            order: Vec::with_capacity(self.n),
            used: vec![false; self.n],
            current: Vec::new(),
            best: None,
        };
        search.step();
        search.best.unwrap_or_default()
    }

    /// Canonical byte string: equal for two quivers iff they are
    /// isomorphic as coloured quivers.
    pub fn canonical(&self) -> Vec<u8> {
        let mut out = vec![self.n as u8, self.m as u8];
        out.extend(self.canonical_search().0);
        out
    }

    /// The vertex order realising [`ColouredQuiver::canonical`]: position
    /// `k` holds the original vertex placed `k`-th.
    pub fn canonical_order(&self) -> Vec<usize> {
        self.canonical_search().1
    }

    pub fn is_isomorphic(&self, other: &ColouredQuiver) -> bool {
        self.n == other.n && self.m == other.m && self.canonical() == other.canonical()
    }

    /// Whether the quiver is isomorphic to its arrow reversal.
    pub fn is_reflection_symmetric(&self) -> bool {
        self.is_isomorphic(&self.reverse())
    }

    /// Graphviz rendering. Without `full`, only colours `0..=m/2` are drawn;
    /// the duals are implied.
    pub fn to_dot(&self, full: bool) -> String {
        let mut s = String::from("digraph Q {\n");
        for v in 0..self.n {
            let _ = writeln!(s, "  {v};");
        }
        for (&(i, j), &(c, r)) in &self.arrows {
            if !full && (c > self.m / 2 || (2 * c == self.m && i > j)) {
                continue;
            }
            let label = if r > 1 {
                format!("({c}) x{r}")
            } else {
                format!("({c})")
            };
            let _ = writeln!(s, "  {i} -> {j} [label=\"{label}\"];");
        }
        s.push_str("}\n");
        s
    }
}

struct CanonSearch<'a> {
    q: &'a ColouredQuiver,
    cells: &'a [usize],
    slots: &'a [usize],
    order: Vec<usize>,
    used: Vec<bool>,
    current: Vec<u8>,
    best: Option<(Vec<u8>, Vec<usize>)>,
}

impl CanonSearch<'_> {
    fn step(&mut self) {
        let depth = self.order.len();
        if depth == self.q.n {
            let better = match &self.best {
                None => true,
                Some((b, _)) => self.current < *b,
            };
            if better {
                self.best = Some((self.current.clone(), self.order.clone()));
            }
            return;
        }
        let want = self.slots[depth];
        for v in 0..self.q.n {
            if self.used[v] || self.cells[v] != want {
                continue;
            }
            let mark = self.current.len();
            for &w in &self.order {
                self.current.extend(self.q.entry_code(v, w));
                self.current.extend(self.q.entry_code(w, v));
            }
            let prune = match &self.best {
                Some((b, _)) => self.current[..] > b[..self.current.len()],
                None => false,
            };
            if !prune {
                self.used[v] = true;
                self.order.push(v);
                self.step();
                self.order.pop();
                self.used[v] = false;
            }
            self.current.truncate(mark);
        }
    }
}
