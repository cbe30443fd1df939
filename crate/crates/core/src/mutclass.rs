//! Mutation classes: breadth-first enumeration on the angulation side and
//! the quiver side, the induced map between them, and closed-form counts.

use crate::angulation::Angulation;
use crate::geometry::AnnulusConfig;
use crate::quiver::ColouredQuiver;
use num_integer::{binomial, Integer};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;
use thiserror::Error;

pub const DEFAULT_CLASS_LIMIT: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum ClassError {
    #[error("class count exceeded the limit of {0}")]
    LimitExceeded(usize),
    #[error("mutation failed: {0}")]
    Mutation(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad database line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Classes found by a breadth-first search, each with a witness, in
/// discovery order.
#[derive(Debug, Clone)]
pub struct ClassDatabase<T> {
    classes: Vec<(Vec<u8>, T)>,
    index: HashMap<Vec<u8>, usize>,
    /// Mutation adjacency `(class, position, class)`.
    pub edges: Vec<(usize, usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct Line<T> {
    canonical: String,
    witness: T,
}

impl<T> ClassDatabase<T> {
    fn new() -> Self {
        ClassDatabase {
            classes: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
        }
    }

    fn insert(&mut self, key: Vec<u8>, witness: T) -> (usize, bool) {
        if let Some(&i) = self.index.get(&key) {
            return (i, false);
        }
        let i = self.classes.len();
        self.index.insert(key.clone(), i);
        self.classes.push((key, witness));
        (i, true)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, key: &[u8]) -> bool {
        self.index.contains_key(key)
    }

    pub fn position(&self, key: &[u8]) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u8], &T)> {
        self.classes.iter().map(|(k, w)| (k.as_slice(), w))
    }

    pub fn witness(&self, i: usize) -> &T {
        &self.classes[i].1
    }
}

impl<T: Serialize + DeserializeOwned> ClassDatabase<T> {
    /// One JSON object per line: `{"canonical": hex, "witness": ...}`.
    pub fn write_jsonl(&self, mut out: impl Write) -> std::io::Result<()> {
        for (key, w) in &self.classes {
            let line = Line {
                canonical: hex::encode(key),
                witness: w,
            };
            serde_json::to_writer(&mut out, &line)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), ClassError> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_jsonl(f)?;
        Ok(())
    }

    /// Reads a database written by [`ClassDatabase::write_jsonl`]. Edges
    /// are not persisted.
    pub fn read_jsonl(input: impl BufRead) -> Result<Self, ClassError> {
        let mut db = ClassDatabase::new();
        for (n, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed: Line<T> = serde_json::from_str(&line).map_err(|e| ClassError::Parse {
                line: n + 1,
                msg: e.to_string(),
            })?;
            let key = hex::decode(&parsed.canonical).map_err(|e| ClassError::Parse {
                line: n + 1,
                msg: e.to_string(),
            })?;
            db.insert(key, parsed.witness);
        }
        Ok(db)
    }

    pub fn load(path: &Path) -> Result<Self, ClassError> {
        Self::read_jsonl(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

/// Level-synchronous search. Successors of a level are computed in
/// parallel and inserted in a fixed order, so the result does not depend
/// on the schedule.
fn bfs<T, K, S>(start: T, key: K, succ: S, limit: usize) -> Result<ClassDatabase<T>, ClassError>
where
    T: Clone + Send + Sync,
    K: Fn(&T) -> Vec<u8> + Sync,
    S: Fn(&T) -> Result<Vec<T>, String> + Sync,
{
    let mut db = ClassDatabase::new();
    db.insert(key(&start), start);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let expanded: Vec<Result<Vec<(Vec<u8>, T)>, String>> = frontier
            .par_iter()
            .map(|&i| {
                succ(&db.classes[i].1).map(|ys| ys.into_iter().map(|y| (key(&y), y)).collect())
            })
            .collect();
        let mut next = Vec::new();
        for (&from, result) in frontier.iter().zip(expanded) {
            for (pos, (k, y)) in result
                .map_err(ClassError::Mutation)?
                .into_iter()
                .enumerate()
            {
                let (to, fresh) = db.insert(k, y);
                db.edges.push((from, pos, to));
                if fresh {
                    if db.len() > limit {
                        return Err(ClassError::LimitExceeded(limit));
                    }
                    next.push(to);
                }
            }
        }
        frontier = next;
    }
    Ok(db)
}

/// Angulation classes reachable from `Δ⁰`, up to rotation (and the
/// boundary swap when `use_flip` and `p = q`).
pub fn enumerate_angulation_classes(
    cfg: AnnulusConfig,
    use_flip: bool,
    limit: usize,
) -> Result<ClassDatabase<Angulation>, ClassError> {
    bfs(
        Angulation::delta0(cfg),
        |a| a.canonical_form(use_flip),
        |a| {
            (0..a.diagonals().len())
                .map(|j| a.mutate(j).map_err(|e| e.to_string()))
                .collect()
        },
        limit,
    )
}

/// Quiver classes (up to isomorphism) in the mutation class of `Q_{Δ⁰}`.
pub fn enumerate_quiver_classes(
    cfg: AnnulusConfig,
    limit: usize,
) -> Result<ClassDatabase<ColouredQuiver>, ClassError> {
    bfs(
        Angulation::delta0(cfg).quiver(),
        ColouredQuiver::canonical,
        |q| {
            (0..q.n())
                .map(|j| q.mutate(j).map_err(|e| e.to_string()))
                .collect()
        },
        limit,
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionReport {
    pub angulation_classes: usize,
    pub quiver_classes: usize,
    /// Witness indices whose quiver changed under a sampled symmetry.
    pub not_well_defined: Vec<usize>,
    /// Pairs of angulation classes with isomorphic quivers.
    pub collisions: Vec<(usize, usize)>,
    /// Angulation classes whose quiver is not in the quiver database.
    pub outside_image: Vec<usize>,
    /// Quiver classes not hit.
    pub missed: usize,
    pub pass: bool,
}

/// Checks that `Δ ↦ Q_Δ` induces a bijection between the two databases.
/// Well-definedness is sampled with `samples` random symmetries per
/// witness, drawn from `seed`.
pub fn verify_bijection(
    angulations: &ClassDatabase<Angulation>,
    quivers: &ClassDatabase<ColouredQuiver>,
    use_flip: bool,
    samples: usize,
    seed: u64,
) -> BijectionReport {
    let keys: Vec<Vec<u8>> = angulations
        .iter()
        .map(|(_, a)| a.quiver().canonical())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut not_well_defined = Vec::new();
    for (idx, (_, a)) in angulations.iter().enumerate() {
        let span = 2 * (a.cfg().outer_len() + a.cfg().inner_len());
        for _ in 0..samples {
            let i = rng.gen_range(-span..=span);
            let j = rng.gen_range(-span..=span);
            let swap = use_flip && a.cfg().p == a.cfg().q && rng.gen_bool(0.5);
            let base = if swap { a.swap_boundaries() } else { a.clone() };
            let ok = base
                .apply_symmetry(i, j, false)
                .map(|b| b.quiver().canonical() == keys[idx])
                .unwrap_or(false);
            if !ok {
                not_well_defined.push(idx);
                break;
            }
        }
    }
    let mut first: HashMap<&[u8], usize> = HashMap::new();
    let mut collisions = Vec::new();
    let mut outside_image = Vec::new();
    for (idx, key) in keys.iter().enumerate() {
        if let Some(&prev) = first.get(key.as_slice()) {
            collisions.push((prev, idx));
        } else {
            first.insert(key, idx);
        }
        if !quivers.contains(key) {
            outside_image.push(idx);
        }
    }
    let missed = quivers
        .iter()
        .filter(|(k, _)| !first.contains_key(k))
        .count();
    let pass = not_well_defined.is_empty()
        && collisions.is_empty()
        && outside_image.is_empty()
        && missed == 0;
    BijectionReport {
        angulation_classes: angulations.len(),
        quiver_classes: quivers.len(),
        not_well_defined,
        collisions,
        outside_image,
        missed,
        pass,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("need p, q ≥ 2")]
    BadParameters,
    #[error("formula gives the non-integer {num}/{den}")]
    NotInteger { num: u128, den: u128 },
}

fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// Number of triangulations of `P_{p,q}` up to rotation, and with
/// `with_flip` and `p = q` also up to the boundary exchange.
pub fn closed_form_count(p: u64, q: u64, with_flip: bool) -> Result<u128, FormulaError> {
    if p < 2 || q < 2 {
        return Err(FormulaError::BadParameters);
    }
    let c = |n: u64, k: u64| binomial(n as u128, k as u128);
    let g = p.gcd(&q);
    let sum: u128 = (1..=g)
        .filter(|k| g.is_multiple_of(*k))
        .map(|k| totient(k) as u128 * c(2 * p / k, p / k) * c(2 * q / k, q / k))
        .sum();
    let (num, den) = if with_flip && p == q {
        (2 * p as u128 * c(2 * p, p) + sum, 8 * p as u128)
    } else {
        (sum, 2 * (p + q) as u128)
    };
    if num % den != 0 {
        return Err(FormulaError::NotInteger { num, den });
    }
    Ok(num / den)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormulaCheck {
    pub value: Option<u128>,
    pub bfs: usize,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Counts {
    pub angulation_classes: usize,
    pub quiver_classes: usize,
}

/// Summary written by `annulus enumerate`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryReport {
    pub p: i64,
    pub q: i64,
    pub m: i64,
    pub use_flip: bool,
    pub counts: Counts,
    pub bijection: String,
    pub bijection_detail: BijectionReport,
    pub formula: Option<FormulaCheck>,
}

impl SummaryReport {
    pub fn pass(&self) -> bool {
        self.bijection != "fail" && self.formula.as_ref().is_none_or(|f| f.matches)
    }
}

/// Runs both searches, the bijection check and (for `m = 1`) the formula.
/// For `p = q` without `use_flip` the map is not injective, so the
/// bijection verdict is `"skipped"`.
pub fn summarize(
    cfg: AnnulusConfig,
    use_flip: bool,
    limit: usize,
    samples: usize,
    seed: u64,
) -> Result<SummaryReport, ClassError> {
    let ang = enumerate_angulation_classes(cfg, use_flip, limit)?;
    let quiv = enumerate_quiver_classes(cfg, limit)?;
    let detail = verify_bijection(&ang, &quiv, use_flip, samples, seed);
    let formula = (cfg.m == 1).then(|| {
        let value = closed_form_count(cfg.p as u64, cfg.q as u64, use_flip).ok();
        FormulaCheck {
            value,
            bfs: ang.len(),
            matches: value == Some(ang.len() as u128),
        }
    });
    let verdict = if !use_flip && cfg.p == cfg.q {
        "skipped"
    } else if detail.pass {
        "pass"
    } else {
        "fail"
    };
    Ok(SummaryReport {
        p: cfg.p,
        q: cfg.q,
        m: cfg.m,
        use_flip,
        counts: Counts {
            angulation_classes: ang.len(),
            quiver_classes: quiv.len(),
        },
        bijection: verdict.to_string(),
        bijection_detail: detail,
        formula,
    })
}
