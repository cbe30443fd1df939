use annulus_cluster::mutclass::{self, ClassDatabase, ClassError, DEFAULT_CLASS_LIMIT};
use annulus_cluster::{Angulation, AnnulusConfig, ColouredQuiver};
use std::collections::BTreeSet;

fn cfg(p: i64, q: i64, m: i64) -> AnnulusConfig {
    AnnulusConfig::new(p, q, m).unwrap()
}

#[test]
fn classes_are_closed_under_mutation() {
    for (c, flip) in [(cfg(3, 2, 2), false), (cfg(2, 2, 2), true)] {
        let db = mutclass::enumerate_angulation_classes(c, flip, DEFAULT_CLASS_LIMIT).unwrap();
        for (_, a) in db.iter() {
            for j in 0..a.diagonals().len() {
                assert!(db.contains(&a.mutate(j).unwrap().canonical_form(flip)));
            }
        }
        let qdb = mutclass::enumerate_quiver_classes(c, DEFAULT_CLASS_LIMIT).unwrap();
        for (_, q) in qdb.iter() {
            for j in 0..q.n() {
                assert!(qdb.contains(&q.mutate(j).unwrap().canonical()));
            }
        }
    }
}

/// A plain sequential search from a different start, as an order
/// independent oracle for the class set.
fn sequential_classes(start: Angulation, flip: bool) -> BTreeSet<Vec<u8>> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![start];
    while let Some(a) = stack.pop() {
        if seen.insert(a.canonical_form(flip)) {
            for j in (0..a.diagonals().len()).rev() {
                stack.push(a.mutate(j).unwrap());
            }
        }
    }
    seen
}

#[test]
fn search_order_does_not_matter() {
    for (c, flip) in [
        (cfg(3, 2, 1), false),
        (cfg(3, 3, 1), true),
        (cfg(2, 2, 3), true),
    ] {
        let db = mutclass::enumerate_angulation_classes(c, flip, DEFAULT_CLASS_LIMIT).unwrap();
        let bfs: BTreeSet<Vec<u8>> = db.iter().map(|(k, _)| k.to_vec()).collect();
        let start = Angulation::delta0(c).mutate(1).unwrap().mutate(0).unwrap();
        assert_eq!(bfs, sequential_classes(start, flip));
        let again = mutclass::enumerate_angulation_classes(c, flip, DEFAULT_CLASS_LIMIT).unwrap();
        let order: Vec<_> = again.iter().map(|(k, _)| k.to_vec()).collect();
        assert_eq!(
            order,
            db.iter().map(|(k, _)| k.to_vec()).collect::<Vec<_>>()
        );
    }
}

#[test]
fn flip_versus_rotation_counts() {
    let count = |p, q, m, flip| {
        mutclass::enumerate_angulation_classes(cfg(p, q, m), flip, DEFAULT_CLASS_LIMIT)
            .unwrap()
            .len()
    };
    assert_eq!(count(2, 2, 1, false), 5);
    assert_eq!(count(2, 2, 1, true), 4);
    assert_eq!(count(3, 2, 1, false), 12);
    assert_eq!(count(3, 2, 1, true), 12);
    assert_eq!(count(2, 2, 2, true), 15);
    let quivers = mutclass::enumerate_quiver_classes(cfg(2, 2, 2), DEFAULT_CLASS_LIMIT).unwrap();
    assert_eq!(quivers.len(), 15);
}

#[test]
fn limit_is_enforced() {
    let err = mutclass::enumerate_angulation_classes(cfg(3, 2, 2), false, 10).unwrap_err();
    assert!(matches!(err, ClassError::LimitExceeded(10)));
    let err = mutclass::enumerate_quiver_classes(cfg(3, 2, 2), 10).unwrap_err();
    assert!(matches!(err, ClassError::LimitExceeded(10)));
}

#[test]
fn databases_round_trip() {
    let c = cfg(3, 2, 1);
    let dir = tempfile::tempdir().unwrap();
    let db = mutclass::enumerate_angulation_classes(c, false, DEFAULT_CLASS_LIMIT).unwrap();
    let path = dir.path().join("a.jsonl");
    db.save(&path).unwrap();
    let back: ClassDatabase<Angulation> = ClassDatabase::load(&path).unwrap();
    assert_eq!(back.len(), db.len());
    for ((k1, a1), (k2, a2)) in db.iter().zip(back.iter()) {
        assert_eq!((k1, a1), (k2, a2));
    }
    let qdb = mutclass::enumerate_quiver_classes(c, DEFAULT_CLASS_LIMIT).unwrap();
    let path = dir.path().join("q.jsonl");
    qdb.save(&path).unwrap();
    let back: ClassDatabase<ColouredQuiver> = ClassDatabase::load(&path).unwrap();
    assert_eq!(back.len(), qdb.len());
}

#[test]
fn summary_report() {
    let r = mutclass::summarize(cfg(2, 2, 1), true, DEFAULT_CLASS_LIMIT, 10, 3).unwrap();
    assert!(r.pass());
    assert_eq!(r.bijection, "pass");
    let r = mutclass::summarize(cfg(2, 2, 1), false, DEFAULT_CLASS_LIMIT, 10, 3).unwrap();
    assert_eq!(r.bijection, "skipped");
    assert_eq!(r.counts.angulation_classes, 5);
    assert!(r.pass());
    let r = mutclass::summarize(cfg(2, 2, 2), true, DEFAULT_CLASS_LIMIT, 10, 3).unwrap();
    assert!(r.formula.is_none() && r.pass());
}
