use annulus_cluster::diagcat::{self, ARLabel};
use annulus_cluster::{Angulation, AnnulusConfig, ColouredQuiver, Diagonal};
use proptest::prelude::*;

fn config() -> impl Strategy<Value = AnnulusConfig> {
    (2i64..=4, 2i64..=4, 1i64..=3).prop_map(|(p, q, m)| AnnulusConfig::new(p, q, m).unwrap())
}

fn diagonal(cfg: AnnulusConfig) -> impl Strategy<Value = Diagonal> {
    let (mp, mq, m) = (cfg.outer_len(), cfg.inner_len(), cfg.m);
    prop_oneof![
        (0..mp, -4 * mq..4 * mq).prop_map(move |(u, v)| cfg.spanning(u, v)),
        (0..mp, 3..=mp + 1 + 2 * m).prop_map(move |(i, k)| cfg.outer(i, k)),
        (0..mq, 3..=mq + 1 + 2 * m).prop_map(move |(i, k)| cfg.inner(i, k)),
    ]
}

fn m_diagonal(cfg: AnnulusConfig) -> impl Strategy<Value = Diagonal> {
    let (mp, mq, m) = (cfg.outer_len(), cfg.inner_len(), cfg.m);
    prop_oneof![
        (0..mp, -4 * mq..4 * mq).prop_map(move |(u, v)| cfg.spanning(u, v + (u - v).rem_euclid(m))),
        (0..mp, 1..=4i64).prop_map(move |(i, j)| cfg.outer(i, j * m + 2)),
        (0..mq, 1..=4i64).prop_map(move |(i, j)| cfg.inner(i, j * m + 2)),
    ]
}

fn with_pair() -> impl Strategy<Value = (AnnulusConfig, Diagonal, Diagonal, i64)> {
    config().prop_flat_map(|c| (Just(c), diagonal(c), diagonal(c), -20i64..20))
}

fn with_m_diagonal() -> impl Strategy<Value = (AnnulusConfig, Diagonal, i64)> {
    config().prop_flat_map(|c| (Just(c), m_diagonal(c), -20i64..20))
}

/// An angulation reached from `Δ⁰` by a mutation walk.
fn angulation() -> impl Strategy<Value = Angulation> {
    config().prop_flat_map(|c| {
        let n = c.rank();
        proptest::collection::vec(0..n, 0..10).prop_map(move |walk| {
            walk.into_iter()
                .fold(Angulation::delta0(c), |a, j| a.mutate(j).unwrap())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn crossing_is_symmetric((c, a, b, _) in with_pair()) {
        prop_assert_eq!(c.crossing_number(&a, &b), c.crossing_number(&b, &a));
    }

    #[test]
    fn crossing_is_rotation_invariant((c, a, b, s) in with_pair()) {
        let e = c.crossing_number(&a, &b);
        prop_assert_eq!(c.crossing_number(&c.shift(&a, s), &c.shift(&b, s)), e);
        prop_assert_eq!(c.crossing_number(&c.rotate_outer(&a, s), &c.rotate_outer(&b, s)), e);
        prop_assert_eq!(c.crossing_number(&c.rotate_inner(&a, s), &c.rotate_inner(&b, s)), e);
    }

    #[test]
    fn flip_is_an_involutive_homeomorphism((c, a, b, _) in with_pair()) {
        let f = c.flipped();
        prop_assert_eq!(f.flip(&c.flip(&a)), a);
        prop_assert_eq!(f.crossing_number(&c.flip(&a), &c.flip(&b)), c.crossing_number(&a, &b));
        prop_assert_eq!(f.swap_boundaries(&c.swap_boundaries(&a)), a);
        prop_assert_eq!(
            f.crossing_number(&c.swap_boundaries(&a), &c.swap_boundaries(&b)),
            c.crossing_number(&a, &b)
        );
    }

    #[test]
    fn deck_transformation_is_invisible((c, a, b, t) in with_pair()) {
        if let Diagonal::Spanning { u, v } = a {
            let moved = c.spanning(u + t * c.outer_len(), v - t * c.inner_len());
            prop_assert_eq!(moved, a);
            prop_assert_eq!(c.crossing_number(&moved, &b), c.crossing_number(&a, &b));
        }
    }

    #[test]
    fn opposite_collars_are_disjoint((c, a, b, _) in with_pair()) {
        if matches!((a, b), (Diagonal::OuterPeripheral { .. }, Diagonal::InnerPeripheral { .. })) {
            prop_assert_eq!(c.crossing_number(&a, &b), 0);
        }
    }

    #[test]
    fn self_crossing_predicate((c, a, _, _) in with_pair()) {
        let bound = match a {
            Diagonal::OuterPeripheral { .. } => c.outer_len() + 1,
            Diagonal::InnerPeripheral { .. } => c.inner_len() + 1,
            Diagonal::Spanning { .. } => i64::MAX,
        };
        if let Diagonal::OuterPeripheral { k, .. } | Diagonal::InnerPeripheral { k, .. } = a {
            prop_assert_eq!(c.self_crosses(&a), k > bound);
            if k <= bound {
                prop_assert_eq!(c.crossing_number(&a, &a), 0);
            }
        }
    }

    #[test]
    fn levels_are_preserved((c, a, _) in with_m_diagonal()) {
        let level = c.level(&a).unwrap();
        prop_assert_eq!(c.level(&diagcat::tau(&a, &c)).unwrap(), level);
        for b in diagcat::elementary_moves(&a, &c).unwrap() {
            prop_assert_eq!(c.level(&b).unwrap(), level);
            prop_assert_eq!(b.is_spanning(), a.is_spanning());
        }
    }

    #[test]
    fn moves_are_translate_dual((c, a, s) in with_m_diagonal()) {
        for b in diagcat::elementary_moves(&a, &c).unwrap() {
            prop_assert!(diagcat::translate_dual_check(&a, &b, &c));
            let tb = diagcat::tau(&b, &c);
            prop_assert!(diagcat::elementary_moves(&tb, &c).unwrap().contains(&a));
        }
        let other = c.shift(&a, s);
        prop_assert!(diagcat::translate_dual_check(&a, &other, &c));
    }

    #[test]
    fn labels_commute_with_shift((c, a, s) in with_m_diagonal()) {
        let m = c.m;
        let before = diagcat::functor_label(&a, &c).unwrap();
        let after = diagcat::functor_label(&c.shift(&a, s), &c).unwrap();
        let expected = match before {
            ARLabel::Transjective { vertex, power, degree } => {
                let sigma = power * m + degree + s;
                ARLabel::Transjective { vertex, power: sigma.div_euclid(m), degree: sigma.rem_euclid(m) }
            }
            ARLabel::TubeP { index, length, degree } => ARLabel::TubeP {
                index: (index - (degree + s).div_euclid(m)).rem_euclid(c.p),
                length,
                degree: (degree + s).rem_euclid(m),
            },
            ARLabel::TubeQ { index, length, degree } => ARLabel::TubeQ {
                index: (index - (degree + s).div_euclid(m)).rem_euclid(c.q),
                length,
                degree: (degree + s).rem_euclid(m),
            },
        };
        prop_assert_eq!(after, expected);
    }

    #[test]
    fn transjective_labels_match_search((c, a, _) in with_m_diagonal()) {
        if let ARLabel::Transjective { vertex, power, degree } = diagcat::functor_label(&a, &c).unwrap() {
            // Search all shifts of all Δ⁰ diagonals over a range covering the window.
            let base = Angulation::delta0(c);
            let range = 12 * (c.outer_len() + c.inner_len());
            let hits: Vec<(usize, i64)> = base
                .diagonals()
                .iter()
                .enumerate()
                .flat_map(|(i, d)| (-range..=range).map(move |s| (i, s, *d)))
                .filter(|&(_, s, d)| c.shift(&d, s) == a)
                .map(|(i, s, _)| (i, s))
                .collect();
            prop_assert_eq!(hits, vec![(vertex, power * c.m + degree)]);
        }
    }

    #[test]
    fn mutation_is_invertible_and_periodic(a in angulation(), j in 0usize..16) {
        let j = j % a.diagonals().len();
        let b = a.mutate(j).unwrap();
        prop_assert_eq!(b.mutate_inverse(j).unwrap(), a.clone());
        let period = a.cfg().m as usize + 1;
        let back = (0..period).try_fold(a.clone(), |x, _| x.mutate(j)).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn quiver_of_mutation_is_mutated_quiver(a in angulation(), j in 0usize..16) {
        let j = j % a.diagonals().len();
        let q = a.quiver();
        prop_assert!(q.check_axioms().is_ok());
        prop_assert_eq!(a.mutate(j).unwrap().quiver(), q.mutate(j).unwrap());
    }

    #[test]
    fn canonical_forms_are_invariant(a in angulation(), i in -12i64..12, j in -12i64..12, perm_seed in any::<u64>()) {
        let key = a.canonical_form(false);
        let b = a.apply_symmetry(i, j, false).unwrap();
        prop_assert_eq!(b.canonical_form(false), key.clone());
        prop_assert_eq!(a.shift(i).canonical_form(false), key);
        if a.cfg().p == a.cfg().q {
            prop_assert_eq!(a.swap_boundaries().canonical_form(true), a.canonical_form(true));
        }
        let q = a.quiver();
        prop_assert_eq!(b.quiver(), q.clone());
        let perm = permutation(q.n(), perm_seed);
        prop_assert_eq!(q.permute(&perm).canonical(), q.canonical());
        prop_assert!(q.permute(&perm).is_isomorphic(&q));
    }

    #[test]
    fn flip_reverses_quiver(a in angulation()) {
        prop_assert_eq!(a.flip().quiver(), a.quiver().reverse());
        prop_assert_eq!(a.swap_boundaries().quiver(), a.quiver());
    }

    #[test]
    fn serialisation_round_trips(a in angulation()) {
        let text = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Angulation>(&text).unwrap(), a.clone());
        let q = a.quiver();
        let text = serde_json::to_string(&q).unwrap();
        prop_assert_eq!(serde_json::from_str::<ColouredQuiver>(&text).unwrap(), q);
    }
}

fn permutation(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    v
}
