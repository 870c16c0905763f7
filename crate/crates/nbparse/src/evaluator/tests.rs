use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::synth::{random_tree, Shape};
use crate::trainer::{train_static, TrainConfig};
use crate::transition::has_wide_node;
use crate::treebank::read_ptb;

const PUBLIC: &str =
    "(S (NP (DT The) (NN public)) (VP (VBZ is) (ADVP (RB still)) (ADJP (JJ cautious))) (. .))";

fn trees(s: &str) -> Vec<Tree> {
    read_ptb(s).unwrap()
}

#[test]
fn identical_trees_score_100() {
    let g = trees(PUBLIC);
    let r = evaluate(&g, &g).unwrap();
    assert_eq!((r.precision(), r.recall(), r.f1()), (100.0, 100.0, 100.0));
    assert_eq!(r.exact, 1);
    assert_eq!(r.brackets.matched, 5);
}

#[test]
fn missing_bracket_lowers_recall() {
    let g = trees(PUBLIC);
    // ADVP dropped: four brackets, all correct.
    let p =
        trees("(S (NP (DT The) (NN public)) (VP (VBZ is) (RB still) (ADJP (JJ cautious))) (. .))");
    let r = evaluate(&g, &p).unwrap();
    assert_eq!(r.precision(), 100.0);
    assert_eq!(r.recall(), 80.0);
    assert!((r.f1() - 2.0 * 100.0 * 80.0 / 180.0).abs() < 1e-9);
    assert!((r.f1() - 88.888_888_9).abs() < 1e-6);

    let swapped = evaluate(&p, &g).unwrap();
    assert_eq!(swapped.precision(), r.recall());
    assert_eq!(swapped.recall(), r.precision());
}

#[test]
fn brackets_are_a_multiset() {
    let g = trees("(X (X (A a)))");
    let p = trees("(X (A a))");
    let r = evaluate(&g, &p).unwrap();
    assert_eq!(
        r.brackets,
        Scores {
            matched: 1,
            gold: 2,
            predicted: 1
        }
    );
}

#[test]
fn no_overlap_gives_zero() {
    let r = evaluate(&trees("(X (A a) (B b))"), &trees("(Y (A a) (B b))")).unwrap();
    assert_eq!(r.f1(), 0.0);
    assert_eq!(Scores::default().f1(), 0.0);
}

#[test]
fn token_count_mismatch_names_the_sentence() {
    let g = trees("(X (A a)) (X (A a) (B b))");
    let p = trees("(X (A a)) (X (A a))");
    match evaluate(&g, &p) {
        Err(Error::Mismatch { index, .. }) => assert_eq!(index, 1),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        evaluate(&g, &p[..1]),
        Err(Error::Mismatch { index: 1, .. })
    ));
}

#[test]
fn arity_buckets() {
    let g = trees(PUBLIC);
    let by = arity_f1(&g, &g).unwrap();
    assert_eq!(by.keys().copied().collect::<Vec<_>>(), vec![1, 2, 3]);
    assert!(by.values().all(|s| s.f1() == 100.0));
    assert_eq!(by[&3].gold, 2);

    let g = trees("(X (A a) (B b) (C c))");
    let p = trees("(X (Y (A a) (B b)) (C c))");
    let by = arity_f1(&g, &p).unwrap();
    assert_eq!(by[&3].recall(), 0.0);
    assert_eq!(by[&2].predicted, 2);

    let wide = trees("(X (A a) (B b) (C c) (D d) (E e) (F f))");
    assert_eq!(
        arity_f1(&wide, &wide)
            .unwrap()
            .keys()
            .copied()
            .collect::<Vec<_>>(),
        vec![5]
    );
}

#[test]
fn arity_matches_never_exceed_total() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let shape = Shape::new(9, &["A", "B"]);
    for _ in 0..200 {
        let g = vec![random_tree(&mut rng, &shape)];
        let mut p = vec![random_tree(&mut rng, &shape)];
        if p[0].len() != g[0].len() {
            p = g.clone();
        }
        let total = evaluate(&g, &p).unwrap().brackets.matched;
        let by: usize = arity_f1(&g, &p).unwrap().values().map(|s| s.matched).sum();
        assert!(by <= total);
        let same: usize = arity_f1(&g, &g).unwrap().values().map(|s| s.matched).sum();
        assert_eq!(same, evaluate(&g, &g).unwrap().brackets.matched);
    }
}

#[test]
fn transition_stats() {
    let rules = HeadRules::english();
    let s = stats(&trees(PUBLIC), &rules).unwrap();
    assert_eq!(s.nonbinary_mean(), 12.0);
    assert_eq!(s.binary_mean(), 14.0);
    assert_eq!(
        stats(&trees("(X (A a))"), &rules).unwrap().nonbinary_mean(),
        3.0
    );
    assert_eq!(stats(&[], &rules).unwrap().nonbinary_mean(), 0.0);
}

#[test]
fn nonbinary_never_longer() {
    let rules = HeadRules::english();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let shape = Shape::new(15, &["A", "B", "C"]);
    for _ in 0..200 {
        let t = random_tree(&mut rng, &shape);
        let s = stats(std::slice::from_ref(&t), &rules).unwrap();
        let (nb, bin) = s.per_sentence[0];
        assert!(nb <= bin);
        assert_eq!(nb < bin, has_wide_node(&t));
    }
}

#[test]
fn fit_of_a_line() {
    let f = linear_fit(&[(1.0, 3.0), (2.0, 5.0), (4.0, 9.0)]).unwrap();
    assert!((f.slope - 2.0).abs() < 1e-12);
    assert!((f.intercept - 1.0).abs() < 1e-12);
    assert!((f.r_squared - 1.0).abs() < 1e-12);
    assert!(linear_fit(&[(1.0, 1.0)]).is_none());
    assert!(linear_fit(&[(1.0, 1.0), (1.0, 2.0)]).is_none());
}

#[test]
fn timing_records() {
    let g = trees(PUBLIC);
    let (model, _) = train_static(
        &g,
        &TrainConfig {
            epochs: 1,
            ..Default::default()
        },
    )
    .unwrap();
    let empty = timing_profile(&model, &[]).unwrap();
    assert!(empty.records.is_empty());
    assert!(empty.fit.is_none());
    let s = g[0].tokens();
    let p = timing_profile(&model, &[s.clone(), s]).unwrap();
    assert_eq!(p.records.len(), 2);
    assert_eq!(p.records[0].length, p.records[1].length);
    assert_eq!(p.records[0].transitions, p.records[1].transitions);
    assert_eq!(p.records().len(), 2);
}
