use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::transition::{replay, NonBinarySystem, ReduceSet};
use crate::treebank::read_ptb;

const PUBLIC: &str =
    "(S (NP (DT The) (NN public)) (VP (VBZ is) (ADVP (RB still)) (ADJP (JJ cautious))) (. .))";

fn tree(s: &str) -> Tree {
    read_ptb(s).unwrap().remove(0)
}

/// Gold labels plus one distractor, any arity.
fn system_for(t: &Tree) -> NonBinarySystem {
    let mut labels: std::collections::BTreeSet<_> = crate::transition::tree_labels(t);
    labels.insert("Z".into());
    NonBinarySystem::new(ReduceSet::AnyArity(labels), 3)
}

fn at(t: &Tree, seq: &[Transition]) -> Configuration {
    replay(&system_for(t), t.tokens(), seq).unwrap()
}

use Transition::Shift;

#[test]
fn reachability_examples() {
    let t = tree(PUBLIC);
    let oracle = DynamicOracle::new(3);
    let c0 = at(&t, &[]);
    assert!(oracle.is_reachable(&c0, &Constituent::new("S", 0, 6)));
    let c = at(&t, &[Shift, Shift, Shift]);
    assert!(!oracle.is_reachable(&c, &Constituent::new("NP", 0, 2)));
    assert!(oracle.is_reachable(&c, &Constituent::new("VP", 2, 5)));
    assert!(oracle.is_reachable(&c, &Constituent::new("S", 0, 6)));
    assert!(oracle.is_reachable(&c, &Constituent::new("ADVP", 3, 4)));
}

#[test]
fn loss_examples_agree_with_exhaustive_search() {
    let t = tree(PUBLIC);
    let gold = GoldSet::from_tree(&t);
    let system = system_for(&t);
    let oracle = DynamicOracle::new(3);
    // Frozen values from the exhaustive search.
    let cases: [(&[Transition], usize); 3] = [
        (&[], 0),
        (&[Shift, Shift, Shift], 1),
        (&[Shift, Transition::reduce("NP", 1)], 1),
    ];
    for (seq, expected) in cases {
        let c = at(&t, seq);
        let brute = brute_force_min_loss(&system, &c, &gold, 100).unwrap();
        assert_eq!(brute, expected, "{seq:?}");
        assert_eq!(oracle.loss(&c, &gold), expected, "{seq:?}");
    }

    let report = oracle.report(&at(&t, &[Shift, Shift, Shift]), &gold);
    assert_eq!(report.unreachable, vec![Constituent::new("NP", 0, 2)]);
    assert!(report.false_positives.is_empty());
    assert_eq!(report.reachable.len(), 4);

    let report = oracle.report(&at(&t, &[Shift, Transition::reduce("NP", 1)]), &gold);
    assert_eq!(report.false_positives, vec![Constituent::new("NP", 0, 1)]);
    assert!(report.unreachable.is_empty());
    assert_eq!(report.loss, 1);
}

#[test]
fn exhaustive_search_on_completed_gold() {
    let t = tree(PUBLIC);
    let gold = GoldSet::from_tree(&t);
    let seq = crate::transition::static_oracle_nb(&t);
    let system = system_for(&t);
    // Everything built, Finish not yet applied.
    let c = at(&t, &seq[..seq.len() - 1]);
    assert_eq!(brute_force_min_loss(&system, &c, &gold, 100), Ok(0));
    assert_eq!(
        brute_force_min_loss(&system, &at(&t, &[]), &gold, 100),
        Ok(0)
    );
}

#[test]
fn depth_limit_is_reported() {
    let t = tree(PUBLIC);
    let gold = GoldSet::from_tree(&t);
    let system = system_for(&t);
    assert!(matches!(
        brute_force_min_loss(&system, &at(&t, &[]), &gold, 5),
        Err(LimitExceeded { .. })
    ));
}

#[test]
fn zero_cost_examples() {
    let t = tree(PUBLIC);
    let gold = GoldSet::from_tree(&t);
    let system = system_for(&t);
    let oracle = DynamicOracle::new(3);
    assert_eq!(
        oracle.zero_cost_transitions(&system, &at(&t, &[]), &gold),
        vec![Shift]
    );

    let seq = crate::transition::static_oracle_nb(&t);
    // Stack [NP, is, ADVP, ADJP], buffer [.].
    let c = at(&t, &seq[..8]);
    assert_eq!(
        oracle.zero_cost_transitions(&system, &c, &gold),
        vec![Transition::reduce("VP", 3)]
    );

    let c = at(&t, &[Shift, Shift]);
    assert_eq!(
        oracle.zero_cost_transitions(&system, &c, &gold),
        vec![Transition::reduce("NP", 2)]
    );
}

#[test]
fn repeated_unary_labels_are_a_multiset() {
    let t = tree("(X (X (A a)))");
    let gold = GoldSet::from_tree(&t);
    assert_eq!(gold.len(), 2);
    let system = system_for(&t);
    let oracle = DynamicOracle::new(3);
    let x1 = Transition::reduce("X", 1);
    let z1 = Transition::reduce("Z", 1);
    let cases: [&[Transition]; 4] = [
        &[Shift],
        &[Shift, x1.clone()],
        &[Shift, x1.clone(), z1.clone()],
        &[Shift, z1.clone(), z1.clone()],
    ];
    let expected = [0, 0, 1, 3];
    for (seq, want) in cases.iter().zip(expected) {
        let c = at(&t, seq);
        assert_eq!(
            brute_force_min_loss(&system, &c, &gold, 100),
            Ok(want),
            "{seq:?}"
        );
        assert_eq!(oracle.loss(&c, &gold), want, "{seq:?}");
    }
}

#[test]
fn exhausted_unary_budget_makes_top_span_unreachable() {
    let t = tree("(X (A a))");
    let gold = GoldSet::from_tree(&t);
    let system = system_for(&t);
    let oracle = DynamicOracle::new(3);
    let z1 = Transition::reduce("Z", 1);
    let c = at(&t, &[Shift, z1.clone(), z1.clone(), z1.clone()]);
    assert!(!oracle.is_reachable(&c, &Constituent::new("X", 0, 1)));
    assert_eq!(brute_force_min_loss(&system, &c, &gold, 100), Ok(4));
    assert_eq!(oracle.loss(&c, &gold), 4);
    assert_eq!(
        oracle.zero_cost_transitions(&system, &c, &gold),
        vec![Transition::Finish]
    );
}

/// Random walks over the full transition space, checking the closed form
/// against the search, the look-ahead route against applying, and loss
/// monotonicity.
#[test]
fn random_walks_agree_three_ways() {
    let trees = [
        PUBLIC,
        "(S (A a) (B b) (C c))",
        "(S (NP (A a)) (VP (B b) (NP (C c) (D d))))",
        "(X (Y (X (A a) (B b))) (C c))",
        "(S (S (A a)))",
    ];
    let oracle = DynamicOracle::new(3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in trees {
        let t = tree(s);
        let gold = GoldSet::from_tree(&t);
        let system = system_for(&t);
        let mut brute = BruteForce::new(&system, &gold);
        for _ in 0..40 {
            let mut c = Configuration::initial(t.tokens()).unwrap();
            while !c.is_finished() {
                let loss = oracle.loss(&c, &gold);
                assert_eq!(brute.min_loss(&c, 200), Ok(loss), "{s}: {c:?}");
                let legal = system.legal_transitions(&c);
                assert!(!oracle.zero_cost_transitions(&system, &c, &gold).is_empty());
                let step = legal.choose(&mut rng).unwrap().clone();
                let ahead = oracle.loss_after(&c, &gold, &step);
                c = system.apply(&c, &step).unwrap();
                let after = if c.is_finished() {
                    let mut built = HashMap::new();
                    for n in c.built() {
                        *built.entry(n.constituent()).or_insert(0) += 1;
                    }
                    hamming_loss(&built, &gold)
                } else {
                    oracle.loss(&c, &gold)
                };
                assert_eq!(ahead, after, "{s}: {step}");
                assert!(after >= loss);
            }
        }
    }
}

#[test]
fn disabled_stack_condition_is_caught() {
    let t = tree(PUBLIC);
    let gold = GoldSet::from_tree(&t);
    let system = system_for(&t);
    let faulty = DynamicOracle::new(3).with_conditions(Conditions {
        stack_anchored: false,
        ..Conditions::default()
    });
    let c = at(&t, &[Shift, Shift, Shift]);
    assert_ne!(
        faulty.loss(&c, &gold),
        brute_force_min_loss(&system, &c, &gold, 100).unwrap()
    );
}

#[test]
fn gold_set_validation() {
    assert!(GoldSet::from_constituents([Constituent::new("A", 0, 3)], 2).is_err());
    assert!(GoldSet::from_constituents(
        [Constituent::new("A", 0, 2), Constituent::new("B", 1, 3)],
        3
    )
    .is_err());
    let g = GoldSet::from_constituents(
        [
            Constituent::new("A", 0, 2),
            Constituent::new("A", 0, 2),
            Constituent::new("B", 0, 3),
        ],
        3,
    )
    .unwrap();
    assert_eq!(g.len(), 3);
    assert_eq!(g.count(&Constituent::new("A", 0, 2)), 2);
}
