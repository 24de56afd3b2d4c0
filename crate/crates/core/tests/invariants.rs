//! Randomized invariants over small signatures, maps and species.

use std::collections::HashSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polyana::em::{burnside_count, em_eval, random_species};
use polyana::finset::{coequalize, compose, FinMap};
use polyana::io;
use polyana::monads::{apply_monad, eta, mu, Bounds, MonadTag};
use polyana::operads::{comb, TermTree};
use polyana::signatures::{act, tensor, Colours, Op, Signature, Slice};

fn signature() -> impl Strategy<Value = Signature> {
    (1usize..=2)
        .prop_flat_map(|k| {
            let op = (0..k, proptest::collection::vec(0..k, 0..=3));
            (Just(k), proptest::collection::vec(op, 0..=3))
        })
        .prop_map(|(k, ops)| {
            let mut seen = HashSet::new();
            let ops = ops
                .into_iter()
                .enumerate()
                .filter(|(_, t)| seen.insert(t.clone()))
                .map(|(i, (out, ins))| Op::atom(&format!("o{i}"), out, ins))
                .collect();
            Signature::new(Colours::numbered(k), ops).unwrap()
        })
}

fn fin_map(m: usize, n: usize) -> impl Strategy<Value = FinMap> {
    proptest::collection::vec(0..n.max(1), m).prop_map(move |v| FinMap::new(n, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signature_documents_round_trip(a in signature()) {
        let text = io::render(&io::signature_doc(&a));
        let back = io::signature_from_doc(&io::parse(&text).unwrap()).unwrap();
        prop_assert_eq!(io::render(&io::signature_doc(&back)), text);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn action_of_tensor_is_iterated_action(
        a in signature(),
        b in signature(),
        sizes in proptest::collection::vec(0usize..=2, 2),
    ) {
        prop_assume!(a.colours() == b.colours());
        let x = Slice::with_sizes(a.colours(), &sizes[..a.colours().len()]);
        let lhs = act(&tensor(&a, &b).unwrap(), &x).unwrap();
        let rhs = act(&a, &act(&b, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs.fibre_sizes(), rhs.fibre_sizes());
    }

    #[test]
    fn tensor_is_associative_on_sizes(a in signature(), b in signature(), c in signature()) {
        prop_assume!(a.colours() == b.colours() && b.colours() == c.colours());
        let ab_c = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
        let a_bc = tensor(&a, &tensor(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c.arity_counts(), a_bc.arity_counts());
    }

    #[test]
    fn finite_maps_compose_associatively(
        f in fin_map(3, 3),
        g in fin_map(3, 2),
        h in fin_map(2, 4),
    ) {
        let left = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn coequalizer_classes_are_components(
        n in 1usize..8,
        pairs in proptest::collection::vec((0usize..8, 0usize..8), 0..8),
    ) {
        let pairs: Vec<(usize, usize)> =
            pairs.into_iter().filter(|&(i, j)| i < n && j < n).collect();
        let p = coequalize(n, &pairs).unwrap();
        // Components by repeated relaxation of least labels.
        let mut label: Vec<usize> = (0..n).collect();
        loop {
            let mut changed = false;
            for &(i, j) in &pairs {
                let m = label[i].min(label[j]);
                for k in [i, j] {
                    if label[k] != m {
                        label[k] = m;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let components: HashSet<usize> = label.iter().copied().collect();
        prop_assert_eq!(p.class_count(), components.len());
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(p.same_class(i, j), label[i] == label[j]);
            }
        }
    }

    #[test]
    fn unit_then_multiplication_is_identity(a in signature(), tag in 0usize..3) {
        let tag = [MonadTag::F, MonadTag::S, MonadTag::R][tag];
        for d in apply_monad(tag, &a, Bounds::new(3)).ops() {
            prop_assert_eq!(&mu(&eta(d)).unwrap(), d);
        }
    }

    #[test]
    fn species_evaluation_matches_fixed_point_count(seed in any::<u64>(), v in 0usize..=3) {
        let x = random_species(&mut ChaCha8Rng::seed_from_u64(seed), 3, 2);
        let classes = em_eval(&x, &Slice::with_sizes(&Colours::single(), &[v])).unwrap();
        prop_assert_eq!(classes.len(), burnside_count(&x, v).unwrap());
    }

    #[test]
    fn combing_keeps_leaves_and_nodes(perm in Just(()).prop_flat_map(|_| {
        proptest::sample::select(vec![vec![0, 1], vec![1, 0]])
    }), inner in proptest::sample::select(vec![vec![0, 1], vec![1, 0]]), left in any::<bool>()) {
        let m = Op::atom("m", 0, vec![0, 0]);
        let dec = |xi: &Vec<usize>| {
            polyana::monads::decorate(&m, FinMap::new(2, xi.clone()).unwrap(), vec![0, 0]).unwrap()
        };
        let node = TermTree::node(&dec(&inner), vec![TermTree::Leaf(0), TermTree::Leaf(0)]).unwrap();
        let children = if left {
            vec![node, TermTree::Leaf(0)]
        } else {
            vec![TermTree::Leaf(0), node]
        };
        let t = TermTree::node(&dec(&perm), children).unwrap();
        let (plain, lambda) = comb(&t).unwrap();
        prop_assert_eq!(plain.leaf_count(), t.leaf_count());
        prop_assert_eq!(plain.node_count(), t.node_count());
        prop_assert!(lambda.is_bijection());
        prop_assert_eq!(lambda.source_size(), 3);
    }
}
