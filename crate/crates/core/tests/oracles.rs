//! Counts computed by independent closed forms, frozen after agreeing with
//! the constructions.

use polyana::em::{
    burnside_count, em_eval, free_algebra, linton_tensor, random_species, trivial_species,
};
use polyana::finset::{enumerate_homs, HomKind};
use polyana::kleisli::enumerate_kleisli;
use polyana::monads::{apply_monad, Bounds, MonadTag};
use polyana::operads::{enumerate_trees, TreeBounds};
use polyana::signatures::{
    act, signature_family, tensor, Colours, FamilyBounds, Op, Signature, Slice,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Surjections from a `k`-set onto an `n`-set, by inclusion-exclusion.
fn surjections(k: usize, n: usize) -> usize {
    let mut total: i64 = 0;
    for j in 0..=n {
        let term = (binomial(n, j) as i64) * ((n - j) as i64).pow(k as u32);
        total += if j % 2 == 0 { term } else { -term };
    }
    total as usize
}

fn one_colour(arities: &[usize]) -> Signature {
    let ops = arities
        .iter()
        .enumerate()
        .map(|(i, &n)| Op::atom(&format!("a{i}"), 0, vec![0; n]))
        .collect();
    Signature::new(Colours::single(), ops).unwrap()
}

#[test]
fn hom_counts_match_closed_forms() {
    for m in 0..=4 {
        for n in 0..=4 {
            assert_eq!(enumerate_homs(HomKind::All, m, n).len(), n.pow(m as u32));
            assert_eq!(
                enumerate_homs(HomKind::Surjections, m, n).len(),
                surjections(m, n)
            );
            let bij = if m == n { factorial(n) } else { 0 };
            assert_eq!(enumerate_homs(HomKind::Bijections, m, n).len(), bij);
        }
    }
}

#[test]
fn monad_sizes_on_one_colour() {
    let bound = 3;
    for arities in [vec![0], vec![1], vec![2], vec![3], vec![0, 2], vec![1, 3]] {
        let a = one_colour(&arities);
        let s: usize = arities.iter().map(|&n| factorial(n)).sum();
        let r: usize = arities
            .iter()
            .map(|&k| (0..=bound).map(|n| surjections(k, n)).sum::<usize>())
            .sum();
        let f: usize = arities
            .iter()
            .map(|&k| (0..=bound).map(|n| n.pow(k as u32)).sum::<usize>())
            .sum();
        let b = Bounds::new(bound);
        assert_eq!(apply_monad(MonadTag::S, &a, b).len(), s, "S on {arities:?}");
        assert_eq!(apply_monad(MonadTag::R, &a, b).len(), r, "R on {arities:?}");
        assert_eq!(apply_monad(MonadTag::F, &a, b).len(), f, "F on {arities:?}");
    }
}

/// Arity counts of `A ⊗ B` over one colour: compose the counting series.
fn tensor_counts(a: &Signature, b: &Signature) -> Vec<usize> {
    let bc = b.arity_counts();
    let max = a.max_arity() * b.max_arity().max(1) + 1;
    let mut out = vec![0; max + 1];
    for op in a.ops() {
        let mut ways = vec![0usize; max + 1];
        ways[0] = 1;
        for _ in 0..op.arity() {
            let mut next = vec![0usize; max + 1];
            for (n, &w) in ways.iter().enumerate() {
                for (&k, &c) in &bc {
                    if n + k <= max {
                        next[n + k] += w * c;
                    }
                }
            }
            ways = next;
        }
        for (n, w) in ways.into_iter().enumerate() {
            out[n] += w;
        }
    }
    out
}

#[test]
fn tensor_arity_counts_compose_series() {
    let family = signature_family(FamilyBounds {
        max_ops: 2,
        max_arity: 3,
        max_colours: 1,
    });
    for a in &family {
        for b in &family {
            let t = tensor(a, b).unwrap();
            let want = tensor_counts(a, b);
            let got = t.arity_counts();
            for (n, &w) in want.iter().enumerate() {
                assert_eq!(
                    got.get(&n).copied().unwrap_or(0),
                    w,
                    "{a:?} ⊗ {b:?} at arity {n}"
                );
            }
        }
    }
}

#[test]
fn action_size_is_sum_of_products() {
    let cs = Colours::numbered(2);
    for a in signature_family(FamilyBounds {
        max_ops: 2,
        max_arity: 2,
        max_colours: 2,
    })
    .into_iter()
    .filter(|a| a.colours() == &cs)
    {
        for sizes in [[0, 1], [1, 1], [2, 1], [1, 3]] {
            let x = Slice::with_sizes(&cs, &sizes);
            let want: usize = a
                .ops()
                .iter()
                .map(|o| o.ins.iter().map(|&c| sizes[c]).product::<usize>())
                .sum();
            assert_eq!(act(&a, &x).unwrap().len(), want);
        }
    }
}

#[test]
fn trivial_species_evaluate_to_multisets() {
    for n in 0..=3 {
        for v in 0..=4 {
            let x = trivial_species(n, "e");
            let got = em_eval(&x, &Slice::with_sizes(&Colours::single(), &[v])).unwrap();
            let multisets = if n == 0 { 1 } else { binomial(v + n - 1, n) };
            assert_eq!(got.len(), multisets, "n={n} v={v}");
        }
    }
}

#[test]
fn free_species_evaluate_to_words() {
    for k in 0..=3 {
        let x = free_algebra(MonadTag::S, &one_colour(&[k]), Bounds::new(3));
        for v in 0..=3 {
            let got = em_eval(&x, &Slice::with_sizes(&Colours::single(), &[v])).unwrap();
            assert_eq!(got.len(), v.pow(k as u32));
        }
    }
}

#[test]
fn random_species_agree_with_burnside() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let x = random_species(&mut rng, 3, 3);
        for v in 0..=3 {
            let got = em_eval(&x, &Slice::with_sizes(&Colours::single(), &[v])).unwrap();
            assert_eq!(got.len(), burnside_count(&x, v).unwrap());
        }
    }
}

#[test]
fn linton_square_of_trivial_binary_counts_pairings() {
    let e = trivial_species(2, "e");
    let t = linton_tensor(&e, &e, Bounds::new(4)).unwrap();
    // Two unordered pairs partitioning four inputs.
    assert_eq!(t.algebra.carrier().len(), 3);
    let free = free_algebra(MonadTag::S, &one_colour(&[2]), Bounds::new(4));
    let t = linton_tensor(&free, &free, Bounds::new(4)).unwrap();
    // Free on m ⊗ m, one operation of arity four, all 4! relabellings.
    assert_eq!(t.algebra.carrier().len(), 24);
}

#[test]
fn planar_trees_are_counted_by_catalan_numbers() {
    let m = one_colour(&[2]);
    let catalan = [1, 1, 2, 5];
    let trees = enumerate_trees(&m, TreeBounds::new(4, 4));
    for (leaves, &c) in catalan.iter().enumerate().skip(1) {
        let n = trees
            .iter()
            .filter(|t| t.leaf_count() == leaves + 1)
            .count();
        assert_eq!(n, c, "{} leaves", leaves + 1);
    }
}

#[test]
fn kleisli_morphisms_of_one_colour_are_products() {
    let cases = [
        (vec![2], vec![2]),
        (vec![2], vec![2, 2]),
        (vec![1, 2], vec![1, 2]),
    ];
    for (src, tgt) in cases {
        let (a, b) = (one_colour(&src), one_colour(&tgt));
        let want: usize = src
            .iter()
            .map(|&k| tgt.iter().filter(|&&n| n == k).count() * factorial(k))
            .product();
        let got = enumerate_kleisli(MonadTag::S, &a, &b, Bounds::new(3)).unwrap();
        assert_eq!(got.len(), want, "{src:?} -> {tgt:?}");
    }
}
