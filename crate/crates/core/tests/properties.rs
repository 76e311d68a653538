use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use balance_kit::balancing::{
    balancing_space, find_nondegenerate, is_balanced, link_weighting, product_weighting,
    prune_degenerate, CheckMode, Weighting,
};
use balance_kit::canonical::canonical_form;
use balance_kit::complex::Complex;
use balance_kit::divisor::{admissible_simplices, combine, decompose, divisor_of_complex};
use balance_kit::generators::complete;
use balance_kit::multiset::{Multiset, Vertex};
use balance_kit::poly::oracle_is_balanced;

/// A nonempty subcomplex of `complete(n, d, nonsingular)` picked by a bitmask.
fn arb_complex(max_n: u32, max_d: usize, nonsingular: bool) -> impl Strategy<Value = Complex> {
    (1..=max_n, 0..=max_d)
        .prop_filter("ambient nonempty", move |(n, d)| !complete(*n, *d, nonsingular).is_empty())
        .prop_flat_map(move |(n, d)| {
            let ambient = complete(n, d, nonsingular);
            let m = ambient.len();
            proptest::collection::vec(any::<bool>(), m)
                .prop_filter("nonempty", |bits| bits.iter().any(|b| *b))
                .prop_map(move |bits| ambient.select((0..m).filter(|&i| bits[i])))
        })
}

fn arb_weighting(max_n: u32, max_d: usize) -> impl Strategy<Value = Weighting> {
    arb_complex(max_n, max_d, false).prop_flat_map(|c| {
        let len = c.len();
        proptest::collection::vec(-3i64..=3, len)
            .prop_map(move |ws| Weighting::from_integers(c.clone(), &ws).unwrap())
    })
}

/// A balanced weighting: a random combination of a kernel basis.
fn arb_balanced(max_n: u32, max_d: usize) -> impl Strategy<Value = Weighting> {
    arb_complex(max_n, max_d, false)
        .prop_filter("balanceable", |c| balancing_space(c).unwrap().dimension() > 0)
        .prop_flat_map(|c| {
            let space = balancing_space(&c).unwrap();
            proptest::collection::vec(-2i64..=2, space.dimension()).prop_map(move |coeffs| {
                let mut weights = vec![BigRational::from_integer(0.into()); c.len()];
                for (k, v) in coeffs.iter().zip(space.basis()) {
                    for (acc, x) in weights.iter_mut().zip(v) {
                        *acc += BigRational::from_integer(BigInt::from(*k)) * x;
                    }
                }
                Weighting::new(c.clone(), weights).unwrap()
            })
        })
}

fn shift(c: &Complex, by: Vertex) -> Complex {
    c.relabel(|v| v + by)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn facet_check_agrees_with_full_check_and_oracle(w in arb_weighting(5, 3)) {
        let facets = is_balanced(&w, CheckMode::Facets);
        prop_assert_eq!(facets, is_balanced(&w, CheckMode::AllDegrees));
        prop_assert_eq!(facets, oracle_is_balanced(&w));
    }

    #[test]
    fn kernel_vectors_are_balanced(c in arb_complex(5, 2, false)) {
        for w in balancing_space(&c).unwrap().basis_weightings() {
            prop_assert!(is_balanced(&w, CheckMode::AllDegrees));
        }
    }

    #[test]
    fn links_of_balanced_weightings_are_balanced(w in arb_balanced(5, 2)) {
        let c = w.complex().clone();
        for size in 0..=c.degree() {
            for s in c.sub_multisets_of_size(size) {
                prop_assert!(is_balanced(&link_weighting(&w, &s).unwrap(), CheckMode::AllDegrees));
            }
        }
    }

    #[test]
    fn balanced_vertex_links_imply_balanced(w in arb_weighting(5, 2)) {
        prop_assume!(w.complex().degree() >= 1);
        let links_ok = w.complex().support().into_iter().all(|v| {
            is_balanced(&link_weighting(&w, &Multiset::singleton(v)).unwrap(), CheckMode::AllDegrees)
        });
        if links_ok {
            prop_assert!(is_balanced(&w, CheckMode::AllDegrees));
        }
    }

    #[test]
    fn products_of_balanced_are_balanced(a in arb_balanced(4, 1), b in arb_balanced(4, 1)) {
        prop_assert!(is_balanced(&product_weighting(&a, &b), CheckMode::AllDegrees));
    }

    #[test]
    fn product_is_commutative_and_associative(
        a in arb_complex(4, 1, false), b in arb_complex(4, 1, false), c in arb_complex(3, 0, false)
    ) {
        prop_assert_eq!(a.product(&b), b.product(&a));
        prop_assert_eq!(a.product(&b).product(&c), a.product(&b.product(&c)));
    }

    #[test]
    fn link_of_product_is_product_of_links(a in arb_complex(4, 2, true), b in arb_complex(4, 1, true)) {
        prop_assume!(a.degree() >= 1);
        let b = shift(&b, 4);
        let p = a.product(&b);
        for i in a.support() {
            let s = Multiset::singleton(i);
            prop_assert_eq!(p.link(&s).unwrap(), a.link(&s).unwrap().product(&b));
        }
    }

    #[test]
    fn link_is_iterated_vertex_links(c in arb_complex(4, 3, false), picks in proptest::collection::vec(1u32..=4, 1..=3)) {
        prop_assume!(picks.len() <= c.degree());
        let s = Multiset::from_labels(&picks).unwrap();
        let mut iterated = c.clone();
        for &v in picks.iter().rev() {
            iterated = iterated.link(&Multiset::singleton(v)).unwrap();
        }
        prop_assert_eq!(c.link(&s).unwrap(), iterated);
    }

    #[test]
    fn factor_balanceability(a in arb_complex(4, 1, true), b in arb_complex(4, 1, true)) {
        let b = shift(&b, 4);
        let lhs = find_nondegenerate(&a.product(&b)).unwrap().is_some();
        let rhs = find_nondegenerate(&a).unwrap().is_some() && find_nondegenerate(&b).unwrap().is_some();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn nonproduct_criterion_is_sound(c in arb_complex(6, 1, true)) {
        if c.nonproduct_criterion().unwrap() {
            prop_assert!(!c.is_product().unwrap());
        }
    }

    #[test]
    fn factorizations_multiply_back(a in arb_complex(3, 1, true), b in arb_complex(3, 0, true)) {
        let p = a.product(&shift(&b, 3));
        let (x, y) = p.factorize().unwrap().expect("a product");
        prop_assert_eq!(x.product(&y), p);
    }

    #[test]
    fn canonical_form_is_orbit_invariant(c in arb_complex(5, 2, false), perm in Just((1..=5u32).collect::<Vec<_>>()).prop_shuffle()) {
        let form = canonical_form(&c);
        prop_assert_eq!(canonical_form(&form), form.clone());
        prop_assert_eq!(canonical_form(&c.relabel(|v| perm[v as usize - 1])), form);
    }

    #[test]
    fn pruning_matches_balanceability(c in arb_complex(5, 1, false)) {
        let pruned = prune_degenerate(&c).unwrap();
        let balanceable = find_nondegenerate(&c).unwrap().is_some();
        prop_assert_eq!(balanceable, pruned == c);
    }

    #[test]
    fn admissible_simplices_contain_the_complex(c in arb_complex(6, 2, false)) {
        let class = divisor_of_complex(&c, 7).unwrap();
        prop_assert!(c.is_subcomplex_of(&admissible_simplices(&class, c.degree()).unwrap()));
    }

    #[test]
    fn signature_is_additive(a in arb_complex(6, 1, false), b in arb_complex(6, 2, false)) {
        let da = divisor_of_complex(&a, 8).unwrap();
        let db = divisor_of_complex(&b, 8).unwrap();
        let sum = combine(1, &da, 1, &db).unwrap();
        for k in 1..=4 {
            prop_assert_eq!(sum.signature(k).unwrap(), da.signature(k).unwrap() + db.signature(k).unwrap());
        }
    }

    #[test]
    fn decompositions_reproduce_the_target(a in arb_complex(6, 1, true), b in arb_complex(6, 0, true)) {
        let da = divisor_of_complex(&a, 7).unwrap();
        let db = divisor_of_complex(&b, 7).unwrap();
        let target = combine(1, &da, 1, &db).unwrap();
        let cands = vec![da, db];
        let found = decompose(&target, &cands).unwrap();
        prop_assert!(found.contains(&vec![0, 1]));
        for witness in found {
            let mut acc = balance_kit::divisor::DivisorClass::zero(7);
            for i in witness {
                acc = combine(1, &acc, 1, &cands[i]).unwrap();
            }
            prop_assert_eq!(&acc, &target);
        }
    }
}
