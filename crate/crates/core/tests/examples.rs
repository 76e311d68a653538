//! Worked examples: small complexes whose balancings, products and divisor
//! classes are known by hand.

use std::path::Path;

use balance_kit::balancing::{
    balancing_space, find_nondegenerate, is_balanced, is_minimal, link_weighting,
    product_weighting, CheckMode,
};
use balance_kit::canonical::canonical_form;
use balance_kit::complex::Complex;
use balance_kit::divisor::{divisor_of_complex, torus_divisor};
use balance_kit::generators::{complete, family, hypertree, signed_pair, torus_complex, Family};
use balance_kit::io::{read_complex, read_weighting};
use balance_kit::multiset::Multiset;
use balance_kit::search::{classify_irreducible_candidates, enumerate_minimal, SearchOptions};

fn named(spec: Family) -> Complex {
    family(&spec).unwrap().0
}

fn fixture(name: &str) -> Complex {
    read_complex(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)).unwrap()
}

#[test]
fn hexagon_plus_long_diagonal_has_two_dimensional_space() {
    let mut lists: Vec<[u32; 2]> = vec![[1, 2], [2, 3], [3, 4], [4, 5], [5, 6], [1, 6]];
    lists.push([1, 4]);
    let c = Complex::from_lists(&lists).unwrap();
    assert_eq!(balancing_space(&c).unwrap().dimension(), 2);
    let w = find_nondegenerate(&c).unwrap().expect("two 4-cycles combine");
    assert!(w.is_nondegenerate());
    assert!(is_balanced(&w, CheckMode::AllDegrees));
    assert!(!is_minimal(&c).unwrap());
}

#[test]
fn product_detection_on_named_families() {
    let o = named(Family::O([1, 5, 2, 6, 3, 4]));
    let (a, b) = o.factorize().unwrap().expect("octahedron factors");
    assert_eq!(a.product(&b), o);
    assert!(o.is_product().unwrap());
    assert!(!named(Family::C([1, 4, 2, 3, 5, 6])).is_product().unwrap());
    assert!(!named(Family::H([1, 2, 3, 4, 5, 6])).is_product().unwrap());
    assert!(Complex::from_lists(&[[1, 2], [2, 3], [3, 4], [1, 4]]).unwrap().is_product().unwrap());
}

#[test]
fn nonproduct_criterion_on_tori_and_small_cycles() {
    let t33 = torus_complex(&[3, 3]).unwrap();
    let t44 = torus_complex(&[4, 4]).unwrap();
    assert!(!t33.complex().nonproduct_criterion().unwrap());
    assert!(t44.complex().nonproduct_criterion().unwrap());
    let square = Complex::from_lists(&[[1, 2], [2, 3], [3, 4], [1, 4]]).unwrap();
    assert!(!square.nonproduct_criterion().unwrap());
}

#[test]
fn torus_weightings_and_divisors() {
    let t = torus_complex(&[3, 3]).unwrap();
    assert_eq!(t.complex().support().len(), 9);
    assert_eq!(t.complex().len(), 18);
    assert!(is_balanced(&t, CheckMode::Facets));
    assert_eq!(balancing_space(t.complex()).unwrap().dimension(), 1);
    assert_eq!(torus_divisor(&[3, 3]).unwrap(), divisor_of_complex(t.complex(), 10).unwrap());

    let t = torus_complex(&[3, 4]).unwrap();
    assert_eq!((t.complex().support().len(), t.complex().len()), (12, 24));
    assert!(is_balanced(&t, CheckMode::Facets));
}

#[test]
fn links_and_products_of_weightings() {
    let tri = Complex::from_lists(&[[1, 2], [1, 3], [2, 3]]).unwrap();
    assert_eq!(tri.link(&Multiset::singleton(1)).unwrap(), Complex::from_lists(&[[2], [3]]).unwrap());

    let square = product_weighting(&signed_pair(1, 2).unwrap(), &signed_pair(3, 4).unwrap());
    assert!(is_balanced(&square, CheckMode::AllDegrees));
    let link = link_weighting(&square, &Multiset::singleton(1)).unwrap();
    assert_eq!(link.complex(), &Complex::from_lists(&[[3], [4]]).unwrap());
    assert!(is_balanced(&link, CheckMode::AllDegrees));
}

#[test]
fn hypertree_fixture_matches_generator() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let a = fixture("A.cplx");
    assert_eq!(&a, hypertree().complex());
    let w = read_weighting(&root.join("A.weights")).unwrap();
    assert!(is_balanced(&w.extend_to(&a).unwrap(), CheckMode::AllDegrees));
    assert!(is_minimal(&a).unwrap());
    assert_eq!(canonical_form(&fixture("O.cplx")), canonical_form(&named(Family::O([1, 5, 2, 6, 3, 4]))));
    assert_eq!(canonical_form(&fixture("C.cplx")), canonical_form(&named(Family::C([1, 4, 2, 3, 5, 6]))));
}

#[test]
fn degree_one_classes_on_six_vertices() {
    let classes = enumerate_minimal(6, 1, true, SearchOptions::default()).unwrap();
    let reports = classify_irreducible_candidates(&classes, 7).unwrap();
    let larger: Vec<_> = reports.iter().filter(|r| r.representative.support().len() >= 5).collect();
    let mut counts: Vec<usize> = larger.iter().map(|r| r.labeled_count).collect();
    counts.sort();
    assert_eq!(counts, [60, 90, 90]);
    assert!(larger.iter().all(|r| r.certified));
    let square = reports.iter().find(|r| r.representative.support().len() == 4).unwrap();
    assert_eq!(square.labeled_count, 45);
    assert_eq!(square.is_product, Some(true));
    assert!(!square.certified);
}

#[test]
fn no_nonsingular_three_complexes_on_six_vertices() {
    assert!(enumerate_minimal(6, 3, true, SearchOptions::default()).unwrap().is_empty());
    assert_eq!(balancing_space(&complete(6, 3, true)).unwrap().dimension(), 0);
}
