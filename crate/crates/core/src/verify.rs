//! Replays the headline computations as a table of pass/fail checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::balancing::{
    balancing_space, find_nondegenerate, is_balanced, link_weighting, prune_degenerate,
    product_weighting, CheckMode, Weighting,
};
use crate::canonical::canonical_form;
use crate::complex::Complex;
use crate::divisor::{admissible_simplices, decompose, divisor_of_complex, torus_divisor, DivisorClass};
use crate::error::Result;
use crate::generators::{
    all_labelings, complete, family, hypertree, nonsingular_basis, projective_plane_six,
    singular_basis, torus_complex, Family,
};
use crate::linalg::rational_rank;
use crate::multiset::{binomial, Multiset, Vertex};
use crate::poly::oracle_is_balanced;
use crate::search::{classify_irreducible_candidates, enumerate_minimal, SearchOptions};

/// Groups of checks selectable from the command line.
pub const TOPICS: [&str; 6] = ["dimensions", "search", "hypertree", "properties", "torus", "rp2"];

#[derive(Clone, Debug)]
pub struct Check {
    pub id: u32,
    pub topic: &'static str,
    pub description: &'static str,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
    pub elapsed: Duration,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<11} {} ({:.2?})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.topic,
            self.description,
            self.elapsed
        )?;
        if !self.passed {
            write!(f, "\n        expected: {}\n        actual:   {}", self.expected, self.actual)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        write!(f, "{}/{} checks passed", self.passed(), self.checks.len())
    }
}

/// Outcome of a single check body: expected and actual summaries.
struct Outcome {
    expected: String,
    actual: String,
}

impl Outcome {
    fn compare<T: fmt::Debug + PartialEq>(expected: T, actual: T) -> Self {
        Outcome {
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
        }
    }

    fn failures(failures: Vec<String>) -> Self {
        Outcome {
            expected: "no failures".into(),
            actual: if failures.is_empty() {
                "no failures".into()
            } else {
                let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
                format!("{} failures: {}", failures.len(), shown.join("; "))
            },
        }
    }
}

type Body = fn(&Options) -> Result<Outcome>;

/// Tunables shared by the checks.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub jobs: Option<usize>,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { jobs: None, seed: 20_240_601 }
    }
}

const CHECKS: [(u32, &str, &str, Body); 12] = [
    (1, "dimensions", "complete singular complexes: dim = C(n+d−1, d+1)", singular_dimensions),
    (2, "dimensions", "complete nonsingular complexes: dim = max(C(n,d+1) − C(n,d), 0)", nonsingular_dimensions),
    (3, "dimensions", "product bases: sizes, balance, independence", bases),
    (4, "search", "degree-1 minimal complexes on 6 vertices: 60/90/90 and 45 four-cycles", search_degree_one),
    (5, "search", "degree-2 nonsingular minimal complexes on 6 vertices: octahedron and tetrahedra cycle", search_degree_two),
    (6, "hypertree", "hypertree complex has the listed unique balancing", hypertree_balancing),
    (7, "hypertree", "hypertree divisor class on M̄_0,7", hypertree_divisor),
    (8, "hypertree", "admissible simplices, pruning, signatures, no decomposition", hypertree_pipeline),
    (9, "properties", "facet check, full check and shift oracle agree on random weightings", facet_property),
    (10, "properties", "link and product soundness, link completeness, factor balanceability", link_product_properties),
    (11, "torus", "torus triangulations (3,3), (3,4), (4,4)", torus_checks),
    (12, "rp2", "six-vertex projective plane is not balanceable", projective_plane),
];

/// Ids and topics of every check, in order.
pub fn catalogue() -> Vec<(u32, &'static str, &'static str)> {
    CHECKS.iter().map(|(id, topic, desc, _)| (*id, *topic, *desc)).collect()
}

/// Runs one check by id; errors inside the body become failures.
pub fn run_check(id: u32, options: &Options) -> Option<Check> {
    let (id, topic, description, body) = *CHECKS.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (expected, actual, passed) = match body(options) {
        Ok(o) => {
            let passed = o.expected == o.actual;
            (o.expected, o.actual, passed)
        }
        Err(e) => ("no error".to_string(), format!("error: {e}"), false),
    };
    Some(Check {
        id,
        topic,
        description,
        expected,
        actual,
        passed,
        elapsed: start.elapsed(),
    })
}

/// Runs every check, or only those of one topic.
pub fn run(topic: Option<&str>, options: &Options) -> VerificationReport {
    let checks = CHECKS
        .iter()
        .filter(|c| topic.is_none_or(|t| t == c.1))
        .filter_map(|c| run_check(c.0, options))
        .collect();
    VerificationReport { checks }
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn dimension_or_zero(c: &Complex) -> Result<usize> {
    if c.is_empty() {
        Ok(0)
    } else {
        Ok(balancing_space(c)?.dimension())
    }
}

fn singular_dimensions(_: &Options) -> Result<Outcome> {
    let mut failures = Vec::new();
    for n in 2..=7u32 {
        for d in 0..=3usize {
            let got = dimension_or_zero(&complete(n, d, false))?;
            let want = binomial(u64::from(n) + d as u64 - 1, d as u64 + 1) as usize;
            if got != want {
                failures.push(format!("n={n} d={d}: {got} ≠ {want}"));
            }
        }
    }
    Ok(Outcome::failures(failures))
}

fn nonsingular_formula(n: u32, d: usize) -> usize {
    binomial(u64::from(n), d as u64 + 1).saturating_sub(binomial(u64::from(n), d as u64)) as usize
}

fn nonsingular_dimensions(_: &Options) -> Result<Outcome> {
    let mut failures = Vec::new();
    for n in 2..=9u32 {
        for d in 0..=4usize {
            let got = dimension_or_zero(&complete(n, d, true))?;
            let want = nonsingular_formula(n, d);
            if got != want {
                failures.push(format!("n={n} d={d}: {got} ≠ {want}"));
            }
            if 2 * (d + 1) > n as usize && got != 0 {
                failures.push(format!("n={n} d={d}: nonzero above n/2"));
            }
        }
    }
    Ok(Outcome::failures(failures))
}

fn check_basis(
    label: &str,
    ambient: &Complex,
    basis: &[Weighting],
    want: usize,
    failures: &mut Vec<String>,
) -> Result<()> {
    if basis.len() != want {
        failures.push(format!("{label}: {} elements, expected {want}", basis.len()));
    }
    let mut vectors = Vec::new();
    for w in basis {
        if !is_balanced(w, CheckMode::Facets) || !is_balanced(w, CheckMode::AllDegrees) {
            failures.push(format!("{label}: unbalanced element on {}", w.complex()));
        }
        vectors.push(w.extend_to(ambient)?.weights().to_vec());
    }
    if !vectors.is_empty() && rational_rank(&vectors) != vectors.len() {
        failures.push(format!("{label}: elements are dependent"));
    }
    if dimension_or_zero(ambient)? != basis.len() {
        failures.push(format!("{label}: basis size differs from the kernel dimension"));
    }
    Ok(())
}

fn bases(_: &Options) -> Result<Outcome> {
    let mut failures = Vec::new();
    for n in 2..=6u32 {
        for d in 0..=3usize {
            let want = binomial(u64::from(n) + d as u64 - 1, d as u64 + 1) as usize;
            let basis = singular_basis(n, d)?;
            check_basis(&format!("singular n={n} d={d}"), &complete(n, d, false), &basis, want, &mut failures)?;
        }
    }
    for n in 2..=9u32 {
        for d in 0..=4usize {
            let basis = nonsingular_basis(n, d)?;
            if basis.iter().any(|w| !w.complex().is_nonsingular()) {
                failures.push(format!("nonsingular n={n} d={d}: singular element"));
            }
            let ambient = complete(n, d, true);
            if ambient.is_empty() {
                if !basis.is_empty() {
                    failures.push(format!("nonsingular n={n} d={d}: elements without ambient"));
                }
                continue;
            }
            check_basis(&format!("nonsingular n={n} d={d}"), &ambient, &basis, nonsingular_formula(n, d), &mut failures)?;
        }
    }
    Ok(Outcome::failures(failures))
}

/// Every edge subset of the complete graph on six vertices whose balancing
/// space is one-dimensional and nowhere zero.
pub fn brute_force_minimal_graphs() -> Result<BTreeSet<Complex>> {
    let edges = complete(6, 1, true);
    let m = edges.len();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << m) {
        let sub = edges.select((0..m).filter(|i| mask >> i & 1 == 1));
        let space = balancing_space(&sub)?;
        if space.dimension() == 1 && space.basis()[0].iter().all(|x| !x.is_zero()) {
            out.insert(sub);
        }
    }
    Ok(out)
}

fn search_degree_one(options: &Options) -> Result<Outcome> {
    let classes = enumerate_minimal(6, 1, true, SearchOptions { max_support: None, jobs: options.jobs })?;
    let reports = classify_irreducible_candidates(&classes, 7)?;
    let named = |spec: Family| -> Result<Complex> { Ok(canonical_form(&family(&spec)?.0)) };
    let names: BTreeMap<Complex, &str> = [
        (named(Family::H([1, 2, 3, 4, 5, 6]))?, "H"),
        (named(Family::T([1, 2, 3, 4, 5]))?, "T"),
        (named(Family::P([1, 2, 3, 4, 5, 6]))?, "P"),
        (canonical_form(&Complex::from_lists(&[[1, 2], [2, 3], [3, 4], [1, 4]])?), "4-cycle"),
    ]
    .into_iter()
    .collect();

    let mut counts = BTreeMap::new();
    let mut certified = BTreeSet::new();
    let mut labeled = BTreeSet::new();
    for (class, report) in classes.iter().zip(&reports) {
        let name = names.get(&class.representative).copied().unwrap_or("other");
        *counts.entry(name).or_insert(0) += class.labeled_count;
        if report.certified {
            certified.insert(name);
        }
        if class.dimension_check != 1 || !class.sample_balancing.is_nondegenerate() {
            certified.insert("bad-class");
        }
        labeled.extend(class.instances.iter().cloned());
    }
    let brute = brute_force_minimal_graphs()?;
    let expected_counts: BTreeMap<&str, usize> =
        [("H", 60), ("T", 90), ("P", 90), ("4-cycle", 45)].into_iter().collect();
    Ok(Outcome::compare(
        (expected_counts, BTreeSet::from(["H", "P", "T"]), true),
        (counts, certified, brute == labeled),
    ))
}

fn search_degree_two(options: &Options) -> Result<Outcome> {
    let classes = enumerate_minimal(6, 2, true, SearchOptions { max_support: None, jobs: options.jobs })?;
    let reports = classify_irreducible_candidates(&classes, 7)?;
    let o = canonical_form(&family(&Family::O([1, 5, 2, 6, 3, 4]))?.0);
    let c = canonical_form(&family(&Family::C([1, 4, 2, 3, 5, 6]))?.0);
    let mut found = Vec::new();
    for (class, report) in classes.iter().zip(&reports) {
        let name = if class.representative == o {
            "O"
        } else if class.representative == c {
            "C"
        } else {
            "other"
        };
        found.push((name, class.representative.len(), report.is_product, report.certified));
    }
    Ok(Outcome::compare(
        vec![("O", 8, Some(true), false), ("C", 12, Some(false), true)],
        found,
    ))
}

fn hypertree_balancing(_: &Options) -> Result<Outcome> {
    let listed = hypertree();
    let space = balancing_space(listed.complex())?;
    let mut generator = space.basis().first().cloned().unwrap_or_default();
    if let Some(idx) = listed.complex().index_of(&crate::ms![1, 1, 2]) {
        if let Some(scale) = generator.get(idx).cloned().filter(|x| !x.is_zero()) {
            generator.iter_mut().for_each(|x| *x /= &scale);
        }
    }
    Ok(Outcome::compare(
        (1, listed.weights().to_vec()),
        (space.dimension(), generator),
    ))
}

/// The hypertree class as displayed, term by term.
pub fn hypertree_class_listing() -> DivisorClass {
    let terms: [(&[Vertex], i64); 26] = [
        (&[1], -1),
        (&[2], -2),
        (&[3], -2),
        (&[4], -2),
        (&[5], -2),
        (&[6], -2),
        (&[1, 4], -1),
        (&[1, 5], -1),
        (&[1, 6], -1),
        (&[2, 3], -1),
        (&[2, 4], -1),
        (&[2, 5], -1),
        (&[2, 6], -1),
        (&[3, 4], -1),
        (&[3, 5], -1),
        (&[3, 6], -1),
        (&[4, 5], -1),
        (&[4, 6], -2),
        (&[5, 6], -1),
        (&[1, 4, 6], -1),
        (&[2, 3, 5], -1),
        (&[2, 4, 5], -1),
        (&[2, 4, 6], -1),
        (&[3, 4, 6], -1),
        (&[3, 5, 6], -1),
        (&[4, 5, 6], -1),
    ];
    DivisorClass::new(7, 3, terms.iter().map(|(k, c)| (k.to_vec(), *c))).expect("valid keys")
}

fn hypertree_divisor(_: &Options) -> Result<Outcome> {
    let got = divisor_of_complex(hypertree().complex(), 7)?;
    Ok(Outcome::compare(hypertree_class_listing().to_string(), got.to_string()))
}

/// Divisor classes of every labeled B, H, T and P complex on `{1..6}`.
pub fn low_degree_candidates() -> Result<Vec<(&'static str, DivisorClass)>> {
    let mut out = Vec::new();
    for kind in ["B", "H", "T", "P"] {
        for c in all_labelings(kind, 6)? {
            out.push((kind, divisor_of_complex(&c, 7)?));
        }
    }
    Ok(out)
}

fn hypertree_pipeline(_: &Options) -> Result<Outcome> {
    let a = hypertree().complex().clone();
    let d_a = divisor_of_complex(&a, 7)?;
    let admissible = admissible_simplices(&d_a, 2)?;
    let extra = Complex::from_lists(&[[1, 2, 3], [1, 2, 6], [1, 3, 4]])?;
    let a_tilde = Complex::new(2, a.simplices().iter().chain(extra.simplices()).cloned())?;
    let pruned = prune_degenerate(&admissible)?;

    let candidates = low_degree_candidates()?;
    let mut signatures: BTreeMap<&str, BTreeSet<i64>> = BTreeMap::new();
    let mut sizes: BTreeMap<&str, usize> = BTreeMap::new();
    for (kind, class) in &candidates {
        signatures.entry(kind).or_default().insert(class.signature(3)?);
        *sizes.entry(kind).or_default() += 1;
    }
    let classes: Vec<DivisorClass> = candidates.into_iter().map(|(_, c)| c).collect();
    let decompositions = decompose(&d_a, &classes)?;

    let expected_sig: BTreeMap<&str, BTreeSet<i64>> = [
        ("B", BTreeSet::from([-4])),
        ("H", BTreeSet::from([-2])),
        ("T", BTreeSet::from([-4])),
        ("P", BTreeSet::from([0])),
    ]
    .into_iter()
    .collect();
    let expected_sizes: BTreeMap<&str, usize> =
        [("B", 15), ("H", 60), ("T", 90), ("P", 90)].into_iter().collect();
    Ok(Outcome::compare(
        (15, true, true, -7, expected_sig, expected_sizes, 0),
        (
            admissible.len(),
            admissible == a_tilde,
            pruned == a,
            d_a.signature(3)?,
            signatures,
            sizes,
            decompositions.len(),
        ),
    ))
}

/// Seeded corpus of weighted complexes with `d ≤ 3` on at most 7 vertices:
/// random weights, balanced combinations, and perturbed balanced ones.
pub fn random_corpus(seed: u64, size: usize) -> Result<Vec<Weighting>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let d = rng.gen_range(0..=3usize);
        let max_n = if d >= 2 { 5 } else { 7 };
        let n = rng.gen_range(2..=max_n) as u32;
        let ambient = complete(n, d, rng.gen_bool(0.5));
        if ambient.is_empty() {
            continue;
        }
        let kind = out.len() % 3;
        let w = if kind == 0 {
            let keep: Vec<usize> = (0..ambient.len()).filter(|_| rng.gen_bool(0.4)).collect();
            if keep.is_empty() {
                continue;
            }
            let sub = ambient.select(keep);
            let weights = (0..sub.len())
                .map(|_| BigRational::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=3).into()))
                .collect();
            Weighting::new(sub, weights)?
        } else {
            let space = balancing_space(&ambient)?;
            if space.dimension() == 0 {
                continue;
            }
            let mut weights = vec![BigRational::zero(); ambient.len()];
            for v in space.basis() {
                let c = q(rng.gen_range(-3..=3));
                for (acc, x) in weights.iter_mut().zip(v) {
                    *acc += &c * x;
                }
            }
            if kind == 2 {
                let i = rng.gen_range(0..weights.len());
                weights[i] += BigRational::one();
            }
            let w = Weighting::new(ambient, weights)?.restrict_to_support();
            if w.complex().is_empty() {
                continue;
            }
            w
        };
        out.push(w);
    }
    Ok(out)
}

fn facet_property(options: &Options) -> Result<Outcome> {
    let corpus = random_corpus(options.seed, 200)?;
    let mut failures = Vec::new();
    let mut balanced = 0;
    for w in &corpus {
        let facets = is_balanced(w, CheckMode::Facets);
        let all = is_balanced(w, CheckMode::AllDegrees);
        let oracle = oracle_is_balanced(w);
        balanced += usize::from(all);
        if facets != all || oracle != all {
            failures.push(format!("{}: facets={facets} all={all} oracle={oracle}", w.complex()));
        }
    }
    if balanced == 0 || balanced == corpus.len() {
        failures.push(format!("corpus is one-sided: {balanced} balanced of {}", corpus.len()));
    }
    Ok(Outcome::failures(failures))
}

fn random_factor(rng: &mut ChaCha8Rng, labels: &[Vertex]) -> Result<Complex> {
    loop {
        let d = rng.gen_range(0..=1usize);
        let ambient = complete(labels.len() as u32, d, true);
        if ambient.is_empty() {
            continue;
        }
        let sub = if rng.gen_bool(0.5) {
            // support of a random balancing: always balanceable when nonempty
            let space = balancing_space(&ambient)?;
            let mut weights = vec![BigRational::zero(); ambient.len()];
            for v in space.basis() {
                let c = q(rng.gen_range(-2..=2));
                for (acc, x) in weights.iter_mut().zip(v) {
                    *acc += &c * x;
                }
            }
            Weighting::new(ambient, weights)?.restrict_to_support().complex().clone()
        } else {
            let keep: Vec<usize> = (0..ambient.len()).filter(|_| rng.gen_bool(0.6)).collect();
            ambient.select(keep)
        };
        if !sub.is_empty() {
            return Ok(sub.relabel(|v| labels[v as usize - 1]));
        }
    }
}

fn link_product_properties(options: &Options) -> Result<Outcome> {
    let corpus = random_corpus(options.seed, 200)?;
    let mut failures = Vec::new();
    for w in &corpus {
        let c = w.complex();
        let balanced = is_balanced(w, CheckMode::AllDegrees);
        if balanced {
            for size in 0..=c.degree() {
                for s in c.sub_multisets_of_size(size) {
                    let lw = link_weighting(w, &s)?;
                    if !is_balanced(&lw, CheckMode::AllDegrees) {
                        failures.push(format!("link of {c} at {s} unbalanced"));
                    }
                }
            }
        }
        if c.degree() >= 1 {
            let mut all_links = true;
            for v in c.support() {
                all_links &= is_balanced(&link_weighting(w, &Multiset::singleton(v))?, CheckMode::AllDegrees);
            }
            if all_links && !balanced {
                failures.push(format!("{c}: balanced vertex links but unbalanced"));
            }
        }
    }
    let balanced: Vec<&Weighting> = corpus
        .iter()
        .filter(|w| w.complex().len() <= 12 && is_balanced(w, CheckMode::AllDegrees))
        .collect();
    for pair in balanced.windows(2).take(60) {
        let p = product_weighting(pair[0], pair[1]);
        if !is_balanced(&p, CheckMode::AllDegrees) {
            failures.push(format!("product of {} and {} unbalanced", pair[0].complex(), pair[1].complex()));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ 0x5eed);
    let mut agreeing_positive = 0;
    for _ in 0..50 {
        let mut labels: Vec<Vertex> = (1..=9).collect();
        labels.shuffle(&mut rng);
        let split = rng.gen_range(3..=5);
        let left = random_factor(&mut rng, &labels[..split])?;
        let right = random_factor(&mut rng, &labels[split..])?;
        let product = left.product(&right);
        let lhs = find_nondegenerate(&product)?.is_some();
        let rhs = find_nondegenerate(&left)?.is_some() && find_nondegenerate(&right)?.is_some();
        agreeing_positive += usize::from(lhs && rhs);
        if lhs != rhs {
            failures.push(format!("factor balanceability fails for {left} · {right}"));
        }
        if left.degree() >= 1 {
            for i in left.support() {
                let s = Multiset::singleton(i);
                if product.link(&s)? != left.link(&s)?.product(&right) {
                    failures.push(format!("link of {left} · {right} at {i} is not the product of links"));
                }
            }
        }
    }
    if agreeing_positive == 0 {
        failures.push("no balanceable products in the sample".into());
    }
    Ok(Outcome::failures(failures))
}

fn torus_checks(_: &Options) -> Result<Outcome> {
    let mut failures = Vec::new();
    for dims in [vec![3, 3], vec![3, 4], vec![4, 4]] {
        let w = torus_complex(&dims)?;
        let c = w.complex();
        if !w.weights().iter().all(|x| *x == q(1) || *x == q(-1)) {
            failures.push(format!("{dims:?}: weight outside ±1"));
        }
        for facet in c.facets() {
            let holders: Vec<&BigRational> = w
                .iter()
                .filter(|(s, _)| facet.is_contained_in(s))
                .map(|(_, x)| x)
                .collect();
            if holders.len() != 2 || !(holders[0] + holders[1]).is_zero() {
                failures.push(format!("{dims:?}: facet {facet} in {} simplices", holders.len()));
            }
        }
        let dim = balancing_space(c)?.dimension();
        if dim != 1 {
            failures.push(format!("{dims:?}: balancing dimension {dim}"));
        }
        if c.is_product()? {
            failures.push(format!("{dims:?}: factors as a product"));
        }
        let n = dims.iter().product::<usize>() as u32 + 1;
        if divisor_of_complex(c, n)? != torus_divisor(&dims)? {
            failures.push(format!("{dims:?}: closed form differs from the recipe"));
        }
    }
    Ok(Outcome::failures(failures))
}

fn projective_plane(_: &Options) -> Result<Outcome> {
    Ok(Outcome::compare(0, balancing_space(&projective_plane_six())?.dimension()))
}
