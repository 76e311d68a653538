//! Enumeration of minimal balanceable subcomplexes up to relabeling.
//!
//! Minimal subcomplexes of an ambient complex are exactly the circuits of the
//! column matroid of its multiplicity matrix: a circuit supports a unique
//! kernel vector up to scale, and that vector is nowhere zero on it.
//!
//! Two enumerators are provided. The default works in the dual: with `B` a
//! `k × m` kernel basis, each independent set `Z` of `k − 1` columns of `B`
//! spans a hyperplane, the row vector `y` annihilating `B[:, Z]` is unique up
//! to scale, and the support of `yᵀB` is a circuit. Every circuit arises this
//! way. The capped enumerator grows independent column sets of `M` in
//! increasing order and records `I ∪ {c}` whenever `c` depends on all of `I`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::json;

use crate::balancing::{balancing_space, is_minimal, MultiplicityMatrix, Weighting};
use crate::canonical::canonical_form;
use crate::complex::Complex;
use crate::divisor::{divisor_of_complex, DivisorClass};
use crate::error::{Error, Result};
use crate::generators::complete;
use crate::io::rational_string;
use crate::linalg::{kernel_basis, primitive, GrowingBasis, Insert};
use crate::multiset::binomial;

/// Upper limit on hyperplane bases examined by the default enumerator.
const HYPERPLANE_LIMIT: u64 = 20_000_000;

#[derive(Clone, Debug)]
pub struct CanonicalClass {
    pub representative: Complex,
    /// Number of labeled copies inside the ambient complex.
    pub labeled_count: usize,
    pub dimension_check: usize,
    pub sample_balancing: Weighting,
    /// The labeled copies, sorted.
    pub instances: Vec<Complex>,
}

impl CanonicalClass {
    /// Groups labeled complexes sharing one canonical form.
    pub fn from_instances(instances: Vec<Complex>) -> Result<Self> {
        let Some(first) = instances.first() else {
            return Err(Error::domain("a class needs at least one instance"));
        };
        let representative = canonical_form(first);
        if let Some(other) = instances.iter().find(|c| canonical_form(c) != representative) {
            return Err(Error::domain(format!(
                "instances are not relabelings of each other: {other}"
            )));
        }
        let space = balancing_space(&representative)?;
        let sample_balancing = space
            .basis_weightings()
            .into_iter()
            .next()
            .unwrap_or_else(|| Weighting::zero(representative.clone()));
        let mut instances = instances;
        instances.sort();
        instances.dedup();
        Ok(CanonicalClass {
            labeled_count: instances.len(),
            dimension_check: space.dimension(),
            sample_balancing,
            representative,
            instances,
        })
    }

    /// Number of vertices in the representative's support.
    pub fn support_size(&self) -> usize {
        self.representative.support().len()
    }
}

/// Options for [`enumerate_minimal`].
#[derive(Clone, Copy, Debug, Default)]
pub struct SearchOptions {
    /// Largest circuit size to report; required for singular ambients.
    pub max_support: Option<usize>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

/// A circuit: column indices into the ambient complex and its primitive kernel vector.
type Circuit = (Vec<usize>, Vec<BigRational>);

fn to_bigint_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|x| x.to_integer()).collect())
        .collect()
}

/// All circuits via hyperplanes of the dual representation.
fn circuits_by_hyperplanes(basis: &[Vec<BigRational>], m: usize) -> Vec<Circuit> {
    let k = basis.len();
    if k == 0 {
        return Vec::new();
    }
    // columns of B as vectors in Q^k
    let columns: Vec<Vec<BigRational>> = (0..m)
        .map(|j| basis.iter().map(|row| row[j].clone()).collect())
        .collect();
    let record = |chosen: &[usize]| -> Option<Circuit> {
        let y = if chosen.is_empty() {
            let mut y = vec![BigRational::zero(); k];
            y[0] = BigRational::from_integer(1.into());
            y
        } else {
            let rows: Vec<Vec<BigRational>> = chosen.iter().map(|&j| columns[j].clone()).collect();
            let mut ker = kernel_basis(&to_bigint_rows(&rows), k);
            debug_assert_eq!(ker.len(), 1);
            ker.pop()?
        };
        let v: Vec<BigRational> = (0..m)
            .map(|j| {
                y.iter()
                    .zip(&columns[j])
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        let support: Vec<usize> = (0..m).filter(|&j| !v[j].is_zero()).collect();
        let values: Vec<BigRational> = support.iter().map(|&j| v[j].clone()).collect();
        Some((support, primitive(&values)))
    };

    fn grow(
        columns: &[Vec<BigRational>],
        target: usize,
        start: usize,
        basis: &GrowingBasis,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if chosen.len() == target {
            out.push(chosen.clone());
            return;
        }
        let needed = target - chosen.len();
        for c in start..=(columns.len().saturating_sub(needed)) {
            if let Insert::Independent(next) = basis.insert(&columns[c]) {
                chosen.push(c);
                grow(columns, target, c + 1, &next, chosen, out);
                chosen.pop();
            }
        }
    }

    let target = k - 1;
    let found: BTreeMap<Vec<usize>, Vec<BigRational>> = if target == 0 {
        record(&[]).into_iter().collect()
    } else {
        (0..=(m - target))
            .into_par_iter()
            .map(|first| {
                let mut local = BTreeMap::new();
                let Insert::Independent(b) = GrowingBasis::new().insert(&columns[first]) else {
                    return local;
                };
                let mut sets = Vec::new();
                grow(&columns, target, first + 1, &b, &mut vec![first], &mut sets);
                for z in sets {
                    if let Some((support, v)) = record(&z) {
                        local.entry(support).or_insert(v);
                    }
                }
                local
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (s, v) in b {
                    a.entry(s).or_insert(v);
                }
                a
            })
    };
    found.into_iter().collect()
}

/// Circuits of at most `cap` columns, by growing independent sets.
fn circuits_by_growth(matrix: &MultiplicityMatrix, cap: usize) -> Vec<Circuit> {
    let m = matrix.columns().len();
    let columns: Vec<Vec<BigRational>> = (0..m)
        .map(|j| {
            matrix
                .entries()
                .iter()
                .map(|row| BigRational::from_integer(BigInt::from(row[j])))
                .collect()
        })
        .collect();

    fn grow(
        columns: &[Vec<BigRational>],
        cap: usize,
        basis: &GrowingBasis,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Circuit>,
    ) {
        let start = chosen.last().map_or(0, |&c| c + 1);
        for c in start..columns.len() {
            match basis.insert(&columns[c]) {
                Insert::Dependent(coeffs) => {
                    if coeffs.iter().all(|x| !x.is_zero()) {
                        let mut support = chosen.clone();
                        support.push(c);
                        // columns[c] = Σ coeffs·chosen, so (coeffs, −1) is in the kernel
                        let mut v = coeffs;
                        v.push(BigRational::from_integer((-1).into()));
                        out.push((support, primitive(&v)));
                    }
                }
                Insert::Independent(next) => {
                    if chosen.len() + 2 <= cap {
                        chosen.push(c);
                        grow(columns, cap, &next, chosen, out);
                        chosen.pop();
                    }
                }
            }
        }
    }

    if cap == 0 {
        return Vec::new();
    }
    let mut out: Vec<Circuit> = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut local = Vec::new();
            match GrowingBasis::new().insert(&columns[first]) {
                Insert::Dependent(_) => local.push((vec![first], vec![BigRational::from_integer(1.into())])),
                Insert::Independent(b) => {
                    if cap >= 2 {
                        grow(&columns, cap, &b, &mut vec![first], &mut local);
                    }
                }
            }
            local
        })
        .flatten()
        .collect();
    out.sort();
    out
}

fn run_in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Labeled minimal subcomplexes of `ambient`, each with its primitive balancing.
pub fn minimal_subcomplexes(ambient: &Complex, options: SearchOptions) -> Result<Vec<Weighting>> {
    if ambient.is_empty() {
        return Err(Error::domain("ambient complex is empty"));
    }
    let space = balancing_space(ambient)?;
    let m = ambient.len();
    let circuits = match options.max_support {
        Some(cap) => {
            let rows = ambient.sub_multisets_of_size(ambient.degree());
            let matrix = MultiplicityMatrix::new(ambient, &rows)?;
            run_in_pool(options.jobs, || circuits_by_growth(&matrix, cap))?
        }
        None => {
            if !ambient.is_nonsingular() {
                return Err(Error::domain(
                    "singular ambient complexes need an explicit max_support",
                ));
            }
            let k = space.dimension();
            let work = if k == 0 { 0 } else { binomial(m as u64, k as u64 - 1) };
            if work > HYPERPLANE_LIMIT {
                return Err(Error::domain(format!(
                    "full enumeration would examine {work} column sets; pass max_support"
                )));
            }
            run_in_pool(options.jobs, || circuits_by_hyperplanes(space.basis(), m))?
        }
    };
    circuits
        .into_iter()
        .map(|(support, values)| Weighting::new(ambient.select(support), values))
        .collect()
}

/// Minimal subcomplexes of `complete(n, d, nonsingular)`, grouped by
/// canonical form and sorted by (support size, simplex count, form).
pub fn enumerate_minimal(
    n: u32,
    d: usize,
    nonsingular: bool,
    options: SearchOptions,
) -> Result<Vec<CanonicalClass>> {
    let ambient = complete(n, d, nonsingular);
    if ambient.is_empty() {
        return Err(Error::domain(format!(
            "complete({n}, {d}, nonsingular = {nonsingular}) is empty"
        )));
    }
    let found = minimal_subcomplexes(&ambient, options)?;
    let mut groups: BTreeMap<Complex, Vec<Complex>> = BTreeMap::new();
    for w in found {
        let c = w.complex().clone();
        groups.entry(canonical_form(&c)).or_default().push(c);
    }
    let mut classes = groups
        .into_values()
        .map(CanonicalClass::from_instances)
        .collect::<Result<Vec<_>>>()?;
    classes.sort_by(|a, b| {
        (a.support_size(), a.representative.len(), &a.representative).cmp(&(
            b.support_size(),
            b.representative.len(),
            &b.representative,
        ))
    });
    Ok(classes)
}

/// Per-class findings of [`classify_irreducible_candidates`].
#[derive(Clone, Debug)]
pub struct ClassReport {
    pub representative: Complex,
    pub labeled_count: usize,
    pub nonsingular: bool,
    pub minimal: bool,
    /// `None` for singular classes, where product detection is not defined.
    pub is_product: Option<bool>,
    pub degree_in_range: bool,
    pub certified: bool,
    pub divisor: Option<DivisorClass>,
    /// Distinct divisor classes among the labeled instances.
    pub distinct_divisors: Option<usize>,
}

impl ClassReport {
    /// True when complexes and divisor classes are not in bijection.
    pub fn count_discrepancy(&self) -> bool {
        self.distinct_divisors.is_some_and(|d| d != self.labeled_count)
    }
}

/// Checks each class against the non-product irreducibility hypotheses:
/// nonsingular, minimal, not a product, and `d ≤ n_points − 5`.
pub fn classify_irreducible_candidates(
    classes: &[CanonicalClass],
    n_points: u32,
) -> Result<Vec<ClassReport>> {
    classes
        .iter()
        .map(|class| {
            let rep = &class.representative;
            let nonsingular = rep.is_nonsingular();
            let minimal = is_minimal(rep)?;
            let is_product = if nonsingular { Some(rep.is_product()?) } else { None };
            let degree_in_range = rep.degree() as i64 <= n_points as i64 - 5;
            let fits = rep.support().last().is_some_and(|&v| v < n_points);
            let divisor = if fits { Some(divisor_of_complex(rep, n_points)?) } else { None };
            let distinct_divisors = if fits && class.instances.iter().all(|c| c.support().last().is_some_and(|&v| v < n_points)) {
                let set = class
                    .instances
                    .iter()
                    .map(|c| divisor_of_complex(c, n_points))
                    .collect::<Result<BTreeSet<_>>>()?;
                Some(set.len())
            } else {
                None
            };
            Ok(ClassReport {
                representative: rep.clone(),
                labeled_count: class.labeled_count,
                nonsingular,
                minimal,
                is_product,
                degree_in_range,
                certified: nonsingular && minimal && is_product == Some(false) && degree_in_range,
                divisor,
                distinct_divisors,
            })
        })
        .collect()
}

fn simplex_lists(c: &Complex) -> serde_json::Value {
    c.simplices()
        .iter()
        .map(|s| s.labels().collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

/// JSON report combining classes and their classification.
pub fn report_json(classes: &[CanonicalClass], reports: &[ClassReport]) -> serde_json::Value {
    let entries: Vec<serde_json::Value> = classes
        .iter()
        .zip(reports)
        .map(|(class, r)| {
            json!({
                "representative": simplex_lists(&class.representative),
                "labeled_count": class.labeled_count,
                "dimension": class.dimension_check,
                "sample_balancing": class.sample_balancing.weights().iter().map(rational_string).collect::<Vec<_>>(),
                "divisor": r.divisor.as_ref().map(DivisorClass::to_json),
                "distinct_divisors": r.distinct_divisors,
                "count_discrepancy": r.count_discrepancy(),
                "nonsingular": r.nonsingular,
                "minimal": r.minimal,
                "is_product": r.is_product,
                "degree_in_range": r.degree_in_range,
                "certified": r.certified,
            })
        })
        .collect();
    json!({ "classes": entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balancing::{is_balanced, CheckMode};

    #[test]
    fn triangle_ambient_has_no_circuits() {
        // complete(3,1,true) is the triangle
        let classes = enumerate_minimal(3, 1, true, SearchOptions::default()).unwrap();
        assert!(classes.is_empty());
    }

    #[test]
    fn four_vertices_degree_one() {
        let classes = enumerate_minimal(4, 1, true, SearchOptions::default()).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].labeled_count, 3);
        assert_eq!(classes[0].representative.len(), 4);
    }

    #[test]
    fn both_enumerators_agree() {
        for (n, d) in [(5, 1), (6, 1)] {
            let ambient = complete(n, d, true);
            let a = minimal_subcomplexes(&ambient, SearchOptions::default()).unwrap();
            let b = minimal_subcomplexes(
                &ambient,
                SearchOptions { max_support: Some(ambient.len()), jobs: Some(2) },
            )
            .unwrap();
            let key = |ws: &[Weighting]| -> BTreeSet<(Complex, Vec<BigRational>)> {
                ws.iter().map(|w| (w.complex().clone(), w.weights().to_vec())).collect()
            };
            assert_eq!(key(&a), key(&b), "n={n} d={d}");
            for w in &a {
                assert!(w.is_nondegenerate());
                assert!(is_balanced(w, CheckMode::AllDegrees));
            }
        }
    }

    #[test]
    fn singular_ambient_needs_cap() {
        assert!(enumerate_minimal(3, 1, false, SearchOptions::default()).is_err());
        let capped = enumerate_minimal(3, 1, false, SearchOptions { max_support: Some(3), jobs: None }).unwrap();
        // {{1,1},{1,2},{2,2}} and its relabelings
        assert_eq!(capped.len(), 1);
        assert_eq!(capped[0].labeled_count, 3);
    }

    #[test]
    fn job_count_does_not_change_output() {
        let one = enumerate_minimal(6, 1, true, SearchOptions { max_support: None, jobs: Some(1) }).unwrap();
        let four = enumerate_minimal(6, 1, true, SearchOptions { max_support: None, jobs: Some(4) }).unwrap();
        let reps = |cs: &[CanonicalClass]| cs.iter().map(|c| (c.representative.clone(), c.labeled_count)).collect::<Vec<_>>();
        assert_eq!(reps(&one), reps(&four));
    }
}
