//! Weightings, the balancing condition and balancing spaces.
//!
//! A weighting `w` on a d-complex is balanced when for every multiset `S`
//! with `|S| ≤ d`
//!
//! ```text
//! Σ_{σ ⊇ S} w(σ) · m(S ⊆ σ) = 0.
//! ```
//!
//! Over the rationals it is enough to check `|S| = d`: balance in degree `j`
//! implies balance in degree `j − 1`. The space of balancings is therefore
//! the kernel of the multiplicity matrix with the facets as rows.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::linalg;
use crate::multiset::{multiplicity, Multiset};

/// Exact weights attached to the simplices of a complex, in simplex order.
#[derive(Clone, PartialEq, Eq)]
pub struct Weighting {
    complex: Complex,
    weights: Vec<BigRational>,
}

impl Weighting {
    pub fn new(complex: Complex, weights: Vec<BigRational>) -> Result<Self> {
        if complex.len() != weights.len() {
            return Err(Error::domain(format!(
                "{} weights given for {} simplices",
                weights.len(),
                complex.len()
            )));
        }
        Ok(Weighting { complex, weights })
    }

    /// Builds a weighting from `(simplex, weight)` pairs. Repeated simplices
    /// have their weights added.
    pub fn from_pairs(
        degree: usize,
        pairs: impl IntoIterator<Item = (Multiset, BigRational)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Multiset, BigRational> = BTreeMap::new();
        for (s, w) in pairs {
            *map.entry(s).or_insert_with(BigRational::zero) += w;
        }
        let complex = Complex::new(degree, map.keys().cloned())?;
        let weights = map.into_values().collect();
        Ok(Weighting { complex, weights })
    }

    pub fn from_integers(complex: Complex, weights: &[i64]) -> Result<Self> {
        let weights = weights
            .iter()
            .map(|&w| BigRational::from_integer(BigInt::from(w)))
            .collect();
        Weighting::new(complex, weights)
    }

    pub fn zero(complex: Complex) -> Self {
        let weights = vec![BigRational::zero(); complex.len()];
        Weighting { complex, weights }
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn weight(&self, simplex: &Multiset) -> Option<&BigRational> {
        self.complex.index_of(simplex).map(|i| &self.weights[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Multiset, &BigRational)> {
        self.complex.simplices().iter().zip(&self.weights)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.weights.iter().all(|w| !w.is_zero())
    }

    /// Simplices carrying weight zero. Product weightings can produce these
    /// even from nondegenerate factors.
    pub fn zero_simplices(&self) -> Vec<&Multiset> {
        self.iter()
            .filter(|(_, w)| w.is_zero())
            .map(|(s, _)| s)
            .collect()
    }

    pub fn scaled(&self, factor: &BigRational) -> Weighting {
        Weighting {
            complex: self.complex.clone(),
            weights: self.weights.iter().map(|w| w * factor).collect(),
        }
    }

    /// Drops zero-weight simplices.
    pub fn restrict_to_support(&self) -> Weighting {
        let keep: Vec<usize> = (0..self.weights.len())
            .filter(|&i| !self.weights[i].is_zero())
            .collect();
        Weighting {
            complex: self.complex.select(keep.iter().copied()),
            weights: keep.iter().map(|&i| self.weights[i].clone()).collect(),
        }
    }

    /// This weighting extended by zero to a larger complex.
    pub fn extend_to(&self, ambient: &Complex) -> Result<Weighting> {
        if !self.complex.is_subcomplex_of(ambient) {
            return Err(Error::domain("weighting is not supported on the ambient complex"));
        }
        let mut weights = vec![BigRational::zero(); ambient.len()];
        for (s, w) in self.iter() {
            weights[ambient.index_of(s).expect("subcomplex")] = w.clone();
        }
        Ok(Weighting {
            complex: ambient.clone(),
            weights,
        })
    }
}

impl fmt::Debug for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter()).finish()
    }
}

/// `M(Δ, S)` with entry `(i, j) = m(τᵢ ⊆ σⱼ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityMatrix {
    rows: Vec<Multiset>,
    columns: Vec<Multiset>,
    entries: Vec<Vec<u64>>,
}

impl MultiplicityMatrix {
    /// Columns follow the complex's (lexicographic) simplex order; rows follow
    /// the order the caller supplies.
    pub fn new(complex: &Complex, rows: &[Multiset]) -> Result<Self> {
        if complex.is_empty() {
            return Err(Error::domain("multiplicity matrix of an empty complex"));
        }
        if rows.is_empty() {
            return Err(Error::domain("multiplicity matrix with no rows"));
        }
        let columns = complex.simplices().to_vec();
        let entries = rows
            .iter()
            .map(|t| columns.iter().map(|s| multiplicity(t, s)).collect())
            .collect();
        Ok(MultiplicityMatrix {
            rows: rows.to_vec(),
            columns,
            entries,
        })
    }

    pub fn rows(&self) -> &[Multiset] {
        &self.rows
    }

    pub fn columns(&self) -> &[Multiset] {
        &self.columns
    }

    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn to_bigint(&self) -> Vec<Vec<BigInt>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.to_bigint(), self.columns.len())
    }

    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        linalg::kernel_basis(&self.to_bigint(), self.columns.len())
    }
}

/// Which balancing conditions to impose.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Degree d only (the facets).
    Facets,
    /// Every degree 0..=d.
    AllDegrees,
}

/// Row multisets for the given mode: only those contained in some simplex,
/// since every other row of the multiplicity matrix is zero.
pub fn condition_multisets(complex: &Complex, mode: CheckMode) -> Vec<Multiset> {
    match mode {
        CheckMode::Facets => complex.facets(),
        CheckMode::AllDegrees => {
            let mut rows = Vec::new();
            for size in 0..=complex.degree() {
                rows.extend(complex.sub_multisets_of_size(size));
            }
            rows
        }
    }
}

#[derive(Clone, Debug)]
pub struct BalancingSpace {
    complex: Complex,
    basis: Vec<Vec<BigRational>>,
}

impl BalancingSpace {
    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    /// Basis vectors indexed by simplex order, each a primitive integer
    /// vector with positive leading entry.
    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_weightings(&self) -> Vec<Weighting> {
        self.basis
            .iter()
            .map(|v| Weighting::new(self.complex.clone(), v.clone()).expect("basis length"))
            .collect()
    }

    /// Whether some balancing is nonzero on simplex `index`.
    pub fn coordinate_is_free(&self, index: usize) -> bool {
        self.basis.iter().any(|v| !v[index].is_zero())
    }
}

/// The space of rational balancings of a nonempty complex.
pub fn balancing_space(complex: &Complex) -> Result<BalancingSpace> {
    balancing_space_with(complex, CheckMode::Facets)
}

/// As [`balancing_space`], imposing the conditions of `mode`. Both modes give
/// the same space.
pub fn balancing_space_with(complex: &Complex, mode: CheckMode) -> Result<BalancingSpace> {
    if complex.is_empty() {
        return Err(Error::domain("balancing space of an empty complex"));
    }
    let rows = condition_multisets(complex, mode);
    let matrix = MultiplicityMatrix::new(complex, &rows)?;
    let basis = matrix
        .kernel_basis()
        .iter()
        .map(|v| linalg::primitive(v))
        .collect();
    Ok(BalancingSpace {
        complex: complex.clone(),
        basis,
    })
}

/// The balancing sum `Σ_{σ ⊇ S} w(σ) m(S ⊆ σ)` for one multiset.
pub fn balancing_sum(weighting: &Weighting, s: &Multiset) -> BigRational {
    let mut acc = BigRational::zero();
    for (sigma, w) in weighting.iter() {
        let m = multiplicity(s, sigma);
        if m != 0 && !w.is_zero() {
            acc += w * BigRational::from_integer(BigInt::from(m));
        }
    }
    acc
}

/// Multisets whose balancing sum is nonzero, with the offending sums.
pub fn violations(weighting: &Weighting, mode: CheckMode) -> Vec<(Multiset, BigRational)> {
    condition_multisets(weighting.complex(), mode)
        .into_iter()
        .filter_map(|s| {
            let sum = balancing_sum(weighting, &s);
            (!sum.is_zero()).then_some((s, sum))
        })
        .collect()
}

pub fn is_balanced(weighting: &Weighting, mode: CheckMode) -> bool {
    condition_multisets(weighting.complex(), mode)
        .iter()
        .all(|s| balancing_sum(weighting, s).is_zero())
}

/// A balancing with no zero weight, if one exists.
///
/// With kernel basis `v₁..v_k`, the witness is `Σ t^{j−1} v_j` for the
/// smallest positive integer `t` leaving every coordinate nonzero. Each
/// coordinate is a nonzero polynomial in `t` of degree below `k`, so such a
/// `t` exists whenever every coordinate is free.
pub fn find_nondegenerate(complex: &Complex) -> Result<Option<Weighting>> {
    if complex.is_empty() {
        return Ok(None);
    }
    let space = balancing_space(complex)?;
    if !(0..complex.len()).all(|i| space.coordinate_is_free(i)) {
        return Ok(None);
    }
    let mut t: i64 = 1;
    loop {
        let tq = BigRational::from_integer(BigInt::from(t));
        let mut power = BigRational::one();
        let mut witness = vec![BigRational::zero(); complex.len()];
        for v in space.basis() {
            for (acc, x) in witness.iter_mut().zip(v) {
                *acc += &power * x;
            }
            power *= &tq;
        }
        if witness.iter().all(|x| !x.is_zero()) {
            return Ok(Some(Weighting::new(complex.clone(), witness)?));
        }
        t += 1;
    }
}

/// Minimal: nondegenerately balanceable with a one-dimensional balancing space.
pub fn is_minimal(complex: &Complex) -> Result<bool> {
    if complex.is_empty() {
        return Err(Error::domain("minimality of an empty complex"));
    }
    let space = balancing_space(complex)?;
    Ok(space.dimension() == 1 && space.basis()[0].iter().all(|x| !x.is_zero()))
}

/// Induced weighting on the link: `w*_S(σ) = w(σ ⊎ S) · m(σ ⊆ σ ⊎ S)`.
pub fn link_weighting(weighting: &Weighting, s: &Multiset) -> Result<Weighting> {
    let link = weighting.complex().link(s)?;
    let weights = link
        .simplices()
        .iter()
        .map(|sigma| {
            let up = sigma.sum(s);
            let w = weighting.weight(&up).expect("link simplex lifts into the complex");
            w * BigRational::from_integer(BigInt::from(multiplicity(sigma, &up)))
        })
        .collect();
    Weighting::new(link, weights)
}

/// Product weighting `w(σ) = Σ_{σ = σ₁ ⊎ σ₂} w₁(σ₁) w₂(σ₂)` on the product
/// complex. Simplices whose contributions cancel keep weight zero; see
/// [`Weighting::zero_simplices`].
pub fn product_weighting(left: &Weighting, right: &Weighting) -> Weighting {
    let product = left.complex().product(right.complex());
    let mut weights = vec![BigRational::zero(); product.len()];
    for (a, wa) in left.iter() {
        for (b, wb) in right.iter() {
            let idx = product.index_of(&a.sum(b)).expect("sum lies in the product");
            weights[idx] += wa * wb;
        }
    }
    Weighting {
        complex: product,
        weights,
    }
}

/// Largest subcomplex carrying a nondegenerate balancing: repeatedly drops
/// every simplex on which all balancings vanish. Empty if nothing survives.
pub fn prune_degenerate(complex: &Complex) -> Result<Complex> {
    let mut current = complex.clone();
    loop {
        if current.is_empty() {
            return Ok(current);
        }
        let space = balancing_space(&current)?;
        let keep: Vec<usize> = (0..current.len())
            .filter(|&i| space.coordinate_is_free(i))
            .collect();
        if keep.len() == current.len() {
            return Ok(current);
        }
        current = current.select(keep);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ms;
    use crate::multiset::Vertex;

    fn cx(lists: &[&[Vertex]]) -> Complex {
        Complex::from_lists(lists).unwrap()
    }

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn hexagon() -> Complex {
        cx(&[&[1, 2], &[2, 3], &[3, 4], &[4, 5], &[5, 6], &[1, 6]])
    }

    fn triangle() -> Complex {
        cx(&[&[1, 2], &[1, 3], &[2, 3]])
    }

    /// Alternating ±1 around the cycle 1-2-3-4-5-6-1.
    fn balanced_hexagon() -> Weighting {
        let cycle = [[1, 2], [2, 3], [3, 4], [4, 5], [5, 6], [6, 1]];
        Weighting::from_pairs(
            1,
            cycle
                .iter()
                .enumerate()
                .map(|(i, e)| (ms![e[0], e[1]], q(if i % 2 == 0 { 1 } else { -1 }))),
        )
        .unwrap()
    }

    #[test]
    fn multiplicity_matrix_of_complete_degree_one() {
        let c = cx(&[&[1, 1], &[1, 2], &[2, 2]]);
        let m = MultiplicityMatrix::new(&c, &[ms![1], ms![2]]).unwrap();
        assert_eq!(m.entries(), &[vec![2, 1, 0], vec![0, 1, 2]]);
        let single = MultiplicityMatrix::new(&cx(&[&[1, 2, 3]]), &[Multiset::empty()]).unwrap();
        assert_eq!(single.entries(), &[vec![1]]);
        let m = MultiplicityMatrix::new(&cx(&[&[1, 1, 2]]), &[ms![1]]).unwrap();
        assert_eq!(m.entries(), &[vec![2]]);
        assert!(MultiplicityMatrix::new(&Complex::empty(1), &[ms![1]]).is_err());
        assert!(MultiplicityMatrix::new(&c, &[]).is_err());
    }

    #[test]
    fn triangle_has_no_balancings() {
        assert_eq!(balancing_space(&triangle()).unwrap().dimension(), 0);
        assert!(find_nondegenerate(&triangle()).unwrap().is_none());
        assert!(prune_degenerate(&triangle()).unwrap().is_empty());
    }

    #[test]
    fn hexagon_space_is_one_dimensional() {
        let space = balancing_space(&hexagon()).unwrap();
        assert_eq!(space.dimension(), 1);
        // simplex order {1,2},{1,6},{2,3},{3,4},{4,5},{5,6}
        assert_eq!(
            space.basis()[0],
            vec![q(1), q(-1), q(-1), q(1), q(-1), q(1)]
        );
        assert!(is_minimal(&hexagon()).unwrap());
        assert_eq!(prune_degenerate(&hexagon()).unwrap(), hexagon());
    }

    #[test]
    fn balance_checks() {
        let w = balanced_hexagon();
        assert!(is_balanced(&w, CheckMode::Facets));
        assert!(is_balanced(&w, CheckMode::AllDegrees));
        assert!(is_balanced(&w.scaled(&q(0)), CheckMode::AllDegrees));
        let t = Weighting::from_integers(triangle(), &[1, 1, 1]).unwrap();
        assert!(!is_balanced(&t, CheckMode::Facets));
        let bad = violations(&t, CheckMode::Facets);
        assert_eq!(bad[0], (ms![1], q(2)));
    }

    #[test]
    fn hexagon_with_chord_is_not_balanceable() {
        let mut simplices: Vec<Multiset> = hexagon().simplices().to_vec();
        simplices.push(ms![1, 3]);
        let c = Complex::new(1, simplices).unwrap();
        assert!(find_nondegenerate(&c).unwrap().is_none());
        assert_eq!(prune_degenerate(&c).unwrap(), hexagon());
    }

    #[test]
    fn link_weightings() {
        let w = Weighting::from_integers(cx(&[&[1, 1, 2]]), &[1]).unwrap();
        let l = link_weighting(&w, &ms![1]).unwrap();
        assert_eq!(l.weight(&ms![1, 2]), Some(&q(2)));

        let l = link_weighting(&balanced_hexagon(), &ms![1]).unwrap();
        assert_eq!(l.complex(), &cx(&[&[2], &[6]]));
        assert_eq!(l.weights(), &[q(1), q(-1)]);
        assert!(is_balanced(&l, CheckMode::AllDegrees));

        let same = link_weighting(&balanced_hexagon(), &Multiset::empty()).unwrap();
        assert_eq!(same, balanced_hexagon());
        assert!(link_weighting(&balanced_hexagon(), &ms![1, 2]).is_err());
    }

    #[test]
    fn product_weightings() {
        let a = Weighting::from_integers(cx(&[&[1], &[2]]), &[1, -1]).unwrap();
        let b = Weighting::from_integers(cx(&[&[3], &[4]]), &[1, -1]).unwrap();
        let p = product_weighting(&a, &b);
        // {1,3},{1,4},{2,3},{2,4}
        assert_eq!(p.weights(), &[q(1), q(-1), q(-1), q(1)]);
        assert!(is_balanced(&p, CheckMode::AllDegrees));

        let zero = product_weighting(&a, &Weighting::zero(cx(&[&[3], &[4]])));
        assert!(zero.weights().iter().all(Zero::is_zero));

        let plus = Weighting::from_integers(cx(&[&[1], &[2]]), &[1, 1]).unwrap();
        let p = product_weighting(&a, &plus);
        assert_eq!(p.weights(), &[q(1), q(0), q(-1)]);
        assert_eq!(p.zero_simplices(), vec![&ms![1, 2]]);
        assert!(!p.is_nondegenerate());
    }

    #[test]
    fn complete_degree_one_on_three_vertices() {
        let c = cx(&[&[1, 1], &[1, 2], &[1, 3], &[2, 2], &[2, 3], &[3, 3]]);
        let space = balancing_space(&c).unwrap();
        assert_eq!(space.dimension(), 3);
        assert!(!is_minimal(&c).unwrap());
        let full = balancing_space_with(&c, CheckMode::AllDegrees).unwrap();
        assert_eq!(full.basis(), space.basis());
        for w in space.basis_weightings() {
            assert!(is_balanced(&w, CheckMode::AllDegrees));
        }
    }

    #[test]
    fn empty_inputs() {
        assert!(balancing_space(&Complex::empty(1)).is_err());
        assert!(find_nondegenerate(&Complex::empty(1)).unwrap().is_none());
        assert!(is_minimal(&Complex::empty(1)).is_err());
        assert!(prune_degenerate(&Complex::empty(1)).unwrap().is_empty());
    }
}
