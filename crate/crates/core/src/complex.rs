//! Pure d-complexes: finite sets of d-simplices with no downward closure.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::multiset::{Multiset, Vertex};

/// A finite set of multisets of common cardinality `degree + 1`.
///
/// Simplices are kept sorted lexicographically, so a simplex's position is
/// its column index in every multiplicity matrix built from the complex.
#[derive(Clone)]
pub struct Complex {
    degree: usize,
    vertex_bound: Vertex,
    simplices: Vec<Multiset>,
}

impl Complex {
    pub fn empty(degree: usize) -> Self {
        Complex {
            degree,
            vertex_bound: 0,
            simplices: Vec::new(),
        }
    }

    /// Collects simplices of cardinality `degree + 1`; duplicates collapse.
    pub fn new(degree: usize, simplices: impl IntoIterator<Item = Multiset>) -> Result<Self> {
        let set: BTreeSet<Multiset> = simplices.into_iter().collect();
        if let Some(bad) = set.iter().find(|s| s.cardinality() != degree + 1) {
            return Err(Error::domain(format!(
                "simplex {bad} has cardinality {}, expected {}",
                bad.cardinality(),
                degree + 1
            )));
        }
        let simplices: Vec<Multiset> = set.into_iter().collect();
        let vertex_bound = simplices.iter().filter_map(Multiset::max_vertex).max().unwrap_or(0);
        Ok(Complex {
            degree,
            vertex_bound,
            simplices,
        })
    }

    /// Convenience constructor from label lists; the degree is read from the
    /// first list.
    pub fn from_lists<L: AsRef<[Vertex]>>(lists: &[L]) -> Result<Self> {
        let first = lists
            .first()
            .ok_or_else(|| Error::domain("cannot infer the degree of an empty list"))?;
        let degree = first
            .as_ref()
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::domain("simplices must be nonempty"))?;
        let simplices = lists
            .iter()
            .map(|l| Multiset::from_labels(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Complex::new(degree, simplices)
    }

    /// Widens the declared vertex range to `{1..n}`.
    pub fn with_vertex_bound(mut self, n: Vertex) -> Result<Self> {
        if n < self.vertex_bound {
            return Err(Error::domain(format!(
                "vertex bound {n} is below the largest label {}",
                self.vertex_bound
            )));
        }
        self.vertex_bound = n;
        Ok(self)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn vertex_bound(&self) -> Vertex {
        self.vertex_bound
    }

    pub fn simplices(&self) -> &[Multiset] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn index_of(&self, simplex: &Multiset) -> Option<usize> {
        self.simplices.binary_search(simplex).ok()
    }

    pub fn contains(&self, simplex: &Multiset) -> bool {
        self.index_of(simplex).is_some()
    }

    pub fn support(&self) -> Vec<Vertex> {
        let set: BTreeSet<Vertex> = self.simplices.iter().flat_map(|s| s.support()).collect();
        set.into_iter().collect()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.simplices.iter().all(Multiset::is_nonsingular)
    }

    /// Distinct facets of all simplices, sorted. Empty for the empty complex.
    pub fn facets(&self) -> Vec<Multiset> {
        self.sub_multisets_of_size(self.degree)
    }

    /// Distinct sub-multisets of the given size occurring in some simplex.
    pub fn sub_multisets_of_size(&self, size: usize) -> Vec<Multiset> {
        let set: BTreeSet<Multiset> = self
            .simplices
            .iter()
            .flat_map(|s| s.sub_multisets(size))
            .collect();
        set.into_iter().collect()
    }

    /// The subcomplex on the simplices at the given indices.
    pub fn select(&self, indices: impl IntoIterator<Item = usize>) -> Complex {
        let simplices: Vec<Multiset> = indices
            .into_iter()
            .map(|i| self.simplices[i].clone())
            .collect();
        Complex::new(self.degree, simplices)
            .expect("subsets keep cardinality")
            .with_vertex_bound(self.vertex_bound)
            .expect("subsets keep the bound")
    }

    pub fn is_subcomplex_of(&self, other: &Complex) -> bool {
        self.degree == other.degree && self.simplices.iter().all(|s| other.contains(s))
    }

    /// `{σ₁ ⊎ σ₂ : σ₁ ∈ self, σ₂ ∈ other}`, a `(d₁+d₂+1)`-complex.
    pub fn product(&self, other: &Complex) -> Complex {
        let degree = self.degree + other.degree + 1;
        let sums = self
            .simplices
            .iter()
            .flat_map(|a| other.simplices.iter().map(move |b| a.sum(b)));
        let out = Complex::new(degree, sums).expect("sums have the product cardinality");
        let bound = self.vertex_bound.max(other.vertex_bound).max(out.vertex_bound);
        out.with_vertex_bound(bound).expect("bound covers labels")
    }

    /// The link `{σ : σ ⊎ S ∈ Δ}`, a `(d − |S|)`-complex.
    pub fn link(&self, s: &Multiset) -> Result<Complex> {
        if s.cardinality() > self.degree {
            return Err(Error::domain(format!(
                "link degree underflow: |S| = {} exceeds degree {}",
                s.cardinality(),
                self.degree
            )));
        }
        let simplices: Vec<Multiset> = self
            .simplices
            .iter()
            .filter_map(|sigma| s.complement_in(sigma))
            .collect();
        Complex::new(self.degree - s.cardinality(), simplices)?.with_vertex_bound(self.vertex_bound)
    }

    /// Applies a vertex relabeling to every simplex.
    pub fn relabel(&self, map: impl Fn(Vertex) -> Vertex) -> Complex {
        let simplices: Vec<Multiset> = self.simplices.iter().map(|s| s.relabel(&map)).collect();
        let out = Complex::new(self.degree, simplices).expect("relabeling keeps cardinality");
        let bound = out.vertex_bound.max(self.vertex_bound);
        out.with_vertex_bound(bound).expect("bound covers labels")
    }

    /// For each support vertex, the other support vertices it shares a simplex with.
    pub fn neighbours(&self) -> BTreeMap<Vertex, BTreeSet<Vertex>> {
        let mut map: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
        for s in &self.simplices {
            let supp = s.support();
            for &v in &supp {
                let entry = map.entry(v).or_default();
                entry.extend(supp.iter().copied().filter(|&u| u != v));
            }
        }
        map
    }

    /// Sufficient condition for a nonsingular complex not to be a product:
    /// every vertex shares a simplex with fewer than `|Supp(Δ)|/2` other
    /// vertices. A `false` result is inconclusive.
    pub fn nonproduct_criterion(&self) -> Result<bool> {
        if self.is_empty() || !self.is_nonsingular() {
            return Err(Error::domain(
                "criterion requires nonempty nonsingular complex",
            ));
        }
        let support = self.support().len();
        Ok(self
            .neighbours()
            .values()
            .all(|nbrs| 2 * nbrs.len() < support))
    }

    /// Decides whether a nonsingular complex is a product of two complexes,
    /// returning one factorization when it is.
    ///
    /// Every bipartition of the support is tried; for a product of nonsingular
    /// factors the supports are disjoint, so each simplex splits uniquely.
    pub fn factorize(&self) -> Result<Option<(Complex, Complex)>> {
        if self.is_empty() {
            return Err(Error::domain("product detection requires a nonempty complex"));
        }
        if !self.is_nonsingular() {
            return Err(Error::domain(
                "product detection is only defined for nonsingular complexes",
            ));
        }
        let support = self.support();
        let k = support.len();
        if k < 2 {
            return Ok(None);
        }
        if k > 30 {
            return Err(Error::domain(format!(
                "product detection over {k} vertices is out of range"
            )));
        }
        let position: BTreeMap<Vertex, usize> =
            support.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let masks: Vec<u32> = self
            .simplices
            .iter()
            .map(|s| s.support().iter().fold(0u32, |m, v| m | 1 << position[v]))
            .collect();
        // The first vertex always sits in the first part, so each unordered
        // bipartition is visited once.
        let full: u32 = (1u32 << k) - 1;
        for rest in 0u32..(1u32 << (k - 1)) {
            let first = 1 | (rest << 1);
            if first == full {
                continue;
            }
            let second = full & !first;
            let size1 = (masks[0] & first).count_ones();
            let size2 = (masks[0] & second).count_ones();
            if size1 == 0 || size2 == 0 {
                continue;
            }
            if !masks
                .iter()
                .all(|&m| (m & first).count_ones() == size1 && (m & second).count_ones() == size2)
            {
                continue;
            }
            let mut left: BTreeSet<u32> = BTreeSet::new();
            let mut right: BTreeSet<u32> = BTreeSet::new();
            for &m in &masks {
                left.insert(m & first);
                right.insert(m & second);
            }
            if left.len() * right.len() != masks.len() {
                continue;
            }
            let to_complex = |parts: &BTreeSet<u32>, size: u32| {
                let simplices = parts.iter().map(|&m| {
                    let labels: Vec<Vertex> =
                        (0..k).filter(|i| m >> i & 1 == 1).map(|i| support[i]).collect();
                    Multiset::from_labels(&labels).expect("support labels are positive")
                });
                Complex::new(size as usize - 1, simplices).expect("uniform split sizes")
            };
            return Ok(Some((to_complex(&left, size1), to_complex(&right, size2))));
        }
        Ok(None)
    }

    pub fn is_product(&self) -> Result<bool> {
        Ok(self.factorize()?.is_some())
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.simplices == other.simplices
    }
}

impl Eq for Complex {}

impl Hash for Complex {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.degree.hash(state);
        self.simplices.hash(state);
    }
}

impl Ord for Complex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.simplices.cmp(&other.simplices))
    }
}

impl PartialOrd for Complex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.simplices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-complex {}", self.degree, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ms;

    fn cx(lists: &[&[Vertex]]) -> Complex {
        Complex::from_lists(lists).unwrap()
    }

    #[test]
    fn support_of_complexes() {
        assert_eq!(cx(&[&[1, 2], &[3, 3]]).support(), vec![1, 2, 3]);
        assert!(Complex::empty(2).support().is_empty());
    }

    #[test]
    fn products() {
        let four_cycle = cx(&[&[1], &[2]]).product(&cx(&[&[3], &[4]]));
        assert_eq!(four_cycle, cx(&[&[1, 3], &[1, 4], &[2, 3], &[2, 4]]));
        assert_eq!(four_cycle.degree(), 1);
        assert!(Complex::empty(0).product(&four_cycle).is_empty());
        assert_eq!(Complex::empty(0).product(&four_cycle).degree(), 2);
        // duplicate sums collapse
        let sq = cx(&[&[1], &[2]]).product(&cx(&[&[1], &[2]]));
        assert_eq!(sq, cx(&[&[1, 1], &[1, 2], &[2, 2]]));
    }

    #[test]
    fn links() {
        let triangle = cx(&[&[1, 2], &[1, 3], &[2, 3]]);
        assert_eq!(triangle.link(&ms![1]).unwrap(), cx(&[&[2], &[3]]));
        assert_eq!(cx(&[&[1, 1, 2]]).link(&ms![1]).unwrap(), cx(&[&[1, 2]]));
        assert!(triangle.link(&ms![1, 2]).is_err());
        assert!(triangle.link(&ms![1, 2, 3]).is_err());
        assert_eq!(triangle.link(&Multiset::empty()).unwrap(), triangle);
    }

    #[test]
    fn nonsingularity() {
        assert!(cx(&[&[1, 2, 3]]).is_nonsingular());
        assert!(!cx(&[&[1, 1, 2]]).is_nonsingular());
        assert!(Complex::empty(1).is_nonsingular());
    }

    #[test]
    fn four_cycle_is_a_product() {
        let four_cycle = cx(&[&[1, 3], &[1, 4], &[2, 3], &[2, 4]]);
        assert!(!four_cycle.nonproduct_criterion().unwrap());
        let (a, b) = four_cycle.factorize().unwrap().unwrap();
        assert_eq!(a.product(&b), four_cycle);
    }

    #[test]
    fn hexagon_is_not_a_product() {
        let hexagon = cx(&[&[1, 2], &[2, 3], &[3, 4], &[4, 5], &[5, 6], &[1, 6]]);
        assert!(!hexagon.is_product().unwrap());
    }

    #[test]
    fn product_detection_rejects_singular_and_empty() {
        assert!(cx(&[&[1, 1]]).is_product().is_err());
        assert!(Complex::empty(1).is_product().is_err());
        assert!(cx(&[&[1, 1]]).nonproduct_criterion().is_err());
    }

    #[test]
    fn cardinality_is_enforced() {
        assert!(Complex::new(1, vec![ms![1, 2], ms![3]]).is_err());
    }
}
