//! Finite multisets of positive vertex labels.
//!
//! A `Multiset` is stored run-length encoded as `(vertex, multiplicity)` pairs
//! sorted by vertex, so structural equality is multiset equality. A d-simplex
//! is simply a multiset of cardinality d+1.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Vertex label. Labels start at 1; 0 is never a valid vertex.
pub type Vertex = u32;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Multiset {
    entries: Vec<(Vertex, u32)>,
    cardinality: usize,
}

impl Multiset {
    pub fn empty() -> Self {
        Multiset::default()
    }

    pub fn singleton(vertex: Vertex) -> Self {
        assert!(vertex > 0, "vertex labels are positive");
        Multiset {
            entries: vec![(vertex, 1)],
            cardinality: 1,
        }
    }

    /// Builds a multiset from a list of labels; repetition encodes multiplicity.
    pub fn from_labels(labels: &[Vertex]) -> Result<Self> {
        if labels.contains(&0) {
            return Err(Error::domain("vertex label 0 is reserved"));
        }
        let mut sorted = labels.to_vec();
        sorted.sort_unstable();
        Ok(Self::from_sorted_unchecked(&sorted))
    }

    /// Builds from `(vertex, multiplicity)` pairs in any order. Zero
    /// multiplicities are dropped and repeated vertices are merged.
    pub fn from_counts(counts: impl IntoIterator<Item = (Vertex, u32)>) -> Result<Self> {
        let mut pairs: Vec<(Vertex, u32)> = counts.into_iter().filter(|&(_, m)| m > 0).collect();
        if pairs.iter().any(|&(v, _)| v == 0) {
            return Err(Error::domain("vertex label 0 is reserved"));
        }
        pairs.sort_unstable();
        let mut entries: Vec<(Vertex, u32)> = Vec::with_capacity(pairs.len());
        for (v, m) in pairs {
            match entries.last_mut() {
                Some(last) if last.0 == v => last.1 += m,
                _ => entries.push((v, m)),
            }
        }
        let cardinality = entries.iter().map(|&(_, m)| m as usize).sum();
        Ok(Multiset {
            entries,
            cardinality,
        })
    }

    fn from_sorted_unchecked(sorted: &[Vertex]) -> Self {
        let mut entries: Vec<(Vertex, u32)> = Vec::new();
        for &v in sorted {
            match entries.last_mut() {
                Some(last) if last.0 == v => last.1 += 1,
                _ => entries.push((v, 1)),
            }
        }
        Multiset {
            entries,
            cardinality: sorted.len(),
        }
    }

    pub fn entries(&self) -> &[(Vertex, u32)] {
        &self.entries
    }

    pub fn cardinality(&self) -> usize {
        self.cardinality
    }

    pub fn is_empty(&self) -> bool {
        self.cardinality == 0
    }

    /// `m(v ∈ self)`.
    pub fn count(&self, vertex: Vertex) -> u32 {
        match self.entries.binary_search_by_key(&vertex, |&(v, _)| v) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0,
        }
    }

    pub fn support(&self) -> Vec<Vertex> {
        self.entries.iter().map(|&(v, _)| v).collect()
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.entries.last().map(|&(v, _)| v)
    }

    pub fn is_nonsingular(&self) -> bool {
        self.entries.iter().all(|&(_, m)| m == 1)
    }

    /// Labels in nondecreasing order, repeated according to multiplicity.
    pub fn labels(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.entries
            .iter()
            .flat_map(|&(v, m)| std::iter::repeat(v).take(m as usize))
    }

    /// Multiset sum `self ⊎ other`.
    pub fn sum(&self, other: &Multiset) -> Multiset {
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ma)), Some(&&(vb, mb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        entries.push((va, ma));
                        a.next();
                    }
                    Ordering::Greater => {
                        entries.push((vb, mb));
                        b.next();
                    }
                    Ordering::Equal => {
                        entries.push((va, ma + mb));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&e), None) => {
                    entries.push(e);
                    a.next();
                }
                (None, Some(&&e)) => {
                    entries.push(e);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Multiset {
            entries,
            cardinality: self.cardinality + other.cardinality,
        }
    }

    /// True when `self ⊆ other` as multisets.
    pub fn is_contained_in(&self, other: &Multiset) -> bool {
        self.cardinality <= other.cardinality
            && self.entries.iter().all(|&(v, m)| other.count(v) >= m)
    }

    /// `other − self`, the multiset `τ` with `self ⊎ τ = other`, if `self ⊆ other`.
    pub fn complement_in(&self, other: &Multiset) -> Option<Multiset> {
        if !self.is_contained_in(other) {
            return None;
        }
        let entries: Vec<(Vertex, u32)> = other
            .entries
            .iter()
            .filter_map(|&(v, m)| {
                let left = m - self.count(v);
                (left > 0).then_some((v, left))
            })
            .collect();
        Some(Multiset {
            entries,
            cardinality: other.cardinality - self.cardinality,
        })
    }

    /// All distinct sub-multisets of the given cardinality, in lexicographic order.
    pub fn sub_multisets(&self, size: usize) -> Vec<Multiset> {
        let mut out = Vec::new();
        if size > self.cardinality {
            return out;
        }
        let mut current: Vec<(Vertex, u32)> = Vec::new();
        self.collect_sub_multisets(0, size, &mut current, &mut out);
        out.sort();
        out
    }

    fn collect_sub_multisets(
        &self,
        idx: usize,
        remaining: usize,
        current: &mut Vec<(Vertex, u32)>,
        out: &mut Vec<Multiset>,
    ) {
        if remaining == 0 {
            out.push(Multiset {
                entries: current.clone(),
                cardinality: current.iter().map(|&(_, m)| m as usize).sum(),
            });
            return;
        }
        if idx == self.entries.len() {
            return;
        }
        let (v, m) = self.entries[idx];
        let take_max = (m as usize).min(remaining);
        for take in 0..=take_max {
            if take > 0 {
                current.push((v, take as u32));
            }
            self.collect_sub_multisets(idx + 1, remaining - take, current, out);
            if take > 0 {
                current.pop();
            }
        }
    }

    /// Distinct facets: sub-multisets of cardinality one less.
    ///
    /// The only facet of a 0-simplex is the empty multiset; the empty
    /// multiset itself has none.
    pub fn facets(&self) -> Result<Vec<Multiset>> {
        if self.is_empty() {
            return Err(Error::domain("no facets of the empty simplex"));
        }
        Ok(self.sub_multisets(self.cardinality - 1))
    }

    /// Applies a vertex relabeling. The map must send labels to positive labels.
    pub fn relabel(&self, map: impl Fn(Vertex) -> Vertex) -> Multiset {
        Multiset::from_counts(self.entries.iter().map(|&(v, m)| (map(v), m)))
            .expect("relabeling produced vertex 0")
    }
}

/// `binom(n, k)` in u64; callers stay far below overflow at desk scale.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `m(T ⊆ S) = ∏ᵢ binom(m(i∈S), m(i∈T))`; zero exactly when `T ⊄ S`.
pub fn multiplicity(t: &Multiset, s: &Multiset) -> u64 {
    t.entries
        .iter()
        .map(|&(v, m)| binomial(s.count(v) as u64, m as u64))
        .product()
}

impl Ord for Multiset {
    /// Lexicographic on the nondecreasing label sequences; a proper prefix sorts first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.labels().cmp(other.labels())
    }
}

impl PartialOrd for Multiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.labels().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shorthand for building multisets in tests and fixtures.
#[macro_export]
macro_rules! ms {
    ($($v:expr),* $(,)?) => {
        $crate::multiset::Multiset::from_labels(&[$($v),*]).expect("valid labels")
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Counts sub-multiset occurrences by choosing index subsets of the
    /// expanded sequence of `s` and comparing them to `t`.
    fn brute_multiplicity(t: &Multiset, s: &Multiset) -> u64 {
        let seq: Vec<Vertex> = s.labels().collect();
        let target: Vec<Vertex> = t.labels().collect();
        let mut count = 0;
        for mask in 0u32..(1 << seq.len()) {
            if mask.count_ones() as usize != target.len() {
                continue;
            }
            let picked: Vec<Vertex> = (0..seq.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| seq[i])
                .collect();
            if picked == target {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(brute_multiplicity(&ms![1], &ms![1, 1, 2]), 2);
        assert_eq!(multiplicity(&ms![1], &ms![1, 1, 2]), 2);
        assert_eq!(multiplicity(&Multiset::empty(), &ms![4, 4, 5]), 1);
        assert_eq!(multiplicity(&Multiset::empty(), &Multiset::empty()), 1);
        assert_eq!(brute_multiplicity(&ms![1, 2], &ms![1, 1, 2, 3]), 2);
        assert_eq!(multiplicity(&ms![1, 2], &ms![1, 1, 2, 3]), 2);
        assert_eq!(multiplicity(&ms![1, 1], &ms![1, 2]), 0);
    }

    #[test]
    fn sums() {
        assert_eq!(ms![1, 2].sum(&ms![2, 3]), ms![1, 2, 2, 3]);
        assert_eq!(Multiset::empty().sum(&ms![4, 5]), ms![4, 5]);
        assert_eq!(ms![1, 1].sum(&ms![1]), ms![1, 1, 1]);
        assert_eq!(ms![1, 1].sum(&ms![1]).cardinality(), 3);
    }

    #[test]
    fn support_and_facets() {
        assert_eq!(ms![1, 1, 3].support(), vec![1, 3]);
        assert_eq!(
            ms![1, 2, 3].facets().unwrap(),
            vec![ms![1, 2], ms![1, 3], ms![2, 3]]
        );
        assert_eq!(ms![1, 1, 2].facets().unwrap(), vec![ms![1, 1], ms![1, 2]]);
        assert_eq!(ms![5].facets().unwrap(), vec![Multiset::empty()]);
        assert!(Multiset::empty().facets().is_err());
    }

    #[test]
    fn ordering_is_lexicographic_on_sequences() {
        assert!(ms![1, 1, 2] < ms![1, 2, 2]);
        assert!(ms![1, 1] < ms![1, 2]);
        assert!(ms![1, 2] < ms![2, 2]);
        assert!(ms![1] < ms![1, 1]);
        assert!(Multiset::empty() < ms![1]);
    }

    #[test]
    fn zero_label_rejected() {
        assert!(Multiset::from_labels(&[0, 1]).is_err());
        assert!(Multiset::from_counts([(0, 2)]).is_err());
    }

    #[test]
    fn complement() {
        assert_eq!(ms![1].complement_in(&ms![1, 1, 2]), Some(ms![1, 2]));
        assert_eq!(ms![3].complement_in(&ms![1, 1, 2]), None);
    }

    fn arb_multiset(max_card: usize) -> impl Strategy<Value = Multiset> {
        prop::collection::vec(1u32..=4, 0..=max_card)
            .prop_map(|labels| Multiset::from_labels(&labels).unwrap())
    }

    proptest! {
        #[test]
        fn product_identity_for_multiplicities(
            s in arb_multiset(6), t in arb_multiset(6), u in arb_multiset(6)
        ) {
            let lhs = multiplicity(&t, &s) * multiplicity(&s, &s.sum(&u));
            let rhs = multiplicity(&t, &t.sum(&u)) * multiplicity(&t.sum(&u), &s.sum(&u));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn multiplicity_matches_brute_force(s in arb_multiset(6), t in arb_multiset(4)) {
            prop_assert_eq!(multiplicity(&t, &s), brute_multiplicity(&t, &s));
            prop_assert_eq!(multiplicity(&t, &s) == 0, !t.is_contained_in(&s));
        }

        #[test]
        fn facet_multiplicities_sum_to_cardinality(s in arb_multiset(6)) {
            prop_assume!(!s.is_empty());
            let facets = s.facets().unwrap();
            let total: u64 = facets.iter().map(|f| multiplicity(f, &s)).sum();
            prop_assert_eq!(total, s.cardinality() as u64);
            if s.is_nonsingular() {
                prop_assert_eq!(facets.len(), s.cardinality());
            }
        }
    }
}
