//! Canonical forms of complexes under vertex relabeling.
//!
//! The canonical form is the lexicographically least image of the complex
//! over all relabelings. Only the support matters: the minimum always uses
//! the labels `1..=k` for a support of size `k`. The minimum is found by
//! assigning labels `1, 2, ...` one vertex at a time and pruning any partial
//! assignment whose lower bound cannot beat the best image found so far.

use crate::complex::Complex;
use crate::multiset::{Multiset, Vertex};

struct Search {
    /// Simplices as `(support index, multiplicity)` lists.
    simplices: Vec<Vec<(usize, u32)>>,
    k: usize,
    best: Vec<Vec<Vertex>>,
}

impl Search {
    /// Sorted image sequences, with every unassigned vertex replaced by the
    /// smallest label it could still receive. Each sequence is a lower bound
    /// for the true image of its simplex, and sorting is monotone, so the
    /// result bounds every completion from below.
    fn bound(&self, label_of: &[Option<Vertex>], next_free: Vertex) -> Vec<Vec<Vertex>> {
        let mut images: Vec<Vec<Vertex>> = self
            .simplices
            .iter()
            .map(|s| {
                let mut seq: Vec<Vertex> = Vec::new();
                for &(v, m) in s {
                    let label = label_of[v].unwrap_or(next_free);
                    seq.extend(std::iter::repeat(label).take(m as usize));
                }
                seq.sort_unstable();
                seq
            })
            .collect();
        images.sort_unstable();
        images
    }

    fn descend(&mut self, label_of: &mut Vec<Option<Vertex>>, next: Vertex) {
        if next as usize > self.k {
            return;
        }
        let mut options: Vec<(Vec<Vec<Vertex>>, usize)> = Vec::new();
        for v in 0..self.k {
            if label_of[v].is_some() {
                continue;
            }
            label_of[v] = Some(next);
            let bound = self.bound(label_of, next + 1);
            label_of[v] = None;
            if bound < self.best {
                options.push((bound, v));
            }
        }
        options.sort();
        for (bound, v) in options {
            if bound >= self.best {
                continue;
            }
            label_of[v] = Some(next);
            if next as usize == self.k {
                self.best = bound;
            } else {
                self.descend(label_of, next + 1);
            }
            label_of[v] = None;
        }
    }
}

/// The lexicographically least relabeling of `complex`.
///
/// Two complexes are isomorphic under relabeling exactly when their canonical
/// forms are equal. The declared vertex bound is preserved.
pub fn canonical_form(complex: &Complex) -> Complex {
    let support = complex.support();
    let k = support.len();
    let simplices: Vec<Vec<(usize, u32)>> = complex
        .simplices()
        .iter()
        .map(|s| {
            s.entries()
                .iter()
                .map(|&(v, m)| (support.binary_search(&v).expect("vertex in support"), m))
                .collect()
        })
        .collect();

    // Start from the order-preserving compression onto 1..=k.
    let identity: Vec<Option<Vertex>> = (1..=k as Vertex).map(Some).collect();
    let mut search = Search {
        simplices,
        k,
        best: Vec::new(),
    };
    search.best = search.bound(&identity, k as Vertex + 1);
    let mut label_of = vec![None; k];
    search.descend(&mut label_of, 1);

    let simplices = search
        .best
        .iter()
        .map(|seq| Multiset::from_labels(seq).expect("labels start at 1"));
    let out = Complex::new(complex.degree(), simplices).expect("relabeling keeps cardinality");
    let bound = complex.vertex_bound().max(out.vertex_bound());
    out.with_vertex_bound(bound).expect("bound covers labels")
}
