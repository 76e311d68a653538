//! Polynomial view of weighted complexes.
//!
//! A weighting corresponds to `P = Σ w(σ) x^σ`. It is balanced exactly when
//! `P` is fixed by the substitution `xᵢ ↦ xᵢ + y`. This module evaluates that
//! substitution symbolically and is used as an independent check of
//! [`crate::balancing::is_balanced`].

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::balancing::Weighting;
use crate::multiset::Vertex;

/// Sparse polynomial in `x_v` (v a vertex label) and one extra variable `y`.
/// A monomial is keyed by its sorted `(vertex, exponent)` list plus the
/// exponent of `y`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShiftPolynomial {
    terms: BTreeMap<(Vec<(Vertex, u32)>, u32), BigRational>,
}

impl ShiftPolynomial {
    fn add_term(&mut self, monomial: (Vec<(Vertex, u32)>, u32), coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(monomial) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `P(Δ, w)` with no `y`.
    pub fn from_weighting(weighting: &Weighting) -> Self {
        let mut p = ShiftPolynomial::default();
        for (sigma, w) in weighting.iter() {
            p.add_term((sigma.entries().to_vec(), 0), w.clone());
        }
        p
    }

    /// `P(x₁ + y, …, xₙ + y)`, expanded with Pascal-triangle coefficients.
    pub fn shifted(weighting: &Weighting) -> Self {
        let mut p = ShiftPolynomial::default();
        for (sigma, w) in weighting.iter() {
            // expand Π_v (x_v + y)^{e_v} one factor at a time
            let mut partial: BTreeMap<(Vec<(Vertex, u32)>, u32), BigInt> = BTreeMap::new();
            partial.insert((Vec::new(), 0), BigInt::from(1));
            for &(v, e) in sigma.entries() {
                let row = pascal_row(e);
                let mut next = BTreeMap::new();
                for ((xs, ydeg), c) in &partial {
                    for (k, coeff) in row.iter().enumerate() {
                        // x_v^{e-k} y^k
                        let mut xs = xs.clone();
                        let xe = e - k as u32;
                        if xe > 0 {
                            xs.push((v, xe));
                        }
                        *next
                            .entry((xs, ydeg + k as u32))
                            .or_insert_with(BigInt::zero) += c * coeff;
                    }
                }
                partial = next;
            }
            for (monomial, c) in partial {
                p.add_term(monomial, w * BigRational::from_integer(c));
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

fn pascal_row(e: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1)];
    for _ in 0..e {
        let mut next = vec![BigInt::from(1); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row
}

/// Balanced iff the polynomial is invariant under `xᵢ ↦ xᵢ + y`.
pub fn oracle_is_balanced(weighting: &Weighting) -> bool {
    ShiftPolynomial::shifted(weighting) == ShiftPolynomial::from_weighting(weighting)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Complex;

    #[test]
    fn alternating_hexagon_is_invariant() {
        let c = Complex::from_lists(&[[1, 2], [1, 6], [2, 3], [3, 4], [4, 5], [5, 6]]).unwrap();
        let w = Weighting::from_integers(c, &[1, -1, -1, 1, -1, 1]).unwrap();
        assert!(oracle_is_balanced(&w));
    }

    #[test]
    fn single_simplex_moves() {
        let c = Complex::from_lists(&[[1, 2]]).unwrap();
        assert!(!oracle_is_balanced(&Weighting::from_integers(c, &[1]).unwrap()));
    }

    #[test]
    fn zero_weighting_is_invariant() {
        let c = Complex::from_lists(&[[1, 1, 2], [2, 3, 3]]).unwrap();
        assert!(oracle_is_balanced(&Weighting::zero(c)));
    }

    #[test]
    fn pascal() {
        assert_eq!(pascal_row(3), vec![1, 3, 3, 1].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }

    #[test]
    fn squared_difference_is_invariant() {
        // (x1 - x2)^2 = x1^2 - 2 x1 x2 + x2^2
        let c = Complex::from_lists(&[[1, 1], [1, 2], [2, 2]]).unwrap();
        let w = Weighting::from_integers(c, &[1, -2, 1]).unwrap();
        assert!(oracle_is_balanced(&w));
    }
}
